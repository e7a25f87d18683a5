//! Weight-vector valuations on a coordinatized variety: shifted weights,
//! chart log discrepancies, G-functions on the Okounkov body, S-invariants,
//! and piecewise delta maps on the co-weight plane.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::affine::AffineFunction;
use crate::exact::rational::{Rat, rat_str};
use crate::polytope::{Halfspace, Polytope, PolytopeError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValuationError {
    /// Chart denominator does not attain the shifted-weight minimum.
    ChartNotCentered { chart: String, denominator: String },
    /// G-function disagrees with the shifted weight at a coordinate.
    GFunctionMismatch { coordinate: String, expected: String, got: String },
    /// Point arity or coordinate bookkeeping is off.
    BadInput(String),
    /// The delta map is asked at the origin.
    Origin,
    /// No region cone contains the query point.
    CoverageGap { point: String },
    Polytope(PolytopeError),
}

impl std::fmt::Display for ValuationError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ValuationError::ChartNotCentered { chart, denominator } => write!(
                f,
                "chart `{chart}`: denominator `{denominator}` does not attain the weight minimum"
            ),
            ValuationError::GFunctionMismatch {
                coordinate,
                expected,
                got,
            } => write!(
                f,
                "G-function takes value {got} at the image of `{coordinate}`, expected {expected}"
            ),
            ValuationError::BadInput(m) => write!(f, "bad input: {m}"),
            ValuationError::Origin => write!(f, "delta map is undefined at the origin"),
            ValuationError::CoverageGap { point } => {
                write!(f, "no delta region contains the ray through {point}")
            }
            ValuationError::Polytope(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ValuationError {}

impl From<PolytopeError> for ValuationError {
    fn from(e: PolytopeError) -> Self {
        ValuationError::Polytope(e)
    }
}

/// Ambient coordinates, their images in the Okounkov body, and the body
/// itself with the polarization degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateSystem {
    names: Vec<String>,
    images: Vec<Vec<Rat>>,
    origin: usize,
    basis: Vec<usize>,
    body: Polytope,
    body_volume: Rat,
    polarization: Rat,
}

impl CoordinateSystem {
    /// `names[i]` maps to `images[i]`; exactly one image must be the origin
    /// and the images of the designated basis coordinates the standard basis.
    pub fn new(
        names: Vec<String>,
        images: Vec<Vec<Rat>>,
        body: Polytope,
        polarization: Rat,
    ) -> Result<Self, ValuationError> {
        if names.len() != images.len() {
            return Err(ValuationError::BadInput(
                "one image per coordinate required".into(),
            ));
        }
        let dim = body.dim();
        if images.iter().any(|v| v.len() != dim) {
            return Err(ValuationError::BadInput(
                "image dimension differs from the body".into(),
            ));
        }
        let origins: Vec<usize> = (0..names.len())
            .filter(|&i| images[i].iter().all(|c| c.is_zero()))
            .collect();
        let [origin] = origins.as_slice() else {
            return Err(ValuationError::BadInput(format!(
                "expected exactly one coordinate at the origin, found {}",
                origins.len()
            )));
        };
        let mut basis = Vec::new();
        for k in 0..dim {
            let mut e = vec![Rat::zero(); dim];
            e[k] = Rat::one();
            let found = (0..names.len()).find(|&i| images[i] == e).ok_or_else(|| {
                ValuationError::BadInput(format!("no coordinate maps to basis vector {k}"))
            })?;
            basis.push(found);
        }
        let body_volume = body.volume();
        Ok(CoordinateSystem {
            names,
            images,
            origin: *origin,
            basis,
            body,
            body_volume,
            polarization,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn images(&self) -> &[Vec<Rat>] {
        &self.images
    }

    pub fn body(&self) -> &Polytope {
        &self.body
    }

    pub fn body_volume(&self) -> &Rat {
        &self.body_volume
    }

    pub fn polarization(&self) -> &Rat {
        &self.polarization
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// A weight per coordinate, with an optional co-weight lattice tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    pub weights: Vec<Rat>,
    pub lattice: Option<(Rat, Rat)>,
}

/// Shifted weight: minimum moved to zero, minimizer set recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftedWeight {
    pub values: Vec<Rat>,
    pub minimizers: BTreeSet<usize>,
}

/// Subtract the minimum entry so the smallest shifted weight is zero.
pub fn shift_weight(weights: &[Rat]) -> ShiftedWeight {
    assert!(!weights.is_empty(), "empty weight vector");
    let min = weights.iter().min().unwrap().clone();
    let values: Vec<Rat> = weights.iter().map(|w| w.clone() - min.clone()).collect();
    let minimizers = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_zero())
        .map(|(i, _)| i)
        .collect();
    ShiftedWeight { values, minimizers }
}

/// An affine chart: the coordinate dividing, and the free coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    pub name: String,
    pub denominator: usize,
    pub coords: Vec<usize>,
}

/// Log discrepancy of a monomial valuation: the sum of the shifted weights
/// over the chart coordinates. The chart denominator must attain the
/// shifted-weight minimum.
pub fn log_discrepancy(
    shifted: &ShiftedWeight,
    chart: &Chart,
    names: &[String],
) -> Result<Rat, ValuationError> {
    if !shifted.minimizers.contains(&chart.denominator) {
        return Err(ValuationError::ChartNotCentered {
            chart: chart.name.clone(),
            denominator: names[chart.denominator].clone(),
        });
    }
    Ok(chart
        .coords
        .iter()
        .map(|&i| shifted.values[i].clone())
        .sum())
}

/// The affine function on the body taking the shifted weight at the origin
/// coordinate and at each basis coordinate, validated against every
/// remaining coordinate image.
pub fn g_function(
    shifted: &ShiftedWeight,
    cs: &CoordinateSystem,
) -> Result<AffineFunction, ValuationError> {
    let constant = shifted.values[cs.origin].clone();
    let coeffs: Vec<Rat> = cs
        .basis
        .iter()
        .map(|&i| shifted.values[i].clone() - constant.clone())
        .collect();
    let g = AffineFunction::new(coeffs, constant);
    for (i, image) in cs.images.iter().enumerate() {
        let got = g.eval(image);
        if got != shifted.values[i] {
            return Err(ValuationError::GFunctionMismatch {
                coordinate: cs.names[i].clone(),
                expected: rat_str(&shifted.values[i]),
                got: rat_str(&got),
            });
        }
    }
    Ok(g)
}

/// `r · ∫_Δ G / vol(Δ)`, exactly.
pub fn s_invariant(g: &AffineFunction, cs: &CoordinateSystem) -> Result<Rat, ValuationError> {
    let dim = cs.body.dim();
    let vars: Vec<String> = (0..dim).map(|i| format!("x{i}")).collect();
    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let integral = cs.body.integrate(&g.to_poly(&var_refs))?;
    Ok(cs.polarization.clone() * integral / cs.body_volume.clone())
}

/// One homogeneous region of a delta map: a plane cone with homogeneous
/// linear numerator (log discrepancy) and denominator (S-invariant) forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaRegion {
    pub label: String,
    /// Cone constraints `normal·(a,b) ≤ 0`.
    pub cone: Vec<Halfspace>,
    /// Coefficients of the homogeneous numerator form A(a,b).
    pub a_form: (Rat, Rat),
    /// Coefficients of the homogeneous denominator form S(a,b).
    pub s_form: (Rat, Rat),
}

impl DeltaRegion {
    pub fn contains(&self, p: &(Rat, Rat)) -> bool {
        self.cone.iter().all(|h| {
            let dot = h.normal[0].clone() * p.0.clone() + h.normal[1].clone() * p.1.clone();
            !dot.is_positive()
        })
    }

    fn eval_form(form: &(Rat, Rat), p: &(Rat, Rat)) -> Rat {
        form.0.clone() * p.0.clone() + form.1.clone() * p.1.clone()
    }

    pub fn a_at(&self, p: &(Rat, Rat)) -> Rat {
        Self::eval_form(&self.a_form, p)
    }

    pub fn s_at(&self, p: &(Rat, Rat)) -> Rat {
        Self::eval_form(&self.s_form, p)
    }

    /// Extreme rays of the cone as primitive integer vectors.
    pub fn extreme_rays(&self) -> Vec<(BigInt, BigInt)> {
        let mut rays = Vec::new();
        for h in &self.cone {
            let candidates = [
                (h.normal[1].clone(), -h.normal[0].clone()),
                (-h.normal[1].clone(), h.normal[0].clone()),
            ];
            for (x, y) in candidates {
                let p = (x, y);
                if p.0.is_zero() && p.1.is_zero() {
                    continue;
                }
                if self.contains(&p) {
                    let prim = primitive_ray(&p);
                    if !rays.contains(&prim) {
                        rays.push(prim);
                    }
                }
            }
        }
        rays
    }
}

/// Scale a nonzero rational direction to coprime integers, keeping the
/// direction.
pub fn primitive_ray(p: &(Rat, Rat)) -> (BigInt, BigInt) {
    let lcm = p.0.denom().lcm(p.1.denom());
    let x = p.0.numer() * &lcm / p.0.denom();
    let y = p.1.numer() * &lcm / p.1.denom();
    let g = x.gcd(&y);
    if g.is_zero() {
        (BigInt::zero(), BigInt::zero())
    } else {
        (x / &g, y / &g)
    }
}

/// Piecewise linear-fractional delta function on the co-weight plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaMap {
    pub regions: Vec<DeltaRegion>,
    pub scale: Rat,
}

impl DeltaMap {
    /// Value `scale · A(p)/S(p)` of the region containing `p`.
    pub fn delta_at(&self, p: &(Rat, Rat)) -> Result<Rat, ValuationError> {
        if p.0.is_zero() && p.1.is_zero() {
            return Err(ValuationError::Origin);
        }
        for region in &self.regions {
            if region.contains(p) {
                let s = region.s_at(p);
                if s.is_zero() {
                    return Err(ValuationError::BadInput(format!(
                        "S-form of region `{}` vanishes on the ray through ({}, {})",
                        region.label,
                        rat_str(&p.0),
                        rat_str(&p.1),
                    )));
                }
                return Ok(self.scale.clone() * region.a_at(p) / s);
            }
        }
        Err(ValuationError::CoverageGap {
            point: format!("({}, {})", rat_str(&p.0), rat_str(&p.1)),
        })
    }

    /// Minimum of the delta function over all nonzero rays, with the set of
    /// minimizing primitive rays. A ratio of homogeneous linear forms on a
    /// cone attains its extrema on extreme rays, so candidates are exactly
    /// the regions' extreme rays.
    pub fn minimize(&self) -> Result<(Rat, Vec<(BigInt, BigInt)>), ValuationError> {
        self.minimize_over(&(0..self.regions.len()).collect::<Vec<_>>())
    }

    /// Minimum over a subset of regions (same extreme-ray argument).
    pub fn minimize_over(
        &self,
        region_indices: &[usize],
    ) -> Result<(Rat, Vec<(BigInt, BigInt)>), ValuationError> {
        let mut best: Option<Rat> = None;
        let mut argmin: Vec<(BigInt, BigInt)> = Vec::new();
        for &ri in region_indices {
            let region = &self.regions[ri];
            for ray in region.extreme_rays() {
                let p = (
                    Rat::from_integer(ray.0.clone()),
                    Rat::from_integer(ray.1.clone()),
                );
                let s = region.s_at(&p);
                if s.is_zero() {
                    return Err(ValuationError::BadInput(format!(
                        "S-form of region `{}` vanishes on an extreme ray",
                        region.label
                    )));
                }
                let value = self.scale.clone() * region.a_at(&p) / s;
                match &best {
                    Some(b) if value > *b => {}
                    Some(b) if value == *b => {
                        if !argmin.contains(&ray) {
                            argmin.push(ray);
                        }
                    }
                    _ => {
                        best = Some(value);
                        argmin = vec![ray];
                    }
                }
            }
        }
        let best = best.ok_or_else(|| ValuationError::BadInput("no regions".into()))?;
        argmin.sort();
        Ok((best, argmin))
    }

    /// An interior rational point of each region (sum of its extreme rays).
    pub fn region_interior_samples(&self) -> Vec<Vec<(Rat, Rat)>> {
        self.regions
            .iter()
            .map(|r| {
                let rays = r.extreme_rays();
                let mut samples = Vec::new();
                if rays.len() >= 2 {
                    for (wa, wb) in [(1, 1), (2, 1), (1, 2)] {
                        let p = (
                            Rat::from_integer(rays[0].0.clone() * BigInt::from(wa))
                                + Rat::from_integer(rays[1].0.clone() * BigInt::from(wb)),
                            Rat::from_integer(rays[0].1.clone() * BigInt::from(wa))
                                + Rat::from_integer(rays[1].1.clone() * BigInt::from(wb)),
                        );
                        if r.contains(&p) {
                            samples.push(p);
                        }
                    }
                }
                samples
            })
            .collect()
    }

    /// Structural validation: two-dimensional homogeneous sector cones,
    /// strictly positive forms on region interiors, full plane coverage, and
    /// exact agreement of values on shared boundary rays.
    pub fn validate(&self) -> Result<(), ValuationError> {
        if self.regions.is_empty() {
            return Err(ValuationError::BadInput("delta map has no regions".into()));
        }
        if !self.scale.is_positive() {
            return Err(ValuationError::BadInput("delta scale must be positive".into()));
        }
        let mut all_rays: Vec<(BigInt, BigInt)> = Vec::new();
        for region in &self.regions {
            for h in &region.cone {
                if h.normal.len() != 2 {
                    return Err(ValuationError::BadInput(
                        "delta region cones live in the plane".into(),
                    ));
                }
                if !h.offset.is_zero() {
                    return Err(ValuationError::BadInput(format!(
                        "region `{}` has a non-homogeneous cone constraint",
                        region.label
                    )));
                }
            }
            let rays = region.extreme_rays();
            if rays.len() < 2 {
                return Err(ValuationError::BadInput(format!(
                    "region `{}` is not a full sector",
                    region.label
                )));
            }
            for ray in &rays {
                if !all_rays.contains(ray) {
                    all_rays.push(ray.clone());
                }
                let p = (
                    Rat::from_integer(ray.0.clone()),
                    Rat::from_integer(ray.1.clone()),
                );
                if !region.s_at(&p).is_positive() || region.a_at(&p).is_negative() {
                    return Err(ValuationError::BadInput(format!(
                        "region `{}` has a non-positive form on an extreme ray",
                        region.label
                    )));
                }
            }
            // strict positivity in the interior
            let interior = (
                Rat::from_integer(rays[0].0.clone() + rays[1].0.clone()),
                Rat::from_integer(rays[0].1.clone() + rays[1].1.clone()),
            );
            if !region.a_at(&interior).is_positive() || !region.s_at(&interior).is_positive() {
                return Err(ValuationError::BadInput(format!(
                    "region `{}` has a non-positive form on its interior",
                    region.label
                )));
            }
        }
        // coverage: between consecutive rays (sorted by angle) some region
        // must contain both rays and the bisecting direction
        if all_rays.len() < 3 {
            return Err(ValuationError::BadInput(
                "delta map needs at least three distinct rays to cover the plane".into(),
            ));
        }
        all_rays.sort_by(|p, q| compare_rays_by_angle(p, q));
        for i in 0..all_rays.len() {
            let a = &all_rays[i];
            let b = &all_rays[(i + 1) % all_rays.len()];
            let mid = (a.0.clone() + b.0.clone(), a.1.clone() + b.1.clone());
            let mid_pt = (Rat::from_integer(mid.0), Rat::from_integer(mid.1));
            let a_pt = (Rat::from_integer(a.0.clone()), Rat::from_integer(a.1.clone()));
            let b_pt = (Rat::from_integer(b.0.clone()), Rat::from_integer(b.1.clone()));
            let covered = self.regions.iter().any(|r| {
                r.contains(&a_pt) && r.contains(&b_pt) && r.contains(&mid_pt)
            });
            if !covered {
                return Err(ValuationError::CoverageGap {
                    point: format!("({}, {})", &mid_pt.0, &mid_pt.1),
                });
            }
        }
        // boundary agreement: every region pair sharing a ray agrees there
        for ray in &all_rays {
            let p = (
                Rat::from_integer(ray.0.clone()),
                Rat::from_integer(ray.1.clone()),
            );
            let mut value: Option<Rat> = None;
            for region in &self.regions {
                if !region.contains(&p) {
                    continue;
                }
                let v = self.scale.clone() * region.a_at(&p) / region.s_at(&p);
                match &value {
                    None => value = Some(v),
                    Some(prev) => {
                        if *prev != v {
                            return Err(ValuationError::BadInput(format!(
                                "regions disagree on the ray ({}, {})",
                                ray.0, ray.1
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Exact counterclockwise angular order starting just above the positive
/// x-axis.
fn compare_rays_by_angle(p: &(BigInt, BigInt), q: &(BigInt, BigInt)) -> std::cmp::Ordering {
    fn half(v: &(BigInt, BigInt)) -> u8 {
        // 0: upper half including positive x-axis; 1: lower half including
        // negative x-axis
        if v.1.is_positive() || (v.1.is_zero() && v.0.is_positive()) {
            0
        } else {
            1
        }
    }
    let (hp, hq) = (half(p), half(q));
    if hp != hq {
        return hp.cmp(&hq);
    }
    // same half-plane: p before q iff cross(p, q) > 0
    let cross = &p.0 * &q.1 - &p.1 * &q.0;
    if cross.is_positive() {
        std::cmp::Ordering::Less
    } else if cross.is_negative() {
        std::cmp::Ordering::Greater
    } else {
        std::cmp::Ordering::Equal
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{rat, rat_i};

    #[test]
    fn shift_makes_minimum_zero() {
        let w = vec![rat_i(3), rat_i(2), rat_i(0), rat_i(1), rat_i(1), rat_i(-2), rat_i(-1), rat_i(-3)];
        let s = shift_weight(&w);
        assert_eq!(
            s.values,
            vec![rat_i(6), rat_i(5), rat_i(3), rat_i(4), rat_i(4), rat_i(1), rat_i(2), rat_i(0)]
        );
        assert_eq!(s.minimizers, BTreeSet::from([7]));
        let zero = vec![Rat::zero(); 4];
        let s = shift_weight(&zero);
        assert!(s.values.iter().all(|v| v.is_zero()));
        assert_eq!(s.minimizers.len(), 4);
    }

    #[test]
    fn trivial_log_discrepancy() {
        let shifted = ShiftedWeight {
            values: vec![rat_i(0), rat_i(1), rat_i(1), rat_i(1), rat_i(1)],
            minimizers: BTreeSet::from([0]),
        };
        let names: Vec<String> = ["d", "a", "b", "c", "e"].iter().map(|s| s.to_string()).collect();
        let chart = Chart {
            name: "U".into(),
            denominator: 0,
            coords: vec![1, 2, 3, 4],
        };
        assert_eq!(log_discrepancy(&shifted, &chart, &names).unwrap(), rat_i(4));
        let bad = Chart {
            name: "V".into(),
            denominator: 1,
            coords: vec![0, 2, 3, 4],
        };
        assert!(matches!(
            log_discrepancy(&shifted, &bad, &names),
            Err(ValuationError::ChartNotCentered { .. })
        ));
    }

    fn constant_map() -> DeltaMap {
        // one value everywhere: A = S on four quadrant cones
        let mk = |label: &str, n1: Vec<Rat>, n2: Vec<Rat>, a: (Rat, Rat)| DeltaRegion {
            label: label.into(),
            cone: vec![Halfspace::new(n1, Rat::zero()), Halfspace::new(n2, Rat::zero())],
            a_form: a.clone(),
            s_form: a,
        };
        DeltaMap {
            scale: rat(5, 3),
            regions: vec![
                mk("pp", vec![rat_i(-1), rat_i(0)], vec![rat_i(0), rat_i(-1)], (rat_i(1), rat_i(1))),
                mk("pm", vec![rat_i(-1), rat_i(0)], vec![rat_i(0), rat_i(1)], (rat_i(1), rat_i(-1))),
                mk("mp", vec![rat_i(1), rat_i(0)], vec![rat_i(0), rat_i(-1)], (rat_i(-1), rat_i(1))),
                mk("mm", vec![rat_i(1), rat_i(0)], vec![rat_i(0), rat_i(1)], (rat_i(-1), rat_i(-1))),
            ],
        }
    }

    #[test]
    fn constant_map_minimum_is_scale() {
        let map = constant_map();
        map.validate().unwrap();
        let (v, rays) = map.minimize().unwrap();
        assert_eq!(v, rat(5, 3));
        assert_eq!(rays.len(), 4);
        assert_eq!(map.delta_at(&(rat(1, 7), rat(2, 7))).unwrap(), rat(5, 3));
        assert!(matches!(
            map.delta_at(&(Rat::zero(), Rat::zero())),
            Err(ValuationError::Origin)
        ));
    }

    #[test]
    fn homogeneity_of_delta() {
        let map = constant_map();
        for (p, k) in [((rat_i(2), rat_i(-1)), rat(7, 3)), ((rat_i(-1), rat_i(-2)), rat(1, 5))] {
            let scaled = (p.0.clone() * k.clone(), p.1.clone() * k.clone());
            assert_eq!(map.delta_at(&p).unwrap(), map.delta_at(&scaled).unwrap());
        }
    }

    #[test]
    fn coverage_gap_is_reported() {
        let mut map = constant_map();
        map.regions.pop();
        assert!(map.validate().is_err());
        assert!(matches!(
            map.delta_at(&(rat_i(-1), rat_i(-1))),
            Err(ValuationError::CoverageGap { .. })
        ));
    }
}
