//! Semistability walls in the pair coefficient, semistable domains, beta
//! invariants, and the cone bound for pairs built on a K-stable divisor.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exact::poly::Poly;
use crate::exact::rational::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StabilityError {
    /// More than one root of `ratio = 1` inside the validity interval.
    MultipleRootsInRange(String),
    /// The denominator vanishes somewhere on the validity interval.
    DenominatorVanishes(String),
    /// Degree above 2 is not supported for exact wall solving.
    UnsupportedDegree(u32),
    BadInput(String),
}

impl std::fmt::Display for StabilityError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StabilityError::MultipleRootsInRange(n) => {
                write!(f, "ratio `{n}` crosses 1 more than once in its interval")
            }
            StabilityError::DenominatorVanishes(n) => {
                write!(f, "denominator of `{n}` vanishes on its interval")
            }
            StabilityError::UnsupportedDegree(d) => {
                write!(f, "wall solving supports degree ≤ 2, got {d}")
            }
            StabilityError::BadInput(m) => write!(f, "bad input: {m}"),
        }
    }
}

impl std::error::Error for StabilityError {}

/// `numerator(c) / denominator(c)` on a validity interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioFunction {
    pub name: String,
    pub numerator: Poly,
    pub denominator: Poly,
    pub interval: (Rat, Rat),
}

/// A wall location: exact, or an isolating interval of width ≤ 1e-12 when
/// the root is irrational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Wall {
    Exact(Rat),
    Isolated(Rat, Rat),
}

impl RatioFunction {
    pub fn eval(&self, c: &Rat) -> Rat {
        let num = self.numerator.eval(std::slice::from_ref(c));
        let den = self.denominator.eval(std::slice::from_ref(c));
        num / den
    }

    /// The denominator must not vanish on the closed validity interval.
    pub fn validate(&self) -> Result<(), StabilityError> {
        let roots = roots_in_interval(&self.denominator, &self.interval)
            .map_err(|_| StabilityError::UnsupportedDegree(self.denominator.degree_in(0)))?;
        if !roots.is_empty() {
            return Err(StabilityError::DenominatorVanishes(self.name.clone()));
        }
        Ok(())
    }
}

/// Exact rational roots (and isolating intervals for irrational ones) of a
/// univariate polynomial of degree ≤ 2 inside a closed interval.
fn roots_in_interval(p: &Poly, interval: &(Rat, Rat)) -> Result<Vec<Wall>, ()> {
    let coeffs = p.univariate_coeffs(0);
    let deg = coeffs.len().saturating_sub(1);
    let inside = |x: &Rat| *x >= interval.0 && *x <= interval.1;
    match deg {
        0 => {
            if coeffs.is_empty() || coeffs[0].is_zero() {
                // identically zero: treat as a failure upstream
                if p.is_zero() {
                    return Ok(vec![Wall::Isolated(interval.0.clone(), interval.1.clone())]);
                }
            }
            Ok(Vec::new())
        }
        1 => {
            let root = -coeffs[0].clone() / coeffs[1].clone();
            Ok(if inside(&root) {
                vec![Wall::Exact(root)]
            } else {
                Vec::new()
            })
        }
        2 => {
            let (a, b, c) = (coeffs[2].clone(), coeffs[1].clone(), coeffs[0].clone());
            let disc = b.clone() * b.clone() - Rat::from_integer(4.into()) * a.clone() * c;
            if disc.is_negative() {
                return Ok(Vec::new());
            }
            let two_a = Rat::from_integer(2.into()) * a;
            let mut out = Vec::new();
            match rational_sqrt(&disc) {
                Some(s) => {
                    for root in [
                        (-b.clone() + s.clone()) / two_a.clone(),
                        (-b.clone() - s.clone()) / two_a.clone(),
                    ] {
                        if inside(&root) && !out.contains(&Wall::Exact(root.clone())) {
                            out.push(Wall::Exact(root));
                        }
                    }
                }
                None => {
                    let (lo, hi) = isolate_sqrt(&disc);
                    for (slo, shi) in [(lo.clone(), hi.clone()), (-hi, -lo)] {
                        let mut r0 = (-b.clone() + slo.clone()) / two_a.clone();
                        let mut r1 = (-b.clone() + shi.clone()) / two_a.clone();
                        if r0 > r1 {
                            std::mem::swap(&mut r0, &mut r1);
                        }
                        if r1 >= interval.0 && r0 <= interval.1 {
                            out.push(Wall::Isolated(r0, r1));
                        }
                    }
                }
            }
            Ok(out)
        }
        _ => Err(()),
    }
}

/// √d as an exact rational if it exists.
fn rational_sqrt(d: &Rat) -> Option<Rat> {
    if d.is_negative() {
        return None;
    }
    let n = d.numer().sqrt();
    let m = d.denom().sqrt();
    if &(&n * &n) == d.numer() && &(&m * &m) == d.denom() {
        Some(Rat::new(n, m))
    } else {
        None
    }
}

/// Isolating interval of width ≤ 1e-12 around the positive square root.
fn isolate_sqrt(d: &Rat) -> (Rat, Rat) {
    let scale = BigInt::from(10u32).pow(12);
    // √d = √(d·scale²)/scale; floor integer square root isolates it
    let scaled = d.numer() * &scale * &scale / d.denom();
    let root = scaled.sqrt();
    (
        Rat::new(root.clone(), scale.clone()),
        Rat::new(root + BigInt::one(), scale),
    )
}

/// The unique c in the validity interval with `ratio(c) = 1`, or `None`.
pub fn wall_of(f: &RatioFunction) -> Result<Option<Wall>, StabilityError> {
    f.validate()?;
    let diff = f.numerator.sub(&f.denominator);
    if diff.is_zero() {
        return Err(StabilityError::MultipleRootsInRange(f.name.clone()));
    }
    let roots = roots_in_interval(&diff, &f.interval)
        .map_err(|_| StabilityError::UnsupportedDegree(diff.degree_in(0)))?;
    match roots.len() {
        0 => Ok(None),
        1 => Ok(Some(roots.into_iter().next().unwrap())),
        _ => Err(StabilityError::MultipleRootsInRange(f.name.clone())),
    }
}

/// The subinterval of `range` where every ratio is ≥ 1, with exact rational
/// endpoints; `None` when the domain is empty.
pub fn kss_domain(
    ratios: &[RatioFunction],
    range: &(Rat, Rat),
) -> Result<Option<(Rat, Rat)>, StabilityError> {
    if range.0 > range.1 {
        return Err(StabilityError::BadInput("range endpoints out of order".into()));
    }
    // breakpoints: range endpoints plus every exact wall inside the range
    let mut points = vec![range.0.clone(), range.1.clone()];
    for f in ratios {
        f.validate()?;
        let diff = f.numerator.sub(&f.denominator);
        if diff.is_zero() {
            continue; // ratio ≡ 1 never constrains the domain
        }
        let roots = roots_in_interval(&diff, range)
            .map_err(|_| StabilityError::UnsupportedDegree(diff.degree_in(0)))?;
        for r in roots {
            match r {
                Wall::Exact(x) => points.push(x),
                Wall::Isolated(_, _) => {
                    return Err(StabilityError::BadInput(format!(
                        "irrational wall of `{}`: exact domain endpoints unavailable",
                        f.name
                    )))
                }
            }
        }
    }
    points.sort();
    points.dedup();
    // a point passes iff every ratio is ≥ 1 there
    let passes = |c: &Rat| {
        ratios.iter().all(|f| {
            let num = f.numerator.eval(std::slice::from_ref(c));
            let den = f.denominator.eval(std::slice::from_ref(c));
            // den has constant sign on the interval (validated)
            if den.is_positive() {
                num >= den
            } else {
                num <= den
            }
        })
    };
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    let mut gap_after_domain = false;
    for w in points.windows(2) {
        let mid = (w[0].clone() + w[1].clone()) / Rat::from_integer(2.into());
        if passes(&mid) {
            if gap_after_domain {
                return Err(StabilityError::BadInput(
                    "semistable domain is disconnected".into(),
                ));
            }
            // extend to the exact endpoints where the boundary ratio hits 1
            let piece_lo = if passes(&w[0]) { w[0].clone() } else { mid.clone() };
            let piece_hi = if passes(&w[1]) { w[1].clone() } else { mid.clone() };
            if lo.is_none() {
                lo = Some(piece_lo);
            }
            hi = Some(piece_hi);
        } else if lo.is_some() {
            gap_after_domain = true;
        }
    }
    // single-point domains: a breakpoint can pass while both neighbors fail
    if lo.is_none() {
        for pt in &points {
            if passes(pt) {
                return Ok(Some((pt.clone(), pt.clone())));
            }
        }
    }
    Ok(lo.zip(hi))
}

/// Beta invariant `A - S`.
pub fn beta(a: &Rat, s: &Rat) -> Rat {
    a.clone() - s.clone()
}

/// Inputs to the cone bound: polarization ratio r, dimension n, the base
/// delta and optionally the divisor's delta.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeBoundInput {
    pub r: Rat,
    pub n: u32,
    pub delta_x: Rat,
    /// When absent the divisor is assumed stable enough that only the base
    /// term binds.
    pub delta_v: Option<Rat>,
}

/// Open coefficient interval `(max{(r+1)(1-δX), (1-r/n) - (r/n)(n+1)(δV-1)},
/// 1-r/n)`; empty (`None`) when the lower bound meets the upper.
pub fn cone_bound(input: &ConeBoundInput) -> Option<(Rat, Rat)> {
    let one = Rat::one();
    let n = Rat::from_integer(input.n.into());
    let upper = one.clone() - input.r.clone() / n.clone();
    let mut lower = (input.r.clone() + one.clone()) * (one.clone() - input.delta_x.clone());
    if let Some(dv) = &input.delta_v {
        let divisor_term = upper.clone()
            - (input.r.clone() / n.clone())
                * Rat::from_integer((input.n + 1).into())
                * (dv.clone() - one);
        if divisor_term > lower {
            lower = divisor_term;
        }
    }
    if lower < upper {
        Some((lower, upper))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{rat, rat_i};

    fn c_poly(terms: &[(i64, i64, u32)]) -> Poly {
        Poly::from_terms(
            &["c"],
            &terms
                .iter()
                .map(|&(n, d, e)| (rat(n, d), vec![e]))
                .collect::<Vec<_>>(),
        )
    }

    fn ratio(name: &str, num: &[(i64, i64, u32)], den: &[(i64, i64, u32)]) -> RatioFunction {
        RatioFunction {
            name: name.into(),
            numerator: c_poly(num),
            denominator: c_poly(den),
            interval: (rat_i(0), rat(7, 8)),
        }
    }

    #[test]
    fn linear_walls() {
        // 25 / (27 - 18c) = 1 at c = 1/9
        let f = ratio("a", &[(25, 1, 0)], &[(27, 1, 0), (-18, 1, 1)]);
        assert_eq!(wall_of(&f).unwrap(), Some(Wall::Exact(rat(1, 9))));
        // (10 - 10c) / (3 - 2c) = 1 at c = 7/8
        let f = ratio("b", &[(10, 1, 0), (-10, 1, 1)], &[(3, 1, 0), (-2, 1, 1)]);
        assert_eq!(wall_of(&f).unwrap(), Some(Wall::Exact(rat(7, 8))));
        // substitution check: the wall satisfies ratio = 1 exactly
        assert_eq!(f.eval(&rat(7, 8)), rat_i(1));
    }

    #[test]
    fn no_wall_returns_none() {
        let f = ratio("c", &[(9, 1, 0)], &[(3, 1, 0), (-2, 1, 1)]);
        assert_eq!(wall_of(&f).unwrap(), None);
    }

    #[test]
    fn quadratic_walls_exact_and_isolated() {
        // c² - 1/4 + 1 = 1 at c = ±1/2; only +1/2 is in [0, 7/8]
        let f = ratio("q", &[(1, 1, 2), (3, 4, 0)], &[(1, 1, 0)]);
        assert_eq!(wall_of(&f).unwrap(), Some(Wall::Exact(rat(1, 2))));
        // c² + 1/2 = 1 at c = √(1/2): irrational, isolated to 1e-12
        let f = ratio("i", &[(1, 1, 2), (1, 2, 0)], &[(1, 1, 0)]);
        match wall_of(&f).unwrap() {
            Some(Wall::Isolated(lo, hi)) => {
                assert!(hi.clone() - lo.clone() <= rat(1, 1_000_000_000_000));
                let mid = rat(707106781187, 1_000_000_000_000);
                assert!(lo <= mid && mid <= hi);
            }
            other => panic!("expected isolated wall, got {other:?}"),
        }
    }

    #[test]
    fn denominator_vanishing_is_rejected() {
        let f = RatioFunction {
            name: "bad".into(),
            numerator: c_poly(&[(1, 1, 0)]),
            denominator: c_poly(&[(1, 1, 1)]),
            interval: (rat_i(0), rat_i(1)),
        };
        assert!(matches!(
            wall_of(&f),
            Err(StabilityError::DenominatorVanishes(_))
        ));
    }

    #[test]
    fn empty_ratio_list_returns_range() {
        let range = (rat_i(0), rat(7, 8));
        assert_eq!(kss_domain(&[], &range).unwrap(), Some(range));
    }

    #[test]
    fn domain_endpoints_are_walls_or_range_ends() {
        let ratios = vec![
            ratio("a", &[(25, 1, 0)], &[(27, 1, 0), (-18, 1, 1)]),
            ratio("b", &[(10, 1, 0), (-10, 1, 1)], &[(3, 1, 0), (-2, 1, 1)]),
        ];
        let dom = kss_domain(&ratios, &(rat_i(0), rat(7, 8))).unwrap().unwrap();
        assert_eq!(dom, (rat(1, 9), rat(7, 8)));
    }

    #[test]
    fn empty_domain_is_none() {
        // ratio 1/2 constant: never ≥ 1
        let f = ratio("half", &[(1, 2, 0)], &[(1, 1, 0)]);
        assert_eq!(kss_domain(&[f], &(rat_i(0), rat_i(1))).unwrap(), None);
    }

    #[test]
    fn beta_values() {
        assert_eq!(beta(&rat_i(2), &rat(54, 25)), rat(-4, 25));
        assert_eq!(beta(&rat_i(2), &rat(32, 15)), rat(-2, 15));
        assert_eq!(beta(&rat_i(3), &rat_i(3)), rat_i(0));
    }

    #[test]
    fn cone_bound_examples() {
        // empty when both deltas are 1
        let empty = cone_bound(&ConeBoundInput {
            r: rat(1, 2),
            n: 4,
            delta_x: rat_i(1),
            delta_v: Some(rat_i(1)),
        });
        assert_eq!(empty, None);
        // base-only term
        let m = cone_bound(&ConeBoundInput {
            r: rat(1, 2),
            n: 4,
            delta_x: rat(25, 27),
            delta_v: None,
        })
        .unwrap();
        assert_eq!(m, (rat(1, 9), rat(7, 8)));
    }

    #[test]
    fn cone_bound_monotone_in_deltas() {
        let base = ConeBoundInput {
            r: rat(1, 2),
            n: 4,
            delta_x: rat(25, 27),
            delta_v: Some(rat(5, 2)),
        };
        let (lo, hi) = cone_bound(&base).unwrap();
        for (dx, dv) in [(rat(26, 27), rat(5, 2)), (rat(25, 27), rat_i(3))] {
            let better = cone_bound(&ConeBoundInput {
                r: base.r.clone(),
                n: base.n,
                delta_x: dx,
                delta_v: Some(dv),
            })
            .unwrap();
            assert!(better.0 <= lo && better.1 >= hi);
        }
    }
}
