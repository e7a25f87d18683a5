//! Duistermaat–Heckman measures from restricted volumes, the H-functional
//! and its minimizer, weighted volumes, weighted S-invariants and weighted
//! chain bounds.
//!
//! Everything is reduced exactly to [`ExpPoly`] carriers (inner fiber
//! integrals are eliminated by exact marginalization over the cells) and
//! only the outermost evaluation happens in fixed-point decimals. At ξ = 0
//! every weighted quantity collapses to its exact rational unweighted value,
//! and the code takes that branch literally so the agreement is exact.

use num_traits::{Signed, Zero};

use crate::azchain::{
    adjusted_log_discrepancy, Chain, ChainError, FiltrationStep, PiecewiseVolume, StepKind,
};
use crate::exact::decimal::Decimal;
use crate::exact::exppoly::{integrate_poly_exp, ExpPoly};
use crate::exact::poly::Poly;
use crate::exact::rational::{factorial, rat_str, Rat};
use crate::exact::rootfind::{solve_root_bracketed, RootError};
use crate::polytope::{marginal_over_fibers, PolytopeError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolitonError {
    /// The measure's support has no length.
    DegenerateMeasure,
    /// Moment interval does not match the reparameterized support.
    MomentMismatch { expected: String, got: String },
    /// Base volume must be univariate.
    Arity { got: usize },
    NegativeDensity { at: String },
    Chain(ChainError),
    Polytope(PolytopeError),
    Root(RootError),
}

impl std::fmt::Display for SolitonError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolitonError::DegenerateMeasure => write!(f, "measure support has zero length"),
            SolitonError::MomentMismatch { expected, got } => {
                write!(f, "moment interval {got} does not match the support image {expected}")
            }
            SolitonError::Arity { got } => {
                write!(f, "base volume must have one parameter, got {got}")
            }
            SolitonError::NegativeDensity { at } => {
                write!(f, "density is negative at {at}")
            }
            SolitonError::Chain(e) => write!(f, "{e}"),
            SolitonError::Polytope(e) => write!(f, "{e}"),
            SolitonError::Root(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for SolitonError {}

impl From<ChainError> for SolitonError {
    fn from(e: ChainError) -> Self {
        SolitonError::Chain(e)
    }
}

impl From<PolytopeError> for SolitonError {
    fn from(e: PolytopeError) -> Self {
        SolitonError::Polytope(e)
    }
}

impl From<RootError> for SolitonError {
    fn from(e: RootError) -> Self {
        SolitonError::Root(e)
    }
}

/// A 1-D piecewise-polynomial density with an affine moment
/// reparameterization `u' = alpha·u + beta` and a global normalization
/// constant (which provably never affects the soliton candidate).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DHMeasure {
    pub base: PiecewiseVolume,
    pub alpha: Rat,
    pub beta: Rat,
    pub moment: (Rat, Rat),
    pub constant: Rat,
}

impl DHMeasure {
    /// Check arity, support length, the moment-interval identity and spot
    /// nonnegativity of the density at cell vertices and midpoints.
    pub fn validate(&self) -> Result<(), SolitonError> {
        if self.base.arity() != 1 {
            return Err(SolitonError::Arity {
                got: self.base.arity(),
            });
        }
        let (lo, hi) = self
            .base
            .support_interval()
            .ok_or(SolitonError::DegenerateMeasure)?;
        if lo == hi {
            return Err(SolitonError::DegenerateMeasure);
        }
        if !self.alpha.is_positive() {
            return Err(SolitonError::MomentMismatch {
                expected: "a positive reparameterization slope".into(),
                got: rat_str(&self.alpha),
            });
        }
        let image = (
            self.alpha.clone() * lo + self.beta.clone(),
            self.alpha.clone() * hi + self.beta.clone(),
        );
        if image != self.moment {
            return Err(SolitonError::MomentMismatch {
                expected: format!("[{}, {}]", rat_str(&image.0), rat_str(&image.1)),
                got: format!("[{}, {}]", rat_str(&self.moment.0), rat_str(&self.moment.1)),
            });
        }
        for piece in &self.base.pieces {
            let (a, b) = piece.cell.axis_range(0);
            let mid = (a.clone() + b.clone()) / Rat::from_integer(2.into());
            for x in [a, b, mid] {
                if piece.vol.eval(std::slice::from_ref(&x)).is_negative() {
                    return Err(SolitonError::NegativeDensity { at: rat_str(&x) });
                }
            }
        }
        Ok(())
    }

    /// `Σ ∫ q(u)·vol(u)·e^(-u'ξ) du` over the support, as an exact carrier.
    fn reduce(&self, extra: Option<&Poly>, include_constant: bool) -> ExpPoly {
        let mut acc = ExpPoly::zero();
        let minus_alpha = -self.alpha.clone();
        for piece in &self.base.pieces {
            let (a, b) = piece.cell.axis_range(0);
            let integrand = match extra {
                Some(q) => q.mul(&piece.vol),
                None => piece.vol.clone(),
            };
            acc = acc.add(&integrate_poly_exp(&integrand, &minus_alpha, (&a, &b)));
        }
        let mut acc = acc.shift_slope(&-self.beta.clone());
        if include_constant {
            acc = acc.scale(&self.constant);
        }
        acc
    }

    /// Total weighted mass `∫ e^(-u'ξ)·DH(du')` including the constant.
    pub fn mass(&self) -> ExpPoly {
        self.reduce(None, true)
    }

    /// `∫ u'·e^(-u'ξ)·vol du` without the constant: the candidate equation.
    pub fn candidate_equation(&self) -> ExpPoly {
        let var = self.base.params[0].as_str();
        let u = Poly::var(&[var], var);
        let uprime = u
            .scale(&self.alpha)
            .add(&Poly::constant(&[var], self.beta.clone()));
        self.reduce(Some(&uprime), false)
    }
}

fn total_mass_rat(m: &DHMeasure) -> Rat {
    let mut acc = Rat::zero();
    for piece in &m.base.pieces {
        acc += piece
            .cell
            .integrate(&piece.vol)
            .expect("measure cells integrate");
    }
    acc * m.constant.clone()
}

fn candidate_value_rat(m: &DHMeasure) -> Rat {
    let var = m.base.params[0].as_str();
    let u = Poly::var(&[var], var);
    let uprime = u
        .scale(&m.alpha)
        .add(&Poly::constant(&[var], m.beta.clone()));
    let mut acc = Rat::zero();
    for piece in &m.base.pieces {
        acc += piece
            .cell
            .integrate(&uprime.mul(&piece.vol))
            .expect("measure cells integrate");
    }
    acc
}

/// `H(ξ) = log ∫ e^(-u'ξ)·DH(du')`; exact rational inner value at ξ = 0.
pub fn h_functional(m: &DHMeasure, xi: &Decimal) -> Decimal {
    if xi.is_zero() {
        return Decimal::from_rat(&total_mass_rat(m), xi.scale()).ln();
    }
    m.mass().eval(xi).ln()
}

/// Derivative of the H-functional, `-∫u'e^(-u'ξ)DH / ∫e^(-u'ξ)DH`.
pub fn h_derivative(m: &DHMeasure, xi: &Decimal) -> Decimal {
    if xi.is_zero() {
        let num = Decimal::from_rat(&(candidate_value_rat(m) * m.constant.clone()), xi.scale());
        let den = Decimal::from_rat(&total_mass_rat(m), xi.scale());
        return num.div(&den).neg();
    }
    let num = m.candidate_equation().scale(&m.constant).eval(xi);
    let den = m.mass().eval(xi);
    num.div(&den).neg()
}

/// The unique root of `∫ u'·e^(-u'ξ)·DH(du') = 0` in the bracket [0, 1].
///
/// The normalization constant cancels from the equation and is never
/// multiplied in, so the result is bit-identical under rescaling.
pub fn solve_soliton_candidate(
    m: &DHMeasure,
    precision: u32,
) -> Result<Decimal, SolitonError> {
    m.validate()?;
    let eq = m.candidate_equation();
    let scale = precision + 10;
    // f(0) needs the slope-free reduction: evaluate the exact rational mean
    let f = |xi: &Decimal| -> Decimal {
        if xi.is_zero() {
            let var = m.base.params[0].as_str();
            let u = Poly::var(&[var], var);
            let uprime = u
                .scale(&m.alpha)
                .add(&Poly::constant(&[var], m.beta.clone()));
            let mut acc = Rat::zero();
            for piece in &m.base.pieces {
                acc += piece
                    .cell
                    .integrate(&uprime.mul(&piece.vol))
                    .expect("validated measure integrates");
            }
            Decimal::from_rat(&acc, xi.scale())
        } else {
            eq.eval(xi)
        }
    };
    // the candidate equation is strictly decreasing in ξ, so grow the
    // bracket away from 0 on the side the sign of f(0) dictates
    let zero = Decimal::zero(scale);
    let f0 = f(&zero);
    let (lo, hi) = if f0.is_zero() {
        return Ok(zero);
    } else if f0.is_negative() {
        let mut lo = Decimal::from_i64(-1, scale);
        let mut guard = 0;
        while !f(&lo).is_negative() {
            lo = lo.mul(&Decimal::from_i64(2, scale));
            guard += 1;
            assert!(guard < 40, "candidate bracket expansion failed");
        }
        (lo, zero)
    } else {
        let mut hi = Decimal::one(scale);
        let mut guard = 0;
        while f(&hi).is_negative() == false && !f(&hi).is_zero() {
            hi = hi.mul(&Decimal::from_i64(2, scale));
            guard += 1;
            assert!(guard < 40, "candidate bracket expansion failed");
        }
        (zero, hi)
    };
    let tol_digits = precision.saturating_sub(6).max(8);
    let tol = Decimal::one(scale).div(&Decimal::from_i64(10, scale).powi(tol_digits as i32));
    Ok(solve_root_bracketed(f, &lo, &hi, &tol)?)
}

/// `∫ e^(-u'ξ)·vol(u)/k! du` (no normalization constant). Exact rational
/// path at ξ = 0.
pub fn weighted_volume(
    m: &DHMeasure,
    pv: &PiecewiseVolume,
    xi: &Decimal,
    k: u32,
) -> Result<Decimal, SolitonError> {
    if pv.arity() != 1 {
        return Err(SolitonError::Arity { got: pv.arity() });
    }
    if xi.is_zero() {
        let mut acc = Rat::zero();
        for piece in &pv.pieces {
            acc += piece.cell.integrate(&piece.vol)?;
        }
        return Ok(Decimal::from_rat(&(acc / factorial(k)), xi.scale()));
    }
    let mut acc = ExpPoly::zero();
    let minus_alpha = -m.alpha.clone();
    for piece in &pv.pieces {
        let (a, b) = piece.cell.axis_range(0);
        acc = acc.add(&integrate_poly_exp(&piece.vol, &minus_alpha, (&a, &b)));
    }
    let acc = acc
        .shift_slope(&-m.beta.clone())
        .scale(&(Rat::from_integer(1.into()) / factorial(k)));
    Ok(acc.eval(xi))
}

/// Weighted S of a chain's first step:
/// `(1/v^g)·∫ u·e^(-u'ξ)·vol/(n-1)! du`.
pub fn weighted_s_first(
    chain: &Chain,
    step: &FiltrationStep,
    m: &DHMeasure,
    xi: &Decimal,
    weighted_total: &Decimal,
) -> Result<Decimal, SolitonError> {
    if step.volume.arity() != 1 {
        return Err(SolitonError::Arity {
            got: step.volume.arity(),
        });
    }
    let var = step.volume.params[0].as_str();
    let u = Poly::var(&[var], var);
    let kfac = factorial(chain.ambient_dim - 1);
    if xi.is_zero() {
        let mut acc = Rat::zero();
        for piece in &step.volume.pieces {
            acc += piece.cell.integrate(&u.mul(&piece.vol))?;
        }
        let num = Decimal::from_rat(&(acc / kfac), xi.scale());
        return Ok(num.div(weighted_total));
    }
    let mut acc = ExpPoly::zero();
    let minus_alpha = -m.alpha.clone();
    for piece in &step.volume.pieces {
        let (a, b) = piece.cell.axis_range(0);
        acc = acc.add(&integrate_poly_exp(
            &u.mul(&piece.vol),
            &minus_alpha,
            (&a, &b),
        ));
    }
    let acc = acc
        .shift_slope(&-m.beta.clone())
        .scale(&(Rat::from_integer(1.into()) / kfac));
    Ok(acc.eval(xi).div(weighted_total))
}

/// Weighted S of a refinement step: `(1/v^g)·∫ e^(-u'ξ)·vol/k!` over all
/// parameters — only the first parameter enters the exponent, so the inner
/// fibers are integrated out exactly first.
pub fn weighted_s_refine(
    chain: &Chain,
    step: &FiltrationStep,
    m: &DHMeasure,
    xi: &Decimal,
    weighted_total: &Decimal,
) -> Result<Decimal, SolitonError> {
    let params = step.volume.arity();
    if params < 2 {
        return Err(SolitonError::Arity { got: params });
    }
    let k = step.volume.piece_dim;
    debug_assert_eq!(k + params as u32, chain.ambient_dim + 1);
    let kfac = factorial(k);
    if xi.is_zero() {
        let mut acc = Rat::zero();
        for piece in &step.volume.pieces {
            acc += piece.cell.integrate(&piece.vol)?;
        }
        let num = Decimal::from_rat(&(acc / kfac), xi.scale());
        return Ok(num.div(weighted_total));
    }
    let minus_alpha = -m.alpha.clone();
    let mut acc = ExpPoly::zero();
    for piece in &step.volume.pieces {
        let marginal = marginal_over_fibers(&piece.cell, &piece.vol)?;
        for (lo, hi, poly) in &marginal.pieces {
            acc = acc.add(&integrate_poly_exp(poly, &minus_alpha, (lo, hi)));
        }
    }
    let acc = acc
        .shift_slope(&-m.beta.clone())
        .scale(&(Rat::from_integer(1.into()) / kfac));
    Ok(acc.eval(xi).div(weighted_total))
}

/// Exact rational weighted S at ξ = 0 (weight ≡ 1), normalized by the
/// chain's first-step volume. With valid scenario data this equals the
/// unweighted S-invariant exactly.
pub fn weighted_s_at_zero(chain: &Chain, step: &FiltrationStep) -> Result<Rat, SolitonError> {
    let first = chain.steps.first().ok_or(SolitonError::DegenerateMeasure)?;
    let mut total = Rat::zero();
    for piece in &first.volume.pieces {
        total += piece.cell.integrate(&piece.vol)?;
    }
    let v0 = total / factorial(chain.ambient_dim - 1);
    match step.kind {
        StepKind::First => {
            let var = step.volume.params[0].as_str();
            let u = Poly::var(&[var], var);
            let mut acc = Rat::zero();
            for piece in &step.volume.pieces {
                acc += piece.cell.integrate(&u.mul(&piece.vol))?;
            }
            Ok(acc / factorial(chain.ambient_dim - 1) / v0)
        }
        StepKind::Refinement => {
            let mut acc = Rat::zero();
            for piece in &step.volume.pieces {
                acc += piece.cell.integrate(&piece.vol)?;
            }
            Ok(acc / factorial(step.volume.piece_dim) / v0)
        }
    }
}

#[derive(Debug, Clone)]
pub struct WeightedChainBound {
    pub bound: Decimal,
    pub ratios: Vec<(String, Decimal)>,
    pub weighted_total: Decimal,
}

/// `min over steps of (1/r)·A/S^g` where r is the polarization degree.
pub fn weighted_chain_bound(
    chain: &Chain,
    m: &DHMeasure,
    polarization: &Rat,
    xi: &Decimal,
) -> Result<WeightedChainBound, SolitonError> {
    let first = chain
        .steps
        .first()
        .ok_or(SolitonError::DegenerateMeasure)?;
    let weighted_total = weighted_volume(m, &first.volume, xi, chain.ambient_dim - 1)?;
    let inv_r = Rat::from_integer(1.into()) / polarization.clone();
    let mut ratios = Vec::new();
    let mut bound: Option<Decimal> = None;
    for step in &chain.steps {
        let sg = match step.kind {
            StepKind::First => weighted_s_first(chain, step, m, xi, &weighted_total)?,
            StepKind::Refinement => weighted_s_refine(chain, step, m, xi, &weighted_total)?,
        };
        let a = adjusted_log_discrepancy(step)?;
        let ratio = Decimal::from_rat(&(inv_r.clone() * a), xi.scale()).div(&sg);
        if bound
            .as_ref()
            .map_or(true, |b| ratio.cmp(b) == std::cmp::Ordering::Less)
        {
            bound = Some(ratio.clone());
        }
        ratios.push((step.name.clone(), ratio));
    }
    Ok(WeightedChainBound {
        bound: bound.expect("chain has steps"),
        ratios,
        weighted_total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::azchain::VolumePiece;
    use crate::exact::rational::{rat, rat_i};
    use crate::polytope::{Halfspace, Polytope};

    fn interval_cell(lo: Rat, hi: Rat) -> Polytope {
        Polytope::from_halfspaces(
            1,
            &[
                Halfspace::new(vec![rat_i(-1)], -lo),
                Halfspace::new(vec![rat_i(1)], hi),
            ],
        )
        .unwrap()
    }

    /// density 1 on [-1, 1] with identity reparameterization
    fn symmetric_measure() -> DHMeasure {
        DHMeasure {
            base: PiecewiseVolume {
                params: vec!["u".into()],
                piece_dim: 1,
                pieces: vec![VolumePiece {
                    cell: interval_cell(rat_i(-1), rat_i(1)),
                    vol: Poly::constant(&["u"], rat_i(1)),
                }],
            },
            alpha: rat_i(1),
            beta: rat_i(0),
            moment: (rat_i(-1), rat_i(1)),
            constant: rat_i(1),
        }
    }

    #[test]
    fn symmetric_measure_candidate_is_zero() {
        let m = symmetric_measure();
        m.validate().unwrap();
        let xi = solve_soliton_candidate(&m, 30).unwrap();
        // the root is 0 up to the solver tolerance
        let tol = Decimal::parse("0.000000000000000000001").unwrap();
        assert!(xi.abs().cmp(&tol) == std::cmp::Ordering::Less);
    }

    #[test]
    fn h_functional_is_symmetric_for_symmetric_measure() {
        let m = symmetric_measure();
        for s in ["0.3", "0.7", "1.5"] {
            let xi = Decimal::parse(s).unwrap().rescale(30);
            let a = h_functional(&m, &xi);
            let b = h_functional(&m, &xi.neg());
            let diff = a.sub(&b).abs();
            assert!(
                diff.cmp(&Decimal::parse("0.0000000000000000000000000001").unwrap())
                    == std::cmp::Ordering::Less
            );
        }
    }

    #[test]
    fn moment_mismatch_is_detected() {
        let mut m = symmetric_measure();
        m.moment = (rat_i(-2), rat_i(1));
        assert!(matches!(
            m.validate(),
            Err(SolitonError::MomentMismatch { .. })
        ));
    }

    #[test]
    fn weighted_volume_at_zero_is_exact() {
        let m = symmetric_measure();
        let v = weighted_volume(&m, &m.base, &Decimal::zero(25), 1).unwrap();
        assert_eq!(v, Decimal::from_rat(&rat_i(2), 25));
        let v = weighted_volume(&m, &m.base, &Decimal::zero(25), 3).unwrap();
        assert_eq!(v, Decimal::from_rat(&rat(1, 3), 25));
    }

    #[test]
    fn normalization_constant_never_moves_the_candidate() {
        let mut skew = symmetric_measure();
        // density 1+u on [-1, 1]: candidate moves off zero
        skew.base.pieces[0].vol = Poly::from_terms(
            &["u"],
            &[(rat_i(1), vec![0]), (rat_i(1), vec![1])],
        );
        let a = solve_soliton_candidate(&skew, 30).unwrap();
        skew.constant = rat(81, 1);
        let b = solve_soliton_candidate(&skew, 30).unwrap();
        assert_eq!(a, b);
    }
}
