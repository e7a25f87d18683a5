//! Refinement chains: S-invariants of filtration steps from piecewise
//! restricted-volume data, boundary-adjusted log discrepancies, and chain
//! lower bounds for local delta invariants.
//!
//! Normalization bookkeeping: a chain's first step carries the parameter
//! weight, `(n/V)·∫ u·vol(u) du`; refinement steps over m ≥ 2 parameters
//! carry `(n!/V)·∫ vol/k!` with `k = n - m + 1` equal to the declared piece
//! dimension. Fixing the rule here prevents off-by-factorial mistakes.

use num_traits::{Signed, Zero};

use crate::exact::poly::Poly;
use crate::exact::rational::{factorial, rat_str, Rat};
use crate::intersect::{expand_power, DivisorExpression, IntersectError, IntersectionForm};
use crate::polytope::{Halfspace, Polytope, PolytopeError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainError {
    /// Parameter count does not fit the operation.
    WrongArity { expected: usize, got: usize },
    /// piece_dim is inconsistent with the ambient dimension and parameters.
    DimensionBookkeeping { n: u32, params: usize, piece_dim: u32 },
    /// Adjusted log discrepancy came out non-positive.
    NonPositiveDiscrepancy { step: String, value: String },
    /// Parameter outside the documented range.
    ParameterRange(String),
    Polytope(PolytopeError),
    Intersect(IntersectError),
}

impl std::fmt::Display for ChainError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChainError::WrongArity { expected, got } => {
                write!(f, "expected {expected} filtration parameters, got {got}")
            }
            ChainError::DimensionBookkeeping { n, params, piece_dim } => write!(
                f,
                "piece dimension {piece_dim} does not equal n - m + 1 for n = {n}, m = {params}"
            ),
            ChainError::NonPositiveDiscrepancy { step, value } => {
                write!(f, "adjusted log discrepancy of `{step}` is {value} ≤ 0")
            }
            ChainError::ParameterRange(m) => write!(f, "parameter out of range: {m}"),
            ChainError::Polytope(e) => write!(f, "{e}"),
            ChainError::Intersect(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ChainError {}

impl From<PolytopeError> for ChainError {
    fn from(e: PolytopeError) -> Self {
        ChainError::Polytope(e)
    }
}

impl From<IntersectError> for ChainError {
    fn from(e: IntersectError) -> Self {
        ChainError::Intersect(e)
    }
}

/// One piece of a piecewise volume function: a polynomial on a cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumePiece {
    pub cell: Polytope,
    pub vol: Poly,
}

/// A restricted-volume function of filtration parameters, as interior-
/// disjoint cells each carrying an exact polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseVolume {
    pub params: Vec<String>,
    /// Dimension k of the cycle class whose volume each piece computes.
    pub piece_dim: u32,
    pub pieces: Vec<VolumePiece>,
}

impl PiecewiseVolume {
    pub fn arity(&self) -> usize {
        self.params.len()
    }

    /// Union of the 1-dimensional cells, for univariate volumes.
    pub fn support_interval(&self) -> Option<(Rat, Rat)> {
        if self.arity() != 1 {
            return None;
        }
        let mut lo: Option<Rat> = None;
        let mut hi: Option<Rat> = None;
        for p in &self.pieces {
            let (a, b) = p.cell.axis_range(0);
            lo = Some(match lo {
                Some(l) => l.min(a),
                None => a,
            });
            hi = Some(match hi {
                Some(h) => h.max(b),
                None => b,
            });
        }
        Some((lo?, hi?))
    }
}

/// S-invariant of a chain's first step: `(n/V)·∫ u·vol(u) du`.
pub fn s_first(pv: &PiecewiseVolume, total_volume: &Rat, n: u32) -> Result<Rat, ChainError> {
    if pv.arity() != 1 {
        return Err(ChainError::WrongArity {
            expected: 1,
            got: pv.arity(),
        });
    }
    if pv.piece_dim != n - 1 {
        return Err(ChainError::DimensionBookkeeping {
            n,
            params: 1,
            piece_dim: pv.piece_dim,
        });
    }
    let var = pv.params[0].as_str();
    let u = Poly::var(&[var], var);
    let mut acc = Rat::zero();
    for piece in &pv.pieces {
        acc += piece.cell.integrate(&u.mul(&piece.vol))?;
    }
    Ok(acc * Rat::from_integer(n.into()) / total_volume.clone())
}

/// S-invariant of a refinement step: `(n!/V)·Σ ∫_cell vol / k!`.
pub fn s_refine(pv: &PiecewiseVolume, total_volume: &Rat, n: u32) -> Result<Rat, ChainError> {
    let m = pv.arity();
    if m < 2 {
        return Err(ChainError::WrongArity { expected: 2, got: m });
    }
    if n + 1 != pv.piece_dim + m as u32 {
        return Err(ChainError::DimensionBookkeeping {
            n,
            params: m,
            piece_dim: pv.piece_dim,
        });
    }
    let mut acc = Rat::zero();
    for piece in &pv.pieces {
        acc += piece.cell.integrate(&piece.vol)?;
    }
    Ok(acc * factorial(n) / (total_volume.clone() * factorial(pv.piece_dim)))
}

/// A coefficient-weighted vanishing order entering a log discrepancy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryAdjustment {
    pub coeff: Rat,
    pub ord: Rat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    First,
    Refinement,
}

/// One rung of a refinement chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationStep {
    pub name: String,
    pub kind: StepKind,
    pub log_discrepancy: Rat,
    pub boundary: Vec<BoundaryAdjustment>,
    pub volume: PiecewiseVolume,
}

/// `A - Σ c·ord`, exact; non-positive results are an error.
pub fn adjusted_log_discrepancy(step: &FiltrationStep) -> Result<Rat, ChainError> {
    let mut a = step.log_discrepancy.clone();
    for adj in &step.boundary {
        a -= adj.coeff.clone() * adj.ord.clone();
    }
    if !a.is_positive() {
        return Err(ChainError::NonPositiveDiscrepancy {
            step: step.name.clone(),
            value: rat_str(&a),
        });
    }
    Ok(a)
}

/// An ordered refinement chain with its normalization scale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub name: String,
    pub ambient_dim: u32,
    pub total_volume: Rat,
    /// Factor converting the base-polarization ratios to the target
    /// normalization (1 for the plain polarization).
    pub scale: Rat,
    pub steps: Vec<FiltrationStep>,
}

impl Chain {
    /// S-invariant of one step under this chain's normalization data.
    pub fn step_s(&self, step: &FiltrationStep) -> Result<Rat, ChainError> {
        match step.kind {
            StepKind::First => s_first(&step.volume, &self.total_volume, self.ambient_dim),
            StepKind::Refinement => s_refine(&step.volume, &self.total_volume, self.ambient_dim),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainBound {
    pub bound: Rat,
    /// Per-step `(name, scale·A/S)` in chain order.
    pub ratios: Vec<(String, Rat)>,
}

/// `min over steps of scale·(adjusted A)/S`, with the per-step ratios.
pub fn chain_bound(chain: &Chain) -> Result<ChainBound, ChainError> {
    let mut ratios = Vec::new();
    let mut bound: Option<Rat> = None;
    for step in &chain.steps {
        let a = adjusted_log_discrepancy(step)?;
        let s = chain.step_s(step)?;
        let ratio = chain.scale.clone() * a / s;
        if bound.as_ref().is_none_or(|b| ratio < *b) {
            bound = Some(ratio.clone());
        }
        ratios.push((step.name.clone(), ratio));
    }
    let bound = bound.ok_or(ChainError::WrongArity { expected: 1, got: 0 })?;
    Ok(ChainBound { bound, ratios })
}

/// S-invariant of the two-region parametric family `Z ~ a·σ + b·(fiber)`
/// over the degree-4 table `form`, for rational 1 ≤ b ≤ a. The first region
/// runs the fiber parameter to `t/b` for `t ≤ b/a`, the second to
/// `(1-t)/(a-b)` for `b/a ≤ t ≤ 1`.
pub fn parametric_z_s(
    form: &IntersectionForm,
    a: &Rat,
    b: &Rat,
) -> Result<Rat, ChainError> {
    let one = Rat::from_integer(1.into());
    if b < &one || a < b {
        return Err(ChainError::ParameterRange(format!(
            "need 1 ≤ b ≤ a, got a = {}, b = {}",
            rat_str(a),
            rat_str(b)
        )));
    }
    let vars = ["t", "s"];
    let t = Poly::var(&vars, "t");
    let s = Poly::var(&vars, "s");
    let one_p = Poly::constant(&vars, one.clone());
    // mobile class (1 - s·a)·σ1 + (t - s·b)·h
    let sigma_coeff = one_p.sub(&s.scale(a));
    let h_coeff = t.sub(&s.scale(b));
    let expr = DivisorExpression::new(&[
        (&form.basis()[0].clone(), sigma_coeff),
        (&form.basis()[1].clone(), h_coeff),
    ]);
    let vol = expand_power(form, &expr)?;

    let zero = Rat::zero();
    let mut cells: Vec<Polytope> = Vec::new();
    // region 1: 0 ≤ t ≤ b/a, 0 ≤ s ≤ t/b  (i.e. s·b ≤ t)
    cells.push(Polytope::from_halfspaces(
        2,
        &[
            Halfspace::new(vec![-one.clone(), zero.clone()], zero.clone()),
            Halfspace::new(vec![a.clone(), zero.clone()], b.clone()),
            Halfspace::new(vec![zero.clone(), -one.clone()], zero.clone()),
            Halfspace::new(vec![-one.clone(), b.clone()], zero.clone()),
        ],
    )?);
    // region 2 (only when a > b): b/a ≤ t ≤ 1, 0 ≤ s·(a-b) ≤ 1 - t
    if a > b {
        cells.push(Polytope::from_halfspaces(
            2,
            &[
                Halfspace::new(vec![-a.clone(), zero.clone()], -b.clone()),
                Halfspace::new(vec![one.clone(), zero.clone()], one.clone()),
                Halfspace::new(vec![zero.clone(), -one.clone()], zero.clone()),
                Halfspace::new(vec![one.clone(), a.clone() - b.clone()], one.clone()),
            ],
        )?);
    }
    // (5!/V)·∫ vol/4! with V = 5 collapses to the plain integral
    let mut acc = Rat::zero();
    for cell in &cells {
        acc += cell.integrate(&vol)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{rat, rat_i};

    pub(crate) fn interval_cell(lo: Rat, hi: Rat) -> Polytope {
        Polytope::from_halfspaces(
            1,
            &[
                Halfspace::new(vec![rat_i(-1)], -lo),
                Halfspace::new(vec![rat_i(1)], hi),
            ],
        )
        .unwrap()
    }

    fn poly_u(terms: &[(Rat, u32)]) -> Poly {
        Poly::from_terms(
            &["u"],
            &terms
                .iter()
                .map(|(c, e)| (c.clone(), vec![*e]))
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn hyperplane_pattern_first_step() {
        // vol = (1-u)^(n-1) on [0,1], V = 1 gives 1/(n+1)
        for n in 2u32..=5 {
            let mut vol = poly_u(&[(rat_i(1), 0)]);
            let one_minus_u = poly_u(&[(rat_i(1), 0), (rat_i(-1), 1)]);
            for _ in 0..n - 1 {
                vol = vol.mul(&one_minus_u);
            }
            let pv = PiecewiseVolume {
                params: vec!["u".into()],
                piece_dim: n - 1,
                pieces: vec![VolumePiece {
                    cell: interval_cell(rat_i(0), rat_i(1)),
                    vol,
                }],
            };
            assert_eq!(
                s_first(&pv, &rat_i(1), n).unwrap(),
                rat(1, (n + 1) as i64),
                "n = {n}"
            );
        }
    }

    #[test]
    fn first_step_arity_checks() {
        let pv = PiecewiseVolume {
            params: vec!["u".into(), "v".into()],
            piece_dim: 3,
            pieces: vec![],
        };
        assert!(matches!(
            s_first(&pv, &rat_i(5), 4),
            Err(ChainError::WrongArity { .. })
        ));
    }

    #[test]
    fn adjusted_discrepancy_examples() {
        let mk = |a: Rat, boundary: Vec<BoundaryAdjustment>| FiltrationStep {
            name: "X".into(),
            kind: StepKind::Refinement,
            log_discrepancy: a,
            boundary,
            volume: PiecewiseVolume {
                params: vec!["u".into(), "v".into()],
                piece_dim: 3,
                pieces: vec![],
            },
        };
        let s = mk(
            rat_i(1),
            vec![BoundaryAdjustment {
                coeff: rat(1, 9),
                ord: rat_i(0),
            }],
        );
        assert_eq!(adjusted_log_discrepancy(&s).unwrap(), rat_i(1));
        let s = mk(
            rat_i(1),
            vec![BoundaryAdjustment {
                coeff: rat(2, 9),
                ord: rat_i(1),
            }],
        );
        assert_eq!(adjusted_log_discrepancy(&s).unwrap(), rat(7, 9));
        let s = mk(rat_i(1), vec![]);
        assert_eq!(adjusted_log_discrepancy(&s).unwrap(), rat_i(1));
        let s = mk(
            rat_i(1),
            vec![BoundaryAdjustment {
                coeff: rat_i(2),
                ord: rat_i(1),
            }],
        );
        assert!(matches!(
            adjusted_log_discrepancy(&s),
            Err(ChainError::NonPositiveDiscrepancy { .. })
        ));
    }

    #[test]
    fn refine_additivity_under_cell_split() {
        // splitting a cell by a hyperplane leaves s_refine unchanged
        let vars = ["u", "v"];
        let vol = Poly::from_terms(
            &vars,
            &[(rat_i(1), vec![1, 0]), (rat_i(2), vec![0, 1]), (rat_i(1), vec![1, 1])],
        );
        let square = Polytope::from_halfspaces(
            2,
            &[
                Halfspace::new(vec![rat_i(-1), rat_i(0)], rat_i(0)),
                Halfspace::new(vec![rat_i(1), rat_i(0)], rat_i(1)),
                Halfspace::new(vec![rat_i(0), rat_i(-1)], rat_i(0)),
                Halfspace::new(vec![rat_i(0), rat_i(1)], rat_i(1)),
            ],
        )
        .unwrap();
        let cut = Halfspace::new(vec![rat_i(1), rat_i(-2)], rat(1, 3));
        let flip = Halfspace::new(vec![rat_i(-1), rat_i(2)], rat(-1, 3));
        let left = square.intersect_halfspace(&cut).unwrap().unwrap();
        let right = square.intersect_halfspace(&flip).unwrap().unwrap();
        let whole = PiecewiseVolume {
            params: vec!["u".into(), "v".into()],
            piece_dim: 3,
            pieces: vec![VolumePiece { cell: square, vol: vol.clone() }],
        };
        let split = PiecewiseVolume {
            params: vec!["u".into(), "v".into()],
            piece_dim: 3,
            pieces: vec![
                VolumePiece { cell: left, vol: vol.clone() },
                VolumePiece { cell: right, vol },
            ],
        };
        let a = s_refine(&whole, &rat_i(5), 4).unwrap();
        let b = s_refine(&split, &rat_i(5), 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parametric_range_is_enforced() {
        let form = IntersectionForm::new(
            4,
            &["s1", "h"],
            &[
                (vec!["s1", "s1", "s1", "s1"], rat_i(0)),
                (vec!["s1", "s1", "s1", "h"], rat_i(1)),
                (vec!["s1", "s1", "h", "h"], rat_i(0)),
                (vec!["s1", "h", "h", "h"], rat_i(-1)),
                (vec!["h", "h", "h", "h"], rat_i(0)),
            ],
        )
        .unwrap();
        assert!(matches!(
            parametric_z_s(&form, &rat_i(1), &rat_i(2)),
            Err(ChainError::ParameterRange(_))
        ));
        assert!(matches!(
            parametric_z_s(&form, &rat(1, 2), &rat(1, 2)),
            Err(ChainError::ParameterRange(_))
        ));
    }
}
