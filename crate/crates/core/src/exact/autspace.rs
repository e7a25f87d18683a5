//! Constrained matrix spaces for automorphism Lie algebras.
//!
//! Solves, over the rationals, for the space of trace-zero matrices Q with
//!
//! ```text
//! QᵀJ  + J Q  ∈ span(J, J₂)
//! QᵀJ₂ + J₂Q  ∈ span(J, J₂)
//! ```
//!
//! for given skew-symmetric forms J, J₂ (either may be zero). The span
//! coefficients are carried as four auxiliary unknowns and eliminated by
//! projecting the nullspace back onto the matrix entries.

use num_traits::Zero;

use super::linalg::Mat;
use super::rational::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AutSpaceError {
    DimensionMismatch,
    NotSkewSymmetric,
}

impl std::fmt::Display for AutSpaceError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AutSpaceError::DimensionMismatch => write!(f, "forms must be square and equally sized"),
            AutSpaceError::NotSkewSymmetric => write!(f, "forms must be skew-symmetric"),
        }
    }
}

impl std::error::Error for AutSpaceError {}

fn check_skew(j: &Mat) -> Result<(), AutSpaceError> {
    if j.rows != j.cols {
        return Err(AutSpaceError::DimensionMismatch);
    }
    for i in 0..j.rows {
        for k in 0..j.cols {
            if j[(i, k)] != -j[(k, i)].clone() {
                return Err(AutSpaceError::NotSkewSymmetric);
            }
        }
    }
    Ok(())
}

/// Basis (over the rationals) of the constrained trace-zero matrix space.
pub fn constrained_matrix_space(j: &Mat, j2: &Mat) -> Result<Vec<Mat>, AutSpaceError> {
    check_skew(j)?;
    check_skew(j2)?;
    if j.rows != j2.rows {
        return Err(AutSpaceError::DimensionMismatch);
    }
    let n = j.rows;
    let unknowns = n * n + 4; // q entries then the span coefficients a,b,c,d
    let q_idx = |r: usize, c: usize| r * n + c;

    let mut rows: Vec<Vec<Rat>> = Vec::new();
    // (QᵀF + FQ)[i][k] = Σ_m Q[m][i]·F[m][k] + F[i][m]·Q[m][k]
    let mut push_constraint = |form: &Mat, span_a: usize, span_b: usize| {
        for i in 0..n {
            for k in (i + 1)..n {
                let mut row = vec![Rat::zero(); unknowns];
                for m in 0..n {
                    row[q_idx(m, i)] += form[(m, k)].clone();
                    row[q_idx(m, k)] += form[(i, m)].clone();
                }
                row[n * n + span_a] -= j[(i, k)].clone();
                row[n * n + span_b] -= j2[(i, k)].clone();
                rows.push(row);
            }
        }
    };
    push_constraint(j, 0, 1);
    push_constraint(j2, 2, 3);
    // trace zero
    let mut trace = vec![Rat::zero(); unknowns];
    for i in 0..n {
        trace[q_idx(i, i)] = Rat::from_integer(1.into());
    }
    rows.push(trace);

    let system = Mat::from_rows(rows);
    let null = system.nullspace();
    // project to the q-part and reduce to an independent basis
    let projected: Vec<Vec<Rat>> = null.into_iter().map(|v| v[..n * n].to_vec()).collect();
    if projected.is_empty() {
        return Ok(Vec::new());
    }
    let mut proj = Mat::from_rows(projected);
    let pivots = proj.rref();
    let mut basis = Vec::new();
    for r in 0..pivots.len() {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            for k in 0..n {
                m[(i, k)] = proj[(r, q_idx(i, k))].clone();
            }
        }
        basis.push(m);
    }
    Ok(basis)
}

/// True when `QᵀF + FQ` lies in span(J, J₂); used to validate solutions.
pub fn satisfies_span_constraint(q: &Mat, form: &Mat, j: &Mat, j2: &Mat) -> bool {
    let n = q.rows;
    let mut lhs = Mat::zero(n, n);
    for i in 0..n {
        for k in 0..n {
            let mut acc = Rat::zero();
            for m in 0..n {
                acc += q[(m, i)].clone() * form[(m, k)].clone()
                    + form[(i, m)].clone() * q[(m, k)].clone();
            }
            lhs[(i, k)] = acc;
        }
    }
    // rank test over vectorized upper triangles
    let vec_of = |m: &Mat| -> Vec<Rat> {
        let mut v = Vec::new();
        for i in 0..n {
            for k in (i + 1)..n {
                v.push(m[(i, k)].clone());
            }
        }
        v
    };
    let base = Mat::from_rows(vec![vec_of(j), vec_of(j2)]);
    let with = Mat::from_rows(vec![vec_of(j), vec_of(j2), vec_of(&lhs)]);
    base.rank() == with.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat_i;

    #[test]
    fn zero_forms_give_all_of_sl_n() {
        for n in [2usize, 3, 4] {
            let z = Mat::zero(n, n);
            let basis = constrained_matrix_space(&z, &z).unwrap();
            assert_eq!(basis.len(), n * n - 1);
            for m in &basis {
                let tr: Rat = (0..n).map(|i| m[(i, i)].clone()).sum();
                assert!(tr.is_zero());
            }
        }
    }

    #[test]
    fn mismatched_sizes_error() {
        let a = Mat::zero(3, 3);
        let b = Mat::zero(4, 4);
        assert_eq!(
            constrained_matrix_space(&a, &b),
            Err(AutSpaceError::DimensionMismatch)
        );
    }

    #[test]
    fn non_skew_rejected() {
        let mut a = Mat::zero(2, 2);
        a[(0, 0)] = rat_i(1);
        let z = Mat::zero(2, 2);
        assert_eq!(
            constrained_matrix_space(&a, &z),
            Err(AutSpaceError::NotSkewSymmetric)
        );
    }
}
