//! Exact arithmetic layer: arbitrary-precision rationals, sparse multivariate
//! polynomials, exact linear algebra, closed-form polynomial-times-exponential
//! integrals, fixed-point decimals and bracketed root finding.
//!
//! All values are immutable after construction and all operations are pure.

pub mod affine;
pub mod autspace;
pub mod decimal;
pub mod exppoly;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod rootfind;

pub use affine::AffineFunction;
pub use autspace::constrained_matrix_space;
pub use decimal::Decimal;
pub use exppoly::{integrate_poly_exp, ExpPoly};
pub use linalg::Mat;
pub use poly::Poly;
pub use rational::{parse_rat, rat, rat_i, rat_str, Rat};
pub use rootfind::{solve_root_bracketed, RootError};
