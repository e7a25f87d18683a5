//! Exact-arithmetic calculator for K-stability invariants of polarized
//! varieties presented as scenario data.
//!
//! The crate is organized around declarative scenario bundles (see
//! [`scenario`]): a bundle carries divisor intersection tables, Okounkov-body
//! data, piecewise restricted-volume functions, filtration chains, wall ratio
//! functions and soliton configuration. Everything upstream of the final
//! numeric soliton evaluations is computed in exact rational arithmetic.
//!
//! Module map:
//!
//! * [`exact`] — rationals, sparse multivariate polynomials, exact linear
//!   algebra, closed-form polynomial-times-exponential integrals, fixed-point
//!   decimals and bracketed root finding.
//! * [`polytope`] — convex polytopes in low dimension with dual
//!   representations, exact volume and polynomial integration.
//! * [`intersect`] — symmetric intersection forms and symbolic expansion of
//!   top self-intersections.
//! * [`valuation`] — weight-vector valuations: shifted weights, log
//!   discrepancies, G-functions, S-invariants and piecewise delta maps.
//! * [`azchain`] — refinement chains: step S-invariants from piecewise
//!   volumes, boundary-adjusted log discrepancies, chain lower bounds.
//! * [`stability`] — semistability walls, semistable domains, beta
//!   invariants and the cone bound.
//! * [`soliton`] — Duistermaat–Heckman measures, the H-functional and its
//!   minimizer, weighted volumes and weighted S-invariants.
//! * [`scenario`] — scenario bundle schema, validation and builtins.
//! * [`verify`] — the end-to-end verification suite used by the CLI and the
//!   acceptance tests.

pub mod azchain;
pub mod exact;
pub mod intersect;
pub mod polytope;
pub mod scenario;
pub mod soliton;
pub mod stability;
pub mod valuation;
pub mod verify;
