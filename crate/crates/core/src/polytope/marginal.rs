//! Exact fiber integration: reduce `∫_P f` over a polytope to a piecewise
//! polynomial in the first coordinate.
//!
//! For a full-dimensional polytope P and polynomial f, the function
//! `g(x) = ∫_{P ∩ {x_0 = x}} f` is a polynomial of degree ≤ deg f + dim - 1
//! between consecutive vertex x₀-coordinates. Each chamber polynomial is
//! recovered exactly by integrating slices at deg+1 rational nodes and
//! Lagrange interpolation.

use num_traits::{One, Zero};

use crate::exact::poly::Poly;
use crate::exact::rational::{Rat, rat_i};

use super::{Polytope, PolytopeError};

/// A univariate piecewise polynomial: disjoint closed intervals with one
/// polynomial each, in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewisePoly {
    pub var: String,
    pub pieces: Vec<(Rat, Rat, Poly)>,
}

impl PiecewisePoly {
    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        for (lo, hi, p) in &self.pieces {
            if x >= lo && x <= hi {
                return Some(p.eval(std::slice::from_ref(x)));
            }
        }
        None
    }
}

/// Integrate out all coordinates but the first, exactly.
pub fn marginal_over_fibers(p: &Polytope, f: &Poly) -> Result<PiecewisePoly, PolytopeError> {
    if f.vars().len() != p.dim() {
        return Err(PolytopeError::VariableMismatch {
            vars: f.vars().len(),
            dim: p.dim(),
        });
    }
    let var = f.vars()[0].clone();
    if p.dim() == 1 {
        let (lo, hi) = p.axis_range(0);
        return Ok(PiecewisePoly {
            var,
            pieces: vec![(lo, hi, f.clone())],
        });
    }

    // chamber breakpoints: distinct vertex coordinates along axis 0
    let mut breaks: Vec<Rat> = p.vertices().iter().map(|v| v[0].clone()).collect();
    breaks.sort();
    breaks.dedup();

    // slice integrand: f with x0 fixed, over the remaining variables
    let rest: Vec<&str> = f.vars()[1..].iter().map(|s| s.as_str()).collect();
    let degree_bound = (f.total_degree() as usize) + p.dim() - 1;

    let mut pieces = Vec::new();
    for w in breaks.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        let width = hi.clone() - lo.clone();
        let nodes: Vec<Rat> = (1..=degree_bound + 1)
            .map(|i| {
                lo.clone()
                    + width.clone() * rat_i(i as i64) / rat_i(degree_bound as i64 + 2)
            })
            .collect();
        let mut values = Vec::new();
        for x in &nodes {
            let val = match p.slice(0, x)? {
                Some(s) => {
                    let g = f
                        .eval_var(0, x)
                        .with_vars(&rest)
                        .expect("slice integrand lost a variable");
                    s.integrate(&g)?
                }
                None => Rat::zero(),
            };
            values.push(val);
        }
        let poly = lagrange_interpolate(&var, &nodes, &values);
        pieces.push((lo.clone(), hi.clone(), poly));
    }
    Ok(PiecewisePoly { var, pieces })
}

/// Exact univariate Lagrange interpolation through distinct rational nodes.
fn lagrange_interpolate(var: &str, nodes: &[Rat], values: &[Rat]) -> Poly {
    let vars = [var];
    let x = Poly::var(&vars, var);
    let mut acc = Poly::zero(&vars);
    for (j, yj) in values.iter().enumerate() {
        if yj.is_zero() {
            continue;
        }
        let mut basis = Poly::constant(&vars, Rat::one());
        let mut denom = Rat::one();
        for (m, xm) in nodes.iter().enumerate() {
            if m == j {
                continue;
            }
            basis = basis.mul(&x.sub(&Poly::constant(&vars, xm.clone())));
            denom *= nodes[j].clone() - xm.clone();
        }
        acc = acc.add(&basis.scale(&(yj.clone() / denom)));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use crate::polytope::Halfspace;

    #[test]
    fn marginal_of_triangle() {
        // triangle 0 <= y <= x <= 1; fiber length is x, so marginal of 1 is x
        let hs = [
            Halfspace::new(vec![rat_i(-1), rat_i(0)], rat_i(0)),
            Halfspace::new(vec![rat_i(1), rat_i(0)], rat_i(1)),
            Halfspace::new(vec![rat_i(0), rat_i(-1)], rat_i(0)),
            Halfspace::new(vec![rat_i(-1), rat_i(1)], rat_i(0)),
        ];
        let p = Polytope::from_halfspaces(2, &hs).unwrap();
        let one = Poly::constant(&["x", "y"], rat_i(1));
        let m = marginal_over_fibers(&p, &one).unwrap();
        assert_eq!(m.pieces.len(), 1);
        assert_eq!(m.eval(&rat(1, 3)).unwrap(), rat(1, 3));
        // integral of the marginal equals the area
        let (lo, hi, poly) = &m.pieces[0];
        let anti = poly.antiderivative(0);
        let total = anti.eval(std::slice::from_ref(hi)) - anti.eval(std::slice::from_ref(lo));
        assert_eq!(total, p.volume());
    }

    #[test]
    fn marginal_with_breakpoint() {
        // unit square cut to a pentagon: x + y <= 3/2 introduces a chamber at x = 1/2
        let hs = [
            Halfspace::new(vec![rat_i(-1), rat_i(0)], rat_i(0)),
            Halfspace::new(vec![rat_i(1), rat_i(0)], rat_i(1)),
            Halfspace::new(vec![rat_i(0), rat_i(-1)], rat_i(0)),
            Halfspace::new(vec![rat_i(0), rat_i(1)], rat_i(1)),
            Halfspace::new(vec![rat_i(1), rat_i(1)], rat(3, 2)),
        ];
        let p = Polytope::from_halfspaces(2, &hs).unwrap();
        let f = Poly::var(&["x", "y"], "y");
        let m = marginal_over_fibers(&p, &f).unwrap();
        assert_eq!(m.pieces.len(), 2);
        // for x <= 1/2 the fiber is [0,1]: ∫ y dy = 1/2
        assert_eq!(m.eval(&rat(1, 4)).unwrap(), rat(1, 2));
        // for x > 1/2 the fiber is [0, 3/2 - x]: ∫ y dy = (3/2 - x)²/2
        assert_eq!(m.eval(&rat(3, 4)).unwrap(), rat(9, 32));
    }
}
