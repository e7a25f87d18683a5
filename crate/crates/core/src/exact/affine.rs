//! Affine functions `c + a·x` with rational coefficients.

use num_traits::Zero;

use super::poly::Poly;
use super::rational::Rat;

/// An affine function on an ambient space of fixed dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFunction {
    pub coeffs: Vec<Rat>,
    pub constant: Rat,
}

impl AffineFunction {
    pub fn new(coeffs: Vec<Rat>, constant: Rat) -> Self {
        AffineFunction { coeffs, constant }
    }

    pub fn zero(dim: usize) -> Self {
        AffineFunction {
            coeffs: vec![Rat::zero(); dim],
            constant: Rat::zero(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        assert_eq!(x.len(), self.coeffs.len(), "point arity mismatch");
        let mut acc = self.constant.clone();
        for (c, xi) in self.coeffs.iter().zip(x) {
            acc += c.clone() * xi.clone();
        }
        acc
    }

    pub fn add(&self, other: &AffineFunction) -> AffineFunction {
        assert_eq!(self.dim(), other.dim());
        AffineFunction {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
            constant: self.constant.clone() + other.constant.clone(),
        }
    }

    pub fn scale(&self, k: &Rat) -> AffineFunction {
        AffineFunction {
            coeffs: self.coeffs.iter().map(|c| c.clone() * k).collect(),
            constant: self.constant.clone() * k,
        }
    }

    pub fn add_constant(&self, k: &Rat) -> AffineFunction {
        AffineFunction {
            coeffs: self.coeffs.clone(),
            constant: self.constant.clone() + k,
        }
    }

    /// Degree-≤1 polynomial over the given variable names.
    pub fn to_poly(&self, vars: &[&str]) -> Poly {
        assert_eq!(vars.len(), self.coeffs.len());
        let mut terms: Vec<(Rat, Vec<u32>)> = vec![(self.constant.clone(), vec![0; vars.len()])];
        for (i, c) in self.coeffs.iter().enumerate() {
            let mut e = vec![0; vars.len()];
            e[i] = 1;
            terms.push((c.clone(), e));
        }
        Poly::from_terms(vars, &terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{rat, rat_i};

    #[test]
    fn eval_and_poly_agree() {
        let g = AffineFunction::new(vec![rat_i(3), rat_i(4), rat_i(1), rat_i(2)], rat_i(0));
        let pt = [rat(1, 2), rat_i(0), rat_i(1), rat(1, 3)];
        let p = g.to_poly(&["w", "x", "y", "z"]);
        assert_eq!(g.eval(&pt), p.eval(&pt));
        assert_eq!(g.eval(&pt), rat(1, 2) * rat_i(3) + rat_i(1) + rat(2, 3));
    }
}
