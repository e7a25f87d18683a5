//! Sparse multivariate polynomials with rational coefficients.
//!
//! A `Poly` carries an ordered list of variable names and a map from exponent
//! vectors to nonzero coefficients. Zero coefficients are never stored.
//! Arithmetic between polynomials requires identical variable lists; use
//! [`Poly::with_vars`] to move a polynomial into a larger context first.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::rational::{rat_pow, Rat};

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl Poly {
    pub fn zero(vars: &[&str]) -> Self {
        Poly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], c: Rat) -> Self {
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.vars.len()], c);
        }
        p
    }

    /// The variable `name` as a monomial. Panics if unknown.
    pub fn var(vars: &[&str], name: &str) -> Self {
        let mut p = Poly::zero(vars);
        let i = p.var_index(name).expect("unknown variable");
        let mut e = vec![0; p.vars.len()];
        e[i] = 1;
        p.terms.insert(e, Rat::from_integer(1.into()));
        p
    }

    /// Build from explicit (coefficient, exponent vector) terms.
    pub fn from_terms(vars: &[&str], terms: &[(Rat, Vec<u32>)]) -> Self {
        let mut p = Poly::zero(vars);
        for (c, e) in terms {
            assert_eq!(e.len(), p.vars.len(), "exponent arity mismatch");
            p.add_term(c.clone(), e.clone());
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Degree in one variable.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    fn add_term(&mut self, c: Rat, e: Vec<u32>) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn assert_same_vars(&self, other: &Poly) {
        assert_eq!(self.vars, other.vars, "variable context mismatch");
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.assert_same_vars(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(c.clone(), e.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        let mut out = Poly::zero_owned(self.vars.clone());
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c.clone());
        }
        out
    }

    fn zero_owned(vars: Vec<String>) -> Poly {
        Poly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn scale(&self, k: &Rat) -> Poly {
        let mut out = Poly::zero_owned(self.vars.clone());
        if k.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c.clone() * k);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.assert_same_vars(other);
        let mut out = Poly::zero_owned(self.vars.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(ca.clone() * cb.clone(), e);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::constant_owned(self.vars.clone(), Rat::from_integer(1.into()));
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    fn constant_owned(vars: Vec<String>, c: Rat) -> Poly {
        let mut p = Poly::zero_owned(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.vars.len()], c);
        }
        p
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.vars.len(), "point arity mismatch");
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    m *= rat_pow(x, k as i32);
                }
            }
            acc += m;
        }
        acc
    }

    /// Substitute each variable by a polynomial over a new context.
    pub fn substitute(&self, new_vars: &[&str], images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.vars.len(), "image arity mismatch");
        for img in images {
            assert_eq!(
                img.vars,
                new_vars.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "image context mismatch"
            );
        }
        let mut acc = Poly::zero(new_vars);
        for (e, c) in &self.terms {
            let mut m = Poly::constant(new_vars, c.clone());
            for (img, &k) in images.iter().zip(e) {
                if k > 0 {
                    m = m.mul(&img.pow(k));
                }
            }
            acc = acc.add(&m);
        }
        acc
    }

    /// Re-express over a variable list that contains all variables this
    /// polynomial actually uses; returns `None` if one is missing.
    pub fn with_vars(&self, new_vars: &[&str]) -> Option<Poly> {
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| new_vars.iter().position(|w| w == v))
            .collect();
        let mut out = Poly::zero(new_vars);
        for (e, c) in &self.terms {
            let mut ne = vec![0u32; new_vars.len()];
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    match map[i] {
                        Some(j) => ne[j] = k,
                        None => return None,
                    }
                }
            }
            out.add_term(c.clone(), ne);
        }
        Some(out)
    }

    /// Partial derivative in one variable.
    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero_owned(self.vars.clone());
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[var] -= 1;
            out.add_term(c.clone() * Rat::from_integer(e[var].into()), ne);
        }
        out
    }

    /// Antiderivative in one variable (constant of integration zero).
    pub fn antiderivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero_owned(self.vars.clone());
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne[var] += 1;
            out.add_term(
                c.clone() / Rat::from_integer(ne[var].into()),
                ne,
            );
        }
        out
    }

    /// Substitute a rational value for one variable, keeping the context.
    pub fn eval_var(&self, var: usize, x: &Rat) -> Poly {
        let mut out = Poly::zero_owned(self.vars.clone());
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let k = ne[var];
            ne[var] = 0;
            out.add_term(c.clone() * rat_pow(x, k as i32), ne);
        }
        out
    }

    /// Coefficients of a univariate polynomial in ascending degree order.
    ///
    /// Panics if any other variable occurs with a positive exponent.
    pub fn univariate_coeffs(&self, var: usize) -> Vec<Rat> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Rat::zero(); deg + 1];
        for (e, c) in &self.terms {
            for (i, &k) in e.iter().enumerate() {
                assert!(i == var || k == 0, "polynomial is not univariate");
            }
            out[e[var] as usize] = c.clone();
        }
        out
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c)?;
            for (v, &k) in self.vars.iter().zip(e) {
                match k {
                    0 => {}
                    1 => write!(f, "*{}", v)?,
                    _ => write!(f, "*{}^{}", v, k)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{rat, rat_i};

    fn p_u(terms: &[(i64, i64, u32)]) -> Poly {
        // (num, den, exp) over the single variable u
        Poly::from_terms(
            &["u"],
            &terms
                .iter()
                .map(|&(n, d, e)| (rat(n, d), vec![e]))
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn arithmetic_and_eval() {
        let u = Poly::var(&["u"], "u");
        let q = u.pow(3).scale(&rat_i(-2)).add(&u.scale(&rat_i(3)));
        assert_eq!(q, p_u(&[(3, 1, 1), (-2, 1, 3)]));
        assert_eq!(q.eval(&[rat(1, 2)]), rat(5, 4));
        assert_eq!(q.eval(&[rat_i(2)]), rat_i(-10));
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let u = Poly::var(&["u"], "u");
        let d = u.sub(&u);
        assert!(d.is_zero());
        assert_eq!(d.terms.len(), 0);
    }

    #[test]
    fn substitution_composes() {
        // f(u) = u^2 with u -> 2t+1 gives 4t^2 + 4t + 1.
        let f = Poly::var(&["u"], "u").pow(2);
        let img = Poly::from_terms(&["t"], &[(rat_i(2), vec![1]), (rat_i(1), vec![0])]);
        let g = f.substitute(&["t"], &[img]);
        assert_eq!(
            g,
            Poly::from_terms(
                &["t"],
                &[(rat_i(4), vec![2]), (rat_i(4), vec![1]), (rat_i(1), vec![0])]
            )
        );
    }

    #[test]
    fn derivative_antiderivative_inverse() {
        let q = p_u(&[(3, 1, 1), (-2, 1, 3), (7, 2, 0)]);
        let da = q.derivative(0).antiderivative(0);
        // constant term is lost by d/du
        assert_eq!(da, p_u(&[(3, 1, 1), (-2, 1, 3)]));
    }

    #[test]
    fn with_vars_embeds_context() {
        let q = p_u(&[(1, 1, 2)]);
        let q2 = q.with_vars(&["t", "u"]).unwrap();
        assert_eq!(q2.eval(&[rat_i(9), rat_i(3)]), rat_i(9));
        assert!(q.with_vars(&["t"]).is_none());
    }
}
