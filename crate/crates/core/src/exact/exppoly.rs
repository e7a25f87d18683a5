//! Exact carriers for integrals of the form `∫ q(u)·e^(c·u·ξ) du`.
//!
//! For a rational slope c ≠ 0 the antiderivative is
//! `e^(cuξ)·(q/(cξ) - q'/(cξ)² + q''/(cξ)³ - …)`, so a definite integral is a
//! finite sum of terms `r · ξ^(-k) · e^(q·ξ)` with exact rational r, q. The
//! `ExpPoly` type stores exactly those terms keyed on (slope, inverse power);
//! only the final evaluation at a numeric ξ leaves exact arithmetic, and that
//! happens in fixed-point [`Decimal`] arithmetic. Slope-zero integrals stay
//! purely rational (the (0, 0) slot).
//!
//! Terms with k > 0 have a removable singularity at ξ = 0 that only cancels
//! across a full sum, so evaluation at ξ = 0 is rejected unless the
//! expression is purely rational; callers integrate with slope 0 instead.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::decimal::Decimal;
use super::poly::Poly;
use super::rational::{rat_pow, Rat};

/// `Σ r · ξ^(-k) · e^(q·ξ)` keyed on `(q, k)`, plus the rational slot (0, 0).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExpPoly {
    terms: BTreeMap<(Rat, u32), Rat>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly::default()
    }

    pub fn from_rat(r: Rat) -> Self {
        let mut e = ExpPoly::zero();
        e.add_term(Rat::zero(), 0, r);
        e
    }

    pub fn add_term(&mut self, slope: Rat, inv_pow: u32, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry((slope, inv_pow)) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        for ((q, k), r) in &other.terms {
            out.add_term(q.clone(), *k, r.clone());
        }
        out
    }

    pub fn scale(&self, k: &Rat) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for ((q, p), r) in &self.terms {
            out.add_term(q.clone(), *p, r.clone() * k);
        }
        out
    }

    /// Shift every slope by `delta` (multiply by `e^(delta·ξ)`).
    pub fn shift_slope(&self, delta: &Rat) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for ((q, p), r) in &self.terms {
            out.add_term(q.clone() + delta.clone(), *p, r.clone());
        }
        out
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|(q, k)| q.is_zero() && *k == 0)
    }

    /// The exact rational value, when no exponential term is present.
    pub fn as_rat(&self) -> Option<Rat> {
        if !self.is_rational() {
            return None;
        }
        Some(
            self.terms
                .get(&(Rat::zero(), 0))
                .cloned()
                .unwrap_or_else(Rat::zero),
        )
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Rat, u32), &Rat)> {
        self.terms.iter()
    }

    /// Evaluate at a numeric ξ. Panics when ξ = 0 meets an exponential or
    /// inverse-power term (integrate with slope zero for that case).
    pub fn eval(&self, xi: &Decimal) -> Decimal {
        let scale = xi.scale();
        if xi.is_zero() {
            let r = self
                .as_rat()
                .expect("evaluation at 0 needs a purely rational expression");
            return Decimal::from_rat(&r, scale);
        }
        let mut exp_cache: BTreeMap<Rat, Decimal> = BTreeMap::new();
        let mut pow_cache: BTreeMap<u32, Decimal> = BTreeMap::new();
        let mut acc = Decimal::zero(scale);
        for ((q, k), r) in &self.terms {
            let mut term = Decimal::from_rat(r, scale);
            if !q.is_zero() {
                let e = exp_cache
                    .entry(q.clone())
                    .or_insert_with(|| Decimal::from_rat(q, scale).mul(xi).exp());
                term = term.mul(e);
            }
            if *k > 0 {
                let p = pow_cache.entry(*k).or_insert_with(|| xi.powi(-(*k as i32)));
                term = term.mul(p);
            }
            acc = acc.add(&term);
        }
        acc
    }
}

/// Exact closed form of `∫_a^b q(u)·e^(slope·u·ξ) du` as a function of ξ.
///
/// `q` must be univariate. With slope = 0 the result is the plain rational
/// definite integral.
pub fn integrate_poly_exp(q: &Poly, slope: &Rat, interval: (&Rat, &Rat)) -> ExpPoly {
    assert!(q.vars().len() == 1, "integrand must be univariate");
    let (a, b) = interval;
    assert!(a <= b, "interval endpoints out of order");
    if slope.is_zero() {
        let anti = q.antiderivative(0);
        let val = anti.eval(std::slice::from_ref(b)) - anti.eval(std::slice::from_ref(a));
        return ExpPoly::from_rat(val);
    }
    let mut out = ExpPoly::zero();
    let mut deriv = q.clone();
    let mut j: u32 = 0;
    let mut sign = Rat::from_integer(1.into());
    while !deriv.is_zero() {
        let inv_c = rat_pow(slope, -((j + 1) as i32));
        for (endpoint, endpoint_sign) in [(b, 1i64), (a, -1i64)] {
            let coeff = sign.clone()
                * inv_c.clone()
                * deriv.eval(std::slice::from_ref(endpoint))
                * Rat::from_integer(endpoint_sign.into());
            out.add_term(slope.clone() * endpoint.clone(), j + 1, coeff);
        }
        deriv = deriv.derivative(0);
        j += 1;
        sign = -sign;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{rat, rat_i};

    fn u() -> Poly {
        Poly::var(&["u"], "u")
    }

    #[test]
    fn slope_zero_is_rational() {
        let one = Poly::constant(&["u"], rat_i(1));
        let r = integrate_poly_exp(&one, &Rat::zero(), (&rat_i(0), &rat_i(1)));
        assert_eq!(r.as_rat().unwrap(), rat_i(1));
        let r = integrate_poly_exp(&u(), &Rat::zero(), (&rat_i(0), &rat_i(2)));
        assert_eq!(r.as_rat().unwrap(), rat_i(2));
    }

    #[test]
    fn unit_exponential_integral() {
        // ∫_0^1 e^(-uξ) du at ξ=1 is 1 - e^(-1) ≈ 0.63212055882856
        let one = Poly::constant(&["u"], rat_i(1));
        let e = integrate_poly_exp(&one, &rat_i(-1), (&rat_i(0), &rat_i(1)));
        let xi = Decimal::one(30);
        let got = e.eval(&xi);
        let want = Decimal::parse("0.632120558828557678404476229839").unwrap();
        let diff = got.sub(&want).abs();
        assert!(diff.cmp(&Decimal::parse("0.00000000000000000000000000001").unwrap()).is_lt());
    }

    #[test]
    fn matches_rational_limit_for_tiny_slope_case() {
        // ∫_0^2 u e^(u·ξ/2) du at ξ = 2 equals 1 + e^2 (integration by parts)
        let e = integrate_poly_exp(&u(), &rat(1, 2), (&rat_i(0), &rat_i(2)));
        let xi = Decimal::from_i64(2, 30);
        let got = e.eval(&xi);
        let want = Decimal::one(30)
            .add(&Decimal::from_i64(2, 30).exp());
        let diff = got.sub(&want).abs();
        assert!(diff.cmp(&Decimal::parse("0.0000000000000000000000000001").unwrap()).is_lt());
    }

    #[test]
    fn slope_merging_is_exact() {
        let one = Poly::constant(&["u"], rat_i(1));
        let a = integrate_poly_exp(&one, &rat_i(-1), (&rat_i(0), &rat_i(1)));
        let b = a.scale(&rat_i(-1));
        let sum = a.add(&b);
        assert_eq!(sum, ExpPoly::zero());
    }

    #[test]
    fn eval_at_zero_requires_rational() {
        let r = ExpPoly::from_rat(rat(5, 4));
        assert_eq!(
            r.eval(&Decimal::zero(20)),
            Decimal::from_rat(&rat(5, 4), 20)
        );
    }
}
