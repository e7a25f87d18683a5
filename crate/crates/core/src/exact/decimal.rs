//! Fixed-point decimals on `BigInt` mantissas.
//!
//! A `Decimal` is `man · 10^(-scale)`. All final numeric evaluation in the
//! crate happens here at a configurable working precision (default 30
//! significant digits plus guard digits), so that 16-digit reference values
//! remain checkable at 1e-12 tolerances. Rounding is round-half-even
//! everywhere a scale is reduced.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::rational::Rat;

/// Default number of working decimal digits.
pub const DEFAULT_PRECISION: u32 = 30;

/// Extra digits carried internally by transcendental kernels.
const GUARD: u32 = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decimal {
    man: BigInt,
    scale: u32,
}

fn pow10(k: u32) -> BigInt {
    BigInt::from(10u32).pow(k)
}

/// Nearest integer to `n / d` for d > 0, ties to even.
fn div_nearest(n: BigInt, d: &BigInt) -> BigInt {
    debug_assert!(d.is_positive());
    let (q, r) = num_integer::Integer::div_mod_floor(&n, d);
    let twice = &r * BigInt::from(2);
    match twice.cmp(d) {
        Ordering::Less => q,
        Ordering::Greater => q + 1,
        Ordering::Equal => {
            if num_integer::Integer::is_even(&q) {
                q
            } else {
                q + 1
            }
        }
    }
}

impl Decimal {
    pub fn zero(scale: u32) -> Self {
        Decimal {
            man: BigInt::zero(),
            scale,
        }
    }

    pub fn one(scale: u32) -> Self {
        Decimal {
            man: pow10(scale),
            scale,
        }
    }

    pub fn from_i64(v: i64, scale: u32) -> Self {
        Decimal {
            man: BigInt::from(v) * pow10(scale),
            scale,
        }
    }

    /// Nearest fixed-point value of an exact rational (ties to even).
    pub fn from_rat(r: &Rat, scale: u32) -> Self {
        let num = r.numer() * pow10(scale);
        Decimal {
            man: div_nearest(num, r.denom()),
            scale,
        }
    }

    /// Parse a plain decimal literal (`-1.25`, `81`) exactly at its written
    /// scale. Exponent forms are not accepted.
    pub fn parse(s: &str) -> Option<Self> {
        let t = s.trim();
        let (sign, rest) = match t.strip_prefix('-') {
            Some(r) => (-1i32, r),
            None => (1, t.strip_prefix('+').unwrap_or(t)),
        };
        if rest.is_empty() {
            return None;
        }
        let (int_part, frac_part) = match rest.split_once('.') {
            Some((i, f)) => (i, f),
            None => (rest, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return None;
        }
        let digits = format!("{}{}", int_part, frac_part);
        let man: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().ok()?
        };
        Some(Decimal {
            man: man * sign,
            scale: frac_part.len() as u32,
        })
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn neg(&self) -> Self {
        Decimal {
            man: -self.man.clone(),
            scale: self.scale,
        }
    }

    pub fn abs(&self) -> Self {
        Decimal {
            man: self.man.abs(),
            scale: self.scale,
        }
    }

    /// Exact when raising the scale, round-half-even when lowering it.
    pub fn rescale(&self, scale: u32) -> Self {
        if scale >= self.scale {
            Decimal {
                man: &self.man * pow10(scale - self.scale),
                scale,
            }
        } else {
            Decimal {
                man: div_nearest(self.man.clone(), &pow10(self.scale - scale)),
                scale,
            }
        }
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, u32) {
        let scale = self.scale.max(other.scale);
        let a = &self.man * pow10(scale - self.scale);
        let b = &other.man * pow10(scale - other.scale);
        (a, b, scale)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b, scale) = self.aligned(other);
        Decimal { man: a + b, scale }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b, scale) = self.aligned(other);
        Decimal { man: a - b, scale }
    }

    /// Product rounded back to the larger operand scale.
    pub fn mul(&self, other: &Self) -> Self {
        let scale = self.scale.max(other.scale);
        let prod = &self.man * &other.man;
        let drop = self.scale + other.scale - scale;
        Decimal {
            man: div_nearest(prod, &pow10(drop)),
            scale,
        }
    }

    /// Quotient at the larger operand scale (round-half-even).
    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "decimal division by zero");
        let scale = self.scale.max(other.scale);
        // self/other = (a / b) · 10^(other.scale - self.scale); target scale
        // needs mantissa round(a · 10^(scale + other.scale - self.scale) / b)
        let shift = scale + other.scale - self.scale;
        let mut num = &self.man * pow10(shift);
        let mut den = other.man.clone();
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Decimal {
            man: div_nearest(num, &den),
            scale,
        }
    }

    pub fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_plain_string().parse().unwrap_or(f64::NAN)
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, k: i32) -> Self {
        if k < 0 {
            return Decimal::one(self.scale).div(&self.powi(-k));
        }
        let mut acc = Decimal::one(self.scale);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// e^self at the value's scale (computed with guard digits).
    pub fn exp(&self) -> Self {
        let scale = self.scale;
        let work = scale + GUARD;
        let mut x = self.rescale(work);
        // halve until |x| < 1/4, then Taylor, then square back
        let quarter = Decimal {
            man: pow10(work) / BigInt::from(4),
            scale: work,
        };
        let two = Decimal::from_i64(2, work);
        let mut halvings = 0u32;
        while x.abs().cmp(&quarter) == Ordering::Greater {
            x = x.div(&two);
            halvings += 1;
            assert!(halvings < 64, "exp argument out of supported range");
        }
        let mut sum = Decimal::one(work);
        let mut term = Decimal::one(work);
        let mut n = 1i64;
        loop {
            term = term.mul(&x).div(&Decimal::from_i64(n, work));
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term);
            n += 1;
            assert!(n < 500, "exp series failed to converge");
        }
        for _ in 0..halvings {
            sum = sum.mul(&sum);
        }
        sum.rescale(scale)
    }

    /// Natural log of a positive value, Newton-corrected from an f64 seed.
    pub fn ln(&self) -> Self {
        assert!(
            !self.is_zero() && !self.is_negative(),
            "ln wants a positive argument"
        );
        let scale = self.scale;
        let work = scale + GUARD;
        let x = self.rescale(work);
        let seed = self.to_f64().ln();
        assert!(seed.is_finite(), "ln seed out of f64 range");
        let mut y = Decimal::parse(&format!("{:.17}", seed))
            .expect("seed formats as plain decimal")
            .rescale(work);
        // y <- y + (x·e^(-y) - 1); quadratic convergence from ~15 digits
        for _ in 0..6 {
            let e = y.neg().exp();
            let corr = x.mul(&e).sub(&Decimal::one(work));
            y = y.add(&corr);
        }
        y.rescale(scale)
    }

    /// Decimal string with all stored digits (no exponent form).
    pub fn to_plain_string(&self) -> String {
        let neg = self.man.is_negative();
        let digits = self.man.abs().to_string();
        let scale = self.scale as usize;
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        if scale == 0 {
            s.push_str(&digits);
            return s;
        }
        if digits.len() <= scale {
            s.push_str("0.");
            s.push_str(&"0".repeat(scale - digits.len()));
            s.push_str(&digits);
        } else {
            let (int_part, frac_part) = digits.split_at(digits.len() - scale);
            s.push_str(int_part);
            s.push('.');
            s.push_str(frac_part);
        }
        s
    }

    /// Round to `sig` significant digits (half-even) and print without an
    /// exponent. Trailing zeros within the significant digits are kept.
    pub fn to_sig_string(&self, sig: u32) -> String {
        assert!(sig > 0);
        if self.man.is_zero() {
            return "0".to_string();
        }
        let ndigits = self.man.abs().to_string().len() as i64;
        let lead_exp = ndigits - self.scale as i64; // leading digit sits at 10^(lead_exp-1)
        let target = sig as i64 - lead_exp; // scale that keeps `sig` digits
        let mut rounded = if target >= 0 {
            self.rescale(target as u32)
        } else {
            let k = (-target) as u32;
            let man = div_nearest(self.man.clone(), &pow10(self.scale + k)) * pow10(k);
            Decimal { man, scale: 0 }
        };
        // rounding can carry into one more digit (9.99 -> 10.0)
        let new_ndigits = rounded.man.abs().to_string().len() as i64;
        if new_ndigits - (rounded.scale as i64) > lead_exp && rounded.scale > 0 {
            rounded = rounded.rescale(rounded.scale - 1);
        }
        rounded.to_plain_string()
    }
}
