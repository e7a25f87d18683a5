//! Arbitrary-precision rationals.
//!
//! `Rat` is always stored in lowest terms with a positive denominator; both
//! invariants are maintained by `num_rational::BigRational` on every
//! operation. Scenario files and CLI output write rationals as `p/q` (or a
//! bare integer when q = 1), never as decimals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

/// `p/q` as a rational. Panics on q = 0; test/data helper.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Integer as a rational.
pub fn rat_i(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

/// Canonical text form: `p/q`, or `p` when the denominator is one.
pub fn rat_str(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRatError(pub String);

impl std::fmt::Display for ParseRatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid rational literal `{}`", self.0)
    }
}

impl std::error::Error for ParseRatError {}

/// Parse `p`, `-p`, `p/q` or `-p/q` with arbitrary-precision integers.
///
/// Whitespace is trimmed. Zero denominators, embedded signs in the
/// denominator, floats and empty parts are rejected.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let t = s.trim();
    let err = || ParseRatError(s.to_string());
    let parse_int = |p: &str| -> Result<BigInt, ParseRatError> {
        if p.is_empty() {
            return Err(err());
        }
        let digits = p.strip_prefix('-').unwrap_or(p);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        p.parse::<BigInt>().map_err(|_| err())
    };
    match t.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(t)?)),
        Some((num, den)) => {
            let n = parse_int(num)?;
            let d = parse_int(den)?;
            if d.is_zero() || d.is_negative() {
                return Err(err());
            }
            Ok(Rat::new(n, d))
        }
    }
}

/// r^k for integer k (negative k inverts; panics on 0^-k).
pub fn rat_pow(r: &Rat, k: i32) -> Rat {
    if k >= 0 {
        num_traits::pow::pow(r.clone(), k as usize)
    } else {
        num_traits::pow::pow(r.recip(), (-k) as usize)
    }
}

/// n! as a rational.
pub fn factorial(n: u32) -> Rat {
    let mut acc = BigInt::one();
    for i in 2..=n as u64 {
        acc *= i;
    }
    Rat::from_integer(acc)
}

/// Multinomial coefficient n! / (k_1! ... k_m!) with n = sum k_i.
pub fn multinomial(ks: &[u32]) -> Rat {
    let n: u32 = ks.iter().sum();
    let mut acc = factorial(n);
    for &k in ks {
        acc /= factorial(k);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["0", "1", "-7", "3/4", "-22/7", "154/405", "221/2430"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(rat_str(&r), s);
        }
        assert_eq!(parse_rat(" 6/4 ").unwrap(), rat(3, 2));
    }

    #[test]
    fn parse_rejects_bad_input() {
        for s in ["", "1/0", "1/-2", "0.5", "a", "1/", "/2", "--3", "1e3"] {
            assert!(parse_rat(s).is_err(), "should reject {s:?}");
        }
    }

    #[test]
    fn arithmetic_is_exact_and_reduced() {
        let x = rat(1, 3);
        let y = rat(1, 6);
        assert_eq!((x.clone() + y.clone()) - y.clone(), x);
        let z = rat(2, 4);
        assert_eq!(z.numer(), &BigInt::from(1));
        assert_eq!(z.denom(), &BigInt::from(2));
    }

    #[test]
    fn multinomial_values() {
        assert_eq!(multinomial(&[3]), rat_i(1));
        assert_eq!(multinomial(&[1, 1, 1]), rat_i(6));
        assert_eq!(multinomial(&[2, 1]), rat_i(3));
        assert_eq!(factorial(5), rat_i(120));
    }
}
