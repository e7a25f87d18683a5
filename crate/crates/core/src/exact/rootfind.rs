//! Bracketed root finding in fixed-point decimal arithmetic.
//!
//! Bisection guarantees convergence; a secant step is tried first on every
//! iteration and kept when it lands strictly inside the bracket and actually
//! shrinks it. Deterministic for fixed inputs.

use std::cmp::Ordering;

use super::decimal::Decimal;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootError {
    /// f has the same sign at both bracket endpoints.
    InvalidBracket,
}

impl std::fmt::Display for RootError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RootError::InvalidBracket => write!(f, "bracket endpoints do not straddle a root"),
        }
    }
}

impl std::error::Error for RootError {}

fn sign(d: &Decimal) -> i8 {
    if d.is_zero() {
        0
    } else if d.is_negative() {
        -1
    } else {
        1
    }
}

/// Find ξ in `[lo, hi]` with `f(ξ) = 0` for a strictly monotone f, to within
/// `tol` on the bracket width.
pub fn solve_root_bracketed<F>(
    f: F,
    lo: &Decimal,
    hi: &Decimal,
    tol: &Decimal,
) -> Result<Decimal, RootError>
where
    F: Fn(&Decimal) -> Decimal,
{
    let mut a = lo.clone();
    let mut b = hi.clone();
    let mut fa = f(&a);
    let mut fb = f(&b);
    if sign(&fa) == 0 {
        return Ok(a);
    }
    if sign(&fb) == 0 {
        return Ok(b);
    }
    if sign(&fa) == sign(&fb) {
        return Err(RootError::InvalidBracket);
    }
    let two = Decimal::from_i64(2, a.scale().max(b.scale()));
    loop {
        let width = b.sub(&a);
        if width.cmp(tol) != Ordering::Greater {
            return Ok(a.add(&b).div(&two));
        }
        let mid = a.add(&b).div(&two);
        // secant candidate: (a·fb - b·fa) / (fb - fa)
        let denom = fb.sub(&fa);
        let mut x = mid.clone();
        if !denom.is_zero() {
            let sec = a.mul(&fb).sub(&b.mul(&fa)).div(&denom);
            // keep the secant point only if it falls strictly inside and is
            // no worse than bisection at shrinking the larger side
            if sec.cmp(&a) == Ordering::Greater && sec.cmp(&b) == Ordering::Less {
                x = sec;
            }
        }
        let fx = f(&x);
        match sign(&fx) {
            0 => return Ok(x),
            s if s == sign(&fa) => {
                a = x;
                fa = fx;
            }
            _ => {
                b = x;
                fb = fx;
            }
        }
        // force a true bisection step whenever the bracket stopped halving
        let new_width = b.sub(&a);
        if new_width.mul(&two).cmp(&width) == Ordering::Greater {
            let mid = a.add(&b).div(&two);
            let fm = f(&mid);
            match sign(&fm) {
                0 => return Ok(mid),
                s if s == sign(&fa) => {
                    a = mid;
                    fa = fm;
                }
                _ => {
                    b = mid;
                    fb = fm;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dec(s: &str) -> Decimal {
        Decimal::parse(s).unwrap().rescale(30)
    }

    #[test]
    fn linear_root() {
        // f(ξ) = 1 - 2ξ on [0, 1] has root 1/2
        let f = |x: &Decimal| Decimal::one(30).sub(&x.mul(&Decimal::from_i64(2, 30)));
        let r = solve_root_bracketed(f, &dec("0"), &dec("1"), &dec("0.00000000000001")).unwrap();
        let err = r.sub(&dec("0.5")).abs();
        assert!(err.cmp(&dec("0.00000000000001")) != Ordering::Greater);
    }

    #[test]
    fn rejects_bad_bracket() {
        let f = |x: &Decimal| x.clone();
        let e = solve_root_bracketed(f, &dec("1"), &dec("2"), &dec("0.001"));
        assert_eq!(e, Err(RootError::InvalidBracket));
    }

    #[test]
    fn transcendental_root() {
        // e^x = 2 at x = ln 2 = 0.693147180559945309417232121458...
        let f = |x: &Decimal| x.exp().sub(&Decimal::from_i64(2, 30));
        let r = solve_root_bracketed(
            f,
            &dec("0"),
            &dec("1"),
            &dec("0.000000000000000000000001"),
        )
        .unwrap();
        let want = dec("0.693147180559945309417232121458");
        assert!(r.sub(&want).abs().cmp(&dec("0.00000000000000000000001")) == Ordering::Less);
    }

    #[test]
    fn endpoint_root_is_returned() {
        let f = |x: &Decimal| x.clone();
        let r = solve_root_bracketed(f, &dec("0"), &dec("1"), &dec("0.001")).unwrap();
        assert!(r.is_zero());
    }
}
