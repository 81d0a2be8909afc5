//! Exact integers, rationals and elements of real quadratic fields.
//!
//! Integers and rationals are `num-bigint` / `num-rational` values; the
//! quadratic-field type [`QuadraticSurd`] and everything that needs an exact
//! floor or sign is implemented here on top of integer square roots.

mod parse;
mod surd;

pub use num_bigint::BigInt as Integer;
pub use num_rational::BigRational as Rational;
pub use parse::parse_surd;
pub use surd::{surd_arith, QuadraticSurd, SurdOp};

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Result};

/// Largest `t` with `t * t <= n`.
pub fn isqrt(n: &BigInt) -> Result<BigInt> {
    if n.is_negative() {
        return domain(format!("isqrt of negative integer {n}"));
    }
    Ok(n.sqrt())
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Writes `n = s^2 * core` and returns `(s, core)`.
///
/// `core` is squarefree whenever `n < 2^64`. Above that only primes below
/// 2^20 are removed before the perfect-square test on the cofactor, so very
/// large inputs may keep a square factor.
pub fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    if n.is_zero() {
        return (BigInt::one(), BigInt::zero());
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mag = n.abs();
    if let Some(m) = mag.to_u64() {
        let (s, core) = split_square_u64(m);
        return (BigInt::from(s), BigInt::from(core) * sign);
    }
    let mut s = BigInt::one();
    let mut rest = mag;
    let mut p: u64 = 2;
    while p < (1 << 20) {
        let pb = BigInt::from(p);
        let p2 = &pb * &pb;
        if p2 > rest {
            break;
        }
        while (&rest % &p2).is_zero() {
            rest /= &p2;
            s *= &pb;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if is_perfect_square(&rest) && !rest.is_one() {
        let r = rest.sqrt();
        s *= &r;
        rest = BigInt::one();
    }
    (s, rest * sign)
}

fn split_square_u64(mut n: u64) -> (u64, u64) {
    let mut s: u64 = 1;
    let mut core: u64 = 1;
    let mut p: u64 = 2;
    // Trial division up to the cube root; what remains has at most two prime
    // factors, so it is squarefree unless it is a perfect square.
    while p.saturating_mul(p).saturating_mul(p) <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= p;
        }
        if e % 2 == 1 {
            core *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let r = n.sqrt();
    if r > 1 && r * r == n {
        s *= r;
    } else {
        core *= n;
    }
    (s, core)
}

pub fn is_squarefree(n: &BigInt) -> bool {
    split_square(n).0.is_one()
}

#[cfg(test)]
pub(crate) fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

#[cfg(test)]
pub(crate) fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Rational {
    Rational::new(n.into(), d.into())
}
