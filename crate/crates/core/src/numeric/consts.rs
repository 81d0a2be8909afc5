//! Reference constants and elementary series in fixed point.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::HpReal;
use crate::error::{Error, Result};

fn guard(prec: u32) -> u32 {
    prec + 32
}

/// `atanh(p/q)` for `|p/q| <= 1/3`, in fixed point with `w` fractional bits.
///
/// Every truncated power is within 2 ulps of the true one, every term within
/// 3, and the tail after the first zero power is below 3 ulps.
fn atanh_fixed(p: &BigInt, q: &BigInt, w: u32) -> HpReal {
    debug_assert!(q.is_positive() && BigInt::from(3) * p.abs() <= *q);
    let p2 = p * p;
    let q2 = q * q;
    let mut power = (p << w as u64) / q;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        sum += &power / BigInt::from(2 * k + 1);
        power = &power * &p2 / &q2;
        k += 1;
    }
    HpReal::from_parts(sum, BigUint::from(3 * k + 6), -(w as i64), w)
}

/// `atan(1/n)` for integer `n >= 2`, same error bookkeeping as `atanh_fixed`.
pub(crate) fn atan_inv(n: u64, prec: u32) -> HpReal {
    assert!(n >= 2);
    let w = guard(prec);
    let n2 = BigInt::from(n) * n;
    let mut power = (BigInt::one() << w as u64) / n;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &n2;
        k += 1;
    }
    HpReal::from_parts(sum, BigUint::from(3 * k + 6), -(w as i64), w).with_prec(prec)
}

/// `atanh(1/n)` for integer `n >= 3`.
pub(crate) fn atanh_inv(n: u64, prec: u32) -> HpReal {
    assert!(n >= 3);
    atanh_fixed(&BigInt::one(), &BigInt::from(n), guard(prec)).with_prec(prec)
}

/// `pi = 16 atan(1/5) - 4 atan(1/239)`.
pub fn const_pi(prec: u32) -> HpReal {
    let w = guard(prec);
    atan_inv(5, w).mul_int(&BigInt::from(16)).sub(&atan_inv(239, w).mul_int(&BigInt::from(4))).with_prec(prec)
}

/// `ln 2 = 2 atanh(1/3)`.
pub fn const_ln2(prec: u32) -> HpReal {
    atanh_inv(3, guard(prec)).mul_pow2(1).with_prec(prec)
}

/// `ln q` for rational `q > 0`: reduce by powers of two to `[2/3, 4/3]`, then
/// `2 atanh((y-1)/(y+1))`.
pub fn ln_rational(q: &BigRational, prec: u32) -> Result<HpReal> {
    if !q.is_positive() {
        return Err(Error::Domain(format!("ln of non-positive {q}")));
    }
    let w = guard(prec);
    let mut k = q.numer().bits() as i64 - q.denom().bits() as i64;
    let scale = |k: i64| -> BigRational {
        if k >= 0 {
            q / BigRational::from_integer(BigInt::one() << k as u64)
        } else {
            q * BigRational::from_integer(BigInt::one() << (-k) as u64)
        }
    };
    let mut y = scale(k);
    let four_thirds = BigRational::new(4.into(), 3.into());
    let two_thirds = BigRational::new(2.into(), 3.into());
    while y > four_thirds {
        k += 1;
        y = scale(k);
    }
    while y < two_thirds {
        k -= 1;
        y = scale(k);
    }
    let one = BigRational::one();
    let z = (&y - &one) / (&y + &one);
    let mut result = atanh_fixed(z.numer(), z.denom(), w).mul_pow2(1);
    if k != 0 {
        let kb = BigInt::from(k);
        let ln2 = const_ln2(w + kb.bits() as u32);
        result = result.add(&ln2.mul_int(&kb));
    }
    Ok(result.with_prec(prec))
}

/// Euler's constant by the Brent-McMillan formula
/// `gamma = U/V - ln n - K0(2n)/I0(2n)` with `0 < K0/I0 < pi e^(-4n)`,
/// where `V = sum b_k`, `U = sum H_k b_k`, `b_k = (n^k/k!)^2`.
pub fn const_gamma(prec: u32) -> HpReal {
    let w = guard(prec);
    let n: u64 = (w as u64).div_ceil(5) + 1;
    let nb = BigInt::from(n);
    let target = BigRational::new(BigInt::one(), BigInt::one() << (w as u64 + 2));
    let mut terms = (18 * n) / 5 + 10;
    let (ratio, err) = loop {
        let (ratio, err) = bm_sums(&nb, terms);
        if err < target {
            break (ratio, err);
        }
        terms += terms / 4 + 8;
    };
    let ln_n = ln_rational(&BigRational::from_integer(nb), w).expect("n > 0");
    // pi e^(-4n) < 4 * 2^(-5n); center the unknown Bessel ratio
    let half = BigRational::new(BigInt::from(2), BigInt::one() << (5 * n));
    let center = ratio - &half;
    HpReal::from_rational(&center, w).sub(&ln_n).widen_rational(&(half + err)).with_prec(prec)
}

/// Truncated `U/V` and a rigorous bound on the truncation error.
fn bm_sums(n: &BigInt, terms: u64) -> (BigRational, BigRational) {
    let kmax = terms;
    let mut fact = BigInt::one();
    for j in 2..=kmax {
        fact *= j;
    }
    // a_k = n^(2k) (K!/k!)^2, hf_k = H_k K!
    let n2 = n * n;
    let mut v = BigInt::zero();
    let mut u = BigInt::zero();
    let mut hf = BigInt::zero();
    let mut n_pow = BigInt::one();
    let mut ratio_fact = fact.clone();
    let mut last_a = BigInt::zero();
    for k in 0..=kmax {
        if k > 0 {
            n_pow *= &n2;
            ratio_fact /= k;
            hf += &fact / k;
        }
        let a = &n_pow * &ratio_fact * &ratio_fact;
        v += &a;
        u += &a * &hf;
        last_a = a;
    }
    let f2 = &fact * &fact;
    let v_r = BigRational::new(v, f2.clone());
    let u_r = BigRational::new(u, &f2 * &fact);
    let b_last = BigRational::new(last_a, f2);
    let h_last = BigRational::new(hf, fact);
    let r = BigRational::new(n2, BigInt::from((kmax + 1) * (kmax + 1)));
    let one = BigRational::one();
    assert!(r < one, "Brent-McMillan needs more than n terms");
    let geo = &r / (&one - &r);
    let tail_v = &b_last * &geo;
    let tail_u = &b_last * (&h_last * &geo + &geo / (&one - &r));
    let err = &tail_u / &v_r + &u_r * &tail_v / (&v_r * &v_r);
    (u_r / v_r, err)
}
