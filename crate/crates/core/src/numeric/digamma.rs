use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::consts::ln_rational;
use super::HpReal;
use crate::error::{Error, Result};

/// Bernoulli numbers `B_0 .. B_m` with `B_1 = -1/2`.
pub fn bernoulli(m: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(m + 1);
    b.push(BigRational::one());
    for n in 1..=m {
        if n > 1 && n % 2 == 1 {
            b.push(BigRational::zero());
            continue;
        }
        // sum_{j<=n} C(n+1, j) B_j = 0
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                acc += bj * BigRational::from_integer(binom.clone());
            }
            binom = binom * (n + 1 - j) / (j + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(n + 1)));
    }
    b
}

/// Shift threshold for the asymptotic expansion.
pub fn shift_threshold(prec: u32) -> u64 {
    (prec as u64 / 3).max(10)
}

/// `psi(x)` for rational `x > 0`.
///
/// Shifts `x` up to `y >= max(10, prec/3)` with `psi(x) = psi(y) - sum 1/(x+j)`,
/// then uses `ln y - 1/(2y) - sum_k B_2k/(2k y^2k)`, whose remainder is bounded
/// by the first omitted term.
pub fn digamma(x: &BigRational, prec: u32) -> Result<HpReal> {
    if !x.is_positive() {
        return Err(Error::Domain(format!("digamma needs x > 0, got {x}")));
    }
    let w = prec + 24;
    let threshold = BigRational::from_integer(BigInt::from(shift_threshold(prec)));
    let mut shift_sum = BigRational::zero();
    let mut y = x.clone();
    while y < threshold {
        shift_sum += y.recip();
        y += BigRational::one();
    }
    let target = BigRational::new(BigInt::one(), BigInt::one() << (w as u64 + 2));
    let y2 = &y * &y;
    let mut rational = -(y.recip() / BigRational::from_integer(2.into())) - shift_sum;
    let mut terms = 8usize;
    let bound = loop {
        let b = bernoulli(2 * terms + 2);
        let mut y_pow = y2.clone();
        let mut partial = BigRational::zero();
        let mut last = None;
        let mut remainder = None;
        for k in 1..=terms + 1 {
            let t = &b[2 * k] / (BigRational::from_integer(BigInt::from(2 * k)) * &y_pow);
            if k <= terms {
                partial += &t;
                // past the smallest term the expansion stops improving
                if let Some(prev) = &last {
                    if t.abs() > *prev {
                        return Err(Error::PrecisionExhausted(format!(
                            "asymptotic series for psi({x}) diverges before reaching {w} bits"
                        )));
                    }
                }
                last = Some(t.abs());
            } else {
                remainder = Some(t.abs());
            }
            y_pow *= &y2;
        }
        let rem = remainder.expect("loop visits terms + 1");
        if rem < target {
            rational -= partial;
            break rem;
        }
        terms = terms * 3 / 2 + 2;
    };
    let ln_y = ln_rational(&y, w)?;
    Ok(ln_y.add(&HpReal::from_rational(&rational, w)).widen_rational(&bound).with_prec(prec))
}

/// Cheap double-precision `psi(x)` for `x > 0`, used for sanity checks.
pub fn digamma_f64(x: f64) -> f64 {
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let x2 = 1.0 / (x * x);
    acc + x.ln() - 0.5 / x - x2 * (1.0 / 12.0 - x2 * (1.0 / 120.0 - x2 * (1.0 / 252.0 - x2 / 240.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::numeric::consts::{const_gamma, const_pi};
    use num_traits::ToPrimitive;

    fn rational_to_f64(q: &BigRational) -> f64 {
        q.to_f64().unwrap_or(f64::NAN)
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli(12);
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[6], rat(1, 42));
        assert_eq!(b[8], rat(-1, 30));
        assert_eq!(b[10], rat(5, 66));
        assert_eq!(b[12], rat(-691, 2730));
        assert!(b[7].is_zero());
    }

    #[test]
    fn psi_one_is_minus_gamma() {
        let p = digamma(&rat(1, 1), 200).unwrap();
        assert!(p.overlaps(&const_gamma(200).neg()));
        assert!(p.radius_f64() < 1e-55);
    }

    #[test]
    fn reflection_difference_gives_pi() {
        let d = digamma(&rat(3, 4), 200).unwrap().sub(&digamma(&rat(1, 4), 200).unwrap());
        assert!(d.overlaps(&const_pi(200)));
        assert!(d.sub(&const_pi(200)).abs_upper_f64() < 1e-55);
    }

    #[test]
    fn recurrence() {
        for (n, dd) in [(1, 7), (5, 3), (22, 7), (1, 100), (100, 1)] {
            let x = rat(n, dd);
            let lhs = digamma(&(&x + BigRational::one()), 128).unwrap().sub(&digamma(&x, 128).unwrap());
            assert!(lhs.contains(&x.recip()) || lhs.overlaps(&HpReal::from_rational(&x.recip(), 128)), "{x}");
            assert!((lhs.to_f64() - rational_to_f64(&x.recip())).abs() < 1e-30);
        }
    }

    #[test]
    fn matches_double_precision_sketch() {
        for x in [0.1, 0.5, 1.5, 7.25, 40.0] {
            let q = BigRational::from_float(x).unwrap();
            let p = digamma(&q, 96).unwrap();
            assert!((p.to_f64() - digamma_f64(x)).abs() < 1e-12, "{x}");
        }
    }

    #[test]
    fn poles_rejected() {
        assert!(digamma(&rat(0, 1), 64).is_err());
        assert!(digamma(&rat(-3, 1), 64).is_err());
        assert!(digamma(&rat(-1, 2), 64).is_err());
    }
}
