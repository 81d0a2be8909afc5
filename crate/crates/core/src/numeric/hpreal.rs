use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A real number enclosed as `(mid ± rad) * 2^exp`.
///
/// `prec` is the number of mantissa bits kept after each operation. Every
/// operation widens `rad` so that the true result stays inside.
#[derive(Clone, Debug)]
pub struct HpReal {
    mid: BigInt,
    rad: BigUint,
    exp: i64,
    prec: u32,
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

fn ceil_shr(x: &BigUint, k: u64) -> BigUint {
    let q = x >> k;
    if (&q << k) == *x {
        q
    } else {
        q + 1u32
    }
}

fn dyadic(m: &BigInt, e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(m << e as u64)
    } else {
        BigRational::new(m.clone(), pow2((-e) as u64))
    }
}

impl HpReal {
    /// Builds `(mid ± rad) * 2^exp` and rounds it to `prec` bits.
    pub fn from_parts(mid: BigInt, rad: BigUint, exp: i64, prec: u32) -> Self {
        HpReal { mid, rad, exp, prec }.normalize()
    }

    pub fn zero(prec: u32) -> Self {
        HpReal { mid: BigInt::zero(), rad: BigUint::zero(), exp: 0, prec }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_int(&BigInt::from(v), prec)
    }

    pub fn from_int(v: &BigInt, prec: u32) -> Self {
        Self::from_parts(v.clone(), BigUint::zero(), 0, prec)
    }

    /// Rounds `q` to `prec` bits; exact when the denominator is a power of two
    /// and the numerator fits.
    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let (n, d) = (q.numer(), q.denom());
        if d.is_one() {
            return Self::from_int(n, prec);
        }
        let tz = d.trailing_zeros().unwrap_or(0);
        if (d >> tz).is_one() {
            return Self::from_parts(n.clone(), BigUint::zero(), -(tz as i64), prec);
        }
        let s = (prec as i64 + 4 + d.bits() as i64 - n.bits() as i64).max(0) as u64;
        let (quot, rem) = (n << s).div_mod_floor(d);
        let rad = if rem.is_zero() { BigUint::zero() } else { BigUint::one() };
        Self::from_parts(quot, rad, -(s as i64), prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        HpReal { prec, ..self.clone() }.normalize()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    fn normalize(mut self) -> Self {
        if self.mid.is_zero() && self.rad.is_zero() {
            self.exp = 0;
            return self;
        }
        let mb = self.mid.bits() as i64;
        let rb = self.rad.bits() as i64;
        let k = (mb - self.prec as i64 - 2).max(rb - 32).max(0) as u64;
        if k == 0 {
            return self;
        }
        let exact_shift = self.rad.is_zero() && self.mid.trailing_zeros().map_or(true, |t| t >= k);
        let floored = &self.mid >> k;
        self.rad = if exact_shift { BigUint::zero() } else { ceil_shr(&self.rad, k) + 1u32 };
        self.mid = floored;
        self.exp += k as i64;
        self
    }

    /// Same value expressed with exponent `t`, rounding down when `t > exp`.
    fn rescale(&self, t: i64) -> (BigInt, BigUint) {
        if self.exp >= t {
            let k = (self.exp - t) as u64;
            (&self.mid << k, &self.rad << k)
        } else {
            let k = (t - self.exp) as u64;
            let exact = self.rad.is_zero() && self.mid.trailing_zeros().map_or(true, |z| z >= k);
            let rad = if exact { BigUint::zero() } else { ceil_shr(&self.rad, k) + 1u32 };
            (&self.mid >> k, rad)
        }
    }

    fn is_exact_zero(&self) -> bool {
        self.mid.is_zero() && self.rad.is_zero()
    }

    /// Exponent of the bit just above the magnitude bound.
    fn top(&self) -> i64 {
        let m = self.mid.magnitude() + &self.rad;
        self.exp + m.bits() as i64
    }

    pub fn neg(&self) -> Self {
        HpReal { mid: -&self.mid, ..self.clone() }
    }

    pub fn abs(&self) -> Self {
        if self.mid.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn add(&self, o: &HpReal) -> Self {
        let prec = self.prec.max(o.prec);
        if o.is_exact_zero() {
            return self.with_prec(prec);
        }
        if self.is_exact_zero() {
            return o.with_prec(prec);
        }
        let top = self.top().max(o.top());
        let t = self.exp.min(o.exp).max(top - prec as i64 - 8);
        let (m1, r1) = self.rescale(t);
        let (m2, r2) = o.rescale(t);
        Self::from_parts(m1 + m2, r1 + r2, t, prec)
    }

    pub fn sub(&self, o: &HpReal) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &HpReal) -> Self {
        let prec = self.prec.max(o.prec);
        let rad = self.mid.magnitude() * &o.rad + o.mid.magnitude() * &self.rad + &self.rad * &o.rad;
        Self::from_parts(&self.mid * &o.mid, rad, self.exp + o.exp, prec)
    }

    pub fn sqr(&self) -> Self {
        self.mul(self)
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        let rad = &self.rad * k.magnitude();
        Self::from_parts(&self.mid * k, rad, self.exp, self.prec)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        HpReal { exp: self.exp + k, ..self.clone() }
    }

    pub fn div(&self, o: &HpReal) -> Result<Self> {
        let prec = self.prec.max(o.prec);
        let m2 = o.mid.magnitude();
        if *m2 <= o.rad {
            return Err(Error::PrecisionExhausted("divisor enclosure contains zero".into()));
        }
        let s = (prec as i64 + 8 + m2.bits() as i64 - self.mid.bits() as i64).max(0) as u64;
        let q = (&self.mid << s).div_floor(&o.mid);
        let num = (&self.rad * m2 + self.mid.magnitude() * &o.rad) << s;
        let den = m2 * (m2 - &o.rad);
        let rad = num.div_ceil(&den) + 1u32;
        Ok(Self::from_parts(q, rad, self.exp - o.exp - s as i64, prec))
    }

    pub fn div_int(&self, k: &BigInt) -> Result<Self> {
        self.div(&HpReal::from_int(k, self.prec))
    }

    pub fn recip(&self) -> Result<Self> {
        HpReal::one(self.prec).div(self)
    }

    pub fn pow_u32(&self, n: u32) -> Self {
        let mut result = HpReal::one(self.prec);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        result
    }

    /// Adds an upper bound of `|err|` to the radius.
    pub fn widen(&self, err: &HpReal) -> Self {
        let bound = HpReal {
            mid: BigInt::from(err.mid.magnitude() + &err.rad),
            rad: BigUint::zero(),
            exp: err.exp,
            prec: err.prec,
        };
        let t = self.exp.min(bound.exp).max(self.top().max(bound.top()) - self.prec as i64 - 8);
        let (m, r) = self.rescale(t);
        let (bm, br) = bound.rescale(t);
        Self::from_parts(m, r + bm.magnitude() + br, t, self.prec)
    }

    pub fn widen_rational(&self, err: &BigRational) -> Self {
        self.widen(&HpReal::from_rational(&err.abs(), self.prec + 8))
    }

    pub fn mid_rational(&self) -> BigRational {
        dyadic(&self.mid, self.exp)
    }

    pub fn radius(&self) -> BigRational {
        dyadic(&BigInt::from(self.rad.clone()), self.exp)
    }

    pub fn lower(&self) -> BigRational {
        dyadic(&(&self.mid - BigInt::from(self.rad.clone())), self.exp)
    }

    pub fn upper(&self) -> BigRational {
        dyadic(&(&self.mid + BigInt::from(self.rad.clone())), self.exp)
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        self.lower() <= *q && *q <= self.upper()
    }

    /// `other` lies inside `self`.
    pub fn contains_ball(&self, other: &HpReal) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    pub fn overlaps(&self, other: &HpReal) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// Sign when the enclosure excludes zero (or is exactly zero).
    pub fn sign(&self) -> Option<Ordering> {
        if self.is_exact_zero() {
            Some(Ordering::Equal)
        } else if *self.mid.magnitude() > self.rad {
            Some(if self.mid.is_positive() { Ordering::Greater } else { Ordering::Less })
        } else {
            None
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Some(Ordering::Greater)
    }

    /// Floor, if it is the same for every point of the enclosure.
    pub fn floor(&self) -> Option<BigInt> {
        let rad = BigInt::from(self.rad.clone());
        let f = |m: BigInt| if self.exp >= 0 { m << self.exp as u64 } else { m >> (-self.exp) as u64 };
        let lo = f(&self.mid - &rad);
        let hi = f(&self.mid + &rad);
        (lo == hi).then_some(lo)
    }

    fn scaled_f64(m: &BigInt, e: i64) -> f64 {
        let bits = m.bits() as i64;
        let shift = (bits - 60).max(0);
        let head = (m >> shift as u64).to_f64().unwrap_or(0.0);
        let e = e + shift;
        if e > 2000 {
            return head * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        // split to stay inside powi range for subnormal-adjacent exponents
        head * 2f64.powi((e / 2) as i32) * 2f64.powi((e - e / 2) as i32)
    }

    /// Midpoint rounded to `f64`.
    pub fn to_f64(&self) -> f64 {
        Self::scaled_f64(&self.mid, self.exp)
    }

    pub fn radius_f64(&self) -> f64 {
        Self::scaled_f64(&BigInt::from(self.rad.clone()), self.exp)
    }

    /// Upper bound of `|x|`, rounded to `f64`.
    pub fn abs_upper_f64(&self) -> f64 {
        Self::scaled_f64(&BigInt::from(self.mid.magnitude() + &self.rad), self.exp)
    }

    /// `log2` of the radius relative to `|mid|`; `None` if the midpoint is zero.
    pub fn rel_radius_log2(&self) -> Option<i64> {
        if self.rad.is_zero() {
            return Some(i64::MIN);
        }
        if self.mid.is_zero() {
            return None;
        }
        Some(self.rad.bits() as i64 - self.mid.bits() as i64 + 1)
    }

    /// Decimal digits guaranteed by the enclosure: truncations of both ends
    /// agree. At most `max_frac` fractional digits.
    pub fn to_decimal(&self, max_frac: usize) -> String {
        let lo = self.lower();
        let hi = self.upper();
        let mut k = if self.rad.is_zero() {
            max_frac as i64
        } else {
            let log10_rad = (self.rad.bits() as i64 + self.exp) as f64 * std::f64::consts::LOG10_2;
            ((-log10_rad).floor() as i64 + 2).clamp(0, max_frac as i64)
        };
        loop {
            let scale = BigRational::from_integer(BigInt::from(10u32).pow(k as u32));
            let tl = (&lo * &scale).trunc().to_integer();
            let th = (&hi * &scale).trunc().to_integer();
            if tl == th {
                let mut s = format_fixed(&tl, k as usize);
                if self.rad.is_zero() && s.contains('.') {
                    s = s.trim_end_matches('0').trim_end_matches('.').to_string();
                }
                if tl.is_zero() && lo.is_negative() && !hi.is_positive() {
                    s.insert(0, '-');
                }
                return s;
            }
            if k == 0 {
                return format!("[{:.6e}, {:.6e}]", lo.to_f64().unwrap_or(f64::NAN), hi.to_f64().unwrap_or(f64::NAN));
            }
            k -= 1;
        }
    }

    /// Natural logarithm; the enclosure must be positive.
    pub fn ln(&self, prec: u32) -> Result<Self> {
        if !self.is_positive() {
            return Err(Error::Domain("ln of an enclosure that is not positive".into()));
        }
        let mid = self.mid_rational();
        let l = super::consts::ln_rational(&mid, prec + 8)?;
        if self.rad.is_zero() {
            return Ok(l.with_prec(prec));
        }
        // |ln x - ln m| <= r / (m - r)
        let err = self.radius() / self.lower();
        Ok(l.widen_rational(&err).with_prec(prec))
    }

    /// Exponential.
    pub fn exp(&self, prec: u32) -> Result<Self> {
        let approx = self.to_f64();
        if !approx.is_finite() || approx.abs() > 1e12 {
            return Err(Error::Arithmetic(format!("exp argument {approx:e} out of range")));
        }
        let k = (approx / std::f64::consts::LN_2).round() as i64;
        let kb = BigInt::from(k);
        let halvings: i64 = 10;
        let w = prec + 48 + kb.bits() as u32;
        let ln2 = super::consts::const_ln2(w);
        let r = self.with_prec(w).sub(&ln2.mul_int(&kb)).mul_pow2(-halvings);
        if r.abs_upper_f64() > 0.01 {
            return Err(Error::PrecisionExhausted("exp argument reduction failed".into()));
        }
        let (x, rx) = r.rescale(-(w as i64));
        let one = pow2(w as u64);
        let mut term = one.clone();
        let mut sum = one.clone();
        let mut steps: u64 = 0;
        loop {
            steps += 1;
            term = (&term * &x) / (&one * steps);
            if term.is_zero() {
                break;
            }
            sum += &term;
        }
        // series rounding 2 ulps per term, tail 4 ulps, input radius times e^x <= 2 twice
        let rad = BigUint::from(2 * steps + 8) + rx * 4u32;
        let mut e = HpReal::from_parts(sum, rad, -(w as i64), w);
        for _ in 0..halvings {
            e = e.sqr();
        }
        Ok(e.mul_pow2(k).with_prec(prec))
    }

    /// `x^s` for rational `s`; integer `s >= 0` allows any sign of `x`,
    /// otherwise `x` must be positive.
    pub fn pow_rational(&self, s: &BigRational, prec: u32) -> Result<Self> {
        if s.is_integer() && !s.is_negative() {
            if let Some(n) = s.to_integer().to_u32() {
                return Ok(self.with_prec(prec + 16).pow_u32(n).with_prec(prec));
            }
        }
        let l = self.ln(prec + 32)?;
        let mag_bits = (l.abs_upper_f64().max(1.0).log2().ceil() as u32) + s.numer().bits() as u32;
        let w = prec + 32 + mag_bits;
        let l = self.ln(w)?;
        l.mul(&HpReal::from_rational(s, w)).exp(prec)
    }
}

fn format_fixed(t: &BigInt, k: usize) -> String {
    let neg = t.sign() == Sign::Minus;
    let mut digits = t.magnitude().to_string();
    if k > 0 {
        if digits.len() <= k {
            digits = "0".repeat(k + 1 - digits.len()) + &digits;
        }
        digits.insert(digits.len() - k, '.');
    }
    if neg {
        digits.insert(0, '-');
    }
    digits
}

impl fmt::Display for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or((self.prec as f64 * std::f64::consts::LOG10_2) as usize);
        f.write_str(&self.to_decimal(digits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn r(n: i64, d: i64) -> BigRational {
        rat(n, d)
    }

    #[test]
    fn bigint_shift_rounds_down() {
        assert_eq!(BigInt::from(-5) >> 1u32, BigInt::from(-3));
        assert_eq!(BigInt::from(5) >> 1u32, BigInt::from(2));
    }

    #[test]
    fn rationals_enclosed() {
        for (n, d) in [(1, 3), (-2, 7), (22, 7), (1, 1_000_003), (-5, 1)] {
            let x = HpReal::from_rational(&r(n, d), 64);
            assert!(x.contains(&r(n, d)), "{n}/{d}");
            assert!(x.radius_f64() <= (n as f64 / d as f64).abs() * 2f64.powi(-60));
        }
        let x = HpReal::from_rational(&r(3, 2), 64);
        assert!(x.is_exact());
        assert_eq!(x.to_decimal(10), "1.5");
    }

    #[test]
    fn arithmetic_encloses() {
        let a = HpReal::from_rational(&r(1, 3), 80);
        let b = HpReal::from_rational(&r(-2, 7), 80);
        assert!(a.add(&b).contains(&r(1, 21)));
        assert!(a.sub(&b).contains(&r(13, 21)));
        assert!(a.mul(&b).contains(&r(-2, 21)));
        assert!(a.div(&b).unwrap().contains(&r(-7, 6)));
        assert!(b.recip().unwrap().contains(&r(-7, 2)));
        assert!(a.pow_u32(5).contains(&r(1, 243)));
        assert!(a.mul_pow2(-3).contains(&r(1, 24)));
    }

    #[test]
    fn add_across_scales() {
        let big = HpReal::from_i64(1, 64).mul_pow2(500);
        let tiny = HpReal::from_rational(&r(1, 3), 64).mul_pow2(-500);
        let s = big.add(&tiny);
        let exact = BigRational::from_integer(pow2(500)) + r(1, 3) / BigRational::from_integer(pow2(500));
        assert!(s.contains(&exact));
        let z = HpReal::zero(64).add(&tiny);
        assert!(z.contains(&(r(1, 3) / BigRational::from_integer(pow2(500)))));
        assert!(z.radius_f64() < tiny.abs_upper_f64() * 1e-15);
    }

    #[test]
    fn division_by_zero_enclosure() {
        let z = HpReal::from_parts(BigInt::from(1), BigUint::from(2u32), 0, 64);
        assert!(HpReal::one(64).div(&z).is_err());
    }

    #[test]
    fn floor_and_sign() {
        let x = HpReal::from_rational(&r(-7, 2), 64);
        assert_eq!(x.floor(), Some(BigInt::from(-4)));
        assert_eq!(x.sign(), Some(Ordering::Less));
        let fuzzy = HpReal::from_parts(BigInt::from(3), BigUint::from(1u32), -1, 64);
        assert_eq!(fuzzy.floor(), None);
        let amb = HpReal::from_parts(BigInt::from(1), BigUint::from(2u32), 0, 64);
        assert_eq!(amb.sign(), None);
    }

    #[test]
    fn decimal_prints_guaranteed_digits() {
        let x = HpReal::from_rational(&r(1, 3), 64);
        let s = x.to_decimal(40);
        assert!(s.starts_with("0.333333333333333333"), "{s}");
        assert!(s.len() < 25, "{s}");
        let y = HpReal::from_rational(&r(-22, 7), 64);
        assert!(y.to_decimal(10).starts_with("-3.142857142"));
        assert_eq!(HpReal::from_i64(-12, 64).to_decimal(5), "-12");
    }

    #[test]
    fn ln_and_exp() {
        let x = HpReal::from_rational(&r(10, 1), 128);
        let l = x.ln(128).unwrap();
        assert!((l.to_f64() - 10f64.ln()).abs() < 1e-15);
        assert!(l.radius_f64() < 1e-35);
        let e = l.exp(128).unwrap();
        assert!(e.contains(&r(10, 1)), "{e:?}");
        let m = HpReal::from_rational(&r(-37, 4), 128).exp(128).unwrap();
        assert!((m.to_f64() - (-9.25f64).exp()).abs() < 1e-18);
        assert!(HpReal::from_i64(-1, 64).ln(64).is_err());
    }

    #[test]
    fn real_powers() {
        let x = HpReal::from_rational(&r(2, 1), 128);
        let p = x.pow_rational(&r(1, 2), 128).unwrap();
        assert!((p.to_f64() - 2f64.sqrt()).abs() < 1e-15);
        assert!(p.sqr().contains(&r(2, 1)));
        let q = HpReal::from_rational(&r(1, 5), 128).pow_rational(&r(5, 2), 128).unwrap();
        assert!((q.to_f64() - 0.2f64.powf(2.5)).abs() < 1e-17);
        let c = HpReal::from_rational(&r(-3, 1), 64).pow_rational(&r(3, 1), 64).unwrap();
        assert!(c.contains(&r(-27, 1)));
    }
}
