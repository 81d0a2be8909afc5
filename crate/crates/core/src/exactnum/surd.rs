use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::{is_perfect_square, isqrt, Rational};
use crate::error::{Error, Result};

/// The number `(a + b*sqrt(d)) / c` of the real quadratic field `Q(sqrt(d))`.
///
/// Always canonical: `c >= 1`, `gcd(a, b, c) = 1`, `d >= 2` not a perfect
/// square. `b = 0` encodes a rational; a rational combines with surds of any
/// radicand and compares equal regardless of the radicand it carries.
#[derive(Clone, Debug)]
pub struct QuadraticSurd {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurdOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact field arithmetic on two surds.
pub fn surd_arith(x: &QuadraticSurd, y: &QuadraticSurd, op: SurdOp) -> Result<QuadraticSurd> {
    match op {
        SurdOp::Add => x.try_add(y),
        SurdOp::Sub => x.try_sub(y),
        SurdOp::Mul => x.try_mul(y),
        SurdOp::Div => x.try_div(y),
    }
}

fn check_radicand(d: &BigInt) -> Result<()> {
    if d < &BigInt::from(2) {
        return Err(Error::Domain(format!("radicand must be >= 2, got {d}")));
    }
    if is_perfect_square(d) {
        return Err(Error::Domain(format!("radicand {d} is a perfect square")));
    }
    Ok(())
}

impl QuadraticSurd {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self> {
        let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
        check_radicand(&d)?;
        if c.is_zero() {
            return Err(Error::Arithmetic("zero denominator".into()));
        }
        Ok(Self::canonical(a, b, c, d))
    }

    /// Builds without validating `d`; callers guarantee the radicand invariant.
    pub(crate) fn canonical(mut a: BigInt, mut b: BigInt, mut c: BigInt, d: BigInt) -> Self {
        debug_assert!(!c.is_zero());
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        QuadraticSurd { a, b, c, d }
    }

    pub fn from_integer(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self> {
        Self::new(n, 0, 1, d)
    }

    pub fn from_rational(r: &Rational, d: impl Into<BigInt>) -> Result<Self> {
        Self::new(r.numer().clone(), 0, r.denom().clone(), d)
    }

    /// `sqrt(d)` itself.
    pub fn sqrt(d: impl Into<BigInt>) -> Result<Self> {
        Self::new(0, 1, 1, d)
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| Rational::new(self.a.clone(), self.c.clone()))
    }

    /// `a/c`.
    pub fn rational_part(&self) -> Rational {
        Rational::new(self.a.clone(), self.c.clone())
    }

    /// `b/c`, the coefficient of `sqrt(d)`.
    pub fn radical_coeff(&self) -> Rational {
        Rational::new(self.b.clone(), self.c.clone())
    }

    /// A rational in the same field as `self`.
    pub fn lift(&self, r: &Rational) -> Self {
        Self::canonical(r.numer().clone(), BigInt::zero(), r.denom().clone(), self.d.clone())
    }

    pub fn lift_int(&self, n: impl Into<BigInt>) -> Self {
        Self::canonical(n.into(), BigInt::zero(), BigInt::one(), self.d.clone())
    }

    pub fn zero_like(&self) -> Self {
        self.lift_int(0)
    }

    pub fn one_like(&self) -> Self {
        self.lift_int(1)
    }

    fn field_with(&self, other: &Self) -> Result<BigInt> {
        if self.d == other.d || other.is_rational() {
            Ok(self.d.clone())
        } else if self.is_rational() {
            Ok(other.d.clone())
        } else {
            Err(Error::FieldMismatch(self.d.to_string(), other.d.to_string()))
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        let d = self.field_with(o)?;
        Ok(Self::canonical(&self.a * &o.c + &o.a * &self.c, &self.b * &o.c + &o.b * &self.c, &self.c * &o.c, d))
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.try_add(&-o)
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        let d = self.field_with(o)?;
        Ok(Self::canonical(&self.a * &o.a + &self.b * &o.b * &d, &self.a * &o.b + &self.b * &o.a, &self.c * &o.c, d))
    }

    pub fn try_div(&self, o: &Self) -> Result<Self> {
        self.try_mul(&o.recip()?)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Arithmetic("division by zero".into()));
        }
        // c / (a + b√d) = c (a - b√d) / (a² - b² d)
        let n = &self.a * &self.a - &self.b * &self.b * &self.d;
        Ok(Self::canonical(&self.c * &self.a, -(&self.c * &self.b), n, self.d.clone()))
    }

    /// `(a - b*sqrt(d)) / c`.
    pub fn conjugate(&self) -> Self {
        QuadraticSurd { a: self.a.clone(), b: -&self.b, c: self.c.clone(), d: self.d.clone() }
    }

    /// `x * conj(x)`.
    pub fn norm(&self) -> Rational {
        Rational::new(&self.a * &self.a - &self.b * &self.b * &self.d, &self.c * &self.c)
    }

    /// `x + conj(x)`.
    pub fn trace(&self) -> Rational {
        Rational::new(&self.a * 2, self.c.clone())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power, negative exponents allowed for nonzero `self`.
    pub fn powi(&self, e: i64) -> Result<Self> {
        let p = self.pow(e.unsigned_abs() as u32);
        if e < 0 {
            p.recip()
        } else {
            Ok(p)
        }
    }

    /// Exact sign of the value.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.sign_ord();
        let sb = self.b.sign_ord();
        if sb == Ordering::Equal || sa == sb {
            return if sa == Ordering::Equal { sb } else { sa };
        }
        if sa == Ordering::Equal {
            return sb;
        }
        // opposite signs: the larger of a² and b²d wins
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * &self.d;
        if a2 > b2d {
            sa
        } else {
            sb
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Exact ordering of two surds of the same field.
    pub fn compare(&self, other: &Self) -> Result<Ordering> {
        Ok(self.try_sub(other)?.signum())
    }

    /// Exact floor, via integer square roots only.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.div_floor(&self.c);
        }
        // b√d lies strictly between f and f + 1 since b²d is not a square.
        let b2d = &self.b * &self.b * &self.d;
        let s = isqrt(&b2d).expect("nonnegative");
        let f = if self.b.is_positive() { s } else { -s - 1 };
        (&self.a + f).div_floor(&self.c)
    }

    /// Bit length of the largest coefficient.
    pub fn height_bits(&self) -> u64 {
        self.a.bits().max(self.b.bits()).max(self.c.bits())
    }
}

trait SignOrd {
    fn sign_ord(&self) -> Ordering;
}

impl SignOrd for BigInt {
    fn sign_ord(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

impl PartialEq for QuadraticSurd {
    fn eq(&self, o: &Self) -> bool {
        self.a == o.a && self.b == o.b && self.c == o.c && (self.b.is_zero() || self.d == o.d)
    }
}

impl Eq for QuadraticSurd {}

impl Hash for QuadraticSurd {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
        self.c.hash(state);
        if !self.b.is_zero() {
            self.d.hash(state);
        }
    }
}

impl PartialOrd for QuadraticSurd {
    /// `None` for surds of different fields.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.compare(other).ok()
    }
}

impl Neg for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn neg(self) -> QuadraticSurd {
        QuadraticSurd { a: -&self.a, b: -&self.b, c: self.c.clone(), d: self.d.clone() }
    }
}

impl Neg for QuadraticSurd {
    type Output = QuadraticSurd;
    fn neg(self) -> QuadraticSurd {
        -&self
    }
}

// Operator impls panic on mismatched fields; use the `try_*` methods on
// untrusted input.
macro_rules! surd_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&QuadraticSurd> for &QuadraticSurd {
            type Output = QuadraticSurd;
            fn $method(self, rhs: &QuadraticSurd) -> QuadraticSurd {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<QuadraticSurd> for QuadraticSurd {
            type Output = QuadraticSurd;
            fn $method(self, rhs: QuadraticSurd) -> QuadraticSurd {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QuadraticSurd> for QuadraticSurd {
            type Output = QuadraticSurd;
            fn $method(self, rhs: &QuadraticSurd) -> QuadraticSurd {
                (&self).$method(rhs)
            }
        }
    };
}

surd_binop!(Add, add, try_add);
surd_binop!(Sub, sub, try_sub);
surd_binop!(Mul, mul, try_mul);
surd_binop!(Div, div, try_div);

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return if self.c.is_one() { write!(f, "{}", self.a) } else { write!(f, "{}/{}", self.a, self.c) };
        }
        let mut body = String::new();
        if !self.a.is_zero() {
            body.push_str(&self.a.to_string());
        }
        let radical = if self.b.is_one() {
            format!("sqrt({})", self.d)
        } else if self.b == -BigInt::one() {
            format!("-sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", self.b, self.d)
        };
        if !self.a.is_zero() && self.b.is_positive() {
            body.push('+');
        }
        body.push_str(&radical);
        if self.c.is_one() {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{}", self.c)
        }
    }
}
