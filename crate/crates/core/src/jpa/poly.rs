//! Exact integer/rational polynomials, Sturm root isolation and
//! characteristic polynomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::HpReal;

/// Rational polynomial, coefficients in ascending degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<BigRational>);

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    /// From integer coefficients, highest degree first.
    pub fn from_desc(coeffs: &[BigInt]) -> Self {
        Poly::new(coeffs.iter().rev().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    pub fn from_asc_ints(coeffs: &[BigInt]) -> Self {
        Poly::new(coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> &BigRational {
        self.0.last().expect("non-zero polynomial")
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_real(&self, x: &HpReal) -> HpReal {
        let p = x.prec();
        self.0.iter().rev().fold(HpReal::zero(p), |acc, c| acc.mul(x).add(&HpReal::from_rational(c, p + 16)))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect(),
        )
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().expect("non-zero");
        let mut rem = self.0.clone();
        let mut quot = vec![BigRational::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let factor = rem.last().expect("non-empty") / d.lead();
            for (i, c) in d.0.iter().enumerate() {
                rem[shift + i] -= &factor * c;
            }
            quot[shift] = factor;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().clone();
        Poly::new(self.0.iter().map(|c| c / &l).collect())
    }

    /// `p / gcd(p, p')`.
    pub fn squarefree_part(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            self.clone()
        } else {
            self.div_rem(&g).0
        }
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    fn sign_at(&self, x: &BigRational) -> i32 {
        let v = self.eval(x);
        if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        }
    }

    /// Bound on the absolute value of every real root.
    pub fn root_bound(&self) -> BigRational {
        let l = self.lead().abs();
        let m = self.0.iter().map(|c| c.abs() / &l).fold(BigRational::zero(), |a, b| if b > a { b } else { a });
        m + BigRational::one()
    }
}

struct Sturm(Vec<Poly>);

impl Sturm {
    fn new(p: &Poly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            let r = chain[n - 2].div_rem(&chain[n - 1]).1;
            if r.is_zero() {
                break;
            }
            chain.push(Poly::new(r.0.into_iter().map(|c| -c).collect()));
        }
        Sturm(chain)
    }

    fn variations(&self, x: &BigRational) -> usize {
        let mut last = 0;
        let mut count = 0;
        for p in &self.0 {
            let s = p.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Distinct real roots in `(a, b]`.
    fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// A real root enclosed in `[lo, hi]` (equal endpoints for a rational root).
#[derive(Clone, Debug)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootInterval {
    pub fn to_real(&self, prec: u32) -> HpReal {
        let two = BigRational::from_integer(BigInt::from(2));
        let mid = (&self.lo + &self.hi) / &two;
        let half = (&self.hi - &self.lo) / two;
        HpReal::from_rational(&mid, prec + 8).widen_rational(&half).with_prec(prec)
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

/// All distinct real roots of `p`, ascending, each isolated to width below
/// `2^-bits`.
pub fn real_roots(p: &Poly, bits: u32) -> Result<Vec<RootInterval>> {
    if p.degree().unwrap_or(0) == 0 {
        return Err(Error::Domain("polynomial must have degree >= 1".into()));
    }
    let sf = p.squarefree_part();
    let sturm = Sturm::new(&sf);
    let r = sf.root_bound();
    let mut pending = vec![(-r.clone(), r)];
    let mut isolated = Vec::new();
    let two = BigRational::from_integer(BigInt::from(2));
    while let Some((a, b)) = pending.pop() {
        let n = sturm.count(&a, &b);
        if n == 0 {
            continue;
        }
        if n == 1 {
            isolated.push((a, b));
            continue;
        }
        let m = (&a + &b) / &two;
        pending.push((a, m.clone()));
        pending.push((m, b));
    }
    isolated.sort_by(|x, y| x.0.cmp(&y.0));
    let eps = BigRational::new(BigInt::one(), BigInt::one() << bits as u64);
    let mut out = Vec::with_capacity(isolated.len());
    for (a, b) in isolated {
        // root in (a, b]
        if sf.sign_at(&b) == 0 {
            out.push(RootInterval { lo: b.clone(), hi: b });
            continue;
        }
        let (mut lo, mut hi) = (a, b);
        let s_hi = sf.sign_at(&hi);
        while &hi - &lo > eps {
            let m = (&lo + &hi) / &two;
            let s = sf.sign_at(&m);
            if s == 0 {
                lo = m.clone();
                hi = m;
                break;
            }
            if s == s_hi {
                hi = m;
            } else {
                lo = m;
            }
        }
        out.push(RootInterval { lo, hi });
    }
    Ok(out)
}

/// Characteristic polynomial `det(xI - A)` of a square integer matrix by
/// Faddeev-LeVerrier, ascending coefficients.
pub fn char_poly(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        m = next;
        let am = mat_mul(a, &m);
        let tr: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        c[n - k] = -tr / BigInt::from(k);
    }
    c
}

pub(crate) fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let p = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![BigInt::zero(); p]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..p {
                out[i][j] += &a[i][k] * &bk[j];
            }
        }
    }
    out
}
