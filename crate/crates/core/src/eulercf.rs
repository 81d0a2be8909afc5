//! Generalized continued fractions `a_0 + b_1/(a_1 + b_2/(a_2 + ...))`, the
//! telescoping error-sum identity, and its pi and ln 2 instances.
//!
//! With `eps_n = h_n - xi k_n`, `B_n = b_1 ... b_n` and `c_n = 1/B_n`,
//! `sum_{n=-1}^{N} a_{n+1} c_{n+1} eps_n^2 = c_{N+1} eps_N eps_{N+1} + xi`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::QuadraticSurd;
use crate::numeric::{const_ln2, const_pi, digamma, HpReal};

/// Integer sequence given in closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Seq {
    Const(BigInt),
    /// `c0 + c1 n + c2 n^2 + ...`
    Poly(Vec<BigInt>),
    /// `head[n]` for `n < head.len()`, then `rest`.
    Prefixed {
        head: Vec<BigInt>,
        rest: Box<Seq>,
    },
}

impl Seq {
    pub fn at(&self, n: u64) -> BigInt {
        match self {
            Seq::Const(c) => c.clone(),
            Seq::Poly(coeffs) => {
                let x = BigInt::from(n);
                coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
            }
            Seq::Prefixed { head, rest } => match head.get(n as usize) {
                Some(v) => v.clone(),
                None => rest.at(n),
            },
        }
    }

    /// Parses `const:c` or `poly:(c0,c1,...)`.
    pub fn parse(token: &str) -> Result<Self> {
        let t: String = token.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("sequence token `{token}`: expected `const:c` or `poly:(c0,c1,...)`"));
        let int = |s: &str| s.parse::<BigInt>().map_err(|_| bad());
        if let Some(c) = t.strip_prefix("const:") {
            return Ok(Seq::Const(int(c)?));
        }
        if let Some(body) = t.strip_prefix("poly:") {
            let inner = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')).ok_or_else(bad)?;
            let coeffs = inner.split(',').map(int).collect::<Result<Vec<_>>>()?;
            if coeffs.is_empty() {
                return Err(bad());
            }
            return Ok(Seq::Poly(coeffs));
        }
        Err(bad())
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seq::Const(c) => write!(f, "const:{c}"),
            Seq::Poly(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                write!(f, "poly:({})", parts.join(","))
            }
            Seq::Prefixed { head, rest } => {
                let parts: Vec<String> = head.iter().map(|c| c.to_string()).collect();
                write!(f, "[{}] then {rest}", parts.join(","))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct GeneralizedCF {
    /// `a_n`, `n >= 0`.
    pub a: Seq,
    /// `b_n`, `n >= 1`; the value at 0 is ignored.
    pub b: Seq,
    pub label: String,
}

impl GeneralizedCF {
    pub fn new(a: Seq, b: Seq, label: impl Into<String>) -> Self {
        GeneralizedCF { a, b, label: label.into() }
    }

    pub fn a(&self, n: u64) -> BigInt {
        self.a.at(n)
    }

    pub fn b(&self, n: u64) -> Result<BigInt> {
        let v = self.b.at(n);
        if !v.is_positive() {
            return Err(Error::Domain(format!("b_{n} = {v} is not positive")));
        }
        Ok(v)
    }
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// `a = 0, 1, 2, 2, ...`, `b_1 = 4`, `b_n = (2n-3)^2`.
pub fn pi_instance() -> GeneralizedCF {
    GeneralizedCF::new(
        Seq::Prefixed { head: ints(&[0, 1]), rest: Box::new(Seq::Const(BigInt::from(2))) },
        Seq::Prefixed { head: ints(&[1, 4]), rest: Box::new(Seq::Poly(ints(&[9, -12, 4]))) },
        "pi",
    )
}

/// `a = 0, 1, 1, ...`, `b_1 = 1`, `b_n = (n-1)^2`.
pub fn ln2_instance() -> GeneralizedCF {
    GeneralizedCF::new(
        Seq::Prefixed { head: ints(&[0]), rest: Box::new(Seq::Const(BigInt::one())) },
        Seq::Prefixed { head: ints(&[1, 1]), rest: Box::new(Seq::Poly(ints(&[1, -2, 1]))) },
        "ln2",
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcfConvergent {
    pub index: i64,
    pub h: BigInt,
    pub k: BigInt,
    /// `b_1 ... b_n`; 1 for the seeds.
    pub big_b: BigInt,
}

/// Convergents for indices `-2 ..= n_max`, seeded `h = 0, 1`, `k = 1, 0`.
pub fn gcf_convergents(cf: &GeneralizedCF, n_max: i64) -> Result<Vec<GcfConvergent>> {
    let mut out = vec![
        GcfConvergent { index: -2, h: BigInt::zero(), k: BigInt::one(), big_b: BigInt::one() },
        GcfConvergent { index: -1, h: BigInt::one(), k: BigInt::zero(), big_b: BigInt::one() },
    ];
    if n_max < 0 {
        out.truncate((n_max + 2).max(0) as usize);
        return Ok(out);
    }
    out.push(GcfConvergent { index: 0, h: cf.a(0), k: BigInt::one(), big_b: BigInt::one() });
    for n in 1..=n_max {
        let (a, b) = (cf.a(n as u64), cf.b(n as u64)?);
        let (p1, p2) = (&out[out.len() - 1], &out[out.len() - 2]);
        let h = &a * &p1.h + &b * &p2.h;
        let k = &a * &p1.k + &b * &p2.k;
        let big_b = &p1.big_b * &b;
        out.push(GcfConvergent { index: n, h, k, big_b });
    }
    Ok(out)
}

/// Exact arithmetic needed by the telescoping identity.
pub trait ExactScalar: Clone + PartialEq + fmt::Display {
    fn int_like(&self, n: &BigInt) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div_int(&self, n: &BigInt) -> Self;
}

impl ExactScalar for BigRational {
    fn int_like(&self, n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div_int(&self, n: &BigInt) -> Self {
        self / BigRational::from_integer(n.clone())
    }
}

impl ExactScalar for QuadraticSurd {
    fn int_like(&self, n: &BigInt) -> Self {
        self.lift_int(n.clone())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div_int(&self, n: &BigInt) -> Self {
        self * &self.lift(&BigRational::new(BigInt::one(), n.clone()))
    }
}

#[derive(Clone, Debug)]
pub struct Telescoping<T> {
    pub lhs: T,
    pub rhs: T,
    /// `c_{N+1} eps_N eps_{N+1}`.
    pub boundary: T,
}

impl<T: ExactScalar> Telescoping<T> {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Both sides of the telescoping identity, with `xi` as an exact value.
pub fn telescoping_partial<T: ExactScalar>(cf: &GeneralizedCF, xi: &T, n: i64) -> Result<Telescoping<T>> {
    if n < -1 {
        return Err(Error::Domain(format!("N = {n} < -1")));
    }
    let conv = gcf_convergents(cf, n + 1)?;
    let eps: Vec<T> = conv.iter().map(|c| xi.int_like(&c.h).sub(&xi.mul(&xi.int_like(&c.k)))).collect();
    let at = |j: i64| &eps[(j + 2) as usize];
    let big_b = |j: i64| &conv[(j + 2) as usize].big_b;
    let mut lhs = xi.int_like(&BigInt::zero());
    for j in -1..=n {
        let a = cf.a((j + 1) as u64);
        if a.is_zero() {
            continue;
        }
        let term = at(j).mul(at(j)).mul(&xi.int_like(&a)).div_int(big_b(j + 1));
        lhs = lhs.add(&term);
    }
    let boundary = at(n).mul(at(n + 1)).div_int(big_b(n + 1));
    // c_0 eps_{-2} eps_{-1} = -xi
    let rhs = boundary.add(xi);
    Ok(Telescoping { lhs, rhs, boundary })
}

#[derive(Clone, Debug)]
pub struct LimitCheck {
    pub terms: i64,
    pub partial: HpReal,
    pub residual: HpReal,
    pub boundary: HpReal,
    /// `partial - xi` and the boundary term overlap, as the identity demands.
    pub consistent: bool,
}

/// Partial sum `sum_{n=-1}^{N} a_{n+1} eps_n^2 / B_{n+1}` against an enclosure
/// of the limit.
pub fn squared_error_limit_check(cf: &GeneralizedCF, xi_ref: &HpReal, n: i64, prec: u32) -> Result<LimitCheck> {
    if n < -1 {
        return Err(Error::Domain(format!("N = {n} < -1")));
    }
    let conv = gcf_convergents(cf, n + 1)?;
    let last = conv.last().expect("non-empty");
    let w = prec + (last.h.bits() + last.k.bits()) as u32 + 64;
    let xi = xi_ref.with_prec(w);
    let eps: Vec<HpReal> = conv.iter().map(|c| HpReal::from_int(&c.h, w).sub(&xi.mul_int(&c.k))).collect();
    let at = |j: i64| &eps[(j + 2) as usize];
    let mut partial = HpReal::zero(w);
    for j in -1..=n {
        let a = cf.a((j + 1) as u64);
        if a.is_zero() {
            continue;
        }
        let term = at(j).sqr().mul_int(&a).div_int(&conv[(j + 3) as usize].big_b)?;
        partial = partial.add(&term);
    }
    let boundary = at(n).mul(at(n + 1)).div_int(&conv[(n + 3) as usize].big_b)?;
    let residual = partial.sub(&xi);
    let consistent = residual.overlaps(&boundary);
    Ok(LimitCheck {
        terms: n,
        partial: partial.with_prec(prec),
        residual: residual.with_prec(prec),
        boundary: boundary.with_prec(prec),
        consistent,
    })
}

/// `L_n = sum_{j<n} (-1)^j/(2j+1)`.
pub fn leibniz_partial(n: u64) -> BigRational {
    let mut acc = BigRational::zero();
    for j in 0..n {
        let t = BigRational::new(BigInt::one(), BigInt::from(2 * j + 1));
        if j % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc
}

/// `S_n = sum_{j=1}^{n} (-1)^(j+1)/j`.
pub fn alternating_harmonic(n: u64) -> BigRational {
    let mut acc = BigRational::zero();
    for j in 1..=n {
        let t = BigRational::new(BigInt::one(), BigInt::from(j));
        if j % 2 == 1 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc
}

/// A series tail computed independently in three ways.
#[derive(Clone, Debug)]
pub struct TailValue {
    pub n: u64,
    /// Limit constant minus the exact partial sum.
    pub direct: HpReal,
    /// Digamma expression.
    pub digamma: HpReal,
    /// Truncated alternating series; its error is below the first omitted term.
    pub bracket: HpReal,
}

impl TailValue {
    pub fn consistent(&self) -> bool {
        self.direct.overlaps(&self.digamma)
            && self.direct.overlaps(&self.bracket)
            && self.digamma.overlaps(&self.bracket)
    }

    /// `|direct - digamma|`, upper bound.
    pub fn deviation(&self) -> f64 {
        self.direct.sub(&self.digamma).abs_upper_f64()
    }
}

const BRACKET_TERMS: u64 = 2000;

/// Alternating sum `sum_{j=0}^{M-1} (-1)^j / (p j + q)` as an enclosure that
/// includes the infinite tail.
fn alternating_bracket(p: u64, q: u64, prec: u32) -> HpReal {
    let mut acc = HpReal::zero(prec);
    for j in 0..BRACKET_TERMS {
        let t = HpReal::from_rational(&BigRational::new(BigInt::one(), BigInt::from(p * j + q)), prec);
        acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
    }
    let first_omitted = BigRational::new(BigInt::one(), BigInt::from(p * BRACKET_TERMS + q));
    acc.widen_rational(&first_omitted)
}

fn sign_pow(n: u64) -> BigInt {
    if n % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// `L_n` and the tail `pi/4 - L_n`, also as `(-1)^n/4 [psi((2n+3)/4) - psi((2n+1)/4)]`.
pub fn leibniz_partial_and_tail(n: u64, prec: u32) -> Result<(BigRational, TailValue)> {
    let l = leibniz_partial(n);
    let w = prec + 16;
    let direct = const_pi(w).mul_pow2(-2).sub(&HpReal::from_rational(&l, w));
    let psi = digamma(&BigRational::new(BigInt::from(2 * n + 3), BigInt::from(4)), w)?
        .sub(&digamma(&BigRational::new(BigInt::from(2 * n + 1), BigInt::from(4)), w)?);
    let dg = psi.mul_pow2(-2).mul_int(&sign_pow(n));
    let bracket = alternating_bracket(2, 2 * n + 1, w).mul_int(&sign_pow(n));
    let tail =
        TailValue { n, direct: direct.with_prec(prec), digamma: dg.with_prec(prec), bracket: bracket.with_prec(prec) };
    Ok((l, tail))
}

/// `S_n` and the tail `S_n - ln 2`, also as `-(-1)^n/2 [psi(n/2+1) - psi(n/2+1/2)]`.
pub fn alternating_harmonic_and_tail(n: u64, prec: u32) -> Result<(BigRational, TailValue)> {
    let s = alternating_harmonic(n);
    let w = prec + 16;
    let direct = HpReal::from_rational(&s, w).sub(&const_ln2(w));
    let psi = digamma(&BigRational::new(BigInt::from(n + 2), BigInt::from(2)), w)?
        .sub(&digamma(&BigRational::new(BigInt::from(n + 1), BigInt::from(2)), w)?);
    let dg = psi.mul_pow2(-1).mul_int(&-sign_pow(n));
    let bracket = alternating_bracket(1, n + 1, w).mul_int(&-sign_pow(n));
    let tail =
        TailValue { n, direct: direct.with_prec(prec), digamma: dg.with_prec(prec), bracket: bracket.with_prec(prec) };
    Ok((s, tail))
}

#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub instance: &'static str,
    pub terms: u64,
    pub prec: u32,
    /// Squared-tail sum on the left of the identity.
    pub sum: HpReal,
    /// Closed-form right-hand side from reference constants.
    pub reference: HpReal,
    /// `reference - sum`; positive, about `1/(2N)` for pi and `1/(4N)` for ln 2.
    pub residual: HpReal,
    /// Number of leading tails also computed through digamma.
    pub digamma_checked: u64,
    /// Largest `|recurrence tail - digamma tail|` among those.
    pub digamma_max_deviation: f64,
}

fn ceil_log2(n: u64) -> u32 {
    64 - n.max(1).saturating_sub(1).leading_zeros()
}

/// Fixed-point running tail with a bound on its error in ulps.
struct RunningTail {
    w: u32,
    value: BigInt,
    err: BigInt,
}

impl RunningTail {
    fn seed(x: &HpReal, w: u32) -> Self {
        let scaled = x.mul_pow2(w as i64);
        let value = scaled.mid_rational().floor().to_integer();
        let err = (scaled.radius() + BigRational::one()).ceil().to_integer();
        RunningTail { w, value, err }
    }

    /// Adds `sign / d`, rounding the quotient down.
    fn step(&mut self, sign: i64, d: u64) {
        let q = (BigInt::one() << self.w as u64) / d;
        if sign > 0 {
            self.value += q;
        } else {
            self.value -= q;
        }
        self.err += 1;
    }

    /// `floor(value^2 / 2^w)` and its error bound in ulps.
    fn square(&self) -> (BigInt, BigInt) {
        let sq = (&self.value * &self.value) >> self.w as u64;
        let cross = BigInt::from(2) * self.value.abs() * &self.err + &self.err * &self.err;
        let e = (cross >> self.w as u64) + 2;
        (sq, e)
    }

    fn as_real(&self) -> HpReal {
        HpReal::from_parts(self.value.clone(), self.err.magnitude().clone(), -(self.w as i64), self.w)
    }
}

fn sum_of_squares(
    mut tail: RunningTail,
    first: u64,
    last: u64,
    step: impl Fn(u64) -> (i64, u64),
    mut probe: impl FnMut(u64, &RunningTail),
) -> HpReal {
    let w = tail.w;
    let mut sum = BigInt::zero();
    let mut err = BigInt::zero();
    for n in first..=last {
        probe(n, &tail);
        let (sq, e) = tail.square();
        sum += sq;
        err += e;
        let (sign, d) = step(n);
        tail.step(sign, d);
    }
    HpReal::from_parts(sum, err.magnitude().clone(), -(w as i64), w)
}

const DIGAMMA_CHECK_TERMS: u64 = 50;

/// `8 sum_{n=1}^{N} (pi/4 - L_n)^2` against `pi - pi^2/4`.
pub fn pi_identity_sum(terms: u64, prec: u32) -> Result<IdentityReport> {
    if terms < 1 {
        return Err(Error::Domain("pi identity needs N >= 1".into()));
    }
    let w = prec + ceil_log2(terms) + 16;
    let pi = const_pi(w + 8);
    let seed = pi.mul_pow2(-2).sub(&HpReal::one(w + 8));
    let check_upto = DIGAMMA_CHECK_TERMS.min(terms);
    let mut max_dev = 0f64;
    let mut failure = None;
    let dg_prec = prec.min(160);
    let sum = sum_of_squares(
        RunningTail::seed(&seed, w),
        1,
        terms,
        // tail_{n+1} = tail_n - (-1)^n/(2n+1)
        |n| (if n % 2 == 0 { -1 } else { 1 }, 2 * n + 1),
        |n, t| {
            if n <= check_upto && failure.is_none() {
                match leibniz_partial_and_tail(n, dg_prec) {
                    Ok((_, tv)) => max_dev = max_dev.max(t.as_real().sub(&tv.digamma).abs_upper_f64()),
                    Err(e) => failure = Some(e),
                }
            }
        },
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let sum = sum.mul_int(&BigInt::from(8));
    let reference = pi.sub(&pi.sqr().mul_pow2(-2));
    let residual = reference.sub(&sum);
    Ok(IdentityReport {
        instance: "pi",
        terms,
        prec,
        sum: sum.with_prec(prec),
        reference: reference.with_prec(prec),
        residual: residual.with_prec(prec),
        digamma_checked: check_upto,
        digamma_max_deviation: max_dev,
    })
}

/// `sum_{n=0}^{N} (S_n - ln 2)^2` against `ln 2`.
pub fn ln2_identity_sum(terms: u64, prec: u32) -> Result<IdentityReport> {
    let w = prec + ceil_log2(terms + 1) + 16;
    let ln2 = const_ln2(w + 8);
    let check_upto = DIGAMMA_CHECK_TERMS.min(terms);
    let mut max_dev = 0f64;
    let mut failure = None;
    let dg_prec = prec.min(160);
    let sum = sum_of_squares(
        RunningTail::seed(&ln2.neg(), w),
        0,
        terms,
        // S_{n+1} = S_n + (-1)^n/(n+1)
        |n| (if n % 2 == 0 { 1 } else { -1 }, n + 1),
        |n, t| {
            if n <= check_upto && failure.is_none() {
                match alternating_harmonic_and_tail(n, dg_prec) {
                    Ok((_, tv)) => max_dev = max_dev.max(t.as_real().sub(&tv.digamma).abs_upper_f64()),
                    Err(e) => failure = Some(e),
                }
            }
        },
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let residual = ln2.sub(&sum);
    Ok(IdentityReport {
        instance: "ln2",
        terms,
        prec,
        sum: sum.with_prec(prec),
        reference: ln2.with_prec(prec),
        residual: residual.with_prec(prec),
        digamma_checked: check_upto + 1,
        digamma_max_deviation: max_dev,
    })
}

/// Digamma form of the pi identity, `8 sum_{n=1}^{N} (1/16)[psi((2n+3)/4) - psi((2n+1)/4)]^2`.
pub fn pi_identity_digamma_form(terms: u64, prec: u32) -> Result<HpReal> {
    let mut acc = HpReal::zero(prec + 16);
    for n in 1..=terms {
        let (_, t) = leibniz_partial_and_tail(n, prec + 8)?;
        acc = acc.add(&t.digamma.sqr());
    }
    Ok(acc.mul_int(&BigInt::from(8)).with_prec(prec))
}

/// Digamma form of the ln 2 identity, `(1/4) sum_{n=0}^{N} [psi(n/2+1) - psi(n/2+1/2)]^2`.
pub fn ln2_identity_digamma_form(terms: u64, prec: u32) -> Result<HpReal> {
    let mut acc = HpReal::zero(prec + 16);
    for n in 0..=terms {
        let psi = digamma(&BigRational::new(BigInt::from(n + 2), BigInt::from(2)), prec + 8)?
            .sub(&digamma(&BigRational::new(BigInt::from(n + 1), BigInt::from(2)), prec + 8)?);
        acc = acc.add(&psi.sqr().mul_pow2(-2));
    }
    Ok(acc.with_prec(prec))
}

#[derive(Clone, Debug, Serialize)]
pub struct CustomReport {
    pub label: String,
    pub terms: i64,
    /// Index `M` of the convergent `h_M/k_M` used as the reference value.
    pub reference_index: i64,
    pub partial: String,
    pub reference: String,
    /// `c_{N+1} eps_N eps_{N+1}`, equal to `partial - reference` exactly.
    pub boundary: String,
    pub identity_holds: bool,
}

/// Runs the identity on a user sequence pair with `xi` replaced by the exact
/// convergent `h_{2N+1}/k_{2N+1}`; convergence is left to the caller to judge.
pub fn custom_check(cf: &GeneralizedCF, terms: i64, digits: usize) -> Result<CustomReport> {
    if !(0..=20_000).contains(&terms) {
        return Err(Error::Domain(format!("custom instance supports 0 <= N <= 20000, got {terms}")));
    }
    let m = 2 * terms + 1;
    let conv = gcf_convergents(cf, m)?;
    let last = conv.last().expect("non-empty");
    if last.k.is_zero() {
        return Err(Error::Degenerate(format!("k_{m} = 0; the reference convergent is undefined")));
    }
    let xi = BigRational::new(last.h.clone(), last.k.clone());
    let t = telescoping_partial(cf, &xi, terms)?;
    let fmt = |q: &BigRational| HpReal::from_rational(q, 64 + (digits as f64 * 3.33) as u32).to_decimal(digits);
    Ok(CustomReport {
        label: cf.label.clone(),
        terms,
        reference_index: m,
        partial: fmt(&t.lhs),
        reference: fmt(&xi),
        boundary: fmt(&t.boundary),
        identity_holds: t.holds(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{parse_surd, rat};
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn double_factorial_odd(n: u64) -> BigInt {
        (1..=n).fold(BigInt::one(), |acc, j| acc * (2 * j - 1))
    }

    fn factorial(n: u64) -> BigInt {
        (1..=n).fold(BigInt::one(), |acc, j| acc * j)
    }

    #[test]
    fn sequences() {
        let pi = pi_instance();
        assert_eq!(pi.b(1).unwrap(), BigInt::from(4));
        assert_eq!(pi.b(2).unwrap(), BigInt::from(1));
        assert_eq!(pi.b(3).unwrap(), BigInt::from(9));
        assert_eq!(pi.a(0), BigInt::zero());
        assert_eq!(pi.a(1), BigInt::one());
        assert_eq!(pi.a(7), BigInt::from(2));
        assert_eq!(Seq::parse("poly:(1, -2, 1)").unwrap().at(5), BigInt::from(16));
        assert_eq!(Seq::parse("const:-3").unwrap().at(9), BigInt::from(-3));
        for bad in ["poly:()", "poly:1,2", "lin:3", "const:x"] {
            assert!(Seq::parse(bad).is_err(), "{bad}");
        }
        let neg = GeneralizedCF::new(Seq::Const(1.into()), Seq::Poly(ints(&[3, -1])), "neg");
        assert!(gcf_convergents(&neg, 5).is_err());
    }

    #[test]
    fn pi_convergents() {
        let conv = gcf_convergents(&pi_instance(), 50).unwrap();
        assert_eq!(conv[3 + 2].k, BigInt::from(15));
        for c in conv.iter().filter(|c| c.index >= 1) {
            let n = c.index as u64;
            assert_eq!(c.k, double_factorial_odd(n));
            let l = leibniz_partial(n);
            assert_eq!(BigRational::from_integer(c.h.clone()), l * BigRational::from_integer(4 * &c.k));
            let bb = BigInt::from(4) * double_factorial_odd(n - 1).pow(2);
            assert_eq!(c.big_b, bb, "B_{n}");
        }
        assert_eq!(conv[2 + 2].big_b, BigInt::from(4));
    }

    #[test]
    fn ln2_convergents() {
        let conv = gcf_convergents(&ln2_instance(), 50).unwrap();
        assert_eq!(conv[4 + 2].k, BigInt::from(24));
        for c in conv.iter().filter(|c| c.index >= 0) {
            let n = c.index as u64;
            assert_eq!(c.k, factorial(n));
            assert_eq!(
                BigRational::from_integer(c.h.clone()),
                alternating_harmonic(n) * BigRational::from_integer(c.k.clone())
            );
        }
        assert_eq!(alternating_harmonic(2), rat(1, 2));
        assert_eq!(alternating_harmonic(3), rat(5, 6));
    }

    #[test]
    fn unit_numerators_recover_regular_recurrences() {
        let cf = GeneralizedCF::new(Seq::Const(1.into()), Seq::Const(1.into()), "phi");
        let conv = gcf_convergents(&cf, 10).unwrap();
        let fib: Vec<i64> = conv.iter().skip(2).map(|c| c.k.to_i64().unwrap()).collect();
        assert_eq!(fib, vec![1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89]);
        let phi = parse_surd("(1+sqrt(5))/2").unwrap();
        for n in [-1, 0, 5, 20] {
            assert!(telescoping_partial(&cf, &phi, n).unwrap().holds());
        }
        let lim = squared_error_limit_check(&cf, &crate::numeric::eval_surd(&phi, 256), 100, 128).unwrap();
        assert!(lim.residual.abs_upper_f64() < 1e-40 && lim.consistent);
    }

    #[test]
    fn seed_case() {
        let cf = GeneralizedCF::new(Seq::Const(3.into()), Seq::Const(2.into()), "c");
        let xi = rat(7, 5);
        let t = telescoping_partial(&cf, &xi, -1).unwrap();
        assert_eq!(t.lhs, rat(3, 1));
        assert_eq!(t.rhs, (rat(3, 1) - &xi) + &xi);
        assert!(t.holds());
    }

    #[test]
    fn limits_approach_constants() {
        let pi = const_pi(400);
        let lim = squared_error_limit_check(&pi_instance(), &pi, 200, 128).unwrap();
        assert!(lim.consistent);
        assert!(lim.residual.abs_upper_f64() < 0.01);
        let ln2 = const_ln2(400);
        let lim = squared_error_limit_check(&ln2_instance(), &ln2, 200, 128).unwrap();
        assert!(lim.consistent);
        assert!(lim.residual.abs_upper_f64() < 0.01);
    }

    #[test]
    fn tails() {
        let (l1, t) = leibniz_partial_and_tail(1, 128).unwrap();
        assert_eq!(l1, rat(1, 1));
        assert!(t.consistent());
        assert!((t.direct.to_f64() - (std::f64::consts::FRAC_PI_4 - 1.0)).abs() < 1e-15);
        // n = 0: (1/4)(psi(3/4) - psi(1/4)) = pi/4
        let (_, t0) = leibniz_partial_and_tail(0, 128).unwrap();
        assert!(t0.digamma.sub(&const_pi(128).mul_pow2(-2)).abs_upper_f64() < 1e-30);
        for n in [2u64, 17, 50] {
            let (_, t) = leibniz_partial_and_tail(n, 96).unwrap();
            assert!(t.consistent() && t.deviation() < 1e-12, "n = {n}");
            let (_, t) = alternating_harmonic_and_tail(n, 96).unwrap();
            assert!(t.consistent() && t.deviation() < 1e-12, "n = {n}");
        }
        // psi(1) - psi(1/2) = 2 ln 2
        let (_, t0) = alternating_harmonic_and_tail(0, 128).unwrap();
        assert!(t0.digamma.add(&const_ln2(128)).abs_upper_f64() < 1e-30);
    }

    #[test]
    fn identity_sums_small() {
        let r = pi_identity_sum(1000, 128).unwrap();
        let scaled = r.residual.to_f64() * 2000.0;
        assert!((scaled - 1.0).abs() < 0.01, "{scaled}");
        assert!(r.digamma_max_deviation < 1e-30);
        let r = ln2_identity_sum(1000, 128).unwrap();
        let scaled = r.residual.to_f64() * 4000.0;
        assert!((scaled - 1.0).abs() < 0.01, "{scaled}");
        let mut prev = f64::INFINITY;
        for n in [10u64, 100, 400] {
            let r = pi_identity_sum(n, 128).unwrap();
            assert!(r.residual.is_positive());
            assert!(r.residual.to_f64() < prev);
            prev = r.residual.to_f64();
        }
    }

    #[test]
    fn digamma_forms_match_running_sums() {
        let direct = pi_identity_sum(20, 128).unwrap().sum;
        let dg = pi_identity_digamma_form(20, 128).unwrap();
        assert!(direct.sub(&dg).abs_upper_f64() < 1e-30);
        let direct = ln2_identity_sum(20, 128).unwrap().sum;
        let dg = ln2_identity_digamma_form(20, 128).unwrap();
        assert!(direct.sub(&dg).abs_upper_f64() < 1e-30);
    }

    #[test]
    fn custom_reports_boundary() {
        let cf = GeneralizedCF::new(Seq::Const(2.into()), Seq::Const(1.into()), "1+sqrt2");
        let r = custom_check(&cf, 10, 30).unwrap();
        assert!(r.identity_holds);
        assert!(r.reference.starts_with("2.41421356"));
    }

    fn small_seq() -> impl Strategy<Value = Seq> {
        prop_oneof![
            (1i64..=10).prop_map(|c| Seq::Const(c.into())),
            prop::collection::vec(0i64..=10, 1..=3).prop_map(|mut v| {
                v[0] = v[0].max(1);
                Seq::Poly(ints(&v))
            }),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn telescoping_exact(a in small_seq(), b in small_seq(), num in -50i64..50, den in 1i64..30, n in -1i64..=30) {
            let cf = GeneralizedCF::new(a, b, "random");
            let t = telescoping_partial(&cf, &rat(num, den), n).unwrap();
            prop_assert!(t.holds(), "{} vs {}", t.lhs, t.rhs);
        }
    }
}
