//! Units `u = k_{N-1} xi + k_{N-2}` attached to purely periodic expansions,
//! their norms, Pell solutions and the unit/periodicity equivalence.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::cfrac::{self, convergents, CompleteQuotient};
use crate::error::{Error, Result};
use crate::errsum::PeriodicXi;
use crate::exactnum::{is_squarefree, isqrt, QuadraticSurd};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FundamentalClaim {
    /// Squarefree radicand and primitive period: the unit generates the units
    /// of the order spanned by the expansion.
    Asserted,
    /// Non-squarefree radicand or a repeated period.
    NotAsserted,
}

#[derive(Clone, Debug)]
pub struct UnitReport {
    pub u: QuadraticSurd,
    pub norm: i64,
    /// Primitive period length.
    pub period: usize,
    /// Number of primitive periods folded into `u`.
    pub repetition: usize,
    pub claim: FundamentalClaim,
    /// `j` with `u = e^j`, `e` the fundamental unit of the maximal order,
    /// when the radicand is squarefree.
    pub maximal_order_exponent: Option<u32>,
}

fn unit_of(p: &PeriodicXi, repetition: usize) -> QuadraticSurd {
    p.unit().pow(repetition as u32)
}

/// `u` for the primitive period of `xi`.
pub fn fundamental_unit(xi: &QuadraticSurd) -> Result<UnitReport> {
    unit_report(xi, 1)
}

/// `u` for the word made of `repetition` copies of the primitive period.
pub fn unit_report(xi: &QuadraticSurd, repetition: usize) -> Result<UnitReport> {
    if repetition == 0 {
        return Err(Error::Domain("repetition must be at least 1".into()));
    }
    let p = PeriodicXi::new(xi)?;
    let u = unit_of(&p, repetition);
    let norm = u.norm();
    let expect = if (p.len() * repetition) % 2 == 0 { 1 } else { -1 };
    if norm != BigRational::from_integer(expect.into()) {
        return Err(Error::Internal(format!("norm of {u} is {norm}, expected {expect}")));
    }
    let squarefree = is_squarefree(xi.radicand());
    let claim = if squarefree && repetition == 1 { FundamentalClaim::Asserted } else { FundamentalClaim::NotAsserted };
    let maximal_order_exponent = if squarefree { unit_exponent(&u, &maximal_order_unit(xi.radicand())?) } else { None };
    Ok(UnitReport { u, norm: expect, period: p.len(), repetition, claim, maximal_order_exponent })
}

/// Fundamental unit of the ring of integers of `Q(sqrt(d))`, `d` squarefree,
/// from the period of the reduced generator `omega + t`.
pub fn maximal_order_unit(d: &BigInt) -> Result<QuadraticSurd> {
    if !is_squarefree(d) || *d < BigInt::from(2) {
        return Err(Error::Domain(format!("{d} is not a squarefree radicand >= 2")));
    }
    let s = isqrt(d)?;
    let omega = if d.mod_floor(&BigInt::from(4)) == BigInt::one() {
        // (2t + 1 + sqrt d)/2 with t = floor((sqrt d - 1)/2)
        let t: BigInt = (&s - 1) / 2;
        QuadraticSurd::new(2 * t + 1, 1, 2, d.clone())?
    } else {
        QuadraticSurd::new(s, 1, 1, d.clone())?
    };
    Ok(PeriodicXi::new(&omega)?.unit())
}

/// Smallest `j >= 1` with `e^j = u`, if any below 64.
fn unit_exponent(u: &QuadraticSurd, e: &QuadraticSurd) -> Option<u32> {
    let mut acc = e.clone();
    for j in 1..64 {
        if acc == *u {
            return Some(j);
        }
        if acc > *u {
            return None;
        }
        acc = &acc * e;
    }
    None
}

/// `prod_{i < N k} xi_i` over the complete quotients.
pub fn product_complete_quotients(xi: &QuadraticSurd, repetition: usize) -> Result<QuadraticSurd> {
    let p = PeriodicXi::new(xi)?;
    let mut cq = CompleteQuotient::from_surd(xi)?;
    let mut prod = xi.one_like();
    for _ in 0..p.len() * repetition.max(1) {
        prod = prod.try_mul(&cq.to_surd())?;
        cq = cq.step().1;
    }
    Ok(prod)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PellSolution {
    pub n: u32,
    pub x: String,
    pub y: String,
    pub d: String,
    /// `x^2 - D y^2`.
    pub residual: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PellReport {
    pub d: String,
    pub unit: String,
    pub period: usize,
    pub solutions: Vec<PellSolution>,
    /// Exponents whose coordinates are not integral.
    pub non_integral: Vec<u32>,
}

/// `(x_n, y_n)` from `u^n = x_n + y_n sqrt(D)`, `0 <= n <= n_max`.
pub fn pell_solutions(xi: &QuadraticSurd, n_max: u32) -> Result<PellReport> {
    let p = PeriodicXi::new(xi)?;
    let u = p.unit();
    let two = BigInt::from(2);
    if !(two.clone() % u.c()).is_zero() {
        return Err(Error::Domain(format!("unit {u} has a denominator not dividing 2")));
    }
    let d = u.radicand().clone();
    let mut report = PellReport {
        d: d.to_string(),
        unit: u.to_string(),
        period: p.len(),
        solutions: Vec::new(),
        non_integral: Vec::new(),
    };
    let mut power = u.one_like();
    for n in 0..=n_max {
        let (x, y) = (power.rational_part(), power.radical_coeff());
        if x.is_integer() && y.is_integer() {
            let (x, y) = (x.to_integer(), y.to_integer());
            let residual = &x * &x - &d * &y * &y;
            let expect = if (n as usize * p.len()) % 2 == 0 { 1 } else { -1 };
            let residual = residual
                .to_i64()
                .filter(|r| *r == expect)
                .ok_or_else(|| Error::Internal(format!("Pell residual {residual} at n = {n}, expected {expect}")))?;
            report.solutions.push(PellSolution { n, x: x.to_string(), y: y.to_string(), d: d.to_string(), residual });
        } else {
            report.non_integral.push(n);
        }
        power = &power * &u;
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub n: usize,
    pub u: String,
    pub norm: String,
    pub is_unit: bool,
    pub purely_periodic: bool,
    /// Period length of the expansion of `xi`.
    pub period_len: usize,
    /// `is_unit == purely_periodic`, checked when `n` is a multiple of the period.
    pub consistent: Option<bool>,
}

/// `u = k_{N-1} xi + k_{N-2}` from the regular expansion of `xi > 1`, its norm,
/// and the Galois test, side by side.
pub fn unit_periodicity_equivalence(xi: &QuadraticSurd, n: usize) -> Result<EquivalenceReport> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    if xi.compare(&xi.one_like())? != std::cmp::Ordering::Greater {
        return Err(Error::Domain(format!("{xi} is not > 1")));
    }
    let e = cfrac::expand(xi)?;
    let c = convergents(e.digits(), n as i64 - 1)?;
    let (k1, k2) = (&c[c.len() - 1].k, &c[c.len() - 2].k);
    let u = xi * &xi.lift_int(k1.clone()) + xi.lift_int(k2.clone());
    let norm = u.norm();
    let is_unit = norm.abs().is_one();
    let purely_periodic = cfrac::is_purely_periodic(xi)?;
    let period_len = e.period_len();
    let consistent = (n % period_len == 0).then_some(is_unit == purely_periodic);
    Ok(EquivalenceReport {
        n,
        u: u.to_string(),
        norm: norm.to_string(),
        is_unit,
        purely_periodic,
        period_len,
        consistent,
    })
}
