//! Error terms `eps_n = h_n - xi*k_n` of purely periodic continued fractions,
//! their geometric decomposition by residue class, and the weighted sums
//! `f(s) = sum_{n >= -1} a_{n+1} |eps_n|^s`.
//!
//! Residue classes: index `-1` belongs to class `N-1`, so the class sums use
//! `eps_m` as first term for `m <= N-2` and `eps_{-1} = 1` for `m = N-1`.
//! The weight of class `i` is `a_{(i+1) mod N}`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cfrac::{self, convergents, ConvergentPair};
use crate::error::{Error, Result};
use crate::exactnum::QuadraticSurd;
use crate::numeric::HpReal;

/// A purely periodic quadratic irrational together with its primitive period.
#[derive(Clone, Debug)]
pub struct PeriodicXi {
    xi: QuadraticSurd,
    period: Vec<BigInt>,
}

impl PeriodicXi {
    pub fn new(xi: &QuadraticSurd) -> Result<Self> {
        if !cfrac::is_purely_periodic(xi)? {
            return Err(Error::Domain(format!("{xi} is not purely periodic (needs xi > 1 and -1 < conj(xi) < 0)")));
        }
        let e = cfrac::expand(xi)?;
        debug_assert!(e.is_purely_periodic());
        Ok(PeriodicXi { xi: xi.clone(), period: e.period })
    }

    pub fn from_word(word: &[BigInt]) -> Result<Self> {
        Self::new(&cfrac::surd_from_word(word)?)
    }

    pub fn xi(&self) -> &QuadraticSurd {
        &self.xi
    }

    pub fn period(&self) -> &[BigInt] {
        &self.period
    }

    /// Primitive period length `N`.
    pub fn len(&self) -> usize {
        self.period.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `a_i` for `i >= 0`.
    pub fn digit(&self, i: usize) -> &BigInt {
        &self.period[i % self.period.len()]
    }

    /// `(-1)^N` as `1` or `-1`.
    pub fn period_sign(&self) -> i64 {
        if self.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Convergents for indices `-2 ..= n`.
    pub fn convergents(&self, n: i64) -> Vec<ConvergentPair> {
        convergents(self.period.iter().cycle(), n).expect("cyclic digit stream never runs out")
    }

    /// Error terms `eps_j` for `j = -2 ..= n` (position `j + 2`).
    pub fn errors(&self, n: i64) -> Vec<QuadraticSurd> {
        self.convergents(n).iter().map(|c| eps(&self.xi, c)).collect()
    }

    /// `u = k_{N-1} xi + k_{N-2}`.
    pub fn unit(&self) -> QuadraticSurd {
        let c = self.convergents(self.len() as i64 - 1);
        let (k1, k2) = (&c[c.len() - 1].k, &c[c.len() - 2].k);
        &self.xi * &self.xi.lift_int(k1.clone()) + self.xi.lift_int(k2.clone())
    }

    /// `rho = (-1)^N / u`.
    pub fn rho(&self) -> QuadraticSurd {
        self.xi.lift_int(self.period_sign()).try_div(&self.unit()).expect("u > 1")
    }

    /// `|rho| = 1/u`.
    pub fn abs_rho(&self) -> QuadraticSurd {
        self.unit().recip().expect("u > 1")
    }
}

fn eps(xi: &QuadraticSurd, c: &ConvergentPair) -> QuadraticSurd {
    xi.lift_int(c.h.clone()) - xi * &xi.lift_int(c.k.clone())
}

/// `|eps_n|` from the alternation `sign(eps_n) = (-1)^(n-1)`, `n >= -1`.
fn abs_by_sign_law(value: &QuadraticSurd, n: i64) -> QuadraticSurd {
    debug_assert!(n >= -1);
    if (n - 1).rem_euclid(2) == 0 {
        value.clone()
    } else {
        -value
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorTerm {
    pub index: i64,
    pub value: QuadraticSurd,
}

/// `eps_n = h_n - xi k_n` for any irrational quadratic `xi`, `n >= -2`.
pub fn error_term(xi: &QuadraticSurd, n: i64) -> Result<ErrorTerm> {
    if n < -2 {
        return Err(Error::Domain(format!("error index {n} < -2")));
    }
    let e = cfrac::expand(xi)?;
    let c = convergents(e.digits(), n)?;
    Ok(ErrorTerm { index: n, value: eps(xi, c.last().expect("seeds present")) })
}

pub fn rho(xi: &QuadraticSurd) -> Result<QuadraticSurd> {
    Ok(PeriodicXi::new(xi)?.rho())
}

/// Product of the digit matrices `[[a, 1], [1, 0]]` over one period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodMatrix {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
    /// `C xi + D`, the expanding eigenvalue.
    pub lambda1: QuadraticSurd,
    /// `(-1)^N / lambda1`.
    pub lambda2: QuadraticSurd,
}

impl PeriodMatrix {
    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }
}

pub fn period_matrix(xi: &QuadraticSurd) -> Result<PeriodMatrix> {
    let p = PeriodicXi::new(xi)?;
    let (mut a, mut b, mut c, mut d) = (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
    for digit in p.period() {
        // [[a,b],[c,d]] * [[digit,1],[1,0]]
        let (na, nc) = (&a * digit + &b, &c * digit + &d);
        b = std::mem::replace(&mut a, na);
        d = std::mem::replace(&mut c, nc);
    }
    let lambda1 = xi * &xi.lift_int(c.clone()) + xi.lift_int(d.clone());
    // M (xi, 1)^T = lambda1 (xi, 1)^T
    let top = xi * &xi.lift_int(a.clone()) + xi.lift_int(b.clone());
    if top != xi * &lambda1 {
        return Err(Error::Internal(format!("period matrix of {xi} fails the eigen relation")));
    }
    let lambda2 = xi.lift_int(p.period_sign()).try_div(&lambda1)?;
    Ok(PeriodMatrix { a, b, c, d, lambda1, lambda2 })
}

/// Outcome of checking `eps_{mN+r} = eps_r rho^m`.
#[derive(Clone, Debug, Serialize)]
pub struct GeometricReport {
    pub period: usize,
    pub m_max: u32,
    pub checked: usize,
    /// `(r, m)` pairs where equality failed; `r = -1` is the seed of class `N-1`.
    pub failures: Vec<(i64, u32)>,
}

impl GeometricReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Recomputes every error from convergents and compares with the geometric law.
pub fn verify_geometric(xi: &QuadraticSurd, m_max: u32) -> Result<GeometricReport> {
    let p = PeriodicXi::new(xi)?;
    let n = p.len() as i64;
    let top = n * (m_max as i64 + 1) - 1;
    let errs = p.errors(top);
    let at = |j: i64| &errs[(j + 2) as usize];
    let rho = p.rho();
    let mut rho_m = rho.one_like();
    let mut report = GeometricReport { period: p.len(), m_max, checked: 0, failures: Vec::new() };
    for m in 0..=m_max {
        for r in -1..n - 1 {
            let j = r + m as i64 * n;
            report.checked += 1;
            if *at(j) != at(r) * &rho_m {
                report.failures.push((r, m));
            }
        }
        rho_m = &rho_m * &rho;
    }
    Ok(report)
}

/// `beta_m(s)` in closed form, `0 <= m <= N-1`, integer `s >= 1`.
pub fn beta_closed(xi: &QuadraticSurd, m: usize, s: u32) -> Result<QuadraticSurd> {
    let p = PeriodicXi::new(xi)?;
    beta_for(&p, m, s)
}

fn beta_for(p: &PeriodicXi, m: usize, s: u32) -> Result<QuadraticSurd> {
    if s < 1 {
        return Err(Error::Domain("exact mode needs an integer exponent s >= 1".into()));
    }
    let n = p.len();
    if m >= n {
        return Err(Error::Domain(format!("residue class {m} out of range 0..{n}")));
    }
    let denom = p.xi.one_like() - p.abs_rho().pow(s);
    let numer = if m + 1 == n {
        p.xi.one_like()
    } else {
        let errs = p.errors(m as i64);
        abs_by_sign_law(&errs[m + 2], m as i64).pow(s)
    };
    numer.try_div(&denom)
}

#[derive(Clone, Debug)]
pub struct WeightedSumReport {
    pub s: u32,
    pub period: Vec<BigInt>,
    pub rho: QuadraticSurd,
    pub betas: Vec<QuadraticSurd>,
    pub f: QuadraticSurd,
}

/// Exact `f(s) = sum_i a_{(i+1) mod N} beta_i(s)` in `Q(sqrt(D))`.
pub fn f_weighted(xi: &QuadraticSurd, s: u32) -> Result<WeightedSumReport> {
    let p = PeriodicXi::new(xi)?;
    f_weighted_for(&p, s)
}

pub fn f_weighted_for(p: &PeriodicXi, s: u32) -> Result<WeightedSumReport> {
    if s < 1 {
        return Err(Error::Domain("exact mode needs an integer exponent s >= 1".into()));
    }
    let n = p.len();
    let errs = p.errors(n as i64 - 2);
    let denom = p.xi.one_like() - p.abs_rho().pow(s);
    let mut betas = Vec::with_capacity(n);
    let mut f = p.xi.zero_like();
    for m in 0..n {
        let numer = if m + 1 == n { p.xi.one_like() } else { abs_by_sign_law(&errs[m + 2], m as i64).pow(s) };
        let beta = numer.try_div(&denom)?;
        f = &f + &(&beta * &p.xi.lift_int(p.digit(m + 1).clone()));
        betas.push(beta);
    }
    Ok(WeightedSumReport { s, period: p.period.clone(), rho: p.rho(), betas, f })
}

/// Numeric `f(s)` for a real exponent `s > 1`, evaluated with enclosures.
#[derive(Clone, Debug)]
pub struct NumericWeightedSum {
    pub s: BigRational,
    pub betas: Vec<HpReal>,
    pub f: HpReal,
    pub rho: QuadraticSurd,
}

pub fn f_weighted_numeric(xi: &QuadraticSurd, s: &BigRational, prec: u32) -> Result<NumericWeightedSum> {
    if s <= &BigRational::one() {
        return Err(Error::Domain(format!("numeric mode needs s > 1, got {s}")));
    }
    let p = PeriodicXi::new(xi)?;
    let n = p.len();
    let w = prec + 32;
    let errs = p.errors(n as i64 - 2);
    let abs_rho = crate::numeric::eval_surd(&p.abs_rho(), w);
    let denom = HpReal::one(w).sub(&abs_rho.pow_rational(s, w)?);
    let mut betas = Vec::with_capacity(n);
    let mut f = HpReal::zero(w);
    for m in 0..n {
        let numer = if m + 1 == n {
            HpReal::one(w)
        } else {
            let e = crate::numeric::eval_surd(&abs_by_sign_law(&errs[m + 2], m as i64), w);
            e.pow_rational(s, w)?
        };
        let beta = numer.div(&denom)?;
        f = f.add(&beta.mul(&HpReal::from_int(p.digit(m + 1), w)));
        betas.push(beta);
    }
    Ok(NumericWeightedSum { s: s.clone(), betas, f, rho: p.rho() })
}

/// `sum_{n=-1}^{n_max} a_{n+1} |eps_n|^s`, exact.
pub fn f_partial(xi: &QuadraticSurd, s: u32, n_max: i64) -> Result<QuadraticSurd> {
    if n_max < -1 {
        return Err(Error::Domain(format!("n_max = {n_max} < -1")));
    }
    let e = cfrac::expand(xi)?;
    let conv = convergents(e.digits(), n_max.max(0))?;
    let mut acc = xi.zero_like();
    for c in conv.iter().skip(1).take((n_max + 2) as usize) {
        let a_next = e.digit((c.index + 1) as usize);
        let term = abs_by_sign_law(&eps(xi, c), c.index).pow(s);
        acc = &acc + &(&term * &xi.lift_int(a_next.clone()));
    }
    Ok(acc)
}

/// `N * max_r(a_{r+1}|eps_r|^s) * |rho|^(s*floor(n_max/N)) / (1 - |rho|^s)`,
/// with `r` over the class representatives `-1, 0, ..., N-2`.
pub fn tail_bound(xi: &QuadraticSurd, s: u32, n_max: i64) -> Result<QuadraticSurd> {
    let p = PeriodicXi::new(xi)?;
    let n = p.len() as i64;
    let errs = p.errors(n - 2);
    let mut best = xi.zero_like();
    for r in -1..n - 1 {
        let term = abs_by_sign_law(&errs[(r + 2) as usize], r).pow(s) * xi.lift_int(p.digit((r + 1) as usize).clone());
        if term.compare(&best)? == Ordering::Greater {
            best = term;
        }
    }
    let q = n_max.max(0).div_euclid(n) as u32;
    let abs_rho_s = p.abs_rho().pow(s);
    let num = best * xi.lift_int(n) * abs_rho_s.pow(q);
    num.try_div(&(xi.one_like() - abs_rho_s))
}

/// Characteristic quadratic `k_{N-1} x^2 - (h_{N-1} - k_{N-2}) x - h_{N-2}`
/// and the converse identity check.
#[derive(Clone, Debug, Serialize)]
pub struct QuadraticCheck {
    /// Coefficients, highest degree first.
    pub coefficients: [String; 3],
    /// The quadratic vanishes at `xi`.
    pub holds: bool,
    /// `(h_{N-1} - X k_{N-1})(k_{N-1} X + k_{N-2}) - (-1)^N` equals
    /// `-k_{N-1}` times the quadratic as polynomials in `X`.
    pub converse_holds: bool,
}

pub fn periodicity_quadratic_check(xi: &QuadraticSurd) -> Result<QuadraticCheck> {
    let p = PeriodicXi::new(xi)?;
    let n = p.len() as i64;
    let c = p.convergents(n - 1);
    let (h1, k1) = (&c[c.len() - 1].h, &c[c.len() - 1].k);
    let (h2, k2) = (&c[c.len() - 2].h, &c[c.len() - 2].k);
    let q2 = k1.clone();
    let q1 = -(h1 - k2);
    let q0 = -h2.clone();
    let value = xi * xi * xi.lift_int(q2.clone()) + xi * &xi.lift_int(q1.clone()) + xi.lift_int(q0.clone());
    // expand (h1 - X k1)(k1 X + k2) - sign
    let e2 = -(k1 * k1);
    let e1 = h1 * k1 - k1 * k2;
    let e0 = h1 * k2 - BigInt::from(p.period_sign());
    let converse_holds = e2 == -(k1 * &q2) && e1 == -(k1 * &q1) && e0 == -(k1 * &q0);
    Ok(QuadraticCheck {
        coefficients: [q2.to_string(), q1.to_string(), q0.to_string()],
        holds: value.is_zero(),
        converse_holds,
    })
}

/// `u * conj(u) = (-1)^N`, exactly.
pub fn unit_norm_identity(p: &PeriodicXi) -> bool {
    let u = p.unit();
    (&u * &u.conjugate()) == u.lift_int(p.period_sign())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, parse_surd};
    use proptest::prelude::*;

    fn s(a: i64, b: i64, c: i64, d: i64) -> QuadraticSurd {
        QuadraticSurd::new(a, b, c, d).unwrap()
    }

    fn word(v: &[i64]) -> QuadraticSurd {
        cfrac::surd_from_word(&v.iter().map(|&x| int(x)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn error_term_examples() {
        let x = s(1, 1, 1, 2);
        assert_eq!(error_term(&x, -1).unwrap().value, x.one_like());
        assert_eq!(error_term(&x, -2).unwrap().value, -&x);
        assert_eq!(error_term(&x, 0).unwrap().value, s(1, -1, 1, 2));
        assert!(error_term(&x, -3).is_err());
        // works for non-purely-periodic input too
        let r2 = QuadraticSurd::sqrt(2).unwrap();
        assert_eq!(error_term(&r2, 0).unwrap().value, s(1, -1, 1, 2));
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(&word(&[1])).unwrap(), s(1, -1, 2, 5));
        assert_eq!(rho(&word(&[2])).unwrap(), s(1, -1, 1, 2));
        assert_eq!(rho(&word(&[1, 2])).unwrap(), s(2, -1, 1, 3));
        assert!(rho(&QuadraticSurd::sqrt(2).unwrap()).is_err());
    }

    #[test]
    fn period_matrix_examples() {
        let m = period_matrix(&word(&[2])).unwrap();
        assert_eq!((m.a.clone(), m.b.clone(), m.c.clone(), m.d.clone()), (int(2), int(1), int(1), int(0)));
        assert_eq!(m.lambda1, s(1, 1, 1, 2));
        let m = period_matrix(&word(&[1, 2])).unwrap();
        assert_eq!((m.a.clone(), m.b.clone(), m.c.clone(), m.d.clone()), (int(3), int(1), int(2), int(1)));
        assert_eq!(m.det(), int(1));
        for w in [&[1][..], &[2, 4], &[1, 1, 1, 4], &[3, 1, 7]] {
            let m = period_matrix(&word(w)).unwrap();
            let sign = if w.len() % 2 == 0 { 1 } else { -1 };
            assert_eq!(&m.lambda1 * &m.lambda2, m.lambda1.lift_int(sign));
            assert_eq!(m.det(), int(sign));
        }
    }

    #[test]
    fn geometric_examples() {
        let r = verify_geometric(&word(&[1]), 12).unwrap();
        assert!(r.passed(), "{r:?}");
        let r = verify_geometric(&word(&[2, 4]), 12).unwrap();
        assert!(r.passed(), "{r:?}");
        let r = verify_geometric(&word(&[2, 4]), 0).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn beta_examples() {
        let phi = word(&[1]);
        assert_eq!(beta_closed(&phi, 0, 2).unwrap(), phi);
        // class N-1 has numerator |eps_{-1}|^s = 1
        let x = word(&[1, 2, 3]);
        let p = PeriodicXi::new(&x).unwrap();
        for s_ in 1..4 {
            let b = beta_closed(&x, 2, s_).unwrap();
            assert_eq!(&b * &(x.one_like() - p.abs_rho().pow(s_)), x.one_like());
        }
        // [2]: |rho| = sqrt(2)-1, beta_0(2) = 1/(1-(3-2sqrt(2)))
        let b = beta_closed(&word(&[2]), 0, 2).unwrap();
        assert_eq!(b, parse_surd("2*sqrt(2)-2").unwrap().recip().unwrap());
        assert!(beta_closed(&phi, 0, 0).is_err());
        assert!(beta_closed(&phi, 1, 2).is_err());
    }

    #[test]
    fn f_weighted_examples() {
        for w in [&[1][..], &[2], &[1, 2], &[2, 4], &[1, 1, 1, 4], &[5, 1, 9, 2, 2]] {
            let x = word(w);
            assert_eq!(f_weighted(&x, 2).unwrap().f, x, "f(2) for {w:?}");
            assert_eq!(f_weighted(&x, 1).unwrap().f, &x + &x.one_like(), "f(1) for {w:?}");
        }
        assert_eq!(f_weighted(&word(&[2]), 3).unwrap().f, s(8, 5, 7, 2));
    }

    #[test]
    fn f_partial_examples() {
        let x = word(&[3, 1, 2]);
        assert_eq!(f_partial(&x, 2, -1).unwrap(), x.lift_int(3));
        let phi = word(&[1]);
        let partial = f_partial(&phi, 2, 50).unwrap();
        let gap = &phi - &partial;
        assert!(gap.is_positive());
        assert!(gap.compare(&phi.lift(&crate::exactnum::rat(1, BigInt::from(10).pow(20)))).unwrap() == Ordering::Less);
        let mut prev = f_partial(&x, 1, -1).unwrap();
        for n in 0..20 {
            let cur = f_partial(&x, 1, n).unwrap();
            assert!(cur > prev);
            prev = cur;
        }
    }

    #[test]
    fn f_numeric_matches_exact_at_integer_s() {
        let x = word(&[2, 4]);
        let num = f_weighted_numeric(&x, &crate::exactnum::rat(3, 1), 128).unwrap();
        let exact = crate::numeric::eval_surd(&f_weighted(&x, 3).unwrap().f, 160);
        assert!(num.f.sub(&exact).abs_upper_f64() < 1e-30);
        assert!(f_weighted_numeric(&x, &crate::exactnum::rat(1, 1), 128).is_err());
        assert!(f_weighted_numeric(&x, &crate::exactnum::rat(1, 2), 128).is_err());
    }

    #[test]
    fn quadratic_check_examples() {
        let q = periodicity_quadratic_check(&word(&[1])).unwrap();
        assert_eq!(q.coefficients, ["1".to_string(), "-1".into(), "-1".into()]);
        assert!(q.holds && q.converse_holds);
        let q = periodicity_quadratic_check(&word(&[2])).unwrap();
        assert_eq!(q.coefficients, ["1".to_string(), "-2".into(), "-1".into()]);
        assert!(q.holds && q.converse_holds);
        let q = periodicity_quadratic_check(&word(&[1, 2])).unwrap();
        assert_eq!(q.coefficients, ["2".to_string(), "-2".into(), "-1".into()]);
        assert!(q.holds && q.converse_holds);
    }

    fn sign_i64(x: &QuadraticSurd) -> i64 {
        match x.signum() {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    fn words() -> impl Strategy<Value = QuadraticSurd> {
        prop::collection::vec(1i64..=10, 1..=8).prop_map(|v| word(&v))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn weighted_sum_identities(x in words()) {
            prop_assert_eq!(f_weighted(&x, 2).unwrap().f, x.clone());
            prop_assert_eq!(f_weighted(&x, 1).unwrap().f, &x + &x.one_like());
        }

        #[test]
        fn rho_is_lambda2(x in words()) {
            let m = period_matrix(&x).unwrap();
            let r = rho(&x).unwrap();
            prop_assert_eq!(&m.lambda2, &r);
            prop_assert!(r.abs() < r.one_like());
            prop_assert!(m.lambda1 > r.one_like());
        }

        #[test]
        fn beta_times_denominator(x in words(), s_ in 1u32..4) {
            let p = PeriodicXi::new(&x).unwrap();
            let n = p.len();
            let errs = p.errors(n as i64 - 2);
            let denom = x.one_like() - p.abs_rho().pow(s_);
            for m in 0..n {
                let lhs = beta_closed(&x, m, s_).unwrap() * &denom;
                let rhs = if m + 1 == n { x.one_like() } else { errs[m + 2].abs().pow(s_) };
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn unit_norm(x in words()) {
            prop_assert!(unit_norm_identity(&PeriodicXi::new(&x).unwrap()));
        }

        #[test]
        fn sign_law(x in words()) {
            let errs = PeriodicXi::new(&x).unwrap().errors(30);
            for n in -1..=30i64 {
                let expect = if (n - 1).rem_euclid(2) == 0 { 1 } else { -1 };
                prop_assert_eq!(sign_i64(&errs[(n + 2) as usize]), expect);
            }
        }
    }
}
