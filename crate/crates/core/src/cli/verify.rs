//! Randomized invariant suites behind `cfsum verify`.
//!
//! Every case draws from its own generator seeded by `(seed, suite, case)`,
//! so results do not depend on thread scheduling.

use std::cmp::Ordering;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::render::Report;
use crate::cfrac::{self, surd_from_word};
use crate::error::{Error, Result};
use crate::errsum;
use crate::eulercf::{telescoping_partial, GeneralizedCF, Seq};
use crate::exactnum::QuadraticSurd;
use crate::jpa::{self, StepMatrix};
use crate::numeric::eval_surd;
use crate::units;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseResult {
    Pass,
    Skip,
    Fail(String),
}

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: &'static str,
    pub description: &'static str,
    pub cases: usize,
    pub passed: usize,
    pub skipped: usize,
    pub failures: Vec<(usize, String)>,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub seed: u64,
    pub cases: usize,
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::ok)
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new("verify");
        r.set("seed", self.seed);
        r.set("cases", self.cases);
        r.set("passed", self.passed());
        r.set(
            "suites",
            Value::Array(
                self.suites
                    .iter()
                    .map(|s| {
                        json!({
                            "name": s.name,
                            "description": s.description,
                            "cases": s.cases,
                            "passed": s.passed,
                            "skipped": s.skipped,
                            "failed": s.failures.len(),
                            "failures": s.failures.iter().take(5).map(|(i, m)| json!({ "case": i, "message": m })).collect::<Vec<_>>(),
                        })
                    })
                    .collect(),
            ),
        );
        r.fields(vec![("seed", self.seed.to_string()), ("cases per suite", self.cases.to_string())]);
        r.table(
            "suites",
            &["suite", "cases", "passed", "skipped", "failed", "status"],
            self.suites
                .iter()
                .map(|s| {
                    vec![
                        s.name.to_string(),
                        s.cases.to_string(),
                        s.passed.to_string(),
                        s.skipped.to_string(),
                        s.failures.len().to_string(),
                        if s.ok() { "PASS".into() } else { "FAIL".into() },
                    ]
                })
                .collect(),
        );
        let failures: Vec<Vec<String>> = self
            .suites
            .iter()
            .flat_map(|s| {
                s.failures.iter().take(5).map(move |(i, m)| vec![s.name.to_string(), i.to_string(), m.clone()])
            })
            .collect();
        if !failures.is_empty() {
            r.table("first failures", &["suite", "case", "message"], failures);
        }
        r
    }
}

type CaseFn = fn(&mut ChaCha8Rng) -> Result<CaseResult>;

pub const SUITES: &[(&str, &str, CaseFn)] = &[
    ("weighted-sum", "f(2) = xi and f(1) = xi + 1 exactly", case_weighted_sum),
    ("geometric", "eps_{mN+r} = rho^m eps_r for m <= 12; rho = lambda_2", case_geometric),
    ("tail-bound", "|f_partial - f| within the geometric tail bound", case_tail_bound),
    ("unit-product", "product of complete quotients equals the unit", case_unit_product),
    ("galois-unit", "unit norm +-1 iff purely periodic", case_galois_unit),
    ("pell", "x_n^2 - D y_n^2 = (-1)^{nN}", case_pell),
    ("telescoping", "both sides of the telescoping identity agree exactly", case_telescoping),
    ("jpa-d2", "d = 2 expansion matches the regular continued fraction", case_jpa_d2),
    ("eigen-theta", "eigenvector residual bounds the theta residual", case_eigen_theta),
];

fn case_seed(seed: u64, suite: usize, case: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((suite as u64) << 40) ^ case as u64
}

pub fn run_suites(seed: u64, cases: usize, only: Option<&str>) -> Result<VerifyReport> {
    let selected: Vec<(usize, &(&str, &str, CaseFn))> =
        SUITES.iter().enumerate().filter(|(_, (name, _, _))| only.map_or(true, |o| o == *name)).collect();
    if selected.is_empty() {
        let names: Vec<&str> = SUITES.iter().map(|s| s.0).collect();
        return Err(Error::Domain(format!("unknown suite `{}`; available: {}", only.unwrap_or(""), names.join(", "))));
    }
    let suites = selected
        .into_iter()
        .map(|(si, &(name, description, f))| {
            let results: Vec<CaseResult> = (0..cases)
                .into_par_iter()
                .map(|ci| {
                    let mut rng = ChaCha8Rng::seed_from_u64(case_seed(seed, si, ci));
                    match f(&mut rng) {
                        Ok(r) => r,
                        Err(e) => CaseResult::Fail(e.to_string()),
                    }
                })
                .collect();
            let mut s = SuiteResult { name, description, cases, passed: 0, skipped: 0, failures: Vec::new() };
            for (i, r) in results.into_iter().enumerate() {
                match r {
                    CaseResult::Pass => s.passed += 1,
                    CaseResult::Skip => s.skipped += 1,
                    CaseResult::Fail(m) => s.failures.push((i, m)),
                }
            }
            s
        })
        .collect();
    Ok(VerifyReport { seed, cases, suites })
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> CaseResult {
    if cond {
        CaseResult::Pass
    } else {
        CaseResult::Fail(msg())
    }
}

/// Purely periodic word with digits `1..=10` and period length `1..=8`.
pub fn random_word(rng: &mut impl Rng) -> Vec<BigInt> {
    let n = rng.gen_range(1..=8);
    (0..n).map(|_| BigInt::from(rng.gen_range(1..=10))).collect()
}

pub fn random_periodic(rng: &mut impl Rng) -> Result<QuadraticSurd> {
    surd_from_word(&random_word(rng))
}

/// Irrational surd above 1.
pub fn random_surd_above_one(rng: &mut impl Rng) -> QuadraticSurd {
    loop {
        let (a, b, c, d) =
            (rng.gen_range(-60..60i64), rng.gen_range(1..6i64), rng.gen_range(1..12i64), rng.gen_range(2..80i64));
        let Ok(x) = QuadraticSurd::new(a, b, c, d) else { continue };
        if x.is_rational() {
            continue;
        }
        if x.compare(&x.one_like()) == Ok(Ordering::Greater) {
            return x;
        }
    }
}

fn random_seq(rng: &mut impl Rng) -> Seq {
    if rng.gen_bool(0.5) {
        Seq::Const(BigInt::from(rng.gen_range(1..=10)))
    } else {
        let len = rng.gen_range(1..=3);
        let mut v: Vec<BigInt> = (0..len).map(|_| BigInt::from(rng.gen_range(0..=10))).collect();
        if v[0] == BigInt::from(0) {
            v[0] = BigInt::from(1);
        }
        Seq::Poly(v)
    }
}

fn case_weighted_sum(rng: &mut ChaCha8Rng) -> Result<CaseResult> {
    let x = random_periodic(rng)?;
    let f2 = errsum::f_weighted(&x, 2)?.f;
    let f1 = errsum::f_weighted(&x, 1)?.f;
    Ok(check(f2 == x && f1 == &x + &x.one_like(), || format!("xi = {x}: f(2) = {f2}, f(1) = {f1}")))
}

fn case_geometric(rng: &mut ChaCha8Rng) -> Result<CaseResult> {
    let x = random_periodic(rng)?;
    let g = errsum::verify_geometric(&x, 12)?;
    let m = errsum::period_matrix(&x)?;
    let rho = errsum::rho(&x)?;
    Ok(check(g.passed() && m.lambda2 == rho, || {
        format!("xi = {x}: failures {:?}, lambda2 = {}, rho = {rho}", g.failures, m.lambda2)
    }))
}

fn case_tail_bound(rng: &mut ChaCha8Rng) -> Result<CaseResult> {
    let x = random_periodic(rng)?;
    let s = rng.gen_range(1..=3u32);
    let n_max = [10i64, 30, 60][rng.gen_range(0..3)];
    let f = errsum::f_weighted(&x, s)?.f;
    let partial = errsum::f_partial(&x, s, n_max)?;
    let bound = errsum::tail_bound(&x, s, n_max)?;
    let gap = (&f - &partial).abs();
    Ok(check(gap.compare(&bound)? != Ordering::Greater, || {
        format!("xi = {x}, s = {s}, n = {n_max}: gap {gap} > bound {bound}")
    }))
}

fn case_unit_product(rng: &mut ChaCha8Rng) -> Result<CaseResult> {
    let x = random_periodic(rng)?;
    let p = units::product_complete_quotients(&x, 1)?;
    let u = units::fundamental_unit(&x)?.u;
    Ok(check(p == u, || format!("xi = {x}: product {p} vs unit {u}")))
}

fn case_galois_unit(rng: &mut ChaCha8Rng) -> Result<CaseResult> {
    let x = random_surd_above_one(rng);
    let n = cfrac::expand(&x)?.period_len();
    let r = units::unit_periodicity_equivalence(&x, n)?;
    Ok(check(r.consistent == Some(true), || format!("xi = {x}: {r:?}")))
}

fn case_pell(rng: &mut ChaCha8Rng) -> Result<CaseResult> {
    let x = random_periodic(rng)?;
    // units with denominator 4 have no Pell coordinates
    match units::pell_solutions(&x, 6) {
        Ok(rep) => {
            let bad = rep.solutions.iter().find(|s| {
                let expect = if (s.n as usize * rep.period) % 2 == 0 { 1 } else { -1 };
                s.residual != expect
            });
            Ok(check(bad.is_none(), || format!("xi = {x}: {bad:?}")))
        }
        Err(Error::Domain(_)) => Ok(CaseResult::Skip),
        Err(e) => Err(e),
    }
}

fn case_telescoping(rng: &mut ChaCha8Rng) -> Result<CaseResult> {
    let cf = GeneralizedCF::new(random_seq(rng), random_seq(rng), "random");
    let xi = num_rational::BigRational::new(BigInt::from(rng.gen_range(-50..50)), BigInt::from(rng.gen_range(1..30)));
    let n = rng.gen_range(-1..=30i64);
    let t = telescoping_partial(&cf, &xi, n)?;
    Ok(check(t.holds(), || format!("a = {}, b = {}, xi = {xi}, N = {n}", cf.a, cf.b)))
}

fn case_jpa_d2(rng: &mut ChaCha8Rng) -> Result<CaseResult> {
    let x = random_surd_above_one(rng);
    let cf = cfrac::expand(&x)?;
    let mut state = jpa::JpaState::new(vec![eval_surd(&x, 1024)])?;
    for i in 0..30 {
        match jpa::jpa_step(&state)? {
            jpa::StepOutcome::Step { digits, next, .. } => {
                if digits[0] != *cf.digit(i) {
                    return Ok(CaseResult::Fail(format!("xi = {x}: step {i} gives {} vs {}", digits[0], cf.digit(i))));
                }
                state = next;
            }
            jpa::StepOutcome::Terminated { .. } => return Ok(CaseResult::Fail(format!("xi = {x}: terminated"))),
        }
    }
    Ok(CaseResult::Pass)
}

/// Product of 2 to 5 random three-dimensional step matrices.
pub fn random_step_product(rng: &mut impl Rng) -> StepMatrix {
    let k = rng.gen_range(2..6);
    (0..k).fold(StepMatrix::identity(3), |acc, _| {
        let a1 = rng.gen_range(1..5i64);
        let a2 = rng.gen_range(0..=a1);
        acc.mul(&StepMatrix::for_digits(&[BigInt::from(a1), BigInt::from(a2)]))
    })
}

fn case_eigen_theta(rng: &mut ChaCha8Rng) -> Result<CaseResult> {
    let m = random_step_product(rng);
    let Some((_, v)) = jpa::contracting_left_eigenvector(&m, 160)? else { return Ok(CaseResult::Skip) };
    let r = jpa::verify_eigen_theta(std::slice::from_ref(&m), &v, 10, 1e-30)?;
    let ok = r.eigen_ok && r.theta_ok && r.theta_residual <= 10.0 * r.eigen_residual.max(f64::MIN_POSITIVE);
    Ok(check(ok, || format!("M = {m}: eigen {:e}, theta {:e}", r.eigen_residual, r.theta_residual)))
}
