use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::render::Report;
use super::{GlobalOpts, Instance};
use crate::cfrac::{self, parse_xi};
use crate::error::{Error, Result};
use crate::errsum::{self, PeriodicXi};
use crate::eulercf::{self, GeneralizedCF, Seq};
use crate::exactnum::QuadraticSurd;
use crate::jpa::{self, JpaExpansion};
use crate::numeric::{eval_surd, HpReal};
use crate::units;

/// Decimal digits backed by `prec` bits.
fn digits_for(prec: u32) -> usize {
    (prec as f64 * std::f64::consts::LOG10_2).floor() as usize
}

fn decimal(x: &QuadraticSurd, g: &GlobalOpts) -> String {
    eval_surd(x, g.prec).to_decimal(digits_for(g.prec))
}

fn real(x: &HpReal, g: &GlobalOpts) -> String {
    x.to_decimal(digits_for(g.prec))
}

fn surd_json(x: &QuadraticSurd, g: &GlobalOpts) -> Value {
    json!({ "exact": x.to_string(), "decimal": decimal(x, g) })
}

fn ints_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|x| json!(x.to_string())).collect())
}

fn join(v: &[BigInt]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

pub fn expand(input: &str, convergents: Option<i64>, g: &GlobalOpts) -> Result<Report> {
    let (x, _) = parse_xi(input)?;
    let e = cfrac::expand(&x)?;
    let mut r = Report::new("expand");
    r.set("input", input);
    r.set("value", surd_json(&x, g));
    r.set("word", e.to_string());
    r.set("preperiod", ints_json(&e.preperiod));
    r.set("period", ints_json(&e.period));
    r.set("period_len", e.period_len());
    r.set("purely_periodic", e.is_purely_periodic());
    r.fields(vec![
        ("value", x.to_string()),
        ("decimal", decimal(&x, g)),
        ("word", e.to_string()),
        ("period_len", e.period_len().to_string()),
        ("purely_periodic", e.is_purely_periodic().to_string()),
    ]);
    if let Some(n) = convergents {
        if n < -2 {
            return Err(Error::Domain(format!("--convergents must be >= -2, got {n}")));
        }
        let conv = cfrac::convergents(e.digits(), n)?;
        r.set(
            "convergents",
            Value::Array(
                conv.iter().map(|c| json!({ "n": c.index, "h": c.h.to_string(), "k": c.k.to_string() })).collect(),
            ),
        );
        r.table(
            "convergents",
            &["n", "h_n", "k_n"],
            conv.iter().map(|c| vec![c.index.to_string(), c.h.to_string(), c.k.to_string()]).collect(),
        );
    }
    Ok(r)
}

/// Integer, `p/q`, or a finite decimal such as `1.5`.
pub fn parse_exponent(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("exponent `{s}` is not an integer, fraction or decimal"));
    if let Some((int_part, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int_part.starts_with('-');
        let whole = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            BigInt::from_str(int_part).map_err(|_| bad())?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let f = BigInt::from_str(frac).map_err(|_| bad())?;
        let num = whole.abs() * &scale + f;
        let q = BigRational::new(num, scale);
        return Ok(if neg { -q } else { q });
    }
    BigRational::from_str(t).map_err(|_| bad())
}

pub fn errorsum(xi: &str, s: &str, g: &GlobalOpts) -> Result<Report> {
    let (x, _) = parse_xi(xi)?;
    let p = PeriodicXi::new(&x)?;
    let s_val = parse_exponent(s)?;
    let mut r = Report::new("errorsum");
    r.set("xi", surd_json(&x, g));
    r.set("period", ints_json(p.period()));
    r.set("period_len", p.len());
    r.set("s", s_val.to_string());
    let rho = p.rho();
    r.set("rho", surd_json(&rho, g));
    let small_int = s_val.is_integer() && s_val.is_positive() && s_val.to_integer().to_u32().is_some();
    if small_int {
        let s_int = s_val.to_integer().to_u32().expect("checked");
        let w = errsum::f_weighted_for(&p, s_int)?;
        r.set("mode", "exact");
        r.set(
            "betas",
            Value::Array(
                w.betas
                    .iter()
                    .enumerate()
                    .map(|(i, b)| json!({ "class": i, "exact": b.to_string(), "decimal": decimal(b, g) }))
                    .collect(),
            ),
        );
        r.set("f", surd_json(&w.f, g));
        r.fields(vec![
            ("xi", x.to_string()),
            ("period", format!("[;{}]", join(p.period()))),
            ("N", p.len().to_string()),
            ("s", s_val.to_string()),
            ("rho", format!("{}  ~ {}", rho, decimal(&rho, g))),
            ("f(s)", w.f.to_string()),
            ("f(s) decimal", decimal(&w.f, g)),
        ]);
        r.table(
            "beta_k(s)",
            &["k", "exact", "decimal"],
            w.betas.iter().enumerate().map(|(i, b)| vec![i.to_string(), b.to_string(), decimal(b, g)]).collect(),
        );
    } else {
        let w = errsum::f_weighted_numeric(&x, &s_val, g.prec)?;
        r.set("mode", "numeric");
        r.set(
            "betas",
            Value::Array(
                w.betas.iter().enumerate().map(|(i, b)| json!({ "class": i, "decimal": real(b, g) })).collect(),
            ),
        );
        r.set("f", json!({ "decimal": real(&w.f, g) }));
        r.fields(vec![
            ("xi", x.to_string()),
            ("period", format!("[;{}]", join(p.period()))),
            ("N", p.len().to_string()),
            ("s", s_val.to_string()),
            ("rho", format!("{}  ~ {}", rho, decimal(&rho, g))),
            ("f(s) decimal", real(&w.f, g)),
        ]);
        r.table(
            "beta_k(s)",
            &["k", "decimal"],
            w.betas.iter().enumerate().map(|(i, b)| vec![i.to_string(), real(b, g)]).collect(),
        );
    }
    Ok(r)
}

pub fn unit(xi: &str, repetition: Option<usize>, g: &GlobalOpts) -> Result<Report> {
    let (x, word) = parse_xi(xi)?;
    let rep = repetition.unwrap_or_else(|| word.as_ref().map_or(1, |w| w.repetitions()));
    let u = units::unit_report(&x, rep)?;
    let claim = match u.claim {
        units::FundamentalClaim::Asserted => "asserted",
        units::FundamentalClaim::NotAsserted => "not_asserted",
    };
    let mut r = Report::new("unit");
    r.set("xi", surd_json(&x, g));
    r.set("u", surd_json(&u.u, g));
    r.set("norm", u.norm);
    r.set("period_len", u.period);
    r.set("repetition", u.repetition);
    r.set("fundamental", claim);
    r.set("maximal_order_exponent", json!(u.maximal_order_exponent));
    r.fields(vec![
        ("xi", x.to_string()),
        ("u", u.u.to_string()),
        ("u decimal", decimal(&u.u, g)),
        ("N(u)", u.norm.to_string()),
        ("period_len", u.period.to_string()),
        ("repetition", u.repetition.to_string()),
        ("fundamental", claim.to_string()),
        ("maximal_order_exponent", u.maximal_order_exponent.map_or("n/a".into(), |e| e.to_string())),
    ]);
    Ok(r)
}

pub fn pell(xi: &str, n: u32, g: &GlobalOpts) -> Result<Report> {
    let (x, _) = parse_xi(xi)?;
    let rep = units::pell_solutions(&x, n)?;
    let u = crate::exactnum::parse_surd(&rep.unit)?;
    let mut r = Report::new("pell");
    r.set("xi", surd_json(&x, g));
    r.set("d", rep.d.clone());
    r.set("unit", surd_json(&u, g));
    r.set("period_len", rep.period);
    r.set("solutions", serde_json::to_value(&rep.solutions).map_err(|e| Error::Internal(e.to_string()))?);
    r.set("non_integral", json!(rep.non_integral));
    r.fields(vec![
        ("xi", x.to_string()),
        ("D", rep.d.clone()),
        ("u", rep.unit.clone()),
        ("period_len", rep.period.to_string()),
    ]);
    r.table(
        "x_n + y_n sqrt(D) = u^n",
        &["n", "x_n", "y_n", "x^2 - D y^2"],
        rep.solutions.iter().map(|s| vec![s.n.to_string(), s.x.clone(), s.y.clone(), s.residual.to_string()]).collect(),
    );
    if !rep.non_integral.is_empty() {
        r.fields(vec![(
            "non-integral powers",
            rep.non_integral.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
        )]);
    }
    Ok(r)
}

pub fn euler(instance: Instance, terms: u64, a: Option<&str>, b: Option<&str>, g: &GlobalOpts) -> Result<Report> {
    let mut r = Report::new("euler");
    match instance {
        Instance::Pi | Instance::Ln2 => {
            if a.is_some() || b.is_some() {
                return Err(Error::Domain("--a/--b apply only to --instance custom".into()));
            }
            let rep = if instance == Instance::Pi {
                eulercf::pi_identity_sum(terms, g.prec)?
            } else {
                eulercf::ln2_identity_sum(terms, g.prec)?
            };
            let (lhs, rhs) = if instance == Instance::Pi {
                ("8 sum_{n=1}^{N} (pi/4 - L_n)^2", "pi - pi^2/4")
            } else {
                ("sum_{n=0}^{N} (S_n - ln 2)^2", "ln 2")
            };
            let scale = if instance == Instance::Pi { 2.0 } else { 4.0 } * terms as f64;
            r.set("instance", rep.instance);
            r.set("terms", rep.terms);
            r.set("prec", rep.prec);
            r.set("lhs", lhs);
            r.set("rhs", rhs);
            r.set("sum", real(&rep.sum, g));
            r.set("reference", real(&rep.reference, g));
            r.set("residual", real(&rep.residual, g));
            r.set("residual_scaled", rep.residual.to_f64() * scale);
            r.set("digamma_checked", rep.digamma_checked);
            r.set("digamma_max_deviation", rep.digamma_max_deviation);
            r.fields(vec![
                ("instance", rep.instance.to_string()),
                ("N", rep.terms.to_string()),
                ("lhs", lhs.to_string()),
                ("rhs", rhs.to_string()),
                ("sum", real(&rep.sum, g)),
                ("reference", real(&rep.reference, g)),
                ("residual", real(&rep.residual, g)),
                (
                    if instance == Instance::Pi { "residual * 2N" } else { "residual * 4N" },
                    format!("{:.9}", rep.residual.to_f64() * scale),
                ),
                ("digamma tails checked", rep.digamma_checked.to_string()),
                ("max digamma deviation", format!("{:.3e}", rep.digamma_max_deviation)),
            ]);
        }
        Instance::Custom => {
            let (a, b) = match (a, b) {
                (Some(a), Some(b)) => (Seq::parse(a)?, Seq::parse(b)?),
                _ => return Err(Error::Domain("--instance custom needs both --a and --b".into())),
            };
            let label = format!("a = {a}, b = {b}");
            let cf = GeneralizedCF::new(a, b, label);
            let n = i64::try_from(terms).map_err(|_| Error::Domain("--terms too large".into()))?;
            let rep = eulercf::custom_check(&cf, n, digits_for(g.prec))?;
            r.set("instance", "custom");
            r.set("report", serde_json::to_value(&rep).map_err(|e| Error::Internal(e.to_string()))?);
            r.fields(vec![
                ("instance", rep.label.clone()),
                ("N", rep.terms.to_string()),
                ("reference", format!("h_{m}/k_{m} = {}", rep.reference, m = rep.reference_index)),
                ("sum a_{n+1} eps_n^2 / B_{n+1}", rep.partial.clone()),
                ("boundary c_{N+1} eps_N eps_{N+1}", rep.boundary.clone()),
                ("identity holds", rep.identity_holds.to_string()),
            ]);
        }
    }
    Ok(r)
}

pub fn parse_poly(text: &str) -> Result<Vec<BigInt>> {
    let t = text.trim().trim_start_matches('(').trim_end_matches(')');
    let coeffs = t
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| BigInt::from_str(s).map_err(|_| Error::Parse(format!("bad coefficient `{s}` in `{text}`"))))
        .collect::<Result<Vec<_>>>()?;
    if coeffs.is_empty() {
        return Err(Error::Parse(format!("no coefficients in `{text}`")));
    }
    Ok(coeffs)
}

/// Expansion with the precision doubled up to three times on exhaustion.
fn expand_with_retry(poly: &[BigInt], root_index: usize, steps: usize, prec: u32) -> Result<JpaExpansion> {
    let mut p = prec;
    let mut last = None;
    for _ in 0..4 {
        match jpa::jpa_expand(poly, root_index, steps, p) {
            Err(Error::PrecisionExhausted(m)) => {
                last = Some(m);
                p = p.saturating_mul(2);
            }
            other => return other,
        }
    }
    Err(Error::PrecisionExhausted(format!("{} (tried up to {} bits)", last.unwrap_or_default(), p / 2)))
}

fn verify_json(rep: &jpa::EigenThetaReport, basis: &str) -> Value {
    json!({
        "basis": basis,
        "mu": rep.mu.to_decimal(30),
        "eigen_residual": rep.eigen_residual,
        "theta_residual": rep.theta_residual,
        "eigen_ok": rep.eigen_ok,
        "theta_ok": rep.theta_ok,
        "tol": rep.tol,
        "m_max": rep.m_max,
    })
}

pub fn jpa(poly: &str, root_index: usize, steps: usize, verify: bool, m_max: u32, g: &GlobalOpts) -> Result<Report> {
    let coeffs = parse_poly(poly)?;
    let e = expand_with_retry(&coeffs, root_index, steps, g.prec)?;
    let mut r = Report::new("jpa");
    r.set("poly", ints_json(&e.poly));
    r.set("dimension", e.dimension);
    r.set("root_index", e.root_index);
    r.set("eta", real(&e.eta, g));
    r.set("prec_used", e.prec);
    r.set("terminated", e.terminated);
    r.set("digits", Value::Array(e.digits.iter().map(|d| ints_json(d)).collect()));
    r.set(
        "matrices",
        Value::Array(
            e.matrices.iter().map(|m| Value::Array(m.rows().iter().map(|row| ints_json(row)).collect())).collect(),
        ),
    );
    r.set(
        "period_candidate",
        match e.period {
            Some(p) => json!({ "start": p.start, "len": p.len, "verified": false }),
            None => Value::Null,
        },
    );
    r.fields(vec![
        ("poly", join(&e.poly)),
        ("d", e.dimension.to_string()),
        ("eta", real(&e.eta, g)),
        ("prec used", e.prec.to_string()),
        ("terminated", e.terminated.to_string()),
        (
            "period candidate",
            e.period.map_or("none".into(), |p| format!("start {}, length {} (heuristic, unverified)", p.start, p.len)),
        ),
    ]);
    r.table(
        "digits",
        &["n", "a_1..a_{d-1}"],
        e.digits.iter().enumerate().map(|(i, d)| vec![i.to_string(), join(d)]).collect(),
    );
    if verify {
        let period = e
            .period_matrices()
            .ok_or_else(|| Error::Domain("--verify needs a detected period; increase --steps".into()))?
            .to_vec();
        let tol = 2f64.powi(-(g.prec.min(1000) as i32) / 2);
        let product = jpa::period_product(&period)?;
        let mut checks = Vec::new();
        let mut rows = Vec::new();
        let power = jpa::verify_eigen_theta(&period, &e.basis, m_max, tol)?;
        checks.push(verify_json(&power, "power"));
        rows.push(("power basis", power));
        let eig_prec = g.prec.max(128);
        let chosen = match jpa::contracting_left_eigenvector(&product, eig_prec)? {
            Some((_, v)) => Some(("contracting left eigenvector", v)),
            // otherwise the real eigenvalue of largest modulus
            None => match jpa::real_eigenvalues(&product, eig_prec)?
                .into_iter()
                .max_by(|x, y| x.abs().mid_rational().cmp(&y.abs().mid_rational()))
            {
                Some(mu) => Some(("expanding left eigenvector", jpa::left_eigenvector(&product, &mu, eig_prec)?)),
                None => None,
            },
        };
        if let Some((name, v)) = chosen {
            let eig = jpa::verify_eigen_theta(&period, &v, m_max, tol)?;
            checks.push(verify_json(&eig, name));
            rows.push((name, eig));
        }
        r.set("verify", Value::Array(checks));
        r.table(
            "eigenvector check on the candidate period",
            &["basis", "mu", "eigen residual", "theta residual", "eigen ok", "theta ok"],
            rows.iter()
                .map(|(name, rep)| {
                    vec![
                        name.to_string(),
                        rep.mu.to_decimal(20),
                        format!("{:.3e}", rep.eigen_residual),
                        format!("{:.3e}", rep.theta_residual),
                        rep.eigen_ok.to_string(),
                        rep.theta_ok.to_string(),
                    ]
                })
                .collect(),
        );
    }
    Ok(r)
}
