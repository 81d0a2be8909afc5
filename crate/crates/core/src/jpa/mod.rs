//! Jacobi-Perron expansions in dimension `d` and the eigenvector check for
//! the scalar products `ϑ_n = <C_n, B>`.
//!
//! One step maps `(y_1, .., y_{d-1})` with `a_i = floor(y_i)` and
//! `t = y_1 - a_1` to `((y_2 - a_2)/t, .., (y_{d-1} - a_{d-1})/t, 1/t)`.
//! In `d = 2` this is the regular continued fraction step.

mod matrix;
mod poly;

use num_bigint::BigInt;
use std::cmp::Ordering;

pub use matrix::{
    contracting_left_eigenvector, left_eigenvector, period_product, rational_basis, real_eigenvalues,
    verify_eigen_theta, EigenThetaReport, StepMatrix,
};
pub use poly::{char_poly, real_roots, Poly, RootInterval};

use crate::error::{Error, Result};
use crate::numeric::HpReal;

/// Current point `(y_1, .., y_{d-1})` of an expansion.
#[derive(Clone, Debug)]
pub struct JpaState {
    y: Vec<HpReal>,
    step: usize,
}

impl JpaState {
    pub fn new(y: Vec<HpReal>) -> Result<Self> {
        if y.is_empty() {
            return Err(Error::Domain("state needs at least one component (d >= 2)".into()));
        }
        Ok(JpaState { y, step: 0 })
    }

    pub fn dimension(&self) -> usize {
        self.y.len() + 1
    }

    pub fn components(&self) -> &[HpReal] {
        &self.y
    }

    pub fn step_index(&self) -> usize {
        self.step
    }
}

#[derive(Clone, Debug)]
pub enum StepOutcome {
    Step {
        digits: Vec<BigInt>,
        next: JpaState,
        matrix: StepMatrix,
    },
    /// `y_1` is an integer: the expansion stops.
    Terminated {
        digits: Vec<BigInt>,
    },
}

/// One expansion step. A floor that is not constant on the enclosure is a
/// precision error, never a guess.
pub fn jpa_step(state: &JpaState) -> Result<StepOutcome> {
    let digits: Vec<BigInt> = state
        .y
        .iter()
        .enumerate()
        .map(|(i, y)| {
            y.floor().ok_or_else(|| {
                Error::PrecisionExhausted(format!("floor of component {} undetermined at step {}", i + 1, state.step))
            })
        })
        .collect::<Result<_>>()?;
    let p = state.y[0].prec();
    let t = state.y[0].sub(&HpReal::from_int(&digits[0], p));
    match t.sign() {
        Some(Ordering::Equal) => return Ok(StepOutcome::Terminated { digits }),
        Some(_) => {}
        None => {
            return Err(Error::PrecisionExhausted(format!("pivot enclosure contains zero at step {}", state.step)));
        }
    }
    let mut next = Vec::with_capacity(state.y.len());
    for (y, a) in state.y.iter().zip(&digits).skip(1) {
        next.push(y.sub(&HpReal::from_int(a, p)).div(&t)?);
    }
    next.push(t.recip()?);
    let matrix = StepMatrix::for_digits(&digits);
    Ok(StepOutcome::Step { digits, next: JpaState { y: next, step: state.step + 1 }, matrix })
}

/// Candidate period `(start, len)` found by the window heuristic. Not a proof.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeriodCandidate {
    pub start: usize,
    pub len: usize,
}

/// Smallest `len`, then smallest `start`, such that two consecutive windows
/// of length `len` at `start` agree and every later digit repeats with that
/// period.
pub fn detect_period(digits: &[Vec<BigInt>]) -> Option<PeriodCandidate> {
    let n = digits.len();
    for len in 1..=n / 2 {
        for start in 0..=n - 2 * len {
            if (start + len..n).all(|j| digits[j] == digits[j - len]) {
                return Some(PeriodCandidate { start, len });
            }
        }
    }
    None
}

#[derive(Clone, Debug)]
pub struct JpaExpansion {
    pub dimension: usize,
    pub poly: Vec<BigInt>,
    pub root_index: usize,
    pub eta: HpReal,
    /// `(1, eta, .., eta^{d-1})`.
    pub basis: Vec<HpReal>,
    pub digits: Vec<Vec<BigInt>>,
    pub matrices: Vec<StepMatrix>,
    pub terminated: bool,
    /// Heuristic only.
    pub period: Option<PeriodCandidate>,
    pub prec: u32,
}

impl JpaExpansion {
    pub fn period_matrices(&self) -> Option<&[StepMatrix]> {
        let p = self.period?;
        self.matrices.get(p.start..p.start + p.len)
    }
}

/// Expands the `root_index`-th real root (ascending) of the integer
/// polynomial `poly` (highest degree first), starting from `y_i = eta^i`.
pub fn jpa_expand(poly: &[BigInt], root_index: usize, n_max: usize, prec: u32) -> Result<JpaExpansion> {
    let p = Poly::from_desc(poly);
    let d = p.degree().unwrap_or(0);
    if d < 2 {
        return Err(Error::Domain("polynomial must have degree >= 2".into()));
    }
    let roots = real_roots(&p, prec + 32)?;
    let root = roots.get(root_index).ok_or_else(|| {
        Error::Domain(format!("root index {root_index} out of range: polynomial has {} real roots", roots.len()))
    })?;
    let eta = root.to_real(prec);
    let basis: Vec<HpReal> = (0..d as u32).map(|i| eta.pow_u32(i)).collect();
    let mut state = JpaState::new(basis[1..].to_vec())?;
    let mut digits = Vec::new();
    let mut matrices = Vec::new();
    let mut terminated = false;
    while digits.len() < n_max {
        match jpa_step(&state)? {
            StepOutcome::Step { digits: a, next, matrix } => {
                digits.push(a);
                matrices.push(matrix);
                state = next;
            }
            StepOutcome::Terminated { digits: a } => {
                digits.push(a);
                terminated = true;
                break;
            }
        }
    }
    let period = if terminated { None } else { detect_period(&digits) };
    Ok(JpaExpansion {
        dimension: d,
        poly: poly.to_vec(),
        root_index,
        eta,
        basis,
        digits,
        matrices,
        terminated,
        period,
        prec,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfrac::expand;
    use crate::errsum::PeriodicXi;
    use crate::exactnum::{int, QuadraticSurd};
    use crate::numeric::eval_surd;
    use num_traits::Signed;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn golden_ratio_digits_all_one() {
        let e = jpa_expand(&ints(&[1, -1, -1]), 1, 30, 256).unwrap();
        assert_eq!(e.dimension, 2);
        assert!(e.digits.iter().all(|a| a == &ints(&[1])));
        assert_eq!(e.period, Some(PeriodCandidate { start: 0, len: 1 }));
    }

    #[test]
    fn cubic_with_period() {
        let e = jpa_expand(&ints(&[1, -4, 0, -1]), 0, 12, 512).unwrap();
        assert_eq!(e.digits[0], ints(&[4, 16]));
        assert!(e.digits[1..].iter().all(|a| a == &ints(&[8, 16])), "{:?}", e.digits);
        assert_eq!(e.period, Some(PeriodCandidate { start: 1, len: 1 }));
        for m in &e.matrices {
            assert_eq!(m.det().abs(), int(1));
        }
    }

    #[test]
    fn zero_steps_is_empty() {
        let e = jpa_expand(&ints(&[1, 0, -2]), 1, 0, 128).unwrap();
        assert!(e.digits.is_empty() && e.matrices.is_empty());
        assert!(e.period.is_none());
    }

    #[test]
    fn bad_inputs() {
        assert!(jpa_expand(&ints(&[1, 0, 1]), 0, 5, 128).is_err());
        assert!(jpa_expand(&ints(&[1, 0, -2]), 2, 5, 128).is_err());
        assert!(jpa_expand(&ints(&[1, -3]), 0, 5, 128).is_err());
    }

    #[test]
    fn integer_state_terminates() {
        let s = JpaState::new(vec![HpReal::from_i64(3, 64), HpReal::from_i64(5, 64)]).unwrap();
        match jpa_step(&s).unwrap() {
            StepOutcome::Terminated { digits } => assert_eq!(digits, ints(&[3, 5])),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn straddling_enclosure_is_an_error() {
        let y = HpReal::from_i64(2, 64).widen_rational(&crate::exactnum::rat(1, 1000));
        let s = JpaState::new(vec![y]).unwrap();
        assert!(matches!(jpa_step(&s), Err(Error::PrecisionExhausted(_))));
    }

    fn random_surd(rng: &mut ChaCha8Rng) -> QuadraticSurd {
        loop {
            let d = rng.gen_range(2..200i64);
            let r = (d as f64).sqrt() as i64;
            if r * r == d {
                continue;
            }
            let c = rng.gen_range(1..40i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
            return QuadraticSurd::new(int(rng.gen_range(-50..50)), int(rng.gen_range(1..20)), int(c), int(d)).unwrap();
        }
    }

    #[test]
    fn dimension_two_matches_regular_cf() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let x = random_surd(&mut rng);
            let cf = expand(&x).unwrap();
            let mut state = JpaState::new(vec![eval_surd(&x, 2048)]).unwrap();
            for i in 0..50 {
                match jpa_step(&state).unwrap() {
                    StepOutcome::Step { digits, next, .. } => {
                        assert_eq!(digits, vec![cf.digit(i).clone()], "{x} step {i}");
                        state = next;
                    }
                    StepOutcome::Terminated { .. } => panic!("irrational value terminated"),
                }
            }
        }
    }

    #[test]
    fn dimension_two_reproduces_error_terms() {
        // [2̄]: B = (-xi, 1) makes ϑ_n the error term h_n - xi k_n, mu = rho
        let xi = PeriodicXi::from_word(&ints(&[2])).unwrap();
        let xv = eval_surd(xi.xi(), 1024);
        let b = vec![xv.neg(), HpReal::one(1024)];
        let period = vec![StepMatrix::for_digits(&ints(&[2]))];
        let r = verify_eigen_theta(&period, &b, 30, 1e-250).unwrap();
        assert!(r.passed(), "{} {}", r.eigen_residual, r.theta_residual);
        assert!(r.mu.sub(&eval_surd(&xi.rho(), 1024)).abs_upper_f64() < 1e-20);
        let errors = xi.errors(30);
        for (n, t) in r.thetas.iter().enumerate() {
            let eps = eval_surd(&errors[n + 2], 1024);
            assert!(t.sub(&eps).abs_upper_f64() < 1e-20, "n = {n}");
        }
        // the power basis (1, xi) is the expanding eigenvector
        let r = verify_eigen_theta(&period, &[HpReal::one(1024), xv.clone()], 8, 1e-250).unwrap();
        assert!(r.eigen_ok);
        assert!(r.mu.sub(&xv).abs_upper_f64() < 1e-20);
    }

    fn random_unimodular(rng: &mut ChaCha8Rng) -> StepMatrix {
        let k = rng.gen_range(2..6);
        (0..k).fold(StepMatrix::identity(3), |acc, _| {
            let a1 = rng.gen_range(1..5i64);
            let a2 = rng.gen_range(0..=a1);
            acc.mul(&StepMatrix::for_digits(&ints(&[a1, a2])))
        })
    }

    #[test]
    fn eigen_residual_implies_theta_relation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 10 {
            let m = random_unimodular(&mut rng);
            let Some((_, v)) = contracting_left_eigenvector(&m, 160).unwrap() else { continue };
            let r = verify_eigen_theta(std::slice::from_ref(&m), &v, 10, 1e-30).unwrap();
            assert!(r.eigen_ok, "{}", r.eigen_residual);
            assert!(r.theta_ok);
            assert!(r.theta_residual <= 10.0 * r.eigen_residual.max(1e-200));
            checked += 1;
        }
    }
}
