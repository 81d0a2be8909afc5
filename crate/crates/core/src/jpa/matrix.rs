//! Integer step matrices, left eigenvectors and the eigenvector/ϑ check.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::poly::{char_poly, mat_mul, real_roots, Poly};
use crate::error::{Error, Result};
use crate::numeric::HpReal;

/// Square integer matrix with determinant `±1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepMatrix {
    rows: Vec<Vec<BigInt>>,
}

impl StepMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let d = rows.len();
        if d == 0 || rows.iter().any(|r| r.len() != d) {
            return Err(Error::Domain("step matrix must be square and non-empty".into()));
        }
        let m = StepMatrix { rows };
        let det = m.det();
        if det.abs() != BigInt::one() {
            return Err(Error::Domain(format!("matrix is not unimodular (det = {det})")));
        }
        Ok(m)
    }

    pub fn identity(d: usize) -> Self {
        let rows =
            (0..d).map(|i| (0..d).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
        StepMatrix { rows }
    }

    /// Matrix of one expansion step for digits `(a_1, .., a_{d-1})`, in the
    /// coordinates `(1, y_{d-1}, .., y_1)`.
    pub fn for_digits(digits: &[BigInt]) -> Self {
        let d = digits.len() + 1;
        // layout (y_1, .., y_{d-1}, 1) first, then reverse both axes
        let mut m = vec![vec![BigInt::zero(); d]; d];
        m[0][d - 2] = digits[0].clone();
        m[0][d - 1] = BigInt::one();
        for i in 1..d - 1 {
            m[i][d - 2] = digits[i].clone();
            m[i][i - 1] = BigInt::one();
        }
        m[d - 1][d - 2] = BigInt::one();
        let rows = (0..d).map(|i| (0..d).map(|j| m[d - 1 - i][d - 1 - j].clone()).collect()).collect();
        StepMatrix { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn mul(&self, o: &StepMatrix) -> StepMatrix {
        StepMatrix { rows: mat_mul(&self.rows, &o.rows) }
    }

    pub fn transpose(&self) -> StepMatrix {
        let d = self.dim();
        StepMatrix { rows: (0..d).map(|i| (0..d).map(|j| self.rows[j][i].clone()).collect()).collect() }
    }

    pub fn last_column(&self) -> Vec<BigInt> {
        self.rows.iter().map(|r| r[r.len() - 1].clone()).collect()
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> BigInt {
        let n = self.dim();
        let mut a = self.rows.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn char_poly(&self) -> Vec<BigInt> {
        char_poly(&self.rows)
    }

    /// `M^T v`.
    pub fn transpose_apply(&self, v: &[HpReal]) -> Vec<HpReal> {
        let d = self.dim();
        let p = v[0].prec();
        (0..d)
            .map(|j| {
                (0..d).fold(HpReal::zero(p), |acc, i| {
                    if self.rows[i][j].is_zero() {
                        acc
                    } else {
                        acc.add(&v[i].mul_int(&self.rows[i][j]))
                    }
                })
            })
            .collect()
    }
}

impl fmt::Display for StepMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Product `M_0 M_1 .. M_{N-1}`.
pub fn period_product(period: &[StepMatrix]) -> Result<StepMatrix> {
    let first = period.first().ok_or_else(|| Error::Domain("empty list of period matrices".into()))?;
    let d = first.dim();
    if period.iter().any(|m| m.dim() != d) {
        return Err(Error::Domain("period matrices differ in dimension".into()));
    }
    Ok(period.iter().fold(StepMatrix::identity(d), |acc, m| acc.mul(m)))
}

/// Real eigenvalues, ascending, each enclosed to about `prec` bits.
pub fn real_eigenvalues(m: &StepMatrix, prec: u32) -> Result<Vec<HpReal>> {
    let cp = Poly::from_asc_ints(&m.char_poly());
    let bits = prec + 16 + top_bits(m);
    Ok(real_roots(&cp, bits)?.iter().map(|r| r.to_real(prec)).collect())
}

fn top_bits(m: &StepMatrix) -> u32 {
    m.rows.iter().flatten().map(|x| x.bits() as u32).max().unwrap_or(0)
}

/// Null vector of `M^T - mu I`, computed by full-pivot elimination on the
/// midpoint of `mu`. Returned entries are exact dyadics.
pub fn left_eigenvector(m: &StepMatrix, mu: &HpReal, prec: u32) -> Result<Vec<HpReal>> {
    let d = m.dim();
    let w = prec + 32 + 2 * top_bits(m);
    let mu = HpReal::from_rational(&mu.mid_rational(), w);
    let mut a: Vec<Vec<HpReal>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let v = HpReal::from_int(&m.rows[j][i], w);
                    if i == j {
                        v.sub(&mu)
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    let mut cols: Vec<usize> = (0..d).collect();
    for k in 0..d - 1 {
        let (mut bi, mut bj, mut best) = (k, k, -1.0f64);
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, &c) in cols.iter().enumerate().skip(k) {
                let v = row[c].abs_upper_f64();
                if v > best {
                    (bi, bj, best) = (i, j, v);
                }
            }
        }
        a.swap(k, bi);
        cols.swap(k, bj);
        let pc = cols[k];
        for i in k + 1..d {
            let f = a[i][pc].div(&a[k][pc])?;
            for &c in &cols[k..] {
                let t = a[k][c].mul(&f);
                a[i][c] = a[i][c].sub(&t);
            }
        }
    }
    let mut v = vec![HpReal::zero(w); d];
    v[cols[d - 1]] = HpReal::one(w);
    for k in (0..d - 1).rev() {
        let pc = cols[k];
        let mut acc = HpReal::zero(w);
        for &c in &cols[k + 1..] {
            acc = acc.add(&a[k][c].mul(&v[c]));
        }
        v[pc] = acc.neg().div(&a[k][pc])?;
    }
    Ok(v.iter().map(|x| HpReal::from_rational(&x.mid_rational(), prec).with_prec(prec)).collect())
}

/// Real eigenvalue of smallest modulus below 1 and its left eigenvector.
pub fn contracting_left_eigenvector(m: &StepMatrix, prec: u32) -> Result<Option<(HpReal, Vec<HpReal>)>> {
    let eig = real_eigenvalues(m, prec)?;
    let one = HpReal::one(prec);
    let best = eig
        .into_iter()
        .filter(|e| e.abs().upper() < one.lower())
        .min_by(|x, y| x.abs().mid_rational().cmp(&y.abs().mid_rational()));
    match best {
        Some(mu) => {
            let v = left_eigenvector(m, &mu, prec)?;
            Ok(Some((mu, v)))
        }
        None => Ok(None),
    }
}

/// Outcome of checking `M_N^T B = mu B` and `ϑ_{mN+r} = mu^m ϑ_r`.
#[derive(Clone, Debug)]
pub struct EigenThetaReport {
    pub dimension: usize,
    pub period_len: usize,
    pub m_max: u32,
    pub tol: f64,
    /// Rayleigh estimate `<B, M^T B> / <B, B>`.
    pub mu: HpReal,
    /// `|M^T B - mu B|_inf / |B|_inf`.
    pub eigen_residual: f64,
    /// Largest `|ϑ_{mN+r} - mu^m ϑ_r| / scale` over all checked pairs.
    pub theta_residual: f64,
    pub eigen_ok: bool,
    /// Only meaningful when `eigen_ok`.
    pub theta_ok: bool,
    pub thetas: Vec<HpReal>,
}

impl EigenThetaReport {
    pub fn passed(&self) -> bool {
        self.eigen_ok && self.theta_ok
    }
}

fn dot(c: &[BigInt], b: &[HpReal]) -> HpReal {
    let p = b[0].prec();
    c.iter().zip(b).fold(HpReal::zero(p), |acc, (ci, bi)| if ci.is_zero() { acc } else { acc.add(&bi.mul_int(ci)) })
}

fn inf_norm(v: &[HpReal]) -> HpReal {
    let p = v[0].prec();
    v.iter().fold(HpReal::zero(p), |acc, x| {
        let a = x.abs();
        if a.upper() > acc.upper() {
            a
        } else {
            acc
        }
    })
}

/// Checks the eigenvector hypothesis for the product of `period` and the
/// geometric law of `ϑ_n = <C_n, B>` for `m = 1..=m_max` and every residue `r`.
///
/// `B` is taken at its midpoint, as an exact vector. With `R = M^T B - mu B`,
/// `ϑ_{mN+r} - mu^m ϑ_r = sum_{j<m} mu^j <C_{(m-1-j)N+r}, R>`, so the ϑ
/// residual is measured against `scale = |B|_inf sum_{j<m} |mu|^j |C_{(m-1-j)N+r}|_1`
/// and can never exceed the eigenvector residual.
pub fn verify_eigen_theta(period: &[StepMatrix], b: &[HpReal], m_max: u32, tol: f64) -> Result<EigenThetaReport> {
    let mn = period_product(period)?;
    let d = mn.dim();
    if b.len() != d {
        return Err(Error::Domain(format!("basis has {} entries, matrices are {d}x{d}", b.len())));
    }
    let n = period.len();
    let total = (m_max as usize + 1) * n;
    let mut cs = Vec::with_capacity(total);
    let mut prod = StepMatrix::identity(d);
    for i in 0..total {
        prod = prod.mul(&period[i % n]);
        cs.push(prod.last_column());
    }
    let c_bits = cs.iter().flatten().map(|x| x.bits() as u32).max().unwrap_or(0);
    let b_prec = b.iter().map(|x| x.prec()).max().unwrap_or(64);
    let w = b_prec + 2 * c_bits + 128;
    let b: Vec<HpReal> = b.iter().map(|x| HpReal::from_rational(&x.mid_rational(), w)).collect();
    let b_norm = inf_norm(&b);
    if b_norm.upper().is_zero() {
        return Err(Error::Domain("basis vector is zero".into()));
    }
    let mtb = mn.transpose_apply(&b);
    let bb = b.iter().fold(HpReal::zero(w), |acc, x| acc.add(&x.sqr()));
    let bmb = b.iter().zip(&mtb).fold(HpReal::zero(w), |acc, (x, y)| acc.add(&x.mul(y)));
    let mu = bmb.div(&bb)?;
    let resid: Vec<HpReal> = mtb.iter().zip(&b).map(|(y, x)| y.sub(&x.mul(&mu))).collect();
    let eigen_residual = inf_norm(&resid).div(&b_norm)?.abs_upper_f64();
    let thetas: Vec<HpReal> = cs.iter().map(|c| dot(c, &b)).collect();
    let abs_mu = mu.abs();
    let l1: Vec<HpReal> = cs.iter().map(|c| HpReal::from_int(&c.iter().map(|x| x.abs()).sum::<BigInt>(), w)).collect();
    let pairs: Vec<(usize, usize)> = (1..=m_max as usize).flat_map(|m| (0..n).map(move |r| (m, r))).collect();
    let ratios: Vec<f64> = pairs
        .par_iter()
        .map(|&(m, r)| {
            let diff = thetas[m * n + r].sub(&mu.pow_u32(m as u32).mul(&thetas[r])).abs();
            let scale =
                (0..m).fold(HpReal::zero(w), |acc, j| acc.add(&abs_mu.pow_u32(j as u32).mul(&l1[(m - 1 - j) * n + r])));
            let scale = scale.mul(&b_norm);
            match HpReal::from_rational(&diff.upper(), w).div(&scale) {
                Ok(q) => q.abs_upper_f64(),
                Err(_) => f64::INFINITY,
            }
        })
        .collect();
    let theta_residual = ratios.into_iter().fold(0.0, f64::max);
    let eigen_ok = eigen_residual <= tol;
    Ok(EigenThetaReport {
        dimension: d,
        period_len: n,
        m_max,
        tol,
        mu,
        eigen_residual,
        theta_residual,
        eigen_ok,
        theta_ok: theta_residual <= tol,
        thetas,
    })
}

/// `(x, y)` as an exact rational vector, for building bases by hand.
pub fn rational_basis(entries: &[BigRational], prec: u32) -> Vec<HpReal> {
    entries.iter().map(|q| HpReal::from_rational(q, prec)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    fn m(rows: &[&[i64]]) -> StepMatrix {
        StepMatrix::new(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn step_matrix_layout() {
        assert_eq!(StepMatrix::for_digits(&[int(2)]), m(&[&[0, 1], &[1, 2]]));
        assert_eq!(StepMatrix::for_digits(&[int(4), int(16)]), m(&[&[0, 1, 0], &[0, 16, 1], &[1, 4, 0]]));
        for digits in [vec![int(3)], vec![int(1), int(0)], vec![int(5), int(2), int(7)]] {
            assert_eq!(StepMatrix::for_digits(&digits).det().abs(), int(1));
        }
    }

    #[test]
    fn rejects_non_unimodular() {
        assert!(StepMatrix::new(vec![vec![int(2), int(0)], vec![int(0), int(1)]]).is_err());
        assert!(StepMatrix::new(vec![vec![int(1)], vec![int(0)]]).is_err());
    }

    #[test]
    fn determinant_with_pivoting() {
        let a = m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        assert_eq!(a.det(), int(-1));
        assert_eq!(a.mul(&a), StepMatrix::identity(3));
    }

    #[test]
    fn identity_period_gives_unit_mu() {
        let b =
            rational_basis(&[crate::exactnum::rat(3, 7), crate::exactnum::rat(-2, 1), crate::exactnum::rat(5, 3)], 128);
        let r = verify_eigen_theta(&[StepMatrix::identity(3)], &b, 5, 1e-30).unwrap();
        assert!((r.mu.to_f64() - 1.0).abs() < 1e-30);
        assert!(r.eigen_residual < 1e-60);
        assert!(r.theta_residual < 1e-30);
        assert!(r.passed());
        for t in &r.thetas {
            assert!(t.sub(&r.thetas[0]).abs_upper_f64() < 1e-30);
        }
    }

    #[test]
    fn left_eigenvector_of_golden_matrix() {
        let a = m(&[&[1, 1], &[1, 0]]);
        let (mu, v) = contracting_left_eigenvector(&a, 200).unwrap().unwrap();
        assert!((mu.to_f64() + 0.6180339887498949).abs() < 1e-15);
        let r = verify_eigen_theta(&[a], &v, 10, 1e-50).unwrap();
        assert!(r.eigen_residual < 1e-55, "{}", r.eigen_residual);
        assert!(r.passed());
    }

    #[test]
    fn non_eigenvector_is_reported() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let b = rational_basis(&[crate::exactnum::rat(1, 1), crate::exactnum::rat(0, 1)], 64);
        let r = verify_eigen_theta(&[a], &b, 4, 1e-20).unwrap();
        assert!(!r.eigen_ok);
        assert!(r.eigen_residual > 0.1);
    }
}
