//! Real-number enclosures: surd evaluation, reference constants and digamma.

mod consts;
mod digamma;
mod hpreal;

pub use consts::{const_gamma, const_ln2, const_pi, ln_rational};
pub use digamma::{bernoulli, digamma, digamma_f64, shift_threshold};
pub use hpreal::HpReal;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exactnum::{isqrt, QuadraticSurd};

/// `floor(sqrt(d) * 2^w)` as an enclosure of `sqrt(d)`.
pub fn sqrt_int(d: &BigInt, w: u32) -> HpReal {
    let scaled = d << (2 * w as u64);
    let root = isqrt(&scaled).expect("non-negative radicand");
    let exact = &root * &root == scaled;
    let rad = if exact { 0u32 } else { 1u32 };
    HpReal::from_parts(root, rad.into(), -(w as i64), w)
}

/// Encloses `(a + b sqrt(D))/c` with relative radius at most `2^(2-prec)`.
///
/// When `a` and `b` have opposite signs the value is rewritten as
/// `(a^2 - b^2 D) / (c (a - b sqrt(D)))` so nothing cancels.
pub fn eval_surd(x: &QuadraticSurd, prec: u32) -> HpReal {
    let w = prec + 16;
    let (a, b, c, d) = (x.a(), x.b(), x.c(), x.radicand());
    if b.is_zero() {
        return HpReal::from_rational(&x.rational_part(), prec);
    }
    let cw = HpReal::from_int(c, w);
    let root_bits = w + (b.bits() as u32) + 8;
    let root = sqrt_int(d, root_bits);
    let same_sign = a.is_zero() || a.is_positive() == b.is_positive();
    let v = if same_sign {
        HpReal::from_int(a, w).add(&root.mul_int(b)).div(&cw)
    } else {
        let num = a * a - b * b * d;
        let den = HpReal::from_int(a, w).sub(&root.mul_int(b)).mul(&cw);
        HpReal::from_int(&num, w).div(&den)
    };
    v.expect("non-zero denominator for an irrational surd").with_prec(prec)
}
