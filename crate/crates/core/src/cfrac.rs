//! Regular continued fractions of quadratic irrationals.
//!
//! Expansion runs on complete quotients in the standard form
//! `(P + sqrt(D)) / Q` with `Q | D - P^2`, which keeps every step in integer
//! arithmetic. The period is found by the first repeated `(P, Q)` pair.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{isqrt, split_square, QuadraticSurd};

/// A complete quotient `(p + scale*sqrt(base)) / q`, where `scale^2 * base`
/// is the standard-form radicand `D` and `q | D - p^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompleteQuotient {
    p: BigInt,
    q: BigInt,
    scale: BigInt,
    base: BigInt,
}

impl CompleteQuotient {
    pub fn from_surd(x: &QuadraticSurd) -> Result<Self> {
        if x.is_rational() {
            return Err(Error::Domain(format!("{x} is rational; no periodic expansion")));
        }
        // (a + b√d)/c = (a·sgn b + √(b²d)) / (c·sgn b)
        let sgn = if x.b().is_negative() { -BigInt::one() } else { BigInt::one() };
        let mut p = x.a() * &sgn;
        let mut q = x.c() * &sgn;
        let mut scale = x.b().abs();
        let d = &scale * &scale * x.radicand();
        if !((&d - &p * &p) % &q).is_zero() {
            let qa = q.abs();
            p *= &qa;
            q *= &qa;
            scale *= &qa;
        }
        Ok(CompleteQuotient { p, q, scale, base: x.radicand().clone() })
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// The standard-form radicand `D`.
    pub fn radicand(&self) -> BigInt {
        &self.scale * &self.scale * &self.base
    }

    pub fn to_surd(&self) -> QuadraticSurd {
        QuadraticSurd::canonical(self.p.clone(), self.scale.clone(), self.q.clone(), self.base.clone())
    }

    /// One step `x -> 1/(x - floor(x))`; returns the digit and the next quotient.
    pub fn step(&self) -> (BigInt, CompleteQuotient) {
        let d = self.radicand();
        let s = isqrt(&d).expect("positive radicand");
        // √D ∈ (s, s+1), so floor((P+√D)/Q) only depends on P + s.
        let digit = if self.q.is_positive() {
            (&self.p + &s).div_floor(&self.q)
        } else {
            -((&self.p + &s).div_floor(&-&self.q)) - 1
        };
        let p1 = &digit * &self.q - &self.p;
        let q1 = (&d - &p1 * &p1) / &self.q;
        let next = CompleteQuotient { p: p1, q: q1, scale: self.scale.clone(), base: self.base.clone() };
        (digit, next)
    }
}

/// `cq_step`: floor digit and next complete quotient of `x`.
pub fn cq_step(x: &CompleteQuotient) -> (BigInt, CompleteQuotient) {
    x.step()
}

/// Preperiod and primitive period of an eventually periodic expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFExpansion {
    pub preperiod: Vec<BigInt>,
    pub period: Vec<BigInt>,
    /// Radicand of the expanded surd.
    pub radicand: BigInt,
}

impl CFExpansion {
    pub fn is_purely_periodic(&self) -> bool {
        self.preperiod.is_empty()
    }

    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// Digit `a_i` for any `i >= 0`.
    pub fn digit(&self, i: usize) -> &BigInt {
        if i < self.preperiod.len() {
            &self.preperiod[i]
        } else {
            &self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn digits(&self) -> impl Iterator<Item = &BigInt> + '_ {
        self.preperiod.iter().chain(self.period.iter().cycle())
    }

    pub fn word(&self) -> DigitWord {
        DigitWord { preperiod: self.preperiod.clone(), period: self.period.clone() }
    }
}

impl fmt::Display for CFExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word().fmt(f)
    }
}

/// Iterates complete quotients until a `(P, Q)` state repeats.
pub fn expand(x: &QuadraticSurd) -> Result<CFExpansion> {
    let mut cq = CompleteQuotient::from_surd(x)?;
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut digits = Vec::new();
    loop {
        let key = (cq.p.clone(), cq.q.clone());
        if let Some(&start) = seen.get(&key) {
            let period = digits.split_off(start);
            return Ok(CFExpansion { preperiod: digits, period, radicand: x.radicand().clone() });
        }
        seen.insert(key, digits.len());
        let (a, next) = cq.step();
        digits.push(a);
        cq = next;
    }
}

/// Galois' criterion `x > 1` and `-1 < conj(x) < 0`, decided exactly.
pub fn is_purely_periodic(x: &QuadraticSurd) -> Result<bool> {
    if x.is_rational() {
        return Err(Error::Domain(format!("{x} is rational")));
    }
    let one = x.one_like();
    let xc = x.conjugate();
    Ok(x > &one && xc < x.zero_like() && xc > -&one)
}

/// A convergent `h_n / k_n` with its index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentPair {
    pub index: i64,
    pub h: BigInt,
    pub k: BigInt,
}

/// Convergents `h_n/k_n` for `n = -2 ..= n`, seeds included.
pub fn convergents<'a, I>(digits: I, n: i64) -> Result<Vec<ConvergentPair>>
where
    I: IntoIterator<Item = &'a BigInt>,
{
    if n < -2 {
        return Err(Error::Domain(format!("convergent index {n} < -2")));
    }
    let mut out = vec![
        ConvergentPair { index: -2, h: BigInt::zero(), k: BigInt::one() },
        ConvergentPair { index: -1, h: BigInt::one(), k: BigInt::zero() },
    ];
    let mut it = digits.into_iter();
    for i in 0..=n {
        let a = it.next().ok_or(Error::Length { needed: i, available: i as usize })?;
        let (p1, p2) = (&out[out.len() - 1], &out[out.len() - 2]);
        let h = a * &p1.h + &p2.h;
        let k = a * &p1.k + &p2.k;
        out.push(ConvergentPair { index: i, h, k });
    }
    out.truncate((n + 3) as usize);
    Ok(out)
}

/// Last two convergent pairs `(h_{N-1}, k_{N-1})`, `(h_{N-2}, k_{N-2})` of a word.
pub(crate) fn word_convergents(word: &[BigInt]) -> ((BigInt, BigInt), (BigInt, BigInt)) {
    let (mut h1, mut k1) = (BigInt::one(), BigInt::zero());
    let (mut h2, mut k2) = (BigInt::zero(), BigInt::one());
    for a in word {
        let h = a * &h1 + &h2;
        let k = a * &k1 + &k2;
        h2 = std::mem::replace(&mut h1, h);
        k2 = std::mem::replace(&mut k1, k);
    }
    ((h1, k1), (h2, k2))
}

/// The root `> 1` of `k_{N-1} x^2 + (k_{N-2} - h_{N-1}) x - h_{N-2} = 0`,
/// i.e. the purely periodic number `[; word]`.
pub fn surd_from_word(word: &[BigInt]) -> Result<QuadraticSurd> {
    if word.is_empty() {
        return Err(Error::Domain("empty period word".into()));
    }
    if let Some(a) = word.iter().find(|a| !a.is_positive()) {
        return Err(Error::Domain(format!("period digit {a} < 1")));
    }
    let ((h1, k1), (h2, k2)) = word_convergents(word);
    let qa = k1;
    let qb = &k2 - &h1;
    let qc = -h2;
    let disc = &qb * &qb - BigInt::from(4) * &qa * &qc;
    let (s, core) = split_square(&disc);
    if core.is_one() || core.is_zero() {
        return Err(Error::Degenerate(format!("word {word:?} gives a square discriminant")));
    }
    Ok(QuadraticSurd::canonical(-qb, s, BigInt::from(2) * qa, core))
}

/// Value of an eventually periodic expansion `[pre; period]`.
pub fn surd_from_expansion(word: &DigitWord) -> Result<QuadraticSurd> {
    let tail = surd_from_word(&word.period)?;
    // x = (h y + h') / (k y + k') with the preperiod convergents
    let ((h1, k1), (h2, k2)) = word_convergents(&word.preperiod);
    let num = &tail * &tail.lift_int(h1) + tail.lift_int(h2);
    let den = &tail * &tail.lift_int(k1) + tail.lift_int(k2);
    num.try_div(&den)
}

/// Text form `[a0,a1;p0,p1,...]`; purely periodic words print as `[;p0,...]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitWord {
    pub preperiod: Vec<BigInt>,
    pub period: Vec<BigInt>,
}

impl DigitWord {
    pub fn parse(text: &str) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("digit word must look like `[a0;p0,p1]`: `{text}`")))?;
        let (pre, per) =
            inner.split_once(';').ok_or_else(|| Error::Parse(format!("missing `;` before the period in `{text}`")))?;
        let list = |s: &str| -> Result<Vec<BigInt>> {
            if s.is_empty() {
                return Ok(Vec::new());
            }
            s.split(',')
                .map(|tok| tok.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad digit `{tok}` in `{text}`"))))
                .collect()
        };
        let preperiod = list(pre)?;
        let period = list(per)?;
        if period.is_empty() {
            return Err(Error::Parse(format!("empty period in `{text}`")));
        }
        if preperiod.iter().skip(1).chain(period.iter()).any(|a| !a.is_positive()) {
            return Err(Error::Domain(format!("digits after a0 must be >= 1 in `{text}`")));
        }
        Ok(DigitWord { preperiod, period })
    }

    /// Length of the shortest word whose repetition gives `period`.
    pub fn primitive_len(&self) -> usize {
        primitive_root_len(&self.period)
    }

    /// How many times the primitive period repeats in `period`.
    pub fn repetitions(&self) -> usize {
        self.period.len() / self.primitive_len()
    }
}

pub(crate) fn primitive_root_len<T: PartialEq>(w: &[T]) -> usize {
    (1..=w.len()).find(|&p| w.len() % p == 0 && (p..w.len()).all(|i| w[i] == w[i - p])).unwrap_or(w.len())
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        write!(f, "[{};{}]", join(&self.preperiod), join(&self.period))
    }
}

/// Parses either a digit word or a surd expression.
pub fn parse_xi(text: &str) -> Result<(QuadraticSurd, Option<DigitWord>)> {
    if text.trim_start().starts_with('[') {
        let w = DigitWord::parse(text)?;
        Ok((surd_from_expansion(&w)?, Some(w)))
    } else {
        Ok((crate::exactnum::parse_surd(text)?, None))
    }
}

/// Small digits as `i64`, for reports.
pub fn digits_i64(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(ToPrimitive::to_i64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, parse_surd};
    use proptest::prelude::*;

    fn s(a: i64, b: i64, c: i64, d: i64) -> QuadraticSurd {
        QuadraticSurd::new(a, b, c, d).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn cq_step_examples() {
        let x = CompleteQuotient::from_surd(&s(1, 1, 1, 2)).unwrap();
        let (a, n) = cq_step(&x);
        assert_eq!(a, int(2));
        assert_eq!(n.to_surd(), s(1, 1, 1, 2));

        let (a, n) = cq_step(&CompleteQuotient::from_surd(&s(0, 1, 1, 2)).unwrap());
        assert_eq!(a, int(1));
        assert_eq!(n.to_surd(), s(1, 1, 1, 2));

        let phi = s(1, 1, 2, 5);
        let (a, n) = cq_step(&CompleteQuotient::from_surd(&phi).unwrap());
        assert_eq!(a, int(1));
        assert_eq!(n.to_surd(), phi);

        assert!(CompleteQuotient::from_surd(&phi.lift_int(3)).is_err());
    }

    #[test]
    fn standard_form_invariant_holds_along_orbit() {
        for x in [s(3, -7, 5, 11), s(-2, 3, 7, 13), s(1, 1, 2, 5), s(7, 2, 3, 2)] {
            let mut cq = CompleteQuotient::from_surd(&x).unwrap();
            for _ in 0..40 {
                let d = cq.radicand();
                assert!(!cq.q().is_zero());
                assert!(((&d - cq.p() * cq.p()) % cq.q()).is_zero());
                cq = cq.step().1;
            }
        }
    }

    #[test]
    fn expand_examples() {
        let e = expand(&s(1, 1, 1, 2)).unwrap();
        assert!(e.preperiod.is_empty());
        assert_eq!(e.period, ints(&[2]));

        let e = expand(&s(1, 1, 2, 3)).unwrap();
        assert!(e.preperiod.is_empty());
        assert_eq!(e.period, ints(&[1, 2]));

        let e = expand(&QuadraticSurd::sqrt(2).unwrap()).unwrap();
        assert_eq!(e.preperiod, ints(&[1]));
        assert_eq!(e.period, ints(&[2]));
        assert_eq!(e.to_string(), "[1;2]");

        let e = expand(&QuadraticSurd::sqrt(7).unwrap()).unwrap();
        assert_eq!(e.to_string(), "[2;1,1,1,4]");

        // negative values: a0 < 0
        let e = expand(&s(1, -1, 2, 5)).unwrap();
        assert_eq!(e.preperiod[0], int(-1));

        assert!(expand(&s(3, 0, 2, 5)).is_err());
    }

    #[test]
    fn convergent_examples() {
        let seeds = convergents(std::iter::empty(), -1).unwrap();
        assert_eq!((seeds[0].h.clone(), seeds[0].k.clone()), (int(0), int(1)));
        assert_eq!((seeds[1].h.clone(), seeds[1].k.clone()), (int(1), int(0)));

        let ones = ints(&[1]);
        let c = convergents(ones.iter().cycle(), 4).unwrap();
        let last = c.last().unwrap();
        assert_eq!((last.index, last.h.clone(), last.k.clone()), (4, int(8), int(5)));

        let twos = ints(&[2]);
        let c = convergents(twos.iter().cycle(), 1).unwrap();
        assert_eq!((c[3].h.clone(), c[3].k.clone()), (int(5), int(2)));

        let short = ints(&[1, 2]);
        assert!(matches!(convergents(short.iter(), 5), Err(Error::Length { .. })));
    }

    #[test]
    fn purely_periodic_examples() {
        assert!(is_purely_periodic(&s(1, 1, 1, 2)).unwrap());
        assert!(!is_purely_periodic(&QuadraticSurd::sqrt(2).unwrap()).unwrap());
        assert!(is_purely_periodic(&s(1, 1, 2, 5)).unwrap());
        assert!(is_purely_periodic(&s(1, 0, 2, 5)).is_err());
    }

    #[test]
    fn surd_from_word_examples() {
        assert_eq!(surd_from_word(&ints(&[1])).unwrap(), s(1, 1, 2, 5));
        assert_eq!(surd_from_word(&ints(&[2])).unwrap(), s(1, 1, 1, 2));
        assert_eq!(surd_from_word(&ints(&[1, 2])).unwrap(), s(1, 1, 2, 3));
        assert_eq!(surd_from_word(&ints(&[2, 4])).unwrap(), s(2, 1, 2, 6));
        assert!(surd_from_word(&[]).is_err());
        assert!(surd_from_word(&ints(&[1, 0])).is_err());
    }

    #[test]
    fn word_text_format() {
        let w = DigitWord::parse("[;2]").unwrap();
        assert!(w.preperiod.is_empty());
        assert_eq!(w.period, ints(&[2]));
        let w = DigitWord::parse("[ 1 ; 2 ]").unwrap();
        assert_eq!(surd_from_expansion(&w).unwrap(), QuadraticSurd::sqrt(2).unwrap());
        let w = DigitWord::parse("[2;1,1,1,4]").unwrap();
        assert_eq!(surd_from_expansion(&w).unwrap(), QuadraticSurd::sqrt(7).unwrap());
        assert_eq!(w.to_string(), "[2;1,1,1,4]");
        assert_eq!(DigitWord::parse("[;2,2]").unwrap().repetitions(), 2);
        for bad in ["[2]", "[;]", "1;2", "[;0]", "[;a]"] {
            assert!(DigitWord::parse(bad).is_err(), "{bad}");
        }
        let (x, _) = parse_xi("[-1;1,2]").unwrap();
        assert_eq!(expand(&x).unwrap().to_string(), "[-1;1,2]");
        assert_eq!(parse_xi("sqrt(3)").unwrap().0, parse_surd("sqrt(3)").unwrap());
    }

    fn word() -> impl Strategy<Value = Vec<BigInt>> {
        prop::collection::vec(1i64..=10, 1..=8).prop_map(|v| ints(&v))
    }

    fn surd() -> impl Strategy<Value = QuadraticSurd> {
        (
            -40i64..40,
            prop_oneof![-9i64..=-1, 1i64..=9],
            1i64..20,
            prop::sample::select(vec![2i64, 3, 5, 6, 7, 10, 11, 13, 17, 19]),
        )
            .prop_map(|(a, b, c, d)| s(a, b, c, d))
    }

    proptest! {
        #[test]
        fn word_round_trip(w in word()) {
            let x = surd_from_word(&w).unwrap();
            let e = expand(&x).unwrap();
            prop_assert!(e.preperiod.is_empty());
            prop_assert_eq!(e.period.clone(), w[..primitive_root_len(&w)].to_vec());
        }

        #[test]
        fn galois_consistency(x in surd()) {
            prop_assert_eq!(is_purely_periodic(&x).unwrap(), expand(&x).unwrap().is_purely_periodic());
        }

        #[test]
        fn determinant_identity(w in word(), extra in 0usize..20) {
            let n = (w.len() + extra) as i64;
            let c = convergents(w.iter().cycle(), n).unwrap();
            for pair in c.windows(2).skip(1) {
                let (prev, cur) = (&pair[0], &pair[1]);
                let det = &cur.h * &prev.k - &prev.h * &cur.k;
                let expect = if (cur.index - 1).rem_euclid(2) == 0 { 1 } else { -1 };
                prop_assert_eq!(det, int(expect));
            }
        }

        #[test]
        fn complete_quotients_periodic(w in word()) {
            let x = surd_from_word(&w).unwrap();
            let n = primitive_root_len(&w);
            let mut cq = CompleteQuotient::from_surd(&x).unwrap();
            let mut orbit = vec![cq.to_surd()];
            for _ in 0..2 * n {
                cq = cq.step().1;
                orbit.push(cq.to_surd());
            }
            for i in 0..n {
                prop_assert_eq!(&orbit[i], &orbit[i + n]);
            }
            prop_assert_eq!(&orbit[0], &x);
        }
    }
}
