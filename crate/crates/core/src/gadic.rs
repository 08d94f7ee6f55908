//! G-adic sequences and numerals.
//!
//! A G-adic sequence is fixed by its quotients `d_i = g_{i+1} / g_i >= 2`,
//! with `g_0 = 1`. Every positive integer then has a unique expansion
//! `n = sum c_i g_i` with `0 <= c_i < d_i` and a nonzero leading digit.
//! Quotients come from closed-form rules rather than stored lists so that
//! questions about the whole infinite sequence stay decidable.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exec::Exec;

/// How an explicit quotient list continues past its last entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Extension {
    RepeatLast,
    Cycle,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QuotientRule {
    /// `d_i = d`.
    Constant(u64),
    /// Listed quotients, extended by `extension`.
    Explicit {
        values: Vec<u64>,
        extension: Extension,
    },
    /// `d_i = base^(i+1)`, so `g_k = base^(k(k+1)/2)`.
    Power { base: u64 },
    /// `d_i = i + 2`, so `g_k = (k+1)!`.
    Factorial,
}

impl fmt::Display for QuotientRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientRule::Constant(d) => write!(f, "constant({d})"),
            QuotientRule::Explicit { values, extension } => {
                let ext = match extension {
                    Extension::RepeatLast => "repeat-last",
                    Extension::Cycle => "cycle",
                };
                let list: Vec<String> = values.iter().map(u64::to_string).collect();
                write!(f, "explicit([{}], {ext})", list.join(","))
            }
            QuotientRule::Power { base } => write!(f, "power({base})"),
            QuotientRule::Factorial => write!(f, "factorial"),
        }
    }
}

/// The quotient values that recur infinitely often, as far as the rule
/// algebra can tell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum RecurringQuotients {
    /// Every listed value occurs at infinitely many positions and no other
    /// value does.
    Values(Vec<u64>),
    /// `d_i -> infinity`.
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuotientSequence {
    rule: QuotientRule,
    bound_hint: Option<u64>,
}

impl QuotientSequence {
    /// Validates `rule` and the optional declared bound.
    ///
    /// The declared bound is metadata supplied by the caller and is never
    /// inferred, but since every rule is closed-form it can be checked
    /// against all indices at once.
    pub fn new(rule: QuotientRule, bound_hint: Option<u64>) -> Result<Self> {
        match &rule {
            QuotientRule::Constant(d) => {
                if *d < 2 {
                    return Err(Error::QuotientTooSmall { index: 0, value: *d });
                }
            }
            QuotientRule::Explicit { values, .. } => {
                if values.is_empty() {
                    return Err(Error::EmptyExplicitList);
                }
                if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| **v < 2) {
                    return Err(Error::QuotientTooSmall { index, value });
                }
            }
            QuotientRule::Power { base } => {
                if *base < 2 {
                    return Err(Error::QuotientTooSmall { index: 0, value: *base });
                }
            }
            QuotientRule::Factorial => {}
        }
        if let Some(bound) = bound_hint {
            let max = match &rule {
                QuotientRule::Constant(d) => Some(*d),
                QuotientRule::Explicit { values, .. } => values.iter().copied().max(),
                QuotientRule::Power { .. } | QuotientRule::Factorial => None,
            };
            match max {
                Some(m) if m <= bound => {}
                Some(m) => {
                    return Err(Error::BoundHintViolated {
                        bound,
                        detail: format!("quotient {m} exceeds it"),
                    })
                }
                None => {
                    return Err(Error::BoundHintViolated {
                        bound,
                        detail: format!("{rule} has unbounded quotients"),
                    })
                }
            }
        }
        Ok(QuotientSequence { rule, bound_hint })
    }

    pub fn constant(d: u64) -> Result<Self> {
        Self::new(QuotientRule::Constant(d), None)
    }

    pub fn power(base: u64) -> Result<Self> {
        Self::new(QuotientRule::Power { base }, None)
    }

    pub fn factorial() -> Self {
        QuotientSequence {
            rule: QuotientRule::Factorial,
            bound_hint: None,
        }
    }

    pub fn explicit(values: Vec<u64>, extension: Extension) -> Result<Self> {
        Self::new(QuotientRule::Explicit { values, extension }, None)
    }

    pub fn with_bound_hint(self, bound: u64) -> Result<Self> {
        Self::new(self.rule, Some(bound))
    }

    pub fn rule(&self) -> &QuotientRule {
        &self.rule
    }

    pub fn bound_hint(&self) -> Option<u64> {
        self.bound_hint
    }

    /// `d_i` when it fits in a `u64`.
    pub fn quotient_u64(&self, i: usize) -> Option<u64> {
        match &self.rule {
            QuotientRule::Constant(d) => Some(*d),
            QuotientRule::Explicit { values, extension } => Some(explicit_at(values, *extension, i)),
            QuotientRule::Power { base } => {
                let exp = u32::try_from(i + 1).ok()?;
                base.checked_pow(exp)
            }
            QuotientRule::Factorial => (i as u64).checked_add(2),
        }
    }

    /// `d_i = g_{i+1} / g_i`.
    pub fn quotient(&self, i: usize) -> BigUint {
        if let Some(d) = self.quotient_u64(i) {
            return BigUint::from(d);
        }
        match &self.rule {
            QuotientRule::Power { base } => {
                let exp = u32::try_from(i + 1).expect("quotient index exceeds u32 range");
                BigUint::from(*base).pow(exp)
            }
            QuotientRule::Factorial => BigUint::from(i) + 2u32,
            _ => unreachable!("constant and explicit quotients always fit in u64"),
        }
    }

    /// `g_k = d_0 d_1 ... d_{k-1}`, with `g_0 = 1`.
    pub fn base_value(&self, k: usize) -> BigUint {
        match &self.rule {
            QuotientRule::Constant(d) => pow_big(*d, k),
            QuotientRule::Power { base } => pow_big(*base, k * (k + 1) / 2),
            _ => (0..k).fold(BigUint::one(), |acc, i| acc * self.quotient(i)),
        }
    }

    /// `[g_0, g_1, ..., g_k]`.
    pub fn base_values(&self, k: usize) -> Vec<BigUint> {
        let mut out = Vec::with_capacity(k + 1);
        let mut g = BigUint::one();
        for i in 0..=k {
            if i > 0 {
                g *= self.quotient(i - 1);
            }
            out.push(g.clone());
        }
        out
    }

    /// Index `k` of the block `[g_k, g_{k+1} - 1]` containing `n >= 1`.
    pub fn block_of(&self, n: &BigUint) -> Result<usize> {
        if n.is_zero() {
            return Err(Error::NonPositiveInput);
        }
        let mut k = 0;
        let mut next = self.quotient(0);
        while &next <= n {
            k += 1;
            next *= self.quotient(k);
        }
        Ok(k)
    }

    pub(crate) fn recurring_quotients(&self) -> RecurringQuotients {
        match &self.rule {
            QuotientRule::Constant(d) => RecurringQuotients::Values(vec![*d]),
            QuotientRule::Explicit { values, extension } => match extension {
                Extension::RepeatLast => RecurringQuotients::Values(vec![*values.last().unwrap()]),
                Extension::Cycle => {
                    let mut v = values.clone();
                    v.sort_unstable();
                    v.dedup();
                    RecurringQuotients::Values(v)
                }
            },
            QuotientRule::Power { .. } | QuotientRule::Factorial => RecurringQuotients::Unbounded,
        }
    }

    /// Digits of `n` in this system, least significant first.
    pub fn to_digits(&self, n: &BigUint) -> Result<Numeral<'_>> {
        if n.is_zero() {
            return Err(Error::NonPositiveInput);
        }
        let mut digits = Vec::new();
        let mut rest = n.clone();
        let mut i = 0;
        while !rest.is_zero() {
            let (q, r) = rest.div_rem(&self.quotient(i));
            digits.push(r);
            rest = q;
            i += 1;
        }
        Ok(Numeral { seq: self, digits })
    }

    pub fn from_digits(&self, digits: Vec<BigUint>) -> Result<BigUint> {
        Numeral::new(self, digits).value()
    }

    /// First `n` in `[lo, hi]` for which decoding does not invert encoding,
    /// or `None` when the round trip holds throughout.
    pub fn round_trip_failure(&self, lo: u64, hi: u64, exec: Exec) -> Option<u64> {
        let lo = lo.max(1);
        exec.map_chunks(lo, hi, 1 << 14, |a, b| {
            (a..=b).find(|&n| {
                let n_big = BigUint::from(n);
                match self.to_digits(&n_big).and_then(|num| num.value()) {
                    Ok(v) => v != n_big,
                    Err(_) => true,
                }
            })
        })
        .into_iter()
        .flatten()
        .next()
    }
}

fn explicit_at(values: &[u64], extension: Extension, i: usize) -> u64 {
    match extension {
        Extension::RepeatLast => values[i.min(values.len() - 1)],
        Extension::Cycle => values[i % values.len()],
    }
}

fn pow_big(base: u64, exp: usize) -> BigUint {
    let exp = u32::try_from(exp).expect("exponent exceeds u32 range");
    BigUint::from(base).pow(exp)
}

/// A digit vector `(c_0, ..., c_k)` over a quotient sequence.
///
/// Construction does not validate; [`Numeral::value`] does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Numeral<'a> {
    seq: &'a QuotientSequence,
    digits: Vec<BigUint>,
}

impl<'a> Numeral<'a> {
    pub fn new(seq: &'a QuotientSequence, digits: Vec<BigUint>) -> Self {
        Numeral { seq, digits }
    }

    pub fn sequence(&self) -> &'a QuotientSequence {
        self.seq
    }

    pub fn digits(&self) -> &[BigUint] {
        &self.digits
    }

    pub fn into_digits(self) -> Vec<BigUint> {
        self.digits
    }

    /// `k`, the position of the leading digit.
    pub fn top_index(&self) -> usize {
        self.digits.len().saturating_sub(1)
    }

    pub fn validate(&self) -> Result<()> {
        let leading = self.digits.last().ok_or(Error::ZeroLeadingDigit)?;
        if leading.is_zero() {
            return Err(Error::ZeroLeadingDigit);
        }
        for (index, c) in self.digits.iter().enumerate() {
            let limit = self.seq.quotient(index);
            if c >= &limit {
                return Err(Error::DigitOutOfRange {
                    index,
                    digit: c.to_string(),
                    limit: limit.to_string(),
                });
            }
        }
        Ok(())
    }

    /// `sum c_i g_i`.
    pub fn value(&self) -> Result<BigUint> {
        self.validate()?;
        let mut total = BigUint::zero();
        let mut g = BigUint::one();
        for (i, c) in self.digits.iter().enumerate() {
            if i > 0 {
                g *= self.seq.quotient(i - 1);
            }
            total += c * &g;
        }
        Ok(total)
    }

    pub fn digits_u64(&self) -> Option<Vec<u64>> {
        self.digits.iter().map(|c| c.to_u64()).collect()
    }
}

impl fmt::Display for Numeral<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.digits.iter().map(BigUint::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn digits(seq: &QuotientSequence, n: u64) -> Vec<u64> {
        seq.to_digits(&big(n)).unwrap().digits_u64().unwrap()
    }

    #[test]
    fn constructors_reject_small_quotients() {
        assert_eq!(
            QuotientSequence::constant(1),
            Err(Error::QuotientTooSmall { index: 0, value: 1 })
        );
        assert_eq!(
            QuotientSequence::explicit(vec![3, 1, 4], Extension::Cycle),
            Err(Error::QuotientTooSmall { index: 1, value: 1 })
        );
        assert_eq!(
            QuotientSequence::explicit(vec![], Extension::RepeatLast),
            Err(Error::EmptyExplicitList)
        );
        assert!(QuotientSequence::power(1).is_err());
    }

    #[test]
    fn bound_hint_is_checked_against_the_rule() {
        assert!(QuotientSequence::constant(10).unwrap().with_bound_hint(10).is_ok());
        assert!(QuotientSequence::constant(10).unwrap().with_bound_hint(9).is_err());
        assert!(QuotientSequence::explicit(vec![2, 7, 3], Extension::Cycle)
            .unwrap()
            .with_bound_hint(7)
            .is_ok());
        assert!(QuotientSequence::power(2).unwrap().with_bound_hint(1000).is_err());
        assert!(QuotientSequence::factorial().with_bound_hint(1000).is_err());
    }

    #[test]
    fn quotients_per_rule() {
        let c = QuotientSequence::constant(10).unwrap();
        assert!((0..50).all(|i| c.quotient(i) == big(10)));
        let p = QuotientSequence::power(2).unwrap();
        assert_eq!((0..4).map(|i| p.quotient(i)).collect::<Vec<_>>(), vec![big(2), big(4), big(8), big(16)]);
        assert_eq!(p.quotient(70), BigUint::one() << 71);
        assert_eq!(p.quotient_u64(70), None);
        let e = QuotientSequence::explicit(vec![3, 5], Extension::RepeatLast).unwrap();
        assert_eq!((0..4).map(|i| e.quotient_u64(i).unwrap()).collect::<Vec<_>>(), vec![3, 5, 5, 5]);
        let e = QuotientSequence::explicit(vec![3, 5], Extension::Cycle).unwrap();
        assert_eq!((0..4).map(|i| e.quotient_u64(i).unwrap()).collect::<Vec<_>>(), vec![3, 5, 3, 5]);
    }

    #[test]
    fn base_values() {
        let c = QuotientSequence::constant(10).unwrap();
        assert_eq!(c.base_value(0), big(1));
        assert_eq!(c.base_value(3), big(1000));
        let p = QuotientSequence::power(2).unwrap();
        assert_eq!(p.base_value(3), big(64));
        for i in 0..12 {
            assert_eq!(p.base_value(i), BigUint::one() << (i * (i + 1) / 2));
        }
        assert_eq!(QuotientSequence::factorial().base_value(3), big(2 * 3 * 4));
        // Power(2) leaves 64-bit range at k = 11.
        assert!(p.base_value(10).to_u64().is_some());
        assert!(p.base_value(11).to_u64().is_none());
    }

    #[test]
    fn encode_examples() {
        assert_eq!(digits(&QuotientSequence::constant(10).unwrap(), 409), vec![9, 0, 4]);
        assert_eq!(digits(&QuotientSequence::factorial(), 10), vec![0, 2, 1]);
        assert_eq!(digits(&QuotientSequence::power(2).unwrap(), 7), vec![1, 3]);
        assert_eq!(
            QuotientSequence::constant(10).unwrap().to_digits(&BigUint::zero()).unwrap_err(),
            Error::NonPositiveInput
        );
    }

    #[test]
    fn decode_examples_and_errors() {
        let dec = QuotientSequence::constant(10).unwrap();
        assert_eq!(dec.from_digits(vec![big(9), big(0), big(4)]).unwrap(), big(409));
        for seq in [dec.clone(), QuotientSequence::factorial(), QuotientSequence::power(3).unwrap()] {
            assert_eq!(seq.from_digits(vec![big(1)]).unwrap(), big(1));
        }
        assert_eq!(
            QuotientSequence::factorial().from_digits(vec![big(0), big(2), big(1)]).unwrap(),
            big(10)
        );
        assert!(matches!(
            dec.from_digits(vec![big(10), big(1)]),
            Err(Error::DigitOutOfRange { index: 0, .. })
        ));
        assert_eq!(dec.from_digits(vec![big(3), big(0)]), Err(Error::ZeroLeadingDigit));
        assert_eq!(dec.from_digits(vec![]), Err(Error::ZeroLeadingDigit));
        // Factorial position 1 allows digits 0..=2 only.
        assert!(QuotientSequence::factorial().from_digits(vec![big(0), big(3)]).is_err());
    }

    #[test]
    fn block_of_matches_digit_count() {
        let p = QuotientSequence::power(2).unwrap();
        for n in 1..5000u64 {
            let k = p.block_of(&big(n)).unwrap();
            assert_eq!(p.to_digits(&big(n)).unwrap().top_index(), k);
        }
        assert_eq!(p.block_of(&BigUint::zero()), Err(Error::NonPositiveInput));
    }

    #[test]
    fn round_trip_small_sweep() {
        for seq in [
            QuotientSequence::constant(7).unwrap(),
            QuotientSequence::explicit(vec![2, 3, 5], Extension::Cycle).unwrap(),
            QuotientSequence::factorial(),
        ] {
            assert_eq!(seq.round_trip_failure(1, 20_000, Exec::default()), None);
        }
    }
}
