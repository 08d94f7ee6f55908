use num_bigint::BigUint;
use num_traits::Zero;

use crate::exec::Exec;
use crate::missing_digits::DigitConstraint;
use crate::{ratio, Rational};

/// Per-block bracket: `count / g_{k+1} <= sum_{a ∈ A_k} 1/a <= count / g_k`,
/// together with the running brackets of `sum_{j <= k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockReport {
    pub k: usize,
    pub g_k: BigUint,
    pub g_k1: BigUint,
    pub count: BigUint,
    pub bracket_lo: Rational,
    pub bracket_hi: Rational,
    pub cumulative_lo: Rational,
    pub cumulative_hi: Rational,
}

/// The bracket of one block, with cumulative fields covering that block only.
pub fn block_bracket(c: &DigitConstraint, k: usize) -> BlockReport {
    let seq = c.sequence();
    let g_k = seq.base_value(k);
    let g_k1 = seq.base_value(k + 1);
    let count = c.block_count_exact(k).exact;
    let bracket_lo = ratio(count.clone(), g_k1.clone());
    let bracket_hi = ratio(count.clone(), g_k.clone());
    BlockReport {
        k,
        g_k,
        g_k1,
        count,
        cumulative_lo: bracket_lo.clone(),
        cumulative_hi: bracket_hi.clone(),
        bracket_lo,
        bracket_hi,
    }
}

/// Reports for blocks `0..=max_k`. Blocks are bracketed independently,
/// then the running sums are taken in order.
pub fn block_reports(c: &DigitConstraint, max_k: usize, exec: Exec) -> Vec<BlockReport> {
    let mut reports = exec.map((0..=max_k).collect(), |k| block_bracket(c, k));
    let mut lo = Rational::zero();
    let mut hi = Rational::zero();
    for r in &mut reports {
        lo += &r.bracket_lo;
        hi += &r.bracket_hi;
        r.cumulative_lo = lo.clone();
        r.cumulative_hi = hi.clone();
    }
    reports
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadic::QuotientSequence;
    use crate::index_set::IndexSet;
    use crate::missing_digits::DigitSet;

    #[test]
    fn kempner_brackets() {
        let c = DigitConstraint::uniform(QuotientSequence::constant(10).unwrap(), IndexSet::All, DigitSet::listed([9]))
            .unwrap();
        let r = block_reports(&c, 2, Exec::default());
        assert_eq!(r[0].bracket_lo, ratio(8u32.into(), 10u32.into()));
        assert_eq!(r[0].bracket_hi, ratio(8u32.into(), 1u32.into()));
        assert_eq!(r[1].count, BigUint::from(72u32));
        assert_eq!(r[1].bracket_hi, ratio(72u32.into(), 10u32.into()));
        assert_eq!(r[2].cumulative_lo, ratio(8u32.into(), 10u32.into()) + ratio(72u32.into(), 100u32.into()) + ratio(648u32.into(), 1000u32.into()));
        for x in &r {
            assert_eq!(&x.bracket_hi / &x.bracket_lo, ratio(10u32.into(), 1u32.into()));
        }
    }

    #[test]
    fn empty_block_brackets_are_zero() {
        let c = DigitConstraint::uniform(QuotientSequence::constant(3).unwrap(), IndexSet::explicit([1]), DigitSet::NonZero)
            .unwrap();
        let r = block_reports(&c, 2, Exec::Sequential);
        assert!(r[1].count.is_zero() && r[1].bracket_hi.is_zero());
        assert_eq!(r[2].cumulative_lo, r[0].bracket_lo.clone() + &r[2].bracket_lo);
    }
}
