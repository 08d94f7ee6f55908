//! Missing-digit sets: positive integers whose G-adic digit `c_i` avoids a
//! forbidden set `U_i` at every constrained position `i ∈ I`.

mod enumerate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gadic::{QuotientRule, QuotientSequence, RecurringQuotients};
use crate::index_set::IndexSet;

pub use enumerate::BlockMembers;
pub(crate) use enumerate::{walk_big, walk_u64, BlockLayout, WalkOutcome};

/// A forbidden digit set `U_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DigitSet {
    Listed(BTreeSet<u64>),
    /// Every nonzero digit, `[1, d_i - 1]`, whatever `d_i` is.
    NonZero,
}

impl DigitSet {
    pub fn listed<I: IntoIterator<Item = u64>>(digits: I) -> Self {
        DigitSet::Listed(digits.into_iter().collect())
    }

    pub fn contains(&self, c: &BigUint) -> bool {
        match self {
            DigitSet::Listed(s) => c.to_u64().is_some_and(|x| s.contains(&x)),
            DigitSet::NonZero => !c.is_zero(),
        }
    }

    pub(crate) fn contains_u64(&self, c: u64) -> bool {
        match self {
            DigitSet::Listed(s) => s.contains(&c),
            DigitSet::NonZero => c != 0,
        }
    }

    /// `|U|` at a position with quotient `d`.
    pub fn size(&self, d: &BigUint) -> BigUint {
        match self {
            DigitSet::Listed(s) => BigUint::from(s.len()),
            DigitSet::NonZero => d - 1u32,
        }
    }

    /// `|U \ {0}|`.
    pub fn nonzero_size(&self, d: &BigUint) -> BigUint {
        match self {
            DigitSet::Listed(s) => BigUint::from(s.range(1..).count()),
            DigitSet::NonZero => d - 1u32,
        }
    }

    /// `|{u ∈ U : lo <= u < c}|` for `lo ∈ {0, 1}`.
    fn count_below(&self, lo: u64, c: &BigUint) -> BigUint {
        match self {
            DigitSet::Listed(s) => {
                let n = match c.to_u64() {
                    Some(c) if c <= lo => 0,
                    Some(c) => s.range(lo..c).count(),
                    None => s.range(lo..).count(),
                };
                BigUint::from(n)
            }
            DigitSet::NonZero => {
                if c.is_zero() {
                    BigUint::zero()
                } else {
                    c - 1u32
                }
            }
        }
    }

    /// `U = [1, d - 1]`.
    pub fn is_all_nonzero(&self, d: &BigUint) -> bool {
        match self {
            DigitSet::NonZero => true,
            DigitSet::Listed(s) => {
                !s.contains(&0)
                    && BigUint::from(s.len()) + 1u32 == *d
                    && s.iter().next_back().is_some_and(|m| BigUint::from(*m) + 1u32 == *d)
            }
        }
    }

    fn validate_at(&self, index: usize, d: &BigUint) -> Result<()> {
        let DigitSet::Listed(s) = self else {
            return Ok(());
        };
        if s.is_empty() {
            return Err(Error::EmptyForbiddenSet { index });
        }
        if let Some(&max) = s.iter().next_back() {
            if BigUint::from(max) >= *d {
                return Err(Error::DigitOutOfRange {
                    index,
                    digit: max.to_string(),
                    limit: d.to_string(),
                });
            }
        }
        if BigUint::from(s.len()) >= *d {
            return Err(Error::ForbiddenSetNotProper {
                index,
                limit: d.to_string(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for DigitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DigitSet::Listed(s) => {
                let parts: Vec<String> = s.iter().map(u64::to_string).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
            DigitSet::NonZero => f.write_str("[1,d-1]"),
        }
    }
}

/// `|A_k|` for one block `[g_k, g_{k+1} - 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCount {
    pub k: usize,
    pub exact: BigUint,
    /// `prod_{i<=k} (d_i - |U_i|)` over constrained positions times `d_i`
    /// over free ones.
    pub product_bound: BigUint,
    pub empty: bool,
}

impl BlockCount {
    /// `P/2 <= |A_k| <= P` for a nonempty block.
    pub fn within_product_bound(&self) -> bool {
        self.empty || (self.exact <= self.product_bound && &self.exact * 2u32 >= self.product_bound)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Finiteness {
    Finite,
    Infinite,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitConstraint {
    sequence: QuotientSequence,
    index_set: IndexSet,
    default: DigitSet,
    overrides: BTreeMap<usize, DigitSet>,
}

impl DigitConstraint {
    /// Builds and validates a constraint. `default` applies to every
    /// constrained position without an entry in `overrides`.
    pub fn new(
        sequence: QuotientSequence,
        index_set: IndexSet,
        default: DigitSet,
        overrides: BTreeMap<usize, DigitSet>,
    ) -> Result<Self> {
        index_set.validate()?;
        for (&index, set) in &overrides {
            if !index_set.contains(index) {
                return Err(Error::OverrideOutsideIndexSet { index });
            }
            set.validate_at(index, &sequence.quotient(index))?;
        }
        let c = DigitConstraint {
            sequence,
            index_set,
            default,
            overrides,
        };
        c.validate_default()?;
        Ok(c)
    }

    pub fn uniform(sequence: QuotientSequence, index_set: IndexSet, default: DigitSet) -> Result<Self> {
        Self::new(sequence, index_set, default, BTreeMap::new())
    }

    /// Constrained position `>= from` that falls back to the default set.
    fn next_default_position(&self, mut from: usize) -> Option<usize> {
        loop {
            let i = self.index_set.next_member(from)?;
            if !self.overrides.contains_key(&i) {
                return Some(i);
            }
            from = i + 1;
        }
    }

    fn validate_default(&self) -> Result<()> {
        let Some(first) = self.next_default_position(0) else {
            return Ok(());
        };
        match self.sequence.rule() {
            QuotientRule::Constant(_) => self.default.validate_at(first, &self.sequence.quotient(first)),
            // Quotients increase, so the first position is the tightest.
            QuotientRule::Power { .. } | QuotientRule::Factorial => {
                self.default.validate_at(first, &self.sequence.quotient(first))
            }
            QuotientRule::Explicit { values, .. } => {
                let len = values.len();
                for i in self.index_set.members_in(0, len - 1) {
                    if !self.overrides.contains_key(&i) {
                        self.default.validate_at(i, &self.sequence.quotient(i))?;
                    }
                }
                if let Some(i) = self.next_default_position(len) {
                    // Beyond the list every recurring value may appear.
                    if let RecurringQuotients::Values(vs) = self.sequence.recurring_quotients() {
                        for d in vs {
                            self.default.validate_at(i, &BigUint::from(d))?;
                        }
                    }
                }
                Ok(())
            }
        }
    }

    pub fn sequence(&self) -> &QuotientSequence {
        &self.sequence
    }

    pub fn index_set(&self) -> &IndexSet {
        &self.index_set
    }

    pub fn default_forbidden(&self) -> &DigitSet {
        &self.default
    }

    pub fn overrides(&self) -> &BTreeMap<usize, DigitSet> {
        &self.overrides
    }

    /// `U_i` for `i ∈ I`, `None` for unconstrained positions.
    pub fn forbidden_at(&self, i: usize) -> Option<&DigitSet> {
        if !self.index_set.contains(i) {
            return None;
        }
        Some(self.overrides.get(&i).unwrap_or(&self.default))
    }

    /// `|U_i|` (zero off `I`).
    pub fn forbidden_size(&self, i: usize) -> BigUint {
        match self.forbidden_at(i) {
            Some(u) => u.size(&self.sequence.quotient(i)),
            None => BigUint::zero(),
        }
    }

    pub fn is_member(&self, n: &BigUint) -> Result<bool> {
        let numeral = self.sequence.to_digits(n)?;
        Ok(numeral
            .digits()
            .iter()
            .enumerate()
            .all(|(i, c)| self.forbidden_at(i).is_none_or(|u| !u.contains(c))))
    }

    /// Number of digits allowed at a non-leading position `i`.
    pub fn allowed(&self, i: usize) -> BigUint {
        let d = self.sequence.quotient(i);
        match self.forbidden_at(i) {
            Some(u) => &d - u.size(&d),
            None => d,
        }
    }

    /// Number of digits allowed at `k` when it is the leading position.
    pub fn allowed_leading(&self, k: usize) -> BigUint {
        let d = self.sequence.quotient(k);
        let nonzero = &d - 1u32;
        match self.forbidden_at(k) {
            Some(u) => nonzero - u.nonzero_size(&d),
            None => nonzero,
        }
    }

    /// `k ∈ I` and `U_k = [1, d_k - 1]`: the block has no members.
    pub fn block_is_forced_empty(&self, k: usize) -> bool {
        self.forbidden_at(k)
            .is_some_and(|u| u.is_all_nonzero(&self.sequence.quotient(k)))
    }

    pub fn block_count_exact(&self, k: usize) -> BlockCount {
        let lower = (0..k).fold(BigUint::one(), |acc, i| acc * self.allowed(i));
        self.finish_block_count(k, lower)
    }

    fn finish_block_count(&self, k: usize, lower: BigUint) -> BlockCount {
        let exact = &lower * self.allowed_leading(k);
        let product_bound = lower * self.allowed(k);
        BlockCount {
            k,
            empty: exact.is_zero(),
            exact,
            product_bound,
        }
    }

    /// Block counts for `k = 0..=max_k`, sharing the running product.
    pub fn block_counts(&self, max_k: usize) -> Vec<BlockCount> {
        let mut lower = BigUint::one();
        let mut out = Vec::with_capacity(max_k + 1);
        for k in 0..=max_k {
            out.push(self.finish_block_count(k, lower.clone()));
            lower *= self.allowed(k);
        }
        out
    }

    fn allowed_below(&self, j: usize, c: &BigUint, leading: bool) -> BigUint {
        let lo = u64::from(leading);
        let span = if leading {
            if c.is_zero() {
                BigUint::zero()
            } else {
                c - 1u32
            }
        } else {
            c.clone()
        };
        match self.forbidden_at(j) {
            Some(u) => span - u.count_below(lo, c),
            None => span,
        }
    }

    /// `A(n) = |{a ∈ A : a <= n}|` by a most-significant-first digit scan.
    pub fn count_upto(&self, n: &BigUint) -> BigUint {
        if n.is_zero() {
            return BigUint::zero();
        }
        let numeral = self.sequence.to_digits(n).expect("n is positive");
        let digits = numeral.digits();
        let top = digits.len() - 1;

        let mut free = Vec::with_capacity(top + 1);
        let mut lower_blocks = BigUint::zero();
        let mut prod = BigUint::one();
        for k in 0..=top {
            free.push(prod.clone());
            if k < top {
                lower_blocks += &prod * self.allowed_leading(k);
                prod *= self.allowed(k);
            }
        }

        let mut total = lower_blocks;
        for j in (0..=top).rev() {
            let c = &digits[j];
            let leading = j == top;
            total += self.allowed_below(j, c, leading) * &free[j];
            let blocked = self.forbidden_at(j).is_some_and(|u| u.contains(c));
            if blocked {
                return total;
            }
        }
        // Every digit of n passed, so n itself is a member.
        total + 1u32
    }

    /// Members of `A_k` in increasing order, stopping after `budget` items.
    pub fn enumerate_block(&self, k: usize, budget: u64) -> BlockMembers<'_> {
        BlockMembers::new(self, k, budget)
    }

    /// All members of `A_k`, or `BudgetExceeded` if there are more than `budget`.
    pub fn collect_block(&self, k: usize, budget: u64) -> Result<Vec<BigUint>> {
        let mut it = self.enumerate_block(k, budget);
        let out: Vec<BigUint> = it.by_ref().collect();
        if it.is_truncated() {
            return Err(Error::BudgetExceeded { budget });
        }
        Ok(out)
    }

    /// Whether `A` is finite. `A` is finite exactly when all sufficiently
    /// large blocks are forced empty, i.e. `I` is cofinite and
    /// `U_i = [1, d_i - 1]` eventually.
    pub fn is_finite_set(&self) -> Finiteness {
        if self.index_set.cofinite_start().is_none() {
            // Infinitely many free leading positions, each with a nonempty block.
            return Finiteness::Infinite;
        }
        match &self.default {
            DigitSet::NonZero => Finiteness::Finite,
            listed => match self.sequence.recurring_quotients() {
                RecurringQuotients::Values(vs) => {
                    if vs.iter().all(|&d| listed.is_all_nonzero(&BigUint::from(d))) {
                        Finiteness::Finite
                    } else {
                        Finiteness::Infinite
                    }
                }
                // A fixed listed set cannot stay equal to [1, d_i - 1] as d_i grows.
                RecurringQuotients::Unbounded => Finiteness::Infinite,
            },
        }
    }
}

/// Constraint over base 2 forcing `c_i = bits[i]` at every listed position.
pub fn fixed_bits(bits: &BTreeMap<usize, u64>) -> Result<DigitConstraint> {
    let (&first, &first_bit) = bits.iter().next().ok_or(Error::EmptyBitMap)?;
    check_bit(first, first_bit)?;
    let mut overrides = BTreeMap::new();
    for (&i, &b) in bits {
        check_bit(i, b)?;
        if b != first_bit {
            overrides.insert(i, DigitSet::listed([1 - b]));
        }
    }
    DigitConstraint::new(
        binary()?,
        IndexSet::Explicit(bits.keys().copied().collect()),
        DigitSet::listed([1 - first_bit]),
        overrides,
    )
}

/// Base-2 constraint forcing `c_i = bit` on all of `index_set`, except where
/// `overrides` prescribes a different bit.
pub fn fixed_bits_rule(
    index_set: IndexSet,
    bit: u64,
    overrides: &BTreeMap<usize, u64>,
) -> Result<DigitConstraint> {
    check_bit(0, bit)?;
    let mut sets = BTreeMap::new();
    for (&i, &b) in overrides {
        check_bit(i, b)?;
        sets.insert(i, DigitSet::listed([1 - b]));
    }
    DigitConstraint::new(binary()?, index_set, DigitSet::listed([1 - bit]), sets)
}

fn binary() -> Result<QuotientSequence> {
    QuotientSequence::constant(2)?.with_bound_hint(2)
}

fn check_bit(index: usize, bit: u64) -> Result<()> {
    if bit > 1 {
        return Err(Error::BitOutOfRange { index, bit });
    }
    Ok(())
}
