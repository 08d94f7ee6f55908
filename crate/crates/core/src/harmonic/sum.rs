//! Exact reciprocal sums over members of a missing-digit set.
//!
//! Sums are built by binary splitting: fractions are combined pairwise
//! without reduction, so the cost is dominated by a few large
//! multiplications instead of one gcd per term. The final fraction is
//! reduced only when it is small enough for a quadratic gcd; larger
//! results keep the product denominator. Comparisons on [`Rational`] are
//! exact either way.
//!
//! Blocks are split by leading digit into independent tasks, which is
//! where the parallelism comes from. The task plan, and therefore the
//! merge tree, depends only on the inputs.

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::missing_digits::{walk_big, walk_u64, BlockLayout, DigitConstraint, WalkOutcome};
use crate::Rational;

/// Default element budget for enumerating sums.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Fractions with `bits(num) + bits(den)` above this stay unreduced.
const REDUCE_LIMIT_BITS: u64 = 1 << 17;

const LEAF_CHUNK: usize = 4096;
const SPLITS_PER_BLOCK: u64 = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Frac {
    num: BigUint,
    den: BigUint,
}

impl Frac {
    pub fn zero() -> Self {
        Frac {
            num: BigUint::zero(),
            den: BigUint::one(),
        }
    }

    fn merge(self, other: Frac) -> Frac {
        if self.num.is_zero() {
            return other;
        }
        if other.num.is_zero() {
            return self;
        }
        Frac {
            num: &self.num * &other.den + &other.num * &self.den,
            den: self.den * other.den,
        }
    }

    pub fn into_rational(self) -> Rational {
        let Frac { mut num, mut den } = self;
        if num.is_zero() {
            return Rational::zero();
        }
        let twos = num.trailing_zeros().unwrap_or(0).min(den.trailing_zeros().unwrap_or(0));
        num >>= twos;
        den >>= twos;
        if num.bits() + den.bits() <= REDUCE_LIMIT_BITS {
            Ratio::new(BigInt::from(num), BigInt::from(den))
        } else {
            Ratio::new_raw(BigInt::from(num), BigInt::from(den))
        }
    }
}

/// Pairwise-merges a list of fractions, preserving order.
fn merge_all(mut parts: Vec<Frac>, exec: Exec) -> Frac {
    while parts.len() > 1 {
        let mut pairs = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            pairs.push((a, it.next()));
        }
        parts = exec.map(pairs, |(a, b)| match b {
            Some(b) => a.merge(b),
            None => a,
        });
    }
    parts.pop().unwrap_or_else(Frac::zero)
}

fn leaf_sum_u64(values: &[u64]) -> Frac {
    match values {
        [] => Frac::zero(),
        [a] => Frac {
            num: BigUint::one(),
            den: BigUint::from(*a),
        },
        [a, b] => {
            let (a, b) = (*a as u128, *b as u128);
            Frac {
                num: BigUint::from(a + b),
                den: BigUint::from(a * b),
            }
        }
        _ => {
            let (l, r) = values.split_at(values.len() / 2);
            leaf_sum_u64(l).merge(leaf_sum_u64(r))
        }
    }
}

fn leaf_sum_big(values: &[BigUint]) -> Frac {
    match values {
        [] => Frac::zero(),
        [a] => Frac {
            num: BigUint::one(),
            den: a.clone(),
        },
        _ => {
            let (l, r) = values.split_at(values.len() / 2);
            leaf_sum_big(l).merge(leaf_sum_big(r))
        }
    }
}

/// Streaming binary splitting: a binary counter of equal-sized partial sums.
#[derive(Default)]
struct Accumulator {
    small: Vec<u64>,
    large: Vec<BigUint>,
    stack: Vec<(u32, Frac)>,
}

impl Accumulator {
    fn push_u64(&mut self, v: u64) {
        self.small.push(v);
        if self.small.len() == LEAF_CHUNK {
            let f = leaf_sum_u64(&self.small);
            self.small.clear();
            self.push_frac(f);
        }
    }

    fn push_big(&mut self, v: &BigUint) {
        self.large.push(v.clone());
        if self.large.len() == LEAF_CHUNK {
            let f = leaf_sum_big(&self.large);
            self.large.clear();
            self.push_frac(f);
        }
    }

    fn push_frac(&mut self, mut f: Frac) {
        let mut level = 0;
        while let Some((top, _)) = self.stack.last() {
            if *top != level {
                break;
            }
            let (_, prev) = self.stack.pop().unwrap();
            f = prev.merge(f);
            level += 1;
        }
        self.stack.push((level, f));
    }

    fn finish(mut self) -> Frac {
        if !self.small.is_empty() {
            let f = leaf_sum_u64(&self.small);
            self.push_frac(f);
        }
        if !self.large.is_empty() {
            let f = leaf_sum_big(&self.large);
            self.push_frac(f);
        }
        let mut acc: Option<Frac> = None;
        while let Some((_, f)) = self.stack.pop() {
            acc = Some(match acc {
                Some(later) => f.merge(later),
                None => f,
            });
        }
        acc.unwrap_or_else(Frac::zero)
    }
}

/// A slice of one block: members with leading digit in `[lead_lo, lead_hi]`,
/// value at most `upper`, at most `cap` of them.
#[derive(Debug, Clone)]
struct Task {
    k: usize,
    lead_lo: u64,
    lead_hi: u64,
    upper: Option<BigUint>,
    cap: u64,
}

struct Plan {
    tasks: Vec<Task>,
    /// The budget ran out while planning.
    truncated: bool,
}

/// Splits blocks `k_lo..=k_hi` (clipped at `upper`) into tasks whose
/// combined size stays within `budget`.
fn plan(c: &DigitConstraint, k_lo: usize, k_hi: usize, upper: Option<&BigUint>, budget: u64) -> Plan {
    let seq = c.sequence();
    // Leading position and digit of `upper`, if it clips a block.
    let top = upper.map(|u| {
        if u.is_zero() {
            (None, BigUint::zero())
        } else {
            let digits = seq.to_digits(u).expect("upper is positive");
            let m = digits.top_index();
            let lead = digits.digits()[m].clone();
            (Some(m), lead)
        }
    });
    let mut tasks = Vec::new();
    let mut remaining = budget;
    let mut lower = (0..k_lo).fold(BigUint::one(), |acc, i| acc * c.allowed(i));
    for k in k_lo..=k_hi {
        let layout = BlockLayout::new(c, k);
        let mut max_lead = layout.max_leading();
        let mut clip: Option<u64> = None;
        if let Some((m, lead)) = &top {
            match m {
                None => break,
                Some(m) if k > *m => break,
                Some(m) if k == *m => {
                    let lead = lead.to_u64().expect("leading digit of a budgeted bound fits u64");
                    clip = Some(lead);
                    max_lead = lead - 1;
                }
                _ => {}
            }
        }
        let step = max_lead.div_ceil(SPLITS_PER_BLOCK).max(1);
        let mut lo = 1u64;
        while lo <= max_lead {
            let hi = lo.saturating_add(step - 1).min(max_lead);
            let size = BigUint::from(layout.count_leading_in(lo, hi)) * &lower;
            if !size.is_zero() {
                match size.to_u64() {
                    Some(s) if s <= remaining => {
                        tasks.push(Task { k, lead_lo: lo, lead_hi: hi, upper: None, cap: s });
                        remaining -= s;
                    }
                    _ => {
                        tasks.push(Task { k, lead_lo: lo, lead_hi: hi, upper: None, cap: remaining });
                        return Plan { tasks, truncated: true };
                    }
                }
            }
            if hi == u64::MAX {
                break;
            }
            lo = hi + 1;
        }
        if let Some(lead) = clip {
            tasks.push(Task {
                k,
                lead_lo: lead,
                lead_hi: lead,
                upper: upper.cloned(),
                cap: remaining,
            });
            return Plan { tasks, truncated: false };
        }
        lower *= c.allowed(k);
    }
    Plan { tasks, truncated: false }
}

fn run_task(c: &DigitConstraint, task: &Task) -> (Frac, WalkOutcome) {
    let layout = BlockLayout::new(c, task.k);
    let mut acc = Accumulator::default();
    let outcome = match &layout.g_u64 {
        Some(_) => {
            let upper = task.upper.as_ref().map(|u| u.to_u64().unwrap_or(u64::MAX));
            walk_u64(&layout, task.lead_lo, task.lead_hi, upper, task.cap, |v| acc.push_u64(v))
        }
        None => walk_big(&layout, task.lead_lo, task.lead_hi, task.upper.as_ref(), task.cap, |v| {
            acc.push_big(v)
        }),
    };
    (acc.finish(), outcome)
}

/// An exact partial harmonic sum.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialSum {
    pub value: Rational,
    /// Number of reciprocals added.
    pub terms: u64,
    /// True when the budget stopped the sum early; `value` then covers the
    /// `terms` smallest members only.
    pub truncated: bool,
}

fn sum_planned(c: &DigitConstraint, plan: Plan, exec: Exec) -> PartialSum {
    let results = exec.map(plan.tasks, |t| run_task(c, &t));
    let mut truncated = plan.truncated;
    let mut terms = 0;
    let mut parts = Vec::with_capacity(results.len());
    for (f, outcome) in results {
        terms += outcome.visited;
        truncated |= !outcome.complete;
        parts.push(f);
    }
    PartialSum {
        value: merge_all(parts, exec).into_rational(),
        terms,
        truncated,
    }
}

/// `sum 1/a` over members `a <= n_max`.
pub fn partial_sum_exact(c: &DigitConstraint, n_max: &BigUint, budget: u64) -> PartialSum {
    partial_sum_exact_with(c, n_max, budget, Exec::default())
}

pub fn partial_sum_exact_with(c: &DigitConstraint, n_max: &BigUint, budget: u64, exec: Exec) -> PartialSum {
    if n_max.is_zero() {
        return PartialSum { value: Rational::zero(), terms: 0, truncated: false };
    }
    let top = c.sequence().block_of(n_max).expect("n_max is positive");
    sum_planned(c, plan(c, 0, top, Some(n_max), budget), exec)
}

/// `sum 1/a` over members of the blocks `k_lo..=k_hi`, i.e. over
/// `A ∩ [g_{k_lo}, g_{k_hi+1} - 1]`.
pub fn block_range_sum(c: &DigitConstraint, k_lo: usize, k_hi: usize, budget: u64, exec: Exec) -> PartialSum {
    if k_lo > k_hi {
        return PartialSum { value: Rational::zero(), terms: 0, truncated: false };
    }
    sum_planned(c, plan(c, k_lo, k_hi, None, budget), exec)
}

/// Exact `sum_{a ∈ A_k} 1/a`, or `BudgetExceeded`.
pub fn block_sum_exact(c: &DigitConstraint, k: usize, budget: u64, exec: Exec) -> Result<Rational> {
    let s = block_range_sum(c, k, k, budget, exec);
    if s.truncated {
        return Err(Error::BudgetExceeded { budget });
    }
    Ok(s.value)
}

/// Certified enclosure `[lo, hi]` of `sum_{a ∈ A_k} 1/a` with dyadic
/// endpoints: each reciprocal is rounded down and up at `2^-precision`
/// and the rounded values are summed exactly. Scales to blocks far beyond
/// what exact summation can handle.
pub fn block_sum_enclosure(
    c: &DigitConstraint,
    k: usize,
    budget: u64,
    exec: Exec,
) -> Result<(Rational, Rational)> {
    let pl = plan(c, k, k, None, budget);
    if pl.truncated {
        return Err(Error::BudgetExceeded { budget });
    }
    let layout = BlockLayout::new(c, k);
    let fits = layout.g_u64.is_some();
    let precision: u64 = if fits { 96 } else { c.sequence().base_value(k + 1).bits() + 64 };
    let scale = BigUint::one() << precision;

    let partials = exec.map(pl.tasks, |t| {
        let layout = BlockLayout::new(c, t.k);
        let mut lo = BigUint::zero();
        let mut hi = BigUint::zero();
        if fits {
            let one = 1u128 << 96;
            let (mut lo_acc, mut hi_acc) = (0u128, 0u128);
            walk_u64(&layout, t.lead_lo, t.lead_hi, None, t.cap, |a| {
                let a = a as u128;
                let q = one / a;
                let up = if one.is_multiple_of(a) { q } else { q + 1 };
                // At most 2^96 per term: flush well before u128 overflow.
                if lo_acc > u128::MAX >> 2 {
                    lo += lo_acc;
                    hi += hi_acc;
                    lo_acc = 0;
                    hi_acc = 0;
                }
                lo_acc += q;
                hi_acc += up;
            });
            lo += lo_acc;
            hi += hi_acc;
        } else {
            walk_big(&layout, t.lead_lo, t.lead_hi, None, t.cap, |a| {
                let q = &scale / a;
                let exact = (&q * a) == scale;
                hi += if exact { q.clone() } else { &q + 1u32 };
                lo += q;
            });
        }
        (lo, hi)
    });
    let (lo, hi) = partials
        .into_iter()
        .fold((BigUint::zero(), BigUint::zero()), |(a, b), (x, y)| (a + x, b + y));
    let den = BigInt::from(scale);
    Ok((
        Ratio::new(BigInt::from(lo), den.clone()),
        Ratio::new(BigInt::from(hi), den),
    ))
}
