use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::{DigitConstraint, DigitSet};

/// Per-position digit rules for one block `[g_k, g_{k+1} - 1]`.
pub(crate) struct BlockLayout<'c> {
    pub k: usize,
    /// `d_i`, saturated at `u64::MAX`. A saturated position never wraps
    /// before any realistic budget runs out.
    limits: Vec<u64>,
    forbidden: Vec<Option<&'c DigitSet>>,
    pub g: Vec<BigUint>,
    /// `g_i` as machine words when every member of the block fits in `u64`.
    pub g_u64: Option<Vec<u64>>,
}

impl<'c> BlockLayout<'c> {
    pub fn new(c: &'c DigitConstraint, k: usize) -> Self {
        let seq = c.sequence();
        let limits = (0..=k).map(|i| seq.quotient_u64(i).unwrap_or(u64::MAX)).collect();
        let forbidden = (0..=k).map(|i| c.forbidden_at(i)).collect();
        let mut g = seq.base_values(k + 1);
        let fits = g[k + 1].to_u64().is_some() || g[k + 1] == BigUint::from(u64::MAX) + 1u32;
        g.truncate(k + 1);
        let g_u64 = if fits {
            g.iter().map(|x| x.to_u64()).collect()
        } else {
            None
        };
        BlockLayout {
            k,
            limits,
            forbidden,
            g,
            g_u64,
        }
    }

    /// Smallest allowed digit `>= from` at position `i`.
    pub fn next_allowed(&self, i: usize, from: u64) -> Option<u64> {
        let from = if i == self.k { from.max(1) } else { from };
        let x = match self.forbidden[i] {
            None => from,
            Some(DigitSet::NonZero) => {
                if from == 0 {
                    0
                } else {
                    return None;
                }
            }
            Some(DigitSet::Listed(s)) => {
                let mut x = from;
                while s.contains(&x) {
                    x = x.checked_add(1)?;
                }
                x
            }
        };
        (x < self.limits[i]).then_some(x)
    }

    /// Largest leading digit, `d_k - 1`.
    pub fn max_leading(&self) -> u64 {
        self.limits[self.k] - 1
    }

    /// Allowed leading digits within `[lo, hi]`, `1 <= lo`.
    pub fn count_leading_in(&self, lo: u64, hi: u64) -> u64 {
        if lo > hi {
            return 0;
        }
        let span = hi - lo + 1;
        match self.forbidden[self.k] {
            None => span,
            Some(DigitSet::NonZero) => 0,
            Some(DigitSet::Listed(s)) => span - s.range(lo..=hi).count() as u64,
        }
    }
}

/// Ascending walk over digit tuples, least significant position fastest.
pub(crate) struct Odometer {
    digits: Vec<u64>,
    lead_hi: u64,
    live: bool,
}

impl Odometer {
    /// Starts at the smallest member whose leading digit lies in `[lead_lo, lead_hi]`.
    pub fn start(layout: &BlockLayout<'_>, lead_lo: u64, lead_hi: u64) -> Self {
        let k = layout.k;
        let mut digits = vec![0; k + 1];
        let mut live = true;
        for (i, d) in digits.iter_mut().enumerate().take(k) {
            match layout.next_allowed(i, 0) {
                Some(x) => *d = x,
                None => live = false,
            }
        }
        match layout.next_allowed(k, lead_lo) {
            Some(x) if x <= lead_hi => digits[k] = x,
            _ => live = false,
        }
        Odometer { digits, lead_hi, live }
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn is_live(&self) -> bool {
        self.live
    }

    /// Steps to the next member, reporting each `(position, old, new)` digit change.
    pub fn advance(&mut self, layout: &BlockLayout<'_>, mut on_change: impl FnMut(usize, u64, u64)) {
        let k = layout.k;
        for i in 0..=k {
            let old = self.digits[i];
            let next = old.checked_add(1).and_then(|f| layout.next_allowed(i, f));
            match next {
                Some(x) if i < k || x <= self.lead_hi => {
                    self.digits[i] = x;
                    on_change(i, old, x);
                    return;
                }
                _ if i < k => {
                    let first = layout.next_allowed(i, 0).expect("position has an allowed digit");
                    self.digits[i] = first;
                    on_change(i, old, first);
                }
                _ => {}
            }
        }
        self.live = false;
    }
}

/// How a bounded walk ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct WalkOutcome {
    pub visited: u64,
    /// False when the walk stopped at `cap` with members still left.
    pub complete: bool,
}

/// Visits members with leading digit in `[lead_lo, lead_hi]` and value
/// `<= upper` (if given), at most `cap` of them. Requires `layout.g_u64`.
pub(crate) fn walk_u64(
    layout: &BlockLayout<'_>,
    lead_lo: u64,
    lead_hi: u64,
    upper: Option<u64>,
    cap: u64,
    mut f: impl FnMut(u64),
) -> WalkOutcome {
    let g = layout.g_u64.as_ref().expect("block fits in u64");
    let mut odo = Odometer::start(layout, lead_lo, lead_hi);
    let mut value: u64 = odo.digits().iter().zip(g).map(|(c, g)| c * g).sum();
    let mut visited = 0;
    while odo.is_live() {
        if upper.is_some_and(|u| value > u) {
            return WalkOutcome { visited, complete: true };
        }
        if visited == cap {
            return WalkOutcome { visited, complete: false };
        }
        f(value);
        visited += 1;
        odo.advance(layout, |i, old, new| {
            if new > old {
                value += (new - old) * g[i];
            } else {
                value -= (old - new) * g[i];
            }
        });
    }
    WalkOutcome { visited, complete: true }
}

/// [`walk_u64`] for blocks whose members exceed machine words.
pub(crate) fn walk_big(
    layout: &BlockLayout<'_>,
    lead_lo: u64,
    lead_hi: u64,
    upper: Option<&BigUint>,
    cap: u64,
    mut f: impl FnMut(&BigUint),
) -> WalkOutcome {
    let g = &layout.g;
    let mut odo = Odometer::start(layout, lead_lo, lead_hi);
    let mut value = odo
        .digits()
        .iter()
        .zip(g)
        .fold(BigUint::zero(), |acc, (c, g)| acc + g * *c);
    let mut visited = 0;
    while odo.is_live() {
        if upper.is_some_and(|u| &value > u) {
            return WalkOutcome { visited, complete: true };
        }
        if visited == cap {
            return WalkOutcome { visited, complete: false };
        }
        f(&value);
        visited += 1;
        odo.advance(layout, |i, old, new| {
            if new > old {
                value += &g[i] * (new - old);
            } else {
                value -= &g[i] * (old - new);
            }
        });
    }
    WalkOutcome { visited, complete: true }
}

/// Members of one block in increasing order, stopping after a budget.
///
/// When the budget runs out before the block does, iteration ends and
/// [`BlockMembers::is_truncated`] reports it.
pub struct BlockMembers<'c> {
    layout: BlockLayout<'c>,
    odo: Odometer,
    value: BigUint,
    remaining: u64,
    truncated: bool,
}

impl<'c> BlockMembers<'c> {
    pub(crate) fn new(c: &'c DigitConstraint, k: usize, budget: u64) -> Self {
        let layout = BlockLayout::new(c, k);
        let odo = Odometer::start(&layout, 1, layout.max_leading());
        let value = odo
            .digits()
            .iter()
            .zip(&layout.g)
            .fold(BigUint::zero(), |acc, (c, g)| acc + g * *c);
        BlockMembers {
            layout,
            odo,
            value,
            remaining: budget,
            truncated: false,
        }
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }
}

impl Iterator for BlockMembers<'_> {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        if !self.odo.is_live() {
            return None;
        }
        if self.remaining == 0 {
            self.truncated = true;
            return None;
        }
        self.remaining -= 1;
        let out = self.value.clone();
        let (g, value) = (&self.layout.g, &mut self.value);
        self.odo.advance(&self.layout, |i, old, new| {
            if new > old {
                *value += &g[i] * (new - old);
            } else {
                *value -= &g[i] * (old - new);
            }
        });
        Some(out)
    }
}
