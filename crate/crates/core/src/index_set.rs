//! Sets of constrained digit positions and their counting function
//! `I(k) = |I ∩ [0, k]|`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IndexSet {
    All,
    Explicit(BTreeSet<usize>),
    Arithmetic { first: usize, step: usize },
    /// `{b^j : j >= 0}`; note that 0 is never a member.
    PowersOf(u64),
    Complement(Box<IndexSet>),
}

/// Eventually periodic description: for `i >= start`,
/// `i` is a member iff `mask[(i - start) % mask.len()]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Periodic {
    pub start: usize,
    pub mask: Vec<bool>,
}

impl Periodic {
    pub fn period(&self) -> usize {
        self.mask.len()
    }

    pub fn members_per_period(&self) -> usize {
        self.mask.iter().filter(|b| **b).count()
    }
}

/// Asymptotic shape of `I(k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Growth {
    /// `I` is finite, so `I(k) <= size` for all `k`.
    Finite { size: usize },
    /// `I(k) = floor(log_base k) + 1` for `k >= 1`.
    Logarithmic { base: u64 },
    /// `liminf I(k) / k >= num / den > 0`.
    Linear { num: usize, den: usize },
}

impl IndexSet {
    pub fn explicit<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        IndexSet::Explicit(indices.into_iter().collect())
    }

    pub fn complement(inner: IndexSet) -> Self {
        IndexSet::Complement(Box::new(inner))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            IndexSet::Arithmetic { step: 0, .. } => {
                Err(Error::InvalidIndexSet("arithmetic progression needs step >= 1".into()))
            }
            IndexSet::PowersOf(b) if *b < 2 => {
                Err(Error::InvalidIndexSet(format!("powers-of needs base >= 2, got {b}")))
            }
            IndexSet::Complement(inner) => inner.validate(),
            _ => Ok(()),
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        match self {
            IndexSet::All => true,
            IndexSet::Explicit(s) => s.contains(&i),
            IndexSet::Arithmetic { first, step } => i >= *first && (i - first).is_multiple_of(*step),
            IndexSet::PowersOf(b) => {
                if i == 0 {
                    return false;
                }
                let mut p: u64 = 1;
                let i = i as u64;
                while p < i {
                    match p.checked_mul(*b) {
                        Some(next) => p = next,
                        None => return false,
                    }
                }
                p == i
            }
            IndexSet::Complement(inner) => !inner.contains(i),
        }
    }

    /// `I(k) = |I ∩ [0, k]|`.
    pub fn count(&self, k: usize) -> usize {
        match self {
            IndexSet::All => k + 1,
            IndexSet::Explicit(s) => s.range(..=k).count(),
            IndexSet::Arithmetic { first, step } => {
                if k < *first {
                    0
                } else {
                    (k - first) / step + 1
                }
            }
            IndexSet::PowersOf(b) => {
                let k = k as u64;
                let mut n = 0;
                let mut p: u64 = 1;
                while p <= k {
                    n += 1;
                    match p.checked_mul(*b) {
                        Some(next) => p = next,
                        None => break,
                    }
                }
                n
            }
            IndexSet::Complement(inner) => k + 1 - inner.count(k),
        }
    }

    pub fn periodic(&self) -> Option<Periodic> {
        match self {
            IndexSet::All => Some(Periodic {
                start: 0,
                mask: vec![true],
            }),
            IndexSet::Explicit(s) => Some(Periodic {
                start: s.iter().next_back().map_or(0, |m| m + 1),
                mask: vec![false],
            }),
            IndexSet::Arithmetic { first, step } => {
                let mut mask = vec![false; *step];
                mask[0] = true;
                Some(Periodic { start: *first, mask })
            }
            IndexSet::PowersOf(_) => None,
            IndexSet::Complement(inner) => inner.periodic().map(|p| Periodic {
                start: p.start,
                mask: p.mask.iter().map(|b| !b).collect(),
            }),
        }
    }

    pub fn growth(&self) -> Growth {
        if let Some(p) = self.periodic() {
            let m = p.members_per_period();
            return if m == 0 {
                Growth::Finite {
                    size: if p.start == 0 { 0 } else { self.count(p.start - 1) },
                }
            } else {
                let g = num_integer::gcd(m, p.period());
                Growth::Linear {
                    num: m / g,
                    den: p.period() / g,
                }
            };
        }
        match self {
            IndexSet::PowersOf(b) => Growth::Logarithmic { base: *b },
            IndexSet::Complement(inner) => match inner.growth() {
                // Only sets built from powers-of end up here; their complements
                // miss a logarithmic number of positions.
                Growth::Logarithmic { .. } => Growth::Linear { num: 1, den: 1 },
                Growth::Linear { .. } => {
                    let IndexSet::Complement(inner2) = inner.as_ref() else {
                        unreachable!("non-periodic linear set is a complement")
                    };
                    inner2.growth()
                }
                Growth::Finite { .. } => unreachable!("finite sets are periodic"),
            },
            _ => unreachable!("periodic sets handled above"),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.growth(), Growth::Finite { .. })
    }

    /// Smallest `s` with `[s, ∞) ⊆ I`, when `I` is cofinite.
    pub fn cofinite_start(&self) -> Option<usize> {
        let p = self.periodic()?;
        if !p.mask.iter().all(|b| *b) {
            return None;
        }
        // Walk back over members just below `start`.
        let mut s = p.start;
        while s > 0 && self.contains(s - 1) {
            s -= 1;
        }
        Some(s)
    }

    pub fn is_cofinite(&self) -> bool {
        self.cofinite_start().is_some()
    }

    /// Smallest member `>= from`.
    pub fn next_member(&self, from: usize) -> Option<usize> {
        match self {
            IndexSet::All => Some(from),
            IndexSet::Explicit(s) => s.range(from..).next().copied(),
            IndexSet::Arithmetic { first, step } => {
                if from <= *first {
                    Some(*first)
                } else {
                    let steps = (from - first).div_ceil(*step);
                    first.checked_add(steps.checked_mul(*step)?)
                }
            }
            IndexSet::PowersOf(b) => {
                let mut p: u64 = 1;
                while p < from as u64 {
                    p = p.checked_mul(*b)?;
                }
                usize::try_from(p).ok()
            }
            IndexSet::Complement(inner) => {
                let stop = inner.cofinite_start();
                let mut i = from;
                loop {
                    if stop.is_some_and(|s| i >= s) {
                        return None;
                    }
                    if !inner.contains(i) {
                        return Some(i);
                    }
                    i = i.checked_add(1)?;
                }
            }
        }
    }

    /// Members in `[from, to]`, ascending.
    pub fn members_in(&self, from: usize, to: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut i = from;
        while let Some(m) = self.next_member(i) {
            if m > to {
                break;
            }
            out.push(m);
            i = m + 1;
        }
        out
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexSet::All => f.write_str("all"),
            IndexSet::Explicit(s) => {
                let parts: Vec<String> = s.iter().map(usize::to_string).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
            IndexSet::Arithmetic { first, step } => write!(f, "{first}+{step}j"),
            IndexSet::PowersOf(b) => write!(f, "powers-of({b})"),
            IndexSet::Complement(inner) => write!(f, "complement({inner})"),
        }
    }
}
