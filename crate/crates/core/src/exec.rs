//! Execution strategy for the data-parallel loops (block sweeps, oracle
//! scans, per-leading-digit enumeration).
//!
//! With the `parallel` feature disabled every strategy runs sequentially.
//! Results are always returned in input order, so output never depends on
//! scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// True when this strategy actually fans out to a thread pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Order-preserving map.
    pub fn map<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return items.into_par_iter().map(f).collect();
        }
        items.into_iter().map(f).collect()
    }

    /// Order-preserving map over an inclusive `u64` range, split into chunks.
    pub fn map_chunks<R, F>(self, lo: u64, hi: u64, chunk: u64, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(u64, u64) -> R + Sync + Send,
    {
        if lo > hi {
            return Vec::new();
        }
        let chunk = chunk.max(1);
        let mut bounds = Vec::new();
        let mut start = lo;
        loop {
            let end = start.saturating_add(chunk - 1).min(hi);
            bounds.push((start, end));
            if end == hi {
                break;
            }
            start = end + 1;
        }
        self.map(bounds, |(a, b)| f(a, b))
    }

    pub fn join<A, B, RA, RB>(self, a: A, b: B) -> (RA, RB)
    where
        A: FnOnce() -> RA + Send,
        B: FnOnce() -> RB + Send,
        RA: Send,
        RB: Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return rayon::join(a, b);
        }
        (a(), b())
    }
}
