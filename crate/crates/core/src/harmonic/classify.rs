//! Convergence classification from certified hypotheses.
//!
//! A verdict other than `Inconclusive` is only ever produced from a
//! symbolic certificate on the rule algebra (growth class of `I(k)`,
//! quotient family, forbidden-set sizes). Numeric windows are reported as
//! spot-checks and never decide anything.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gadic::{QuotientRule, RecurringQuotients};
use crate::index_set::Growth;
use crate::missing_digits::{DigitConstraint, DigitSet, Finiteness};
use crate::{ratio, Rational};

use super::bounds::survival_product;

pub const DEFAULT_K_WINDOW: u64 = 10_000;
pub const DEFAULT_I_WINDOW: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Convergent,
    Divergent,
    FiniteSet,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Convergent => "Convergent",
            Verdict::Divergent => "Divergent",
            Verdict::FiniteSet => "FiniteSet",
            Verdict::Inconclusive => "Inconclusive",
        })
    }
}

/// The hypotheses a verdict can rest on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    /// `I` cofinite and `U_i = [1, d_i - 1]` eventually.
    FiniteSet,
    /// `I(k) >= (1 + δ) log k / log(d / (d - 1))` eventually, bounded quotients.
    BoundedConvergence,
    /// `I(k) <= (1 - δ) log k / log d` eventually, bounded quotients.
    BoundedDivergence,
    /// `A` infinite and `sum_{i ∈ I} |U_i| / d_i < ∞`.
    UnboundedDivergence,
}

impl Hypothesis {
    pub fn tag(self) -> &'static str {
        match self {
            Hypothesis::FiniteSet => "finite-set",
            Hypothesis::BoundedConvergence => "bounded-quotient-convergence",
            Hypothesis::BoundedDivergence => "bounded-quotient-divergence",
            Hypothesis::UnboundedDivergence => "unbounded-quotient-divergence",
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attempt {
    pub hypothesis: Hypothesis,
    pub holds: bool,
    pub detail: String,
}

/// Numbers behind a verdict. Fields not relevant to the rule that fired
/// stay empty.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Margin {
    /// `δ` of the bounded-quotient certificate, or the proof constant
    /// `δ = 1/2 * prod_{i < i0, i ∈ I} (1 - |U_i| / d_i)` of the unbounded one.
    pub delta: Option<Rational>,
    /// Index from which the bounded-quotient inequality is certified.
    pub certified_from: Option<BigUint>,
    /// Upper end of the numeric spot-check.
    pub window: Option<u64>,
    /// Smallest `k0` with the inequality holding on all of `[k0, window]`.
    pub window_holds_from: Option<u64>,
    /// Signed distance to the threshold at `k = window`, in units of `I(k)`.
    pub window_slack: Option<f64>,
    /// Smallest `i0 ∈ I` with `sum_{i >= i0, i ∈ I} |U_i| / d_i < 1/2`.
    pub i0: Option<u64>,
    /// That tail sum at `i0` (an upper bound when not exact).
    pub tail_at_i0: Option<Rational>,
    pub tail_exact: bool,
    /// `sum_{i ∈ I} |U_i| / d_i`, when known exactly.
    pub series_sum: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub verdict: Verdict,
    pub rule_fired: Option<Hypothesis>,
    pub margin: Margin,
    pub attempts: Vec<Attempt>,
    pub notes: Vec<String>,
}

impl Classification {
    fn inconclusive(attempts: Vec<Attempt>, notes: Vec<String>) -> Self {
        Classification {
            verdict: Verdict::Inconclusive,
            rule_fired: None,
            margin: Margin::default(),
            attempts,
            notes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Fixed `δ`; when absent the largest value in [`delta_grid`] that
    /// certifies is used.
    pub delta: Option<Rational>,
    pub k_window: u64,
    pub i_window: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            delta: None,
            k_window: DEFAULT_K_WINDOW,
            i_window: DEFAULT_I_WINDOW,
        }
    }
}

/// Candidate values of `δ`, largest first.
pub fn delta_grid() -> Vec<Rational> {
    [(1u32, 2u32), (2, 5), (1, 4), (1, 10), (1, 20)]
        .into_iter()
        .map(|(p, q)| ratio(p.into(), q.into()))
        .collect()
}

/// `δ` as `(p, q)` with `0 < p < q`.
fn delta_parts(delta: &Rational) -> Result<(u32, u32)> {
    let bad = || Error::InvalidDelta(delta.to_string());
    let p = delta.numer().to_u32().ok_or_else(bad)?;
    let q = delta.denom().to_u32().ok_or_else(bad)?;
    if p == 0 || p >= q {
        return Err(bad());
    }
    Ok((p, q))
}

fn pow(b: u64, e: u64) -> BigUint {
    let e = u32::try_from(e).expect("exponent fits u32");
    BigUint::from(b).pow(e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    /// `I(k) >= (1 + δ) log k / log(d / (d - 1))`.
    Convergence,
    /// `I(k) <= (1 - δ) log k / log d`.
    Divergence,
}

impl Side {
    fn hypothesis(self) -> Hypothesis {
        match self {
            Side::Convergence => Hypothesis::BoundedConvergence,
            Side::Divergence => Hypothesis::BoundedDivergence,
        }
    }

    /// `C` in the threshold `C log k` on `I(k)`, in floating point.
    fn log_coefficient(self, d: u64, p: u32, q: u32) -> f64 {
        let (d, delta) = (d as f64, p as f64 / q as f64);
        match self {
            Side::Convergence => (1.0 + delta) / (d / (d - 1.0)).ln(),
            Side::Divergence => (1.0 - delta) / d.ln(),
        }
    }

    fn threshold(self, d: u64, p: u32, q: u32, k: u64) -> f64 {
        self.log_coefficient(d, p, q) * (k as f64).ln()
    }

    /// Exact test at one `k`, in integers.
    fn holds_exact(self, d: u64, p: u32, q: u32, k: u64, count: u64) -> bool {
        let (p, q) = (p as u64, q as u64);
        match self {
            Side::Convergence => pow(d, q * count) >= pow(k, q + p) * pow(d - 1, q * count),
            Side::Divergence => pow(d, q * count) <= pow(k, q - p),
        }
    }

    fn holds_at(self, d: u64, p: u32, q: u32, k: u64, count: u64) -> bool {
        let t = self.threshold(d, p, q, k);
        let c = count as f64;
        if (c - t).abs() > 1e-9 * (c.abs() + t.abs() + 1.0) {
            return match self {
                Side::Convergence => c > t,
                Side::Divergence => c < t,
            };
        }
        self.holds_exact(d, p, q, k, count)
    }

    /// Symbolic certificate from the growth class of `I(k)`. Returns the
    /// index from which the inequality holds, or `None` when the growth
    /// class cannot certify it.
    fn certify(self, growth: Growth, periodic: Option<(usize, usize, usize)>, d: u64, p: u32, q: u32) -> Option<Option<BigUint>> {
        match (self, growth) {
            (Side::Convergence, Growth::Linear { .. }) => Some(periodic.and_then(|(start, period, members)| {
                linear_threshold(start, period, members, self, d, p, q)
            })),
            (Side::Convergence, Growth::Logarithmic { base }) => {
                // floor(log_b k) + 1 >= log_b k, so log(d/(d-1)) >= (1+δ) log b suffices;
                // the condition fails for every b >= 2 >= d/(d-1) but is checked as stated.
                let (pp, qq) = (p as u64, q as u64);
                (pow(d, qq) >= pow(base, qq + pp) * pow(d - 1, qq)).then_some(None)
            }
            (Side::Convergence, Growth::Finite { .. }) => None,
            (Side::Divergence, Growth::Finite { size }) => {
                // k^{q-p} >= d^{q * size}.
                let target = pow(d, q as u64 * size as u64);
                let e = q - p;
                let root = target.nth_root(e);
                let k = if root.pow(e) == target { root } else { root + 1u32 };
                Some(Some(k.max(BigUint::one())))
            }
            (Side::Divergence, Growth::Logarithmic { base }) => {
                let (pp, qq) = (p as u64, q as u64);
                if pow(base, qq - pp) <= pow(d, qq) {
                    return None;
                }
                // On [b^j, b^{j+1}) the worst point is b^j: need d^{q(j+1)} <= b^{j(q-p)},
                // which is linear in j with positive slope.
                let holds = |j: u64| pow(d, qq * (j + 1)) <= pow(base, j * (qq - pp));
                let slope = (qq - pp) as f64 * (base as f64).ln() - qq as f64 * (d as f64).ln();
                let est = ((qq as f64 * (d as f64).ln()) / slope).ceil().max(0.0) as u64;
                let mut j = est.saturating_sub(3);
                while !holds(j) {
                    j += 1;
                }
                while j > 0 && holds(j - 1) {
                    j -= 1;
                }
                Some(Some(pow(base, j)))
            }
            (Side::Divergence, Growth::Linear { .. }) => None,
        }
    }
}

/// For an eventually periodic `I` with `members` of every `period` indices
/// from `start` on, `I(k) >= members * floor((k - start + 1) / period)`,
/// which is at least `members * (k - start + 2 - period) / period`.
/// Returns the first `k`
/// from which that lower bound clears the convergence threshold for good.
fn linear_threshold(start: usize, period: usize, members: usize, side: Side, d: u64, p: u32, q: u32) -> Option<BigUint> {
    let lower = |k: u64| members as f64 * (k as f64 - start as f64 + 2.0 - period as f64) / period as f64;
    let c = side.log_coefficient(d, p, q);
    // Past k* = c * period / members the gap is increasing.
    let floor = ((c * period as f64 / members as f64).ceil() as u64).max(start as u64).max(2);
    let ok = |k: u64| lower(k) >= side.threshold(d, p, q, k);
    let mut hi = floor;
    while !ok(hi) {
        hi = hi.checked_mul(2)?;
    }
    let mut lo = floor;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(BigUint::from(lo))
}

struct WindowCheck {
    holds_from: Option<u64>,
    slack: f64,
}

fn spot_check(c: &DigitConstraint, side: Side, d: u64, p: u32, q: u32, window: u64) -> WindowCheck {
    let index_set = c.index_set();
    let mut holds_from = None;
    let mut k = window;
    while k >= 1 {
        let count = index_set.count(k as usize) as u64;
        if !side.holds_at(d, p, q, k, count) {
            break;
        }
        holds_from = Some(k);
        k -= 1;
    }
    let count = index_set.count(window as usize) as f64;
    let t = side.threshold(d, p, q, window);
    let slack = match side {
        Side::Convergence => count - t,
        Side::Divergence => t - count,
    };
    WindowCheck { holds_from, slack }
}

fn describe_growth(g: Growth) -> String {
    match g {
        Growth::Finite { size } => format!("I is finite with {size} members"),
        Growth::Logarithmic { base } => format!("I(k) = floor(log_{base} k) + 1"),
        Growth::Linear { num, den } => format!("I(k) grows linearly (density at least {num}/{den})"),
    }
}

/// Bounded-quotient test with declared bound `d`: tries the convergence
/// inequality, then the divergence inequality, for the given `δ` or each
/// grid value.
pub fn convergence_by_bounded_quotients(
    c: &DigitConstraint,
    delta: Option<&Rational>,
    k_window: u64,
) -> Result<Classification> {
    let d = c.sequence().bound_hint().ok_or(Error::MissingBoundHint)?;
    let candidates = match delta {
        Some(x) => vec![x.clone()],
        None => delta_grid(),
    };
    let parts = candidates.iter().map(delta_parts).collect::<Result<Vec<_>>>()?;
    let index_set = c.index_set();
    let growth = index_set.growth();
    let periodic = index_set
        .periodic()
        .map(|p| (p.start, p.period(), p.members_per_period()));
    let mut attempts = Vec::new();

    for side in [Side::Convergence, Side::Divergence] {
        let mut fired = None;
        for (delta, &(p, q)) in candidates.iter().zip(&parts) {
            if let Some(from) = side.certify(growth, periodic, d, p, q) {
                fired = Some((delta.clone(), p, q, from));
                break;
            }
        }
        let Some((delta, p, q, certified_from)) = fired else {
            let tried: Vec<String> = candidates.iter().map(|x| x.to_string()).collect();
            attempts.push(Attempt {
                hypothesis: side.hypothesis(),
                holds: false,
                detail: format!(
                    "{} with d = {d}; not certified for δ in {{{}}}",
                    describe_growth(growth),
                    tried.join(", ")
                ),
            });
            continue;
        };
        let window = (k_window >= 1).then(|| spot_check(c, side, d, p, q, k_window));
        attempts.push(Attempt {
            hypothesis: side.hypothesis(),
            holds: true,
            detail: format!("{} with d = {d}; certified for δ = {delta}", describe_growth(growth)),
        });
        let mut notes = Vec::new();
        if let Some(w) = &window {
            if w.holds_from.is_none() {
                notes.push(format!("inequality fails at k = {k_window}; the certificate applies beyond the window"));
            }
        }
        return Ok(Classification {
            verdict: match side {
                Side::Convergence => Verdict::Convergent,
                Side::Divergence => Verdict::Divergent,
            },
            rule_fired: Some(side.hypothesis()),
            margin: Margin {
                delta: Some(delta),
                certified_from,
                window: window.as_ref().map(|_| k_window),
                window_holds_from: window.as_ref().and_then(|w| w.holds_from),
                window_slack: window.as_ref().map(|w| w.slack),
                ..Margin::default()
            },
            attempts,
            notes,
        });
    }

    let mut notes = Vec::new();
    if let Growth::Logarithmic { base } = growth {
        if base <= d {
            notes.push(format!(
                "I(k) is of order log k / log {base} with d = {d}: between the two inequalities, where the question is open"
            ));
        } else {
            notes.push(format!("I(k) is of order log k / log {base}: no δ on the grid certifies a test"));
        }
    }
    Ok(Classification::inconclusive(attempts, notes))
}

/// How the tail `sum_{i >= from, i ∈ I} |U_i| / d_i` is evaluated.
enum TailModel {
    /// Power quotients `d_i = b^{i+1}` over an eventually periodic `I`.
    PowerPeriodic { base: u64, start: usize, mask: Vec<bool>, u: BigUint },
    /// Power quotients over any `I`; remainder bounded geometrically.
    PowerSparse { base: u64, u: BigUint },
    /// Factorial quotients `d_i = i + 2` over `I = {c^j}`.
    FactorialPowers { c: u64, u: BigUint },
}

enum TailValue {
    Exact(Rational),
    Bounds(Rational, Rational),
}

enum SeriesCheck {
    Converges(TailModel),
    Fails(String),
}

fn series_check(c: &DigitConstraint) -> SeriesCheck {
    let index_set = c.index_set();
    let growth = index_set.growth();
    if let Growth::Finite { .. } = growth {
        return SeriesCheck::Fails("I is finite; the series test needs an infinite index set".into());
    }
    let u = match c.default_forbidden() {
        DigitSet::Listed(s) => BigUint::from(s.len()),
        DigitSet::NonZero => {
            return SeriesCheck::Fails("|U_i| / d_i = 1 - 1/d_i >= 1/2 on infinitely many i; the series diverges".into())
        }
    };
    match c.sequence().recurring_quotients() {
        RecurringQuotients::Values(v) => {
            let max = v.iter().max().copied().unwrap_or(2);
            return SeriesCheck::Fails(format!(
                "quotients are bounded by {max}, so |U_i| / d_i >= {u}/{max} on infinitely many i; the series diverges"
            ));
        }
        RecurringQuotients::Unbounded => {}
    }
    match c.sequence().rule() {
        QuotientRule::Power { base } => match index_set.periodic() {
            Some(p) => SeriesCheck::Converges(TailModel::PowerPeriodic {
                base: *base,
                start: p.start,
                mask: p.mask,
                u,
            }),
            None => SeriesCheck::Converges(TailModel::PowerSparse { base: *base, u }),
        },
        QuotientRule::Factorial => match growth {
            Growth::Logarithmic { base } => SeriesCheck::Converges(TailModel::FactorialPowers { c: base, u }),
            _ => SeriesCheck::Fails(
                "d_i = i + 2 over a set of positive density: the terms compare to a harmonic series and diverge".into(),
            ),
        },
        _ => SeriesCheck::Fails("quotient rule has no tail certificate".into()),
    }
}

fn term(c: &DigitConstraint, i: usize) -> Rational {
    ratio(c.forbidden_size(i), c.sequence().quotient(i))
}

fn finite_part(c: &DigitConstraint, from: usize, to: usize) -> Rational {
    c.index_set()
        .members_in(from, to)
        .into_iter()
        .fold(Rational::zero(), |acc, i| acc + term(c, i))
}

impl TailModel {
    fn evaluate(&self, c: &DigitConstraint, from: usize, extent: usize) -> TailValue {
        // Overrides are summed explicitly; models describe the default only.
        let past_overrides = c.overrides().keys().next_back().map_or(0, |m| m + 1);
        match self {
            TailModel::PowerPeriodic { base, start, mask, u } => {
                let m = from.max(*start).max(past_overrides);
                let head = if m > from { finite_part(c, from, m - 1) } else { Rational::zero() };
                // sum_{i >= m} mask * u / b^{i+1}
                //   = u * sum_r mask[r] b^{p-1-r} / (b^m (b^p - 1)).
                let period = mask.len();
                let b = BigUint::from(*base);
                let mut num = BigUint::zero();
                for r in 0..period {
                    if mask[(m + r - start) % period] {
                        num += b.pow((period - 1 - r) as u32);
                    }
                }
                let den = b.pow(m as u32) * (b.pow(period as u32) - 1u32);
                TailValue::Exact(head + ratio(num * u, den))
            }
            TailModel::PowerSparse { base, u } => {
                let n = extent.max(past_overrides);
                let lo = finite_part(c, from, n);
                let b = BigUint::from(*base);
                let rest = ratio(u.clone(), b.pow((n + 1) as u32) * (&b - 1u32));
                TailValue::Bounds(lo.clone(), lo + rest)
            }
            TailModel::FactorialPowers { c: base, u } => {
                let n = extent.max(past_overrides);
                let lo = finite_part(c, from, n);
                // Members beyond n are b^j >= first; their terms sum below
                // u * sum_{j >= j0} b^{-j} = u * b / (first * (b - 1)).
                let b = BigUint::from(*base);
                let mut first = BigUint::one();
                while first <= BigUint::from(n) {
                    first *= &b;
                }
                let rest = ratio(u * &b, first * (&b - 1u32));
                TailValue::Bounds(lo.clone(), lo + rest)
            }
        }
    }

    /// Decides `tail(from) < 1/2`, refining the enclosure up to `from + window`.
    fn tail_below_half(&self, c: &DigitConstraint, from: usize, window: usize) -> Option<(bool, Rational, bool)> {
        let half = ratio(1u32.into(), 2u32.into());
        let mut extent = from + 8;
        loop {
            match self.evaluate(c, from, extent) {
                TailValue::Exact(t) => return Some((t < half, t, true)),
                TailValue::Bounds(lo, hi) => {
                    if hi < half {
                        return Some((true, hi, false));
                    }
                    if lo >= half {
                        return Some((false, lo, false));
                    }
                }
            }
            if extent >= from + window {
                return None;
            }
            extent = (from + 2 * (extent - from)).min(from + window);
        }
    }
}

/// Unbounded-quotient test: certifies convergence of
/// `sum_{i ∈ I} |U_i| / d_i` for an infinite `A` and computes the proof
/// constants `i0` and `δ`.
pub fn divergence_by_unbounded_quotients(c: &DigitConstraint, i_window: usize) -> Result<Classification> {
    match c.is_finite_set() {
        Finiteness::Finite => return Err(Error::SetIsFinite),
        Finiteness::Unknown => return Err(Error::SetFinitenessUnknown),
        Finiteness::Infinite => {}
    }
    let model = match series_check(c) {
        SeriesCheck::Fails(why) => {
            let attempt = Attempt {
                hypothesis: Hypothesis::UnboundedDivergence,
                holds: false,
                detail: why,
            };
            return Ok(Classification::inconclusive(vec![attempt], Vec::new()));
        }
        SeriesCheck::Converges(m) => m,
    };

    let mut margin = Margin::default();
    if let TailValue::Exact(total) = model.evaluate(c, 0, 0) {
        margin.series_sum = Some(total);
    }
    let mut notes = Vec::new();
    let index_set = c.index_set();
    let mut from = 0;
    while let Some(i) = index_set.next_member(from) {
        if i > i_window {
            break;
        }
        match model.tail_below_half(c, i, i_window) {
            Some((true, tail, exact)) => {
                let before = if i == 0 { Rational::one() } else { survival_product(c, i - 1) };
                margin.i0 = Some(i as u64);
                margin.delta = Some(before / Rational::from_integer(2.into()));
                margin.tail_at_i0 = Some(tail);
                margin.tail_exact = exact;
                break;
            }
            Some((false, ..)) => {}
            None => {
                notes.push(format!("tail at i = {i} not separated from 1/2 within the window"));
                break;
            }
        }
        from = i + 1;
    }
    if margin.i0.is_none() && notes.is_empty() {
        notes.push(format!("no i0 <= {i_window}"));
    }
    let detail = match &margin.series_sum {
        Some(s) => format!("A is infinite and the series sums to {s}"),
        None => "A is infinite and the series converges by geometric comparison".into(),
    };
    Ok(Classification {
        verdict: Verdict::Divergent,
        rule_fired: Some(Hypothesis::UnboundedDivergence),
        margin,
        attempts: vec![Attempt {
            hypothesis: Hypothesis::UnboundedDivergence,
            holds: true,
            detail,
        }],
        notes,
    })
}

/// Finiteness, then the bounded-quotient test (with a declared bound),
/// then the unbounded-quotient test.
pub fn classify(c: &DigitConstraint) -> Classification {
    classify_with(c, &ClassifyOptions::default()).expect("default options are valid")
}

/// [`classify`] with explicit options. Fails only on an invalid `δ`.
pub fn classify_with(c: &DigitConstraint, options: &ClassifyOptions) -> Result<Classification> {
    if let Some(x) = &options.delta {
        delta_parts(x)?;
    }
    let mut attempts = Vec::new();
    let mut notes = Vec::new();
    match c.is_finite_set() {
        Finiteness::Finite => {
            attempts.push(Attempt {
                hypothesis: Hypothesis::FiniteSet,
                holds: true,
                detail: "I is cofinite and U_i = [1, d_i - 1] from some index on".into(),
            });
            return Ok(Classification {
                verdict: Verdict::FiniteSet,
                rule_fired: Some(Hypothesis::FiniteSet),
                margin: Margin::default(),
                attempts,
                notes,
            });
        }
        Finiteness::Infinite => attempts.push(Attempt {
            hypothesis: Hypothesis::FiniteSet,
            holds: false,
            detail: "A is infinite".into(),
        }),
        Finiteness::Unknown => attempts.push(Attempt {
            hypothesis: Hypothesis::FiniteSet,
            holds: false,
            detail: "finiteness undecided".into(),
        }),
    }

    match convergence_by_bounded_quotients(c, options.delta.as_ref(), options.k_window) {
        Ok(mut cl) => {
            attempts.append(&mut cl.attempts);
            notes.append(&mut cl.notes);
            if cl.verdict != Verdict::Inconclusive {
                return Ok(Classification { attempts, notes, ..cl });
            }
        }
        Err(Error::MissingBoundHint) => notes.push("no declared quotient bound; bounded-quotient test skipped".into()),
        Err(e) => return Err(e),
    }

    match divergence_by_unbounded_quotients(c, options.i_window) {
        Ok(mut cl) => {
            attempts.append(&mut cl.attempts);
            notes.append(&mut cl.notes);
            if cl.verdict != Verdict::Inconclusive {
                return Ok(Classification { attempts, notes, ..cl });
            }
        }
        Err(e) => notes.push(format!("unbounded-quotient test not applicable: {e}")),
    }
    Ok(Classification::inconclusive(attempts, notes))
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::gadic::{Extension, QuotientSequence};
    use crate::index_set::IndexSet;
    use crate::missing_digits::fixed_bits_rule;

    fn q(n: u32, d: u32) -> Rational {
        ratio(n.into(), d.into())
    }

    fn bounded(d: u64, index_set: IndexSet, forbidden: DigitSet) -> DigitConstraint {
        DigitConstraint::uniform(QuotientSequence::constant(d).unwrap().with_bound_hint(d).unwrap(), index_set, forbidden)
            .unwrap()
    }

    fn kempner() -> DigitConstraint {
        bounded(10, IndexSet::All, DigitSet::listed([9]))
    }

    fn power2_no_zero() -> DigitConstraint {
        DigitConstraint::uniform(QuotientSequence::power(2).unwrap(), IndexSet::All, DigitSet::listed([0])).unwrap()
    }

    #[test]
    fn kempner_converges() {
        let cl = convergence_by_bounded_quotients(&kempner(), None, 2000).unwrap();
        assert_eq!(cl.verdict, Verdict::Convergent);
        assert_eq!(cl.rule_fired, Some(Hypothesis::BoundedConvergence));
        assert_eq!(cl.margin.delta, Some(q(1, 2)));
        // (k + 1) log(10/9) >= 1.5 log k from k = 57 on; I(k) = k + 1 exactly,
        // so the certificate and the window agree.
        assert_eq!(cl.margin.certified_from, Some(BigUint::from(57u32)));
        assert_eq!(cl.margin.window_holds_from, Some(57));
        assert!(cl.margin.window_slack.unwrap() > 0.0);
    }

    #[test]
    fn div_log_diverges_at_two_fifths() {
        let c = bounded(2, IndexSet::PowersOf(4), DigitSet::listed([0]));
        let cl = convergence_by_bounded_quotients(&c, None, 10_000).unwrap();
        assert_eq!(cl.verdict, Verdict::Divergent);
        assert_eq!(cl.rule_fired, Some(Hypothesis::BoundedDivergence));
        assert_eq!(cl.margin.delta, Some(q(2, 5)));
        // 2^{5(j+1)} <= 4^{3j} first at j = 5.
        assert_eq!(cl.margin.certified_from, Some(BigUint::from(1024u32)));
        assert!(cl.margin.window_holds_from.unwrap() <= 1024);
        // δ = 1/2 is exactly on the boundary 4^{q-p} = 2^q.
        let cl = convergence_by_bounded_quotients(&c, Some(&q(1, 2)), 100).unwrap();
        assert_eq!(cl.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn log2_boundary_is_inconclusive() {
        let c = bounded(2, IndexSet::PowersOf(2), DigitSet::listed([0]));
        let cl = convergence_by_bounded_quotients(&c, None, 1000).unwrap();
        assert_eq!(cl.verdict, Verdict::Inconclusive);
        assert_eq!(cl.rule_fired, None);
        assert_eq!(cl.attempts.len(), 2);
        assert!(!cl.notes.is_empty());
        for delta in [q(1, 100), q(99, 100)] {
            let cl = convergence_by_bounded_quotients(&c, Some(&delta), 100).unwrap();
            assert_eq!(cl.verdict, Verdict::Inconclusive);
        }
    }

    #[test]
    fn finite_index_set_diverges_with_bound() {
        let c = bounded(10, IndexSet::explicit([0, 3]), DigitSet::listed([0]));
        let cl = convergence_by_bounded_quotients(&c, Some(&q(1, 2)), 100).unwrap();
        assert_eq!(cl.verdict, Verdict::Divergent);
        // k^{1} >= 10^{2*2}.
        assert_eq!(cl.margin.certified_from, Some(BigUint::from(10_000u32)));
    }

    #[test]
    fn bounded_test_errors() {
        assert!(matches!(
            convergence_by_bounded_quotients(&power2_no_zero(), None, 10),
            Err(Error::MissingBoundHint)
        ));
        for bad in [q(0, 1), q(1, 1), q(3, 2)] {
            assert!(matches!(
                convergence_by_bounded_quotients(&kempner(), Some(&bad), 10),
                Err(Error::InvalidDelta(_))
            ));
        }
    }

    #[test]
    fn power2_constants() {
        let cl = divergence_by_unbounded_quotients(&power2_no_zero(), 100).unwrap();
        assert_eq!(cl.verdict, Verdict::Divergent);
        assert_eq!(cl.rule_fired, Some(Hypothesis::UnboundedDivergence));
        assert_eq!(cl.margin.i0, Some(2));
        assert_eq!(cl.margin.delta, Some(q(3, 16)));
        assert_eq!(cl.margin.tail_at_i0, Some(q(1, 4)));
        assert!(cl.margin.tail_exact);
        assert_eq!(cl.margin.series_sum, Some(q(1, 1)));
    }

    #[test]
    fn unbounded_test_failures() {
        let cl = divergence_by_unbounded_quotients(&kempner(), 100).unwrap();
        assert_eq!(cl.verdict, Verdict::Inconclusive);
        assert!(!cl.attempts[0].holds);
        let full = DigitConstraint::uniform(QuotientSequence::power(2).unwrap(), IndexSet::All, DigitSet::NonZero).unwrap();
        assert!(matches!(divergence_by_unbounded_quotients(&full, 10), Err(Error::SetIsFinite)));
        // Factorial quotients over all positions: sum 1/(i+2) diverges.
        let fact = DigitConstraint::uniform(QuotientSequence::factorial(), IndexSet::All, DigitSet::listed([0])).unwrap();
        assert_eq!(divergence_by_unbounded_quotients(&fact, 10).unwrap().verdict, Verdict::Inconclusive);
    }

    #[test]
    fn sparse_tails_use_enclosures() {
        // Power(2) over positions 1, 2, 4, 8, ...: tails 1/4 + 1/8 + 1/32 + ...
        let c = DigitConstraint::uniform(QuotientSequence::power(2).unwrap(), IndexSet::PowersOf(2), DigitSet::listed([0]))
            .unwrap();
        let cl = divergence_by_unbounded_quotients(&c, 100).unwrap();
        assert_eq!(cl.verdict, Verdict::Divergent);
        assert_eq!(cl.margin.i0, Some(1));
        assert_eq!(cl.margin.delta, Some(q(1, 2)));
        assert!(!cl.margin.tail_exact);
        assert!(cl.margin.tail_at_i0.clone().unwrap() < q(1, 2));

        // Factorial quotients over powers of 2: 1/3 + 1/4 + 1/6 + 1/10 + 1/18 + ...
        // Tails: about 0.96 at 1, 0.63 at 2, 0.38 at 4.
        let c = DigitConstraint::uniform(QuotientSequence::factorial(), IndexSet::PowersOf(2), DigitSet::listed([0]))
            .unwrap();
        let cl = divergence_by_unbounded_quotients(&c, 100).unwrap();
        assert_eq!(cl.verdict, Verdict::Divergent);
        assert_eq!(cl.margin.i0, Some(4));
        assert_eq!(cl.margin.delta, Some(q(1, 4)));
    }

    #[test]
    fn periodic_tail_with_override() {
        let mut overrides = BTreeMap::new();
        overrides.insert(1, DigitSet::listed([0, 1, 2]));
        let c = DigitConstraint::new(
            QuotientSequence::power(2).unwrap(),
            IndexSet::Arithmetic { first: 1, step: 2 },
            DigitSet::listed([0]),
            overrides,
        )
        .unwrap();
        // Terms: i = 1: 3/4, i = 3: 1/16, i = 5: 1/64, ...; tail(1) = 3/4 + 1/12.
        let cl = divergence_by_unbounded_quotients(&c, 100).unwrap();
        assert_eq!(cl.margin.series_sum, Some(q(3, 4) + q(1, 12)));
        assert_eq!(cl.margin.i0, Some(3));
        assert_eq!(cl.margin.tail_at_i0, Some(q(1, 12)));
        assert_eq!(cl.margin.delta, Some(q(1, 8)));
    }

    #[test]
    fn classify_dispatch() {
        let cl = classify(&kempner());
        assert_eq!(cl.verdict, Verdict::Convergent);
        assert_eq!(cl.attempts[0].hypothesis, Hypothesis::FiniteSet);

        let cl = classify(&power2_no_zero());
        assert_eq!(cl.verdict, Verdict::Divergent);
        assert_eq!((cl.margin.i0, cl.margin.delta.clone()), (Some(2), Some(q(3, 16))));

        let bits = BTreeMap::new();
        let fb = fixed_bits_rule(IndexSet::PowersOf(2), 0, &bits).unwrap();
        let cl = classify(&fb);
        assert_eq!(cl.verdict, Verdict::Inconclusive);
        assert_eq!(cl.rule_fired, None);
        let tags: Vec<_> = cl.attempts.iter().map(|a| a.hypothesis).collect();
        assert_eq!(
            tags,
            [
                Hypothesis::FiniteSet,
                Hypothesis::BoundedConvergence,
                Hypothesis::BoundedDivergence,
                Hypothesis::UnboundedDivergence
            ]
        );

        let finite = bounded(10, IndexSet::complement(IndexSet::explicit([0, 1])), DigitSet::NonZero);
        let cl = classify(&finite);
        assert_eq!(cl.verdict, Verdict::FiniteSet);
        assert_eq!(cl.rule_fired, Some(Hypothesis::FiniteSet));
    }

    #[test]
    fn classification_ignores_how_quotients_are_written() {
        let explicit = DigitConstraint::uniform(
            QuotientSequence::explicit(vec![10], Extension::RepeatLast).unwrap().with_bound_hint(10).unwrap(),
            IndexSet::All,
            DigitSet::listed([9]),
        )
        .unwrap();
        assert_eq!(classify(&explicit), classify(&kempner()));
        let explicit = DigitConstraint::uniform(
            QuotientSequence::explicit(vec![2, 2], Extension::Cycle).unwrap().with_bound_hint(2).unwrap(),
            IndexSet::PowersOf(4),
            DigitSet::listed([0]),
        )
        .unwrap();
        assert_eq!(classify(&explicit), classify(&bounded(2, IndexSet::PowersOf(4), DigitSet::listed([0]))));
    }
}
