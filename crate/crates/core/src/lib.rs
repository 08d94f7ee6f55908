//! Missing-digit sets in G-adic numeration and the convergence of their
//! harmonic series.
//!
//! A G-adic sequence `g_0 = 1, g_{k+1} = g_k d_k` gives every positive
//! integer a unique digit expansion `sum c_i g_i` with `0 <= c_i < d_i`.
//! Forbidding the digits `U_i` at positions `i ∈ I` carves out a set `A`;
//! this crate counts, enumerates and sums over `A` exactly, and decides
//! whether `sum_{a ∈ A} 1/a` converges when a certificate exists.

pub mod cli;
pub mod config;
pub mod error;
pub mod exec;
pub mod gadic;
pub mod harmonic;
pub mod index_set;
pub mod missing_digits;
pub mod oracle;
pub mod presets;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::Ratio;

pub use error::{Error, Result};
pub use exec::Exec;
pub use gadic::{Extension, Numeral, QuotientRule, QuotientSequence};
pub use index_set::{Growth, IndexSet};
pub use missing_digits::{fixed_bits, fixed_bits_rule, BlockCount, DigitConstraint, DigitSet, Finiteness};

/// Exact rational used for every sum and bound.
pub type Rational = num_rational::BigRational;

/// `num / den` in lowest terms. Panics on a zero denominator.
pub fn ratio(num: BigUint, den: BigUint) -> Rational {
    Ratio::new(BigInt::from(num), BigInt::from(den))
}

/// Orders two rationals by cross-multiplication.
///
/// Large sums are kept unreduced, and `Ratio`'s own ordering walks a
/// continued-fraction expansion whose cost explodes on such operands.
/// Two products are cheap by comparison.
pub fn cmp_exact(a: &Rational, b: &Rational) -> std::cmp::Ordering {
    let lhs = a.numer() * b.denom();
    let rhs = b.numer() * a.denom();
    if (a.denom().sign() == Sign::Minus) != (b.denom().sign() == Sign::Minus) {
        rhs.cmp(&lhs)
    } else {
        lhs.cmp(&rhs)
    }
}
