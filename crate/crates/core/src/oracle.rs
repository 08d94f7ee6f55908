//! Brute-force reference: decode every integer in a range by repeated
//! division and test the digit condition directly.
//!
//! Nothing here goes through the counting, digit-DP or enumeration code;
//! agreement with those paths is what the tests check.

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, Zero};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::missing_digits::DigitConstraint;
use crate::Rational;

/// Largest range size the oracle accepts.
pub const RANGE_CAP: u64 = 10_000_000;

const CHUNK: u64 = 1 << 15;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub lo: u64,
    pub hi: u64,
    pub members: u64,
    pub sum: Rational,
    /// SHA-256 over the ascending member list, one decimal per line.
    pub checksum: String,
}

fn check_range(lo: u64, hi: u64) -> Result<()> {
    if lo == 0 {
        return Err(Error::NonPositiveInput);
    }
    if hi >= lo && hi - lo >= RANGE_CAP {
        return Err(Error::RangeTooLarge { lo, hi, cap: RANGE_CAP });
    }
    Ok(())
}

fn passes(c: &DigitConstraint, mut n: u64) -> bool {
    let seq = c.sequence();
    let index_set = c.index_set();
    let mut i = 0;
    while n > 0 {
        let digit = match seq.quotient_u64(i) {
            Some(d) => {
                let r = n % d;
                n /= d;
                r
            }
            None => std::mem::take(&mut n),
        };
        if index_set.contains(i) {
            let forbidden = c.overrides().get(&i).unwrap_or(c.default_forbidden());
            if forbidden.contains_u64(digit) {
                return false;
            }
        }
        i += 1;
    }
    true
}

/// Members of `A ∩ [lo, hi]`, ascending.
pub fn oracle_members(c: &DigitConstraint, lo: u64, hi: u64) -> Result<Vec<u64>> {
    oracle_members_with(c, lo, hi, Exec::default())
}

pub fn oracle_members_with(c: &DigitConstraint, lo: u64, hi: u64, exec: Exec) -> Result<Vec<u64>> {
    check_range(lo, hi)?;
    if hi < lo {
        return Ok(Vec::new());
    }
    let parts = exec.map_chunks(lo, hi, CHUNK, |a, b| (a..=b).filter(|&n| passes(c, n)).collect::<Vec<_>>());
    Ok(parts.concat())
}

fn sum_reciprocals(values: &[u64]) -> (BigUint, BigUint) {
    match values {
        [] => (BigUint::zero(), BigUint::one()),
        [a] => (BigUint::one(), BigUint::from(*a)),
        _ => {
            let (l, r) = values.split_at(values.len() / 2);
            let (a, b) = sum_reciprocals(l);
            let (c, d) = sum_reciprocals(r);
            (a * &d + c * &b, b * d)
        }
    }
}

fn to_rational(num: BigUint, den: BigUint) -> Rational {
    if num.bits() + den.bits() <= 1 << 16 {
        Ratio::new(BigInt::from(num), BigInt::from(den))
    } else {
        Ratio::new_raw(BigInt::from(num), BigInt::from(den))
    }
}

/// `sum 1/a` over `A ∩ [lo, hi]`. Large results may be returned
/// unreduced; comparisons remain exact.
pub fn oracle_sum(c: &DigitConstraint, lo: u64, hi: u64) -> Result<Rational> {
    let members = oracle_members(c, lo, hi)?;
    let (num, den) = sum_reciprocals(&members);
    Ok(to_rational(num, den))
}

pub fn oracle_report(c: &DigitConstraint, lo: u64, hi: u64) -> Result<OracleReport> {
    let members = oracle_members(c, lo, hi)?;
    let (num, den) = sum_reciprocals(&members);
    let mut hasher = Sha256::new();
    for m in &members {
        hasher.update(m.to_string().as_bytes());
        hasher.update(b"\n");
    }
    let checksum = hasher.finalize().iter().map(|b| format!("{b:02x}")).collect();
    Ok(OracleReport {
        lo,
        hi,
        members: members.len() as u64,
        sum: to_rational(num, den),
        checksum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadic::QuotientSequence;
    use crate::index_set::IndexSet;
    use crate::missing_digits::DigitSet;

    fn kempner() -> DigitConstraint {
        DigitConstraint::uniform(QuotientSequence::constant(10).unwrap(), IndexSet::All, DigitSet::listed([9])).unwrap()
    }

    fn power2_no_zero() -> DigitConstraint {
        DigitConstraint::uniform(QuotientSequence::power(2).unwrap(), IndexSet::All, DigitSet::listed([0])).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Ratio::new(n.into(), d.into())
    }

    #[test]
    fn members_examples() {
        assert_eq!(
            oracle_members(&kempner(), 1, 20).unwrap(),
            [1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 13, 14, 15, 16, 17, 18, 20]
        );
        assert_eq!(oracle_members(&power2_no_zero(), 1, 8).unwrap(), [1, 3, 5, 7]);
        assert!(oracle_members(&kempner(), 9, 9).unwrap().is_empty());
        assert!(oracle_members(&kempner(), 5, 4).unwrap().is_empty());
    }

    #[test]
    fn sum_examples() {
        assert_eq!(oracle_sum(&kempner(), 1, 8).unwrap(), q(761, 280));
        assert_eq!(oracle_sum(&kempner(), 9, 9).unwrap(), q(0, 1));
        assert_eq!(oracle_sum(&power2_no_zero(), 2, 7).unwrap(), q(71, 105));
    }

    #[test]
    fn range_checks() {
        assert!(matches!(oracle_members(&kempner(), 0, 5), Err(Error::NonPositiveInput)));
        assert!(matches!(
            oracle_members(&kempner(), 1, RANGE_CAP + 1),
            Err(Error::RangeTooLarge { .. })
        ));
        assert!(oracle_members(&kempner(), 1, RANGE_CAP).is_ok());
    }

    #[test]
    fn report_is_consistent_and_stable() {
        let a = oracle_report(&kempner(), 1, 5000).unwrap();
        let b = oracle_report(&kempner(), 1, 5000).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.members, oracle_members(&kempner(), 1, 5000).unwrap().len() as u64);
        assert_eq!(a.checksum.len(), 64);
        let seq = oracle_members_with(&kempner(), 1, 5000, Exec::Sequential).unwrap();
        assert_eq!(seq.len() as u64, a.members);
    }

    #[test]
    fn quotients_beyond_u64() {
        // Power(2): d_10 = 2^11 fits, but the decode must also stop cleanly
        // when a quotient overflows; u64::MAX has top digit at position 10.
        let c = power2_no_zero();
        let top = u64::MAX;
        assert_eq!(oracle_members(&c, top, top).unwrap().len() as u64, passes(&c, top) as u64);
    }
}
