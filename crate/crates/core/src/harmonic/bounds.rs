use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::missing_digits::DigitConstraint;
use crate::{ratio, Rational};

/// `d * sum_{k=k0}^{k_max} (1 - 1/d)^{I(k)}` with `d` the declared quotient
/// bound.
pub fn tail_upper_estimate(c: &DigitConstraint, k0: usize, k_max: usize) -> Result<Rational> {
    let d = c.sequence().bound_hint().ok_or(Error::MissingBoundHint)?;
    if k0 > k_max {
        return Err(Error::InputOutOfRange(format!("k0 = {k0} exceeds K = {k_max}")));
    }
    let d_big = BigUint::from(d);
    let r = ratio(&d_big - 1u32, d_big.clone());
    let index_set = c.index_set();
    let mut total = Rational::zero();
    for k in k0..=k_max {
        let exp = i32::try_from(index_set.count(k)).map_err(|_| Error::InputOutOfRange(format!("k = {k}")))?;
        total += r.pow(exp);
    }
    Ok(total * ratio(d_big, BigUint::one()))
}

/// `prod_{i <= k, i ∈ I} (1 - |U_i| / d_i)`.
pub fn survival_product(c: &DigitConstraint, k: usize) -> Rational {
    let seq = c.sequence();
    c.index_set()
        .members_in(0, k)
        .into_iter()
        .fold(Rational::one(), |acc, i| {
            let d = seq.quotient(i);
            acc * ratio(&d - c.forbidden_size(i), d)
        })
}

/// Lower estimate `1/2 * prod_{i <= k, i ∈ I} (1 - |U_i| / d_i)` for
/// `sum_{a ∈ A_k} 1/a`.
pub fn block_lower_estimate(c: &DigitConstraint, k: usize) -> Rational {
    survival_product(c, k) / Rational::from_integer(2.into())
}

fn check_unit_interval(xs: &[Rational]) -> Result<()> {
    for x in xs {
        if x.is_negative() || *x >= Rational::one() {
            return Err(Error::InputOutOfRange(format!("{x} is outside [0, 1)")));
        }
    }
    Ok(())
}

/// `1 - sum x_i`, a lower bound for `prod (1 - x_i)` when each `x_i ∈ [0, 1)`.
pub fn weierstrass_lower(xs: &[Rational]) -> Result<Rational> {
    check_unit_interval(xs)?;
    Ok(xs.iter().fold(Rational::one(), |acc, x| acc - x))
}

/// `prod (1 - x_i)` for `x_i ∈ [0, 1)`.
pub fn one_minus_product(xs: &[Rational]) -> Result<Rational> {
    check_unit_interval(xs)?;
    Ok(xs.iter().fold(Rational::one(), |acc, x| acc * (Rational::one() - x)))
}

/// `|A ∩ [1, n]| / n`.
pub fn density(c: &DigitConstraint, n: &BigUint) -> Result<Rational> {
    if n.is_zero() {
        return Err(Error::NonPositiveInput);
    }
    Ok(ratio(c.count_upto(n), n.clone()))
}
