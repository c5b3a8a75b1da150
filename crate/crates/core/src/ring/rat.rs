//! Rational coefficients.
//!
//! `Rat` is `num_rational::BigRational`, which keeps every value in lowest
//! terms with a positive denominator. The helpers here cover the few things
//! the rest of the crate needs on top of that.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical text: `n` or `n/d`, sign on the numerator.
pub fn fmt_rat(c: &Rat) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Least common multiple of denominators.
pub fn denom_lcm<'a>(cs: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    cs.into_iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

/// Gcd of numerators (nonnegative); zero for an empty input.
pub fn numer_gcd<'a>(cs: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    cs.into_iter()
        .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
}

/// Positive rational `q` such that dividing every coefficient by `q` leaves
/// coprime integers.
pub fn content<'a>(cs: impl IntoIterator<Item = &'a Rat> + Clone) -> Rat {
    let l = denom_lcm(cs.clone());
    let g = cs
        .into_iter()
        .fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * (&l / c.denom()))));
    if g.is_zero() {
        Rat::one()
    } else {
        Rat::new(g.abs(), l)
    }
}

pub fn to_i64(c: &Rat) -> Option<i64> {
    if c.denom().is_one() {
        i64::try_from(c.numer()).ok()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms() {
        let c = ratio(6, -4);
        assert_eq!(fmt_rat(&c), "-3/2");
        assert_eq!(fmt_rat(&ratio(0, 5)), "0");
        assert!(c.denom() > &BigInt::zero());
    }

    #[test]
    fn content_of_mixed() {
        let cs = [ratio(2, 3), ratio(4, 9)];
        assert_eq!(content(cs.iter()), ratio(2, 9));
    }
}
