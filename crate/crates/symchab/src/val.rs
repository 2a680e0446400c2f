//! Rational valuations extended by infinity, and the p-adic valuation on Q.

use crate::{is_prime, Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

/// A valuation value: a rational number or +infinity (the valuation of 0).
///
/// Ordering and addition follow the usual conventions: infinity is larger than
/// every finite value and absorbs under addition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Val {
    Finite(BigRational),
    Infinity,
}

impl Val {
    pub fn zero() -> Self {
        Val::Finite(BigRational::zero())
    }

    pub fn from_integer(n: i64) -> Self {
        Val::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Val::Finite(_))
    }

    /// The finite value, if any.
    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Val::Finite(q) => Some(q),
            Val::Infinity => None,
        }
    }
}

impl PartialOrd for Val {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Val {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Val::Infinity, Val::Infinity) => Ordering::Equal,
            (Val::Infinity, Val::Finite(_)) => Ordering::Greater,
            (Val::Finite(_), Val::Infinity) => Ordering::Less,
            (Val::Finite(a), Val::Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for Val {
    type Output = Val;
    fn add(self, rhs: Val) -> Val {
        match (self, rhs) {
            (Val::Finite(a), Val::Finite(b)) => Val::Finite(a + b),
            _ => Val::Infinity,
        }
    }
}

impl Add<&Val> for &Val {
    type Output = Val;
    fn add(self, rhs: &Val) -> Val {
        match (self, rhs) {
            (Val::Finite(a), Val::Finite(b)) => Val::Finite(a + b),
            _ => Val::Infinity,
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Finite(q) => write!(f, "{q}"),
            Val::Infinity => write!(f, "inf"),
        }
    }
}

/// Exponent of `p` in a nonzero integer.
fn int_val(n: &BigInt, p: u64) -> BigInt {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = BigInt::zero();
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

/// The p-adic valuation of a rational number, with `val_p(0) = Infinity`.
///
/// `p` must be prime; composite `p` would not give a valuation at all, so it is
/// rejected rather than silently misused.
pub fn val_p(x: &BigRational, p: u64) -> Result<Val> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if x.is_zero() {
        return Ok(Val::Infinity);
    }
    let v = int_val(x.numer(), p) - int_val(x.denom(), p);
    Ok(Val::Finite(BigRational::from_integer(v)))
}

/// Convenience: the p-adic valuation of an integer given as `i64`.
pub fn val_p_int(n: i64, p: u64) -> Result<Val> {
    val_p(&BigRational::from_integer(BigInt::from(n)), p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn valuation_of_integers_and_fractions() {
        assert_eq!(val_p(&q(8, 1), 2).unwrap(), Val::from_integer(3));
        assert_eq!(val_p(&q(1, 2), 2).unwrap(), Val::from_integer(-1));
        assert_eq!(val_p(&q(12, 5), 2).unwrap(), Val::from_integer(2));
        assert_eq!(val_p(&q(9, 4), 3).unwrap(), Val::from_integer(2));
        assert_eq!(val_p(&q(7, 1), 5).unwrap(), Val::from_integer(0));
    }

    #[test]
    fn valuation_of_zero_is_infinite() {
        assert_eq!(val_p(&q(0, 1), 2).unwrap(), Val::Infinity);
    }

    #[test]
    fn composite_p_rejected() {
        assert_eq!(val_p(&q(3, 1), 6), Err(Error::NotPrime(6)));
        assert_eq!(val_p(&q(3, 1), 1), Err(Error::NotPrime(1)));
    }

    #[test]
    fn ordering_and_addition() {
        let two = Val::from_integer(2);
        let three = Val::from_integer(3);
        assert!(two < three);
        assert!(three < Val::Infinity);
        assert_eq!(two.clone() + three, Val::from_integer(5));
        assert_eq!(two + Val::Infinity, Val::Infinity);
    }
}
