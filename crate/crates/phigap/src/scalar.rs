use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;

/// Exact integer scalar for the linear algebra core.
///
/// The crate-root aliases fix the scalar to arbitrary-precision [`BigInt`],
/// which never overflows. Fixed-width instantiations (`i64`) are valid for
/// inputs whose eliminations provably stay in range; every fused row
/// operation reports overflow through [`Scalar::combine`] instead of
/// wrapping, so a fixed-width run either returns the exact answer or fails
/// loudly and can be retried at arbitrary precision.
pub trait Scalar:
    num_integer::Integer
    + num_traits::Signed
    + num_traits::NumRef
    + Clone
    + Hash
    + Debug
    + Display
    + 'static
{
    fn from_i64(v: i64) -> Self;

    /// Round-trip out of a `BigInt`, `None` when the value does not fit.
    fn from_bigint(v: &BigInt) -> Option<Self>;

    /// `p * x - a * y`, `None` when the result does not fit the scalar.
    fn combine(p: &Self, x: &Self, a: &Self, y: &Self) -> Option<Self>;
}

impl Scalar for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }

    fn from_bigint(v: &BigInt) -> Option<Self> {
        i64::try_from(v).ok()
    }

    fn combine(p: &Self, x: &Self, a: &Self, y: &Self) -> Option<Self> {
        let wide = (*p as i128) * (*x as i128) - (*a as i128) * (*y as i128);
        i64::try_from(wide).ok()
    }
}

impl Scalar for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }

    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }

    fn combine(p: &Self, x: &Self, a: &Self, y: &Self) -> Option<Self> {
        Some(p * x - a * y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i64_combine_detects_overflow() {
        assert_eq!(Scalar::combine(&2i64, &3, &1, &1), Some(5));
        assert_eq!(Scalar::combine(&i64::MAX, &i64::MAX, &0, &0), None);
    }

    #[test]
    fn bigint_combine_is_total() {
        let big = BigInt::from(i64::MAX);
        let got = Scalar::combine(&big, &big, &BigInt::from(0), &BigInt::from(0)).unwrap();
        assert_eq!(got, &big * &big);
    }
}
