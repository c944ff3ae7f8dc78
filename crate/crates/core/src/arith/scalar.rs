//! The exact coefficient field used by every algebraic type in the crate.

use std::fmt::{self, Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, One, Signed, Zero};

/// An exact rational scalar.
///
/// All polynomial, factored and series types are generic over this trait.
/// The production instantiation is [`crate::Rat`] (`BigRational`); bounded
/// backends such as `Ratio<i128>` are useful in tests where inputs are small.
/// Anything needing the integer structure of a value (content extraction,
/// canonical printing) goes through [`Scalar::to_big`].
pub trait Scalar: Num + Signed + Clone + Ord + Debug + Display + Send + Sync + 'static {
    /// Reduced numerator and positive denominator.
    fn to_big(&self) -> (BigInt, BigInt);

    /// Builds `numer / denom`; `None` if the backend cannot hold the value.
    fn from_big(numer: BigInt, denom: BigInt) -> Option<Self>;

    fn from_int(v: i64) -> Self;

    fn is_integer(&self) -> bool {
        self.to_big().1.is_one()
    }

    /// Canonical `p/q` text; the denominator is always written.
    fn write_canonical(&self, f: &mut dyn fmt::Write) -> fmt::Result {
        let (n, d) = self.to_big();
        write!(f, "{n}/{d}")
    }

    fn canonical(&self) -> String {
        let mut s = String::new();
        self.write_canonical(&mut s).expect("writing to a String");
        s
    }
}

impl<T> Scalar for Ratio<T>
where
    T: Clone
        + Integer
        + Signed
        + FromPrimitive
        + Debug
        + Display
        + Send
        + Sync
        + 'static
        + Into<BigInt>
        + TryFrom<BigInt>,
{
    fn to_big(&self) -> (BigInt, BigInt) {
        (self.numer().clone().into(), self.denom().clone().into())
    }

    fn from_big(numer: BigInt, denom: BigInt) -> Option<Self> {
        if denom.is_zero() {
            return None;
        }
        let n = T::try_from(numer).ok()?;
        let d = T::try_from(denom).ok()?;
        Some(Ratio::new(n, d))
    }

    fn from_int(v: i64) -> Self {
        Ratio::from_integer(T::from_i64(v).expect("i64 fits the integer backend"))
    }
}

/// Parses `p`, `-p`, or `p/q` into a scalar.
pub fn parse_scalar<S: Scalar>(text: &str) -> Option<S> {
    let text = text.trim();
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    S::from_big(n, d)
}

pub(crate) fn big_to_scalar<S: Scalar>(v: &BigInt) -> S {
    S::from_big(v.clone(), BigInt::one()).expect("integer fits the scalar backend")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    #[test]
    fn canonical_text_always_has_denominator() {
        assert_eq!(Rat::from_int(3).canonical(), "3/1");
        assert_eq!(parse_scalar::<Rat>("-6/4").unwrap().canonical(), "-3/2");
        assert_eq!(Rat::zero().canonical(), "0/1");
    }

    #[test]
    fn bounded_backend_rejects_overflow() {
        let huge: BigInt = BigInt::from(i64::MAX) * 4;
        assert!(<Ratio<i64> as Scalar>::from_big(huge, BigInt::one()).is_none());
        assert!(parse_scalar::<Ratio<i64>>("1/0").is_none());
    }
}
