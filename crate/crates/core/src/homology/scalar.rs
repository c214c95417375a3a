use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

/// Integer types usable as matrix entries during Smith reduction.
///
/// Fixed-width types report overflow through the checked operations; the
/// reduction then restarts over [`BigInt`], which never overflows.
pub trait SnfScalar: Clone + Debug + Display + PartialEq + Ord + Integer + Signed + Send + Sync {
    /// `self - factor * other`, or `None` on overflow.
    fn checked_mul_sub(&self, factor: &Self, other: &Self) -> Option<Self>;

    fn to_bigint(&self) -> BigInt;

    #[inline]
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
}

macro_rules! fixed_width_scalar {
    ($($t:ty),*) => {$(
        impl SnfScalar for $t {
            #[inline]
            fn checked_mul_sub(&self, factor: &Self, other: &Self) -> Option<Self> {
                factor.checked_mul(*other).and_then(|p| self.checked_sub(p))
            }

            fn to_bigint(&self) -> BigInt {
                BigInt::from(*self)
            }

            #[inline]
            fn is_unit(&self) -> bool {
                *self == 1 || *self == -1
            }
        }
    )*};
}

fixed_width_scalar!(i32, i64, i128);

impl SnfScalar for BigInt {
    fn checked_mul_sub(&self, factor: &Self, other: &Self) -> Option<Self> {
        Some(self - factor * other)
    }

    fn to_bigint(&self) -> BigInt {
        self.clone()
    }

    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
}

/// Floor-free quotient used by the Euclidean steps: rounds toward zero.
#[inline]
pub(crate) fn quotient<T: SnfScalar>(a: &T, b: &T) -> T {
    debug_assert!(!b.is_zero());
    a.div_rem(b).0
}
