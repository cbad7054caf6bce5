//! Integer types the double description engine can run over.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

pub(crate) trait DdScalar: Clone + Ord + Send + Sync + std::fmt::Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn from_bigint(v: &BigInt) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;
    fn mul(&self, rhs: &Self) -> Option<Self>;
    fn add(&self, rhs: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    fn gcd(&self, rhs: &Self) -> Self;
    fn div_exact(&self, rhs: &Self) -> Self;
}

/// Fixed-width fast paths. Every operation is checked; `MIN` is treated as
/// overflow so that negation and `gcd` stay total.
macro_rules! fixed_width {
    ($t:ty, $to:ident) => {
        impl DdScalar for $t {
            fn zero() -> Self {
                0
            }
            fn is_zero(&self) -> bool {
                *self == 0
            }
            fn is_one(&self) -> bool {
                *self == 1
            }
            fn is_positive(&self) -> bool {
                *self > 0
            }
            fn is_negative(&self) -> bool {
                *self < 0
            }
            fn from_bigint(v: &BigInt) -> Option<Self> {
                v.$to().filter(|&x| x != <$t>::MIN)
            }
            fn to_bigint(&self) -> BigInt {
                BigInt::from(*self)
            }
            fn mul(&self, rhs: &Self) -> Option<Self> {
                self.checked_mul(*rhs).filter(|&x| x != <$t>::MIN)
            }
            fn add(&self, rhs: &Self) -> Option<Self> {
                self.checked_add(*rhs).filter(|&x| x != <$t>::MIN)
            }
            fn neg(&self) -> Option<Self> {
                self.checked_neg()
            }
            fn gcd(&self, rhs: &Self) -> Self {
                Integer::gcd(self, rhs)
            }
            fn div_exact(&self, rhs: &Self) -> Self {
                self / rhs
            }
        }
    };
}

fixed_width!(i32, to_i32);
fixed_width!(i64, to_i64);

impl DdScalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        num_traits::One::is_one(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn mul(&self, rhs: &Self) -> Option<Self> {
        Some(self * rhs)
    }
    fn add(&self, rhs: &Self) -> Option<Self> {
        Some(self + rhs)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn gcd(&self, rhs: &Self) -> Self {
        Integer::gcd(self, rhs)
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        self / rhs
    }
}

/// Divides a nonzero vector by the gcd of its entries.
pub(crate) fn make_primitive<S: DdScalar>(v: &mut [S]) {
    let g = v.iter().fold(S::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in v.iter_mut() {
        *x = x.div_exact(&g);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_width_overflow_is_reported() {
        let big = i64::MAX / 2 + 1;
        assert!(DdScalar::mul(&big, &2).is_none());
        assert!(DdScalar::add(&i32::MAX, &1).is_none());
        assert!(<i64 as DdScalar>::from_bigint(&BigInt::from(i64::MIN)).is_none());
        assert!(<i32 as DdScalar>::from_bigint(&BigInt::from(1i64 << 40)).is_none());
        assert_eq!(DdScalar::mul(&-3i32, &7), Some(-21));
    }

    #[test]
    fn primitive_vectors() {
        let mut v = vec![4i32, -6, 0];
        make_primitive(&mut v);
        assert_eq!(v, vec![2, -3, 0]);
        let mut w = vec![BigInt::from(5), BigInt::from(-10)];
        make_primitive(&mut w);
        assert_eq!(w, vec![BigInt::from(1), BigInt::from(-2)]);
    }
}
