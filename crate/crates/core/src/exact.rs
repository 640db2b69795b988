//! Integer rings with overflow detection.
//!
//! Every exact kernel in the crate (rank, null space, double description,
//! simplex) is written once over [`ExactInt`] and run first on machine
//! integers. A `None` from any checked operation means the machine width was
//! exceeded; callers then rerun the same kernel over [`BigInt`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub trait ExactInt: Clone + Debug + PartialEq + Eq + PartialOrd + Ord + Send + Sync {
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_bigint(v: &BigInt) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;
    fn add(&self, rhs: &Self) -> Option<Self>;
    fn sub(&self, rhs: &Self) -> Option<Self>;
    fn mul(&self, rhs: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// Division that is known to be exact.
    fn div_exact(&self, rhs: &Self) -> Self;
    /// Non-negative gcd.
    fn gcd(&self, rhs: &Self) -> Self;
    fn signum(&self) -> i8;

    fn is_zero(&self) -> bool {
        self.signum() == 0
    }
    fn is_positive(&self) -> bool {
        self.signum() > 0
    }
    fn is_negative(&self) -> bool {
        self.signum() < 0
    }
    fn abs(&self) -> Option<Self> {
        if self.is_negative() {
            self.neg()
        } else {
            Some(self.clone())
        }
    }
}

macro_rules! machine_int {
    ($t:ty) => {
        impl ExactInt for $t {
            fn zero() -> Self {
                0
            }
            fn from_i64(v: i64) -> Self {
                v as $t
            }
            fn from_bigint(v: &BigInt) -> Option<Self> {
                v.to_i128().and_then(|x| <$t>::try_from(x).ok())
            }
            fn to_bigint(&self) -> BigInt {
                BigInt::from(*self)
            }
            fn add(&self, rhs: &Self) -> Option<Self> {
                self.checked_add(*rhs)
            }
            fn sub(&self, rhs: &Self) -> Option<Self> {
                self.checked_sub(*rhs)
            }
            fn mul(&self, rhs: &Self) -> Option<Self> {
                self.checked_mul(*rhs)
            }
            fn neg(&self) -> Option<Self> {
                self.checked_neg()
            }
            fn div_exact(&self, rhs: &Self) -> Self {
                debug_assert_eq!(self % rhs, 0, "inexact division");
                self / rhs
            }
            fn gcd(&self, rhs: &Self) -> Self {
                // i*::MIN has no positive counterpart; callers only reach it after an
                // overflow would already have been reported.
                Integer::gcd(self, rhs)
            }
            fn signum(&self) -> i8 {
                <$t>::signum(*self) as i8
            }
        }
    };
}

machine_int!(i64);
machine_int!(i128);

impl ExactInt for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn add(&self, rhs: &Self) -> Option<Self> {
        Some(self + rhs)
    }
    fn sub(&self, rhs: &Self) -> Option<Self> {
        Some(self - rhs)
    }
    fn mul(&self, rhs: &Self) -> Option<Self> {
        Some(self * rhs)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % rhs)), "inexact division");
        self / rhs
    }
    fn gcd(&self, rhs: &Self) -> Self {
        Integer::gcd(self, rhs)
    }
    fn signum(&self) -> i8 {
        if Signed::is_positive(self) {
            1
        } else if Signed::is_negative(self) {
            -1
        } else {
            0
        }
    }
}

/// Inner product with overflow detection.
pub fn dot<T: ExactInt>(a: &[T], b: &[T]) -> Option<T> {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc = acc.add(&x.mul(y)?)?;
    }
    Some(acc)
}

/// Inner product of small integer vectors, accumulated in `i128`.
pub fn dot_i64(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

/// Divides `v` by the gcd of its entries. Zero vectors are left untouched.
pub fn make_primitive<T: ExactInt>(v: &mut [T]) {
    let mut g = T::zero();
    for x in v.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
        }
    }
    if g.is_zero() || g == T::from_i64(1) {
        return;
    }
    for x in v.iter_mut() {
        *x = x.div_exact(&g);
    }
}

pub fn convert<S: ExactInt, T: ExactInt>(v: &[S]) -> Option<Vec<T>> {
    v.iter().map(|x| T::from_bigint(&x.to_bigint())).collect()
}

/// Scales a rational vector to the primitive integer vector pointing the same way.
pub fn rational_to_primitive(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut out: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    make_primitive(&mut out);
    out
}

pub fn bigints_to_i64(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.to_i64()).collect()
}

pub fn rational_from_i64(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checked_ops_report_overflow() {
        assert_eq!(ExactInt::mul(&i64::MAX, &2), None);
        assert_eq!(ExactInt::add(&i128::MAX, &1), None);
        assert_eq!(
            ExactInt::mul(&BigInt::from(i64::MAX), &BigInt::from(2)).unwrap(),
            BigInt::from(i64::MAX) * 2
        );
    }

    #[test]
    fn primitive_scaling() {
        let mut v = vec![4i64, -6, 0, 10];
        make_primitive(&mut v);
        assert_eq!(v, vec![2, -3, 0, 5]);
        let r = [
            BigRational::new(1.into(), 2.into()),
            BigRational::new((-1).into(), 3.into()),
        ];
        assert_eq!(rational_to_primitive(&r), vec![BigInt::from(3), BigInt::from(-2)]);
    }
}
