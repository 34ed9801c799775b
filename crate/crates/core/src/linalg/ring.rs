//! Integer arithmetic shared by the normal-form engines.
//!
//! The echelon code is generic so the enumeration hot loop can run it on
//! machine words. Every operation is checked: `None` means the result left
//! the exactly representable range and the caller must redo the work over
//! [`BigInt`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub trait Ring: Clone + Ord + Debug {
    fn zero_elem() -> Self;
    fn one_elem() -> Self;
    fn is_zero_elem(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn try_add(&self, other: &Self) -> Option<Self>;
    fn try_sub(&self, other: &Self) -> Option<Self>;
    fn try_mul(&self, other: &Self) -> Option<Self>;
    fn try_neg(&self) -> Option<Self>;
    /// Floor division; `other` is nonzero.
    fn try_div_floor(&self, other: &Self) -> Option<Self>;
    /// Exact division; `other` divides `self`.
    fn try_div_exact(&self, other: &Self) -> Option<Self>;
}

// Two bits of headroom keep negation, absolute value and floor division of
// any stored value free of overflow.
const I64_LIMIT: i64 = 1 << 61;

#[inline]
fn bounded(x: Option<i64>) -> Option<i64> {
    x.filter(|v| -I64_LIMIT < *v && *v < I64_LIMIT)
}

impl Ring for i64 {
    fn zero_elem() -> Self {
        0
    }
    fn one_elem() -> Self {
        1
    }
    fn is_zero_elem(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    #[inline]
    fn try_add(&self, other: &Self) -> Option<Self> {
        bounded(self.checked_add(*other))
    }
    #[inline]
    fn try_sub(&self, other: &Self) -> Option<Self> {
        bounded(self.checked_sub(*other))
    }
    #[inline]
    fn try_mul(&self, other: &Self) -> Option<Self> {
        bounded(self.checked_mul(*other))
    }
    fn try_neg(&self) -> Option<Self> {
        bounded(self.checked_neg())
    }
    fn try_div_floor(&self, other: &Self) -> Option<Self> {
        Some(Integer::div_floor(self, other))
    }
    fn try_div_exact(&self, other: &Self) -> Option<Self> {
        Some(self / other)
    }
}

impl Ring for BigInt {
    fn zero_elem() -> Self {
        Zero::zero()
    }
    fn one_elem() -> Self {
        BigInt::from(1)
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn try_add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn try_sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn try_mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn try_neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn try_div_floor(&self, other: &Self) -> Option<Self> {
        Some(Integer::div_floor(self, other))
    }
    fn try_div_exact(&self, other: &Self) -> Option<Self> {
        Some(self / other)
    }
}

/// Returns `(g, x, y)` with `x*a + y*b = g = gcd(a, b) >= 0`.
pub fn ext_gcd<T: Ring>(a: &T, b: &T) -> Option<(T, T, T)> {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (T::one_elem(), T::zero_elem());
    let (mut old_t, mut t) = (T::zero_elem(), T::one_elem());
    while !r.is_zero_elem() {
        let q = old_r.try_div_floor(&r)?;
        let next_r = old_r.try_sub(&q.try_mul(&r)?)?;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = old_s.try_sub(&q.try_mul(&s)?)?;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = old_t.try_sub(&q.try_mul(&t)?)?;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_neg() {
        Some((old_r.try_neg()?, old_s.try_neg()?, old_t.try_neg()?))
    } else {
        Some((old_r, old_s, old_t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_gcd_signs() {
        for (a, b) in [(12i64, 18i64), (-12, 18), (12, -18), (0, 5), (5, 0), (-7, 0), (1, 1)] {
            let (g, x, y) = ext_gcd(&a, &b).unwrap();
            assert!(g >= 0);
            assert_eq!(x * a + y * b, g);
            assert_eq!(g, a.gcd(&b));
        }
    }

    #[test]
    fn i64_overflow_is_reported() {
        assert_eq!(Ring::try_mul(&(1i64 << 40), &(1i64 << 40)), None);
        assert_eq!(Ring::try_add(&(I64_LIMIT - 1), &1), None);
        assert_eq!(Ring::try_mul(&3i64, &4), Some(12));
    }
}
