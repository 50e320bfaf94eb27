use std::fmt;
use std::hash::Hash;

use num_traits::{One, Zero};

use super::Rational;

/// Coefficient domain of a [`Poly`](super::Poly).
///
/// Both coefficient types used in this crate ([`Rational`] and
/// [`RatFunc`](super::RatFunc)) are fields, so division is part of the
/// contract. Methods take references to avoid the cloning that operator
/// traits by value would force on big-number coefficients.
pub trait Field: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_rational(r: &Rational) -> Self;

    fn div_ref(&self, other: &Self) -> Option<Self> {
        other.inv().map(|inv| self.mul_ref(&inv))
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_one(&self) -> bool {
        One::is_one(self)
    }

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn neg_ref(&self) -> Self {
        -self
    }

    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn div_ref(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            None
        } else {
            Some(self / other)
        }
    }
}
