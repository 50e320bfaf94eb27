//! Rational functions in the parameter variables.

use std::fmt;

use num_traits::Zero;

use super::field::Field;
use super::gcd::gcd_poly;
use super::monomial::Var;
use super::poly::MultiPoly;
use super::{AlgebraError, Rational};

/// A reduced fraction `num / den` of polynomials.
///
/// Canonical form: `gcd(num, den) = 1`, `den` monic in graded-lex order and
/// zero is `0 / 1`. Equal functions therefore compare and hash equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RatFunc {
            num: p,
            den: MultiPoly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(MultiPoly::var(v))
    }

    pub fn numer(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Constant value, if this function has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.constant_term())
    }

    pub fn num_terms(&self) -> usize {
        self.num.num_terms() + self.den.num_terms()
    }

    fn reduce(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd_poly(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (
                    num.div_exact(&g).expect("gcd divides numerator"),
                    den.div_exact(&g).expect("gcd divides denominator"),
                )
            }
        };
        Self::normalized(num, den)
    }

    /// Make the denominator monic; assumes the fraction is already reduced.
    fn normalized(num: MultiPoly, den: MultiPoly) -> Self {
        let lc = den.leading_coeff().expect("nonzero denominator").clone();
        if Field::is_one(&lc) {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    /// Substitute a rational value for one variable.
    pub fn evaluate_at(&self, v: Var, value: &Rational) -> Result<Self, AlgebraError> {
        let num = self.num.evaluate(v, value);
        let den = self.den.evaluate(v, value);
        if den.is_zero() {
            return Err(AlgebraError::Pole {
                var: v.name(),
                value: value.to_string(),
            });
        }
        Ok(Self::reduce(num, den))
    }

    pub fn derivative(&self, v: Var) -> Self {
        let dn = self.num.derivative(v);
        if self.den.is_constant() {
            return Self::normalized(dn, self.den.clone());
        }
        let dd = self.den.derivative(v);
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Self::reduce(num, &self.den * &self.den)
    }

    pub fn pow(&self, exp: u32) -> Self {
        RatFunc {
            num: self.num.pow(exp),
            den: self.den.pow(exp),
        }
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        Self::from_poly(MultiPoly::zero())
    }

    fn one() -> Self {
        Self::from_poly(MultiPoly::one())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    fn add_ref(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = &self.num + &other.num;
            if self.den.is_one() {
                return Self::from_poly(num);
            }
            return Self::reduce(num, self.den.clone());
        }
        if self.den.is_one() {
            let num = &(&self.num * &other.den) + &other.num;
            return Self::normalized(num, other.den.clone());
        }
        if other.den.is_one() {
            let num = &self.num + &(&other.num * &self.den);
            return Self::normalized(num, self.den.clone());
        }
        let g = gcd_poly(&self.den, &other.den);
        let (b, d) = if g.is_one() {
            (self.den.clone(), other.den.clone())
        } else {
            (
                self.den.div_exact(&g).expect("gcd divides"),
                other.den.div_exact(&g).expect("gcd divides"),
            )
        };
        let num = &(&self.num * &d) + &(&other.num * &b);
        if num.is_zero() {
            return Self::zero();
        }
        // Only factors of g can cancel against the new numerator.
        let den = &(&b * &d) * &g;
        if g.is_one() {
            return Self::normalized(num, den);
        }
        let h = gcd_poly(&num, &g);
        if h.is_one() {
            Self::normalized(num, den)
        } else {
            Self::normalized(
                num.div_exact(&h).expect("gcd divides"),
                den.div_exact(&h).expect("gcd divides"),
            )
        }
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(&self.num * &other.num);
        }
        let cancel = |n: &MultiPoly, d: &MultiPoly| -> (MultiPoly, MultiPoly) {
            if d.is_one() || n.is_constant() {
                return (n.clone(), d.clone());
            }
            let g = gcd_poly(n, d);
            if g.is_one() {
                (n.clone(), d.clone())
            } else {
                (
                    n.div_exact(&g).expect("gcd divides"),
                    d.div_exact(&g).expect("gcd divides"),
                )
            }
        };
        let (a, d) = cancel(&self.num, &other.den);
        let (c, b) = cancel(&other.num, &self.den);
        Self::normalized(&a * &c, &b * &d)
    }

    fn neg_ref(&self) -> Self {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::normalized(self.den.clone(), self.num.clone()))
    }

    fn from_rational(r: &Rational) -> Self {
        if Zero::is_zero(r) {
            Self::zero()
        } else {
            Self::constant(r.clone())
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &MultiPoly| {
            if p.num_terms() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::monomial::Monomial;
    use crate::algebra::rational::{int, rat};
    use proptest::prelude::*;

    fn p(v: Var) -> MultiPoly {
        MultiPoly::var(v)
    }
    fn c(k: i64) -> MultiPoly {
        MultiPoly::from_int(k)
    }
    fn rf(n: MultiPoly, d: MultiPoly) -> RatFunc {
        RatFunc::new(n, d).unwrap()
    }

    #[test]
    fn reduction_to_canonical_form() {
        let u = p(Var::U);
        let x = p(Var::X);
        // (u^2 - 1) / (2u + 2) = (u - 1) / 2
        let f = rf(&u.pow(2) - &c(1), &(&c(2) * &u) + &c(2));
        assert_eq!(f, RatFunc::from_poly((&u - &c(1)).scale(&rat(1, 2))));
        // x / (-3 x u) = -1/(3u)
        let g = rf(x.clone(), &c(-3) * &(&x * &u));
        assert_eq!(g.denom(), &u);
        assert_eq!(g.numer(), &MultiPoly::constant(rat(-1, 3)));
        assert!(RatFunc::new(u, MultiPoly::zero()).is_err());
    }

    #[test]
    fn partial_fractions_recombine() {
        let u = RatFunc::var(Var::U);
        let one = RatFunc::one();
        // 1/u - 1/(u+1) = 1/(u(u+1))
        let a = one.div_ref(&u).unwrap();
        let b = one.div_ref(&u.add_ref(&one)).unwrap();
        let lhs = a.sub_ref(&b);
        let rhs = one.div_ref(&u.mul_ref(&u.add_ref(&one))).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_and_poles() {
        let u = p(Var::U);
        let x = p(Var::X);
        let f = rf(&x + &u, &u * &(&u - &c(2)));
        assert!(matches!(
            f.evaluate_at(Var::U, &int(2)),
            Err(AlgebraError::Pole { var: "u", .. })
        ));
        let at1 = f.evaluate_at(Var::U, &int(1)).unwrap();
        assert_eq!(at1, RatFunc::from_poly(&(&c(-1) * &x) - &c(1)));
    }

    #[test]
    fn cancellation_and_inverse() {
        let u = p(Var::U);
        assert_eq!(rf(&u.pow(2) - &c(1), &u - &c(1)), RatFunc::from_poly(&u + &c(1)));
        let a = rf(&u + &c(3), &u.pow(2) + &c(1));
        assert!(a.mul_ref(&RatFunc::one().div_ref(&a).unwrap()).is_one());
        assert!(RatFunc::one().div_ref(&RatFunc::zero()).is_none());
    }

    #[test]
    fn sum_over_common_denominator() {
        let u = p(Var::U);
        let x = p(Var::X);
        let three_u = &c(3) * &u;
        let lhs = rf(c(1), &x - &three_u).add_ref(&rf(c(1), &x + &three_u));
        let rhs = rf(&c(2) * &x, &x.pow(2) - &(&c(9) * &u.pow(2)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_examples() {
        let u = p(Var::U);
        let at0 = |f: RatFunc| f.evaluate_at(Var::U, &int(0));
        assert_eq!(at0(rf(&u + &c(1), &u + &c(2))).unwrap(), RatFunc::constant(rat(1, 2)));
        assert_eq!(at0(rf(&u.pow(2) + &u, u.clone())).unwrap(), RatFunc::one());
        assert!(matches!(at0(rf(c(1), u.clone())), Err(AlgebraError::Pole { .. })));
    }

    #[test]
    fn quotient_rule() {
        let u = p(Var::U);
        let f = rf(c(1), u.clone());
        assert_eq!(f.derivative(Var::U), rf(c(-1), u.pow(2)));
    }

    fn small_rf() -> impl Strategy<Value = RatFunc> {
        let lin = (-3i64..=3, -3i64..=3, -3i64..=3).prop_map(|(a, b, k)| {
            MultiPoly::from_terms([
                (Monomial::var(Var::U), int(a)),
                (Monomial::var(Var::X), int(b)),
                (Monomial::ONE, int(k)),
            ])
        });
        (lin.clone(), lin.clone(), lin).prop_filter_map("nonzero denominator", |(n, d1, d2)| {
            let d = &d1 * &d2;
            (!d.is_zero()).then(|| rf(n, d))
        })
    }

    proptest! {
        #[test]
        fn field_axioms(a in small_rf(), b in small_rf(), c in small_rf()) {
            prop_assert_eq!(a.add_ref(&b), b.add_ref(&a));
            prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
            prop_assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
            prop_assert!(a.sub_ref(&a).is_zero());
            if let Some(inv) = a.inv() {
                prop_assert!(a.mul_ref(&inv).is_one());
            }
        }

        #[test]
        fn reduction_is_idempotent(a in small_rf(), b in small_rf()) {
            let s = a.mul_ref(&b).add_ref(&a);
            prop_assert_eq!(rf(s.numer().clone(), s.denom().clone()), s);
        }

        #[test]
        fn canonical_denominator_is_monic(a in small_rf(), b in small_rf()) {
            let s = a.add_ref(&b);
            prop_assert!(Field::is_one(s.denom().leading_coeff().unwrap()));
            prop_assert!(gcd_poly(s.numer(), s.denom()).is_one() || s.is_zero());
        }
    }
}
