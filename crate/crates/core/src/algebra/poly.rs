//! Sparse polynomials over the canonical alphabet.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::Field;
use super::monomial::{Monomial, Var};
use super::Rational;

/// Sparse polynomial: a map from [`Monomial`] to a nonzero coefficient.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F> {
    terms: BTreeMap<Monomial, F>,
}

/// Polynomial with exact rational coefficients.
pub type MultiPoly = Poly<Rational>;

impl<F: Field> Default for Poly<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> Poly<F> {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::term(Monomial::ONE, c)
    }

    pub fn term(m: Monomial, c: F) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v), F::one())
    }

    pub fn var_pow(v: Var, exp: u16) -> Self {
        Self::term(Monomial::var_pow(v, exp), F::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, F)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in iter {
            p.add_term(m, &c);
        }
        p
    }

    /// Accumulate `c * m` in place.
    pub fn add_term(&mut self, m: Monomial, c: &F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().add_ref(c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, F)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn constant_term(&self) -> F {
        self.coeff(&Monomial::ONE)
    }

    /// Leading term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &F)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&F> {
        self.leading_term().map(|(_, c)| c)
    }

    pub fn contains(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn variables(&self) -> Vec<Var> {
        Var::ALL.into_iter().filter(|v| self.contains(*v)).collect()
    }

    /// Degree in `v`; zero for the zero polynomial.
    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v) as u32).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    /// Largest combined degree in the listed variables.
    pub fn total_degree_in(&self, vars: &[Var]) -> u32 {
        self.terms.keys().map(|m| m.degree_in(vars)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (*m, a.mul_ref(c)))
                .filter(|(_, a)| !a.is_zero())
                .collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Self {
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.mul(mono), a.clone())).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn map_coeffs<G: Field>(&self, mut f: impl FnMut(&F) -> G) -> Poly<G> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let g = f(c);
            if !g.is_zero() {
                out.terms.insert(*m, g);
            }
        }
        out
    }

    /// `[c_0, ..., c_D]` with `self = sum c_k * v^k` and every `c_k` free of `v`.
    pub fn collect_coeffs(&self, v: Var) -> Vec<Self> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![Self::zero(); deg + 1];
        for (m, c) in &self.terms {
            let k = m.exp(v) as usize;
            out[k].terms.insert(m.with_exp(v, 0), c.clone());
        }
        out
    }

    /// Inverse of [`collect_coeffs`](Self::collect_coeffs).
    pub fn from_coeffs(v: Var, coeffs: &[Self]) -> Self {
        let mut out = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let shift = Monomial::var_pow(v, k as u16);
            for (m, a) in &c.terms {
                out.add_term(m.mul(&shift), a);
            }
        }
        out
    }

    /// Replace every occurrence of `v` by `q` and expand.
    pub fn substitute(&self, v: Var, q: &Self) -> Self {
        if !self.contains(v) {
            return self.clone();
        }
        let coeffs = self.collect_coeffs(v);
        let mut result = Self::zero();
        let mut power = Self::one();
        for (k, c) in coeffs.iter().enumerate() {
            if k > 0 {
                power = &power * q;
            }
            if !c.is_zero() {
                result = &result + &(c * &power);
            }
        }
        result
    }

    /// Substitute a constant for `v`.
    pub fn evaluate(&self, v: Var, value: &F) -> Self {
        self.substitute(v, &Self::constant(value.clone()))
    }

    /// Rename variable `from` to `to`; `to` must not already occur.
    pub fn rename(&self, from: Var, to: Var) -> Self {
        debug_assert!(from == to || !self.contains(to));
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exp(from);
            let moved = m.with_exp(from, 0).with_exp(to, e);
            out.add_term(moved, c);
        }
        out
    }

    pub fn derivative(&self, v: Var) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let factor = F::from_rational(&Rational::from_integer(BigInt::from(e)));
            out.add_term(m.with_exp(v, e - 1), &c.mul_ref(&factor));
        }
        out
    }

    /// Multivariate division in graded-lex order: `self = q * divisor + r`
    /// with no term of `r` divisible by the leading monomial of `divisor`.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let (lm, lc) = divisor
            .leading_term()
            .map(|(m, c)| (*m, c.clone()))
            .expect("division by the zero polynomial");
        let lc_inv = lc.inv().expect("leading coefficient is nonzero");
        let mut quotient = Self::zero();
        let mut remainder = Self::zero();
        let mut rest = self.clone();
        while let Some((m, c)) = rest.terms.iter().next_back().map(|(m, c)| (*m, c.clone())) {
            if lm.divides(&m) {
                let qm = lm.quotient_of(&m);
                let qc = c.mul_ref(&lc_inv);
                for (dm, dc) in &divisor.terms {
                    rest.add_term(dm.mul(&qm), &dc.mul_ref(&qc).neg_ref());
                }
                quotient.add_term(qm, &qc);
            } else {
                rest.terms.remove(&m);
                remainder.terms.insert(m, c);
            }
        }
        (quotient, remainder)
    }

    /// `Some(self / divisor)` when the division is exact.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.num_terms() == 1 {
            let (dm, dc) = divisor.leading_term()?;
            let inv = dc.inv()?;
            let mut out = Self::zero();
            for (m, c) in &self.terms {
                if !dm.divides(m) {
                    return None;
                }
                out.terms.insert(dm.quotient_of(m), c.mul_ref(&inv));
            }
            return Some(out);
        }
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    pub fn pretty(&self, fmt_coeff: impl Fn(&F) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let text = fmt_coeff(c);
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
                _ => (false, text),
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                out.push_str(&body);
            } else if body == "1" {
                out.push_str(&m.to_string());
            } else {
                out.push_str(&format!("{body}*{m}"));
            }
        }
        out
    }
}

impl MultiPoly {
    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(c)))
    }

    /// `sum c * m` from integer coefficients, a convenience for tests and tables.
    pub fn from_int_terms(terms: &[(i64, &[(Var, u16)])]) -> Self {
        Self::from_terms(
            terms
                .iter()
                .map(|(c, pairs)| (Monomial::from_pairs(pairs), Rational::from_integer(BigInt::from(*c)))),
        )
    }

    /// Rational content `c` with `self / c` integral, primitive and with a
    /// positive leading coefficient.
    pub fn content(&self) -> Rational {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            return <Rational as One>::one();
        }
        let mut content = Rational::new(num_gcd, den_lcm);
        if self.leading_coeff().is_some_and(|c| c.is_negative()) {
            content = -content;
        }
        content
    }

    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let c = self.content();
        self.scale(&c.recip())
    }

    pub fn make_monic(&self) -> Self {
        match self.leading_coeff() {
            Some(lc) if !One::is_one(lc) => self.scale(&lc.recip()),
            _ => self.clone(),
        }
    }

    /// Monomial of minimal exponents dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::ONE;
        };
        it.fold(*first, |acc, m| acc.gcd(m))
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty(|c| format!("{c:?}")))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty(|c| c.to_string()))
    }
}

impl<'a, F: Field> Add<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;

    fn add(self, rhs: &'a Poly<F>) -> Poly<F> {
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl<'a, F: Field> Sub<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;

    fn sub(self, rhs: &'a Poly<F>) -> Poly<F> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, &c.neg_ref());
        }
        out
    }
}

impl<'a, F: Field> Mul<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;

    fn mul(self, rhs: &'a Poly<F>) -> Poly<F> {
        let mut out = Poly::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), &ca.mul_ref(cb));
            }
        }
        out
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;

    fn neg(self) -> Poly<F> {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg_ref())).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl<F: Field> $tr<Poly<F>> for Poly<F> {
            type Output = Poly<F>;
            fn $method(self, rhs: Poly<F>) -> Poly<F> {
                (&self).$method(&rhs)
            }
        }
        impl<'a, F: Field> $tr<&'a Poly<F>> for Poly<F> {
            type Output = Poly<F>;
            fn $method(self, rhs: &'a Poly<F>) -> Poly<F> {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl<F: Field> Neg for Poly<F> {
    type Output = Poly<F>;

    fn neg(self) -> Poly<F> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;
    use proptest::prelude::*;

    fn u() -> MultiPoly {
        MultiPoly::var(Var::U)
    }
    fn alpha() -> MultiPoly {
        MultiPoly::var(Var::Alpha)
    }
    fn kappa() -> MultiPoly {
        MultiPoly::var(Var::Kappa)
    }
    fn c(v: i64) -> MultiPoly {
        MultiPoly::from_int(v)
    }

    #[test]
    fn difference_of_squares() {
        let p = (&kappa() - &u()) * (&kappa() + &u());
        let expected = kappa().pow(2) - u().pow(2);
        assert_eq!(p, expected);
    }

    #[test]
    fn additive_identity() {
        let p = &alpha() * &c(3) + kappa();
        assert_eq!(&p + &MultiPoly::zero(), p);
    }

    #[test]
    fn binomial_square() {
        let p = (alpha() + kappa()).pow(2);
        let expected = alpha().pow(2) + &c(2) * &(&alpha() * &kappa()) + kappa().pow(2);
        assert_eq!(p, expected);
    }

    #[test]
    fn substitute_examples() {
        // kappa := u + 2 alpha in kappa^2
        let q = &u() + &(&c(2) * &alpha());
        let got = kappa().pow(2).substitute(Var::Kappa, &q);
        let expected = u().pow(2) + &c(4) * &(&alpha() * &u()) + &c(4) * &alpha().pow(2);
        assert_eq!(got, expected);

        // alpha := -alpha in alpha^3 + alpha^2
        let p = alpha().pow(3) + alpha().pow(2);
        let got = p.substitute(Var::Alpha, &-alpha());
        assert_eq!(got, -alpha().pow(3) + alpha().pow(2));

        // u := 0 in (3u + 5) kappa
        let p = (&c(3) * &u() + c(5)) * kappa();
        assert_eq!(p.evaluate(Var::U, &int(0)), &c(5) * &kappa());
    }

    #[test]
    fn collect_coeffs_examples() {
        let p = &alpha().pow(2) * &kappa() + &c(3) * &alpha();
        assert_eq!(p.collect_coeffs(Var::Alpha), vec![c(0), c(3), kappa()]);

        let free = &kappa() + &u();
        assert_eq!(free.collect_coeffs(Var::Alpha), vec![free.clone()]);

        // (h - alpha)(h - 2 alpha) = h^2 - 3 alpha h + 2 alpha^2
        let h = MultiPoly::var(Var::H);
        let p = (&h - &alpha()) * (&h - &(&c(2) * &alpha()));
        assert_eq!(
            p.collect_coeffs(Var::H),
            vec![&c(2) * &alpha().pow(2), &c(-3) * &alpha(), c(1)]
        );
        assert_eq!(MultiPoly::from_coeffs(Var::H, &p.collect_coeffs(Var::H)), p);
    }

    #[test]
    fn exact_division() {
        let a = (&u() + &c(1)) * (&kappa() - &alpha());
        assert_eq!(a.div_exact(&(&u() + &c(1))), Some(&kappa() - &alpha()));
        assert_eq!(a.div_exact(&(&u() + &c(2))), None);
        let m = &c(3) * &u().pow(2);
        assert_eq!((&m * &kappa()).div_exact(&m), Some(kappa()));
    }

    #[test]
    fn derivative_and_content() {
        let x = MultiPoly::var(Var::X);
        let p = &c(4) * &x.pow(3) + &c(6) * &x;
        assert_eq!(p.derivative(Var::X), &c(12) * &x.pow(2) + c(6));
        assert_eq!(p.content(), int(2));
        assert_eq!((-&p).primitive_part(), &c(2) * &x.pow(3) + &c(3) * &x);
    }

    #[test]
    fn display_is_readable() {
        let p = &c(3) * &u() - &(&alpha() * &kappa().pow(2));
        assert_eq!(p.to_string(), "-alpha*kappa^2 + 3*u");
    }

    fn small_poly() -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec((-4i64..=4, 0u16..3, 0u16..3, 0u16..2), 0..5).prop_map(|terms| {
            MultiPoly::from_terms(terms.into_iter().map(|(c, a, b, k)| {
                (
                    Monomial::from_pairs(&[(Var::U, a), (Var::Alpha, b), (Var::Kappa, k)]),
                    int(c),
                )
            }))
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!((&a + &b) + c.clone(), &a + &(&b + &c));
            prop_assert_eq!((&a * &b) * c.clone(), &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn canonical_form_ignores_insertion_order(terms in prop::collection::vec((-4i64..=4, 0u16..3, 0u16..3), 0..6)) {
            let build = |ts: &[(i64, u16, u16)]| MultiPoly::from_terms(ts.iter().map(|(c, a, b)| {
                (Monomial::from_pairs(&[(Var::U, *a), (Var::X, *b)]), int(*c))
            }));
            let forward = build(&terms);
            let mut rev = terms.clone();
            rev.reverse();
            prop_assert_eq!(forward, build(&rev));
        }

        #[test]
        fn division_identity(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b);
            prop_assert_eq!(&(&q * &b) + &r, a.clone());
            prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
        }
    }
}
