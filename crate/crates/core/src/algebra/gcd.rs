//! Polynomial gcd over the rationals.
//!
//! Univariate inputs go through monic Euclid. Homogeneous bivariate inputs
//! are dehomogenized to the univariate case. Everything else falls back to a
//! recursive primitive pseudo-remainder sequence, which is slow but only
//! reached by small auxiliary computations.

use num_traits::Zero;

use super::monomial::{Monomial, Var};
use super::poly::MultiPoly;
use super::Rational;

/// Greatest common divisor, normalized to integer coefficients with content
/// one and a positive leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd_poly(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.primitive_part();
    }
    if b.is_zero() {
        return a.primitive_part();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mono = ma.gcd(&mb);
    let a = strip_monomial(a, &ma);
    let b = strip_monomial(b, &mb);
    let rest = if a.is_constant() || b.is_constant() {
        MultiPoly::one()
    } else if a == b {
        a.primitive_part()
    } else {
        gcd_monomial_free(&a, &b)
    };
    rest.mul_monomial(&mono).primitive_part()
}

fn strip_monomial(p: &MultiPoly, m: &Monomial) -> MultiPoly {
    if m.is_one() {
        return p.clone();
    }
    MultiPoly::from_terms(p.terms().map(|(k, c)| (m.quotient_of(k), c.clone())))
}

fn union_vars(a: &MultiPoly, b: &MultiPoly) -> Vec<Var> {
    Var::ALL
        .into_iter()
        .filter(|v| a.contains(*v) || b.contains(*v))
        .collect()
}

/// Both inputs are nonconstant and free of monomial factors.
fn gcd_monomial_free(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let vars = union_vars(a, b);
    match vars.as_slice() {
        [v] => univariate_gcd(a, b, *v),
        [v, w] if is_homogeneous(a) && is_homogeneous(b) => homogeneous_gcd(a, b, *v, *w),
        _ => recursive_gcd(a, b),
    }
}

fn is_homogeneous(p: &MultiPoly) -> bool {
    let mut degs = p.terms().map(|(m, _)| m.total_degree());
    match degs.next() {
        Some(d) => degs.all(|e| e == d),
        None => true,
    }
}

/// Dense univariate polynomial, lowest degree first.
type Dense = Vec<Rational>;

fn to_dense(p: &MultiPoly, v: Var) -> Dense {
    let mut out = vec![Rational::zero(); p.degree_in(v) as usize + 1];
    for (m, c) in p.terms() {
        out[m.exp(v) as usize] = c.clone();
    }
    out
}

fn from_dense(d: &[Rational], v: Var) -> MultiPoly {
    MultiPoly::from_terms(
        d.iter()
            .enumerate()
            .map(|(k, c)| (Monomial::var_pow(v, k as u16), c.clone())),
    )
}

fn trim(d: &mut Dense) {
    while d.last().is_some_and(|c| c.is_zero()) {
        d.pop();
    }
}

fn dense_rem(a: &Dense, b: &Dense) -> Dense {
    let mut r = a.clone();
    let lb = b.last().expect("nonzero divisor");
    let db = b.len() - 1;
    trim(&mut r);
    while r.len() > db {
        let lead = r.last().unwrap() / lb;
        let shift = r.len() - 1 - db;
        for (k, bc) in b.iter().enumerate() {
            let t = &r[shift + k] - &lead * bc;
            r[shift + k] = t;
        }
        trim(&mut r);
    }
    r
}

fn univariate_gcd(a: &MultiPoly, b: &MultiPoly, v: Var) -> MultiPoly {
    let mut x = to_dense(a, v);
    let mut y = to_dense(b, v);
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = dense_rem(&x, &y);
        x = y;
        y = r;
    }
    from_dense(&x, v).primitive_part()
}

/// Homogeneous in `{v, w}`: set `w = 1`, take the univariate gcd, rehomogenize.
fn homogeneous_gcd(a: &MultiPoly, b: &MultiPoly, v: Var, w: Var) -> MultiPoly {
    let one = Rational::from_integer(1.into());
    let g = univariate_gcd(&a.evaluate(w, &one), &b.evaluate(w, &one), v);
    let deg = g.degree_in(v) as u16;
    MultiPoly::from_terms(
        g.terms()
            .map(|(m, c)| (m.with_exp(w, deg - m.exp(v)), c.clone())),
    )
}

/// Content with respect to `v`: gcd of the coefficients of the powers of `v`.
fn content_in(p: &MultiPoly, v: Var) -> MultiPoly {
    let mut g = MultiPoly::zero();
    for c in p.collect_coeffs(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd_poly(&g, &c);
        if g.is_constant() {
            return MultiPoly::one();
        }
    }
    g
}

fn primitive_in(p: &MultiPoly, v: Var) -> MultiPoly {
    let c = content_in(p, v);
    if c.is_one() {
        return p.primitive_part();
    }
    p.div_exact(&c)
        .expect("content divides its polynomial")
        .primitive_part()
}

/// `lc(b)^k * a mod b` in the variable `v`.
fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, v: Var) -> MultiPoly {
    let db = b.degree_in(v);
    let bc = b.collect_coeffs(v);
    let lb = bc.last().unwrap().clone();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.collect_coeffs(v).pop().unwrap();
        let shift = MultiPoly::var_pow(v, (dr - db) as u16);
        r = &(&r * &lb) - &(&(&lr * &shift) * b);
    }
    r
}

fn recursive_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let vars = union_vars(a, b);
    let shared = vars.iter().copied().find(|v| a.contains(*v) && b.contains(*v));
    let Some(v) = shared else {
        // No common variable: any common factor lives in the coefficients
        // with respect to a variable only one side has.
        let v = vars[0];
        return if a.contains(v) {
            gcd_poly(&content_in(a, v), b)
        } else {
            gcd_poly(a, &content_in(b, v))
        };
    };
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let content = gcd_poly(&ca, &cb);
    let mut x = primitive_in(a, v);
    let mut y = primitive_in(b, v);
    if x.degree_in(v) < y.degree_in(v) {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_zero() && y.degree_in(v) > 0 {
        let r = pseudo_rem(&x, &y, v);
        x = y;
        y = if r.is_zero() { r } else { primitive_in(&r, v) };
    }
    let g = if y.is_zero() { x } else { MultiPoly::one() };
    (&content * &primitive_in(&g, v)).primitive_part()
}

/// Least common multiple, normalized like [`gcd_poly`].
pub fn lcm_poly(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() || b.is_zero() {
        return MultiPoly::zero();
    }
    let g = gcd_poly(a, b);
    (a * &b.div_exact(&g).expect("gcd divides")).primitive_part()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;
    use proptest::prelude::*;

    fn v(x: Var) -> MultiPoly {
        MultiPoly::var(x)
    }
    fn c(k: i64) -> MultiPoly {
        MultiPoly::from_int(k)
    }

    #[test]
    fn univariate() {
        let u = v(Var::U);
        let a = (&u - &c(1)) * (&u + &c(2));
        let b = (&u - &c(1)) * (&u + &c(3));
        assert_eq!(gcd_poly(&a, &b), &u - &c(1));
        assert_eq!(gcd_poly(&a, &c(0)), a.primitive_part());
        assert!(gcd_poly(&(&u + &c(2)), &(&u + &c(3))).is_one());
    }

    #[test]
    fn homogeneous_bivariate() {
        let (u, x) = (v(Var::U), v(Var::X));
        let f = &x + &(&c(3) * &u);
        let a = &(&f * &(&x - &u)) * &u;
        let b = &(&f * &(&x + &(&c(5) * &u))) * &(&u * &x);
        assert_eq!(gcd_poly(&a, &b), &f * &u);
    }

    #[test]
    fn shared_linear_factor() {
        let (u, x) = (v(Var::U), v(Var::X));
        let ux = &u + &x;
        let a = &(&ux * &ux) * &(&u - &c(1));
        let b = &ux * &(&u + &c(2));
        assert_eq!(gcd_poly(&a, &b), ux);
    }

    #[test]
    fn general_trivariate() {
        let (u, x, h) = (v(Var::U), v(Var::X), v(Var::H));
        let f = &(&x * &h) + &(&u + &c(1));
        let a = &f * &(&h - &c(2));
        let b = &f * &(&x + &u);
        assert_eq!(gcd_poly(&a, &b), f.primitive_part());
    }

    #[test]
    fn normalization() {
        let u = v(Var::U);
        let a = &c(-6) * &(&u - &c(1));
        let g = gcd_poly(&a, &a);
        assert_eq!(g, &u - &c(1));
        assert_eq!(lcm_poly(&(&u - &c(1)), &(&u + &c(1))), &u.pow(2) - &c(1));
    }

    fn factor() -> impl Strategy<Value = MultiPoly> {
        (-3i64..=3, -3i64..=3, -3i64..=3).prop_map(|(a, b, k)| {
            MultiPoly::from_terms([
                (Monomial::var(Var::U), int(a)),
                (Monomial::var(Var::X), int(b)),
                (Monomial::ONE, int(k)),
            ])
        })
    }

    proptest! {
        #[test]
        fn gcd_divides_both(f in factor(), g in factor(), h in factor()) {
            let a = &f * &g;
            let b = &f * &h;
            let d = gcd_poly(&a, &b);
            if !a.is_zero() { prop_assert!(a.div_exact(&d).is_some()); }
            if !b.is_zero() { prop_assert!(b.div_exact(&d).is_some()); }
            if !f.is_zero() && !a.is_zero() && !b.is_zero() {
                prop_assert!(d.div_exact(&f.primitive_part()).is_some());
            }
        }
    }
}
