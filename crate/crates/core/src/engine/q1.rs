use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{Monomial, MultiPoly, RatFunc, Rational, RfPoly, Var};

use super::{EngineError, EulerDatum, Problem};

/// The value of `Q_d` at `kappa = lambda_i, alpha = (lambda_i - lambda_j)/d`,
/// as a polynomial in `(u, x)`.
pub fn special_value(problem: &Problem, i: usize, j: usize, d: u32) -> Result<MultiPoly, EngineError> {
    if i == j {
        return Err(EngineError::SamePoint(i));
    }
    let x = problem.x();
    let lambda = problem.lambda(i);
    let step = problem.step(i, j, d);
    let u_times = |c: Rational| MultiPoly::term(Monomial::var(Var::U), c);
    let mut out = MultiPoly::one();
    for &l in &problem.bundle.convex {
        let base = &x + &lambda.scale(&Rational::from_integer(l.into()));
        for m in 0..=l * d {
            let factor = &base - &u_times(&step * Rational::from_integer(m.into()));
            out = &out * &factor;
        }
    }
    for &k in &problem.bundle.concave {
        let base = &x - &lambda.scale(&Rational::from_integer(k.into()));
        for m in 1..k * d {
            let factor = &base + &u_times(&step * Rational::from_integer(m.into()));
            out = &out * &factor;
        }
    }
    Ok(out)
}

/// The restriction of `Q_1` to the fixed point `kappa = lambda_i`: the
/// polynomial of degree below `n` in `alpha` through the special values.
pub fn q1_restriction(problem: &Problem, i: usize) -> Result<RfPoly, EngineError> {
    let mut out = RfPoly::zero();
    let alpha = MultiPoly::var(Var::Alpha);
    for j in problem.points().filter(|&j| j != i) {
        let mut num = special_value(problem, i, j, 1)?;
        let mut den = MultiPoly::one();
        for k in problem.points().filter(|&k| k != i && k != j) {
            num = &num * &(&(&alpha - &problem.lambda(i)) + &problem.lambda(k));
            den = &den * &(&problem.lambda(k) - &problem.lambda(j));
        }
        let inv = RatFunc::new(MultiPoly::one(), den)?;
        out = &out + &RfPoly::from_multi(&num).scale(&inv);
    }
    Ok(out)
}

/// `a + b alpha` with `b` in `{-1, 0, 1}`, split as `scale * (alpha + shift)`
/// (or a pure scalar when `b = 0`).
fn linear_factor(a: BigInt, b: i64) -> (Rational, Option<BigInt>) {
    match b {
        0 => (Rational::from_integer(a), None),
        1 => (<Rational as One>::one(), Some(a)),
        -1 => (-<Rational as One>::one(), Some(-a)),
        _ => unreachable!("alpha coefficients are -1, 0 or 1"),
    }
}

/// Interpolation data at `u = 1` for one power of `x`: coefficient `c[i][j]`
/// of `x^e` in the special value at `(i, j)`.
fn q1_component(problem: &Problem, c: &[Vec<Rational>]) -> Result<MultiPoly, EngineError> {
    let alpha = MultiPoly::var(Var::Alpha);
    let kappa = MultiPoly::var(Var::Kappa);
    let pts: Vec<usize> = problem.points().collect();
    let s: Vec<MultiPoly> = pts
        .iter()
        .map(|&i| MultiPoly::constant(problem.weight_rational(i)))
        .collect();

    // Fixed points (j, r) sit at kappa = s_j + r alpha.
    let nodes: Vec<(usize, i64)> = pts.iter().flat_map(|&j| [(j, 0i64), (j, 1i64)]).collect();

    let restriction = |i: usize| -> MultiPoly {
        let mut q = MultiPoly::zero();
        for &j in pts.iter().filter(|&&j| j != i) {
            if Zero::is_zero(&c[i][j]) {
                continue;
            }
            let mut num = MultiPoly::constant(c[i][j].clone());
            let mut den = <Rational as One>::one();
            for &k in pts.iter().filter(|&&k| k != i && k != j) {
                num = &num * &(&(&alpha - &s[i]) + &s[k]);
                den *= problem.weight_rational(k) - problem.weight_rational(j);
            }
            q = &q + &num.scale(&den.recip());
        }
        q
    };

    struct Summand {
        numerator: MultiPoly,
        factors: BTreeMap<BigInt, u32>,
    }
    let mut summands = Vec::with_capacity(nodes.len());
    let mut common: BTreeMap<BigInt, u32> = BTreeMap::new();
    for &(i, r) in &nodes {
        let q_i = restriction(i);
        let value = if r == 0 {
            q_i
        } else {
            q_i.substitute(Var::Alpha, &-&alpha)
        };
        if value.is_zero() {
            continue;
        }
        let mut numerator = value;
        let mut scalar = <Rational as One>::one();
        let mut factors: BTreeMap<BigInt, u32> = BTreeMap::new();
        for &(j, t) in nodes.iter().filter(|&&node| node != (i, r)) {
            let shifted = &(&kappa - &s[j]) - &alpha.scale(&Rational::from_integer(t.into()));
            numerator = &numerator * &shifted;
            let (k, shift) = linear_factor(problem.weight(i) - problem.weight(j), r - t);
            scalar *= k;
            if let Some(shift) = shift {
                *factors.entry(shift).or_insert(0) += 1;
            }
        }
        numerator = numerator.scale(&scalar.recip());
        for (f, m) in &factors {
            let e = common.entry(f.clone()).or_insert(0);
            *e = (*e).max(*m);
        }
        summands.push(Summand { numerator, factors });
    }

    let linear = |shift: &BigInt| &alpha + &MultiPoly::constant(Rational::from_integer(shift.clone()));
    let mut total = MultiPoly::zero();
    for sm in summands {
        let mut term = sm.numerator;
        for (f, m) in &common {
            let missing = m - sm.factors.get(f).copied().unwrap_or(0);
            if missing > 0 {
                term = &term * &linear(f).pow(missing);
            }
        }
        total = &total + &term;
    }
    for (f, m) in &common {
        let divisor = linear(f);
        for _ in 0..*m {
            total = total.div_exact(&divisor).ok_or_else(|| {
                EngineError::Internal("localization denominators of Q_1 do not cancel".into())
            })?;
        }
    }
    Ok(total)
}

/// Closed-form `Q_1` from the localization sum over the `2(n+1)` fixed points.
///
/// Every ingredient is homogeneous in `(u, x, alpha, kappa)` of degree
/// `rank(U_1)`, so the sum is formed at `u = 1`, one power of `x` at a time,
/// and the powers of `u` are restored afterwards.
pub fn build_q1(problem: &Problem) -> Result<EulerDatum, EngineError> {
    let pts: Vec<usize> = problem.points().collect();
    let degree = problem.bundle.obstruction_rank(1) as u16;
    let one = <Rational as One>::one();
    let mut values = vec![vec![MultiPoly::zero(); pts.len()]; pts.len()];
    for &i in &pts {
        for &j in pts.iter().filter(|&&j| j != i) {
            values[i][j] = special_value(problem, i, j, 1)?.evaluate(Var::U, &one);
        }
    }
    let max_x = values.iter().flatten().map(|v| v.degree_in(Var::X)).max().unwrap_or(0) as u16;

    let mut q = RfPoly::zero();
    for e in 0..=max_x {
        let c: Vec<Vec<Rational>> = values
            .iter()
            .map(|row| row.iter().map(|v| v.coeff(&Monomial::var_pow(Var::X, e))).collect())
            .collect();
        if c.iter().flatten().all(Zero::is_zero) {
            continue;
        }
        let part = q1_component(problem, &c)?;
        for (m, coeff) in part.terms() {
            let used = m.exp(Var::Alpha) + m.exp(Var::Kappa) + e;
            let u_exp = degree.checked_sub(used).ok_or_else(|| {
                EngineError::Internal(format!("Q_1 term {m} exceeds the homogeneous degree {degree}"))
            })?;
            let param = Monomial::from_pairs(&[(Var::U, u_exp), (Var::X, e)]);
            q.add_term(*m, &RatFunc::from_poly(MultiPoly::term(param, coeff.clone())));
        }
    }
    Ok(EulerDatum {
        degree: 1,
        q,
        verdict: None,
        stats: None,
    })
}
