use num_bigint::BigInt;
use rayon::prelude::*;

use crate::algebra::rational::{binomial, pow_rational};
use crate::algebra::{Field, Monomial, MultiPoly, RatFunc, Rational, RfPoly, Var};
use crate::solver::{LinExpr, UnknownId};

use super::congruence::power_table;
use super::q1::special_value;
use super::{negate_alpha, restrict_point, EngineError, EulerDatum, Problem};

/// The generic `Q_d = sum w_{mu,nu} alpha^mu kappa^nu` with `mu + nu <= N`.
///
/// Unknowns are numbered with `mu` outer and `nu` inner.
#[derive(Clone, Debug)]
pub struct Ansatz {
    pub degree: u32,
    /// Total `(alpha, kappa)` degree bound `N`.
    pub top: u32,
}

impl Ansatz {
    pub fn new(problem: &Problem, d: u32) -> Self {
        Ansatz {
            degree: d,
            top: problem.bundle.ansatz_degree(d),
        }
    }

    pub fn num_unknowns(&self) -> usize {
        let n = self.top as usize;
        (n + 1) * (n + 2) / 2
    }

    pub fn id(&self, mu: u32, nu: u32) -> UnknownId {
        debug_assert!(mu + nu <= self.top);
        let (mu, nu, n) = (mu as usize, nu as usize, self.top as usize);
        // rows mu' < mu hold N + 1 - mu' entries each
        mu * (n + 1) - mu * (mu.saturating_sub(1)) / 2 + nu
    }

    pub fn exponents(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..=self.top).flat_map(move |mu| (0..=self.top - mu).map(move |nu| (mu, nu)))
    }

    pub fn unknowns(&self) -> Vec<UnknownId> {
        self.exponents().map(|(mu, nu)| self.id(mu, nu)).collect()
    }

    /// Substitute an assignment of every unknown.
    pub fn assemble(&self, value: impl Fn(UnknownId) -> RatFunc) -> RfPoly {
        let mut q = RfPoly::zero();
        for (mu, nu) in self.exponents() {
            let m = Monomial::from_pairs(&[(Var::Alpha, mu as u16), (Var::Kappa, nu as u16)]);
            q.add_term(m, &value(self.id(mu, nu)));
        }
        q
    }
}

fn u_monomial(c: Rational, k: u32) -> RatFunc {
    RatFunc::from_poly(MultiPoly::term(Monomial::var_pow(Var::U, k as u16), c))
}

fn rational(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

/// `Q_r(lambda_i, -alpha) Q_{d-r}(lambda_i, alpha) / Omega(lambda_i)`, from the
/// already computed `prior = [Q_1, ..., Q_{d-1}]`.
pub fn gluing_rhs(problem: &Problem, prior: &[EulerDatum], i: usize, r: u32, d: u32) -> Result<RfPoly, EngineError> {
    if r == 0 || r >= d || prior.len() < (d - 1) as usize {
        return Err(EngineError::Internal(format!(
            "gluing term needs 1 <= r < d and Q_1..Q_{} (r = {r}, d = {d})",
            d - 1
        )));
    }
    let left = negate_alpha(&restrict_point(&prior[(r - 1) as usize].q, problem, i));
    let right = restrict_point(&prior[(d - r - 1) as usize].q, problem, i);
    let omega = problem.omega_at_point(i)?;
    let inv = omega.inv().expect("omega is nonzero at fixed points");
    Ok((&left * &right).scale(&inv))
}

/// Coefficient of `alpha^s` in the ansatz after `kappa := lambda_i + shift alpha`.
fn shifted_coefficient(ansatz: &Ansatz, problem: &Problem, i: usize, shift: u32, s: u32) -> LinExpr {
    let mut e = LinExpr::new();
    let si = problem.weight_rational(i);
    let shift = rational(shift);
    for mu in 0..=s.min(ansatz.top) {
        let k = s - mu;
        for nu in k..=ansatz.top - mu {
            let c = binomial(nu, k) * pow_rational(&shift, k) * pow_rational(&si, nu - k);
            e.add_term(ansatz.id(mu, nu), &u_monomial(c, nu - k));
        }
    }
    e
}

/// `Q_d(lambda_i + r alpha, alpha) = Q_r(lambda_i, -alpha) Q_{d-r}(lambda_i, alpha) / Omega(lambda_i)`,
/// one equation per `(i, r, alpha-power)`.
pub fn system_inner_gluing(
    ansatz: &Ansatz,
    problem: &Problem,
    prior: &[EulerDatum],
) -> Result<Vec<LinExpr>, EngineError> {
    let d = ansatz.degree;
    let pairs: Vec<(usize, u32)> = problem.points().flat_map(|i| (1..d).map(move |r| (i, r))).collect();
    let blocks: Result<Vec<Vec<LinExpr>>, EngineError> = pairs
        .par_iter()
        .map(|&(i, r)| {
            let rhs = gluing_rhs(problem, prior, i, r, d)?;
            let coeffs = rhs.collect_coeffs(Var::Alpha);
            let top = ansatz.top.max(coeffs.len().saturating_sub(1) as u32);
            Ok((0..=top)
                .map(|s| {
                    let mut e = if s <= ansatz.top {
                        shifted_coefficient(ansatz, problem, i, r, s)
                    } else {
                        LinExpr::new()
                    };
                    if let Some(c) = coeffs.get(s as usize) {
                        e.add_constant(&c.constant_term().neg_ref());
                    }
                    e
                })
                .collect())
        })
        .collect();
    Ok(blocks?.into_iter().flatten().collect())
}

/// `Q_d(lambda_i + d alpha, alpha) = Q_d(lambda_i, -alpha)`, one homogeneous
/// equation per `(i, alpha-power)`.
pub fn system_boundary_gluing(ansatz: &Ansatz, problem: &Problem) -> Vec<LinExpr> {
    let d = ansatz.degree;
    problem
        .points()
        .collect::<Vec<_>>()
        .par_iter()
        .flat_map_iter(|&i| {
            (0..=ansatz.top).map(move |s| {
                let mut e = shifted_coefficient(ansatz, problem, i, d, s);
                let sign = if s % 2 == 0 { Rational::from_integer((-1).into()) } else { Rational::from_integer(1.into()) };
                for nu in 0..=ansatz.top - s {
                    let c = &sign * pow_rational(&problem.weight_rational(i), nu);
                    e.add_term(ansatz.id(s, nu), &u_monomial(c, nu));
                }
                e
            })
        })
        .collect()
}

/// `Q_d(lambda_i, (lambda_i - lambda_j)/d)` equals the special value, for `j > i`.
pub fn system_special_values(ansatz: &Ansatz, problem: &Problem) -> Result<Vec<LinExpr>, EngineError> {
    let d = ansatz.degree;
    let pairs: Vec<(usize, usize)> = problem
        .points()
        .flat_map(|i| problem.points().filter(move |&j| j > i).map(move |j| (i, j)))
        .collect();
    pairs
        .par_iter()
        .map(|&(i, j)| {
            let step = problem.step(i, j, d);
            let si = problem.weight_rational(i);
            let mut e = LinExpr::new();
            for (mu, nu) in ansatz.exponents() {
                let c = pow_rational(&step, mu) * pow_rational(&si, nu);
                e.add_term(ansatz.id(mu, nu), &u_monomial(c, mu + nu));
            }
            let sv = special_value(problem, i, j, d)?;
            e.add_constant(&RatFunc::from_poly(-&sv));
            Ok(e)
        })
        .collect()
}

/// After reducing `kappa` modulo `prod (kappa - lambda_i)`, the coefficients of
/// `alpha^s` for `s` from `(n+1)d - 1` to `N` must vanish.
pub fn system_degree_bound(ansatz: &Ansatz, problem: &Problem) -> Vec<LinExpr> {
    let n = problem.n();
    let d = ansatz.degree;
    let first = (n + 1) * d - 1;
    if first > ansatz.top {
        return Vec::new();
    }
    let table = power_table(&problem.kappa_relation(), ansatz.top as usize);
    let mut out = Vec::new();
    for s in first..=ansatz.top {
        for j in 0..=n as usize {
            let mut e = LinExpr::new();
            for nu in 0..=ansatz.top - s {
                let c = &table[nu as usize][j];
                if !c.is_zero() {
                    e.add_term(ansatz.id(s, nu), &RatFunc::from_poly(c.clone()));
                }
            }
            out.push(e);
        }
    }
    out
}
