//! Construction of the Euler data `Q_1, Q_2, ...` for a split bundle over `CP^n`.
//!
//! `Q_1` comes from a closed-form localization sum; each later `Q_d` is the
//! unique solution of a linear system in the coefficients of a generic
//! polynomial in `(alpha, kappa)`.

mod congruence;
mod driver;
mod problem;
mod q1;
mod systems;

pub use congruence::{poly_congruent, power_table};
pub use driver::{
    check_properties, compute_euler_data, solve_qd, EulerComputation, EulerRun, PropertyCheck, SolveOptions,
};
pub use problem::{BundleSpec, OmegaKind, Problem, Specialization};
pub use q1::{build_q1, q1_restriction, special_value};
pub use systems::{
    gluing_rhs, system_boundary_gluing, system_degree_bound, system_inner_gluing, system_special_values, Ansatz,
};

use crate::algebra::{AlgebraError, Field, MultiPoly, RatFunc, Rational, RfPoly, Var};
use crate::solver::{SolveError, SolveStats, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("invalid bundle: {0}")]
    InvalidBundle(String),
    #[error("invalid specialization: {0}")]
    InvalidSpecialization(String),
    #[error("fixed-point indices must differ (got i = j = {0})")]
    SamePoint(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("degree {degree}: {source}")]
    Solve {
        degree: u32,
        #[source]
        source: SolveError,
    },
    #[error(
        "degree {degree}: {source}; the specialization puts special-value points on gluing lines \
         (i, j, k, r) = {coincidences:?}, choose another"
    )]
    DegenerateSpecialization {
        degree: u32,
        #[source]
        source: SolveError,
        coincidences: Vec<(usize, usize, usize, u32)>,
    },
    #[error("degree {degree}: linear system is inconsistent")]
    Inconsistent { degree: u32 },
    #[error("degree {degree}: {check} check failed: {detail}")]
    Validation {
        degree: u32,
        check: &'static str,
        detail: String,
    },
    #[error("internal error: {0}")]
    Internal(String),
}

/// One computed `Q_d`: a polynomial in `(alpha, kappa)` with coefficients in `(u, x)`.
#[derive(Clone, Debug)]
pub struct EulerDatum {
    pub degree: u32,
    pub q: RfPoly,
    /// Solver verdict; `None` for the closed-form first degree.
    pub verdict: Option<Verdict>,
    pub stats: Option<SolveStats>,
}

impl EulerDatum {
    /// Flatten over the full alphabet; `None` if a coefficient is not polynomial.
    pub fn flatten(&self) -> Option<MultiPoly> {
        self.q.to_multi()
    }
}

fn rf_const(c: RatFunc) -> RfPoly {
    RfPoly::constant(c)
}

fn rf_alpha() -> RfPoly {
    RfPoly::var(Var::Alpha)
}

/// `kappa := lambda_i + r alpha`.
pub fn restrict_shifted(q: &RfPoly, problem: &Problem, i: usize, r: i64) -> RfPoly {
    let lambda = rf_const(RatFunc::from_poly(problem.lambda(i)));
    let target = if r == 0 {
        lambda
    } else {
        let shift = rf_alpha().scale(&RatFunc::constant(Rational::from_integer(r.into())));
        &lambda + &shift
    };
    q.substitute(Var::Kappa, &target)
}

/// `kappa := lambda_i`.
pub fn restrict_point(q: &RfPoly, problem: &Problem, i: usize) -> RfPoly {
    restrict_shifted(q, problem, i, 0)
}

/// `alpha := -alpha`.
pub fn negate_alpha(p: &RfPoly) -> RfPoly {
    RfPoly::from_terms(p.terms().map(|(m, c)| {
        let c = if m.exp(Var::Alpha) % 2 == 1 { c.neg_ref() } else { c.clone() };
        (*m, c)
    }))
}

/// `kappa := lambda_i, alpha := (lambda_i - lambda_j) / d`, a function of `(u, x)`.
pub fn restrict_special(q: &RfPoly, problem: &Problem, i: usize, j: usize, d: u32) -> RatFunc {
    let at = restrict_point(q, problem, i);
    let step = MultiPoly::term(crate::algebra::Monomial::var(Var::U), problem.step(i, j, d));
    let value = at.substitute(Var::Alpha, &rf_const(RatFunc::from_poly(step)));
    value.constant_term()
}

/// `Q_d` reduced modulo `prod (kappa - lambda_i)`.
pub fn reduce_kappa(problem: &Problem, q: &RfPoly) -> RfPoly {
    let rhs: Vec<RfPoly> = problem
        .kappa_relation()
        .iter()
        .map(|c| RfPoly::constant(RatFunc::from_poly(c.clone())))
        .collect();
    congruence::poly_congruent(q, &rhs, Var::Kappa)
}
