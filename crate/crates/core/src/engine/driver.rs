use crate::algebra::{RatFunc, Var};
use crate::solver::{solve, LinearSystem, PivotStrategy, SolveError, Verdict};

use super::q1::{build_q1, special_value};
use super::systems::{
    gluing_rhs, system_boundary_gluing, system_degree_bound, system_inner_gluing, system_special_values, Ansatz,
};
use super::{negate_alpha, reduce_kappa, restrict_shifted, restrict_special, EngineError, EulerDatum, Problem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub pivot: PivotStrategy,
    /// Evaluate leftover equations after elimination.
    pub check: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            pivot: PivotStrategy::MinTerms,
            check: true,
        }
    }
}

/// Assemble the four systems for degree `d`, solve, and substitute back.
pub fn solve_qd(problem: &Problem, prior: &[EulerDatum], d: u32, opts: SolveOptions) -> Result<EulerDatum, EngineError> {
    if d < 2 || prior.len() + 1 != d as usize {
        return Err(EngineError::Internal(format!(
            "degree {d} needs exactly Q_1..Q_{} (have {})",
            d.saturating_sub(1),
            prior.len()
        )));
    }
    let ansatz = Ansatz::new(problem, d);
    let mut system = LinearSystem::new(ansatz.unknowns());
    system.equations.extend(system_inner_gluing(&ansatz, problem, prior)?);
    system.equations.extend(system_boundary_gluing(&ansatz, problem));
    system.equations.extend(system_special_values(&ansatz, problem)?);
    system.equations.extend(system_degree_bound(&ansatz, problem));
    system.dedup();

    let solution = solve(&system, opts.pivot, opts.check).map_err(|source| {
        let coincidences = problem.coincidences(d);
        match source {
            SolveError::Underdetermined { .. } if !coincidences.is_empty() => EngineError::DegenerateSpecialization {
                degree: d,
                source,
                coincidences,
            },
            source => EngineError::Solve { degree: d, source },
        }
    })?;
    if solution.verdict == Verdict::Inconsistent {
        return Err(EngineError::Inconsistent { degree: d });
    }
    let q = ansatz.assemble(|w| solution.assignment[&w].clone());
    Ok(EulerDatum {
        degree: d,
        q,
        verdict: Some(solution.verdict),
        stats: Some(solution.stats),
    })
}

/// Outcome of one structural check on a computed `Q_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl PropertyCheck {
    fn new(name: &'static str, failure: Option<String>) -> Self {
        PropertyCheck {
            name,
            passed: failure.is_none(),
            detail: failure.unwrap_or_default(),
        }
    }
}

/// Every structural property a computed `Q_d` must satisfy, given `prior = [Q_1..Q_{d-1}]`.
pub fn check_properties(problem: &Problem, prior: &[EulerDatum], datum: &EulerDatum) -> Vec<PropertyCheck> {
    let d = datum.degree;
    let n = problem.n();
    let top = problem.bundle.ansatz_degree(d);
    let mut checks = Vec::new();

    let flat = datum.flatten();
    checks.push(PropertyCheck::new(
        "polynomial",
        flat.is_none().then(|| "a coefficient has a nontrivial denominator".to_string()),
    ));

    let main_degree = datum.q.total_degree_in(&[Var::Alpha, Var::Kappa]);
    let bound = top + problem.bundle.excess(d);
    let full_degree = flat.as_ref().map(|f| f.total_degree_in(&[Var::Alpha, Var::Kappa, Var::U]));
    checks.push(PropertyCheck::new(
        "total-degree",
        match full_degree {
            _ if main_degree > top => Some(format!("(alpha, kappa) degree {main_degree} > {top}")),
            Some(deg) if deg > bound => Some(format!("(alpha, kappa, u) degree {deg} > {bound}")),
            _ => None,
        },
    ));

    let reduced = reduce_kappa(problem, &datum.q);
    let alpha_deg = reduced.degree_in(Var::Alpha);
    let alpha_bound = (n + 1) * d - 2;
    checks.push(PropertyCheck::new(
        "alpha-degree",
        (alpha_deg > alpha_bound).then(|| format!("reduced alpha degree {alpha_deg} > {alpha_bound}")),
    ));

    let mut failure = None;
    for i in problem.points() {
        let lhs = restrict_shifted(&datum.q, problem, i, d as i64);
        let rhs = negate_alpha(&super::restrict_point(&datum.q, problem, i));
        if lhs != rhs {
            failure = Some(format!("fails at fixed point {i}"));
            break;
        }
    }
    checks.push(PropertyCheck::new("reciprocity", failure));

    let mut failure = None;
    'pairs: for i in problem.points() {
        for j in problem.points().filter(|&j| j != i) {
            let got = restrict_special(&datum.q, problem, i, j, d);
            let want = match special_value(problem, i, j, d) {
                Ok(v) => RatFunc::from_poly(v),
                Err(e) => {
                    failure = Some(e.to_string());
                    break 'pairs;
                }
            };
            if got != want {
                failure = Some(format!("mismatch at (i, j) = ({i}, {j})"));
                break 'pairs;
            }
        }
    }
    checks.push(PropertyCheck::new("special-values", failure));

    if d >= 2 {
        let mut failure = None;
        'glue: for i in problem.points() {
            let omega = match problem.omega_at_point(i) {
                Ok(w) => w,
                Err(e) => {
                    failure = Some(e.to_string());
                    break;
                }
            };
            for r in 1..d {
                let lhs = restrict_shifted(&datum.q, problem, i, r as i64);
                match gluing_rhs(problem, prior, i, r, d) {
                    Ok(rhs) if lhs.scale(&omega) == rhs.scale(&omega) => {}
                    Ok(_) => {
                        failure = Some(format!("nonzero residual at (i, r) = ({i}, {r})"));
                        break 'glue;
                    }
                    Err(e) => {
                        failure = Some(e.to_string());
                        break 'glue;
                    }
                }
            }
        }
        checks.push(PropertyCheck::new("gluing", failure));
    }

    if let Some(v) = datum.verdict {
        checks.push(PropertyCheck::new(
            "solver-verdict",
            (v == Verdict::Inconsistent).then(|| "inconsistent".to_string()),
        ));
    }
    checks
}

fn validate(problem: &Problem, prior: &[EulerDatum], datum: &EulerDatum) -> Result<(), EngineError> {
    match check_properties(problem, prior, datum).into_iter().find(|c| !c.passed) {
        Some(c) => Err(EngineError::Validation {
            degree: datum.degree,
            check: c.name,
            detail: c.detail,
        }),
        None => Ok(()),
    }
}

/// Degree-by-degree driver; each step validates its result before returning it.
#[derive(Clone, Debug)]
pub struct EulerComputation {
    problem: Problem,
    opts: SolveOptions,
    data: Vec<EulerDatum>,
}

impl EulerComputation {
    pub fn new(problem: Problem, opts: SolveOptions) -> Self {
        EulerComputation {
            problem,
            opts,
            data: Vec::new(),
        }
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn data(&self) -> &[EulerDatum] {
        &self.data
    }

    pub fn into_data(self) -> Vec<EulerDatum> {
        self.data
    }

    pub fn next_degree(&self) -> u32 {
        self.data.len() as u32 + 1
    }

    /// Compute and validate the next `Q_d`.
    pub fn step(&mut self) -> Result<&EulerDatum, EngineError> {
        let d = self.next_degree();
        let datum = if d == 1 {
            build_q1(&self.problem)?
        } else {
            solve_qd(&self.problem, &self.data, d, self.opts)?
        };
        validate(&self.problem, &self.data, &datum)?;
        self.data.push(datum);
        Ok(self.data.last().expect("just pushed"))
    }
}

/// Result of [`compute_euler_data`]: everything computed before any failure.
#[derive(Clone, Debug)]
pub struct EulerRun {
    pub data: Vec<EulerDatum>,
    pub error: Option<EngineError>,
}

pub fn compute_euler_data(problem: &Problem, dmax: u32, opts: SolveOptions) -> EulerRun {
    let mut comp = EulerComputation::new(problem.clone(), opts);
    let mut error = None;
    while comp.next_degree() <= dmax {
        if let Err(e) = comp.step() {
            error = Some(e);
            break;
        }
    }
    EulerRun {
        data: comp.into_data(),
        error,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{BundleSpec, OmegaKind, Specialization};

    fn problem(n: u32, convex: &[u32], concave: &[u32], omega: OmegaKind) -> Problem {
        Problem::new(
            BundleSpec::new(n, convex.to_vec(), concave.to_vec()).unwrap(),
            omega,
            Specialization::standard(),
        )
        .unwrap()
    }

    #[test]
    fn quintic_second_degree_satisfies_all_checks() {
        let p = problem(4, &[5], &[], OmegaKind::Euler);
        let run = compute_euler_data(&p, 2, SolveOptions::default());
        assert!(run.error.is_none(), "{:?}", run.error);
        assert_eq!(run.data.len(), 2);
        let checks = check_properties(&p, &run.data[..1], &run.data[1]);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        assert_eq!(run.data[1].verdict, Some(Verdict::Consistent));
    }

    #[test]
    fn local_surface_runs_to_third_degree() {
        let p = problem(2, &[], &[3], OmegaKind::Euler);
        let run = compute_euler_data(&p, 3, SolveOptions::default());
        assert!(run.error.is_none(), "{:?}", run.error);
        assert_eq!(run.data.len(), 3);
    }

    #[test]
    fn degenerate_specialization_is_diagnosed() {
        let p = problem(5, &[2, 4], &[], OmegaKind::Euler);
        let run = compute_euler_data(&p, 2, SolveOptions::default());
        assert_eq!(run.data.len(), 1);
        match run.error {
            Some(EngineError::DegenerateSpecialization { degree, coincidences, .. }) => {
                assert_eq!(degree, 2);
                assert_eq!(coincidences, vec![(0, 5, 3, 1)]);
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn wrong_prior_length_is_rejected() {
        let p = problem(4, &[5], &[], OmegaKind::Euler);
        assert!(matches!(
            solve_qd(&p, &[], 2, SolveOptions::default()),
            Err(EngineError::Internal(_))
        ));
    }
}
