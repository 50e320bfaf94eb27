use std::time::Instant;

use eulerdata::algebra::Var;
use eulerdata::engine::{EngineError, EulerComputation, EulerDatum, Problem};
use eulerdata::invariants::{degree_invariant, instanton_convert, InvariantError, XValue};

use crate::config::CaseConfig;
use crate::report::{DegreeReport, ExactValue, Failure, QTerm, RunReport, ENGINE_VERSION};

fn engine_stage(degree: u32, e: &EngineError) -> &'static str {
    match e {
        EngineError::Validation { .. } => "validate",
        _ if degree == 1 => "q1",
        _ => "solve",
    }
}

fn q_terms(datum: &EulerDatum) -> Vec<QTerm> {
    datum
        .q
        .terms()
        .map(|(m, c)| QTerm {
            alpha: m.exp(Var::Alpha),
            kappa: m.exp(Var::Kappa),
            coeff: c.to_string(),
        })
        .collect()
}

struct Computed {
    d: u32,
    k: XValue,
    crosscheck: XValue,
    verdict: String,
    unknowns: usize,
    equations: usize,
    peak_terms: usize,
    millis: u64,
    q: Option<Vec<QTerm>>,
}

fn failure(stage: &str, degree: u32, message: String) -> Failure {
    Failure {
        stage: stage.into(),
        degree,
        message,
    }
}

fn step(comp: &mut EulerComputation, problem: &Problem, config: &CaseConfig) -> Result<Computed, Failure> {
    let d = comp.next_degree();
    let start = Instant::now();
    let datum = comp.step().map_err(|e| failure(engine_stage(d, &e), d, e.to_string()))?;
    let inv = degree_invariant(problem, datum, &config.sdiff)
        .map_err(|e: InvariantError| failure("extract", d, e.to_string()))?;
    if !inv.agrees() {
        return Err(failure(
            "crosscheck",
            d,
            format!("extractions disagree: {} vs {}", inv.k, inv.crosscheck),
        ));
    }
    let millis = start.elapsed().as_millis() as u64;
    let stats = datum.stats.clone().unwrap_or_default();
    Ok(Computed {
        d,
        k: inv.k,
        crosscheck: inv.crosscheck,
        verdict: datum.verdict.map_or("closed-form", |v| v.name()).to_string(),
        unknowns: stats.unknowns,
        equations: stats.equations,
        peak_terms: stats.peak_terms,
        millis,
        q: config.emit_q.then(|| q_terms(datum)),
    })
}

/// Compute `Q_1..Q_dmax` and the invariants; stops at the first failure and
/// reports what was computed before it.
pub fn run_case(config: &CaseConfig) -> RunReport {
    run_case_with(config, |_| {})
}

/// As [`run_case`], calling `progress` after each finished degree.
pub fn run_case_with(config: &CaseConfig, mut progress: impl FnMut(&DegreeReport)) -> RunReport {
    let mut report = RunReport {
        config: config.to_raw(),
        degrees: Vec::new(),
        failure: None,
        engine_version: ENGINE_VERSION.into(),
    };
    let problem = match config.problem() {
        Ok(p) => p,
        Err(e) => {
            report.failure = Some(failure("config", 0, e.to_string()));
            return report;
        }
    };
    let mut comp = EulerComputation::new(problem.clone(), config.solve_options());
    let mut k_list: Vec<XValue> = Vec::new();
    while comp.next_degree() <= config.dmax {
        match step(&mut comp, &problem, config) {
            Ok(c) => {
                k_list.push(c.k.clone());
                let n = instanton_convert(&k_list).pop().expect("nonempty");
                let entry = DegreeReport {
                    d: c.d,
                    k: ExactValue::from(&c.k),
                    n: ExactValue::from(&n),
                    crosscheck: ExactValue::from(&c.crosscheck),
                    verdict: c.verdict,
                    unknowns: c.unknowns,
                    equations: c.equations,
                    peak_terms: c.peak_terms,
                    millis: c.millis,
                    q: c.q,
                };
                progress(&entry);
                report.degrees.push(entry);
            }
            Err(f) => {
                report.failure = Some(f);
                break;
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use crate::report::{emit_report, parse_report, Format};

    #[test]
    fn local_plane_run() {
        let config = parse_config("name = \"local\"\nn = 2\nconcave = [3]\ndmax = 3\nspec = \"i^3+i^2+3*i+1\"").unwrap();
        let report = run_case(&config);
        assert!(report.failure.is_none());
        let k: Vec<String> = report.degrees.iter().map(|d| d.k.num.clone()).collect();
        assert_eq!(k, ["3", "-45/8", "244/9"]);
        assert!(report.degrees.iter().skip(1).all(|d| d.verdict == "consistent"));
    }

    #[test]
    fn report_is_deterministic_and_round_trips() {
        let config = parse_config("n = 1\nconvex = [2]\nomega = \"chern\"\ndmax = 2\nspec = \"i^2+1\"\nemit_q = true").unwrap();
        let a = run_case(&config).without_timing();
        let b = run_case(&config).without_timing();
        let text = emit_report(&a, Format::Structured);
        assert_eq!(text, emit_report(&b, Format::Structured));
        assert_eq!(parse_report(&text).unwrap(), a);
        assert!(a.degrees.iter().all(|d| d.q.as_ref().is_some_and(|q| !q.is_empty())));
    }

    #[test]
    fn degenerate_specialization_aborts_with_partial_report() {
        let config = parse_config("n = 5\nconvex = [2, 4]\ndmax = 2").unwrap();
        let report = run_case(&config);
        assert_eq!(report.degrees.len(), 1);
        let f = report.failure.unwrap();
        assert_eq!((f.stage.as_str(), f.degree), ("solve", 2));
    }
}
