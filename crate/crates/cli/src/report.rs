use std::fmt::Write as _;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use eulerdata::algebra::rational::{format_rational, parse_rational};
use eulerdata::invariants::XValue;

use crate::config::RawConfig;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// An exact rational multiple of `x^{x_exp}`, with the rational as `"p/q"` or `"p"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactValue {
    pub num: String,
    pub x_exp: u32,
}

impl ExactValue {
    pub fn to_xvalue(&self) -> Result<XValue> {
        let value = parse_rational(&self.num).with_context(|| format!("bad rational {:?}", self.num))?;
        Ok(XValue::new(value, self.x_exp))
    }
}

impl From<&XValue> for ExactValue {
    fn from(v: &XValue) -> Self {
        ExactValue {
            num: format_rational(&v.value),
            x_exp: v.x_exp,
        }
    }
}

/// One term `coeff * alpha^alpha * kappa^kappa` of a serialized `Q_d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QTerm {
    pub alpha: u16,
    pub kappa: u16,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub d: u32,
    #[serde(rename = "K")]
    pub k: ExactValue,
    pub n: ExactValue,
    /// `K_d` from the second extraction formula.
    pub crosscheck: ExactValue,
    /// Solver verdict, or `closed-form` for the first degree.
    pub verdict: String,
    /// Unknowns and equations of the assembled system (zero for the first degree).
    pub unknowns: usize,
    pub equations: usize,
    pub peak_terms: usize,
    pub millis: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<QTerm>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub stage: String,
    pub degree: u32,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: RawConfig,
    pub degrees: Vec<DegreeReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
    pub engine_version: String,
}

impl RunReport {
    pub fn k_values(&self) -> Result<Vec<XValue>> {
        self.degrees.iter().map(|d| d.k.to_xvalue()).collect()
    }

    pub fn n_values(&self) -> Result<Vec<XValue>> {
        self.degrees.iter().map(|d| d.n.to_xvalue()).collect()
    }

    /// The same report with all timing fields zeroed.
    pub fn without_timing(&self) -> RunReport {
        let mut r = self.clone();
        for d in &mut r.degrees {
            d.millis = 0;
        }
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Human,
    Structured,
}

fn xvalue_text(v: &ExactValue) -> String {
    match v.to_xvalue() {
        Ok(x) => x.to_string(),
        Err(_) => v.num.clone(),
    }
}

pub fn emit_report(report: &RunReport, format: Format) -> String {
    match format {
        Format::Structured => serde_json::to_string_pretty(report).expect("reports serialize") + "\n",
        Format::Human => {
            let c = &report.config;
            let mut out = String::new();
            let _ = writeln!(
                out,
                "case {}: n = {}, convex = {:?}, concave = {:?}, omega = {}, s(i) = {}, s_diff = {}",
                c.name,
                c.n,
                c.convex,
                c.concave,
                c.omega,
                c.spec,
                c.sdiff.as_deref().unwrap_or("0")
            );
            for d in &report.degrees {
                let _ = writeln!(
                    out,
                    "d = {}: kd = {}  (crosscheck {}, {}, {} unknowns, {} ms)",
                    d.d,
                    xvalue_text(&d.k),
                    xvalue_text(&d.crosscheck),
                    d.verdict,
                    d.unknowns,
                    d.millis
                );
            }
            let list = |f: fn(&DegreeReport) -> &ExactValue| {
                report.degrees.iter().map(|d| xvalue_text(f(d))).collect::<Vec<_>>().join(", ")
            };
            let _ = writeln!(out, "k = [{}]", list(|d| &d.k));
            let _ = writeln!(out, "instanton_list = [{}]", list(|d| &d.n));
            if let Some(f) = &report.failure {
                let _ = writeln!(out, "aborted at degree {} during {}: {}", f.degree, f.stage, f.message);
            }
            out
        }
    }
}

/// Parse a structured report.
pub fn parse_report(text: &str) -> Result<RunReport> {
    serde_json::from_str(text).context("malformed report")
}

#[cfg(test)]
mod tests {
    use super::*;
    use eulerdata::algebra::rational::{int, rat};

    fn sample() -> RunReport {
        let v = |x: XValue| ExactValue::from(&x);
        RunReport {
            config: crate::config::parse_config("n = 4\nconvex = [6]\nomega = \"chern\"\ndmax = 2").unwrap().to_raw(),
            degrees: vec![DegreeReport {
                d: 1,
                k: v(XValue::new(int(50400), 1)),
                n: v(XValue::new(int(50400), 1)),
                crosscheck: v(XValue::new(int(50400), 1)),
                verdict: "closed-form".into(),
                unknowns: 0,
                equations: 0,
                peak_terms: 0,
                millis: 12,
                q: None,
            }],
            failure: None,
            engine_version: ENGINE_VERSION.into(),
        }
    }

    #[test]
    fn exact_value_format() {
        assert_eq!(ExactValue::from(&XValue::scalar(rat(4876875, 8))).num, "4876875/8");
        assert_eq!(ExactValue::from(&XValue::scalar(int(2875))).num, "2875");
        assert_eq!(ExactValue::from(&XValue::new(int(50400), 1)).x_exp, 1);
    }

    #[test]
    fn structured_round_trip() {
        let r = sample();
        let text = emit_report(&r, Format::Structured);
        assert!(text.contains("\"x_exp\": 1"));
        assert!(text.contains("\"K\""));
        assert_eq!(parse_report(&text).unwrap(), r);
    }

    #[test]
    fn human_form() {
        let text = emit_report(&sample(), Format::Human);
        assert!(text.contains("kd = 50400*x"));
        assert!(text.contains("instanton_list = [50400*x]"));
    }
}
