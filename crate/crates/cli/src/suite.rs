use std::fmt::Write as _;

use anyhow::{bail, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use eulerdata::algebra::rational::parse_rational;
use eulerdata::invariants::{multiple_cover_sum, XValue};

use crate::config::{CaseConfig, RawConfig};
use crate::report::{ExactValue, RunReport};
use crate::run::run_case;

/// Recorded values for one sequence (`K_d` or `n_d`), starting at `d = 1`.
#[derive(Clone, Copy, Debug)]
pub struct Golden {
    /// `(value, x exponent)` for `d = 1, 2, ...`
    pub values: &'static [(&'static str, u32)],
    /// Where the values were recorded.
    pub provenance: &'static str,
}

#[derive(Clone, Copy, Debug)]
pub struct BuiltinCase {
    pub id: &'static str,
    pub title: &'static str,
    pub n: u32,
    pub convex: &'static [i64],
    pub concave: &'static [i64],
    pub omega: &'static str,
    pub sdiff: &'static str,
    pub spec: &'static str,
    /// Largest degree the reference run completed.
    pub cap: u32,
    pub k: Option<Golden>,
    pub inst: Option<Golden>,
}

impl BuiltinCase {
    pub fn config(&self, dmax: u32) -> Result<CaseConfig> {
        CaseConfig::from_raw(&RawConfig {
            name: self.id.into(),
            n: self.n,
            convex: self.convex.to_vec(),
            concave: self.concave.to_vec(),
            omega: self.omega.into(),
            sdiff: Some(self.sdiff.into()),
            dmax,
            spec: self.spec.into(),
            pivot: "min-terms".into(),
            check: true,
            emit_q: false,
        })
    }
}

const fn golden(values: &'static [(&'static str, u32)], provenance: &'static str) -> Option<Golden> {
    Some(Golden { values, provenance })
}

pub const CATALOG: &[BuiltinCase] = &[
    BuiltinCase {
        id: "quintic",
        title: "O(5) -> CP^4",
        n: 4,
        convex: &[5],
        concave: &[],
        omega: "euler",
        sdiff: "0",
        spec: "i^2+7*i+1",
        cap: 3,
        k: golden(
            &[("2875", 0), ("4876875/8", 0), ("8564575000/27", 0)],
            "reference run, K_d for d <= 3",
        ),
        inst: golden(
            &[("2875", 0), ("609250", 0), ("317206375", 0), ("242467530000", 0), ("229305888887625", 0)],
            "reference driver, known n_d",
        ),
    },
    BuiltinCase {
        id: "p5-2-4",
        title: "O(2)+O(4) -> CP^5",
        n: 5,
        convex: &[2, 4],
        concave: &[],
        omega: "euler",
        sdiff: "0",
        spec: "i^2+1",
        cap: 2,
        k: golden(&[("1280", 0), ("92448", 0)], "reference run, K_d for d <= 2"),
        inst: golden(&[("1280", 0), ("92288", 0)], "reference run, n_d"),
    },
    BuiltinCase {
        id: "p5-3-3",
        title: "O(3)+O(3) -> CP^5",
        n: 5,
        convex: &[3, 3],
        concave: &[],
        omega: "euler",
        sdiff: "0",
        spec: "i^2+1",
        cap: 2,
        k: golden(&[("1053", 0), ("423549/8", 0)], "reference run, K_d for d <= 2"),
        inst: golden(&[("1053", 0), ("52812", 0)], "reference run, n_d"),
    },
    BuiltinCase {
        id: "p6-2-2-3",
        title: "O(2)+O(2)+O(3) -> CP^6",
        n: 6,
        convex: &[2, 2, 3],
        concave: &[],
        omega: "euler",
        sdiff: "0",
        spec: "i^2+1",
        cap: 2,
        k: golden(&[("720", 0), ("22518", 0)], "reference run, K_d for d <= 2"),
        inst: golden(&[("720", 0), ("22428", 0)], "reference run, n_d"),
    },
    BuiltinCase {
        id: "p7-2-2-2-2",
        title: "O(2)+O(2)+O(2)+O(2) -> CP^7",
        n: 7,
        convex: &[2, 2, 2, 2],
        concave: &[],
        omega: "euler",
        sdiff: "0",
        spec: "i^2+13*i+1",
        cap: 1,
        k: golden(&[("512", 0)], "reference run, K_1"),
        inst: golden(&[("512", 0), ("9728", 0)], "reference driver, known n_d"),
    },
    BuiltinCase {
        id: "cotangent-p2",
        title: "tangent bundle of CP^2, splitting type O(1)+O(2)",
        n: 2,
        convex: &[1, 2],
        concave: &[],
        omega: "chern",
        sdiff: "3",
        spec: "i^2+3*i+1",
        cap: 1,
        k: golden(&[("10", 3)], "reference run, K_1 = 10*x^3"),
        inst: None,
    },
    BuiltinCase {
        id: "conifold",
        title: "O(-1)+O(-1) -> CP^1",
        n: 1,
        convex: &[],
        concave: &[1, 1],
        omega: "euler",
        sdiff: "0",
        spec: "i+1",
        cap: 5,
        k: golden(
            &[("1", 0), ("1/8", 0), ("1/27", 0), ("1/64", 0), ("1/125", 0)],
            "reference driver, known K_d = 1/d^3, tested for d <= 5",
        ),
        inst: None,
    },
    BuiltinCase {
        id: "local-p2",
        title: "O(-3) -> CP^2",
        n: 2,
        convex: &[],
        concave: &[3],
        omega: "euler",
        sdiff: "0",
        spec: "i^3+i^2+3*i+1",
        cap: 5,
        k: golden(
            &[("3", 0), ("-45/8", 0), ("244/9", 0), ("-12333/64", 0), ("211878/125", 0)],
            "reference driver, known K_d, matched in the d <= 5 run log",
        ),
        inst: None,
    },
    BuiltinCase {
        id: "p3-2-m2",
        title: "O(2)+O(-2) -> CP^3",
        n: 3,
        convex: &[2],
        concave: &[2],
        omega: "euler",
        sdiff: "0",
        spec: "i^2+7*i+1",
        cap: 3,
        k: golden(
            &[("-4", 0), ("-9/2", 0), ("-328/27", 0)],
            "reference driver, known K_d, tested for d <= 3",
        ),
        inst: None,
    },
    BuiltinCase {
        id: "p4-2-2-m1",
        title: "O(2)+O(2)+O(-1) -> CP^4",
        n: 4,
        convex: &[2, 2],
        concave: &[1],
        omega: "euler",
        sdiff: "0",
        spec: "i^2+1",
        cap: 2,
        k: golden(
            &[("16", 0), ("-18", 0), ("1312/27", 0)],
            "reference driver, known K_d, tested for d <= 2",
        ),
        inst: None,
    },
    BuiltinCase {
        id: "chern-p1-2",
        title: "O(2) -> CP^1",
        n: 1,
        convex: &[2],
        concave: &[],
        omega: "chern",
        sdiff: "3",
        spec: "i^2+1",
        cap: 5,
        k: golden(
            &[("1", 3), ("1/8", 3), ("1/27", 3), ("1/64", 3), ("1/125", 3)],
            "reference run, K_d for d <= 5",
        ),
        inst: golden(&[("1", 3), ("0", 3), ("0", 3), ("0", 3), ("0", 3)], "reference run, n_d"),
    },
    BuiltinCase {
        id: "chern-p2-3",
        title: "O(3) -> CP^2",
        n: 2,
        convex: &[3],
        concave: &[],
        omega: "chern",
        sdiff: "2",
        spec: "i^2+7*i+1",
        cap: 6,
        k: golden(
            &[("21", 2), ("189/8", 2), ("169/9", 2), ("1533/64", 2), ("2646/125", 2), ("169/8", 2)],
            "reference run, K_d for d <= 6",
        ),
        inst: golden(
            &[("21", 2), ("21", 2), ("18", 2), ("21", 2), ("21", 2), ("18", 2)],
            "reference run, n_d",
        ),
    },
    BuiltinCase {
        id: "chern-p3-4",
        title: "O(4) -> CP^3",
        n: 3,
        convex: &[4],
        concave: &[],
        omega: "chern",
        sdiff: "1",
        spec: "i^2+7*i+1",
        cap: 4,
        k: golden(
            &[("320", 1), ("5056", 1), ("3893504/27", 1), ("5490624", 1)],
            "reference run, K_d for d <= 4",
        ),
        inst: golden(
            &[("320", 1), ("5016", 1), ("144192", 1), ("5489992", 1)],
            "reference run, n_d",
        ),
    },
    BuiltinCase {
        id: "chern-p4-6",
        title: "O(6) -> CP^4",
        n: 4,
        convex: &[6],
        concave: &[],
        omega: "chern",
        sdiff: "d",
        spec: "i^2+7*i+1",
        cap: 3,
        k: golden(
            &[("50400", 1), ("752729895/4", 2), ("433244745198080/243", 3)],
            "reference run, K_d for d <= 3",
        ),
        inst: golden(
            &[("50400", 1), ("752704695/4", 2), ("433244744744480/243", 3)],
            "reference run, n_d (x-exponents carried from K_d)",
        ),
    },
    BuiltinCase {
        id: "chern-p4-7",
        title: "O(7) -> CP^4",
        n: 4,
        convex: &[7],
        concave: &[],
        omega: "chern",
        sdiff: "2*d",
        spec: "i^2+11*i+1",
        cap: 3,
        k: golden(
            &[("451570", 2), ("403985396325/32", 4), ("15755269694706695755/17496", 6)],
            "reference run, K_d for d <= 3",
        ),
        inst: golden(
            &[("451570", 2), ("403983590045/32", 4), ("15755269694414078395/17496", 6)],
            "reference run, n_d (x-exponents carried from K_d)",
        ),
    },
    BuiltinCase {
        id: "chern-p4-8",
        title: "O(8) -> CP^4",
        n: 4,
        convex: &[8],
        concave: &[],
        omega: "chern",
        sdiff: "3*d",
        spec: "i^2+11*i+1",
        cap: 3,
        k: golden(
            &[("2773820", 3), ("3178734062035/8", 6), ("46028387589557254161275/314928", 9)],
            "reference run, K_d for d <= 3",
        ),
        inst: golden(
            &[("2773820", 3), ("3178731288215/8", 6), ("46028387589524900324795/314928", 9)],
            "reference run, n_d (x-exponents carried from K_d)",
        ),
    },
    BuiltinCase {
        id: "chern-p4-9",
        title: "O(9) -> CP^4",
        n: 4,
        convex: &[9],
        concave: &[],
        omega: "chern",
        sdiff: "4*d",
        spec: "i^2+11*i+1",
        cap: 3,
        k: golden(
            &[("13198850", 4), ("243281907041715/32", 8), ("197802281929974511821535/17496", 12)],
            "reference run, K_d for d <= 3",
        ),
        inst: golden(
            &[("13198850", 4), ("243281854246315/32", 8), ("197802281929965958966735/17496", 12)],
            "reference run, n_d (x-exponents carried from K_d)",
        ),
    },
    BuiltinCase {
        id: "chern-p4-10",
        title: "O(10) -> CP^4",
        n: 4,
        convex: &[10],
        concave: &[],
        omega: "chern",
        sdiff: "5*d",
        spec: "i^2+11*i+1",
        cap: 3,
        k: golden(
            &[("52040450", 5), ("25908993204089625/256", 10), ("71418501571607082433686025/139968", 15)],
            "reference run, K_d for d <= 3",
        ),
        inst: golden(
            &[("52040450", 5), ("25908991538795225/256", 10), ("71418501571606812655993225/139968", 15)],
            "reference run, n_d (x-exponents carried from K_d)",
        ),
    },
];

pub fn find_case(id: &str) -> Option<&'static BuiltinCase> {
    CATALOG.iter().find(|c| c.id == id)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub quantity: String,
    pub d: u32,
    pub expected: ExactValue,
    pub got: ExactValue,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseStatus {
    Pass,
    Mismatch,
    Aborted,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseOutcome {
    pub id: String,
    pub title: String,
    pub dmax: u32,
    pub status: CaseStatus,
    /// Golden values compared (each `K_d` or `n_d` counts once).
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
    pub report: RunReport,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub cases: Vec<CaseOutcome>,
}

impl SuiteReport {
    pub fn has_mismatch(&self) -> bool {
        self.cases.iter().any(|c| c.status == CaseStatus::Mismatch)
    }

    pub fn has_abort(&self) -> bool {
        self.cases.iter().any(|c| c.status == CaseStatus::Aborted)
    }
}

fn golden_value(entry: &(&str, u32)) -> XValue {
    XValue::new(parse_rational(entry.0).expect("golden values are valid rationals"), entry.1)
}

fn compare(quantity: &str, golden: Option<Golden>, got: &[XValue], out: &mut Vec<Mismatch>) -> usize {
    let Some(golden) = golden else { return 0 };
    let mut checked = 0;
    for (idx, (expected, got)) in golden.values.iter().map(golden_value).zip(got).enumerate() {
        checked += 1;
        if &expected != got {
            out.push(Mismatch {
                quantity: quantity.into(),
                d: idx as u32 + 1,
                expected: ExactValue::from(&expected),
                got: ExactValue::from(got),
                provenance: golden.provenance.into(),
            });
        }
    }
    checked
}

/// Run one builtin case to `min(cap, max_d)` and compare with its recorded values.
pub fn run_builtin(case: &BuiltinCase, max_d: Option<u32>) -> Result<CaseOutcome> {
    let dmax = max_d.map_or(case.cap, |m| m.min(case.cap)).max(1);
    let report = run_case(&case.config(dmax)?);
    let k = report.k_values()?;
    let inst = report.n_values()?;
    let mut mismatches = Vec::new();
    let mut checked = compare("K", case.k, &k, &mut mismatches);
    checked += compare("n", case.inst, &inst, &mut mismatches);
    if multiple_cover_sum(&inst) != k {
        bail!("{}: divisor-sum round trip failed", case.id);
    }
    let status = if !mismatches.is_empty() {
        CaseStatus::Mismatch
    } else if report.failure.is_some() {
        CaseStatus::Aborted
    } else {
        CaseStatus::Pass
    };
    Ok(CaseOutcome {
        id: case.id.into(),
        title: case.title.into(),
        dmax,
        status,
        checked,
        mismatches,
        report,
    })
}

/// Run the selected builtin cases (all when `filter` is empty) on up to `jobs` workers.
pub fn run_builtin_suite(filter: &[String], max_d: Option<u32>, jobs: usize) -> Result<SuiteReport> {
    for id in filter {
        if find_case(id).is_none() {
            bail!("unknown builtin case {id:?}");
        }
    }
    let selected: Vec<&BuiltinCase> = CATALOG
        .iter()
        .filter(|c| filter.is_empty() || filter.iter().any(|f| f == c.id))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    let cases = pool.install(|| {
        selected
            .par_iter()
            .map(|case| run_builtin(case, max_d))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(SuiteReport { cases })
}

pub fn emit_suite(report: &SuiteReport) -> String {
    let mut out = String::new();
    for c in &report.cases {
        let k: Vec<String> = c
            .report
            .k_values()
            .unwrap_or_default()
            .iter()
            .map(ToString::to_string)
            .collect();
        let status = match c.status {
            CaseStatus::Pass => "PASS",
            CaseStatus::Mismatch => "MISMATCH",
            CaseStatus::Aborted => "ABORTED",
        };
        let _ = writeln!(
            out,
            "{status:8} {:12} {} (d <= {}, {} golden values): k = [{}]",
            c.id,
            c.title,
            c.dmax,
            c.checked,
            k.join(", ")
        );
        for m in &c.mismatches {
            let _ = writeln!(
                out,
                "         {}_{}: expected {} * x^{}, got {} * x^{} ({})",
                m.quantity, m.d, m.expected.num, m.expected.x_exp, m.got.num, m.got.x_exp, m.provenance
            );
        }
        if let Some(f) = &c.report.failure {
            let _ = writeln!(out, "         aborted at degree {} during {}: {}", f.degree, f.stage, f.message);
        }
    }
    out
}
