use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use eulerdata::engine::{BundleSpec, OmegaKind, Problem, SolveOptions, Specialization};
use eulerdata::invariants::SDiff;
use eulerdata::solver::PivotStrategy;

pub const DEFAULT_SPEC: &str = "i^2+7*i+1";

/// A case exactly as written in a config file or on the command line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub n: u32,
    #[serde(default)]
    pub convex: Vec<i64>,
    /// Positive `k` for each summand `O(-k)`.
    #[serde(default)]
    pub concave: Vec<i64>,
    #[serde(default = "default_omega")]
    pub omega: String,
    /// Affine `c0+c1*d` or `table:s1,s2,...`; defaults to `rank(U_d) - dim` in chern mode and `0` otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sdiff: Option<String>,
    #[serde(default = "default_dmax")]
    pub dmax: u32,
    #[serde(default = "default_spec")]
    pub spec: String,
    #[serde(default = "default_pivot")]
    pub pivot: String,
    #[serde(default = "default_true")]
    pub check: bool,
    #[serde(default)]
    pub emit_q: bool,
}

fn default_name() -> String {
    "case".into()
}

fn default_omega() -> String {
    "euler".into()
}

fn default_dmax() -> u32 {
    1
}

fn default_spec() -> String {
    DEFAULT_SPEC.into()
}

fn default_pivot() -> String {
    "min-terms".into()
}

fn default_true() -> bool {
    true
}

/// A validated case.
#[derive(Clone, Debug)]
pub struct CaseConfig {
    pub name: String,
    pub bundle: BundleSpec,
    pub omega: OmegaKind,
    pub sdiff: SDiff,
    pub dmax: u32,
    pub spec: Specialization,
    pub pivot: PivotStrategy,
    pub check: bool,
    pub emit_q: bool,
}

fn splitting(values: &[i64], what: &str) -> Result<Vec<u32>> {
    values
        .iter()
        .map(|&v| {
            if v < 0 {
                bail!("{what} entries must be non-negative (got {v}); write O(-k) as concave entry k");
            }
            u32::try_from(v).with_context(|| format!("{what} entry {v} is too large"))
        })
        .collect()
}

impl CaseConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let bundle = BundleSpec::new(raw.n, splitting(&raw.convex, "convex")?, splitting(&raw.concave, "concave")?)?;
        let omega: OmegaKind = raw.omega.parse()?;
        let spec: Specialization = raw.spec.parse()?;
        spec.validate(raw.n)?;
        let sdiff = match &raw.sdiff {
            Some(text) => text.parse()?,
            None if omega == OmegaKind::Chern => SDiff::natural(&bundle),
            None => SDiff::zero(),
        };
        if raw.dmax < 1 {
            bail!("dmax must be at least 1");
        }
        sdiff.validate(omega, raw.dmax)?;
        Ok(CaseConfig {
            name: raw.name.clone(),
            bundle,
            omega,
            sdiff,
            dmax: raw.dmax,
            spec,
            pivot: raw.pivot.parse()?,
            check: raw.check,
            emit_q: raw.emit_q,
        })
    }

    /// Canonical raw form, used as the config echo in reports.
    pub fn to_raw(&self) -> RawConfig {
        RawConfig {
            name: self.name.clone(),
            n: self.bundle.n,
            convex: self.bundle.convex.iter().map(|&l| l as i64).collect(),
            concave: self.bundle.concave.iter().map(|&k| k as i64).collect(),
            omega: self.omega.name().into(),
            sdiff: Some(self.sdiff.to_string()),
            dmax: self.dmax,
            spec: self.spec.to_string(),
            pivot: self.pivot.name().into(),
            check: self.check,
            emit_q: self.emit_q,
        }
    }

    pub fn problem(&self) -> Result<Problem> {
        Ok(Problem::new(self.bundle.clone(), self.omega, self.spec.clone())?)
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            pivot: self.pivot,
            check: self.check,
        }
    }
}

/// Parse and validate a TOML case description.
pub fn parse_config(source: &str) -> Result<CaseConfig> {
    let raw: RawConfig = toml::from_str(source).context("malformed case config")?;
    CaseConfig::from_raw(&raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    const QUINTIC: &str = r#"
        name = "quintic"
        n = 4
        convex = [5]
        omega = "euler"
        dmax = 3
        spec = "i^2+7*i+1"
    "#;

    #[test]
    fn quintic_config_is_valid() {
        let c = parse_config(QUINTIC).unwrap();
        assert_eq!(c.bundle.convex, vec![5]);
        assert_eq!(c.dmax, 3);
        assert_eq!(c.sdiff, SDiff::zero());
        assert_eq!(c.pivot, PivotStrategy::MinTerms);
        assert!(c.check);
    }

    #[test]
    fn raw_round_trip() {
        let c = parse_config(QUINTIC).unwrap();
        let text = toml::to_string(&c.to_raw()).unwrap();
        let again = parse_config(&text).unwrap();
        assert_eq!(again.to_raw(), c.to_raw());
    }

    #[test]
    fn rejected_configs() {
        let with = |extra: &str| format!("n = 2\nconvex = [3]\n{extra}");
        // s(0) = 0
        assert!(parse_config(&with("spec = \"i\"")).is_err());
        // constant weights
        assert!(parse_config(&with("spec = \"1\"")).is_err());
        assert!(parse_config("n = 2").is_err());
        assert!(parse_config("n = 2\nconcave = [-3]").is_err());
        assert!(parse_config(&with("dmax = 0")).is_err());
        assert!(parse_config(&with("omega = \"euler\"\nsdiff = \"2\"")).is_err());
        assert!(parse_config(&with("pivot = \"random\"")).is_err());
        assert!(parse_config(&with("colour = 1")).is_err());
    }

    #[test]
    fn chern_default_sdiff_is_natural() {
        let c = parse_config("n = 4\nconvex = [6]\nomega = \"chern\"\ndmax = 2").unwrap();
        assert_eq!(c.sdiff, SDiff::Affine { c0: 0, c1: 1 });
    }
}
