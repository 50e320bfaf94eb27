use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use eulerdata_cli::config::{CaseConfig, RawConfig, DEFAULT_SPEC};
use eulerdata_cli::report::{emit_report, Format, RunReport};
use eulerdata_cli::run::{run_case, run_case_with};
use eulerdata_cli::suite::{emit_suite, find_case, run_builtin_suite, CATALOG};

const EXIT_MISMATCH: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_ABORT: u8 = 3;

#[derive(Parser)]
#[command(name = "eulerdata", version, about = "Exact Euler data and intersection numbers for split bundles over CP^n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute Q_1..Q_dmax and K_d, n_d for one case.
    Compute(ComputeArgs),
    /// Run the builtin regression cases against their recorded values.
    Suite(SuiteArgs),
    /// Time one case under each pivot strategy.
    Bench(BenchArgs),
}

#[derive(Args)]
struct CaseArgs {
    /// TOML case file; any flag below overrides the matching field.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Base dimension n of CP^n.
    #[arg(long)]
    n: Option<u32>,
    /// Convex splitting type, e.g. "5" or "2,4".
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    convex: Option<Vec<i64>>,
    /// Concave splitting type as positive k for each O(-k), e.g. "1,1".
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    concave: Option<Vec<i64>>,
    /// "euler" or "chern".
    #[arg(long)]
    omega: Option<String>,
    #[arg(long)]
    dmax: Option<u32>,
    /// Weight polynomial s(i), e.g. "i^2+7*i+1".
    #[arg(long)]
    spec: Option<String>,
    /// Rank-minus-dimension function: "c0+c1*d" or "table:s1,s2,...".
    #[arg(long, allow_hyphen_values = true)]
    sdiff: Option<String>,
    /// "first" or "min-terms".
    #[arg(long)]
    pivot: Option<String>,
    /// Substitute each solution back into its system.
    #[arg(long)]
    check: Option<bool>,
    /// Include the coefficients of each Q_d in the report.
    #[arg(long)]
    emit_q: bool,
}

impl CaseArgs {
    fn resolve(&self) -> Result<CaseConfig> {
        let mut raw = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                toml::from_str(&text).with_context(|| format!("malformed case config {}", path.display()))?
            }
            None => RawConfig {
                name: "case".into(),
                n: self.n.context("either --config or --n is required")?,
                convex: Vec::new(),
                concave: Vec::new(),
                omega: "euler".into(),
                sdiff: None,
                dmax: 1,
                spec: DEFAULT_SPEC.into(),
                pivot: "min-terms".into(),
                check: true,
                emit_q: false,
            },
        };
        if let Some(n) = self.n {
            raw.n = n;
        }
        if let Some(v) = &self.convex {
            raw.convex = v.clone();
        }
        if let Some(v) = &self.concave {
            raw.concave = v.clone();
        }
        if let Some(v) = &self.omega {
            raw.omega = v.clone();
        }
        if let Some(v) = self.dmax {
            raw.dmax = v;
        }
        if let Some(v) = &self.spec {
            raw.spec = v.clone();
        }
        if let Some(v) = &self.sdiff {
            raw.sdiff = Some(v.clone());
        }
        if let Some(v) = &self.pivot {
            raw.pivot = v.clone();
        }
        if let Some(v) = self.check {
            raw.check = v;
        }
        raw.emit_q |= self.emit_q;
        CaseConfig::from_raw(&raw)
    }
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    case: CaseArgs,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Args)]
struct SuiteArgs {
    /// Case ids to run (default: all).
    #[arg(long, value_delimiter = ',')]
    filter: Vec<String>,
    /// Cap every case at this degree.
    #[arg(long)]
    max_d: Option<u32>,
    /// Cases run in parallel.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// List the builtin cases and exit.
    #[arg(long)]
    list: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Builtin case id, e.g. "quintic".
    #[arg(long, conflicts_with = "config")]
    case: Option<String>,
    /// TOML case file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dmax: Option<u32>,
    #[arg(long, default_value_t = 1)]
    repeat: u32,
}

fn abort_code(report: &RunReport) -> u8 {
    match &report.failure {
        Some(f) if f.stage == "config" => EXIT_CONFIG,
        Some(_) => EXIT_ABORT,
        None => 0,
    }
}

fn compute(args: ComputeArgs) -> Result<u8> {
    let config = match args.case.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return Ok(EXIT_CONFIG);
        }
    };
    let report = run_case_with(&config, |d| eprintln!("d = {} done in {} ms", d.d, d.millis));
    let text = emit_report(&report, args.format);
    match &args.out {
        Some(path) => std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    if let Some(f) = &report.failure {
        eprintln!("error: degree {} failed during {}: {}", f.degree, f.stage, f.message);
    }
    Ok(abort_code(&report))
}

fn suite(args: SuiteArgs) -> Result<u8> {
    if args.list {
        for c in CATALOG {
            println!("{:12} d <= {}  {}", c.id, c.cap, c.title);
        }
        return Ok(0);
    }
    let report = match run_builtin_suite(&args.filter, args.max_d, args.jobs) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return Ok(EXIT_CONFIG);
        }
    };
    match args.format {
        Format::Human => print!("{}", emit_suite(&report)),
        Format::Structured => println!("{}", serde_json::to_string_pretty(&report)?),
    }
    Ok(if report.has_mismatch() {
        EXIT_MISMATCH
    } else if report.has_abort() {
        EXIT_ABORT
    } else {
        0
    })
}

fn bench(args: BenchArgs) -> Result<u8> {
    let base = match (&args.case, &args.config) {
        (Some(id), _) => {
            let case = find_case(id).with_context(|| format!("unknown builtin case {id:?}"))?;
            case.config(args.dmax.unwrap_or(case.cap))?
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let mut raw: RawConfig = toml::from_str(&text).context("malformed case config")?;
            if let Some(d) = args.dmax {
                raw.dmax = d;
            }
            CaseConfig::from_raw(&raw)?
        }
        (None, None) => anyhow::bail!("either --case or --config is required"),
    };
    println!("{:10} {:>3} {:>10} {:>10} {:>10}", "pivot", "d", "ms", "peak", "unknowns");
    let mut code = 0;
    for pivot in ["first", "min-terms"] {
        let mut config = base.clone();
        config.pivot = pivot.parse()?;
        for _ in 0..args.repeat.max(1) {
            let report = run_case(&config);
            for d in &report.degrees {
                println!("{pivot:10} {:>3} {:>10} {:>10} {:>10}", d.d, d.millis, d.peak_terms, d.unknowns);
            }
            if let Some(f) = &report.failure {
                println!("{pivot:10} aborted at degree {} during {}: {}", f.degree, f.stage, f.message);
                code = code.max(abort_code(&report));
            }
        }
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute(a) => compute(a),
        Command::Suite(a) => suite(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
