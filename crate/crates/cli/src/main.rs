use std::collections::BTreeMap;
use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use limrb_core::check::CheckResult;
use limrb_core::ode::{check_rbivp, named_path, rbivp_residuals, solve_ivp, Grid, Path};
use limrb_core::suite::{default_tolerance, PathSpec};
use limrb_core::{
    list_fixtures, ode_residual_rows, run_suite, Error, Mode, Report, SuiteConfig, SUITES,
};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "limrb",
    version,
    about = "Verification suites for limit-weighted operator structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and emit a JSON report.
    Verify(VerifyArgs),
    /// List built-in fixtures and suites.
    List,
    /// Flow-operator utilities.
    Ode {
        #[command(subcommand)]
        command: OdeCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Random,
    Symbolic,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Random => Mode::Random,
            ModeArg::Symbolic => Mode::Symbolic,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name; see `limrb list`.
    suite: String,
    #[arg(long, env = "LIMRB_SAMPLES", default_value_t = 100)]
    samples: usize,
    #[arg(long, env = "LIMRB_SEED", default_value_t = 42)]
    seed: u64,
    #[arg(long, env = "LIMRB_MODE", value_enum, default_value_t = ModeArg::Random)]
    mode: ModeArg,
    /// Built-in fixture name or path to a fixture JSON file.
    #[arg(long, env = "LIMRB_FIXTURE")]
    fixture: Option<String>,
    /// Tolerance override `name=value`, repeatable.
    #[arg(long = "tol", env = "LIMRB_TOL", value_delimiter = ',')]
    tolerances: Vec<String>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, env = "LIMRB_REPORT")]
    report: Option<PathBuf>,
    /// Write ODE residuals as CSV (ode-rbivp only).
    #[arg(long, env = "LIMRB_CSV")]
    csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum OdeCommand {
    /// Integrate two coefficient paths and measure the factorization residual.
    Run(OdeRunArgs),
}

#[derive(Args)]
struct OdeRunArgs {
    /// Built-in path name, JSON coefficient array, or path to a JSON file.
    #[arg(long, default_value = "mixed-a")]
    u: String,
    #[arg(long, default_value = "mixed-b")]
    v: String,
    #[arg(long, env = "LIMRB_STEP", default_value_t = default_tolerance("step"))]
    step: f64,
    #[arg(long = "tol", env = "LIMRB_RESIDUAL", default_value_t = default_tolerance("residual"))]
    tol: f64,
    #[arg(long, env = "LIMRB_REPORT")]
    report: Option<PathBuf>,
    #[arg(long, env = "LIMRB_CSV")]
    csv: Option<PathBuf>,
}

/// Invalid input: exits with status 2.
struct Usage(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.into())
    }
}

fn parse_tolerances(raw: &[String]) -> anyhow::Result<BTreeMap<String, f64>> {
    raw.iter()
        .filter(|s| !s.is_empty())
        .map(|s| {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| anyhow!("tolerance `{s}` is not of the form name=value"))?;
            let v: f64 = v
                .trim()
                .parse()
                .with_context(|| format!("tolerance `{s}`"))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn write_output(path: Option<&FsPath>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn write_csv(path: &FsPath, rows: &[(String, f64, f64)]) -> anyhow::Result<()> {
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(["case", "x", "residual"])?;
    for (case, x, r) in rows {
        w.write_record([case.clone(), x.to_string(), format!("{r:e}")])?;
    }
    w.flush()?;
    Ok(())
}

fn summarize(c: &CheckResult, depth: usize) {
    eprintln!(
        "{:indent$}{:?} {} ({} cases){}",
        "",
        c.status,
        c.name,
        c.cases,
        if c.detail.is_empty() {
            String::new()
        } else {
            format!(": {}", c.detail)
        },
        indent = 2 * depth
    );
    if depth < 1 {
        for p in &c.parts {
            summarize(p, depth + 1);
        }
    }
}

fn print_failure(r: &Report) {
    for c in &r.checks {
        if let Some(f) = c.first_failure() {
            eprintln!("first failure in {}: {}", c.name, f.name);
            if let Some(w) = &f.witness {
                eprintln!("{}", serde_json::to_string_pretty(w).unwrap_or_default());
            }
            return;
        }
    }
}

fn verify(args: VerifyArgs) -> Result<bool, Usage> {
    if !SUITES.contains(&args.suite.as_str()) {
        return Err(Usage(anyhow!(Error::UnknownSuite(args.suite.clone()))));
    }
    if args.csv.is_some() && args.suite != "ode-rbivp" {
        return Err(Usage(anyhow!("--csv applies to the ode-rbivp suite only")));
    }
    let cfg = SuiteConfig {
        suite: args.suite.clone(),
        samples: args.samples,
        seed: args.seed,
        mode: args.mode.into(),
        tolerances: parse_tolerances(&args.tolerances)?,
        fixture: args.fixture.clone(),
    };
    let report = run_suite(&cfg)?;
    for c in &report.checks {
        summarize(c, 0);
    }
    eprintln!(
        "{:?}: {} ({} ms)",
        report.status, report.suite, report.timing_ms
    );
    if !report.passed() {
        print_failure(&report);
    }
    write_output(args.report.as_deref(), &report.to_json())?;
    if let Some(p) = &args.csv {
        write_csv(p, &ode_residual_rows(&cfg)?)?;
    }
    Ok(report.passed())
}

fn resolve_path(spec: &str) -> anyhow::Result<Path> {
    let trimmed = spec.trim_start();
    let text = if trimmed.starts_with('[') {
        trimmed.to_string()
    } else if FsPath::new(spec).is_file() {
        fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?
    } else {
        return Ok(named_path(spec)?);
    };
    let p: PathSpec =
        serde_json::from_str(&text).with_context(|| format!("coefficient path `{spec}`"))?;
    Ok(p.resolve()?)
}

fn ode_run(args: OdeRunArgs) -> Result<bool, Usage> {
    let u = resolve_path(&args.u)?;
    let v = resolve_path(&args.v)?;
    let grid = Grid::default().with_step(args.step);
    grid.steps()?;
    let check = check_rbivp(&u, &v, &grid, args.tol);
    summarize(&check, 0);
    let ends = |p: &Path| -> Option<Vec<Vec<f64>>> {
        let s = solve_ivp(p, &grid).ok()?;
        let m = s.at_end();
        Some(
            (0..m.nrows())
                .map(|i| m.row(i).iter().copied().collect())
                .collect(),
        )
    };
    let out = json!({
        "u": args.u,
        "v": args.v,
        "step": grid.h,
        "interval": [grid.x0, grid.x1],
        "flow_u_end": ends(&u),
        "flow_v_end": ends(&v),
        "check": check,
    });
    write_output(args.report.as_deref(), &serde_json::to_string_pretty(&out)?)?;
    if let Some(p) = &args.csv {
        let rows: Vec<(String, f64, f64)> = rbivp_residuals(&u, &v, &grid)?
            .into_iter()
            .map(|(x, r)| (format!("{}*{}", args.u, args.v), x, r))
            .collect();
        write_csv(p, &rows)?;
    }
    Ok(check.passed())
}

fn list() {
    println!("fixtures:");
    for e in list_fixtures() {
        println!("  {:<26} {:<20} {}", e.name, e.kind, e.description);
    }
    println!("suites:");
    for s in SUITES {
        println!("  {s}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => verify(a),
        Command::List => {
            list();
            Ok(true)
        }
        Command::Ode {
            command: OdeCommand::Run(a),
        } => ode_run(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
