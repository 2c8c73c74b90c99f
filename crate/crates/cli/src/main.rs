use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use hyers_lab::config::{AxisSpec, FunctionKind, OutputFormat, ScenarioConfig};
use hyers_lab::{cmd_approx, cmd_constants, cmd_defect, cmd_selftest, cmd_threshold};
use hyers_lab_core::Fault;

#[derive(Debug, Parser)]
#[command(
    name = "hyers-lab",
    version,
    about = "Certified direct-method approximation of symmetric multiadditive maps, \
             and the explicit counterexamples at the stability threshold r = 1"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Scenario file (TOML); flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Arity of the symmetric map.
    #[arg(long)]
    n: Option<usize>,

    /// Dimension of each argument.
    #[arg(long)]
    d: Option<usize>,

    /// Control amplitude (also the counterexample amplitude).
    #[arg(long)]
    eps: Option<f64>,

    /// Control exponent.
    #[arg(long, allow_negative_numbers = true)]
    r: Option<f64>,

    /// Delta sweep (comma separated).
    #[arg(long, value_delimiter = ',')]
    delta: Option<Vec<f64>>,

    /// Multiadditive kernel coefficient (threshold fits one when unset).
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,

    /// Perturbation amplitude of the power-perturbed map.
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,

    /// Alpha sweep override (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alpha: Option<Vec<f64>>,

    /// Exponent grid for the constants table (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    r_grid: Option<Vec<f64>>,

    /// Catalog map: exact | power-perturbed | abs-product | gajda.
    #[arg(long, value_parser = parse_function)]
    function: Option<FunctionKind>,

    /// Grid axis as min:max:count (repeat for per-axis grids).
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    grid: Option<Vec<AxisSpec>>,

    /// Number of random samples.
    #[arg(long)]
    samples: Option<usize>,

    /// PRNG seed (chacha8).
    #[arg(long)]
    seed: Option<u64>,

    /// Dyadic step cap.
    #[arg(long)]
    kmax: Option<usize>,

    /// Certified-tail stopping tolerance.
    #[arg(long)]
    tol: Option<f64>,

    /// Report path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format: csv | json.
    #[arg(long, value_parser = parse_format)]
    format: Option<OutputFormat>,
}

fn parse_function(s: &str) -> Result<FunctionKind, String> {
    s.parse()
}

fn parse_axis(s: &str) -> Result<AxisSpec, String> {
    s.parse()
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse()
}

fn parse_fault(s: &str) -> Result<Fault, String> {
    s.parse()
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample defect tuples and check them against the control.
    Defect(CommonArgs),
    /// Recover the nearby multiadditive map over a grid with certified bounds.
    Approx(CommonArgs),
    /// Tabulate fold coefficients and bound constants over (n, r).
    Constants(CommonArgs),
    /// Run the r = 1 counterexamples: approximant family and witnesses.
    Threshold(CommonArgs),
    /// Run the named invariant suites.
    Selftest {
        #[command(flatten)]
        common: CommonArgs,

        /// Inject a fault ('zeta-branch') to demonstrate detection.
        #[arg(long, default_value = "none", value_parser = parse_fault)]
        inject_fault: Fault,
    },
}

fn effective_config(args: &CommonArgs) -> Result<ScenarioConfig> {
    let mut cfg = match &args.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    macro_rules! take {
        ($($field:ident),+) => {
            $(if let Some(v) = args.$field.clone() { cfg.$field = v; })+
        };
    }
    take!(n, d, eps, r, beta, delta, samples, seed, tol, function, grid, format, r_grid);
    if let Some(c) = args.c {
        cfg.c = Some(c);
    }
    if let Some(alpha) = args.alpha.clone() {
        cfg.alpha = Some(alpha);
    }
    if let Some(k_max) = args.kmax {
        cfg.k_max = k_max;
    }
    if let Some(out) = args.out.clone() {
        cfg.out = Some(out);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<usize> {
    let common = match &cli.command {
        Command::Defect(a)
        | Command::Approx(a)
        | Command::Constants(a)
        | Command::Threshold(a) => a,
        Command::Selftest { common, .. } => common,
    };
    let cfg = effective_config(common)?;
    let report = match &cli.command {
        Command::Defect(_) => cmd_defect(&cfg)?,
        Command::Approx(_) => cmd_approx(&cfg)?,
        Command::Constants(_) => cmd_constants(&cfg)?,
        Command::Threshold(_) => cmd_threshold(&cfg)?,
        Command::Selftest { inject_fault, .. } => cmd_selftest(&cfg, *inject_fault)?,
    };
    report.write_to(cfg.out.as_deref(), cfg.format)?;
    for line in &report.summary {
        eprintln!("{line}");
    }
    Ok(report.failure_count())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(failures) => {
            eprintln!("{failures} row(s) failed");
            ExitCode::from(1)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
