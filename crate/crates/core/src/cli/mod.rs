//! The `qcournot` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input,
//! 3 non-interior equilibrium.

pub mod sweep;
pub mod verify;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::classical::{classical_bayes_nash, pareto_optimum, symmetric_nash};
use crate::error::Error;
use crate::market::{CostType, MarketParams};
use crate::quantum::{quantum_bayes_nash, quantum_profit, Entanglement, Player, QuantumProfile};
use crate::thresholds::{Regime, ThresholdReport, DEFAULT_GAMMA_TOL, S_C, S_M};
use sweep::{s_axis, t_axis, Curves, SweepGrid};
use verify::{run_checks, write_report, Depth, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_NON_INTERIOR: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "qcournot",
    version,
    about = "Classical and quantum Bayes-Nash equilibria of the Cournot duopoly"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classical and quantum equilibria with per-type and average profits.
    Equilibrium(EquilibriumArgs),
    /// Normalized average profits over a (tanh gamma, s) grid.
    Surface(SurfaceArgs),
    /// Firm 1's normalized profit along tanh gamma for a list of s values.
    Curves(CurvesArgs),
    /// Asymmetry thresholds, and the critical gammas for a given s.
    Thresholds(ThresholdArgs),
    /// Cross-check closed forms against the numerical oracle.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct MarketArgs {
    /// Demand intercept.
    #[arg(long)]
    pub a: f64,
    /// Firm 1's unit cost.
    #[arg(long)]
    pub c1: f64,
    /// Firm 2's high unit cost.
    #[arg(long = "ch", value_name = "CH")]
    pub c_high: f64,
    /// Firm 2's low unit cost.
    #[arg(long = "cl", value_name = "CL")]
    pub c_low: f64,
    /// Probability that firm 2's cost is high.
    #[arg(long)]
    pub theta: f64,
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EquilibriumArgs {
    #[command(flatten)]
    pub market: MarketArgs,
    /// Squeezing parameter gamma >= 0.
    #[arg(long, conflicts_with = "t")]
    pub gamma: Option<f64>,
    /// tanh(gamma) in [0, 1).
    #[arg(long)]
    pub t: Option<f64>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct TAxisArgs {
    #[arg(long, default_value_t = 0.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 0.999)]
    pub t_max: f64,
    #[arg(long, default_value_t = 0.001)]
    pub t_step: f64,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    #[command(flatten)]
    pub t: TAxisArgs,
    #[arg(long, default_value_t = 0.0)]
    pub s_min: f64,
    #[arg(long, default_value_t = 0.2)]
    pub s_max: f64,
    #[arg(long, default_value_t = 0.002)]
    pub s_step: f64,
    /// Common margin k; 1 yields profits already normalized by k^2.
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    #[command(flatten)]
    pub t: TAxisArgs,
    /// Comma-separated s values; fractions like `1/9` are accepted.
    #[arg(long, default_value = "0.05,1/9,0.13,4/27,0.2")]
    pub s_list: String,
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    /// Asymmetry at which to locate gamma_m and gamma_c.
    #[arg(long)]
    pub s: Option<String>,
    /// Bisection tolerance in gamma.
    #[arg(long, default_value_t = DEFAULT_GAMMA_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DepthArg {
    Quick,
    Full,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = DepthArg::Full)]
    pub depth: DepthArg,
    /// Override every check's tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub out: OutArg,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonInteriorEquilibrium(_) => EXIT_NON_INTERIOR,
            _ => EXIT_INVALID_INPUT,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError {
            code: EXIT_INVALID_INPUT,
            message: format!("i/o error: {e}"),
        }
    }
}

type CliResult<T = i32> = std::result::Result<T, CliError>;

/// Parses `args` and runs the command, writing CSV to `stdout` unless
/// `--out` is given. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() {
                EXIT_INVALID_INPUT
            } else {
                EXIT_OK
            };
        }
    };
    match dispatch(&cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(cmd: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult {
    let out_path = match cmd {
        Command::Equilibrium(a) => &a.out.out,
        Command::Surface(a) => &a.out.out,
        Command::Curves(a) => &a.out.out,
        Command::Thresholds(a) => &a.out.out,
        Command::Verify(a) => &a.out.out,
    };
    let mut file;
    let out: &mut dyn Write = match out_path {
        Some(path) => {
            file = BufWriter::new(File::create(path)?);
            &mut file
        }
        None => stdout,
    };
    let code = match cmd {
        Command::Equilibrium(a) => cmd_equilibrium(a, out)?,
        Command::Surface(a) => cmd_surface(a, out)?,
        Command::Curves(a) => cmd_curves(a, out)?,
        Command::Thresholds(a) => cmd_thresholds(a, out)?,
        Command::Verify(a) => cmd_verify(a, out, stderr)?,
    };
    out.flush()?;
    Ok(code)
}

/// Parses a decimal or a fraction `p/q`.
pub fn parse_number(text: &str) -> Result<f64, CliError> {
    let bad = || CliError {
        code: EXIT_INVALID_INPUT,
        message: format!("not a number: {text:?}"),
    };
    let text = text.trim();
    match text.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| bad())?;
            let den: f64 = den.trim().parse().map_err(|_| bad())?;
            Ok(num / den)
        }
        None => text.parse().map_err(|_| bad()),
    }
}

const EQUILIBRIUM_HEADER: &str =
    "model,gamma,x1,x2h,x2l,q1_h,q2_h,q1_l,q2_l,u1_h,u1_l,u2_h,u2_l,u1_avg,u2_avg";

fn quantum_row(
    model: &str,
    params: &MarketParams,
    profile: &QuantumProfile,
    gamma: &Entanglement,
    out: &mut dyn Write,
) -> CliResult<()> {
    let mut quantities = Vec::with_capacity(4);
    let mut u1 = [0.0; 2];
    let mut u2 = [0.0; 2];
    for (i, cost_type) in CostType::ALL.into_iter().enumerate() {
        let x2 = profile.x2(cost_type);
        let (q1, q2) = crate::quantum::strategies_to_quantities(profile.x1, x2, gamma)?;
        quantities.extend([q1, q2]);
        u1[i] = quantum_profit(profile.x1, x2, gamma, cost_type, params, Player::Firm1)?;
        u2[i] = quantum_profit(profile.x1, x2, gamma, cost_type, params, Player::Firm2)?;
    }
    let theta = params.theta;
    let avg = |u: [f64; 2]| theta * u[0] + (1.0 - theta) * u[1];
    let fields: Vec<String> = [gamma.gamma(), profile.x1, profile.x2_high, profile.x2_low]
        .into_iter()
        .chain(quantities)
        .chain([u1[0], u1[1], u2[0], u2[1], avg(u1), avg(u2)])
        .map(|v| v.to_string())
        .collect();
    writeln!(out, "{model},{}", fields.join(","))?;
    Ok(())
}

fn cmd_equilibrium(args: &EquilibriumArgs, out: &mut dyn Write) -> CliResult {
    let m = &args.market;
    let params = MarketParams::new(m.a, m.c1, m.c_high, m.c_low, m.theta)?;
    let gamma = match (args.gamma, args.t) {
        (Some(g), _) => Entanglement::new(g)?,
        (None, Some(t)) => Entanglement::from_tanh(t)?,
        (None, None) => Entanglement::CLASSICAL,
    };
    let k = params.derived().common_margin()?;
    let classical = classical_bayes_nash(&params)?;
    let quantum = quantum_bayes_nash(&params, &gamma)?;

    writeln!(out, "{EQUILIBRIUM_HEADER}")?;
    // The classical game is the entangled one at gamma = 0, where strategies
    // and quantities coincide.
    let as_profile = QuantumProfile::new(classical.q1, classical.q2_high, classical.q2_low)?;
    quantum_row(
        "classical",
        &params,
        &as_profile,
        &Entanglement::CLASSICAL,
        out,
    )?;
    quantum_row("quantum", &params, &quantum, &gamma, out)?;
    for (model, outcome) in [
        ("nash_reference", symmetric_nash(k)?),
        ("pareto_reference", pareto_optimum(k)?),
    ] {
        let q = outcome.quantity.to_string();
        let u = outcome.payoff.to_string();
        let qs = [q.as_str(); 7].join(",");
        let us = [u.as_str(); 6].join(",");
        writeln!(out, "{model},0,{qs},{us}")?;
    }
    Ok(EXIT_OK)
}

fn cmd_surface(args: &SurfaceArgs, out: &mut dyn Write) -> CliResult {
    let t = t_axis(args.t.t_min, args.t.t_max, args.t.t_step)?;
    let s = s_axis(args.s_min, args.s_max, args.s_step)?;
    SweepGrid::compute(t, s, args.k)?.write_csv(out)?;
    Ok(EXIT_OK)
}

fn cmd_curves(args: &CurvesArgs, out: &mut dyn Write) -> CliResult {
    let t = t_axis(args.t.t_min, args.t.t_max, args.t.t_step)?;
    let s_list = args
        .s_list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(parse_number)
        .collect::<Result<Vec<_>, _>>()?;
    Curves::compute(t, s_list, args.k)?.write_csv(out)?;
    Ok(EXIT_OK)
}

fn cmd_thresholds(args: &ThresholdArgs, out: &mut dyn Write) -> CliResult {
    let s = args.s.as_deref().map(parse_number).transpose()?;
    let report = ThresholdReport::at(s, args.tol)?;
    let opt = |v: Option<f64>| v.map_or_else(|| "none".to_string(), |v| v.to_string());
    writeln!(out, "quantity,value")?;
    writeln!(out, "s_m,{S_M}")?;
    writeln!(out, "s_c,{S_C}")?;
    if let Some(s) = s {
        writeln!(out, "s,{s}")?;
        writeln!(out, "gamma_m,{}", opt(report.gamma_m))?;
        writeln!(out, "gamma_c,{}", opt(report.gamma_c))?;
        writeln!(out, "t_m,{}", opt(report.gamma_m.map(f64::tanh)))?;
        writeln!(out, "t_c,{}", opt(report.gamma_c.map(f64::tanh)))?;
        writeln!(out, "regime,{}", Regime::classify(s))?;
    }
    Ok(EXIT_OK)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, stderr: &mut dyn Write) -> CliResult {
    let cfg = VerifyConfig {
        seed: args.seed,
        depth: match args.depth {
            DepthArg::Quick => Depth::Quick,
            DepthArg::Full => Depth::Full,
        },
        tol_override: args.tol,
    };
    let checks = run_checks(&cfg)?;
    write_report(&checks, out)?;
    let failed: Vec<_> = checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| c.name)
        .collect();
    if failed.is_empty() {
        writeln!(stderr, "all {} checks passed", checks.len())?;
        Ok(EXIT_OK)
    } else {
        writeln!(
            stderr,
            "{} of {} checks failed: {}",
            failed.len(),
            checks.len(),
            failed.join(", ")
        )?;
        Ok(EXIT_VERIFY_FAILED)
    }
}
