//! Command-line front end. `run` never panics on bad input and never touches
//! the process directly, so it can be driven from tests.
//!
//! Exit codes: 0 success / inequality holds, 1 inequality violated or series
//! diverges, 2 usage or validation error.

use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exponents::{
    check_holder_exponents, parse_factor_list, ExponentPair, ExponentSystem, Rational,
};
use crate::falsify::make_g_eps_k;
use crate::falsify::{
    default_k_values, p_divergence_series, phi_necessity_series, q_scaling_series,
    weak_p_divergence_series, DivergenceReport, Verdict,
};
use crate::holder::verify_embedding;
use crate::holder::{verify_holder, verify_holder_generalized};
use crate::norms::{audit_centered_supremum, norm, oracle_norm, AuditSpec, OracleConfig, Weight};
use crate::phi::{check_eps_almost_decreasing, check_g_p, product_phi, AuditGrid, PhiSpec};
use crate::radial::{ball_volume, product_all, unit_ball_volume, RadialStepFunction};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "MHL_THREADS";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandOutcome {
    fn usage(message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        CommandOutcome {
            exit_code: EXIT_USAGE,
            stdout: String::new(),
            stderr,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "mhl",
    version,
    about = "Morrey-type norms and Hölder inequality checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Norm of a radial step function.
    Norm(NormArgs),
    /// Check the exponent conditions of a Hölder system.
    CheckExponents(ExponentArgs),
    /// Evaluate both sides of a Hölder inequality on concrete functions.
    VerifyHolder(VerifyArgs),
    /// Run a necessity series and report its divergence verdict.
    Falsify(FalsifyArgs),
    /// Audit membership of a weight in G_p (and optionally the eps condition).
    PhiCheck(PhiCheckArgs),
    /// Norm of the indicator of B(0, R).
    ChiNorm(ChiArgs),
    /// Compare the centered supremum with sampled off-center balls.
    AuditCentered(AuditArgs),
    /// Build or load a radial step function and query its integrals.
    Function(FunctionArgs),
    /// Evaluate a weight, or the pointwise product of several.
    PhiEval(PhiEvalArgs),
}

#[derive(Args, Debug)]
struct NormArgs {
    #[arg(long, value_name = "FILE")]
    function: PathBuf,
    #[arg(long)]
    p: Rational,
    #[arg(long, required_unless_present = "phi", conflicts_with = "phi")]
    q: Option<Rational>,
    #[arg(long, value_name = "FILE")]
    phi: Option<PathBuf>,
    #[arg(long)]
    weak: bool,
    /// Use the brute-force grid oracle instead of the exact evaluator.
    #[arg(long)]
    oracle: bool,
    /// Radius grid size of the oracle / tabulated-weight search.
    #[arg(long, default_value_t = 4096)]
    grid: usize,
    /// Refinement points per oracle bracket (0 disables refinement).
    #[arg(long, default_value_t = 64)]
    refine: usize,
}

#[derive(Args, Debug)]
struct ExponentArgs {
    #[arg(long)]
    p: Rational,
    #[arg(long)]
    q: Rational,
    /// Comma-separated factor pairs, e.g. "2/4,2/4".
    #[arg(long)]
    factors: String,
    #[arg(long)]
    d: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VerifyMode {
    Strong,
    Weak,
    GenStrong,
    GenWeak,
    /// Weak norm against strong norm of a single function (--q or --phi).
    Embedding,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, num_args = 1.., required = true, value_name = "FILE")]
    functions: Vec<PathBuf>,
    #[arg(long, value_enum)]
    mode: VerifyMode,
    #[arg(long)]
    p: Rational,
    /// Target q (strong/weak modes).
    #[arg(long)]
    q: Option<Rational>,
    /// Factor pairs (strong/weak modes).
    #[arg(long)]
    factors: Option<String>,
    /// Dimension; defaults to that of the functions.
    #[arg(long)]
    d: Option<usize>,
    /// Comma-separated factor p_i (generalized modes).
    #[arg(long = "factor-ps")]
    factor_ps: Option<String>,
    /// Target weight (generalized modes).
    #[arg(long, value_name = "FILE")]
    phi: Option<PathBuf>,
    /// Factor weights (generalized modes).
    #[arg(long = "factor-phis", num_args = 1.., value_name = "FILE")]
    factor_phis: Vec<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FalsifyMode {
    Q,
    P,
    WeakP,
    Phi,
}

#[derive(Args, Debug)]
struct FalsifyArgs {
    #[arg(long, value_enum)]
    mode: FalsifyMode,
    #[arg(long)]
    p: Rational,
    #[arg(long)]
    q: Option<Rational>,
    #[arg(long)]
    factors: Option<String>,
    #[arg(long)]
    d: usize,
    /// Largest K of the g_{eps,K} series (p and weak-p modes).
    #[arg(long = "Kmax", default_value_t = 10_000)]
    k_max: u64,
    /// Comma-separated radii (q and phi modes).
    #[arg(long)]
    radii: Option<String>,
    #[arg(long)]
    eps: Option<f64>,
    /// Write the series as CSV; "-" sends it to stdout instead of the JSON.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    #[arg(long = "factor-ps")]
    factor_ps: Option<String>,
    #[arg(long, value_name = "FILE")]
    phi: Option<PathBuf>,
    #[arg(long = "factor-phis", num_args = 1.., value_name = "FILE")]
    factor_phis: Vec<PathBuf>,
    /// Weak norms in phi mode.
    #[arg(long)]
    weak: bool,
}

#[derive(Args, Debug)]
struct PhiCheckArgs {
    #[arg(long, value_name = "FILE")]
    phi: PathBuf,
    #[arg(long)]
    p: Rational,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    eps: Option<f64>,
}

#[derive(Args, Debug)]
struct ChiArgs {
    #[arg(long = "R")]
    radius: f64,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    p: Rational,
    #[arg(long, required_unless_present = "phi", conflicts_with = "phi")]
    q: Option<Rational>,
    #[arg(long, value_name = "FILE")]
    phi: Option<PathBuf>,
    #[arg(long)]
    weak: bool,
}

#[derive(Args, Debug)]
struct AuditArgs {
    #[arg(long, value_name = "FILE")]
    function: PathBuf,
    #[arg(long)]
    p: Rational,
    #[arg(long)]
    q: Rational,
    /// Number of sampled (center, radius) pairs.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Monte-Carlo points per pair in dimension two.
    #[arg(long = "mc-samples", default_value_t = 100_000)]
    mc_samples: usize,
}

/// Parses `argv` (including the program name) and executes the command.
pub fn run<S: AsRef<str>>(argv: &[S]) -> CommandOutcome {
    let cli = match Cli::try_parse_from(argv.iter().map(AsRef::as_ref)) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandOutcome {
                    exit_code: code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CommandOutcome {
                    exit_code: code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    if let Err(e) = init_threads() {
        return CommandOutcome::usage(format!("error: {e}"));
    }
    match dispatch(cli.command) {
        Ok(outcome) => outcome,
        Err(e) => CommandOutcome::usage(format!("error: {e}")),
    }
}

fn init_threads() -> Result<()> {
    static INIT: OnceLock<std::result::Result<(), String>> = OnceLock::new();
    INIT.get_or_init(|| {
        let Ok(raw) = std::env::var(THREADS_ENV) else {
            return Ok(());
        };
        let n: usize =
            raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
                format!("invalid {THREADS_ENV}: {raw:?} is not a positive integer")
            })?;
        // a pool configured earlier in the process wins; that is harmless
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
        Ok(())
    })
    .clone()
    .map_err(|reason| Error::validation(THREADS_ENV, reason))
}

fn dispatch(command: Command) -> Result<CommandOutcome> {
    match command {
        Command::Norm(a) => cmd_norm(a),
        Command::CheckExponents(a) => cmd_check_exponents(a),
        Command::VerifyHolder(a) => cmd_verify(a),
        Command::Falsify(a) => cmd_falsify(a),
        Command::PhiCheck(a) => cmd_phi_check(a),
        Command::ChiNorm(a) => cmd_chi(a),
        Command::AuditCentered(a) => cmd_audit(a),
        Command::Function(a) => cmd_function(a),
        Command::PhiEval(a) => cmd_phi_eval(a),
    }
}

fn emit<T: Serialize>(payload: &T, ok: bool, summary: Option<String>) -> Result<CommandOutcome> {
    let mut stdout = serde_json::to_string(payload)?;
    stdout.push('\n');
    Ok(CommandOutcome {
        exit_code: if ok { EXIT_OK } else { EXIT_FAILED },
        stdout,
        stderr: summary.map(|s| s + "\n").unwrap_or_default(),
    })
}

fn load_json<T: DeserializeOwned>(path: &Path, flag: &str) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::validation(flag, format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::validation(flag, format!("malformed JSON in {}: {e}", path.display())))
}

fn load_function(path: &Path) -> Result<RadialStepFunction> {
    load_json(path, "--function")
}

fn load_phi(path: &Path, flag: &str) -> Result<PhiSpec> {
    load_json(path, flag)
}

fn parse_rational_list(s: &str, flag: &str) -> Result<Vec<Rational>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::validation(flag, format!("cannot parse {t:?} as a rational")))
        })
        .collect()
}

fn parse_float_list(s: &str, flag: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::validation(flag, format!("cannot parse {t:?} as a number")))
        })
        .collect()
}

fn require<T>(v: Option<T>, flag: &str, mode: &str) -> Result<T> {
    v.ok_or_else(|| Error::validation(flag, format!("required in {mode} mode")))
}

fn build_system(p: Rational, q: Rational, factors: &str, d: usize) -> Result<ExponentSystem> {
    ExponentSystem::new(ExponentPair::new(p, q)?, parse_factor_list(factors)?, d)
}

fn cmd_norm(a: NormArgs) -> Result<CommandOutcome> {
    let f = load_function(&a.function)?;
    let weight = match (&a.q, &a.phi) {
        (Some(q), _) => Weight::Classical { q: *q },
        (None, Some(path)) => Weight::Phi(load_phi(path, "--phi")?),
        (None, None) => return Err(Error::validation("--q", "either --q or --phi is required")),
    };
    let cfg = OracleConfig {
        radius_grid_size: a.grid,
        refine_points: a.refine,
        ..OracleConfig::default()
    };
    let result = if a.oracle {
        oracle_norm(&f, a.p, &weight, a.weak, &cfg)?
    } else {
        norm(&f, a.p, &weight, a.weak, &cfg)?
    };
    emit(&result, true, None)
}

fn cmd_check_exponents(a: ExponentArgs) -> Result<CommandOutcome> {
    let system = build_system(a.p, a.q, &a.factors, a.d)?;
    let report = check_holder_exponents(&system)?;
    let ok = report.both_hold();
    let summary = format!(
        "{}: q-condition {}, p-condition {}",
        if ok { "PASS" } else { "FAIL" },
        report.q_condition_holds,
        report.p_condition_holds
    );
    emit(&report, ok, Some(summary))
}

fn cmd_verify(a: VerifyArgs) -> Result<CommandOutcome> {
    let functions = a
        .functions
        .iter()
        .map(|p| load_json::<RadialStepFunction>(p, "--functions"))
        .collect::<Result<Vec<_>>>()?;
    let cfg = OracleConfig::default();
    let record = match a.mode {
        VerifyMode::Embedding => {
            let [f] = functions.as_slice() else {
                return Err(Error::validation(
                    "--functions",
                    format!("embedding mode takes one function, got {}", functions.len()),
                ));
            };
            let weight = match (a.q, &a.phi) {
                (Some(q), _) => Weight::Classical { q },
                (None, Some(path)) => Weight::Phi(load_phi(path, "--phi")?),
                (None, None) => {
                    return Err(Error::validation("--q", "either --q or --phi is required"))
                }
            };
            verify_embedding(f, a.p, &weight, &cfg)?
        }
        VerifyMode::Strong | VerifyMode::Weak => {
            let mode = if matches!(a.mode, VerifyMode::Weak) {
                "weak"
            } else {
                "strong"
            };
            let q = require(a.q, "--q", mode)?;
            let factors = require(a.factors.as_deref(), "--factors", mode)?;
            let d = a.d.unwrap_or_else(|| functions[0].dim());
            let system = build_system(a.p, q, factors, d)?;
            verify_holder(&functions, &system, matches!(a.mode, VerifyMode::Weak))?
        }
        VerifyMode::GenStrong | VerifyMode::GenWeak => {
            let mode = if matches!(a.mode, VerifyMode::GenWeak) {
                "gen-weak"
            } else {
                "gen-strong"
            };
            let ps = parse_rational_list(
                require(a.factor_ps.as_deref(), "--factor-ps", mode)?,
                "--factor-ps",
            )?;
            let phi = load_phi(&require(a.phi, "--phi", mode)?, "--phi")?;
            let factor_phis = a
                .factor_phis
                .iter()
                .map(|p| load_phi(p, "--factor-phis"))
                .collect::<Result<Vec<_>>>()?;
            if let Some(d) = a.d {
                if let Some(f) = functions.iter().find(|f| f.dim() != d) {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: f.dim(),
                    });
                }
            }
            verify_holder_generalized(
                &functions,
                a.p,
                &ps,
                &phi,
                &factor_phis,
                matches!(a.mode, VerifyMode::GenWeak),
                &cfg,
            )?
        }
    };
    let summary = format!(
        "{}: lhs {} {} {} x rhs {}",
        if record.holds { "PASS" } else { "FAIL" },
        record.lhs,
        if record.holds { "<=" } else { ">" },
        record.multiplier,
        record.rhs
    );
    emit(&record, record.holds, Some(summary))
}

fn default_radii() -> Vec<f64> {
    // 5e-3 .. 5, three points per decade
    (0..10).map(|i| 5e-3 * 10f64.powf(i as f64 / 3.0)).collect()
}

fn cmd_falsify(a: FalsifyArgs) -> Result<CommandOutcome> {
    let radii = match &a.radii {
        Some(s) => Some(parse_float_list(s, "--radii")?),
        None => None,
    };
    let report: DivergenceReport = match a.mode {
        FalsifyMode::Q | FalsifyMode::P | FalsifyMode::WeakP => {
            let mode = match a.mode {
                FalsifyMode::Q => "q",
                FalsifyMode::P => "p",
                _ => "weak-p",
            };
            let q = require(a.q, "--q", mode)?;
            let factors = require(a.factors.as_deref(), "--factors", mode)?;
            let system = build_system(a.p, q, factors, a.d)?;
            match a.mode {
                FalsifyMode::Q => q_scaling_series(&system, &radii.unwrap_or_else(default_radii))?,
                FalsifyMode::P => p_divergence_series(&system, &default_k_values(a.k_max), a.eps)?,
                _ => weak_p_divergence_series(&system, &default_k_values(a.k_max), a.eps)?,
            }
        }
        FalsifyMode::Phi => {
            let ps = parse_rational_list(
                require(a.factor_ps.as_deref(), "--factor-ps", "phi")?,
                "--factor-ps",
            )?;
            let phi = load_phi(&require(a.phi, "--phi", "phi")?, "--phi")?;
            let factor_phis = a
                .factor_phis
                .iter()
                .map(|p| load_phi(p, "--factor-phis"))
                .collect::<Result<Vec<_>>>()?;
            let radii = radii.unwrap_or_else(|| vec![1.0, 4.0, 16.0, 64.0, 100.0, 400.0]);
            phi_necessity_series(
                a.p,
                &ps,
                &phi,
                &factor_phis,
                a.d,
                &radii,
                a.weak,
                &OracleConfig::default(),
            )?
        }
    };
    let ok = report.verdict != Verdict::Diverges;
    let summary = format!(
        "{}: verdict {}, fitted slope {}, predicted {:.6}, spread {:.4}",
        if ok { "PASS" } else { "FAIL" },
        json!(report.verdict).as_str().unwrap_or("?"),
        report
            .fitted_slope
            .map_or_else(|| "none".to_string(), |s| format!("{s:.6}")),
        report.predicted_slope,
        report.spread
    );
    match a.csv.as_deref() {
        Some(path) if path == Path::new("-") => {
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            Ok(CommandOutcome {
                exit_code: if ok { EXIT_OK } else { EXIT_FAILED },
                stdout: String::from_utf8(buf).expect("csv output is utf-8"),
                stderr: summary + "\n",
            })
        }
        Some(path) => {
            report.write_csv_file(path).map_err(|e| {
                Error::validation("--csv", format!("cannot write {}: {e}", path.display()))
            })?;
            emit(&report, ok, Some(summary))
        }
        None => emit(&report, ok, Some(summary)),
    }
}

fn cmd_phi_check(a: PhiCheckArgs) -> Result<CommandOutcome> {
    let phi = load_phi(&a.phi, "--phi")?;
    let grid = AuditGrid::standard();
    let gp = check_g_p(&phi, a.p, a.d, &grid)?;
    let eps = match a.eps {
        Some(e) => Some(check_eps_almost_decreasing(&phi, a.p, e, &grid)?),
        None => None,
    };
    let ok = gp.member && eps.as_ref().is_none_or(|r| r.holds);
    let payload = json!({ "g_p": gp, "eps": eps });
    let mut summary = format!(
        "{}: member of G_p {}",
        if ok { "PASS" } else { "FAIL" },
        gp.member
    );
    if let Some(r) = &eps {
        summary += &format!(", eps-condition {}", r.holds);
    }
    emit(&payload, ok, Some(summary))
}

fn cmd_chi(a: ChiArgs) -> Result<CommandOutcome> {
    let chi = RadialStepFunction::indicator_ball(a.radius, a.d)?;
    let (weight, closed_form) = match (&a.q, &a.phi) {
        (Some(q), _) => (
            Weight::Classical { q: *q },
            ball_volume(a.d, a.radius).powf(q.recip()?.to_f64()),
        ),
        (None, Some(path)) => {
            let phi = load_phi(path, "--phi")?;
            let c = phi.eval(a.radius).recip();
            (Weight::Phi(phi), c)
        }
        (None, None) => return Err(Error::validation("--q", "either --q or --phi is required")),
    };
    let result = norm(&chi, a.p, &weight, a.weak, &OracleConfig::default())?;
    // for phi weights the value at r = R is a lower bound, not the norm
    let payload = json!({
        "norm": result,
        "closed_form": closed_form,
        "closed_form_kind": if a.q.is_some() { "exact" } else { "lower-bound" },
    });
    emit(&payload, true, None)
}

fn cmd_audit(a: AuditArgs) -> Result<CommandOutcome> {
    let f = load_function(&a.function)?;
    let spec = AuditSpec {
        pairs: a.samples,
        seed: a.seed,
        mc_samples: a.mc_samples,
        centers: None,
    };
    let report = audit_centered_supremum(&f, a.p, a.q, &spec)?;
    let allowance = if f.dim() == 1 {
        1e-12 * report.centered_value
    } else {
        3.0 * report.standard_error
    };
    let ok = report.margin >= -allowance;
    let summary = format!(
        "{}: margin {} (allowance {allowance:e})",
        if ok { "PASS" } else { "FAIL" },
        report.margin
    );
    emit(&report, ok, Some(summary))
}

#[derive(Args, Debug)]
struct FunctionArgs {
    /// Load the function from a JSON file.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["indicator", "g_eps"])]
    function: Option<PathBuf>,
    /// Indicator of B(0, R) (needs --d).
    #[arg(long, value_name = "R", conflicts_with = "g_eps")]
    indicator: Option<f64>,
    /// The thinning-annuli function g_{eps,K} (needs --K and --d).
    #[arg(long = "g-eps", value_name = "EPS", requires = "k")]
    g_eps: Option<f64>,
    #[arg(long = "K")]
    k: Option<u64>,
    #[arg(long)]
    d: Option<usize>,
    /// Multiply pointwise by these functions.
    #[arg(long, num_args = 1.., value_name = "FILE")]
    times: Vec<PathBuf>,
    /// Radius for the integral and measure queries.
    #[arg(long)]
    r: Option<f64>,
    /// Exponent for `int_{B(a, r)} |f|^p` (needs --r).
    #[arg(long)]
    p: Option<Rational>,
    /// Level for `|{|f| > gamma} cap B(0, r)|` (needs --r).
    #[arg(long)]
    gamma: Option<f64>,
    /// Center for the off-center integral in dimension one (needs --r, --p).
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
}

#[derive(Args, Debug)]
struct PhiEvalArgs {
    /// One or more weights; several are multiplied pointwise.
    #[arg(long, num_args = 1.., required = true, value_name = "FILE")]
    phi: Vec<PathBuf>,
    #[arg(long)]
    r: f64,
}

fn cmd_function(a: FunctionArgs) -> Result<CommandOutcome> {
    let dim = |what: &str| {
        a.d.ok_or_else(|| Error::validation("--d", format!("required with {what}")))
    };
    let base = match (&a.function, a.indicator, a.g_eps) {
        (Some(path), _, _) => load_function(path)?,
        (None, Some(radius), _) => RadialStepFunction::indicator_ball(radius, dim("--indicator")?)?,
        (None, None, Some(eps)) => {
            let k =
                a.k.ok_or_else(|| Error::validation("--K", "required with --g-eps"))?;
            make_g_eps_k(eps, k, dim("--g-eps")?)?
        }
        (None, None, None) => {
            return Err(Error::validation(
                "--function",
                "one of --function, --indicator or --g-eps is required",
            ))
        }
    };
    let mut factors = vec![base];
    for path in &a.times {
        factors.push(load_json(path, "--times")?);
    }
    let f = product_all(&factors)?;
    let mut payload = json!({
        "function": f,
        "digest": f.digest(),
        "unit_ball_volume": unit_ball_volume(f.dim()),
        "support_measure": f.support_measure() + 0.0,
    });
    if let Some(r) = a.r {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::validation("--r", format!("{r} is not positive")));
        }
        payload["ball_volume"] = json!(ball_volume(f.dim(), r));
        if let Some(p) = a.p {
            payload["ball_integral"] = json!(f.ball_integral_power(p, r));
            if let Some(center) = a.a {
                payload["offcenter_integral"] = json!(f.offcenter_integral_1d(center, r, p)?);
            }
        }
        if let Some(gamma) = a.gamma {
            if gamma.is_nan() || gamma < 0.0 {
                return Err(Error::validation("--gamma", format!("{gamma} is negative")));
            }
            payload["superlevel_measure"] = json!(f.superlevel_measure(gamma, r) + 0.0);
        }
    } else if a.p.is_some() || a.gamma.is_some() || a.a.is_some() {
        return Err(Error::validation(
            "--r",
            "required with --p, --gamma or --a",
        ));
    }
    emit(&payload, true, None)
}

fn cmd_phi_eval(a: PhiEvalArgs) -> Result<CommandOutcome> {
    if !(a.r > 0.0 && a.r.is_finite()) {
        return Err(Error::validation("--r", format!("{} is not positive", a.r)));
    }
    let specs = a
        .phi
        .iter()
        .map(|p| load_phi(p, "--phi"))
        .collect::<Result<Vec<_>>>()?;
    let product = product_phi(&specs)?;
    let payload = json!({ "phi": product, "r": a.r, "value": product.eval(a.r) });
    emit(&payload, true, None)
}
