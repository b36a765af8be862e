//! Command-line front end: witness bounds, state evaluation and
//! classification, closest-product-state search, Schmidt verification,
//! family sweeps, and a self-verification suite.
//!
//! JSON is the primary output (CSV for sweeps, aligned tables behind
//! `--format pretty`); identical invocations with the same seed produce
//! byte-identical payloads. Exit codes: 1 input error, 2 verification
//! failure, 3 non-convergence.

mod report;
mod verify;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use report::{command_echo, emit, sha256_hex, to_json_payload, RunReport};
use wwitness::bipartition::{largest_schmidt_coefficient_with, BipartitionSpec};
use wwitness::document::{self, FamilyParams, ResolvedState, StateDocument};
use wwitness::families::{self, FamilyName};
use wwitness::linalg;
use wwitness::optimizer::{self, GridMode, OptimizerConfig};
use wwitness::states::make_w_state;
use wwitness::witness::{
    bounds_table, build_custom_witness, build_witness, expectation, expectation_dense,
    verdict_report, witness_coefficient, witness_coefficient_rational,
};
use wwitness::Error;

#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    fn verification(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::NonConvergence { .. } => 3,
            _ => 1,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OracleMode {
    None,
    Grid,
    Symmetric,
}

#[derive(Parser, Debug)]
#[command(
    name = "wwitness",
    version,
    about = "Entanglement witnesses for N-qubit W states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Qubit count; `verify` also accepts an inclusive range such as 3..6.
    #[arg(long, global = true)]
    n: Option<String>,

    /// Seed for pseudo-random streams.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Convergence tolerance for iterative routines.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,

    /// Output format (JSON by default; CSV applies to sweeps).
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the payload to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficient, eigenvalues and the bound hierarchy for n qubits.
    Info,
    /// Evaluate Tr(Wρ) for a state and classify it.
    Eval(EvalArgs),
    /// Maximize |⟨φ|ψ⟩|² over fully separable product states φ.
    Alpha(AlphaArgs),
    /// Largest Schmidt coefficient across a bipartition.
    Schmidt(SchmidtArgs),
    /// Sweep a parametric family over p and classify each point.
    Sweep(SweepArgs),
    /// Run the self-verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct StateInput {
    /// JSON state document (kinds: pure, ensemble, dense, family).
    #[arg(long)]
    state: Option<PathBuf>,

    /// Family name: w | ghz | acin | symmetric_product | w_ghz_mix | w_white_noise.
    #[arg(long)]
    family: Option<String>,

    /// Family parameters as JSON, e.g. '{"n":3,"p":0.5}'.
    #[arg(long)]
    params: Option<String>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    input: StateInput,

    /// Custom witness coefficient; defaults to c_n = ((n−1)/n)^(n−1).
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Args, Debug)]
struct AlphaArgs {
    #[command(flatten)]
    input: StateInput,

    /// Independent restarts of the alternating search.
    #[arg(long, default_value_t = 32)]
    restarts: usize,

    /// Sweep cap per restart.
    #[arg(long, default_value_t = 500)]
    max_sweeps: usize,

    /// Optional brute-force cross-check.
    #[arg(long, value_enum, default_value_t = OracleMode::None)]
    oracle: OracleMode,

    /// Grid steps per angle for the oracle.
    #[arg(long, default_value_t = 24)]
    grid_steps: usize,
}

#[derive(Args, Debug)]
struct SchmidtArgs {
    #[command(flatten)]
    input: StateInput,

    /// Comma-separated qubit indices of one side, e.g. 2,4.
    #[arg(long)]
    subset: String,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Parametric family: w_ghz_mix | w_white_noise.
    #[arg(long)]
    family: String,

    #[arg(long, default_value_t = 0.0)]
    from: f64,

    #[arg(long, default_value_t = 1.0)]
    to: f64,

    #[arg(long, default_value_t = 0.01)]
    step: f64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Random trials per property suite.
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err)
            if matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            print!("{err}");
            return ExitCode::SUCCESS;
        }
        Err(err) => {
            // single-line reason; argument problems are input errors
            let text = err.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("{first}");
            return ExitCode::from(1);
        }
    };
    let started = Instant::now();
    match run(&cli, started) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

fn parse_single_n(cli: &Cli) -> Result<usize, CliError> {
    let raw = cli
        .n
        .as_deref()
        .ok_or_else(|| CliError::input("missing required flag --n"))?;
    raw.parse::<usize>()
        .map_err(|_| CliError::input(format!("invalid --n {raw:?}: expected an integer")))
}

fn parse_n_range(cli: &Cli, default: (usize, usize)) -> Result<(usize, usize), CliError> {
    let raw = match cli.n.as_deref() {
        Some(raw) => raw,
        None => return Ok(default),
    };
    let parsed = if let Some((lo, hi)) = raw.split_once("..") {
        let lo = lo.trim().parse::<usize>();
        let hi = hi.trim().trim_start_matches('=').parse::<usize>();
        match (lo, hi) {
            (Ok(lo), Ok(hi)) if lo <= hi => Some((lo, hi)),
            _ => None,
        }
    } else {
        raw.parse::<usize>().ok().map(|n| (n, n))
    };
    parsed.ok_or_else(|| {
        CliError::input(format!(
            "invalid --n {raw:?}: expected an integer or an inclusive range like 3..6"
        ))
    })
}

/// Load the state document plus a digest of the exact input bytes.
fn load_document(
    input: &StateInput,
    cli: &Cli,
) -> Result<(StateDocument, String), CliError> {
    match (&input.state, &input.family) {
        (Some(path), None) => {
            let bytes = fs::read(path)
                .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
            let text = String::from_utf8(bytes)
                .map_err(|_| CliError::input(format!("{} is not UTF-8", path.display())))?;
            let doc = document::parse_json(&text)?;
            Ok((doc, sha256_hex(text.as_bytes())))
        }
        (None, Some(name)) => {
            let mut params: FamilyParams = match &input.params {
                Some(text) => serde_json::from_str(text)
                    .map_err(|e| CliError::input(format!("invalid --params: {e}")))?,
                None => FamilyParams::default(),
            };
            if params.n_qubits.is_none() {
                if let Some(raw) = cli.n.as_deref() {
                    params.n_qubits = Some(raw.parse::<usize>().map_err(|_| {
                        CliError::input(format!("invalid --n {raw:?}: expected an integer"))
                    })?);
                }
            }
            let digest_src = format!(
                "family={name};params={}",
                serde_json::to_string(&params).expect("params always serialize")
            );
            Ok((
                StateDocument::Family {
                    name: name.clone(),
                    params,
                },
                sha256_hex(digest_src.as_bytes()),
            ))
        }
        (Some(_), Some(_)) => Err(CliError::input(
            "pass either --state or --family, not both",
        )),
        (None, None) => Err(CliError::input("missing state input: --state or --family")),
    }
}

fn run(cli: &Cli, started: Instant) -> Result<(), CliError> {
    match &cli.command {
        Command::Info => cmd_info(cli, started),
        Command::Eval(args) => cmd_eval(cli, args, started),
        Command::Alpha(args) => cmd_alpha(cli, args, started),
        Command::Schmidt(args) => cmd_schmidt(cli, args, started),
        Command::Sweep(args) => cmd_sweep(cli, args, started),
        Command::Verify(args) => cmd_verify(cli, args, started),
    }
}

fn finish<T: Serialize>(
    cli: &Cli,
    started: Instant,
    digest: Option<String>,
    results: T,
    pretty: Option<String>,
) -> Result<(), CliError> {
    let payload = match cli.format {
        Format::Pretty => pretty.unwrap_or_else(|| {
            let mut text =
                serde_json::to_string_pretty(&results).expect("results always serialize");
            text.push('\n');
            text
        }),
        _ => to_json_payload(&RunReport {
            command: command_echo(),
            input_digest: digest,
            seed: cli.seed,
            results,
        }),
    };
    emit(&payload, cli.out.as_deref(), started.elapsed())
}

// ---------------------------------------------------------------------------
// info
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct InfoResults {
    n_qubits: usize,
    c: f64,
    c_rational: String,
    eigenvalue_positive: f64,
    eigenvalue_negative: f64,
    global_min: f64,
    global_max: f64,
    full_sep_min: f64,
    d_k_min: Vec<f64>,
}

fn cmd_info(cli: &Cli, started: Instant) -> Result<(), CliError> {
    let n = parse_single_n(cli)?;
    let bounds = bounds_table(n)?;
    let (num, den) = witness_coefficient_rational(n)?;
    let results = InfoResults {
        n_qubits: n,
        c: bounds.c,
        c_rational: format!("{num}/{den}"),
        eigenvalue_positive: bounds.c,
        eigenvalue_negative: bounds.c - 1.0,
        global_min: bounds.global_min,
        global_max: bounds.global_max,
        full_sep_min: bounds.full_sep_min,
        d_k_min: bounds.dk_min.clone(),
    };
    let mut pretty = String::new();
    pretty.push_str(&format!("witness coefficient c_{n} = {num}/{den} = {}\n", bounds.c));
    pretty.push_str(&format!(
        "eigenvalues               {} (x{}), {} (x1)\n",
        bounds.c,
        (1u64 << n) - 1,
        bounds.c - 1.0
    ));
    pretty.push_str(&format!(
        "arbitrary states          {} <= Tr(W rho) <= {}\n",
        bounds.global_min, bounds.global_max
    ));
    pretty.push_str("fully separable           Tr(W rho) >= 0\n");
    for (i, thr) in bounds.dk_min.iter().enumerate() {
        pretty.push_str(&format!(
            "biseparable D_{}           Tr(W rho) >= {}\n",
            i + 1,
            thr
        ));
    }
    finish(cli, started, None, results, Some(pretty))
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct EvalResults {
    n_qubits: usize,
    alpha: f64,
    trace: f64,
    /// Trace against the standard coefficient c_n; classification always
    /// refers to this value.
    standard_trace: f64,
    verdict: wwitness::witness::VerdictReport,
}

fn parametric_family(doc: &StateDocument) -> Option<(&str, &FamilyParams)> {
    match doc {
        StateDocument::Family { name, params }
            if name == "w_ghz_mix" || name == "w_white_noise" =>
        {
            Some((name.as_str(), params))
        }
        _ => None,
    }
}

fn cmd_eval(cli: &Cli, args: &EvalArgs, started: Instant) -> Result<(), CliError> {
    let (doc, digest) = load_document(&args.input, cli)?;

    // parametric families evaluate through their exact trace curve, which
    // also covers sizes where the white-noise ensemble is too large to build
    let (n, standard_trace) = if let Some((name, params)) = parametric_family(&doc) {
        let spec = document::family_spec(name, params)?;
        let curve = families::trace_curve(spec.name, spec.n_qubits)?;
        (spec.n_qubits, curve.eval(spec.p))
    } else {
        let resolved = document::resolve(&doc)?;
        let n = resolved.n_qubits();
        let witness = build_witness(n)?;
        let trace = match &resolved {
            ResolvedState::Pure(s) => {
                expectation(&witness, &wwitness::StateEnsemble::from_pure(s.clone()))?
            }
            ResolvedState::Ensemble(e) => expectation(&witness, e)?,
            ResolvedState::Dense(d) => expectation_dense(&witness, d)?,
        };
        (n, trace)
    };

    let c = witness_coefficient(n)?;
    let alpha = args.alpha.unwrap_or(c);
    if args.alpha.is_some() {
        // re-validate through the library path
        build_custom_witness(make_w_state(n)?, alpha)?;
    }
    let trace = alpha - c + standard_trace;
    let verdict = verdict_report(standard_trace, n)?;

    let mut pretty = String::new();
    pretty.push_str(&format!("n = {n}, alpha = {alpha}\n"));
    pretty.push_str(&format!("Tr(W rho)      = {trace}\n"));
    if args.alpha.is_some() {
        pretty.push_str(&format!("standard trace = {standard_trace}\n"));
    }
    pretty.push_str(&format!(
        "not fully separable: {}\nexcluded from D_k:  {:?}\ngenuine entangled:  {}\nmargin to nearest threshold: {}\n",
        verdict.flags.not_fully_separable,
        verdict.flags.excluded_from_dk,
        verdict.flags.genuine_entangled,
        verdict.margin
    ));

    let results = EvalResults {
        n_qubits: n,
        alpha,
        trace,
        standard_trace,
        verdict,
    };
    finish(cli, started, Some(digest), results, Some(pretty))
}

// ---------------------------------------------------------------------------
// alpha
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct OracleResults {
    mode: String,
    grid_steps: usize,
    value: f64,
}

#[derive(Serialize)]
struct AlphaResults {
    n_qubits: usize,
    alpha: f64,
    converged: bool,
    sweeps_used: usize,
    restarts: usize,
    per_restart_values: Vec<f64>,
    argmax_factors: Vec<[[f64; 2]; 2]>,
    oracle: Option<OracleResults>,
}

fn cmd_alpha(cli: &Cli, args: &AlphaArgs, started: Instant) -> Result<(), CliError> {
    let (doc, digest) = load_document(&args.input, cli)?;
    let resolved = document::resolve(&doc)?;
    let target = match resolved {
        ResolvedState::Pure(s) => s,
        _ => {
            return Err(CliError::input(
                "alpha requires a pure target state (ensemble and dense inputs are mixed)",
            ))
        }
    };
    let cfg = OptimizerConfig {
        restarts: args.restarts,
        tol: cli.tol,
        max_sweeps: args.max_sweeps,
        seed: cli.seed,
    };
    let result = optimizer::closest_product_alpha(&target, &cfg)?;
    if !result.converged {
        return Err(CliError {
            code: 3,
            message: format!(
                "a restart hit the sweep cap ({}) before the overlap gain fell below {}",
                args.max_sweeps, cli.tol
            ),
        });
    }

    let oracle = match args.oracle {
        OracleMode::None => None,
        OracleMode::Grid => Some(OracleResults {
            mode: "grid".into(),
            grid_steps: args.grid_steps,
            value: optimizer::brute_force_alpha_grid(&target, args.grid_steps, GridMode::Full)?,
        }),
        OracleMode::Symmetric => Some(OracleResults {
            mode: "symmetric".into(),
            grid_steps: args.grid_steps,
            value: optimizer::brute_force_alpha_grid(
                &target,
                args.grid_steps,
                GridMode::Symmetric,
            )?,
        }),
    };

    let argmax_factors: Vec<[[f64; 2]; 2]> = result
        .argmax
        .factors()
        .iter()
        .map(|f| [[f[0].re, f[0].im], [f[1].re, f[1].im]])
        .collect();

    let mut pretty = format!(
        "alpha = {} after {} sweeps ({} restarts)\n",
        result.alpha, result.sweeps_used, args.restarts
    );
    if let Some(o) = &oracle {
        pretty.push_str(&format!(
            "{} oracle ({} steps/angle): {}\n",
            o.mode, o.grid_steps, o.value
        ));
    }

    let results = AlphaResults {
        n_qubits: target.n_qubits(),
        alpha: result.alpha,
        converged: result.converged,
        sweeps_used: result.sweeps_used,
        restarts: args.restarts,
        per_restart_values: result.per_restart_values,
        argmax_factors,
        oracle,
    };
    finish(cli, started, Some(digest), results, Some(pretty))
}

// ---------------------------------------------------------------------------
// schmidt
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SchmidtResults {
    subset: Vec<usize>,
    sigma_max: f64,
    claim: f64,
    abs_error: f64,
}

fn cmd_schmidt(cli: &Cli, args: &SchmidtArgs, started: Instant) -> Result<(), CliError> {
    let (doc, digest) = load_document(&args.input, cli)?;
    let resolved = document::resolve(&doc)?;
    let state = match resolved {
        ResolvedState::Pure(s) => s,
        _ => {
            return Err(CliError::input(
                "schmidt requires a pure state (mixed states have no Schmidt decomposition)",
            ))
        }
    };
    let subset: Vec<usize> = args
        .subset
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| CliError::input(format!("invalid --subset entry {tok:?}")))
        })
        .collect::<Result<_, _>>()?;
    let cut = BipartitionSpec::new(state.n_qubits(), &subset)?;
    let sigma = largest_schmidt_coefficient_with(&state, &cut, cli.tol, linalg::DEFAULT_MAX_ITER)?;
    let n = state.n_qubits();
    let k = cut.k();
    let claim = ((n - k) as f64 / n as f64).sqrt();
    let results = SchmidtResults {
        subset,
        sigma_max: sigma,
        claim,
        abs_error: (sigma - claim).abs(),
    };
    let pretty = format!(
        "sigma_max = {sigma}\nW-state claim sqrt((n-k)/n) = {claim}\nabs error = {}\n",
        results.abs_error
    );
    finish(cli, started, Some(digest), results, Some(pretty))
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SweepPointResults {
    p: f64,
    trace: f64,
    not_fully_separable: bool,
    excluded_from_dk: Vec<bool>,
    genuine_entangled: bool,
}

#[derive(Serialize)]
struct SweepResults {
    family: String,
    n_qubits: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
    points: Vec<SweepPointResults>,
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs, started: Instant) -> Result<(), CliError> {
    let family = FamilyName::parse(&args.family)?;
    let n = parse_single_n(cli)?;
    let points = families::sweep(family, n, args.from, args.to, args.step)?;

    let note = (family == FamilyName::WGhzMix && n == 3).then(|| {
        "three-tangle analyses certify genuine entanglement of this mixture for p <= 0.373, \
         a region where the witness detects none; the witness detects genuine entanglement \
         only for p > 2/3"
            .to_string()
    });

    if cli.format == Format::Csv {
        let k_max = n / 2;
        let mut csv = String::from("p,trace,not_fully_separable");
        for k in 1..=k_max {
            csv.push_str(&format!(",excluded_d{k}"));
        }
        csv.push_str(",genuine\n");
        for pt in &points {
            csv.push_str(&format!(
                "{},{},{}",
                pt.p,
                pt.trace,
                u8::from(pt.verdict.not_fully_separable)
            ));
            for flag in &pt.verdict.excluded_from_dk {
                csv.push_str(&format!(",{}", u8::from(*flag)));
            }
            csv.push_str(&format!(",{}\n", u8::from(pt.verdict.genuine_entangled)));
        }
        return emit(&csv, cli.out.as_deref(), started.elapsed());
    }

    let results = SweepResults {
        family: family.as_str().into(),
        n_qubits: n,
        note,
        points: points
            .iter()
            .map(|pt| SweepPointResults {
                p: pt.p,
                trace: pt.trace,
                not_fully_separable: pt.verdict.not_fully_separable,
                excluded_from_dk: pt.verdict.excluded_from_dk.clone(),
                genuine_entangled: pt.verdict.genuine_entangled,
            })
            .collect(),
    };
    let mut pretty = format!("{} sweep, n = {n}\n", family.as_str());
    for pt in &results.points {
        pretty.push_str(&format!(
            "p = {:<8} trace = {:<24} flags: nfs={} dk={:?} genuine={}\n",
            pt.p,
            pt.trace,
            u8::from(pt.not_fully_separable),
            pt.excluded_from_dk.iter().map(|f| u8::from(*f)).collect::<Vec<_>>(),
            u8::from(pt.genuine_entangled)
        ));
    }
    finish(cli, started, None, results, Some(pretty))
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(cli: &Cli, args: &VerifyArgs, started: Instant) -> Result<(), CliError> {
    let (n_from, n_to) = parse_n_range(cli, (2, 6))?;
    if n_from < 2 || n_to > 24 {
        return Err(CliError::input(format!(
            "verify range must lie in 2..=24, got {n_from}..={n_to}"
        )));
    }
    let summary = verify::run_suite(n_from, n_to, args.trials, cli.seed);
    let failed = summary.failed;
    let pretty = verify::render_table(&summary);
    finish(cli, started, None, summary, Some(pretty))?;
    if failed > 0 {
        return Err(CliError::verification(format!(
            "{failed} verification check(s) failed"
        )));
    }
    Ok(())
}
