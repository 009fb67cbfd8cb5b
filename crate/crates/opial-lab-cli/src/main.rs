//! `opial-lab` — command-line front end for the inequality toolkit.
//!
//! Subcommands expose the library's computations with machine-readable
//! output:
//!
//! * `constant` — optimal interpolation constant by inverse iteration,
//!   compared against the two closed forms (JSON report or CSV row);
//! * `verify`   — seeded random-corpus soundness sweep for one inequality
//!   (summary on stdout, per-sample CSV via `--out`);
//! * `extremal` — Emden–Fowler ground state by shooting or first-integral
//!   inversion (profile CSV plus JSON diagnostics sidecar);
//! * `sweep`    — constant comparison across a range of exponents (CSV);
//! * `bounds`   — a-priori energy threshold check for computed solutions
//!   (JSON check report).
//!
//! Contract: exit 0 on success, 1 on usage errors, 2 on numerical
//! failures (non-convergence, solver breakdown), 3 when checks fail or
//! preconditions are violated.  Every JSON document is wrapped as
//! `{"schema_version": 1, "kind": ..., "report": ...}` and validates
//! against `schemas/report.schema.json`.  Output is deterministic for
//! fixed flags and seed; files are never overwritten without `--force`.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use opial_lab::emdenfowler::{self, ExtremalProfile};
use opial_lab::funcspace::SineSeries;
use opial_lab::inequalities::{self, CheckReport};
use opial_lab::variational::{self, ConstantReport};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Version stamp of the JSON output layout.
const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "opial-lab",
    version,
    about = "Numerical laboratory for Wirtinger/Opial-type inequalities \
             and Emden-Fowler extremals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the optimal interpolation constant and compare it with the
    /// closed forms.
    Constant(ConstantArgs),
    /// Run one inequality over a seeded random corpus and report
    /// violations.
    Verify(VerifyArgs),
    /// Construct an Emden-Fowler ground state and export profile +
    /// diagnostics.
    Extremal(ExtremalArgs),
    /// Tabulate the three constants over a range of exponents.
    Sweep(SweepArgs),
    /// Evaluate the a-priori energy lower bound for a computed solution.
    Bounds(BoundsArgs),
}

#[derive(Args)]
struct ConstantArgs {
    /// Exponent p (p = 1 is the linear consistency limit).
    #[arg(long)]
    p: f64,
    /// Domain length L.
    #[arg(long = "L", default_value_t = 1.0)]
    l: f64,
    /// Grid intervals for the inverse iteration.
    #[arg(long, default_value_t = 2048)]
    n: usize,
    /// Relative J-change tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Iteration cap.
    #[arg(long = "max-iter", default_value_t = 500)]
    max_iter: usize,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Which inequality to exercise.
    #[arg(value_enum)]
    inequality: Inequality,
    /// Number of random trial functions.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Base RNG seed; sample i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of sine modes per sample.
    #[arg(long = "K", default_value_t = 8)]
    k: usize,
    /// Spectral decay exponent of the random coefficients.
    #[arg(long, default_value_t = 1.0)]
    decay: f64,
    /// Domain length L.
    #[arg(long = "L", default_value_t = 1.0)]
    l: f64,
    /// Exponent p (used by the interpolation check).
    #[arg(long, default_value_t = 3.0)]
    p: f64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ExtremalArgs {
    /// Exponent p.
    #[arg(long)]
    p: f64,
    /// Multiplier mu.
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    /// Domain length L.
    #[arg(long = "L", default_value_t = 1.0)]
    l: f64,
    /// RK4 steps / output resolution.
    #[arg(long, default_value_t = 4000)]
    n: usize,
    /// Boundary defect tolerance (relative to the amplitude).
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Construction method.
    #[arg(long, value_enum, default_value_t = Method::Shoot)]
    method: Method,
    /// Run both methods and report their sup-norm discrepancy.
    #[arg(long)]
    compare: bool,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Lower end of the exponent range (1 allowed as consistency row).
    #[arg(long = "p-min")]
    p_min: f64,
    /// Upper end of the exponent range.
    #[arg(long = "p-max")]
    p_max: f64,
    /// Number of rows (inclusive endpoints).
    #[arg(long, default_value_t = 9)]
    steps: usize,
    /// Domain length L.
    #[arg(long = "L", default_value_t = 1.0)]
    l: f64,
    /// Grid intervals per maximize run.
    #[arg(long, default_value_t = 2048)]
    n: usize,
    /// Relative J-change tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Iteration cap per row.
    #[arg(long = "max-iter", default_value_t = 500)]
    max_iter: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct BoundsArgs {
    /// Exponent p.
    #[arg(long)]
    p: f64,
    /// Coefficient lambda of the boundary value problem.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Domain length L.
    #[arg(long = "L", default_value_t = 1.0)]
    l: f64,
    /// Threshold variant.
    #[arg(long, value_enum, default_value_t = Mode::Dirichlet)]
    mode: Mode,
    /// RK4 steps for the solve supplying E.
    #[arg(long, default_value_t = 4000)]
    n: usize,
    /// Boundary defect tolerance for the solve.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct OutArgs {
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Allow overwriting an existing output file.
    #[arg(long)]
    force: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Shoot,
    Quadrature,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Dirichlet,
    Meanzero,
}

#[derive(Clone, Copy, ValueEnum)]
enum Inequality {
    Wirtinger,
    Opial,
    Chain,
    Interpolation,
    Meanzero,
}

impl Inequality {
    fn name(self) -> &'static str {
        match self {
            Inequality::Wirtinger => "wirtinger",
            Inequality::Opial => "opial",
            Inequality::Chain => "chain",
            Inequality::Interpolation => "interpolation",
            Inequality::Meanzero => "meanzero",
        }
    }
}

/// A failure with its contractual exit code.
enum Failure {
    /// Bad arguments or refused overwrite — exit 1.
    Usage(String),
    /// Numerical breakdown (solver, accuracy, non-convergence) — exit 2.
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Numerical(_) => 2,
        }
    }
    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<opial_lab::Error> for Failure {
    fn from(err: opial_lab::Error) -> Self {
        match err {
            // Invalid parameter values are usage errors: the command never
            // started computing.
            opial_lab::Error::Domain(_) => Failure::Usage(err.to_string()),
            _ => Failure::Numerical(err.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help/--version are successful terminations; everything
            // else is a usage error with exit code 1 per the contract.
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0u8,
                _ => 1u8,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Constant(args) => cmd_constant(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Extremal(args) => cmd_extremal(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Bounds(args) => cmd_bounds(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

// ---------------------------------------------------------------------
// constant
// ---------------------------------------------------------------------

fn cmd_constant(args: ConstantArgs) -> Result<u8, Failure> {
    let report = variational::maximize(args.p, args.l, args.n, args.tol, args.max_iter)?;
    let body = match args.format {
        Format::Json => json_document("constant_report", &report)?,
        Format::Csv => {
            let mut csv = String::from(SWEEP_HEADER);
            csv.push('\n');
            csv.push_str(&sweep_row(&report));
            csv.push('\n');
            csv
        }
    };
    emit(&args.out, &body, || constant_summary(&report))?;
    // Non-convergence is a numerical failure by contract, but the report
    // above is still written so the partial result is inspectable.
    if report.converged {
        Ok(0)
    } else {
        Err(Failure::Numerical(format!(
            "maximize did not converge within {} iterations (last J = {:.10e})",
            report.iterations, report.c_maximized
        )))
    }
}

fn constant_summary(report: &ConstantReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "p = {}, L = {}", report.p, report.l);
    let _ = writeln!(
        s,
        "c_maximized     = {:.10e}   ({} iterations, converged = {})",
        report.c_maximized, report.iterations, report.converged
    );
    let _ = writeln!(
        s,
        "c_closed_form   = {:.10e}   rel diff {:.10e}",
        report.c_closed_form, report.rel_diff_max_closed
    );
    let _ = writeln!(
        s,
        "c_paper_printed = {:.10e}   rel diff {:.10e}",
        report.c_paper_printed, report.rel_diff_max_printed
    );
    s
}

// ---------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------

fn cmd_verify(args: VerifyArgs) -> Result<u8, Failure> {
    if args.samples == 0 {
        return Err(Failure::Usage("--samples must be at least 1".into()));
    }
    // The interpolation check needs a constant: the closed form, which the
    // test suite pins against the variational maximizer.
    let interp_c = match args.inequality {
        Inequality::Interpolation => Some(variational::closed_form_constant(args.p, args.l)?),
        _ => None,
    };

    let mut rows = String::from("sample,name,lhs,rhs,constant,ratio,holds,margin\n");
    let mut passed = 0usize;
    let mut failed = 0usize;
    let mut preconditions = 0usize;
    let mut worst_margin = f64::INFINITY;

    for i in 0..args.samples {
        let seed = args.seed.wrapping_add(i as u64);
        let u = sample_trial(args.inequality, args.k, args.decay, seed, args.l)?;
        let reports: Result<Vec<CheckReport>, opial_lab::Error> = match args.inequality {
            Inequality::Wirtinger => Ok(vec![inequalities::wirtinger_check(&u)]),
            Inequality::Opial => inequalities::opial_check(&u).map(|r| vec![r]),
            Inequality::Chain => Ok(inequalities::chain_check(&u).to_vec()),
            Inequality::Interpolation => {
                inequalities::interpolation_check(&u, args.p, interp_c.unwrap()).map(|r| vec![r])
            }
            Inequality::Meanzero => inequalities::mean_zero_check(&u).map(|r| vec![r]),
        };
        match reports {
            Ok(reports) => {
                let all_hold = reports.iter().all(|r| r.holds);
                if all_hold {
                    passed += 1;
                } else {
                    failed += 1;
                }
                for r in &reports {
                    worst_margin = worst_margin.min(r.margin);
                    let _ = writeln!(
                        rows,
                        "{i},{},{},{},{},{},{},{}",
                        r.name, r.lhs, r.rhs, r.constant, r.ratio, r.holds, r.margin
                    );
                }
            }
            Err(opial_lab::Error::Precondition(_)) => {
                preconditions += 1;
            }
            Err(other) => return Err(other.into()),
        }
    }

    let mut summary = format!(
        "{}: {passed}/{} samples passed",
        args.inequality.name(),
        args.samples
    );
    if worst_margin.is_finite() {
        let _ = write!(summary, ", worst margin {worst_margin:.10e}");
    }
    if preconditions > 0 {
        let _ = write!(summary, ", {preconditions} precondition failures");
    }
    println!("{summary}");

    if let Some(path) = &args.out.out {
        ensure_writable(path, args.out.force)?;
        write_file(path, &rows)?;
    }
    Ok(if failed > 0 || preconditions > 0 { 3 } else { 0 })
}

/// Seeded trial function for the verify corpus.  The mean-zero check gets
/// an exactly mean-zero corpus: sin(kπx/L) has zero mean iff k is even,
/// so odd modes are dropped.  Samples that nevertheless fail a
/// precondition are counted and reported rather than silently skipped.
fn sample_trial(
    inequality: Inequality,
    k: usize,
    decay: f64,
    seed: u64,
    l: f64,
) -> Result<SineSeries, Failure> {
    let raw = SineSeries::sample_random(k, decay, seed, l)?;
    match inequality {
        Inequality::Meanzero => {
            let coeffs: Vec<f64> = raw
                .coeffs()
                .iter()
                .enumerate()
                .map(|(idx, a)| if (idx + 1) % 2 == 0 { *a } else { 0.0 })
                .collect();
            Ok(SineSeries::new(l, coeffs)?)
        }
        _ => Ok(raw),
    }
}

// ---------------------------------------------------------------------
// extremal
// ---------------------------------------------------------------------

/// JSON sidecar for a computed profile: the profile diagnostics plus the
/// two closed-form candidates for μ given the computed amplitude, so the
/// report itself shows which formula the solve supports.
#[derive(Serialize)]
struct ExtremalSidecar<'a> {
    #[serde(flatten)]
    profile: &'a ExtremalProfile,
    mu_predicted_scaling: f64,
    mu_predicted_flipped: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    method_discrepancy_sup: Option<f64>,
}

fn cmd_extremal(args: ExtremalArgs) -> Result<u8, Failure> {
    let primary = build_profile(args.method, &args)?;
    let discrepancy = if args.compare {
        let other = match args.method {
            Method::Shoot => Method::Quadrature,
            Method::Quadrature => Method::Shoot,
        };
        let secondary = build_profile(other, &args)?;
        Some(sup_gap(&primary, &secondary))
    } else {
        None
    };

    let sidecar = ExtremalSidecar {
        profile: &primary,
        mu_predicted_scaling: emdenfowler::mu_from_amplitude(args.p, args.l, primary.amplitude)?,
        mu_predicted_flipped: emdenfowler::mu_exponent_flipped(
            args.p,
            args.l,
            primary.amplitude,
        )?,
        method_discrepancy_sup: discrepancy,
    };
    let json = json_document("extremal_profile", &sidecar)?;

    match &args.out.out {
        Some(path) => {
            // CSV at the given path, sidecar next to it with a .json
            // extension.
            let sidecar_path = path.with_extension("json");
            ensure_writable(path, args.out.force)?;
            ensure_writable(&sidecar_path, args.out.force)?;
            write_file(path, &primary.profile.to_csv())?;
            write_file(&sidecar_path, &json)?;
            let mut line = format!(
                "p = {}, mu = {}, A = {:.10e}, E = {:.10e}",
                primary.p, primary.mu, primary.amplitude, primary.energy
            );
            if let Some(d) = discrepancy {
                let _ = write!(line, ", method discrepancy {d:.10e}");
            }
            println!("{line}");
            println!(
                "profile -> {}, sidecar -> {}",
                path.display(),
                sidecar_path.display()
            );
        }
        None => print!("{json}"),
    }
    Ok(0)
}

fn build_profile(method: Method, args: &ExtremalArgs) -> Result<ExtremalProfile, Failure> {
    match method {
        Method::Shoot => Ok(emdenfowler::shoot(args.p, args.mu, args.l, args.tol, args.n)?),
        Method::Quadrature => {
            if args.p == 1.0 {
                // The linear case has a single construction (the sine
                // arch); shooting performs the eigenvalue validation.
                return Ok(emdenfowler::shoot(args.p, args.mu, args.l, args.tol, args.n)?);
            }
            let product = emdenfowler::mu_amplitude_product(args.p, args.l)?;
            let amplitude = (product / args.mu).powf(1.0 / (args.p - 1.0));
            Ok(emdenfowler::profile_from_first_integral(
                args.p, args.l, amplitude, args.n,
            )?)
        }
    }
}

fn sup_gap(a: &ExtremalProfile, b: &ExtremalProfile) -> f64 {
    a.profile
        .values()
        .iter()
        .zip(b.profile.values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0f64, f64::max)
}

// ---------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------

const SWEEP_HEADER: &str = "p,L,c_maximized,c_closed_form,c_paper_printed,\
rel_diff_max_closed,rel_diff_max_printed,iterations,converged";

fn sweep_row(r: &ConstantReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}",
        r.p,
        r.l,
        r.c_maximized,
        r.c_closed_form,
        r.c_paper_printed,
        r.rel_diff_max_closed,
        r.rel_diff_max_printed,
        r.iterations,
        r.converged
    )
}

fn cmd_sweep(args: SweepArgs) -> Result<u8, Failure> {
    if args.steps < 2 {
        return Err(Failure::Usage(format!(
            "--steps must be at least 2, got {}",
            args.steps
        )));
    }
    if !(args.p_min >= 1.0 && args.p_max > args.p_min) {
        return Err(Failure::Usage(format!(
            "need 1 <= p-min < p-max, got p-min = {}, p-max = {}",
            args.p_min, args.p_max
        )));
    }
    let ps: Vec<f64> = (0..args.steps)
        .map(|i| {
            args.p_min + (args.p_max - args.p_min) * i as f64 / (args.steps - 1) as f64
        })
        .collect();

    // Fan rows out across worker threads (capped by OPIAL_LAB_THREADS);
    // each slot is written by exactly one worker, and the output order is
    // the index order regardless of completion order.
    let threads = sweep_threads(ps.len());
    let mut slots: Vec<Option<opial_lab::Result<ConstantReport>>> = Vec::new();
    slots.resize_with(ps.len(), || None);
    let chunk = ps.len().div_ceil(threads);
    std::thread::scope(|scope| {
        for (slot_chunk, p_chunk) in slots.chunks_mut(chunk).zip(ps.chunks(chunk)) {
            scope.spawn(move || {
                for (slot, &p) in slot_chunk.iter_mut().zip(p_chunk) {
                    *slot = Some(variational::maximize(
                        p,
                        args.l,
                        args.n,
                        args.tol,
                        args.max_iter,
                    ));
                }
            });
        }
    });

    let mut csv = String::from(SWEEP_HEADER);
    csv.push('\n');
    let mut all_converged = true;
    for slot in slots {
        let report = slot.expect("every sweep slot is filled")?;
        all_converged &= report.converged;
        csv.push_str(&sweep_row(&report));
        csv.push('\n');
    }

    emit(&args.out, &csv, || {
        format!(
            "sweep over p in [{}, {}] ({} rows) written\n",
            args.p_min, args.p_max, args.steps
        )
    })?;
    if all_converged {
        Ok(0)
    } else {
        Err(Failure::Numerical(
            "one or more sweep rows did not converge (see the converged column)".into(),
        ))
    }
}

fn sweep_threads(rows: usize) -> usize {
    let available = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    let cap = std::env::var("OPIAL_LAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|v| *v > 0)
        .unwrap_or(available);
    cap.min(rows).max(1)
}

// ---------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------

fn cmd_bounds(args: BoundsArgs) -> Result<u8, Failure> {
    // Solve the BVP at μ = λ to obtain the energy of the actual solution.
    let profile = emdenfowler::shoot(args.p, args.lambda, args.l, args.tol, args.n)?;
    let report = match args.mode {
        Mode::Dirichlet => {
            inequalities::energy_lower_bound(args.p, args.lambda, args.l, profile.energy)?
        }
        Mode::Meanzero => {
            inequalities::mean_zero_energy_bound(args.p, args.lambda, args.l, profile.energy)?
        }
    };
    let json = json_document("check_report", &report)?;
    emit(&args.out, &json, || {
        format!(
            "{}: threshold {:.10e} vs E^((p-1)/2) = {:.10e} -> holds = {} (E = {:.10e})\n",
            report.name, report.lhs, report.rhs, report.holds, profile.energy
        )
    })?;
    Ok(if report.holds { 0 } else { 3 })
}

// ---------------------------------------------------------------------
// output plumbing
// ---------------------------------------------------------------------

/// Serializes a report into the versioned document wrapper.
fn json_document<T: Serialize>(kind: &'static str, report: &T) -> Result<String, Failure> {
    #[derive(Serialize)]
    struct Document<'a, T: Serialize> {
        schema_version: u32,
        kind: &'static str,
        report: &'a T,
    }
    let doc = Document {
        schema_version: SCHEMA_VERSION,
        kind,
        report,
    };
    let mut body = serde_json::to_string_pretty(&doc)
        .map_err(|e| Failure::Numerical(format!("serialization failed: {e}")))?;
    body.push('\n');
    Ok(body)
}

/// Writes `body` to `--out` (printing the human `summary` to stdout), or
/// prints `body` itself when no output file was requested.
fn emit(
    out: &OutArgs,
    body: &str,
    summary: impl FnOnce() -> String,
) -> Result<(), Failure> {
    match &out.out {
        Some(path) => {
            ensure_writable(path, out.force)?;
            write_file(path, body)?;
            print!("{}", summary());
            Ok(())
        }
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

/// Generated reports are evidence: refuse to clobber one unless --force.
fn ensure_writable(path: &Path, force: bool) -> Result<(), Failure> {
    if path.exists() && !force {
        return Err(Failure::Usage(format!(
            "refusing to overwrite {}; pass --force to allow it",
            path.display()
        )));
    }
    Ok(())
}

fn write_file(path: &Path, body: &str) -> Result<(), Failure> {
    std::fs::write(path, body)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}
