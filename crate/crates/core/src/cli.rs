//! Command-line front end. `main` only forwards to [`run`].
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 tolerance not met,
//! 4 I/O failure.

use std::f64::consts::PI;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::observables::{expectation_q_quadrature, ResolutionReport};
use crate::output::{sig17, Sig17};
use crate::overlaps::ANALYTIC_DN_LIMIT;
use crate::{
    expectation_p, expectation_p2, expectation_q, momentum_dispersion, overlap, overlap_quadrature,
    resolution_check, sample_state, Error, QuadratureSpec, StateLabel, TestVector,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Environment variable capping worker threads (0 or unset: one per core).
pub const THREADS_ENV: &str = "CIRCLE_CS_THREADS";

const MAX_GRID: usize = 1 << 22;
const MAX_DN: i64 = 64;
const MAX_K: usize = 4096;

#[derive(Parser, Debug)]
#[command(
    name = "circle-cs",
    version,
    about = "Coherent states on the circle: tables for plotting"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,

    /// Write to PATH instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Absolute tolerance of the quadrature engine
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub abs_tol: f64,

    /// Relative tolerance of the quadrature engine
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub rel_tol: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample |m, α⟩ on a uniform grid
    Eval {
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value_t = 256)]
        grid: usize,
    },
    /// Overlaps ⟨0,α|dn,β⟩ for dn = -dn_max..=dn_max, closed form and quadrature
    Overlap {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, default_value_t = 5)]
        dn_max: i64,
    },
    /// Position and momentum moments over a range of labels
    Observables {
        /// A single integer or an inclusive range `lo:hi`
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        m: String,
        /// Sweep α over {0, π/N, ..., π}
        #[arg(long, conflicts_with = "alpha")]
        alpha_steps: Option<usize>,
        /// A single α instead of a sweep
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
    },
    /// Resolution of unity Σ_k ∫|⟨k,α|η⟩|² dα against 2π
    Resolution {
        #[arg(long, default_value_t = 30)]
        k_max: usize,
        /// vacuum, plane_wave_N or two_peak
        #[arg(long, default_value = "vacuum")]
        vector: String,
        #[arg(long, default_value_t = 1024)]
        grid: usize,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Lib(Error::Io(e))
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return EXIT_USAGE;
    }
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Lib(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Domain(_) => EXIT_USAGE,
                Error::ToleranceNotMet { .. } => EXIT_TOLERANCE,
                Error::Io(_) => EXIT_IO,
            }
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("{THREADS_ENV} must be a non-negative integer, got `{raw}`"))?;
    // A pool that already exists (repeated in-process runs) is left alone.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let spec = QuadratureSpec::new(
        cli.abs_tol,
        cli.rel_tol,
        QuadratureSpec::default().max_depth,
    )
    .map_err(|e| CliError::Usage(e.to_string()))?;
    // Everything is computed before the output file is opened, so a failed
    // run never leaves a truncated file behind.
    let body = match &cli.command {
        Command::Eval { m, alpha, grid } => {
            eval_table(*m, *alpha, *grid, cli.format.unwrap_or(Format::Csv))?
        }
        Command::Overlap {
            alpha,
            beta,
            dn_max,
        } => overlap_table(
            *alpha,
            *beta,
            *dn_max,
            &spec,
            cli.format.unwrap_or(Format::Csv),
        )?,
        Command::Observables {
            m,
            alpha_steps,
            alpha,
        } => observables_table(
            m,
            *alpha_steps,
            *alpha,
            &spec,
            cli.format.unwrap_or(Format::Csv),
        )?,
        Command::Resolution {
            k_max,
            vector,
            grid,
        } => resolution_output(
            *k_max,
            vector,
            *grid,
            &spec,
            cli.format.unwrap_or(Format::Json),
        )?,
    };
    match &cli.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            w.write_all(body.as_bytes())?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(body.as_bytes())?;
            lock.flush()?;
        }
    }
    Ok(())
}

fn finite(name: &str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Usage(format!("--{name} must be finite")))
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct EvalRow {
    phi: Sig17,
    re: Sig17,
    im: Sig17,
}

fn eval_table(m: i64, alpha: f64, grid: usize, format: Format) -> Result<String, CliError> {
    let alpha = finite("alpha", alpha)?;
    if !(16..=MAX_GRID).contains(&grid) {
        return Err(CliError::Usage(format!(
            "--grid must lie in 16..={MAX_GRID}"
        )));
    }
    let psi = sample_state(StateLabel::new(m, alpha)?, grid)?;
    Ok(match format {
        Format::Csv => {
            let mut buf = Vec::new();
            psi.write_csv(&mut buf)?;
            String::from_utf8(buf).expect("ascii")
        }
        Format::Json => {
            let rows: Vec<EvalRow> = psi
                .amplitudes()
                .iter()
                .enumerate()
                .map(|(j, a)| EvalRow {
                    phi: Sig17(psi.phi(j)),
                    re: Sig17(a.re),
                    im: Sig17(a.im),
                })
                .collect();
            to_json(&rows)
        }
    })
}

#[derive(Serialize)]
struct OverlapRow {
    m: i64,
    alpha: Sig17,
    n: i64,
    beta: Sig17,
    re: Sig17,
    im: Sig17,
    abs: Sig17,
    method: &'static str,
    err_est: Sig17,
    quad_re: Sig17,
    quad_im: Sig17,
    quad_abs: Sig17,
    quad_err_est: Sig17,
    abs_diff: Sig17,
}

const OVERLAP_HEADER: &str =
    "m,alpha,n,beta,re,im,abs,method,err_est,quad_re,quad_im,quad_abs,quad_err_est,abs_diff";

fn overlap_table(
    alpha: f64,
    beta: f64,
    dn_max: i64,
    spec: &QuadratureSpec,
    format: Format,
) -> Result<String, CliError> {
    let alpha = finite("alpha", alpha)?;
    let beta = finite("beta", beta)?;
    if !(0..=MAX_DN).contains(&dn_max) {
        return Err(CliError::Usage(format!(
            "--dn-max must lie in 0..={MAX_DN}"
        )));
    }
    if dn_max > ANALYTIC_DN_LIMIT {
        eprintln!("note: rows with |dn| > {ANALYTIC_DN_LIMIT} use quadrature for both columns");
    }
    let mut rows = Vec::new();
    for dn in -dn_max..=dn_max {
        let a = StateLabel::new(0, alpha)?;
        let b = StateLabel::new(dn, beta)?;
        let an = overlap(&a, &b)?;
        let q = overlap_quadrature(&a, &b, spec)?;
        rows.push(OverlapRow {
            m: a.m,
            alpha: Sig17(alpha),
            n: b.m,
            beta: Sig17(beta),
            re: Sig17(an.value.re),
            im: Sig17(an.value.im),
            abs: Sig17(an.value.norm()),
            method: an.method.as_str(),
            err_est: Sig17(an.err_est),
            quad_re: Sig17(q.value.re),
            quad_im: Sig17(q.value.im),
            quad_abs: Sig17(q.value.norm()),
            quad_err_est: Sig17(q.err_est),
            abs_diff: Sig17((an.value - q.value).norm()),
        });
    }
    Ok(match format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = String::from(OVERLAP_HEADER);
            s.push('\n');
            for r in &rows {
                let f = [
                    r.m.to_string(),
                    sig17(r.alpha.0),
                    r.n.to_string(),
                    sig17(r.beta.0),
                    sig17(r.re.0),
                    sig17(r.im.0),
                    sig17(r.abs.0),
                    r.method.to_string(),
                    sig17(r.err_est.0),
                    sig17(r.quad_re.0),
                    sig17(r.quad_im.0),
                    sig17(r.quad_abs.0),
                    sig17(r.quad_err_est.0),
                    sig17(r.abs_diff.0),
                ];
                s.push_str(&f.join(","));
                s.push('\n');
            }
            s
        }
    })
}

fn parse_m_range(raw: &str) -> Result<Vec<i64>, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "--m must be an integer or a range lo:hi, got `{raw}`"
        ))
    };
    let (lo, hi) = match raw.split_once(':') {
        Some((lo, hi)) => (
            lo.trim().parse().map_err(|_| bad())?,
            hi.trim().parse().map_err(|_| bad())?,
        ),
        None => {
            let m: i64 = raw.trim().parse().map_err(|_| bad())?;
            (m, m)
        }
    };
    if lo > hi {
        return Err(CliError::Usage(format!("--m range `{raw}` is empty")));
    }
    if hi - lo > 10_000 {
        return Err(CliError::Usage(
            "--m range is limited to 10001 values".into(),
        ));
    }
    Ok((lo..=hi).collect())
}

#[derive(Serialize)]
struct ObservablesRow {
    m: i64,
    alpha: Sig17,
    q_mean: Sig17,
    q_mean_oracle: Sig17,
    p_mean: Sig17,
    p2_mean: Sig17,
    dispersion: Sig17,
    q_deviation: Sig17,
}

const OBSERVABLES_HEADER: &str =
    "m,alpha,q_mean,q_mean_oracle,p_mean,p2_mean,dispersion,q_deviation";

fn observables_table(
    m: &str,
    alpha_steps: Option<usize>,
    alpha: Option<f64>,
    spec: &QuadratureSpec,
    format: Format,
) -> Result<String, CliError> {
    let ms = parse_m_range(m)?;
    let alphas: Vec<f64> = match (alpha, alpha_steps) {
        (Some(a), _) => vec![finite("alpha", a)?],
        (None, steps) => {
            let steps = steps.unwrap_or(8);
            if steps == 0 || steps > 100_000 {
                return Err(CliError::Usage(
                    "--alpha-steps must lie in 1..=100000".into(),
                ));
            }
            (0..=steps).map(|i| PI * i as f64 / steps as f64).collect()
        }
    };
    let mut rows = Vec::with_capacity(ms.len() * alphas.len());
    for &m in &ms {
        for &alpha in &alphas {
            let label = StateLabel::new(m, alpha)?;
            let q = expectation_q(label);
            rows.push(ObservablesRow {
                m,
                alpha: Sig17(alpha),
                q_mean: Sig17(q),
                q_mean_oracle: Sig17(expectation_q_quadrature(label, spec)?),
                p_mean: Sig17(expectation_p(label)),
                p2_mean: Sig17(expectation_p2(label)),
                dispersion: Sig17(momentum_dispersion(label)),
                q_deviation: Sig17(q - alpha),
            });
        }
    }
    Ok(match format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = String::from(OBSERVABLES_HEADER);
            s.push('\n');
            for r in &rows {
                let f = [
                    r.m.to_string(),
                    sig17(r.alpha.0),
                    sig17(r.q_mean.0),
                    sig17(r.q_mean_oracle.0),
                    sig17(r.p_mean.0),
                    sig17(r.p2_mean.0),
                    sig17(r.dispersion.0),
                    sig17(r.q_deviation.0),
                ];
                s.push_str(&f.join(","));
                s.push('\n');
            }
            s
        }
    })
}

#[derive(Serialize)]
struct ConvergenceRow {
    k: usize,
    estimate: Sig17,
    defect: Sig17,
}

#[derive(Serialize)]
struct ResolutionOutput<'a> {
    vector: String,
    #[serde(flatten)]
    report: &'a ResolutionReport,
    convergence: Vec<ConvergenceRow>,
}

fn resolution_output(
    k_max: usize,
    vector: &str,
    grid: usize,
    spec: &QuadratureSpec,
    format: Format,
) -> Result<String, CliError> {
    let vector: TestVector = vector
        .parse()
        .map_err(|e: Error| CliError::Usage(e.to_string()))?;
    if k_max > MAX_K {
        return Err(CliError::Usage(format!("--k-max must not exceed {MAX_K}")));
    }
    if !(16..=MAX_GRID).contains(&grid) || grid < 4 * k_max {
        return Err(CliError::Usage(format!(
            "--grid must lie in 16..={MAX_GRID} and be at least 4·k_max"
        )));
    }
    let eta = vector.sample(grid)?;
    let report = resolution_check(&eta, k_max, spec)?;
    let tau = 2.0 * PI;
    let convergence: Vec<ConvergenceRow> = report
        .convergence()
        .into_iter()
        .map(|(k, e)| ConvergenceRow {
            k,
            estimate: Sig17(e),
            defect: Sig17((e - tau).abs()),
        })
        .collect();
    Ok(match format {
        Format::Json => to_json(&ResolutionOutput {
            vector: vector.name(),
            report: &report,
            convergence,
        }),
        Format::Csv => {
            let mut s = String::from("k,estimate,defect\n");
            for r in &convergence {
                s.push_str(&format!(
                    "{},{},{}\n",
                    r.k,
                    sig17(r.estimate.0),
                    sig17(r.defect.0)
                ));
            }
            s
        }
    })
}
