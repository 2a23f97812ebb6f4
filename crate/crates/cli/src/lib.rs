//! Batch front-end: one subcommand per computation, CSV or JSON-lines output.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 numeric non-convergence.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

use dowling::asymptotics::log_of_total;
use dowling::polynomials::BlockPolynomial;
use dowling::sampler::rng_stream;
use dowling::statistics::{ks_from_row, moments_from_row};
use dowling::{
    count_distinct_negative_roots, count_table, lemma_residuals, log_total_asymptotic,
    newton_inequalities, solve_saddle, verify_poly_recurrence, ColorParams, Error, Rows,
    SaddleParams, Sampler,
};

mod verify;

pub use verify::{run_suite, VerifyRow};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { .. } => CliError::Numeric(e.to_string()),
            Error::NonIntegralCoefficient { .. } => CliError::Verification(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(io::Error::other(e))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(io::Error::other(e))
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Inclusive sweep `start:end:step` (step defaults to 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NRange {
    pub start: usize,
    pub end: usize,
    pub step: usize,
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad number {t:?} in range {s:?}"))
        };
        let (start, end, step) = match parts.as_slice() {
            [a, b] => (num(a)?, num(b)?, 1),
            [a, b, c] => (num(a)?, num(b)?, num(c)?),
            _ => return Err(format!("range {s:?} is not a:b or a:b:step")),
        };
        if step == 0 || start > end {
            return Err(format!("range {s:?} is empty"));
        }
        Ok(Self { start, end, step })
    }
}

impl NRange {
    pub fn values(&self) -> Vec<usize> {
        (self.start..=self.end).step_by(self.step).collect()
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: Format,
    /// Output file (standard output when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Palette {
    /// Zero-block palette size.
    #[arg(long)]
    pub c: u32,
    /// Non-zero-block palette size.
    #[arg(long)]
    pub m: u32,
}

impl Palette {
    fn params(&self) -> CliResult<ColorParams> {
        Ok(ColorParams::new(self.c, self.m)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct NSelect {
    /// A single n.
    #[arg(long, conflicts_with = "n_range")]
    pub n: Option<usize>,
    /// Inclusive sweep a:b:step.
    #[arg(long)]
    pub n_range: Option<NRange>,
}

impl NSelect {
    fn values(&self) -> CliResult<Vec<usize>> {
        match (self.n, self.n_range) {
            (Some(n), None) => Ok(vec![n]),
            (None, Some(r)) => Ok(r.values()),
            _ => Err(CliError::Usage(
                "exactly one of --n or --n-range is required".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "dowling",
    version,
    about = "Colored type-B set partitions: counts, polynomials, moments, asymptotics, sampling"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Count table T_{n,k} for 0 <= k <= n <= N (`n,k,T`).
    Table {
        #[command(flatten)]
        palette: Palette,
        /// Largest n.
        #[arg(long)]
        n: usize,
    },
    /// Totals T_n (`n,T`).
    Total {
        #[command(flatten)]
        palette: Palette,
        #[command(flatten)]
        select: NSelect,
    },
    /// Coefficients of T_n(x) (`k,coeff`) or, over a range, root certificates.
    Poly {
        #[command(flatten)]
        palette: Palette,
        #[command(flatten)]
        select: NSelect,
    },
    /// Exact mean, variance and KS distance of the block count.
    Stats {
        #[command(flatten)]
        palette: Palette,
        #[command(flatten)]
        select: NSelect,
    },
    /// Saddle point, exact vs asymptotic log T_n, and lemma residuals.
    Asympt {
        #[command(flatten)]
        palette: Palette,
        #[command(flatten)]
        select: NSelect,
    },
    /// Solve r(e^{mr} + c) = x; c = 0 is allowed here.
    Saddle {
        #[arg(long)]
        c: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        x: f64,
    },
    /// Uniform samples as `{n, rank, k, partition}` records.
    Sample {
        #[command(flatten)]
        palette: Palette,
        #[arg(long)]
        n: usize,
        /// Number of samples.
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Generator stream (one per worker).
        #[arg(long, default_value_t = 0)]
        stream: u64,
    },
    /// Cross-checks every oracle and identity up to n-max.
    Verify {
        #[command(flatten)]
        palette: Palette,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
    },
}

#[derive(Debug, Serialize)]
struct TableRow {
    n: usize,
    k: usize,
    #[serde(rename = "T")]
    t: String,
}

#[derive(Debug, Serialize)]
struct TotalRow {
    n: usize,
    #[serde(rename = "T")]
    t: String,
}

#[derive(Debug, Serialize)]
struct CoeffRow {
    k: usize,
    coeff: String,
}

#[derive(Debug, Serialize)]
struct CertificateRow {
    n: usize,
    distinct_negative_roots: usize,
    gcd_degree: usize,
    newton: bool,
    recurrence: bool,
}

#[derive(Debug, Serialize)]
#[allow(non_snake_case)]
struct StatsRow {
    n: usize,
    E_rational: String,
    E_float: f64,
    V_rational: String,
    V_float: f64,
    KS: Option<f64>,
}

#[derive(Debug, Serialize)]
struct AsymptRow {
    n: usize,
    r: f64,
    log_exact: f64,
    log_asymptotic: f64,
    gap: f64,
    res61: f64,
    res62: f64,
    res63: f64,
    res64: f64,
}

#[derive(Debug, Serialize)]
struct SaddleRow {
    x: f64,
    r: f64,
    residual: f64,
    iterations: usize,
}

#[derive(Debug, Serialize)]
struct PolyJson {
    n: usize,
    coeffs: Vec<String>,
    distinct_negative_roots: usize,
    gcd_degree: usize,
    newton: bool,
    recurrence: bool,
}

fn emit<T: Serialize>(rows: &[T], format: Format, out: &mut dyn Write) -> CliResult<()> {
    match format {
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(&mut *out);
            for row in rows {
                writer.serialize(row)?;
            }
            writer.flush()?;
        }
        Format::Json => {
            for row in rows {
                serde_json::to_writer(&mut *out, row)?;
                writeln!(out)?;
            }
        }
    }
    Ok(())
}

/// Streams rows once, handing each requested `n` its row plus the two
/// following totals.
fn for_rows_at(
    params: ColorParams,
    wanted: &[usize],
    lookahead: usize,
    mut visit: impl FnMut(usize, &[BigUint], &[BigUint]) -> CliResult<()>,
) -> CliResult<()> {
    let wanted: BTreeSet<usize> = wanted.iter().copied().collect();
    let Some(&last) = wanted.iter().next_back() else {
        return Ok(());
    };
    let mut window: Vec<(usize, Vec<BigUint>)> = Vec::new();
    let mut totals: Vec<BigUint> = Vec::new();
    for (n, row) in Rows::new(params).enumerate().take(last + lookahead + 1) {
        totals.push(row.iter().sum());
        if wanted.contains(&n) {
            window.push((n, row));
        }
    }
    for (n, row) in &window {
        visit(*n, row, &totals[*n..=*n + lookahead])?;
    }
    Ok(())
}

fn certificate(poly: &BlockPolynomial) -> CertificateRow {
    let roots = count_distinct_negative_roots(poly);
    CertificateRow {
        n: poly.n,
        distinct_negative_roots: roots.distinct_negative,
        gcd_degree: roots.gcd_degree,
        newton: newton_inequalities(poly),
        recurrence: poly.n == 0 || verify_poly_recurrence(poly.params, poly.n),
    }
}

fn certificate_ok(row: &CertificateRow) -> bool {
    row.distinct_negative_roots == row.n && row.gcd_degree == 0 && row.newton && row.recurrence
}

/// Runs one subcommand, writing its report to `out`.
pub fn dispatch(config: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let format = config.common.format;
    match &config.command {
        Command::Table { palette, n } => {
            let table = count_table(palette.params()?, *n);
            let rows: Vec<TableRow> = table
                .rows()
                .enumerate()
                .flat_map(|(n, row)| {
                    row.iter().enumerate().map(move |(k, t)| TableRow {
                        n,
                        k,
                        t: t.to_string(),
                    })
                })
                .collect();
            emit(&rows, format, out)
        }
        Command::Total { palette, select } => {
            let mut rows = Vec::new();
            for_rows_at(palette.params()?, &select.values()?, 0, |n, _, totals| {
                rows.push(TotalRow {
                    n,
                    t: totals[0].to_string(),
                });
                Ok(())
            })?;
            emit(&rows, format, out)
        }
        Command::Poly { palette, select } => {
            let params = palette.params()?;
            let single = select.n.is_some();
            let mut certificates = Vec::new();
            let mut json = Vec::new();
            let mut coeff_rows = Vec::new();
            for_rows_at(params, &select.values()?, 0, |n, row, _| {
                let poly = BlockPolynomial {
                    params,
                    n,
                    coeffs: row.to_vec(),
                };
                let cert = certificate(&poly);
                if single && format == Format::Csv {
                    coeff_rows.extend(row.iter().enumerate().map(|(k, c)| CoeffRow {
                        k,
                        coeff: c.to_string(),
                    }));
                } else if format == Format::Json {
                    json.push(PolyJson {
                        n,
                        coeffs: row.iter().map(ToString::to_string).collect(),
                        distinct_negative_roots: cert.distinct_negative_roots,
                        gcd_degree: cert.gcd_degree,
                        newton: cert.newton,
                        recurrence: cert.recurrence,
                    });
                }
                certificates.push(cert);
                Ok(())
            })?;
            if format == Format::Json {
                emit(&json, format, out)?;
            } else if single {
                emit(&coeff_rows, format, out)?;
            } else {
                emit(&certificates, format, out)?;
            }
            match certificates.iter().find(|c| !certificate_ok(c)) {
                Some(bad) => Err(CliError::Verification(format!(
                    "T_{}(x) certificate failed: {} distinct negative roots, gcd degree {}",
                    bad.n, bad.distinct_negative_roots, bad.gcd_degree
                ))),
                None => Ok(()),
            }
        }
        Command::Stats { palette, select } => {
            let mut rows = Vec::new();
            for_rows_at(palette.params()?, &select.values()?, 0, |n, row, _| {
                let moments = moments_from_row(row);
                rows.push(StatsRow {
                    n,
                    E_rational: moments.mean.to_string(),
                    E_float: moments.mean_f64,
                    V_rational: moments.variance.to_string(),
                    V_float: moments.variance_f64,
                    KS: ks_from_row(row, &moments).ok(),
                });
                Ok(())
            })?;
            emit(&rows, format, out)
        }
        Command::Asympt { palette, select } => {
            let params = palette.params()?;
            let ns = select.values()?;
            if let Some(&n) = ns.iter().find(|&&n| n < 3) {
                return Err(CliError::Usage(format!("asympt needs n >= 3, got {n}")));
            }
            let mut rows = Vec::new();
            for_rows_at(params, &ns, 0, |n, _, totals| {
                let exact = log_of_total(&totals[0]);
                let estimate = log_total_asymptotic(params, n)?;
                let lemma = lemma_residuals(params, n)?;
                rows.push(AsymptRow {
                    n,
                    r: estimate.r,
                    log_exact: exact,
                    log_asymptotic: estimate.log_value,
                    gap: (estimate.log_value - exact).abs(),
                    res61: lemma.res61,
                    res62: lemma.res62,
                    res63: lemma.res63,
                    res64: lemma.res64,
                });
                Ok(())
            })?;
            emit(&rows, format, out)
        }
        Command::Saddle { c, m, x } => {
            let point = solve_saddle(SaddleParams::new(*c, *m)?, *x)?;
            let row = SaddleRow {
                x: point.x,
                r: point.r,
                residual: point.residual,
                iterations: point.iterations,
            };
            emit(&[row], format, out)
        }
        Command::Sample {
            palette,
            n,
            count,
            seed,
            stream,
        } => {
            if *count == 0 {
                return Err(CliError::Usage("--count must be at least 1".into()));
            }
            let sampler = Sampler::new(palette.params()?, *n);
            let mut rng = rng_stream(*seed, *stream);
            let records = (0..*count)
                .map(|_| sampler.record(*n, &mut rng))
                .collect::<Result<Vec<_>, _>>()?;
            emit(&records, format, out)
        }
        Command::Verify { palette, n_max } => {
            let rows = run_suite(palette.params()?, *n_max);
            emit(&rows, format, out)?;
            let failed: Vec<&str> = rows
                .iter()
                .filter(|r| r.status != "pass")
                .map(|r| r.check.as_str())
                .collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Verification(failed.join(", ")))
            }
        }
    }
}

/// Parses arguments, runs, and maps the outcome to an exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match &config.common.out {
        Some(path) => File::create(path).map_err(CliError::from).and_then(|f| {
            let mut w = BufWriter::new(f);
            dispatch(&config, &mut w)?;
            w.flush()?;
            Ok(())
        }),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            dispatch(&config, &mut lock)
        }
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("dowling: {e}");
            e.exit_code()
        }
    }
}
