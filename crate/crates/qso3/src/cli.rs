//! Argument parsing and command dispatch.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qso3_core::matelem::default_nmax;
use qso3_core::qcg::{qcg, CgKey};
use qso3_core::qnum::{q_binomial, q_double_factorial, q_factorial, q_number_scaled};
use qso3_core::{DeformationParam, HalfInt};

use crate::cache::CgCache;
use crate::error::CliError;
use crate::format::fmt_g;
use crate::grid::{parse_half_int, parse_lambdas, parse_tau_grid};
use crate::report::{render, ser_f64, Format, Row};
use crate::tables::{basis_table, be2_table, rme_table, taylor_table};
use crate::verify::{failures, run_verify, VerifyConfig};

#[derive(Debug, Parser)]
#[command(name = "qso3", version, about = "q-deformed so(3) in the symmetric u_q(3) irreps: basis states, quadrupole matrix elements, B(E2) tables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum QnumKind {
    Number,
    Factorial,
    DoubleFactorial,
    Binomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Lowering,
    Explicit,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a q-number, q-factorial, q-double-factorial or q-binomial.
    Qnum {
        #[arg(long, value_enum, default_value_t = QnumKind::Number)]
        kind: QnumKind,
        /// Argument of [x].
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
        /// Integer argument of the factorials, upper index of the binomial.
        #[arg(long, allow_hyphen_values = true)]
        n: Option<i64>,
        /// Lower index of the binomial.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<i64>,
        /// Base scaling s: evaluate in base q^s.
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        scale: f64,
        /// Deformation τ, or a τ grid.
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        #[command(flatten)]
        out: Output,
    },
    /// Clebsch–Gordan coefficient, or a whole column when m1/m2 are omitted.
    Cg {
        #[arg(long)]
        j1: String,
        #[arg(long, allow_hyphen_values = true)]
        m1: Option<String>,
        #[arg(long)]
        j2: String,
        #[arg(long, allow_hyphen_values = true)]
        m2: Option<String>,
        #[arg(long)]
        j: String,
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        /// Evaluate at q^-1.
        #[arg(long)]
        inverted: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Fock-space coefficients of one basis state |λ; L M⟩.
    Basis {
        #[arg(long)]
        lambda: u32,
        #[arg(long)]
        l: u32,
        #[arg(long, allow_hyphen_values = true)]
        m: i32,
        #[arg(long, allow_hyphen_values = true)]
        tau: f64,
        #[arg(long, value_enum, default_value_t = RouteArg::Explicit)]
        route: RouteArg,
        /// Fock cutoff; defaults to max(12, λ+2).
        #[arg(long)]
        nmax: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Reduced quadrupole matrix elements, optionally with the oracle.
    Rme {
        #[arg(long)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        /// Also extract each element from the Fock-space representation.
        #[arg(long)]
        oracle: bool,
        /// Fock cutoff for the oracle; defaults to max(12, λmax+2).
        #[arg(long)]
        nmax: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Reduced elements and B(E2) on a (λ, L, τ) grid.
    #[command(name = "be2-table")]
    Be2Table {
        #[arg(long)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        #[command(flatten)]
        out: Output,
    },
    /// Check that the quadratic expansion leaves the expected remainder.
    #[command(name = "taylor-check")]
    TaylorCheck {
        #[arg(long, default_value = "0:12")]
        lambda: String,
        #[command(flatten)]
        out: Output,
    },
    /// Run every identity and cross-check; exit 1 on any failure.
    Verify {
        #[arg(long, default_value_t = 12)]
        nmax: usize,
        #[arg(long, allow_hyphen_values = true, default_value = "-0.3,0,0.1,0.5")]
        tau: String,
        #[arg(long, default_value_t = 10)]
        lambda_max: u32,
        /// Tolerance of the operator identity suite.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Serialize)]
struct QnumRow {
    #[serde(serialize_with = "ser_f64")]
    tau: f64,
    #[serde(serialize_with = "ser_f64")]
    value: f64,
}

impl Row for QnumRow {
    const HEADER: &'static [&'static str] = &["tau", "value"];
    fn fields(&self) -> Vec<String> {
        vec![fmt_g(self.tau), fmt_g(self.value)]
    }
}

#[derive(Debug, Serialize)]
struct CgRow {
    m1: String,
    m2: String,
    #[serde(serialize_with = "ser_f64")]
    tau: f64,
    #[serde(serialize_with = "ser_f64")]
    value: f64,
}

impl Row for CgRow {
    const HEADER: &'static [&'static str] = &["m1", "m2", "tau", "value"];
    fn fields(&self) -> Vec<String> {
        vec![self.m1.clone(), self.m2.clone(), fmt_g(self.tau), fmt_g(self.value)]
    }
}

fn half_str(h: HalfInt) -> String {
    match h.as_int() {
        Some(n) => n.to_string(),
        None => format!("{}/2", h.twice()),
    }
}

fn emit<R: Row>(rows: &[R], out: &Output) -> Result<(), CliError> {
    let text = render(rows, out.format)?;
    match &out.output {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn param(tau: f64) -> Result<DeformationParam, CliError> {
    Ok(DeformationParam::new(tau)?)
}

fn qnum_value(kind: QnumKind, x: Option<f64>, n: Option<i64>, t: Option<i64>, scale: f64, p: DeformationParam) -> Result<f64, CliError> {
    let need = |v: Option<i64>, flag: &str| v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for this kind")));
    let ps = p.scaled(scale);
    Ok(match kind {
        QnumKind::Number => {
            let x = x.ok_or_else(|| CliError::Usage("--x is required".into()))?;
            q_number_scaled(x, scale, p)
        }
        QnumKind::Factorial => q_factorial(need(n, "n")?, ps)?,
        QnumKind::DoubleFactorial => q_double_factorial(need(n, "n")?, ps)?,
        QnumKind::Binomial => q_binomial(need(n, "n")?, need(t, "t")?, scale, p)?,
    })
}

/// Exit status of one invocation: 0 success, 1 verification failure.
pub fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Qnum { kind, x, n, t, scale, tau, out } => {
            if !scale.is_finite() {
                return Err(CliError::Usage("--scale must be finite".into()));
            }
            let rows = parse_tau_grid(&tau)?
                .into_iter()
                .map(|tau| Ok(QnumRow { tau, value: qnum_value(kind, x, n, t, scale, param(tau)?)? }))
                .collect::<Result<Vec<_>, CliError>>()?;
            emit(&rows, &out)?;
        }
        Command::Cg { j1, m1, j2, m2, j, m, tau, inverted, out } => {
            let (j1, j2, j, m) = (parse_half_int(&j1)?, parse_half_int(&j2)?, parse_half_int(&j)?, parse_half_int(&m)?);
            let cache = CgCache::new();
            let mut rows = Vec::new();
            for tau in parse_tau_grid(&tau)? {
                let p = param(tau)?;
                match (&m1, &m2) {
                    (Some(m1), Some(m2)) => {
                        let (m1, m2) = (parse_half_int(m1)?, parse_half_int(m2)?);
                        let key = CgKey::new(j1, m1, j2, m2, j, m, inverted)?;
                        rows.push(CgRow { m1: half_str(m1), m2: half_str(m2), tau, value: qcg(&key, p) });
                    }
                    (None, None) => {
                        for &(a, b, c) in cache.column(j1, j2, j, m, inverted, p)?.iter() {
                            rows.push(CgRow { m1: half_str(a), m2: half_str(b), tau, value: c });
                        }
                    }
                    _ => return Err(CliError::Usage("give both --m1 and --m2, or neither".into())),
                }
            }
            emit(&rows, &out)?;
        }
        Command::Basis { lambda, l, m, tau, route, nmax, out } => {
            let nmax = nmax.unwrap_or_else(|| default_nmax(lambda));
            if nmax < lambda as usize {
                return Err(CliError::Usage(format!("nmax {nmax} is below lambda {lambda}")));
            }
            let rows = basis_table(lambda, l, m, tau, route == RouteArg::Explicit, nmax)?;
            emit(&rows, &out)?;
        }
        Command::Rme { lambda, tau, oracle, nmax, out } => {
            let lambdas = parse_lambdas(&lambda)?;
            let top = lambdas.iter().copied().max().unwrap_or(0);
            let nmax = nmax.unwrap_or_else(|| default_nmax(top));
            if oracle && nmax < top as usize + 1 {
                return Err(CliError::Usage(format!("nmax {nmax} too small for the oracle at lambda {top}")));
            }
            emit(&rme_table(&lambdas, &parse_tau_grid(&tau)?, oracle, nmax)?, &out)?;
        }
        Command::Be2Table { lambda, tau, out } => {
            emit(&be2_table(&parse_lambdas(&lambda)?, &parse_tau_grid(&tau)?)?, &out)?;
        }
        Command::TaylorCheck { lambda, out } => {
            let rows = taylor_table(&parse_lambdas(&lambda)?)?;
            emit(&rows, &out)?;
            let bad = rows.iter().filter(|r| !r.pass).count();
            if bad > 0 {
                eprintln!("taylor-check: {bad} of {} pairs outside the expected order", rows.len());
                return Ok(1);
            }
        }
        Command::Verify { nmax, tau, lambda_max, tol, out } => {
            let mut cfg = VerifyConfig { nmax, taus: parse_tau_grid(&tau)?, lambda_max, ..VerifyConfig::default() };
            if let Some(tol) = tol {
                cfg.identity_tol = tol;
            }
            let rows = run_verify(&cfg, &CgCache::new())?;
            emit(&rows, &out)?;
            let bad = failures(&rows);
            eprintln!("verify: {} checks, {} failed", rows.len(), bad);
            if bad > 0 {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("QSO3_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("QSO3_THREADS must be a positive integer, got {v:?}")))?;
    // a second initialisation (tests calling main twice) keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parse the process arguments, run, and map errors to exit codes.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = configure_threads().and_then(|()| run(cli));
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
