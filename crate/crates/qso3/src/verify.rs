//! The full verification run: every identity and cross-check, one report row
//! per check.

use rayon::prelude::*;
use serde::Serialize;

use qso3_core::basis::{
    allowed_l, basis_sector, highest_weight_via_vector, lowered_highest_weight, lowered_highest_weight_direct,
    splus_power_expansion, Route,
};
use qso3_core::fockrep::identities::{algebra_suite_with_tol, IDENTITY_TOL};
use qso3_core::fockrep::{
    build_space, casimir, relative_residual, scalar_ops, so3_generators, FockSpace, GeneratorForm, SectorOperator,
    SectorVector,
};
use qso3_core::matelem::{
    be2, coeff_a, coeff_b, me_pairs, reduced_me, reduced_me_lowering_via_adjoint, taylor_diagonal, taylor_raising,
    ChannelChoice, MeKind, Oracle, CHANNEL_TOL, ORACLE_TOL,
};
use qso3_core::{DeformationParam, HalfInt};

use crate::cache::CgCache;
use crate::error::CliError;
use crate::format::{fmt_g, fmt_opt};
use crate::report::{ser_f64, ser_opt_f64, Row};
use crate::tables::taylor_row;

pub const CONSTRUCTION_TOL: f64 = 1e-12;
pub const BASIS_TOL: f64 = 1e-10;
pub const CG_TOL: f64 = 1e-11;

#[derive(Clone, Debug, Serialize)]
pub struct ReportRow {
    pub suite: &'static str,
    pub check: String,
    pub tag: &'static str,
    #[serde(serialize_with = "ser_opt_f64")]
    pub tau: Option<f64>,
    #[serde(serialize_with = "ser_f64")]
    pub residual: f64,
    #[serde(serialize_with = "ser_f64")]
    pub tolerance: f64,
    pub status: &'static str,
}

impl ReportRow {
    pub fn new(suite: &'static str, check: impl Into<String>, tag: &'static str, tau: Option<f64>, residual: f64, tolerance: f64) -> Self {
        let status = if residual <= tolerance { "pass" } else { "fail" };
        Self { suite, check: check.into(), tag, tau, residual, tolerance, status }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

impl Row for ReportRow {
    const HEADER: &'static [&'static str] = &["suite", "check", "tag", "tau", "residual", "tolerance", "status"];
    fn fields(&self) -> Vec<String> {
        vec![
            self.suite.to_string(),
            self.check.clone(),
            self.tag.to_string(),
            fmt_opt(self.tau),
            fmt_g(self.residual),
            fmt_g(self.tolerance),
            self.status.to_string(),
        ]
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub nmax: usize,
    pub taus: Vec<f64>,
    pub lambda_max: u32,
    /// Tolerance of the operator identity suite.
    pub identity_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { nmax: 12, taus: vec![-0.3, 0.0, 0.1, 0.5], lambda_max: 10, identity_tol: IDENTITY_TOL }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

struct Sink {
    tau: Option<f64>,
    rows: Vec<ReportRow>,
}

impl Sink {
    fn push(&mut self, suite: &'static str, check: impl Into<String>, tag: &'static str, residual: f64, tol: f64) {
        self.rows.push(ReportRow::new(suite, check, tag, self.tau, residual, tol));
    }
}

/// Run every suite. τ-dependent suites run in parallel over the grid; rows
/// come back in grid order, followed by the τ-independent checks.
pub fn run_verify(cfg: &VerifyConfig, cache: &CgCache) -> Result<Vec<ReportRow>, CliError> {
    if cfg.nmax < cfg.lambda_max as usize + 1 {
        return Err(CliError::Usage(format!(
            "nmax {} too small for lambda up to {}; the oracle needs nmax >= lambda + 1",
            cfg.nmax, cfg.lambda_max
        )));
    }
    if !(cfg.identity_tol > 0.0) {
        return Err(CliError::Usage("tolerance must be positive".into()));
    }
    let per_tau: Vec<Result<Vec<ReportRow>, CliError>> =
        cfg.taus.par_iter().map(|&tau| tau_suites(cfg, tau, cache)).collect();
    let mut rows = Vec::new();
    for r in per_tau {
        rows.extend(r?);
    }
    rows.extend(fixed_checks()?);
    Ok(rows)
}

fn tau_suites(cfg: &VerifyConfig, tau: f64, cache: &CgCache) -> Result<Vec<ReportRow>, CliError> {
    let p = DeformationParam::new(tau)?;
    let space = build_space(cfg.nmax);
    let mut sink = Sink { tau: Some(tau), rows: Vec::new() };
    cg_suite(&mut sink, p, cache)?;
    for c in algebra_suite_with_tol(cfg.nmax, p, cfg.identity_tol)? {
        sink.push("algebra", c.name, c.tag, c.residual, c.tolerance);
    }
    construction_suite(&mut sink, &space, p)?;
    basis_suite(&mut sink, &space, p, cfg.lambda_max)?;
    matelem_suite(&mut sink, &space, p, cfg.lambda_max)?;
    Ok(sink.rows)
}

fn cg_suite(sink: &mut Sink, p: DeformationParam, cache: &CgCache) -> Result<(), CliError> {
    for inverted in [false, true] {
        let mut worst: f64 = 0.0;
        for t1 in 0..=6 {
            for t2 in 0..=6 {
                let (j1, j2) = (HalfInt::from_twice(t1), HalfInt::from_twice(t2));
                let mut cols = Vec::new();
                for tj in ((t1 - t2).abs()..=t1 + t2).step_by(2) {
                    let j = HalfInt::from_twice(tj);
                    for m in j.projections() {
                        cols.push(cache.column(j1, j2, j, m, inverted, p)?);
                    }
                }
                // columns of an orthogonal matrix: unit norm, mutually orthogonal
                for a in 0..cols.len() {
                    for b in a..cols.len() {
                        let dot: f64 = cols[a]
                            .iter()
                            .filter_map(|x| cols[b].iter().find(|y| y.0 == x.0 && y.1 == x.1).map(|y| x.2 * y.2))
                            .sum();
                        let want = if a == b { 1.0 } else { 0.0 };
                        worst = worst.max((dot - want).abs());
                    }
                }
            }
        }
        let base = if inverted { "base q^-1" } else { "base q" };
        sink.push("qcg", format!("coupling matrix orthogonal, j1,j2 <= 3, {base}"), "Eq. (t8a)", worst, CG_TOL);
    }
    Ok(())
}

fn construction_suite(sink: &mut Sink, space: &FockSpace, p: DeformationParam) -> Result<(), CliError> {
    let a = so3_generators(space, p, GeneratorForm::Simplified)?;
    let b = so3_generators(space, p, GeneratorForm::Original)?;
    for (name, x, y) in [("L0", &a.l0, &b.l0), ("L+", &a.lplus, &b.lplus), ("L-", &a.lminus, &b.lminus)] {
        let r = relative_residual(x, y, 0, 0.0);
        sink.push("construction", format!("{name} simplified = original"), "Eq. (s10)", r, CONSTRUCTION_TOL);
    }
    let sp = scalar_ops(space, p)?.splus;
    for k in 0..=4u32 {
        if 2 * k as usize > space.nmax() {
            break;
        }
        let r = relative_residual(&splus_power_expansion(k, space, p)?, &sp.pow(k, space)?, 2 * k as usize, 0.0);
        sink.push("construction", format!("(S+)^{k} normal-ordered sum"), "Eq. (b15)", r, BASIS_TOL);
    }
    for l in 0..=6u32.min(space.nmax() as u32) {
        let mut worst: f64 = 0.0;
        for m in 0..=2 * l {
            let a = lowered_highest_weight(l, m, space, p)?;
            let b = lowered_highest_weight_direct(l, m, space, p)?;
            worst = worst.max(a.max_abs_diff(&b) / a.max_abs().max(b.max_abs()).max(1e-300));
        }
        sink.push("construction", format!("(L-)^m (B+†)^{l}|0> sum, m <= {}", 2 * l), "Eq. (b9i)", worst, BASIS_TOL);
    }
    Ok(())
}

fn rank(vs: &[SectorVector]) -> usize {
    let mut m: Vec<Vec<f64>> = vs.iter().map(|v| v.data.clone()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let piv = (r..m.len()).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())).expect("rows left");
        if m[piv][c].abs() < 1e-9 {
            continue;
        }
        m.swap(r, piv);
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot = &top[r];
        for row in rest {
            let f = row[c] / pivot[c];
            row.iter_mut().zip(pivot).skip(c).for_each(|(x, p)| *x -= f * p);
        }
        r += 1;
    }
    r
}

fn basis_suite(sink: &mut Sink, space: &FockSpace, p: DeformationParam, lambda_max: u32) -> Result<(), CliError> {
    let g = so3_generators(space, p, GeneratorForm::Simplified)?;
    let c2 = casimir(space, p)?;
    for lambda in 0..=lambda_max {
        let low = basis_sector(lambda, Route::Lowering, space, p)?;
        let exp = basis_sector(lambda, Route::Explicit, space, p)?;
        let route = low.iter().zip(&exp).map(|(a, b)| a.max_abs_diff(b)).fold(0.0, f64::max);
        sink.push("basis", format!("lowering = explicit, lambda={lambda}"), "Eq. (b16)", route, BASIS_TOL);
        let norm = exp.iter().map(|v| (v.norm() - 1.0).abs()).fold(0.0, f64::max);
        sink.push("basis", format!("explicit states unit norm, lambda={lambda}"), "Eq. (b16)", norm, BASIS_TOL);

        let dense: Vec<SectorVector> = exp.iter().map(|v| v.to_sector(space)).collect();
        let mut gram: f64 = 0.0;
        for (i, x) in dense.iter().enumerate() {
            for (j, y) in dense.iter().enumerate() {
                gram = gram.max((x.dot(y) - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
        sink.push("basis", format!("Gram matrix = identity, lambda={lambda}"), "Eq. (b6)", gram, BASIS_TOL);
        let dim = ((lambda + 1) * (lambda + 2) / 2) as usize;
        let deficit = (dim - rank(&dense).min(dim)) as f64 + (dense.len() as f64 - dim as f64).abs();
        sink.push("basis", format!("states span the {dim}-dim sector, lambda={lambda}"), "Eq. (b5)", deficit, 0.0);

        let (mut cas, mut l0, mut hw): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for (b, v) in exp.iter().zip(&dense) {
            let (lf, mf) = (f64::from(b.l()), f64::from(b.m()));
            let ev = p.num(lf) * p.num(lf + 1.0);
            cas = cas.max(eigen_residual(&c2, v, ev)?);
            l0 = l0.max(eigen_residual(&g.l0, v, mf)?);
            if b.m() == b.l() as i32 {
                hw = hw.max(applied(&g.lplus, v)?.max_abs() / (1.0 + lf));
            }
        }
        sink.push("basis", format!("Casimir eigenvalue [L][L+1], lambda={lambda}"), "Eq. (s5)", cas, BASIS_TOL);
        sink.push("basis", format!("L0 eigenvalue M, lambda={lambda}"), "Eq. (b7)", l0, BASIS_TOL);
        sink.push("basis", format!("L+ annihilates M = L, lambda={lambda}"), "Eq. (b1)", hw, BASIS_TOL);

        let mut q6: f64 = 0.0;
        for l in allowed_l(lambda) {
            let a = highest_weight_via_vector(lambda, l, space, p)?;
            let b = exp.iter().find(|v| v.l() == l && v.m() == l as i32).expect("highest weight present");
            q6 = q6.max(a.max_abs_diff(b));
        }
        sink.push("basis", format!("(S+)^k (T†_+1)^L |0> normalized, lambda={lambda}"), "Eq. (q6)", q6, BASIS_TOL);
    }
    Ok(())
}

fn applied(op: &SectorOperator, v: &SectorVector) -> Result<SectorVector, CliError> {
    let needed = (v.sector as i64 + i64::from(op.delta_n())).max(0) as usize;
    op.apply(v).ok_or(CliError::Core(qso3_core::Error::Capacity { needed, nmax: op.nmax() }))
}

fn eigen_residual(op: &SectorOperator, v: &SectorVector, ev: f64) -> Result<f64, CliError> {
    let w = applied(op, v)?;
    Ok(w.max_abs_diff(&v.clone().scaled(ev)) / (1.0 + ev.abs()))
}

fn pair_tag(lf: u32, li: u32) -> &'static str {
    if lf == li + 2 {
        "Eq. (q14a)"
    } else if lf == li {
        "Eq. (q14b)"
    } else {
        "Eq. (q15)"
    }
}

fn matelem_suite(sink: &mut Sink, space: &FockSpace, p: DeformationParam, lambda_max: u32) -> Result<(), CliError> {
    let oracle = Oracle::new(space, p)?;
    for lambda in 0..=lambda_max {
        for (lf, li) in me_pairs(lambda) {
            let ex = oracle.extract(lambda, lf, li, ChannelChoice::All)?;
            let closed = reduced_me(lambda, lf, li, p)?.value;
            let label = format!("lambda={lambda} L'={lf} L={li}");
            sink.push("matelem", format!("closed form = oracle, {label}"), pair_tag(lf, li), rel(ex.record.value, closed), ORACLE_TOL);
            sink.push(
                "matelem",
                format!("channel independence ({} channels), {label}", ex.channels.len()),
                "Eq. (t8a)",
                ex.spread,
                CHANNEL_TOL,
            );
            if lf == li + 2 {
                let down = oracle.extract(lambda, li, lf, ChannelChoice::All)?.record.value;
                sink.push("matelem", format!("oracle symmetry, {label}"), "Eq. (q15)", rel(down, ex.record.value), 1e-9);
                let via = reduced_me_lowering_via_adjoint(lambda, li, p)?;
                sink.push("matelem", format!("symmetry via CG, {label}"), "Eq. (q15)", rel(via, closed), 1e-9);
            }
        }
        for l in allowed_l(lambda) {
            let (a, b) = oracle.coefficients(lambda, l)?;
            let label = format!("lambda={lambda} L={l}");
            sink.push("matelem", format!("coefficient b, {label}"), "Eq. (q12b)", rel(b, coeff_b(lambda, l, p)?), ORACLE_TOL);
            if let Some(a) = a {
                sink.push("matelem", format!("coefficient a, {label}"), "Eq. (q12a)", rel(a, coeff_a(lambda, l, p)?), ORACLE_TOL);
            }
        }
    }
    Ok(())
}

/// Exact classical values, the classical limit and the Taylor order.
pub fn fixed_checks() -> Result<Vec<ReportRow>, CliError> {
    let mut sink = Sink { tau: None, rows: Vec::new() };
    let p0 = DeformationParam::classical();
    let spot = |v: f64, want: f64| (v - want).abs();
    sink.push("closed-form", "<2,2||Q2||2,0> = 2 sqrt(10) at tau=0", "Eq. (q14a)",
        spot(reduced_me(2, 2, 0, p0)?.value, 2.0 * 10f64.sqrt()), 1e-8);
    sink.push("closed-form", "<2,2||Q2||2,2> = -7 sqrt(10/7) at tau=0", "Eq. (q14b)",
        spot(reduced_me(2, 2, 2, p0)?.value, -7.0 * (10.0f64 / 7.0).sqrt()), 1e-7);
    sink.push("closed-form", "B(E2; (4,2) -> (4,0)) = 22.4 at tau=0", "Eq. (q37)", spot(be2(4, 0, p0)?.value, 22.4), 1e-8);

    let tiny = DeformationParam::new(1e-12)?;
    for lambda in 0..=12u32 {
        let mut worst: f64 = 0.0;
        for (lf, li) in me_pairs(lambda) {
            let c0 = if lf == li + 2 {
                taylor_raising(lambda, li)?[0]
            } else if lf == li {
                taylor_diagonal(lambda, li)?[0]
            } else {
                continue;
            };
            worst = worst.max(rel(reduced_me(lambda, lf, li, tiny)?.value, c0));
        }
        sink.push("closed-form", format!("classical limit equals Taylor constants, lambda={lambda}"), "Eq. (q16a)", worst, 1e-8);
    }

    for lambda in 1..=12u32 {
        let mut ls: Vec<u32> = allowed_l(lambda).collect();
        ls.reverse();
        for l in ls {
            for kind in [MeKind::Raising, MeKind::Diagonal] {
                let ok = match kind {
                    MeKind::Raising => l + 2 <= lambda,
                    MeKind::Diagonal => l > 0,
                };
                if !ok {
                    continue;
                }
                let row = taylor_row(kind, lambda, l)?;
                let dev = (row.ratio / 10f64.powi(row.order as i32)).log10().abs();
                let tag = if kind == MeKind::Raising { "Eq. (q16a)" } else { "Eq. (q16b)" };
                sink.push(
                    "taylor",
                    format!("{} remainder ~ tau^{}, lambda={lambda} L={l}", row.kind, row.order),
                    tag,
                    if dev.is_nan() { f64::INFINITY } else { dev },
                    3f64.log10(),
                );
            }
        }
    }
    Ok(sink.rows)
}

/// Count of failed rows.
pub fn failures(rows: &[ReportRow]) -> usize {
    rows.iter().filter(|r| !r.passed()).count()
}
