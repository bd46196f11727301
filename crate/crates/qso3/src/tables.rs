//! Grid tables of closed-form and oracle values.

use rayon::prelude::*;
use serde::Serialize;

use qso3_core::basis::{allowed_l, basis_state_explicit, basis_state_lowering};
use qso3_core::fockrep::build_space;
use qso3_core::matelem::{
    be2, me_pairs, reduced_me, reduced_me_diagonal, reduced_me_raising, remainder_order, taylor_diagonal,
    taylor_raising, taylor_remainder, ChannelChoice, MeKind, Oracle,
};
use qso3_core::DeformationParam;

use crate::error::CliError;
use crate::format::{fmt_g, fmt_opt};
use crate::report::{ser_f64, ser_opt_f64, Row};

fn param(tau: f64) -> Result<DeformationParam, CliError> {
    Ok(DeformationParam::new(tau)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct Be2Row {
    pub lambda: u32,
    #[serde(rename = "L")]
    pub l: u32,
    #[serde(serialize_with = "ser_f64")]
    pub tau: f64,
    #[serde(serialize_with = "ser_opt_f64")]
    pub rme_raising: Option<f64>,
    #[serde(serialize_with = "ser_opt_f64")]
    pub rme_diagonal: Option<f64>,
    #[serde(serialize_with = "ser_opt_f64")]
    pub be2: Option<f64>,
}

impl Row for Be2Row {
    const HEADER: &'static [&'static str] = &["lambda", "L", "tau", "rme_raising", "rme_diagonal", "be2"];
    fn fields(&self) -> Vec<String> {
        vec![
            self.lambda.to_string(),
            self.l.to_string(),
            fmt_g(self.tau),
            fmt_opt(self.rme_raising),
            fmt_opt(self.rme_diagonal),
            fmt_opt(self.be2),
        ]
    }
}

/// One row per `(λ, L, τ)`, with `L` ascending; raising fields are empty
/// when `L + 2 > λ`.
pub fn be2_table(lambdas: &[u32], taus: &[f64]) -> Result<Vec<Be2Row>, CliError> {
    let mut points = Vec::new();
    for &lambda in lambdas {
        let mut ls: Vec<u32> = allowed_l(lambda).collect();
        ls.reverse();
        for l in ls {
            for &tau in taus {
                points.push((lambda, l, tau));
            }
        }
    }
    points
        .par_iter()
        .map(|&(lambda, l, tau)| {
            let p = param(tau)?;
            let raising = if l + 2 <= lambda { Some(reduced_me_raising(lambda, l, p)?.value) } else { None };
            let b = if l + 2 <= lambda { Some(be2(lambda, l, p)?.value) } else { None };
            let diag = reduced_me_diagonal(lambda, l, p)?.value;
            Ok(Be2Row { lambda, l, tau, rme_raising: raising, rme_diagonal: Some(diag), be2: b })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct RmeRow {
    pub lambda: u32,
    #[serde(rename = "L_final")]
    pub l_final: u32,
    #[serde(rename = "L_initial")]
    pub l_initial: u32,
    #[serde(serialize_with = "ser_f64")]
    pub tau: f64,
    #[serde(serialize_with = "ser_f64")]
    pub closed_form: f64,
    #[serde(serialize_with = "ser_opt_f64")]
    pub oracle: Option<f64>,
    #[serde(serialize_with = "ser_opt_f64")]
    pub channel_spread: Option<f64>,
}

impl Row for RmeRow {
    const HEADER: &'static [&'static str] =
        &["lambda", "L_final", "L_initial", "tau", "closed_form", "oracle", "channel_spread"];
    fn fields(&self) -> Vec<String> {
        vec![
            self.lambda.to_string(),
            self.l_final.to_string(),
            self.l_initial.to_string(),
            fmt_g(self.tau),
            fmt_g(self.closed_form),
            fmt_opt(self.oracle),
            fmt_opt(self.channel_spread),
        ]
    }
}

/// Reduced elements for every admissible `(L', L)` of each `λ`, optionally
/// alongside the Fock-space oracle on a space with cutoff `nmax`.
pub fn rme_table(lambdas: &[u32], taus: &[f64], oracle: bool, nmax: usize) -> Result<Vec<RmeRow>, CliError> {
    let per_tau: Vec<Result<Vec<RmeRow>, CliError>> = taus
        .par_iter()
        .map(|&tau| {
            let p = param(tau)?;
            let space = oracle.then(|| build_space(nmax));
            let orc = space.as_ref().map(|s| Oracle::new(s, p)).transpose()?;
            let mut rows = Vec::new();
            for &lambda in lambdas {
                for (lf, li) in me_pairs(lambda) {
                    let closed = reduced_me(lambda, lf, li, p)?.value;
                    let ex = orc.as_ref().map(|o| o.extract(lambda, lf, li, ChannelChoice::All)).transpose()?;
                    rows.push(RmeRow {
                        lambda,
                        l_final: lf,
                        l_initial: li,
                        tau,
                        closed_form: closed,
                        oracle: ex.as_ref().map(|e| e.record.value),
                        channel_spread: ex.as_ref().map(|e| e.spread),
                    });
                }
            }
            Ok(rows)
        })
        .collect();
    let mut by_tau = Vec::with_capacity(taus.len());
    for r in per_tau {
        by_tau.push(r?);
    }
    // λ-major order, τ in the given order
    let mut out = Vec::new();
    for &lambda in lambdas {
        for rows in &by_tau {
            out.extend(rows.iter().filter(|r| r.lambda == lambda).cloned());
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct TaylorRow {
    pub lambda: u32,
    #[serde(rename = "L")]
    pub l: u32,
    pub kind: &'static str,
    #[serde(serialize_with = "ser_f64")]
    pub c0: f64,
    #[serde(serialize_with = "ser_f64")]
    pub c1: f64,
    #[serde(serialize_with = "ser_f64")]
    pub c2: f64,
    #[serde(serialize_with = "ser_f64")]
    pub remainder_1e2: f64,
    #[serde(serialize_with = "ser_f64")]
    pub remainder_1e3: f64,
    #[serde(serialize_with = "ser_f64")]
    pub ratio: f64,
    pub order: u32,
    pub pass: bool,
}

impl Row for TaylorRow {
    const HEADER: &'static [&'static str] = &[
        "lambda", "L", "kind", "c0", "c1", "c2", "remainder_1e-2", "remainder_1e-3", "ratio", "order", "pass",
    ];
    fn fields(&self) -> Vec<String> {
        vec![
            self.lambda.to_string(),
            self.l.to_string(),
            self.kind.to_string(),
            fmt_g(self.c0),
            fmt_g(self.c1),
            fmt_g(self.c2),
            fmt_g(self.remainder_1e2),
            fmt_g(self.remainder_1e3),
            fmt_g(self.ratio),
            self.order.to_string(),
            self.pass.to_string(),
        ]
    }
}

/// Remainder ratio between τ = 1e-2 and τ = 1e-3 must be within a factor 3
/// of `10^order`.
pub fn taylor_row(kind: MeKind, lambda: u32, l: u32) -> Result<TaylorRow, CliError> {
    let c = match kind {
        MeKind::Raising => taylor_raising(lambda, l)?,
        MeKind::Diagonal => taylor_diagonal(lambda, l)?,
    };
    let r1 = taylor_remainder(kind, lambda, l, 1e-2)?;
    let r2 = taylor_remainder(kind, lambda, l, 1e-3)?;
    let order = remainder_order(kind, lambda, l);
    let ratio = r1 / r2;
    let expected = 10f64.powi(order as i32);
    let pass = ratio > expected / 3.0 && ratio < expected * 3.0;
    let kind = match kind {
        MeKind::Raising => "raising",
        MeKind::Diagonal => "diagonal",
    };
    Ok(TaylorRow { lambda, l, kind, c0: c[0], c1: c[1], c2: c[2], remainder_1e2: r1, remainder_1e3: r2, ratio, order, pass })
}

/// Every pair with a nonzero expansion: raising for `L + 2 ≤ λ`, diagonal
/// for `L ≥ 1`.
pub fn taylor_table(lambdas: &[u32]) -> Result<Vec<TaylorRow>, CliError> {
    let mut rows = Vec::new();
    for &lambda in lambdas {
        let mut ls: Vec<u32> = allowed_l(lambda).collect();
        ls.reverse();
        for l in ls {
            if l + 2 <= lambda {
                rows.push(taylor_row(MeKind::Raising, lambda, l)?);
            }
            if l > 0 {
                rows.push(taylor_row(MeKind::Diagonal, lambda, l)?);
            }
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisRow {
    pub nplus: u32,
    pub nzero: u32,
    pub nminus: u32,
    #[serde(serialize_with = "ser_f64")]
    pub coeff: f64,
}

impl Row for BasisRow {
    const HEADER: &'static [&'static str] = &["nplus", "nzero", "nminus", "coeff"];
    fn fields(&self) -> Vec<String> {
        vec![self.nplus.to_string(), self.nzero.to_string(), self.nminus.to_string(), fmt_g(self.coeff)]
    }
}

pub fn basis_table(lambda: u32, l: u32, m: i32, tau: f64, explicit: bool, nmax: usize) -> Result<Vec<BasisRow>, CliError> {
    let p = param(tau)?;
    let space = build_space(nmax);
    let v = if explicit {
        basis_state_explicit(lambda, l, m, &space, p)?
    } else {
        basis_state_lowering(lambda, l, m, &space, p)?
    };
    Ok(v.coeffs()
        .iter()
        .map(|(s, c)| BasisRow { nplus: s.nplus, nzero: s.nzero, nminus: s.nminus, coeff: *c })
        .collect())
}
