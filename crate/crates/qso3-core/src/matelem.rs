//! Reduced matrix elements of the quadrupole operator `Q²` in the `[λ,0,0]`
//! irrep: closed forms, B(E2) factors, small-τ expansions, and a Fock-space
//! oracle that extracts the same numbers from explicit matrices.

use alloc::vec::Vec;

use crate::basis::{check_labels, BasisBuilder, BasisVector};
use crate::error::{Error, Result};
use crate::fockrep::ops::quadrupole;
use crate::fockrep::{FockSpace, TensorOp};
use crate::qcg::{qcg, CgKey};
use crate::qnum::DeformationParam;

/// Oracle channels whose Clebsch–Gordan factor is smaller than this are
/// skipped: dividing by a tiny coefficient amplifies roundoff.
pub const MIN_CHANNEL_CG: f64 = 1e-4;

/// Closed form vs oracle tolerance, relative to `max(1, |closed|)`.
pub const ORACLE_TOL: f64 = 1e-8;

/// Allowed spread between oracle channels, same scale.
pub const CHANNEL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeSource {
    ClosedForm,
    Oracle,
}

/// `<λ, L_final || Q² || λ, L_initial>` at one τ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducedMERecord {
    pub lambda: u32,
    pub l_final: u32,
    pub l_initial: u32,
    pub tau: f64,
    pub value: f64,
    pub source: MeSource,
}

/// `B(E2; (λ, L+2) -> (λ, L))` in the dimensionless convention.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BE2Record {
    pub lambda: u32,
    pub l: u32,
    pub tau: f64,
    pub value: f64,
}

fn check_pair(lambda: u32, l: u32) -> Result<()> {
    check_labels(lambda, l, 0)
}

fn check_raising(lambda: u32, l: u32) -> Result<()> {
    check_pair(lambda, l)?;
    if l + 2 > lambda {
        return Err(Error::Domain("no L+2 state in this irrep"));
    }
    Ok(())
}

fn sqrt_ratio(p: DeformationParam) -> f64 {
    libm::sqrt(p.num(3.0) * p.num(4.0) / p.num(2.0))
}

/// Coefficient `a` of `|λ; L+2 L>` in `A²_0 |λ; L L>`.
pub fn coeff_a(lambda: u32, l: u32, p: DeformationParam) -> Result<f64> {
    check_raising(lambda, l)?;
    let (lam, lf) = (f64::from(lambda), f64::from(l));
    let inner = p.num(lam - lf) * p.num(lam + lf + 3.0) * p.num(2.0 * lf + 2.0)
        / (p.num(2.0) * p.num(2.0 * lf + 5.0));
    Ok(p.pow(lam - 2.0 * lf - 0.5) / p.num(2.0 * lf + 3.0) * sqrt_ratio(p) * libm::sqrt(inner))
}

fn brace(lam: f64, lf: f64, p: DeformationParam) -> f64 {
    p.pow(lf - 0.5) * p.num(lam - lf) + p.pow(-lf + 0.5) * p.num(lam + lf + 3.0)
}

/// Coefficient `b` of `|λ; L L>` in `A²_0 |λ; L L>`.
pub fn coeff_b(lambda: u32, l: u32, p: DeformationParam) -> Result<f64> {
    check_pair(lambda, l)?;
    let (lam, lf) = (f64::from(lambda), f64::from(l));
    Ok(-p.pow(lam + 2.5) * p.num(2.0 * lf) / (p.num(2.0) * p.num(2.0 * lf + 3.0)) / sqrt_ratio(p)
        * brace(lam, lf, p))
}

fn raising_value(lambda: u32, l: u32, p: DeformationParam) -> f64 {
    let (lam, lf) = (f64::from(lambda), f64::from(l));
    let inner = p.num(lam - lf) * p.num(lam + lf + 3.0) * p.num(2.0 * lf + 4.0) * p.num(2.0 * lf + 2.0)
        / p.num(2.0 * lf + 3.0);
    p.pow(lam - 0.5) / p.num(2.0) * sqrt_ratio(p) * libm::sqrt(inner)
}

fn diagonal_value(lambda: u32, l: u32, p: DeformationParam) -> f64 {
    if l == 0 {
        return 0.0;
    }
    let (lam, lf) = (f64::from(lambda), f64::from(l));
    let inner = p.num(2.0 * lf) * p.num(2.0 * lf + 1.0) * p.num(2.0 * lf + 2.0)
        / (p.num(2.0 * lf - 1.0) * p.num(2.0 * lf + 3.0));
    -p.pow(lam - 0.5) / p.num(2.0) * libm::sqrt(inner) * brace(lam, lf, p)
}

fn record(lambda: u32, l_final: u32, l_initial: u32, p: DeformationParam, value: f64, source: MeSource) -> ReducedMERecord {
    ReducedMERecord { lambda, l_final, l_initial, tau: p.tau(), value, source }
}

/// `<λ, L+2 || Q² || λ, L>`.
pub fn reduced_me_raising(lambda: u32, l: u32, p: DeformationParam) -> Result<ReducedMERecord> {
    check_raising(lambda, l)?;
    Ok(record(lambda, l + 2, l, p, raising_value(lambda, l, p), MeSource::ClosedForm))
}

/// `<λ, L || Q² || λ, L>`.
pub fn reduced_me_diagonal(lambda: u32, l: u32, p: DeformationParam) -> Result<ReducedMERecord> {
    check_pair(lambda, l)?;
    Ok(record(lambda, l, l, p, diagonal_value(lambda, l, p), MeSource::ClosedForm))
}

/// Closed form for any admissible pair; `L' = L - 2` uses the symmetry
/// `<λ, L||Q²||λ, L+2> = <λ, L+2||Q²||λ, L>`.
pub fn reduced_me(lambda: u32, l_final: u32, l_initial: u32, p: DeformationParam) -> Result<ReducedMERecord> {
    check_pair(lambda, l_final)?;
    check_pair(lambda, l_initial)?;
    let value = if l_final == l_initial + 2 {
        raising_value(lambda, l_initial, p)
    } else if l_final == l_initial {
        diagonal_value(lambda, l_initial, p)
    } else if l_final + 2 == l_initial {
        raising_value(lambda, l_final, p)
    } else {
        return Err(Error::Domain("Q² connects only L' = L, L ± 2"));
    };
    Ok(record(lambda, l_final, l_initial, p, value, MeSource::ClosedForm))
}

/// `<λ, L+2 || Q² || λ, L>² / [2L+5]`.
pub fn be2(lambda: u32, l: u32, p: DeformationParam) -> Result<BE2Record> {
    let r = reduced_me_raising(lambda, l, p)?;
    let value = r.value * r.value / p.num(2.0 * f64::from(l) + 5.0);
    Ok(BE2Record { lambda, l, tau: p.tau(), value })
}

/// The downward element obtained from the upward closed form through the
/// adjoint of `Q²` and the Wigner–Eckart factors, on the channel with the
/// largest Clebsch–Gordan coefficients.
pub fn reduced_me_lowering_via_adjoint(lambda: u32, l: u32, p: DeformationParam) -> Result<f64> {
    check_raising(lambda, l)?;
    let up = raising_value(lambda, l, p);
    let (li, lu) = (l as i32, l as i32 + 2);
    let mut best: Option<(f64, f64)> = None;
    for big_m in -li..=li {
        for m in -2..=2 {
            let mp = big_m - m;
            if mp.abs() > lu {
                continue;
            }
            // <L M| Q_m |L+2 M'>  against  <L+2 M'| Q_-m |L M>
            let c_down = qcg(&CgKey::ints(lu, mp, 2, m, li, big_m)?, p);
            let c_up = qcg(&CgKey::ints(li, big_m, 2, -m, lu, mp)?, p);
            let size = libm::fabs(c_down).min(libm::fabs(c_up));
            if size < MIN_CHANNEL_CG || best.is_some_and(|(s, _)| s >= size) {
                continue;
            }
            let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let ratio = libm::sqrt(p.num(2.0 * f64::from(l) + 1.0) / p.num(2.0 * f64::from(l) + 5.0));
            let v = sign * p.pow(-f64::from(m)) * ratio * c_up / c_down * up;
            best = Some((size, v));
        }
    }
    best.map(|(_, v)| v).ok_or(Error::Domain("no usable channel"))
}

/// `<λ; L' M'| Q²_m |λ; L M>` from the closed reduced element.
pub fn full_me_from_reduced(
    lambda: u32,
    l_final: u32,
    m_final: i32,
    m: i32,
    l_initial: u32,
    m_initial: i32,
    p: DeformationParam,
) -> Result<f64> {
    check_labels(lambda, l_final, m_final)?;
    check_labels(lambda, l_initial, m_initial)?;
    if m.abs() > 2 {
        return Err(Error::Domain("|m| exceeds 2"));
    }
    let red = reduced_me(lambda, l_final, l_initial, p)?.value;
    let key = CgKey::ints(l_initial as i32, m_initial, 2, m, l_final as i32, m_final)?;
    Ok(qcg(&key, p) / libm::sqrt(p.num(2.0 * f64::from(l_final) + 1.0)) * red)
}

/// Quadratic Taylor coefficients `(c0, c1, c2)` in τ of the raising element.
pub fn taylor_raising(lambda: u32, l: u32) -> Result<[f64; 3]> {
    check_raising(lambda, l)?;
    let (lam, lf) = (f64::from(lambda), f64::from(l));
    let c0 = libm::sqrt(6.0 * (lam - lf) * (lam + lf + 3.0) * (lf + 2.0) * (lf + 1.0) / (2.0 * lf + 3.0));
    let c1 = c0 * (lam - 0.5);
    let c2 = c0 * (2.0 * lam * lam / 3.0 + lf * lf / 2.0 + 1.5 * lf + 65.0 / 24.0);
    Ok([c0, c1, c2])
}

/// Quadratic Taylor coefficients `(c0, c1, c2)` in τ of the diagonal element.
pub fn taylor_diagonal(lambda: u32, l: u32) -> Result<[f64; 3]> {
    check_pair(lambda, l)?;
    if l == 0 {
        return Ok([0.0; 3]);
    }
    let (lam, lf) = (f64::from(lambda), f64::from(l));
    let ll = lf * (lf + 1.0);
    let c0 = -(2.0 * lam + 3.0) * libm::sqrt(ll * (2.0 * lf + 1.0) / ((2.0 * lf - 1.0) * (2.0 * lf + 3.0)));
    let c1 = c0 * 2.0 * (lam * (lam + 1.0) - ll) / (2.0 * lam + 3.0);
    let c2 = c0 * ((2.0 * lam + 15.0) * ll + (2.0 * lam + 1.0) * (2.0 * lam * lam + 2.0 * lam + 3.0))
        / (3.0 * (2.0 * lam + 3.0));
    Ok([c0, c1, c2])
}

/// `c0 + c1 τ + c2 τ²`.
pub fn taylor_eval(c: [f64; 3], tau: f64) -> f64 {
    c[0] + tau * (c[1] + tau * c[2])
}

/// Which element of the pair an expansion describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeKind {
    Raising,
    Diagonal,
}

/// Leading power of τ in the remainder after the quadratic truncation. The
/// diagonal element at `L = λ` reduces to `-[2λ+3] sqrt(...)/[2]`, which is
/// even in τ, so its cubic term vanishes.
pub fn remainder_order(kind: MeKind, lambda: u32, l: u32) -> u32 {
    if kind == MeKind::Diagonal && l == lambda {
        4
    } else {
        3
    }
}

/// `|closed(τ) - quadratic(τ)|`.
pub fn taylor_remainder(kind: MeKind, lambda: u32, l: u32, tau: f64) -> Result<f64> {
    let p = DeformationParam::new(tau)?;
    let (exact, c) = match kind {
        MeKind::Raising => (reduced_me_raising(lambda, l, p)?.value, taylor_raising(lambda, l)?),
        MeKind::Diagonal => (reduced_me_diagonal(lambda, l, p)?.value, taylor_diagonal(lambda, l)?),
    };
    Ok(libm::fabs(exact - taylor_eval(c, tau)))
}

/// One `(M, m, M')` extraction channel of the oracle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Channel {
    pub m_initial: i32,
    pub m: i32,
    pub m_final: i32,
    pub cg: f64,
    pub value: f64,
}

/// All channels of one oracle extraction and their summary.
#[derive(Clone, Debug, PartialEq)]
pub struct Extraction {
    pub record: ReducedMERecord,
    /// `max - min` over channels, relative to `max(1, |value|)`.
    pub spread: f64,
    pub channels: Vec<Channel>,
}

/// Which channels the oracle evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelChoice {
    /// `M = M' = L` when legal, else the legal channel of smallest `|M|`.
    Default,
    All,
}

/// The quadrupole tensor and basis builder on one truncated space.
#[derive(Clone, Debug)]
pub struct Oracle<'a> {
    builder: BasisBuilder<'a>,
    quad: TensorOp,
    p: DeformationParam,
}

/// Default cutoff for an oracle covering irreps up to `lambda`.
pub fn default_nmax(lambda: u32) -> usize {
    12.max(lambda as usize + 2)
}

impl<'a> Oracle<'a> {
    pub fn new(space: &'a FockSpace, p: DeformationParam) -> Result<Self> {
        Ok(Self { builder: BasisBuilder::new(space, p)?, quad: quadrupole(space, p)?, p })
    }

    fn state(&self, lambda: u32, l: u32, m: i32) -> Result<BasisVector> {
        self.builder.lowering(lambda, l, m)
    }

    fn capacity(&self, lambda: u32) -> Result<()> {
        let nmax = self.builder.space().nmax();
        if lambda as usize + 1 > nmax {
            return Err(Error::Capacity { needed: lambda as usize + 1, nmax });
        }
        Ok(())
    }

    /// `<λ; L' M'| op |λ; L M>` for an operator preserving `N`.
    fn element(&self, op: &crate::fockrep::SectorOperator, bra: &BasisVector, ket: &BasisVector) -> Result<f64> {
        let space = self.builder.space();
        let v = op
            .apply(&ket.to_sector(space))
            .ok_or(Error::Capacity { needed: ket.lambda() as usize + 2, nmax: space.nmax() })?;
        Ok(bra.to_sector(space).dot(&v))
    }

    fn channels(&self, l_final: u32, l_initial: u32, choice: ChannelChoice) -> Result<Vec<(i32, i32, i32, f64)>> {
        let (lf, li) = (l_final as i32, l_initial as i32);
        let mut legal = Vec::new();
        for big_m in -li..=li {
            for m in -2..=2 {
                let mp = big_m + m;
                if mp.abs() > lf {
                    continue;
                }
                let c = qcg(&CgKey::ints(li, big_m, 2, m, lf, mp)?, self.p);
                if libm::fabs(c) >= MIN_CHANNEL_CG {
                    legal.push((big_m, m, mp, c));
                }
            }
        }
        if legal.is_empty() {
            return Err(Error::Domain("every Clebsch-Gordan channel vanishes"));
        }
        if choice == ChannelChoice::All {
            return Ok(legal);
        }
        let stretched = legal.iter().find(|&&(big_m, m, _, _)| big_m == li && m == 0);
        let pick = match stretched {
            Some(c) => *c,
            None => *legal.iter().min_by_key(|c| (c.0.abs(), c.0, c.1)).expect("nonempty"),
        };
        Ok(alloc::vec![pick])
    }

    /// Extract `<λ, L' || Q² || λ, L>` from explicit matrix elements.
    pub fn extract(&self, lambda: u32, l_final: u32, l_initial: u32, choice: ChannelChoice) -> Result<Extraction> {
        check_pair(lambda, l_final)?;
        check_pair(lambda, l_initial)?;
        self.capacity(lambda)?;
        let p = self.p;
        let norm = libm::sqrt(p.num(2.0 * f64::from(l_final) + 1.0));
        let mut channels = Vec::new();
        for (big_m, m, mp, cg) in self.channels(l_final, l_initial, choice)? {
            let bra = self.state(lambda, l_final, mp)?;
            let ket = self.state(lambda, l_initial, big_m)?;
            let me = self.element(self.quad.at(m), &bra, &ket)?;
            channels.push(Channel { m_initial: big_m, m, m_final: mp, cg, value: me * norm / cg });
        }
        let lo = channels.iter().map(|c| c.value).fold(f64::INFINITY, f64::min);
        let hi = channels.iter().map(|c| c.value).fold(f64::NEG_INFINITY, f64::max);
        let value = channels.iter().map(|c| c.value).sum::<f64>() / channels.len() as f64;
        let spread = (hi - lo) / libm::fabs(value).max(1.0);
        let record = record(lambda, l_final, l_initial, p, value, MeSource::Oracle);
        Ok(Extraction { record, spread, channels })
    }

    /// Coefficients `(a, b)` of `A²_0 |λ; L L> = a |λ; L+2 L> + b |λ; L L>`
    /// read off from matrices; `a` is `None` when `L+2 > λ`.
    pub fn coefficients(&self, lambda: u32, l: u32) -> Result<(Option<f64>, f64)> {
        check_pair(lambda, l)?;
        self.capacity(lambda)?;
        let a20 = self.quad.at(0).scale(1.0 / sqrt_ratio(self.p));
        let ket = self.state(lambda, l, l as i32)?;
        let b = self.element(&a20, &ket, &ket)?;
        let a = if l + 2 <= lambda {
            let bra = self.state(lambda, l + 2, l as i32)?;
            Some(self.element(&a20, &bra, &ket)?)
        } else {
            None
        };
        Ok((a, b))
    }
}

/// Oracle value of `<λ, L' || Q² || λ, L>` from every usable channel, with an
/// integrity error if the channels disagree beyond [`CHANNEL_TOL`].
pub fn reduced_me_oracle(
    lambda: u32,
    l_final: u32,
    l_initial: u32,
    p: DeformationParam,
    space: &FockSpace,
) -> Result<ReducedMERecord> {
    let ex = Oracle::new(space, p)?.extract(lambda, l_final, l_initial, ChannelChoice::All)?;
    if !(ex.spread <= CHANNEL_TOL) {
        return Err(Error::Integrity { spread: ex.spread, tol: CHANNEL_TOL });
    }
    Ok(ex.record)
}

/// Admissible `(L', L)` pairs of an irrep with a well-defined reduced
/// element: `L' ∈ {L, L ± 2}`, excluding `L' = L = 0`.
pub fn me_pairs(lambda: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for l in crate::basis::allowed_l(lambda).collect::<Vec<_>>().into_iter().rev() {
        if l + 2 <= lambda {
            out.push((l + 2, l));
        }
        if l > 0 {
            out.push((l, l));
        }
        if l >= 2 {
            out.push((l - 2, l));
        }
    }
    out
}
