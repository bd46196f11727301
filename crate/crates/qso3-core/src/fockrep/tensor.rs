use alloc::vec::Vec;

use super::ops::{l0_function, q_commutator_terms, so3_generators, GeneratorForm};
use super::{relative_residual, FockSpace, SectorOperator};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::qcg::qcg_column;
use crate::qnum::DeformationParam;

/// Components `T^j_m`, `m = -j..=j`, of an integer-rank operator family.
#[derive(Clone, Debug)]
pub struct TensorOp {
    rank: u32,
    comps: Vec<SectorOperator>,
}

impl TensorOp {
    /// `comps` is ordered by ascending `m`.
    pub fn new(rank: u32, comps: Vec<SectorOperator>) -> Result<Self> {
        if comps.len() != 2 * rank as usize + 1 {
            return Err(Error::Shape("tensor needs 2j+1 components"));
        }
        let d = comps[0].delta_n();
        if comps.iter().any(|c| c.delta_n() != d || c.nmax() != comps[0].nmax()) {
            return Err(Error::Shape("tensor components disagree on number shift or space"));
        }
        Ok(Self { rank, comps })
    }

    #[inline]
    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Component `m`; `None` outside `-j..=j`.
    pub fn get(&self, m: i32) -> Option<&SectorOperator> {
        let i = m + self.rank as i32;
        if i < 0 {
            return None;
        }
        self.comps.get(i as usize)
    }

    /// Component `m`, panicking outside the rank.
    pub fn at(&self, m: i32) -> &SectorOperator {
        self.get(m).expect("tensor component out of range")
    }

    pub fn components(&self) -> impl Iterator<Item = (i32, &SectorOperator)> {
        let j = self.rank as i32;
        self.comps.iter().enumerate().map(move |(i, c)| (i as i32 - j, c))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { rank: self.rank, comps: self.comps.iter().map(|c| c.scale(s)).collect() }
    }

    pub fn delta_n(&self) -> i32 {
        self.comps[0].delta_n()
    }

    /// Smallest guard band below which every component block is present.
    pub fn guard(&self) -> usize {
        let nmax = self.comps[0].nmax();
        let top = (0..=nmax)
            .take_while(|&n| self.comps.iter().all(|c| c.block(n).is_some()))
            .last();
        match top {
            Some(t) => nmax - t,
            None => nmax + 1,
        }
    }
}

/// `[X ⊗ Y]^L_M = Σ C^{LM}_{j1 m, j2 n} X_m Y_n`, with coefficients in base
/// `q^-1` when `base_inverted` is set.
pub fn couple(
    x: &TensorOp,
    y: &TensorOp,
    rank: u32,
    base_inverted: bool,
    p: DeformationParam,
) -> Result<TensorOp> {
    let (jx, jy, jl) = (
        HalfInt::from_int(x.rank as i32),
        HalfInt::from_int(y.rank as i32),
        HalfInt::from_int(rank as i32),
    );
    let shift = x.delta_n() + y.delta_n();
    let mut comps = Vec::with_capacity(2 * rank as usize + 1);
    for big_m in -(rank as i32)..=rank as i32 {
        let column = qcg_column(jx, jy, jl, HalfInt::from_int(big_m), base_inverted, p)?;
        let mut acc: Option<SectorOperator> = None;
        for (m1, m2, c) in column {
            let (m1, m2) = (m1.as_int().unwrap_or(0), m2.as_int().unwrap_or(0));
            let term = x.at(m1).compose(y.at(m2))?.scale(c);
            acc = Some(match acc {
                Some(a) => a.add(&term)?,
                None => term,
            });
        }
        let comp = acc.ok_or(Error::Domain("coupled rank violates the triangle rule"))?;
        debug_assert_eq!(comp.delta_n(), shift);
        comps.push(comp);
    }
    TensorOp::new(rank, comps)
}

/// Largest residuals of the three defining relations of an irreducible
/// tensor, each relative to the size of the terms involved.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TensorReport {
    pub rank: u32,
    pub guard: usize,
    /// `[L0, T_m] = m T_m`.
    pub weight: f64,
    /// `[L+, T_m]_{q^m} q^{L0} = √([j-m][j+m+1]) T_{m+1}`.
    pub raising: f64,
    /// `[L-, T_m]_{q^m} q^{L0} = √([j+m][j-m+1]) T_{m-1}`.
    pub lowering: f64,
}

impl TensorReport {
    pub fn max_residual(&self) -> f64 {
        self.weight.max(self.raising).max(self.lowering)
    }
}

/// Check the adjoint-action relations of an irreducible rank-`j` tensor on
/// the range where every component is known.
pub fn tensor_check(
    t: &TensorOp,
    rank: u32,
    space: &FockSpace,
    p: DeformationParam,
) -> Result<TensorReport> {
    if t.rank != rank {
        return Err(Error::Shape("tensor rank does not match its component count"));
    }
    let g = so3_generators(space, p, GeneratorForm::Simplified)?;
    let q_l0 = l0_function(space, |m| p.pow(m));
    let guard = t.guard();
    let j = f64::from(rank);
    let mut report = TensorReport { rank, guard, weight: 0.0, raising: 0.0, lowering: 0.0 };
    for (m, tm) in t.components() {
        let mf = f64::from(m);
        let (a, b) = q_commutator_terms(&g.l0, tm, 0.0, p)?;
        let lhs = a.sub(&b)?;
        let scale = a.max_abs_guarded(guard).max(b.max_abs_guarded(guard));
        report.weight = report.weight.max(relative_residual(&lhs, &tm.scale(mf), guard, scale));

        for (sign, gen) in [(1i32, &g.lplus), (-1, &g.lminus)] {
            let (a, b) = q_commutator_terms(gen, tm, mf, p)?;
            let a = a.compose(&q_l0)?;
            let b = b.compose(&q_l0)?;
            let lhs = a.sub(&b)?;
            let s = f64::from(sign);
            let coeff = libm::sqrt(p.num(j - s * mf) * p.num(j + s * mf + 1.0));
            let rhs = match t.get(m + sign) {
                Some(next) => next.scale(coeff),
                None => SectorOperator::zero(space, tm.delta_n()),
            };
            let scale = a.max_abs_guarded(guard).max(b.max_abs_guarded(guard));
            let r = relative_residual(&lhs, &rhs, guard, scale);
            if sign > 0 {
                report.raising = report.raising.max(r);
            } else {
                report.lowering = report.lowering.max(r);
            }
        }
    }
    Ok(report)
}
