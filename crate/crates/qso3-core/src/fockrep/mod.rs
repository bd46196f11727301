//! Truncated three-mode q-boson Fock space.
//!
//! States are grouped into sectors of fixed total boson number `N`. Every
//! operator of the construction shifts `N` by a fixed amount, so it is stored
//! as one dense block per source sector. A block whose target sector lies
//! above the cutoff is *absent*: its values are not known from inside the
//! truncated space. Products and sums propagate absence, so every block that
//! is present is exact, and identity checks only ever compare exact data.

mod matrix;
pub mod identities;
pub mod ops;
pub mod tensor;

use alloc::vec::Vec;
use core::fmt;

pub use matrix::Matrix;
pub use ops::{
    casimir, casimir_forms, coupled_tensor, j1_tensor, j1_zero_alternative, modified_boson,
    number_op, q_boson, q_commutator, q_power, quadrupole, scalar_ops, so3_generators,
    vector_ops, GeneratorForm, Generators, Scalars, VectorOpParams, VectorOps,
};
pub use tensor::{tensor_check, TensorOp, TensorReport};

use crate::error::{Error, Result};

/// The three boson modes, labelled by the `L0` weight they carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Plus,
    Zero,
    Minus,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Plus, Mode::Zero, Mode::Minus];
}

/// Occupation numbers `(n+, n0, n-)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockState {
    pub nplus: u32,
    pub nzero: u32,
    pub nminus: u32,
}

impl FockState {
    pub const VACUUM: FockState = FockState { nplus: 0, nzero: 0, nminus: 0 };

    pub const fn new(nplus: u32, nzero: u32, nminus: u32) -> Self {
        Self { nplus, nzero, nminus }
    }

    #[inline]
    pub fn total(&self) -> usize {
        (self.nplus + self.nzero + self.nminus) as usize
    }

    #[inline]
    pub fn get(&self, mode: Mode) -> u32 {
        match mode {
            Mode::Plus => self.nplus,
            Mode::Zero => self.nzero,
            Mode::Minus => self.nminus,
        }
    }

    /// Occupation changed by `delta` in one mode; `None` below zero.
    pub fn shifted(&self, mode: Mode, delta: i32) -> Option<FockState> {
        let n = self.get(mode) as i64 + i64::from(delta);
        if n < 0 {
            return None;
        }
        let mut s = *self;
        match mode {
            Mode::Plus => s.nplus = n as u32,
            Mode::Zero => s.nzero = n as u32,
            Mode::Minus => s.nminus = n as u32,
        }
        Some(s)
    }

    /// `L0` eigenvalue `n+ - n-`.
    pub fn projection(&self) -> i32 {
        self.nplus as i32 - self.nminus as i32
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{},{}>", self.nplus, self.nzero, self.nminus)
    }
}

/// Number of states with total boson number `n`.
#[inline]
pub const fn sector_dim(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

/// All Fock states with total number `0..=nmax`.
///
/// Inside a sector the order is descending `n+`, then descending `n0`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockSpace {
    nmax: usize,
    sectors: Vec<Vec<FockState>>,
}

impl FockSpace {
    pub fn new(nmax: usize) -> Self {
        let sectors = (0..=nmax)
            .map(|n| {
                let n = n as u32;
                let mut states = Vec::with_capacity(sector_dim(n as usize));
                for a in (0..=n).rev() {
                    for b in (0..=n - a).rev() {
                        states.push(FockState::new(a, b, n - a - b));
                    }
                }
                states
            })
            .collect();
        Self { nmax, sectors }
    }

    #[inline]
    pub fn nmax(&self) -> usize {
        self.nmax
    }

    pub fn sector(&self, n: usize) -> &[FockState] {
        &self.sectors[n]
    }

    pub fn dim(&self) -> usize {
        self.sectors.iter().map(Vec::len).sum()
    }

    /// Position of `s` inside its sector.
    #[inline]
    pub fn index_in_sector(&self, s: &FockState) -> usize {
        let r = s.total() - s.nplus as usize;
        r * (r + 1) / 2 + s.nminus as usize
    }

    pub fn contains(&self, s: &FockState) -> bool {
        s.total() <= self.nmax
    }

    pub fn vacuum(&self) -> SectorVector {
        SectorVector::basis(self, FockState::VACUUM)
    }

    pub(crate) fn check_capacity(&self, needed: usize) -> Result<()> {
        if needed > self.nmax {
            Err(Error::Capacity { needed, nmax: self.nmax })
        } else {
            Ok(())
        }
    }
}

/// Build a truncated space holding sectors `0..=nmax`.
pub fn build_space(nmax: usize) -> FockSpace {
    FockSpace::new(nmax)
}

/// A vector supported in a single sector.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorVector {
    pub sector: usize,
    pub data: Vec<f64>,
}

impl SectorVector {
    pub fn zeros(sector: usize) -> Self {
        Self { sector, data: alloc::vec![0.0; sector_dim(sector)] }
    }

    pub fn basis(space: &FockSpace, s: FockState) -> Self {
        let mut v = Self::zeros(s.total());
        v.data[space.index_in_sector(&s)] = 1.0;
        v
    }

    pub fn dot(&self, other: &SectorVector) -> f64 {
        if self.sector != other.sector {
            return 0.0;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.dot(self))
    }

    pub fn scaled(mut self, s: f64) -> Self {
        self.data.iter_mut().for_each(|x| *x *= s);
        self
    }

    pub fn axpy(&mut self, a: f64, x: &SectorVector) {
        assert_eq!(self.sector, x.sector, "axpy across sectors");
        self.data.iter_mut().zip(&x.data).for_each(|(y, xi)| *y += a * xi);
    }

    pub fn max_abs_diff(&self, other: &SectorVector) -> f64 {
        if self.sector != other.sector {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max(libm::fabs(a - b)))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(libm::fabs(*x)))
    }
}

/// Linear operator with a fixed total-number shift, one block per source
/// sector. `blocks[n]` maps sector `n` to sector `n + delta_n`; it is `None`
/// when that target (or an intermediate of a product) lies above the cutoff.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorOperator {
    nmax: usize,
    delta_n: i32,
    blocks: Vec<Option<Matrix>>,
}

fn target_sector(n: usize, delta: i32) -> i64 {
    n as i64 + i64::from(delta)
}

impl SectorOperator {
    /// Operator built from its action on single Fock states. `f` returns the
    /// image state and coefficient; the image must lie in sector `n + delta_n`.
    pub fn from_action<F>(space: &FockSpace, delta_n: i32, f: F) -> Self
    where
        F: Fn(FockState) -> Option<(FockState, f64)>,
    {
        let blocks = (0..=space.nmax)
            .map(|n| {
                let t = target_sector(n, delta_n);
                if t > space.nmax as i64 {
                    return None;
                }
                let rows = if t < 0 { 0 } else { sector_dim(t as usize) };
                let mut m = Matrix::zeros(rows, sector_dim(n));
                for (j, s) in space.sector(n).iter().enumerate() {
                    if let Some((img, c)) = f(*s) {
                        debug_assert_eq!(img.total() as i64, t);
                        m[(space.index_in_sector(&img), j)] += c;
                    }
                }
                Some(m)
            })
            .collect();
        Self { nmax: space.nmax, delta_n, blocks }
    }

    /// Number-conserving diagonal operator.
    pub fn diagonal<F: Fn(FockState) -> f64>(space: &FockSpace, f: F) -> Self {
        Self::from_action(space, 0, |s| Some((s, f(s))))
    }

    pub fn identity(space: &FockSpace) -> Self {
        Self::diagonal(space, |_| 1.0)
    }

    pub fn zero(space: &FockSpace, delta_n: i32) -> Self {
        Self::from_action(space, delta_n, |_| None)
    }

    #[inline]
    pub fn delta_n(&self) -> i32 {
        self.delta_n
    }

    #[inline]
    pub fn nmax(&self) -> usize {
        self.nmax
    }

    pub fn block(&self, source: usize) -> Option<&Matrix> {
        self.blocks.get(source).and_then(Option::as_ref)
    }

    fn zip(&self, rhs: &Self, f: impl Fn(f64, f64) -> f64 + Copy) -> Result<Self> {
        if self.nmax != rhs.nmax || self.delta_n != rhs.delta_n {
            return Err(Error::Shape("sum of operators with different spaces or number shifts"));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&rhs.blocks)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => Some(a.zip_with(b, f)),
                _ => None,
            })
            .collect();
        Ok(Self { nmax: self.nmax, delta_n: self.delta_n, blocks })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            nmax: self.nmax,
            delta_n: self.delta_n,
            blocks: self.blocks.iter().map(|b| b.as_ref().map(|m| m.map(|x| x * s))).collect(),
        }
    }

    /// `a X + b Y`.
    pub fn lin(a: f64, x: &Self, b: f64, y: &Self) -> Result<Self> {
        x.zip(y, move |u, v| a * u + b * v)
    }

    /// `self ∘ rhs`: apply `rhs` first.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if self.nmax != rhs.nmax {
            return Err(Error::Shape("product of operators on different spaces"));
        }
        let delta_n = self.delta_n + rhs.delta_n;
        let blocks = (0..=self.nmax)
            .map(|n| {
                let t = target_sector(n, delta_n);
                if t > self.nmax as i64 {
                    return None;
                }
                let mid = target_sector(n, rhs.delta_n);
                let inner = rhs.blocks[n].as_ref()?;
                if mid < 0 || t < 0 {
                    let rows = if t < 0 { 0 } else { sector_dim(t as usize) };
                    return Some(Matrix::zeros(rows, sector_dim(n)));
                }
                let outer = self.blocks[mid as usize].as_ref()?;
                Some(outer.matmul(inner))
            })
            .collect();
        Ok(Self { nmax: self.nmax, delta_n, blocks })
    }

    /// `self^k` (`k = 0` gives the identity).
    pub fn pow(&self, k: u32, space: &FockSpace) -> Result<Self> {
        let mut acc = Self::identity(space);
        for _ in 0..k {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Hermitian conjugate (transpose; all matrices are real).
    pub fn adjoint(&self) -> Self {
        let delta_n = -self.delta_n;
        let blocks = (0..=self.nmax)
            .map(|m| {
                let src = target_sector(m, self.delta_n.wrapping_neg());
                // the original operator maps `src` onto sector `m`
                if src > self.nmax as i64 {
                    return None;
                }
                if src < 0 {
                    return Some(Matrix::zeros(0, sector_dim(m)));
                }
                self.blocks[src as usize].as_ref().map(Matrix::transpose)
            })
            .collect();
        Self { nmax: self.nmax, delta_n, blocks }
    }

    /// Left multiplication by a diagonal function of the *target* state.
    pub fn left_diag<F: Fn(FockState) -> f64>(&self, space: &FockSpace, f: F) -> Self {
        let blocks = (0..=self.nmax)
            .map(|n| {
                let b = self.blocks[n].as_ref()?;
                let t = target_sector(n, self.delta_n);
                if t < 0 {
                    return Some(b.clone());
                }
                let d: Vec<f64> = space.sector(t as usize).iter().map(|s| f(*s)).collect();
                Some(b.scale_rows(&d))
            })
            .collect();
        Self { nmax: self.nmax, delta_n: self.delta_n, blocks }
    }

    /// Right multiplication by a diagonal function of the *source* state.
    pub fn right_diag<F: Fn(FockState) -> f64>(&self, space: &FockSpace, f: F) -> Self {
        let blocks = (0..=self.nmax)
            .map(|n| {
                let b = self.blocks[n].as_ref()?;
                let d: Vec<f64> = space.sector(n).iter().map(|s| f(*s)).collect();
                Some(b.scale_cols(&d))
            })
            .collect();
        Self { nmax: self.nmax, delta_n: self.delta_n, blocks }
    }

    /// Image of a vector; `None` when the needed block is truncated.
    pub fn apply(&self, v: &SectorVector) -> Option<SectorVector> {
        let b = self.block(v.sector)?;
        let t = target_sector(v.sector, self.delta_n);
        if t < 0 {
            return Some(SectorVector { sector: 0, data: alloc::vec![0.0; 1] });
        }
        Some(SectorVector { sector: t as usize, data: b.matvec(&v.data) })
    }

    /// Largest absolute entry over source sectors `0..=nmax - guard`.
    /// Infinite when a block inside that range is absent.
    pub fn max_abs_guarded(&self, guard: usize) -> f64 {
        let top = self.nmax.saturating_sub(guard);
        if guard > self.nmax {
            return 0.0;
        }
        self.blocks[..=top].iter().fold(0.0, |m, b| match b {
            Some(b) => m.max(b.max_abs()),
            None => f64::INFINITY,
        })
    }

    /// Largest absolute entry of `self - rhs` over the guarded range.
    pub fn max_abs_diff_guarded(&self, rhs: &Self, guard: usize) -> f64 {
        if self.nmax != rhs.nmax || self.delta_n != rhs.delta_n {
            return f64::INFINITY;
        }
        if guard > self.nmax {
            return 0.0;
        }
        let top = self.nmax - guard;
        (0..=top).fold(0.0, |m, n| match (&self.blocks[n], &rhs.blocks[n]) {
            (Some(a), Some(b)) => m.max(a.zip_with(b, |x, y| x - y).max_abs()),
            _ => f64::INFINITY,
        })
    }
}

/// Zero operators are compared absolutely below this scale.
pub const ZERO_SCALE: f64 = 1e-12;

/// Guarded operator distance: `max|a - b| / max(max|a|, max|b|, extra)`,
/// falling back to the absolute difference when every scale is below
/// [`ZERO_SCALE`]. `extra` carries the size of the individual terms when one
/// side of an identity is a cancelling combination.
pub fn relative_residual(a: &SectorOperator, b: &SectorOperator, guard: usize, extra: f64) -> f64 {
    let diff = a.max_abs_diff_guarded(b, guard);
    let scale = a.max_abs_guarded(guard).max(b.max_abs_guarded(guard)).max(extra);
    if !diff.is_finite() || !scale.is_finite() {
        return f64::INFINITY;
    }
    if scale < ZERO_SCALE {
        diff
    } else {
        diff / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_examples() {
        let s0 = build_space(0);
        assert_eq!(s0.dim(), 1);
        assert_eq!(s0.sector(0), &[FockState::VACUUM]);
        let s2 = build_space(2);
        let dims: Vec<usize> = (0..=2).map(|n| s2.sector(n).len()).collect();
        assert_eq!(dims, [1, 3, 6]);
        assert_eq!(build_space(10).sector(10).len(), 66);
    }

    #[test]
    fn index_matches_order() {
        let sp = build_space(9);
        for n in 0..=9 {
            assert_eq!(sp.sector(n).len(), sector_dim(n));
            for (i, s) in sp.sector(n).iter().enumerate() {
                assert_eq!(sp.index_in_sector(s), i);
                assert_eq!(s.total(), n);
            }
        }
    }

    #[test]
    fn truncated_blocks_are_absent() {
        let sp = build_space(3);
        let up = SectorOperator::from_action(&sp, 1, |s| s.shifted(Mode::Zero, 1).map(|t| (t, 1.0)));
        assert!(up.block(3).is_none());
        assert!(up.block(2).is_some());
        let up2 = up.compose(&up).unwrap();
        assert!(up2.block(2).is_none());
        assert!(up2.block(1).is_some());
        let down = up.adjoint();
        assert_eq!(down.delta_n(), -1);
        assert_eq!(down.block(0).unwrap().rows(), 0);
        // up then down from sector 3 needs sector 4
        let dn_up = down.compose(&up).unwrap();
        assert!(dn_up.block(3).is_none());
    }

    #[test]
    fn sum_requires_matching_shift() {
        let sp = build_space(2);
        let a = SectorOperator::identity(&sp);
        let b = SectorOperator::zero(&sp, 1);
        assert!(a.add(&b).is_err());
        assert!(a.compose(&SectorOperator::identity(&build_space(3))).is_err());
    }
}
