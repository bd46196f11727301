//! Orthonormal `so_q(3)` basis `|λ; L M>` of the symmetric `[λ,0,0]` irrep,
//! built two ways: by lowering from the highest weight, and from the closed
//! polynomial in the modified creation operators.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fockrep::ops::{fixed_vector_ops, modified_boson, q_boson, scalar_ops, so3_generators};
use crate::fockrep::{FockSpace, FockState, GeneratorForm, Mode, SectorOperator, SectorVector};
use crate::qnum::{q_double_factorial, q_factorial, q_number_scaled, DeformationParam};

/// Coefficients with magnitude below this are dropped from sparse storage.
pub const COEFF_EPS: f64 = 1e-14;

/// Tolerance for the internal two-form consistency assertions.
const CONSISTENCY_TOL: f64 = 1e-10;

/// A basis vector, stored sparsely over the Fock states of sector `N = λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisVector {
    lambda: u32,
    l: u32,
    m: i32,
    coeffs: Vec<(FockState, f64)>,
}

impl BasisVector {
    fn from_sector(lambda: u32, l: u32, m: i32, space: &FockSpace, v: &SectorVector) -> Self {
        debug_assert_eq!(v.sector, lambda as usize);
        let coeffs = space
            .sector(v.sector)
            .iter()
            .zip(&v.data)
            .filter(|(_, c)| libm::fabs(**c) >= COEFF_EPS)
            .map(|(s, c)| (*s, *c))
            .collect();
        Self { lambda, l, m, coeffs }
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    /// Nonzero coefficients, in the sector's state order.
    pub fn coeffs(&self) -> &[(FockState, f64)] {
        &self.coeffs
    }

    pub fn coeff(&self, s: FockState) -> f64 {
        self.coeffs.iter().find(|(t, _)| *t == s).map_or(0.0, |(_, c)| *c)
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.coeffs.iter().map(|(_, c)| c * c).sum())
    }

    /// Dense form over the `N = λ` sector of `space`.
    pub fn to_sector(&self, space: &FockSpace) -> SectorVector {
        let mut v = SectorVector::zeros(self.lambda as usize);
        for (s, c) in &self.coeffs {
            v.data[space.index_in_sector(s)] = *c;
        }
        v
    }

    pub fn dot(&self, other: &BasisVector) -> f64 {
        if self.lambda != other.lambda {
            return 0.0;
        }
        self.coeffs.iter().map(|(s, c)| c * other.coeff(*s)).sum()
    }

    /// Largest coefficient difference over the union of both supports.
    pub fn max_abs_diff(&self, other: &BasisVector) -> f64 {
        if self.lambda != other.lambda {
            return f64::INFINITY;
        }
        let a = self.coeffs.iter().map(|(s, c)| libm::fabs(c - other.coeff(*s)));
        let b = other.coeffs.iter().map(|(s, c)| libm::fabs(c - self.coeff(*s)));
        a.chain(b).fold(0.0, f64::max)
    }
}

/// Validate `λ ≥ L ≥ |M|` with `λ - L` even.
pub fn check_labels(lambda: u32, l: u32, m: i32) -> Result<()> {
    if l > lambda {
        return Err(Error::Domain("L exceeds lambda"));
    }
    if !(lambda - l).is_multiple_of(2) {
        return Err(Error::Domain("lambda - L must be even"));
    }
    if m.unsigned_abs() > l {
        return Err(Error::Domain("|M| exceeds L"));
    }
    Ok(())
}

/// `L = λ, λ-2, ..., 1 or 0`.
pub fn allowed_l(lambda: u32) -> impl Iterator<Item = u32> {
    (lambda % 2..=lambda).rev().step_by(2)
}

fn capacity(space: &FockSpace, needed: u32) -> Result<()> {
    space.check_capacity(needed as usize)
}

fn apply_n(op: &SectorOperator, v: SectorVector, k: u32) -> Result<SectorVector> {
    let mut v = v;
    for _ in 0..k {
        v = op.apply(&v).ok_or(Error::Capacity { needed: v.sector + 1, nmax: op.nmax() })?;
    }
    Ok(v)
}

/// `|L L>_q = (b+†)^L / sqrt([L]!) |0>`. The second printed form
/// `q^{-L²/2} (B+†)^L / sqrt([2L]!!) |0>` is computed too and must agree.
pub fn highest_weight_state(l: u32, space: &FockSpace, p: DeformationParam) -> Result<BasisVector> {
    capacity(space, l)?;
    let li = i64::from(l);
    let bd = q_boson(Mode::Plus, true, space, p);
    let a = apply_n(&bd, space.vacuum(), l)?.scaled(1.0 / libm::sqrt(q_factorial(li, p)?));
    let bmd = modified_boson(Mode::Plus, true, space, p);
    let lf = f64::from(l);
    let b = apply_n(&bmd, space.vacuum(), l)?
        .scaled(p.pow(-0.5 * lf * lf) / libm::sqrt(q_double_factorial(2 * li, p)?));
    let spread = a.max_abs_diff(&b);
    if !(spread <= CONSISTENCY_TOL) {
        return Err(Error::Integrity { spread, tol: CONSISTENCY_TOL });
    }
    Ok(BasisVector::from_sector(l, l, l as i32, space, &a))
}

/// `N_{λL} = sqrt([λ-L]!! [λ+L+1]!! / [2L+1]!!)`.
pub fn normalization_constant(lambda: u32, l: u32, p: DeformationParam) -> Result<f64> {
    check_labels(lambda, l, 0)?;
    let (lam, l) = (i64::from(lambda), i64::from(l));
    let num = q_double_factorial(lam - l, p)? * q_double_factorial(lam + l + 1, p)?;
    Ok(libm::sqrt(num / q_double_factorial(2 * l + 1, p)?))
}

fn lowering_prefactor(l: u32, m: i32, p: DeformationParam) -> Result<f64> {
    let (l, m) = (i64::from(l), i64::from(m));
    let num = q_factorial(l + m, p)?;
    let den = q_factorial(2 * l, p)? * q_factorial(l - m, p)?;
    Ok(libm::sqrt(num / den))
}

/// `|λ; L M>` by lowering: `(L-)^{L-M}` acts on `|L L>_q` first, then
/// `(S+)^k / N_{λL}` lifts the result to sector `λ`. Since `S+` is a scalar
/// both orders are equal; this one keeps the intermediate vectors small.
pub fn basis_state_lowering(
    lambda: u32,
    l: u32,
    m: i32,
    space: &FockSpace,
    p: DeformationParam,
) -> Result<BasisVector> {
    BasisBuilder::new(space, p)?.lowering(lambda, l, m)
}

/// Holds `L-` and `S+` so that many states can be lowered on one space.
#[derive(Clone, Debug)]
pub struct BasisBuilder<'a> {
    space: &'a FockSpace,
    p: DeformationParam,
    lminus: SectorOperator,
    splus: SectorOperator,
}

impl<'a> BasisBuilder<'a> {
    pub fn new(space: &'a FockSpace, p: DeformationParam) -> Result<Self> {
        let lminus = so3_generators(space, p, GeneratorForm::Simplified)?.lminus;
        let splus = scalar_ops(space, p)?.splus;
        Ok(Self { space, p, lminus, splus })
    }

    pub fn space(&self) -> &'a FockSpace {
        self.space
    }

    pub fn lowering(&self, lambda: u32, l: u32, m: i32) -> Result<BasisVector> {
        check_labels(lambda, l, m)?;
        capacity(self.space, lambda)?;
        let (space, p) = (self.space, self.p);
        // (b+†)^L / sqrt([L]!) |0> is the single Fock state |L,0,0>
        let hw = SectorVector::basis(space, FockState::new(l, 0, 0));
        let lowered = apply_n(&self.lminus, hw, (l as i32 - m) as u32)?;
        let lifted = apply_n(&self.splus, lowered, (lambda - l) / 2)?;
        let s = lowering_prefactor(l, m, p)? / normalization_constant(lambda, l, p)?;
        Ok(BasisVector::from_sector(lambda, l, m, space, &lifted.scaled(s)))
    }
}

/// Coefficient of `|a,b,c>` in `(B+†)^a (B0†)^b (B-†)^c |0>`.
pub fn monomial_coefficient(a: u32, b: u32, c: u32, p: DeformationParam) -> Result<f64> {
    let (af, bf, cf) = (f64::from(a), f64::from(b), f64::from(c));
    let plus = libm::sqrt(q_double_factorial(2 * i64::from(a), p)?) * p.pow(0.5 * af * af);
    let zero = libm::sqrt(q_factorial(i64::from(b), p)?) * p.pow(-0.25 * bf * (bf - 1.0));
    let minus = libm::sqrt(q_double_factorial(2 * i64::from(c), p)?) * p.pow(0.5 * cf * cf);
    Ok(plus * zero * minus)
}

/// `|λ; L M>` from the closed double sum over `t` and `p`, evaluated
/// directly into Fock coefficients. The result is not renormalized.
pub fn basis_state_explicit(
    lambda: u32,
    l: u32,
    m: i32,
    space: &FockSpace,
    p: DeformationParam,
) -> Result<BasisVector> {
    check_labels(lambda, l, m)?;
    capacity(space, lambda)?;
    let (lam, li, mi) = (i64::from(lambda), i64::from(l), i64::from(m));
    let (lamf, lf, mf) = (lam as f64, li as f64, mi as f64);
    let pre = p.pow(0.25 * (lamf - lf) * (lamf + lf + 1.0) - 0.5 * mf * mf)
        * libm::sqrt(
            q_factorial(li + mi, p)? * q_factorial(li - mi, p)? * q_double_factorial(lam - li, p)?
                * p.num(2.0 * lf + 1.0)
                / q_double_factorial(lam + li + 1, p)?,
        );
    let dfac = |n: i64| q_double_factorial(n, p);
    let mut v = SectorVector::zeros(lambda as usize);
    for t in 0..=(lam - li) / 2 {
        let tw = sign(t) * p.pow(-(lamf + lf + 1.0) * t as f64) / (dfac(2 * t)? * dfac(lam - li - 2 * t)?);
        for pp in mi.max(0)..=(li + mi).div_euclid(2) {
            let (a, b, c) = (pp + t, lam + mi - 2 * pp - 2 * t, pp + t - mi);
            let w = tw / (dfac(2 * pp)? * q_factorial(li + mi - 2 * pp, p)? * dfac(2 * pp - 2 * mi)?);
            let (a, b, c) = (a as u32, b as u32, c as u32);
            let s = FockState::new(a, b, c);
            v.data[space.index_in_sector(&s)] += pre * w * monomial_coefficient(a, b, c, p)?;
        }
    }
    Ok(BasisVector::from_sector(lambda, l, m, space, &v))
}

/// Which construction to use for a full sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Lowering,
    Explicit,
}

/// All `|λ; L M>` of one irrep, ordered by descending `L`, then descending `M`.
pub fn basis_sector(lambda: u32, route: Route, space: &FockSpace, p: DeformationParam) -> Result<Vec<BasisVector>> {
    let builder = BasisBuilder::new(space, p)?;
    let mut out = Vec::new();
    for l in allowed_l(lambda) {
        for m in (-(l as i32)..=l as i32).rev() {
            out.push(match route {
                Route::Lowering => builder.lowering(lambda, l, m)?,
                Route::Explicit => basis_state_explicit(lambda, l, m, space, p)?,
            });
        }
    }
    Ok(out)
}

/// `(S+)^k` from its normal-ordered t-sum, for comparison with repeated
/// composition.
pub fn splus_power_expansion(k: u32, space: &FockSpace, p: DeformationParam) -> Result<SectorOperator> {
    capacity(space, 2 * k)?;
    let kf = f64::from(k);
    let ki = i64::from(k);
    let pre = p.pow(kf * (kf + 0.5)) * q_double_factorial(2 * ki, p)?;
    let bp = modified_boson(Mode::Plus, true, space, p);
    let b0 = modified_boson(Mode::Zero, true, space, p);
    let bm = modified_boson(Mode::Minus, true, space, p);
    let mut acc = SectorOperator::zero(space, 2 * k as i32);
    for t in 0..=k {
        let ti = i64::from(t);
        let w = sign(ti) * p.pow(-(2.0 * kf + 1.0) * f64::from(t))
            / (q_double_factorial(2 * ti, p)? * q_double_factorial(2 * ki - 2 * ti, p)?);
        let qn = SectorOperator::diagonal(space, |s| p.pow((kf - 2.0 * f64::from(t)) * s.total() as f64));
        let term = bp
            .pow(t, space)?
            .compose(&b0.pow(2 * (k - t), space)?)?
            .compose(&bm.pow(t, space)?)?
            .compose(&qn)?;
        acc = acc.add(&term.scale(pre * w))?;
    }
    Ok(acc)
}

/// Right side of the lowering formula: `(L-)^m (B+†)^L / [2L]!! |0>` as the
/// printed sum over `p`, for `m ≤ 2L`.
pub fn lowered_highest_weight(l: u32, m: u32, space: &FockSpace, p: DeformationParam) -> Result<SectorVector> {
    if m > 2 * l {
        return Err(Error::Domain("lowering count exceeds 2L"));
    }
    capacity(space, l)?;
    let (li, mi) = (i64::from(l), i64::from(m));
    let (lf, mf) = (li as f64, mi as f64);
    let pre = p.pow(0.5 * mf * (2.0 * lf - mf)) * q_factorial(mi, p)?;
    let mut v = SectorVector::zeros(l as usize);
    // exponents p, 2L-m-2p and m-L+p all non-negative
    for pp in (li - mi).max(0)..=(2 * li - mi) / 2 {
        let (a, b, c) = (pp, 2 * li - mi - 2 * pp, mi - li + pp);
        let w = 1.0 / (q_double_factorial(2 * a, p)? * q_factorial(b, p)? * q_double_factorial(2 * c, p)?);
        let (a, b, c) = (a as u32, b as u32, c as u32);
        v.data[space.index_in_sector(&FockState::new(a, b, c))] += pre * w * monomial_coefficient(a, b, c, p)?;
    }
    Ok(v)
}

/// Direct matrix application `(L-)^m (B+†)^L / [2L]!! |0>`.
pub fn lowered_highest_weight_direct(l: u32, m: u32, space: &FockSpace, p: DeformationParam) -> Result<SectorVector> {
    capacity(space, l)?;
    let bp = modified_boson(Mode::Plus, true, space, p);
    let v = apply_n(&bp, space.vacuum(), l)?.scaled(1.0 / q_double_factorial(2 * i64::from(l), p)?);
    let g = so3_generators(space, p, GeneratorForm::Simplified)?;
    apply_n(&g.lminus, v, m)
}

/// Highest weight written with the vector operator:
/// `(S+)^k / N_{λL} (T†_{+1})^L / sqrt([L]_{q²}!) |0>`.
pub fn highest_weight_via_vector(lambda: u32, l: u32, space: &FockSpace, p: DeformationParam) -> Result<BasisVector> {
    check_labels(lambda, l, l as i32)?;
    capacity(space, lambda)?;
    let v = fixed_vector_ops(space, p)?;
    let sc = scalar_ops(space, p)?;
    let fact2: f64 = (1..=l).map(|i| q_number_scaled(f64::from(i), 2.0, p)).product();
    let t = apply_n(v.tdag.at(1), space.vacuum(), l)?;
    let s = apply_n(&sc.splus, t, (lambda - l) / 2)?;
    let s = s.scaled(1.0 / (normalization_constant(lambda, l, p)? * libm::sqrt(fact2)));
    Ok(BasisVector::from_sector(lambda, l, l as i32, space, &s))
}

#[inline]
fn sign(t: i64) -> f64 {
    if t.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}
