//! Matrix realizations of the operators of the construction.

use super::tensor::{couple, TensorOp};
use super::{FockSpace, FockState, Mode, SectorOperator};
use crate::error::{Error, Result};
use crate::qnum::DeformationParam;

/// Number operator `N_i`.
pub fn number_op(space: &FockSpace, mode: Mode) -> SectorOperator {
    SectorOperator::diagonal(space, |s| f64::from(s.get(mode)))
}

/// Diagonal `q^{f(state)}`.
pub fn q_power<F: Fn(FockState) -> f64>(space: &FockSpace, p: DeformationParam, f: F) -> SectorOperator {
    SectorOperator::diagonal(space, |s| p.pow(f(s)))
}

fn ladder<F>(space: &FockSpace, mode: Mode, dagger: bool, coeff: F) -> SectorOperator
where
    F: Fn(u32) -> f64,
{
    // `coeff(n)` is the matrix element leaving occupation n of `mode`
    let delta = if dagger { 1 } else { -1 };
    SectorOperator::from_action(space, delta, |s| {
        let n = s.get(mode);
        s.shifted(mode, delta).map(|t| (t, coeff(n)))
    })
}

/// Standard q-boson: `b†|n⟩ = √[n+1] |n+1⟩`, `b|n⟩ = √[n] |n-1⟩`.
pub fn q_boson(mode: Mode, dagger: bool, space: &FockSpace, p: DeformationParam) -> SectorOperator {
    if dagger {
        ladder(space, mode, true, |n| libm::sqrt(p.num(f64::from(n) + 1.0)))
    } else {
        ladder(space, mode, false, |n| libm::sqrt(p.num(f64::from(n))))
    }
}

/// Modified bosons `B_i`, `B_i†`.
///
/// `B0 = q^{-N0/2} b0`. For the `±` modes the `√([2N]/[N])` factor is applied
/// in action form, `B†|n⟩ = √[2n+2] q^{n+1/2} |n+1⟩` and
/// `B|n⟩ = √[2n] q^{n-1/2} |n-1⟩`, so `[0]/[0]` is never formed.
pub fn modified_boson(
    mode: Mode,
    dagger: bool,
    space: &FockSpace,
    p: DeformationParam,
) -> SectorOperator {
    match (mode, dagger) {
        (Mode::Zero, true) => ladder(space, mode, true, |n| {
            let n = f64::from(n);
            libm::sqrt(p.num(n + 1.0)) * p.pow(-0.5 * n)
        }),
        (Mode::Zero, false) => ladder(space, mode, false, |n| {
            let n = f64::from(n);
            libm::sqrt(p.num(n)) * p.pow(-0.5 * (n - 1.0))
        }),
        (_, true) => ladder(space, mode, true, |n| {
            let n = f64::from(n);
            libm::sqrt(p.num(2.0 * n + 2.0)) * p.pow(n + 0.5)
        }),
        (_, false) => ladder(space, mode, false, |n| {
            let n = f64::from(n);
            libm::sqrt(p.num(2.0 * n)) * p.pow(n - 0.5)
        }),
    }
}

/// Which printed construction of the generators to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorForm {
    /// In terms of the modified bosons `B_i`.
    Simplified,
    /// In terms of the plain q-bosons `b_i` with explicit square-root factors.
    Original,
}

#[derive(Clone, Debug)]
pub struct Generators {
    pub l0: SectorOperator,
    pub lplus: SectorOperator,
    pub lminus: SectorOperator,
}

fn l0_value(s: FockState) -> f64 {
    f64::from(s.projection())
}

pub fn so3_generators(space: &FockSpace, p: DeformationParam, form: GeneratorForm) -> Result<Generators> {
    let l0 = SectorOperator::diagonal(space, l0_value);
    let (lplus, lminus) = match form {
        GeneratorForm::Simplified => {
            let bd = |m| modified_boson(m, true, space, p);
            let b = |m| modified_boson(m, false, space, p);
            let up1 = bd(Mode::Plus).compose(&b(Mode::Zero))?.left_diag(space, |s| p.pow(0.5 - l0_value(s)));
            let up2 = bd(Mode::Zero).compose(&b(Mode::Minus))?.left_diag(space, |s| p.pow(l0_value(s) - 0.5));
            let dn1 = bd(Mode::Zero).compose(&b(Mode::Plus))?.left_diag(space, |s| p.pow(-l0_value(s) - 0.5));
            let dn2 = bd(Mode::Minus).compose(&b(Mode::Zero))?.left_diag(space, |s| p.pow(l0_value(s) + 0.5));
            (up1.add(&up2)?, dn1.add(&dn2)?)
        }
        GeneratorForm::Original => {
            let bd = |m| q_boson(m, true, space, p);
            let b = |m| q_boson(m, false, space, p);
            // q^{N_other - N0/2} sqrt(q^{N_i} + q^{-N_i})
            let dress = |other: Mode, own: Mode| {
                move |s: FockState| {
                    let n = f64::from(s.get(own));
                    p.pow(f64::from(s.get(other)) - 0.5 * f64::from(s.nzero))
                        * libm::sqrt(p.pow(n) + p.pow(-n))
                }
            };
            let up1 = bd(Mode::Plus).compose(&b(Mode::Zero))?.left_diag(space, dress(Mode::Minus, Mode::Plus));
            let up2 = bd(Mode::Zero).compose(&b(Mode::Minus))?.right_diag(space, dress(Mode::Plus, Mode::Minus));
            let dn1 = bd(Mode::Zero).compose(&b(Mode::Plus))?.right_diag(space, dress(Mode::Minus, Mode::Plus));
            let dn2 = bd(Mode::Minus).compose(&b(Mode::Zero))?.left_diag(space, dress(Mode::Plus, Mode::Minus));
            (up1.add(&up2)?, dn1.add(&dn2)?)
        }
    };
    Ok(Generators { l0, lplus, lminus })
}

/// Diagonal `f(L0)`.
pub fn l0_function<F: Fn(f64) -> f64>(space: &FockSpace, f: F) -> SectorOperator {
    SectorOperator::diagonal(space, |s| f(l0_value(s)))
}

/// Quadratic Casimir `L- L+ + [L0][L0+1]`.
pub fn casimir(space: &FockSpace, p: DeformationParam) -> Result<SectorOperator> {
    Ok(casimir_forms(space, p)?[0].clone())
}

/// The three printed forms of the Casimir, in order: `L- L+ + [L0][L0+1]`,
/// `L+ L- + [L0][L0-1]`, and `(L+ L- + L- L+ + [2][L0]^2) / 2`.
pub fn casimir_forms(space: &FockSpace, p: DeformationParam) -> Result<[SectorOperator; 3]> {
    let g = so3_generators(space, p, GeneratorForm::Simplified)?;
    let mp = g.lminus.compose(&g.lplus)?;
    let pm = g.lplus.compose(&g.lminus)?;
    let a = mp.add(&l0_function(space, |m| p.num(m) * p.num(m + 1.0)))?;
    let b = pm.add(&l0_function(space, |m| p.num(m) * p.num(m - 1.0)))?;
    let c = pm
        .add(&mp)?
        .add(&l0_function(space, |m| p.num(2.0) * p.num(m) * p.num(m)))?
        .scale(0.5);
    Ok([a, b, c])
}

/// `so_q(3)` scalars.
#[derive(Clone, Debug)]
pub struct Scalars {
    pub splus: SectorOperator,
    pub szero: SectorOperator,
    pub sminus: SectorOperator,
    pub stilde_plus: SectorOperator,
    pub stilde_minus: SectorOperator,
}

/// `S0 = (N + 3/2) / 2`.
pub fn s0_value(s: FockState) -> f64 {
    0.5 * (s.total() as f64 + 1.5)
}

pub fn scalar_ops(space: &FockSpace, p: DeformationParam) -> Result<Scalars> {
    let bd = |m| modified_boson(m, true, space, p);
    let b = |m| modified_boson(m, false, space, p);
    let b0d = bd(Mode::Zero);
    let b0 = b(Mode::Zero);
    let splus = SectorOperator::lin(
        1.0,
        &b0d.compose(&b0d)?.right_diag(space, |s| p.pow(2.0 * s0_value(s))),
        -1.0,
        &bd(Mode::Plus).compose(&bd(Mode::Minus))?.right_diag(space, |s| p.pow(-2.0 * s0_value(s))),
    )?;
    let sminus = SectorOperator::lin(
        1.0,
        &b0.compose(&b0)?.left_diag(space, |s| p.pow(2.0 * s0_value(s))),
        -1.0,
        &b(Mode::Plus).compose(&b(Mode::Minus))?.left_diag(space, |s| p.pow(-2.0 * s0_value(s))),
    )?;
    let szero = SectorOperator::diagonal(space, s0_value);
    let two = p.num(2.0);
    Ok(Scalars {
        stilde_plus: splus.scale(1.0 / two),
        stilde_minus: sminus.scale(1.0 / two),
        splus,
        szero,
        sminus,
    })
}

/// Constants of the vector operator `T†_{+1} = ω B+† q^{α N+ + β N0 + γ N- + δ}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VectorOpParams {
    pub omega: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl VectorOpParams {
    /// Requires `α + 2 = β = γ`.
    pub fn new(omega: f64, alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        let tol = 1e-12 * (1.0 + libm::fabs(beta));
        if libm::fabs(alpha + 2.0 - beta) > tol || libm::fabs(beta - gamma) > tol {
            return Err(Error::Domain("vector operator constants need alpha + 2 = beta = gamma"));
        }
        Ok(Self { omega, alpha, beta, gamma, delta })
    }

    /// General member of the admissible family, parametrized by `ω, β, δ`.
    pub fn family(omega: f64, beta: f64, delta: f64) -> Self {
        Self { omega, alpha: beta - 2.0, beta, gamma: beta, delta }
    }

    /// The values that turn the coupled rank-1 tensor into the angular
    /// momentum: `ω = 1/√[2]`, `β = 1`, `δ = -1/2`.
    pub fn fixed(p: DeformationParam) -> Self {
        Self::family(1.0 / libm::sqrt(p.num(2.0)), 1.0, -0.5)
    }
}

#[derive(Clone, Debug)]
pub struct VectorOps {
    /// `T†_m`, raising the total number by one.
    pub tdag: TensorOp,
    /// `T̃_m`, lowering the total number by one.
    pub ttilde: TensorOp,
}

/// The vector operators `T†_m` and their conjugates `T̃_m`, written out
/// component by component (the conjugates are not derived by transposition).
pub fn vector_ops(space: &FockSpace, p: DeformationParam, params: VectorOpParams) -> Result<VectorOps> {
    let VectorOpParams { omega, alpha, beta, gamma, delta } =
        VectorOpParams::new(params.omega, params.alpha, params.beta, params.gamma, params.delta)?;
    let bd = |m| modified_boson(m, true, space, p);
    let b = |m| modified_boson(m, false, space, p);
    let n = |s: FockState| s.total() as f64;
    let np = |s: FockState| f64::from(s.nplus);
    let sq2 = libm::sqrt(p.num(2.0));
    let qmi = p.q_minus_inv();
    // q^{-2N+ + βN + δ + c}
    let e = move |c: f64| move |s: FockState| p.pow(-2.0 * np(s) + beta * n(s) + delta + c);
    // q^{2N+ + (β-2)N + δ + c}
    let f = move |c: f64| move |s: FockState| p.pow(2.0 * np(s) + (beta - 2.0) * n(s) + delta + c);

    let t_plus = bd(Mode::Plus)
        .right_diag(space, |s| {
            p.pow(alpha * f64::from(s.nplus) + beta * f64::from(s.nzero) + gamma * f64::from(s.nminus) + delta)
        })
        .scale(omega);
    let t_zero = bd(Mode::Zero).right_diag(space, e(0.5)).scale(omega * sq2);
    let b0d2 = bd(Mode::Zero).compose(&bd(Mode::Zero))?;
    let t_minus = SectorOperator::lin(
        omega,
        &bd(Mode::Minus).right_diag(space, f(0.0)),
        -omega * qmi,
        &b(Mode::Plus).compose(&b0d2)?.right_diag(space, e(2.0)),
    )?;

    let b02 = b(Mode::Zero).compose(&b(Mode::Zero))?;
    let tt_plus = SectorOperator::lin(
        -omega,
        &b(Mode::Minus).left_diag(space, f(-1.0)),
        omega * qmi,
        &bd(Mode::Plus).compose(&b02)?.left_diag(space, e(1.0)),
    )?;
    let tt_zero = b(Mode::Zero).left_diag(space, e(0.5)).scale(omega * sq2);
    let tt_minus = b(Mode::Plus).left_diag(space, e(1.0)).scale(-omega);

    Ok(VectorOps {
        tdag: TensorOp::new(1, alloc::vec![t_minus, t_zero, t_plus])?,
        ttilde: TensorOp::new(1, alloc::vec![tt_minus, tt_zero, tt_plus])?,
    })
}

/// `A^L_M = [T† ⊗ T̃]^L_M`, coupled with base-inverted coefficients, for
/// the fixed vector-operator constants.
pub fn coupled_tensor(rank: u32, space: &FockSpace, p: DeformationParam) -> Result<TensorOp> {
    if rank > 2 {
        return Err(Error::Domain("coupled vector-operator tensors have rank 0, 1 or 2"));
    }
    let v = vector_ops(space, p, VectorOpParams::fixed(p))?;
    couple(&v.tdag, &v.ttilde, rank, true, p)
}

/// Rank-1 tensor built from the generators:
/// `J_{±1} = ∓ q^{-L0} L± / √[2]`, `J_0 = (q L+ L- - q^-1 L- L+) / [2]`.
pub fn j1_tensor(space: &FockSpace, p: DeformationParam) -> Result<TensorOp> {
    let g = so3_generators(space, p, GeneratorForm::Simplified)?;
    let sq2 = libm::sqrt(p.num(2.0));
    let qm = l0_function(space, |m| p.pow(-m));
    let jp = qm.compose(&g.lplus)?.scale(-1.0 / sq2);
    let jm = qm.compose(&g.lminus)?.scale(1.0 / sq2);
    let j0 = SectorOperator::lin(
        p.q() / p.num(2.0),
        &g.lplus.compose(&g.lminus)?,
        -1.0 / (p.q() * p.num(2.0)),
        &g.lminus.compose(&g.lplus)?,
    )?;
    TensorOp::new(1, alloc::vec![jm, j0, jp])
}

/// Second printed form of `J_0`: `(q [2 L0] + (q - q^-1) L- L+) / [2]`.
pub fn j1_zero_alternative(space: &FockSpace, p: DeformationParam) -> Result<SectorOperator> {
    let g = so3_generators(space, p, GeneratorForm::Simplified)?;
    let two = p.num(2.0);
    let diag = l0_function(space, |m| p.q() * p.num(2.0 * m) / two);
    diag.add(&g.lminus.compose(&g.lplus)?.scale(p.q_minus_inv() / two))
}

/// Quadrupole `Q^2_M = √([3][4]/[2]) A^2_M`.
pub fn quadrupole(space: &FockSpace, p: DeformationParam) -> Result<TensorOp> {
    let a2 = coupled_tensor(2, space, p)?;
    let s = libm::sqrt(p.num(3.0) * p.num(4.0) / p.num(2.0));
    Ok(a2.scaled(s))
}

/// `[X, Y]_{q^m} = X Y - q^m Y X`.
pub fn q_commutator(
    x: &SectorOperator,
    y: &SectorOperator,
    m_exponent: f64,
    p: DeformationParam,
) -> Result<SectorOperator> {
    let (xy, yx) = q_commutator_terms(x, y, m_exponent, p)?;
    xy.sub(&yx)
}

/// The two terms `X Y` and `q^m Y X` of a q-commutator.
pub fn q_commutator_terms(
    x: &SectorOperator,
    y: &SectorOperator,
    m_exponent: f64,
    p: DeformationParam,
) -> Result<(SectorOperator, SectorOperator)> {
    if x.nmax() != y.nmax() {
        return Err(Error::Shape("q-commutator of operators on different spaces"));
    }
    Ok((x.compose(y)?, y.compose(x)?.scale(p.pow(m_exponent))))
}

/// Convenience: the `(T†, T̃)` pair at the fixed constants.
pub fn fixed_vector_ops(space: &FockSpace, p: DeformationParam) -> Result<VectorOps> {
    vector_ops(space, p, VectorOpParams::fixed(p))
}
