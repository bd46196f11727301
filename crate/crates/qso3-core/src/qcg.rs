//! Clebsch–Gordan coefficients of `su_q(2)` / `so_q(3)`.
//!
//! The closed form is the q-Racah sum matched to the coproduct
//! `Δ(J±) = J± ⊗ q^{J0} + q^{-J0} ⊗ J±` with the Condon–Shortley phase
//! (`⟨j1 j1, j2 J-j1 | J J⟩ > 0`). With this convention the coupled vector
//! operators built in [`crate::fockrep`] reproduce the angular-momentum
//! tensor exactly; the mirrored convention (`q → q^-1`) does not.
//!
//! [`coupling`] rebuilds the same numbers from the coproduct directly and is
//! used as the independent check of the closed form.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::qnum::{q_factorial, DeformationParam};

/// Full index set of one coefficient `_qC^{J M}_{j1 m1, j2 m2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CgKey {
    pub j1: HalfInt,
    pub m1: HalfInt,
    pub j2: HalfInt,
    pub m2: HalfInt,
    pub j: HalfInt,
    pub m: HalfInt,
    /// Evaluate at `q^-1` instead of `q`.
    pub base_inverted: bool,
}

fn valid_pair(j: HalfInt, m: HalfInt) -> bool {
    j.twice() >= 0 && m.abs() <= j && (j - m).is_integer()
}

impl CgKey {
    pub fn new(
        j1: HalfInt,
        m1: HalfInt,
        j2: HalfInt,
        m2: HalfInt,
        j: HalfInt,
        m: HalfInt,
        base_inverted: bool,
    ) -> Result<Self> {
        if !(valid_pair(j1, m1) && valid_pair(j2, m2) && valid_pair(j, m)) {
            return Err(Error::Domain("malformed Clebsch-Gordan key"));
        }
        Ok(Self { j1, m1, j2, m2, j, m, base_inverted })
    }

    /// Integer-spin shorthand.
    pub fn ints(j1: i32, m1: i32, j2: i32, m2: i32, j: i32, m: i32) -> Result<Self> {
        Self::new(j1.into(), m1.into(), j2.into(), m2.into(), j.into(), m.into(), false)
    }

    pub fn inverted(mut self) -> Self {
        self.base_inverted = !self.base_inverted;
        self
    }
}

/// `|j1 - j2| <= j <= j1 + j2` with `j1 + j2 + j` integral.
pub fn triangle(j1: HalfInt, j2: HalfInt, j: HalfInt) -> bool {
    let s = j1 + j2 + j;
    s.is_integer() && j >= (j1 - j2).abs() && j <= j1 + j2
}

fn fact(n: i32, p: DeformationParam) -> f64 {
    // callers guarantee n >= 0
    q_factorial(i64::from(n), p).unwrap_or(f64::NAN)
}

/// The q-Clebsch–Gordan coefficient.
///
/// Zero when `m != m1 + m2` or the triangle rule fails.
pub fn qcg(key: &CgKey, p: DeformationParam) -> f64 {
    let CgKey { j1, m1, j2, m2, j, m, base_inverted } = *key;
    if m1 + m2 != m || !triangle(j1, j2, j) {
        return 0.0;
    }
    let p = if base_inverted { p.inverted() } else { p };
    // all of these are integers once the key is valid
    let half = |h: HalfInt| h.twice() / 2;
    let a = half(j1 + j2 - j);
    let b = half(j1 - j2 + j);
    let c = half(j2 - j1 + j);
    let d = half(j1 + j2 + j) + 1;

    let delta = libm::sqrt(fact(a, p) * fact(b, p) * fact(c, p) / fact(d, p));
    let phase_exp = 0.5 * f64::from(a) * f64::from(d)
        + (j1.to_f64() * m2.to_f64() - j2.to_f64() * m1.to_f64());
    let radicand = fact(half(j1 + m1), p)
        * fact(half(j1 - m1), p)
        * fact(half(j2 + m2), p)
        * fact(half(j2 - m2), p)
        * fact(half(j + m), p)
        * fact(half(j - m), p)
        * p.num(f64::from(j.twice() + 1));

    let e1 = half(j1 - m1);
    let e2 = half(j2 + m2);
    let e3 = half(j - j2 + m1);
    let e4 = half(j - j1 - m2);
    let z_lo = 0.max(-e3).max(-e4);
    let z_hi = a.min(e1).min(e2);
    let mut sum = 0.0;
    for z in z_lo..=z_hi {
        let sign = if z % 2 == 0 { 1.0 } else { -1.0 };
        let den = fact(z, p)
            * fact(a - z, p)
            * fact(e1 - z, p)
            * fact(e2 - z, p)
            * fact(e3 + z, p)
            * fact(e4 + z, p);
        sum += sign * p.pow(-f64::from(z * d)) / den;
    }
    delta * p.pow(phase_exp) * libm::sqrt(radicand) * sum
}

/// One coupling entry `(m1, m2, coefficient)`.
pub type CgEntry = (HalfInt, HalfInt, f64);

/// All nonzero coefficients coupling `j1 ⊗ j2` into `|J M⟩`, ordered by
/// descending `m1`. Empty when the triangle rule fails.
pub fn qcg_column(
    j1: HalfInt,
    j2: HalfInt,
    j: HalfInt,
    m: HalfInt,
    base_inverted: bool,
    p: DeformationParam,
) -> Result<Vec<CgEntry>> {
    if !(valid_pair(j, m) && j1.twice() >= 0 && j2.twice() >= 0) {
        return Err(Error::Domain("malformed Clebsch-Gordan column"));
    }
    if !triangle(j1, j2, j) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for m1 in j1.projections() {
        let m2 = m - m1;
        if !valid_pair(j2, m2) {
            continue;
        }
        let key = CgKey { j1, m1, j2, m2, j, m, base_inverted };
        let c = qcg(&key, p);
        if c != 0.0 {
            out.push((m1, m2, c));
        }
    }
    Ok(out)
}

pub mod coupling {
    //! Coupled multiplets built from the coproduct: the highest-weight vector
    //! is the kernel of `Δ(J+)` inside the `M = J` subspace, the rest of the
    //! multiplet follows by applying `Δ(J-)`.

    use alloc::vec;
    use alloc::vec::Vec;

    use super::{triangle, CgEntry};
    use crate::halfint::HalfInt;
    use crate::qnum::DeformationParam;

    fn ladder(j: f64, m: f64, up: bool, p: DeformationParam) -> f64 {
        if up {
            libm::sqrt(p.num(j - m) * p.num(j + m + 1.0))
        } else {
            libm::sqrt(p.num(j + m) * p.num(j - m + 1.0))
        }
    }

    /// Every `|J M⟩` of the coupled multiplet, `M = J` first. Each entry lists
    /// the product-basis components `(m1, m2, c)` with `c != 0`.
    pub fn coupled_multiplet(
        j1: HalfInt,
        j2: HalfInt,
        j: HalfInt,
        p: DeformationParam,
    ) -> Vec<Vec<CgEntry>> {
        if !triangle(j1, j2, j) {
            return Vec::new();
        }
        let m1s: Vec<HalfInt> = j1.projections().collect();
        let m2s: Vec<HalfInt> = j2.projections().collect();
        let n2 = m2s.len();
        let idx = |a: usize, b: usize| a * n2 + b;
        let pos1 = |m: HalfInt| ((j1 - m).twice() / 2) as usize;
        let pos2 = |m: HalfInt| ((j2 - m).twice() / 2) as usize;

        // highest weight: two-term recursion from m1 = j1 downward
        let mut v = vec![0.0; m1s.len() * n2];
        let jf = j.to_f64();
        let (j1f, j2f) = (j1.to_f64(), j2.to_f64());
        let mut a = j1;
        v[idx(pos1(a), pos2(j - a))] = 1.0;
        while a - HalfInt::from_int(1) >= -j1 && (j - a + HalfInt::from_int(1)) <= j2 {
            let af = a.to_f64();
            let up2 = ladder(j2f, jf - af, true, p);
            let up1 = ladder(j1f, af - 1.0, true, p);
            let prev = v[idx(pos1(a), pos2(j - a))];
            let next = -prev * p.pow(-af) * up2 / (p.pow(jf + 1.0 - af) * up1);
            a = a - HalfInt::from_int(1);
            v[idx(pos1(a), pos2(j - a))] = next;
        }
        normalize(&mut v);

        let mut out = Vec::new();
        let mut mm = j;
        loop {
            out.push(collect(&v, &m1s, &m2s));
            if mm <= -j {
                break;
            }
            // Δ(J-) = J- ⊗ q^{J0} + q^{-J0} ⊗ J-
            let mut w = vec![0.0; v.len()];
            for (ia, &ma) in m1s.iter().enumerate() {
                for (ib, &mb) in m2s.iter().enumerate() {
                    let c = v[idx(ia, ib)];
                    if c == 0.0 {
                        continue;
                    }
                    let (maf, mbf) = (ma.to_f64(), mb.to_f64());
                    if ia + 1 < m1s.len() {
                        w[idx(ia + 1, ib)] += c * ladder(j1f, maf, false, p) * p.pow(mbf);
                    }
                    if ib + 1 < n2 {
                        w[idx(ia, ib + 1)] += c * p.pow(-maf) * ladder(j2f, mbf, false, p);
                    }
                }
            }
            let scale = ladder(jf, mm.to_f64(), false, p);
            w.iter_mut().for_each(|x| *x /= scale);
            v = w;
            mm = mm - HalfInt::from_int(1);
        }
        out
    }

    fn normalize(v: &mut [f64]) {
        let n = libm::sqrt(v.iter().map(|x| x * x).sum::<f64>());
        v.iter_mut().for_each(|x| *x /= n);
    }

    fn collect(v: &[f64], m1s: &[HalfInt], m2s: &[HalfInt]) -> Vec<CgEntry> {
        let mut out = Vec::new();
        for (ia, &ma) in m1s.iter().enumerate() {
            for (ib, &mb) in m2s.iter().enumerate() {
                let c = v[ia * m2s.len() + ib];
                if c != 0.0 {
                    out.push((ma, mb, c));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn h(n: i32) -> HalfInt {
        HalfInt::from_int(n)
    }

    fn p(tau: f64) -> DeformationParam {
        DeformationParam::new(tau).unwrap()
    }

    #[test]
    fn stretched_is_one() {
        for tau in [-0.3, 0.0, 0.4] {
            let k = CgKey::ints(1, 1, 1, 1, 2, 2).unwrap();
            assert_relative_eq!(qcg(&k, p(tau)), 1.0, max_relative = 1e-14);
            assert_relative_eq!(qcg(&k.inverted(), p(tau)), 1.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn selection_rules() {
        let k = CgKey::ints(1, 0, 1, 1, 2, 2).unwrap();
        assert_eq!(qcg(&k, p(0.2)), 0.0);
        let k = CgKey::ints(1, 1, 1, 0, 3, 1).unwrap();
        assert_eq!(qcg(&k, p(0.2)), 0.0);
    }

    #[test]
    fn classical_singlet() {
        let k = CgKey::ints(1, 1, 1, -1, 0, 0).unwrap();
        assert_relative_eq!(qcg(&k, p(0.0)), 1.0 / libm::sqrt(3.0), max_relative = 1e-14);
        let col = qcg_column(h(1), h(1), h(0), h(0), false, p(0.0)).unwrap();
        assert_eq!(col.len(), 3);
        for (_, _, c) in &col {
            assert_relative_eq!(libm::fabs(*c), 1.0 / libm::sqrt(3.0), max_relative = 1e-14);
        }
    }

    #[test]
    fn column_examples() {
        let col = qcg_column(h(1), h(1), h(2), h(2), false, p(0.3)).unwrap();
        assert_eq!(col.len(), 1);
        assert_eq!((col[0].0, col[0].1), (h(1), h(1)));
        assert_relative_eq!(col[0].2, 1.0, max_relative = 1e-14);
        assert!(qcg_column(h(1), h(1), h(3), h(0), false, p(0.3)).unwrap().is_empty());
        for tau in [-0.5, 0.2, 0.5] {
            let col = qcg_column(h(2), h(3), h(3), h(1), true, p(tau)).unwrap();
            let norm: f64 = col.iter().map(|e| e.2 * e.2).sum();
            assert_relative_eq!(norm, 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn malformed_keys_rejected() {
        assert!(CgKey::ints(1, 2, 1, 0, 1, 2).is_err());
        assert!(CgKey::new(h(1), HalfInt::from_twice(1), h(1), h(0), h(1), h(0), false).is_err());
        assert!(CgKey::ints(-1, 0, 1, 0, 1, 0).is_err());
    }

    #[test]
    fn coupling_matches_closed_form() {
        for tau in [-0.3, 0.0, 0.25] {
            for (t1, t2) in [(2, 2), (4, 2), (3, 2), (4, 4), (1, 1), (6, 4)] {
                let (j1, j2) = (HalfInt::from_twice(t1), HalfInt::from_twice(t2));
                let mut jj = (j1 - j2).abs();
                while jj <= j1 + j2 {
                    let multiplet = coupling::coupled_multiplet(j1, j2, jj, p(tau));
                    assert_eq!(multiplet.len() as i32, jj.twice() + 1);
                    for (k, entries) in multiplet.iter().enumerate() {
                        let m = jj - HalfInt::from_int(k as i32);
                        for &(m1, m2, c) in entries {
                            let key = CgKey::new(j1, m1, j2, m2, jj, m, false).unwrap();
                            let closed = qcg(&key, p(tau));
                            assert!((closed - c).abs() < 1e-12, "{t1} {t2} {jj} {m}: {closed} vs {c}");
                        }
                    }
                    jj = jj + HalfInt::from_int(1);
                }
            }
        }
    }
}
