//! q-numbers and the q-factorial family.
//!
//! Every bracket here is `[x] = (q^x - q^-x) / (q - q^-1)` with `q = e^tau`,
//! evaluated as `sinh(tau x) / sinh(tau)`. A bracket in base `q^s` is the
//! same expression with `tau` replaced by `s tau`.

use crate::error::{Error, Result};

/// Below this `|tau|` the classical limit is returned verbatim.
pub const CLASSICAL_EPS: f64 = 1e-12;

/// Real deformation `tau`, with `q = e^tau`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeformationParam {
    tau: f64,
}

impl DeformationParam {
    pub fn new(tau: f64) -> Result<Self> {
        if !tau.is_finite() {
            return Err(Error::Domain("deformation tau must be finite"));
        }
        Ok(Self { tau })
    }

    /// The undeformed algebra, `q = 1`.
    pub const fn classical() -> Self {
        Self { tau: 0.0 }
    }

    #[inline]
    pub fn tau(&self) -> f64 {
        self.tau
    }

    #[inline]
    pub fn q(&self) -> f64 {
        libm::exp(self.tau)
    }

    /// `q^x`.
    #[inline]
    pub fn pow(&self, x: f64) -> f64 {
        libm::exp(self.tau * x)
    }

    /// `q - q^-1`.
    #[inline]
    pub fn q_minus_inv(&self) -> f64 {
        2.0 * libm::sinh(self.tau)
    }

    /// The parameter for base `q^s`.
    #[inline]
    pub fn scaled(&self, s: f64) -> Self {
        Self { tau: self.tau * s }
    }

    /// The parameter for base `q^-1`.
    #[inline]
    pub fn inverted(&self) -> Self {
        Self { tau: -self.tau }
    }

    pub fn is_classical(&self) -> bool {
        libm::fabs(self.tau) < CLASSICAL_EPS
    }

    /// `[x]`.
    #[inline]
    pub fn num(&self, x: f64) -> f64 {
        q_number(x, *self)
    }
}

impl Default for DeformationParam {
    fn default() -> Self {
        Self::classical()
    }
}

/// `[x] = sinh(tau x) / sinh(tau)`, and `x` itself in the classical limit.
pub fn q_number(x: f64, p: DeformationParam) -> f64 {
    if p.is_classical() {
        return x;
    }
    libm::sinh(p.tau * x) / libm::sinh(p.tau)
}

/// `[x]` in base `q^s`.
pub fn q_number_scaled(x: f64, s: f64, p: DeformationParam) -> f64 {
    q_number(x, p.scaled(s))
}

/// `[n]! = [n][n-1]...[1]`, with `[0]! = 1`.
pub fn q_factorial(n: i64, p: DeformationParam) -> Result<f64> {
    if n < 0 {
        return Err(Error::Domain("q-factorial of a negative integer"));
    }
    Ok((1..=n).fold(1.0, |acc, k| acc * q_number(k as f64, p)))
}

/// `[n]!! = [n][n-2]...`, ending at `[2]` or `[1]`; `[0]!! = [-1]!! = 1`.
pub fn q_double_factorial(n: i64, p: DeformationParam) -> Result<f64> {
    if n < -1 {
        return Err(Error::Domain("q-double-factorial below -1"));
    }
    let start = if n % 2 == 0 { 2 } else { 1 };
    Ok((start..=n)
        .step_by(2)
        .fold(1.0, |acc, k| acc * q_number(k as f64, p)))
}

/// Gaussian binomial `[k]! / ([t]! [k-t]!)` with every bracket in base `q^s`.
pub fn q_binomial(k: i64, t: i64, s: f64, p: DeformationParam) -> Result<f64> {
    if t < 0 || k < 0 || t > k {
        return Err(Error::Domain("q-binomial requires 0 <= t <= k"));
    }
    let base = p.scaled(s);
    // product form keeps the magnitudes small
    let t = t.min(k - t);
    Ok((1..=t).fold(1.0, |acc, i| {
        acc * q_number((k - t + i) as f64, base) / q_number(i as f64, base)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(tau: f64) -> DeformationParam {
        DeformationParam::new(tau).unwrap()
    }

    // Reference values below come from a 30-digit evaluation of
    // sinh(tau x)/sinh(tau) done outside this crate.

    #[test]
    fn q_number_examples() {
        assert_eq!(q_number(0.0, p(0.7)), 0.0);
        assert_eq!(q_number(5.0, p(0.0)), 5.0);
        assert_relative_eq!(
            q_number(3.0, p(0.2)),
            3.162_144_743_676_909_6,
            max_relative = 1e-14
        );
    }

    #[test]
    fn scaled_examples() {
        assert_eq!(q_number_scaled(2.0, 2.0, p(0.0)), 2.0);
        assert_relative_eq!(q_number_scaled(1.0, 2.0, p(0.37)), 1.0, max_relative = 1e-15);
        assert_relative_eq!(
            q_number_scaled(2.0, 2.0, p(0.1)),
            2.040_133_511_238_151_7,
            max_relative = 1e-14
        );
    }

    #[test]
    fn factorial_examples() {
        assert_eq!(q_factorial(0, p(0.3)).unwrap(), 1.0);
        assert_eq!(q_factorial(3, p(0.0)).unwrap(), 6.0);
        assert_relative_eq!(
            q_factorial(3, p(0.2)).unwrap(),
            6.451_197_458_960_838_8,
            max_relative = 1e-14
        );
        assert!(q_factorial(-1, p(0.1)).is_err());
    }

    #[test]
    fn double_factorial_examples() {
        assert_eq!(q_double_factorial(0, p(0.2)).unwrap(), 1.0);
        assert_eq!(q_double_factorial(-1, p(0.2)).unwrap(), 1.0);
        assert_eq!(q_double_factorial(5, p(0.0)).unwrap(), 15.0);
        assert_relative_eq!(
            q_double_factorial(4, p(0.2)).unwrap(),
            8.999_159_379_963_508_4,
            max_relative = 1e-14
        );
        assert!(q_double_factorial(-2, p(0.2)).is_err());
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(q_binomial(3, 0, 2.0, p(0.4)).unwrap(), 1.0);
        assert_relative_eq!(q_binomial(3, 1, 2.0, p(0.0)).unwrap(), 3.0, max_relative = 1e-15);
        let tau = p(0.1);
        let ratio = q_double_factorial(4, tau).unwrap()
            / (q_double_factorial(2, tau).unwrap() * q_double_factorial(2, tau).unwrap());
        assert_relative_eq!(q_binomial(2, 1, 2.0, tau).unwrap(), ratio, max_relative = 1e-14);
        assert!(q_binomial(2, 3, 1.0, tau).is_err());
        assert!(q_binomial(2, -1, 1.0, tau).is_err());
    }

    #[test]
    fn double_factorial_ratio_is_base_q2_binomial() {
        for tau in [-0.4, 0.15, 0.5] {
            let pp = p(tau);
            for k in 0..8 {
                for t in 0..=k {
                    let lhs = q_binomial(k, t, 2.0, pp).unwrap();
                    let rhs = q_double_factorial(2 * k, pp).unwrap()
                        / (q_double_factorial(2 * t, pp).unwrap()
                            * q_double_factorial(2 * k - 2 * t, pp).unwrap());
                    assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn rejects_non_finite_tau() {
        assert!(DeformationParam::new(f64::NAN).is_err());
        assert!(DeformationParam::new(f64::INFINITY).is_err());
    }
}
