//! Rescaling `x ↦ t x` of the two-parameter family `-y'' + (β x⁴ + α x²) y = λ y`.
//!
//! Substituting `w(x) = y(t x)` turns `H(α, β) y = λ y` into
//! `H(t⁴ α, t⁶ β) w = t² λ w`, so every problem with `β ≠ 0` is equivalent to one
//! with `β = 1`. Fractional powers use the principal branch with the cut on `(-∞, 0]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::spectral::{eigenvalues_at, Eigenvalue, PolynomialPotential, SpectrumSettings};
use crate::{Error, Result};

/// `H(α, β)` together with the factor relating its eigenvalues to those of the problem it was rescaled from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoParameterPoint {
    #[serde(with = "crate::serde_complex")]
    pub alpha: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub beta: Complex64,
    /// Eigenvalues of this point are the original eigenvalues times this factor.
    #[serde(with = "crate::serde_complex")]
    pub lambda_multiplier: Complex64,
}

fn is_zero(z: Complex64) -> bool {
    z == Complex64::new(0.0, 0.0)
}

fn on_cut(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0
}

impl TwoParameterPoint {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        if is_zero(beta) {
            return Err(Error::InvalidInput("beta must be nonzero".into()));
        }
        Ok(Self {
            alpha,
            beta,
            lambda_multiplier: Complex64::new(1.0, 0.0),
        })
    }
}

/// `(α, β) ↦ (t⁴ α, t⁶ β)`, multiplying the eigenvalue factor by `t²`.
pub fn rescale_problem(point: TwoParameterPoint, t: Complex64) -> Result<TwoParameterPoint> {
    if is_zero(t) || !t.re.is_finite() || !t.im.is_finite() {
        return Err(Error::InvalidInput(format!("scale factor must be finite and nonzero, got {t}")));
    }
    let t2 = t * t;
    Ok(TwoParameterPoint {
        alpha: point.alpha * t2 * t2,
        beta: point.beta * t2 * t2 * t2,
        lambda_multiplier: point.lambda_multiplier * t2,
    })
}

/// `β ↦ (α, factor) = (β^{-2/3}, β^{1/3})`, so that `λ_n(1, β) = factor · λ_n(α, 1)`.
pub fn beta_to_alpha(beta: Complex64) -> Result<(Complex64, Complex64)> {
    if on_cut(beta) {
        return Err(Error::InvalidInput(format!(
            "beta = {beta} lies on the branch cut (-inf, 0]"
        )));
    }
    let log = beta.ln();
    Ok(((-2.0 / 3.0 * log).exp(), (log / 3.0).exp()))
}

/// Inverse of [`beta_to_alpha`]: `α ↦ β = α^{-3/2}`.
pub fn alpha_to_beta(alpha: Complex64) -> Result<Complex64> {
    if on_cut(alpha) {
        return Err(Error::InvalidInput(format!(
            "alpha = {alpha} lies on the branch cut (-inf, 0]"
        )));
    }
    Ok((-1.5 * alpha.ln()).exp())
}

/// Levels `0..=n_max` of `-y'' + (β x⁴ + x²) y = λ y` through the quartic family.
pub fn beta_form_eigenvalues(beta: Complex64, n_max: usize, settings: &SpectrumSettings) -> Result<Vec<Eigenvalue>> {
    let (alpha, factor) = beta_to_alpha(beta)?;
    let levels = eigenvalues_at(&PolynomialPotential::quartic(alpha), n_max, settings)?;
    Ok(levels
        .into_iter()
        .map(|e| Eigenvalue {
            value: e.value * factor,
            ..e
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rescale_examples() {
        let p = TwoParameterPoint::new(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(rescale_problem(p, c(1.0, 0.0)).unwrap(), p);
        let q = rescale_problem(p, c(2.0, 0.0)).unwrap();
        assert_eq!((q.alpha, q.beta, q.lambda_multiplier), (c(16.0, 0.0), c(64.0, 0.0), c(4.0, 0.0)));
        assert!(rescale_problem(p, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn rescale_group_property() {
        let p = TwoParameterPoint::new(c(0.3, -1.1), c(2.0, 0.7)).unwrap();
        let t = c(0.8, 0.45);
        let back = rescale_problem(rescale_problem(p, t).unwrap(), 1.0 / t).unwrap();
        for (a, b) in [(back.alpha, p.alpha), (back.beta, p.beta), (back.lambda_multiplier, p.lambda_multiplier)] {
            assert!((a - b).norm() < 1e-14 * (1.0 + b.norm()));
        }
    }

    #[test]
    fn beta_examples() {
        let (a, f) = beta_to_alpha(c(1.0, 0.0)).unwrap();
        assert!((a - 1.0).norm() < 1e-15 && (f - 1.0).norm() < 1e-15);
        let (a, f) = beta_to_alpha(c(8.0, 0.0)).unwrap();
        assert!((a - 0.25).norm() < 1e-15 && (f - 2.0).norm() < 1e-15);
        assert!(beta_to_alpha(c(0.0, 0.0)).is_err());
        assert!(beta_to_alpha(c(-2.0, 0.0)).is_err());
    }

    #[test]
    fn beta_alpha_round_trip() {
        for beta in [c(0.5, 0.0), c(2.0, 3.0), c(-1.0, 0.01), c(-4.0, -0.5)] {
            let (alpha, _) = beta_to_alpha(beta).unwrap();
            let back = alpha_to_beta(alpha).unwrap();
            assert!((back - beta).norm() < 1e-13 * beta.norm(), "{beta} -> {back}");
        }
    }
}
