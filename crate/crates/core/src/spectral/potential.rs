use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Monic polynomial potential `P(z) = z^d + a_{d-1} z^{d-1} + ... + a_1 z`.
///
/// The constant term is absent: it would only shift the spectral parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialPotential {
    /// `coeffs[k]` multiplies `z^k`; `coeffs[0] == 0` and `coeffs[d] == 1`.
    #[serde(with = "crate::serde_complex::vec")]
    coeffs: Vec<Complex64>,
}

impl PolynomialPotential {
    /// Builds `z^d + Σ lower[k-1] z^k` for `k = 1..d`.
    pub fn new(degree: usize, lower: &[Complex64]) -> Result<Self> {
        if degree < 2 || !degree.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "potential degree must be even and at least 2, got {degree}"
            )));
        }
        if lower.len() != degree - 1 {
            return Err(Error::InvalidInput(format!(
                "degree {degree} needs {} coefficients a_1..a_{}, got {}",
                degree - 1,
                degree - 1,
                lower.len()
            )));
        }
        if lower.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite potential coefficient".into()));
        }
        let mut coeffs = Vec::with_capacity(degree + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend_from_slice(lower);
        coeffs.push(Complex64::new(1.0, 0.0));
        Ok(Self { coeffs })
    }

    /// The quartic family `z^4 + α z^2`.
    pub fn quartic(alpha: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self {
            coeffs: vec![zero, zero, alpha, zero, Complex64::new(1.0, 0.0)],
        }
    }

    /// The harmonic oscillator `z^2`.
    pub fn harmonic() -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Number of Stokes sectors, `d + 2`.
    pub fn sector_count(&self) -> usize {
        self.degree() + 2
    }

    /// Coefficients `a_1..a_{d-1}`.
    pub fn lower_coefficients(&self) -> &[Complex64] {
        &self.coeffs[1..self.degree()]
    }

    /// `Some(α)` when this is `z^4 + α z^2`.
    pub fn quartic_alpha(&self) -> Option<Complex64> {
        if self.degree() == 4 && self.coeffs[1] == Complex64::new(0.0, 0.0) && self.coeffs[3] == Complex64::new(0.0, 0.0) {
            Some(self.coeffs[2])
        } else {
            None
        }
    }

    /// True when only even powers appear.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|c| *c == Complex64::new(0.0, 0.0))
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    pub fn conj(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    /// Same degree, real parts of the coefficients.
    pub fn real_part(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| Complex64::new(c.re, 0.0)).collect(),
        }
    }

    /// Reflected potential `P(-z)`.
    pub fn reflected(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { *c })
                .collect(),
        }
    }

    /// Coefficients of the Taylor expansion of `P(z) - λ` about `z0`, lowest order first.
    pub fn shifted_coefficients(&self, z0: Complex64, lambda: Complex64) -> Vec<Complex64> {
        // Repeated synthetic division gives the expansion about z0.
        let mut work = self.coeffs.clone();
        let d = self.degree();
        let mut out = vec![Complex64::new(0.0, 0.0); d + 1];
        for slot in out.iter_mut() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in (0..work.len()).rev() {
                let c = work[k];
                work[k] = acc;
                acc = acc * z0 + c;
            }
            *slot = acc;
            work.pop();
        }
        out[0] -= lambda;
        out
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn eval_real(&self, x: f64) -> Complex64 {
        self.eval(Complex64::new(x, 0.0))
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, c)| acc * z + c * k as f64)
    }

    /// Scale at which the leading term dominates: `max_k |a_k|^{1/(d-k)}`, at least 1.
    pub fn coefficient_scale(&self) -> f64 {
        let d = self.degree();
        self.coeffs[1..d]
            .iter()
            .enumerate()
            .map(|(i, c)| c.norm().powf(1.0 / (d - (i + 1)) as f64))
            .fold(1.0, f64::max)
    }

    /// Lower bound for the real part of every eigenvalue of a real potential:
    /// the minimum of `P` on the real line.
    pub fn real_minimum(&self) -> f64 {
        let scale = 2.0 * self.coefficient_scale();
        let n = 4000;
        (0..=n)
            .map(|i| -scale + 2.0 * scale * i as f64 / n as f64)
            .map(|x| self.eval_real(x).re)
            .fold(f64::INFINITY, f64::min)
            .min(0.0)
            - 1e-3
    }
}
