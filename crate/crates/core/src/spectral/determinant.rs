//! Spectral determinants: entire functions of `λ` vanishing exactly on the spectrum.
//!
//! For an even potential the subdominant solution `y` at `+∞` is, at an eigenvalue,
//! either even (`y'(0) = 0`) or odd (`y(0) = 0`). The even determinant is `y'(0)`,
//! the odd one `y(0)`. Normalization is the WKB convention at the start point, so
//! only zeros and winding numbers are meaningful; magnitudes depend on the start point.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::integrate::{integrate_subdominant, subdominant_jet_at_origin, wkb_start};
use super::potential::PolynomialPotential;
use crate::{Error, Parity, Result};

/// `mantissa · exp(exponent)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeterminantValue {
    #[serde(with = "crate::serde_complex")]
    pub mantissa: Complex64,
    pub exponent: f64,
    pub parity: Parity,
}

impl DeterminantValue {
    /// Value rescaled to the reference exponent: `mantissa · exp(exponent - reference)`.
    pub fn relative_to(&self, reference: f64) -> Complex64 {
        self.mantissa * (self.exponent - reference).exp()
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == Complex64::new(0.0, 0.0)
    }

    /// `ln |value|`, `-inf` for an exact zero.
    pub fn ln_abs(&self) -> f64 {
        self.mantissa.norm().ln() + self.exponent
    }
}

/// One determinant evaluation with enough context to normalize it.
#[derive(Debug, Clone, Copy)]
pub struct Evaluation {
    pub value: DeterminantValue,
    /// `|(y(0), y'(0))|` on the same exponent as `value`.
    pub solution_norm: f64,
}

impl Evaluation {
    /// `|F| / |(y(0), y'(0))|`: scale-free residual, zero exactly at eigenvalues.
    pub fn relative_residual(&self) -> f64 {
        self.value.mantissa.norm() / self.solution_norm
    }
}

/// Determinant with its first two `λ`-derivatives, all on a common exponent.
#[derive(Debug, Clone, Copy)]
pub struct Jet {
    pub value: Complex64,
    pub first: Complex64,
    pub second: Complex64,
    pub solution_norm: f64,
    pub exponent: f64,
}

impl Jet {
    pub fn relative_residual(&self) -> f64 {
        self.value.norm() / self.solution_norm
    }

    /// `|∂F/∂λ| / |(y(0), y'(0))|`.
    pub fn relative_slope(&self) -> f64 {
        self.first.norm() / self.solution_norm
    }

    /// Estimated distance to the nearest other zero, `2 |F'/F''|`, valid near a simple zero.
    pub fn gap_estimate(&self) -> f64 {
        2.0 * self.first.norm() / self.second.norm()
    }
}

/// Determinant of one parity with a fixed integration start point.
///
/// Fixing the start point makes the determinant a holomorphic function of `λ`
/// over the region where the start point stays valid, which is what Newton
/// iterations, contour integrals and finite differences need.
#[derive(Debug, Clone)]
pub struct Determinant {
    pot: PolynomialPotential,
    parity: Parity,
    tol: f64,
    x_start: f64,
}

impl Determinant {
    /// Start point chosen for `|λ|` up to `lambda_bound`.
    pub fn new(pot: &PolynomialPotential, parity: Parity, tol: f64, lambda_bound: f64) -> Result<Self> {
        if !pot.is_even() {
            return Err(Error::InvalidInput(
                "parity-split determinants need an even potential".into(),
            ));
        }
        if !(tol > 0.0) {
            return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
        }
        let x_start = wkb_start(pot, Complex64::new(lambda_bound.abs(), 0.0));
        Ok(Self {
            pot: pot.clone(),
            parity,
            tol,
            x_start,
        })
    }

    /// Evaluator suited to `λ` near `center`, with margin for Newton steps.
    pub fn near(pot: &PolynomialPotential, parity: Parity, tol: f64, center: Complex64) -> Result<Self> {
        Self::new(pot, parity, tol, 1.5 * center.norm() + 2.0)
    }

    pub fn with_start(pot: &PolynomialPotential, parity: Parity, tol: f64, x_start: f64) -> Result<Self> {
        let mut me = Self::new(pot, parity, tol, 0.0)?;
        me.x_start = x_start;
        Ok(me)
    }

    pub fn potential(&self) -> &PolynomialPotential {
        &self.pot
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn x_start(&self) -> f64 {
        self.x_start
    }

    pub fn eval(&self, lambda: Complex64) -> Result<Evaluation> {
        let sol = integrate_subdominant(&self.pot, lambda, self.x_start, 0.0, self.tol)?;
        let mantissa = match self.parity {
            Parity::Even => sol.dy,
            Parity::Odd => sol.y,
        };
        Ok(Evaluation {
            value: DeterminantValue {
                mantissa,
                exponent: sol.log_scale,
                parity: self.parity,
            },
            solution_norm: sol.mantissa_norm(),
        })
    }

    /// Determinant and its `λ`-derivatives from the variational equations.
    pub fn jet(&self, lambda: Complex64) -> Result<Jet> {
        let (u, exponent) = subdominant_jet_at_origin(&self.pot, lambda, self.x_start, self.tol)?;
        let offset = match self.parity {
            Parity::Even => 1,
            Parity::Odd => 0,
        };
        Ok(Jet {
            value: u[offset],
            first: u[2 + offset],
            second: u[4 + offset],
            solution_norm: u[0].norm().hypot(u[1].norm()),
            exponent,
        })
    }

    /// Central finite-difference derivative with step `1e-6 (1 + |λ|)`, relative to the value's exponent.
    pub fn derivative_fd(&self, lambda: Complex64, at: &Evaluation) -> Result<Complex64> {
        let h = 1e-6 * (1.0 + lambda.norm());
        let plus = self.eval(lambda + h)?;
        let minus = self.eval(lambda - h)?;
        let reference = at.value.exponent;
        Ok((plus.value.relative_to(reference) - minus.value.relative_to(reference)) / (2.0 * h))
    }
}

/// Even determinant `y'(0)` or odd determinant `y(0)` of the subdominant solution.
pub fn spectral_determinant(
    pot: &PolynomialPotential,
    lambda: Complex64,
    parity: Parity,
    tol: f64,
) -> Result<DeterminantValue> {
    let det = Determinant::new(pot, parity, tol, lambda.norm())?;
    Ok(det.eval(lambda)?.value)
}

/// Overflow-safe `mantissa · exp(exponent)` for the two-sided Wronskian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WronskianValue {
    #[serde(with = "crate::serde_complex")]
    pub mantissa: Complex64,
    pub exponent: f64,
}

/// Wronskian at the origin of the solutions subdominant at `+∞` and at `-∞`.
///
/// Works for any monic even-degree potential; for even potentials it equals
/// `-2 · F_even · F_odd` with the same start point.
pub fn wronskian_determinant(pot: &PolynomialPotential, lambda: Complex64, tol: f64) -> Result<WronskianValue> {
    let mirrored = pot.reflected();
    let x_right = wkb_start(pot, lambda);
    let x_left = wkb_start(&mirrored, lambda);
    let x_start = x_right.max(x_left);
    let right = integrate_subdominant(pot, lambda, x_start, 0.0, tol)?;
    let left = integrate_subdominant(&mirrored, lambda, x_start, 0.0, tol)?;
    // y_-(x) = u(-x) where u is subdominant at +∞ for P(-x).
    let (yl, dyl) = (left.y, -left.dy);
    Ok(WronskianValue {
        mantissa: right.y * dyl - right.dy * yl,
        exponent: right.log_scale + left.log_scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn below_spectrum_both_determinants_nonzero() {
        let pot = PolynomialPotential::quartic(c(0.0, 0.0));
        for parity in [Parity::Even, Parity::Odd] {
            let det = Determinant::new(&pot, parity, 1e-12, 0.0).unwrap();
            let ev = det.eval(c(0.0, 0.0)).unwrap();
            assert!(ev.relative_residual() > 0.1, "{parity}: {}", ev.relative_residual());
        }
    }

    #[test]
    fn conjugation_symmetry() {
        let alpha = c(0.8, 1.3);
        let lambda = c(2.5, -0.7);
        let a = Determinant::new(&PolynomialPotential::quartic(alpha), Parity::Even, 1e-12, 4.0).unwrap();
        let b = Determinant::new(&PolynomialPotential::quartic(alpha.conj()), Parity::Even, 1e-12, 4.0).unwrap();
        let va = a.eval(lambda).unwrap().value;
        let vb = b.eval(lambda.conj()).unwrap().value;
        let r = va.exponent;
        assert!((va.relative_to(r).conj() - vb.relative_to(r)).norm() < 1e-10 * va.mantissa.norm());
    }

    #[test]
    fn wronskian_factorizes_for_even_potentials() {
        let pot = PolynomialPotential::quartic(c(1.0, 0.5));
        let lambda = c(3.0, 1.0);
        let w = wronskian_determinant(&pot, lambda, 1e-12).unwrap();
        let x0 = wkb_start(&pot, lambda);
        let e = Determinant::with_start(&pot, Parity::Even, 1e-12, x0).unwrap().eval(lambda).unwrap();
        let o = Determinant::with_start(&pot, Parity::Odd, 1e-12, x0).unwrap().eval(lambda).unwrap();
        let product = -2.0 * e.value.mantissa * o.value.mantissa;
        let exponent = e.value.exponent + o.value.exponent;
        let ratio = w.mantissa * (w.exponent - exponent).exp() / product;
        assert!((ratio - 1.0).norm() < 1e-9, "ratio {ratio}");
    }

    #[test]
    fn rejects_non_even_potential() {
        let pot = PolynomialPotential::new(4, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(Determinant::new(&pot, Parity::Even, 1e-12, 1.0).is_err());
        assert!(wronskian_determinant(&pot, c(1.0, 0.0), 1e-12).is_ok());
    }
}
