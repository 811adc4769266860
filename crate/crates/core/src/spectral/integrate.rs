//! Subdominant solutions of `-y'' + P(z) y = λ y` and integration along rays.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dop853::Dop853;
use super::potential::PolynomialPotential;
use crate::{Error, Result};

/// Default relative tolerance of the integrator.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Action `∫ Re sqrt(P - λ) dx` accumulated beyond the dominance radius before integration starts.
const START_ACTION: f64 = 20.0;

/// Largest admissible `|P'| / |P - λ|^{3/2}` at the start point.
const WKB_INDICATOR_MAX: f64 = 0.1;

/// A solution of the ODE at one point, stored overflow-safe: the true pair is
/// `(y, dy) · exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledSolution {
    #[serde(with = "crate::serde_complex")]
    pub x: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub y: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub dy: Complex64,
    pub log_scale: f64,
}

impl ScaledSolution {
    /// Unscaled `(y, dy)`; may overflow for large `log_scale`.
    pub fn unscaled(&self) -> (Complex64, Complex64) {
        let f = self.log_scale.exp();
        (self.y * f, self.dy * f)
    }

    pub fn mantissa_norm(&self) -> f64 {
        self.y.norm().hypot(self.dy.norm())
    }
}

/// Index `j` of the Stokes sector `|arg z - 2πj/q| < π/q`, `q = d + 2`, containing the direction.
pub fn stokes_sector_of(direction: f64, degree: usize) -> Result<usize> {
    if degree == 0 || !degree.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!("degree must be even and positive, got {degree}")));
    }
    if !direction.is_finite() {
        return Err(Error::InvalidInput("direction must be finite".into()));
    }
    let q = (degree + 2) as f64;
    let width = 2.0 * PI / q;
    let theta = direction.rem_euclid(2.0 * PI);
    let pos = theta / width;
    let nearest = pos.round();
    let offset = (pos - nearest).abs();
    // A direction within rounding of a half-integer multiple of the width is a boundary ray.
    if (offset - 0.5).abs() < 1e-12 {
        let left = (pos.floor() as usize) % q as usize;
        return Err(Error::SectorBoundary {
            angle: direction,
            left,
            right: (left + 1) % q as usize,
        });
    }
    Ok((nearest as usize) % q as usize)
}

/// `|P'(x)| / |P(x) - λ|^{3/2}`; small values mean the WKB approximation is accurate.
pub fn wkb_indicator(pot: &PolynomialPotential, lambda: Complex64, x: f64) -> f64 {
    let q = pot.eval_real(x) - lambda;
    pot.derivative(Complex64::new(x, 0.0)).norm() / q.norm().powf(1.5)
}

/// Radius beyond which the leading term of `P - λ` dominates.
pub fn dominance_radius(pot: &PolynomialPotential, lambda_modulus: f64) -> f64 {
    let d = pot.degree() as f64;
    2.0 * pot.coefficient_scale().max(lambda_modulus.powf(1.0 / d)).max(1.0)
}

/// Start point for the inward integration on the positive real axis.
///
/// Starting from the dominance radius, march outwards until the WKB action
/// accumulated beyond it reaches `START_ACTION` and the WKB indicator is small.
/// Any admixture of the dominant solution in the initial data is then damped by
/// at least `exp(-2 START_ACTION)` by the time the integration reaches the origin.
pub fn wkb_start(pot: &PolynomialPotential, lambda: Complex64) -> f64 {
    let x_min = dominance_radius(pot, lambda.norm());
    let dx = x_min / 64.0;
    let mut x = x_min;
    let mut action = 0.0;
    let limit = 100.0 * x_min;
    while x < limit {
        if action >= START_ACTION && wkb_indicator(pot, lambda, x) <= 0.5 * WKB_INDICATOR_MAX {
            break;
        }
        let mid = x + 0.5 * dx;
        action += (pot.eval_real(mid) - lambda).sqrt().re.max(0.0) * dx;
        x += dx;
    }
    x
}

/// WKB data `y = (P-λ)^{-1/4}`, `y' = -(P-λ)^{1/4} - P'/4 (P-λ)^{-5/4}` at `x`,
/// together with their first and second `λ`-derivatives.
fn wkb_data(pot: &PolynomialPotential, lambda: Complex64, x: f64) -> Result<[Complex64; 6]> {
    let s = pot.eval_real(x) - lambda;
    let indicator = wkb_indicator(pot, lambda, x);
    if !(indicator <= WKB_INDICATOR_MAX) || s.sqrt().re <= 0.0 {
        return Err(Error::WkbInvalid { x, indicator });
    }
    let dp = pot.derivative(Complex64::new(x, 0.0));
    let p = |e: f64| s.powf(e);
    Ok([
        p(-0.25),
        -p(0.25) - dp / 4.0 * p(-1.25),
        p(-1.25) / 4.0,
        p(-0.75) / 4.0 - dp * 5.0 / 16.0 * p(-2.25),
        p(-2.25) * 5.0 / 16.0,
        p(-1.75) * 3.0 / 16.0 - dp * 45.0 / 64.0 * p(-3.25),
    ])
}

fn initial_step(pot: &PolynomialPotential, lambda: Complex64, x: f64) -> f64 {
    0.05 / (1.0 + (pot.eval_real(x) - lambda).norm().sqrt())
}

/// Integrator for `[y, y']` along the ray `z = s e^{iθ}`.
pub(crate) fn ray_integrator(
    pot: &PolynomialPotential,
    lambda: Complex64,
    angle: f64,
    s0: f64,
    u0: [Complex64; 2],
    tol: f64,
) -> Dop853<impl FnMut(f64, &[Complex64; 2]) -> [Complex64; 2] + '_, 2> {
    let dir = Complex64::from_polar(1.0, angle);
    let rhs = move |s: f64, u: &[Complex64; 2]| {
        let q = pot.eval(dir * s) - lambda;
        [dir * u[1], dir * q * u[0]]
    };
    let h0 = 0.05 / (1.0 + (pot.eval(dir * s0) - lambda).norm().sqrt());
    Dop853::new(rhs, s0, u0, tol, h0)
}

/// Solution subdominant as `x → +∞`, WKB-normalized at `x_start` and integrated
/// along the real axis to `x_end`.
pub fn integrate_subdominant(
    pot: &PolynomialPotential,
    lambda: Complex64,
    x_start: f64,
    x_end: f64,
    tol: f64,
) -> Result<ScaledSolution> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    if !(x_start > 0.0) || !(x_end >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "need x_start > 0 and x_end >= 0, got {x_start}, {x_end}"
        )));
    }
    let data = wkb_data(pot, lambda, x_start)?;
    let mut ode = ray_integrator(pot, lambda, 0.0, x_start, [data[0], data[1]], tol);
    ode.advance_to(x_end)?;
    let [y, dy] = *ode.state();
    Ok(ScaledSolution {
        x: Complex64::new(x_end, 0.0),
        y,
        dy,
        log_scale: ode.log_scale(),
    })
}

/// Values at the origin of the subdominant solution and of its first two `λ`-derivatives,
/// `[y, y', ∂y, ∂y', ∂²y, ∂²y']`, all carrying the common factor `exp(log_scale)`.
pub(crate) fn subdominant_jet_at_origin(
    pot: &PolynomialPotential,
    lambda: Complex64,
    x_start: f64,
    tol: f64,
) -> Result<([Complex64; 6], f64)> {
    let data = wkb_data(pot, lambda, x_start)?;
    let rhs = move |x: f64, u: &[Complex64; 6]| {
        let q = pot.eval_real(x) - lambda;
        [u[1], q * u[0], u[3], q * u[2] - u[0], u[5], q * u[4] - 2.0 * u[2]]
    };
    let mut ode = Dop853::new(rhs, x_start, data, tol, initial_step(pot, lambda, x_start));
    ode.advance_to(0.0)?;
    Ok((*ode.state(), ode.log_scale()))
}

/// Samples of the subdominant solution at the given decreasing abscissae.
pub(crate) fn subdominant_samples(
    pot: &PolynomialPotential,
    lambda: Complex64,
    x_start: f64,
    xs: &[f64],
    tol: f64,
) -> Result<Vec<ScaledSolution>> {
    let data = wkb_data(pot, lambda, x_start)?;
    let mut ode = ray_integrator(pot, lambda, 0.0, x_start, [data[0], data[1]], tol);
    xs.iter()
        .map(|&x| {
            ode.advance_to(x)?;
            let [y, dy] = *ode.state();
            Ok(ScaledSolution {
                x: Complex64::new(x, 0.0),
                y,
                dy,
                log_scale: ode.log_scale(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sector_centers_and_boundaries() {
        assert_eq!(stokes_sector_of(0.0, 4).unwrap(), 0);
        assert_eq!(stokes_sector_of(PI, 4).unwrap(), 3);
        assert!(matches!(stokes_sector_of(PI / 6.0, 4), Err(Error::SectorBoundary { .. })));
        assert_eq!(stokes_sector_of(-PI / 3.0, 4).unwrap(), 5);
        assert_eq!(stokes_sector_of(2.0 * PI / 3.0 + 0.1, 4).unwrap(), 2);
        // d = 2: four sectors of width π/2 centred on the axes.
        assert_eq!(stokes_sector_of(PI / 2.0, 2).unwrap(), 1);
        assert!(stokes_sector_of(PI / 4.0, 2).is_err());
        assert!(stokes_sector_of(0.0, 3).is_err());
    }

    #[test]
    fn empty_path_returns_wkb_state() {
        let pot = PolynomialPotential::quartic(c(0.5, 0.2));
        let lambda = c(1.0, -0.3);
        let x0 = wkb_start(&pot, lambda);
        let sol = integrate_subdominant(&pot, lambda, x0, x0, 1e-12).unwrap();
        let data = wkb_data(&pot, lambda, x0).unwrap();
        // The initial renormalization may rescale; compare unscaled values.
        let (y, dy) = sol.unscaled();
        assert!((y - data[0]).norm() <= 1e-15 * data[0].norm());
        assert!((dy - data[1]).norm() <= 1e-15 * data[1].norm());
        assert!(sol.log_scale.abs() < 30.0);
    }

    #[test]
    fn start_point_is_in_wkb_region() {
        for (alpha, lambda) in [(0.0, 0.0), (1.0, 30.0), (-6.0, 5.0), (3.0, -2.0)] {
            let pot = PolynomialPotential::quartic(c(alpha, 1.0));
            let lam = c(lambda, 2.0);
            let x0 = wkb_start(&pot, lam);
            assert!(wkb_indicator(&pot, lam, x0) <= WKB_INDICATOR_MAX);
            assert!(x0 >= dominance_radius(&pot, lam.norm()));
        }
    }

    #[test]
    fn invalid_start_is_rejected() {
        let pot = PolynomialPotential::quartic(c(0.0, 0.0));
        assert!(matches!(
            integrate_subdominant(&pot, c(10.0, 0.0), 1.0, 0.0, 1e-10),
            Err(Error::WkbInvalid { .. })
        ));
        assert!(integrate_subdominant(&pot, c(0.0, 0.0), 5.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn jet_matches_finite_differences() {
        let pot = PolynomialPotential::quartic(c(0.7, -0.4));
        let lambda = c(2.0, 0.5);
        let x0 = wkb_start(&pot, c(4.0, 0.0));
        let (jet, ls) = subdominant_jet_at_origin(&pot, lambda, x0, 1e-13).unwrap();
        let h = 1e-4;
        let at = |l: Complex64| {
            let (j, s) = subdominant_jet_at_origin(&pot, l, x0, 1e-13).unwrap();
            [j[0] * (s - ls).exp(), j[1] * (s - ls).exp()]
        };
        let plus = at(lambda + h);
        let minus = at(lambda - h);
        for comp in 0..2 {
            let fd = (plus[comp] - minus[comp]) / (2.0 * h);
            assert!((fd - jet[2 + comp]).norm() < 1e-6 * jet[2 + comp].norm(), "first derivative {comp}");
            let fd2 = (plus[comp] - 2.0 * jet[comp] + minus[comp]) / (h * h);
            assert!((fd2 - jet[4 + comp]).norm() < 1e-3 * jet[4 + comp].norm(), "second derivative {comp}");
        }
    }
}
