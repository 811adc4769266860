//! Zero counting: eigenvalues inside a disk by the argument principle, and
//! real zeros of eigenfunctions by sign changes.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::determinant::Determinant;
use super::eigen::{eigenvalues_of_parity, SpectrumSettings};
use super::integrate::subdominant_samples;
use super::potential::PolynomialPotential;
use crate::{Error, Parity, Result};

/// Relative determinant modulus below which the contour is considered to pass through a zero.
const CONTOUR_ZERO_MODULUS: f64 = 1e-8;

/// Largest phase increment accepted between neighbouring contour samples.
const MAX_PHASE_STEP: f64 = PI / 4.0;

const MAX_BISECTIONS: usize = 14;

/// Highest level index accepted by [`real_zero_count`].
pub const MAX_ZERO_COUNT_LEVEL: usize = 60;

struct Contour<'a> {
    det: &'a Determinant,
    center: Complex64,
    radius: f64,
    min_modulus: f64,
}

impl Contour<'_> {
    fn value(&mut self, theta: f64) -> Result<Complex64> {
        let lambda = self.center + Complex64::from_polar(self.radius, theta);
        let ev = self.det.eval(lambda)?;
        self.min_modulus = self.min_modulus.min(ev.relative_residual());
        Ok(ev.value.mantissa)
    }

    /// Phase change of the determinant along the arc `[a, b]`, bisecting until every increment is small.
    fn phase_change(&mut self, a: f64, fa: Complex64, b: f64, fb: Complex64, depth: usize) -> Result<Option<f64>> {
        let step = (fb / fa).arg();
        if step.abs() <= MAX_PHASE_STEP {
            return Ok(Some(step));
        }
        if depth == MAX_BISECTIONS {
            return Ok(None);
        }
        let m = 0.5 * (a + b);
        let fm = self.value(m)?;
        let Some(left) = self.phase_change(a, fa, m, fm, depth + 1)? else {
            return Ok(None);
        };
        let Some(right) = self.phase_change(m, fm, b, fb, depth + 1)? else {
            return Ok(None);
        };
        Ok(Some(left + right))
    }
}

/// Number of zeros of the determinant of the given parity inside the circle
/// `|λ - center| = radius`, with multiplicity.
pub fn count_eigenvalues_in_disk(
    pot: &PolynomialPotential,
    center: Complex64,
    radius: f64,
    parity: Parity,
    tol: f64,
) -> Result<usize> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidInput(format!("radius must be positive, got {radius}")));
    }
    let det = Determinant::new(pot, parity, tol, 1.5 * (center.norm() + radius) + 2.0)?;
    let mut contour = Contour {
        det: &det,
        center,
        radius,
        min_modulus: f64::INFINITY,
    };
    let n = 64;
    let thetas: Vec<f64> = (0..=n).map(|k| TAU * k as f64 / n as f64).collect();
    let mut values = Vec::with_capacity(n + 1);
    for &t in &thetas[..n] {
        values.push(contour.value(t)?);
    }
    values.push(values[0]);
    let mut total = 0.0;
    for k in 0..n {
        match contour.phase_change(thetas[k], values[k], thetas[k + 1], values[k + 1], 0)? {
            Some(step) => total += step,
            None => {
                return Err(Error::ContourHitsZero {
                    min_modulus: contour.min_modulus,
                })
            }
        }
    }
    let winding = total / TAU;
    if contour.min_modulus < CONTOUR_ZERO_MODULUS || (winding - winding.round()).abs() > 0.05 || winding.round() < 0.0 {
        return Err(Error::ContourHitsZero {
            min_modulus: contour.min_modulus,
        });
    }
    Ok(winding.round() as usize)
}

/// Sign changes on `(0, x_start]` of the eigenfunction at `λ`, sampled with spacing `h`.
fn positive_sign_changes(pot: &PolynomialPotential, lambda: f64, det: &Determinant, h: f64) -> Result<usize> {
    let x_start = det.x_start();
    let count = (x_start / h).floor() as usize;
    let xs: Vec<f64> = (1..=count).rev().map(|j| j as f64 * h).collect();
    let samples = subdominant_samples(pot, Complex64::new(lambda, 0.0), x_start, &xs, det.tol())?;
    // The solution is real up to a constant phase; project onto the phase of its largest mantissa.
    let phase = samples
        .iter()
        .max_by(|a, b| a.y.norm().total_cmp(&b.y.norm()))
        .map(|s| s.y.arg())
        .unwrap_or(0.0);
    let rot = Complex64::from_polar(1.0, -phase);
    let signs: Vec<f64> = samples
        .iter()
        .map(|s| (s.y * rot).re)
        .filter(|v| *v != 0.0)
        .map(f64::signum)
        .collect();
    Ok(signs.windows(2).filter(|w| w[0] != w[1]).count())
}

/// Number of real zeros of the `n`-th eigenfunction of `-y'' + (x⁴ + α x²) y = λ y` for real `α`.
pub fn real_zero_count(alpha: f64, n: usize, settings: &SpectrumSettings) -> Result<usize> {
    if n > MAX_ZERO_COUNT_LEVEL {
        return Err(Error::InvalidInput(format!(
            "level {n} exceeds the supported maximum {MAX_ZERO_COUNT_LEVEL}"
        )));
    }
    if !alpha.is_finite() {
        return Err(Error::InvalidInput("alpha must be finite".into()));
    }
    let pot = PolynomialPotential::quartic(Complex64::new(alpha, 0.0));
    let parity = Parity::of_level(n);
    let level = eigenvalues_of_parity(&pot, parity, n, settings)?
        .into_iter()
        .find(|e| e.index == n)
        .expect("requested level is computed");
    let lambda = level.value.re;
    let det = Determinant::new(&pot, parity, settings.tol, lambda.abs())?;
    // Cells short enough that the local phase advances by at most π/4.
    let wavenumber = (lambda - pot.real_minimum()).max(1.0).sqrt();
    let mut h = (0.25 * PI / wavenumber).min(0.05);
    let mut coarse = positive_sign_changes(&pot, lambda, &det, h)?;
    for _ in 0..4 {
        h *= 0.5;
        let fine = positive_sign_changes(&pot, lambda, &det, h)?;
        if fine == coarse {
            let central = usize::from(parity == Parity::Odd);
            return Ok(2 * fine + central);
        }
        coarse = fine;
    }
    let fine = positive_sign_changes(&pot, lambda, &det, 0.5 * h)?;
    Err(Error::GridResolution { coarse, fine })
}
