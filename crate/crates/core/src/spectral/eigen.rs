//! Eigenvalues as zeros of the parity determinants.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::determinant::Determinant;
use super::potential::PolynomialPotential;
use crate::continuation::{track_labels, PathSpec, TrackControls};
use crate::{Error, Parity, Result};

/// Newton settings for polishing a zero of a determinant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewtonSettings {
    /// Convergence when `|Δλ| <= step_tol · (1 + |λ|)`.
    pub step_tol: f64,
    pub max_iterations: usize,
    /// Largest accepted relative residual `|F| / |(y(0), y'(0))|` at convergence.
    pub residual_tol: f64,
}

impl Default for NewtonSettings {
    fn default() -> Self {
        Self {
            step_tol: 1e-10,
            max_iterations: 50,
            residual_tol: 1e-8,
        }
    }
}

/// Settings shared by the eigenvalue searches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSettings {
    /// Relative tolerance of the ODE integrator.
    pub tol: f64,
    pub newton: NewtonSettings,
}

impl Default for SpectrumSettings {
    fn default() -> Self {
        Self {
            tol: super::integrate::DEFAULT_TOL,
            newton: NewtonSettings::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub index: usize,
    pub parity: Parity,
    #[serde(with = "crate::serde_complex")]
    pub value: Complex64,
    /// Relative determinant residual at `value`.
    pub residual: f64,
}

/// Result of a converged Newton iteration.
#[derive(Debug, Clone, Copy)]
pub struct NewtonRoot {
    pub value: Complex64,
    pub residual: f64,
    pub iterations: usize,
}

/// Newton iteration on a fixed-start determinant with finite-difference derivatives.
pub fn newton_on(det: &Determinant, start: Complex64, settings: &NewtonSettings) -> Result<NewtonRoot> {
    let mut lambda = start;
    for iteration in 1..=settings.max_iterations {
        let at = det.eval(lambda)?;
        if at.value.is_zero() {
            return Ok(NewtonRoot {
                value: lambda,
                residual: 0.0,
                iterations: iteration,
            });
        }
        let slope = det.derivative_fd(lambda, &at)?;
        let step = at.value.mantissa / slope;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        lambda -= step;
        if step.norm() <= settings.step_tol * (1.0 + lambda.norm()) {
            let residual = det.eval(lambda)?.relative_residual();
            if residual <= settings.residual_tol {
                return Ok(NewtonRoot {
                    value: lambda,
                    residual,
                    iterations: iteration,
                });
            }
            break;
        }
    }
    Err(Error::NewtonDiverged {
        start,
        iterations: settings.max_iterations,
    })
}

/// Newton iteration for a zero of the given parity, starting at `start`.
pub fn newton_eigenvalue(
    pot: &PolynomialPotential,
    parity: Parity,
    start: Complex64,
    settings: &SpectrumSettings,
) -> Result<NewtonRoot> {
    let det = Determinant::near(pot, parity, settings.tol, start)?;
    match newton_on(&det, start, &settings.newton) {
        // The start point may have been too close for a far-travelling iterate.
        Err(Error::WkbInvalid { .. }) => {
            let wider = Determinant::new(pot, parity, settings.tol, 4.0 * start.norm() + 10.0)?;
            newton_on(&wider, start, &settings.newton)
        }
        other => other,
    }
}

/// Same-parity level spacing scale used to size scan steps.
fn scan_step(pot: &PolynomialPotential, lambda: f64, floor: f64) -> f64 {
    // Same-parity gaps exceed twice the local level spacing, itself at least of
    // order (λ - min P)^{(d-2)/(2d)}; a tenth of the smaller scale is safe.
    let d = pot.degree() as f64;
    let height = (lambda - floor).max(1.0);
    0.1 * height.powf((d - 2.0) / (2.0 * d)).max(0.5)
}

/// The `count` lowest real zeros of the determinant of one parity, for a real even potential.
pub fn real_zeros(pot: &PolynomialPotential, parity: Parity, count: usize, settings: &SpectrumSettings) -> Result<Vec<NewtonRoot>> {
    if !pot.is_real() || !pot.is_even() {
        return Err(Error::InvalidInput("real zero scan needs a real even potential".into()));
    }
    let floor = pot.real_minimum();
    let mut roots = Vec::with_capacity(count);
    if count == 0 {
        return Ok(roots);
    }
    // The sign of the determinant is well defined along the real axis regardless
    // of the start point (WKB data are positive there), so each evaluation may
    // pick its own start point.
    let sign_at = |lambda: f64| -> Result<f64> {
        let det = Determinant::new(pot, parity, settings.tol, lambda.abs())?;
        Ok(det.eval(Complex64::new(lambda, 0.0))?.value.mantissa.re.signum())
    };
    let mut lo = floor - 1.0;
    let mut sign_lo = sign_at(lo)?;
    let mut guard = 0usize;
    while roots.len() < count {
        guard += 1;
        if guard > 200_000 {
            return Err(Error::Unsupported("real zero scan did not terminate".into()));
        }
        let hi = lo + scan_step(pot, lo, floor);
        let sign_hi = sign_at(hi)?;
        if sign_hi != sign_lo {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..30 {
                let mid = 0.5 * (a + b);
                if sign_at(mid)? == sign_lo {
                    a = mid;
                } else {
                    b = mid;
                }
                if b - a < 1e-6 * (1.0 + mid.abs()) {
                    break;
                }
            }
            let root = newton_eigenvalue(pot, parity, Complex64::new(0.5 * (a + b), 0.0), settings)?;
            roots.push(NewtonRoot {
                value: Complex64::new(root.value.re, 0.0),
                ..root
            });
        }
        lo = hi;
        sign_lo = sign_hi;
    }
    Ok(roots)
}

/// Real anchor from which level labels are transported: the potential itself when
/// real, else `Re α` for a quartic with `Re α > 0`, else `α = 1`.
pub fn real_anchor(pot: &PolynomialPotential) -> Result<PolynomialPotential> {
    if pot.is_real() {
        return Ok(pot.clone());
    }
    match pot.quartic_alpha() {
        Some(alpha) if alpha.re > 0.0 => Ok(PolynomialPotential::quartic(Complex64::new(alpha.re, 0.0))),
        Some(_) => Ok(PolynomialPotential::quartic(Complex64::new(1.0, 0.0))),
        None => Err(Error::Unsupported(
            "labels for complex potentials are defined for the quartic family only".into(),
        )),
    }
}

/// Eigenvalues with indices `0..=n_max`, labelled at the real anchor and continued
/// along the straight segment to the target.
pub fn eigenvalues_at(pot: &PolynomialPotential, n_max: usize, settings: &SpectrumSettings) -> Result<Vec<Eigenvalue>> {
    let mut all = Vec::with_capacity(n_max + 1);
    for parity in [Parity::Even, Parity::Odd] {
        all.extend(eigenvalues_of_parity(pot, parity, n_max, settings)?);
    }
    all.sort_by_key(|e| e.index);
    Ok(all)
}

/// Eigenvalues of one parity with level indices `<= n_max`.
pub fn eigenvalues_of_parity(
    pot: &PolynomialPotential,
    parity: Parity,
    n_max: usize,
    settings: &SpectrumSettings,
) -> Result<Vec<Eigenvalue>> {
    let indices: Vec<usize> = parity.levels(n_max).collect();
    if indices.is_empty() {
        return Ok(Vec::new());
    }
    let anchor = real_anchor(pot)?;
    let roots = real_zeros(&anchor, parity, indices.len(), settings)?;
    if anchor == *pot {
        return Ok(indices
            .iter()
            .zip(roots)
            .map(|(&index, r)| Eigenvalue {
                index,
                parity,
                value: r.value,
                residual: r.residual,
            })
            .collect());
    }
    let (Some(a0), Some(a1)) = (anchor.quartic_alpha(), pot.quartic_alpha()) else {
        return Err(Error::Unsupported("continuation is implemented for the quartic family".into()));
    };
    let path = PathSpec::segment(a0, a1);
    let starts: Vec<Complex64> = roots.iter().map(|r| r.value).collect();
    let controls = TrackControls {
        tol: settings.tol,
        newton: settings.newton,
        ..TrackControls::default()
    };
    let traces = track_labels(&path, &starts, parity, &controls)?;
    traces
        .into_iter()
        .zip(indices)
        .map(|(trace, index)| {
            let last = trace.samples.last().expect("trace has samples");
            if !trace.completed() {
                return Err(Error::Continuation {
                    t: last.t,
                    alpha: last.alpha,
                    reason: format!("anchor segment {a0} -> {a1} passes near a branch point"),
                });
            }
            Ok(Eigenvalue {
                index,
                parity,
                value: last.lambda,
                residual: last.residual,
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
    fn harmonic_oscillator_levels() {
        let pot = PolynomialPotential::harmonic();
        let levels = eigenvalues_at(&pot, 5, &SpectrumSettings::default()).unwrap();
        for ev in &levels {
            assert!((ev.value - c(2.0 * ev.index as f64 + 1.0, 0.0)).norm() < 1e-9, "{ev:?}");
            assert_eq!(ev.parity, Parity::of_level(ev.index));
        }
    }

    #[test]
    fn newton_from_nearby_guess() {
        let pot = PolynomialPotential::quartic(c(0.0, 0.0));
        let root = newton_eigenvalue(&pot, Parity::Even, c(1.1, 0.05), &SpectrumSettings::default()).unwrap();
        assert!((root.value - c(1.060_362_090_484_182_9, 0.0)).norm() < 1e-9);
        assert!(root.residual <= 1e-8);
    }

    #[test]
    fn anchor_rule() {
        let a = real_anchor(&PolynomialPotential::quartic(c(2.0, 3.0))).unwrap();
        assert_eq!(a.quartic_alpha(), Some(c(2.0, 0.0)));
        let b = real_anchor(&PolynomialPotential::quartic(c(-2.0, 3.0))).unwrap();
        assert_eq!(b.quartic_alpha(), Some(c(1.0, 0.0)));
    }
}
