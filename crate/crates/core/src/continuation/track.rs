use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::path::PathSpec;
use crate::spectral::{newton_on, Determinant, NewtonSettings, PolynomialPotential, DEFAULT_TOL};
use crate::{Error, Parity, Result};

/// Step control for predictor-corrector tracking. Steps are in the path parameter `t ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackControls {
    pub tol: f64,
    pub newton: NewtonSettings,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    /// A step is rejected when the corrector moves further than this fraction of the local gap.
    pub displacement_fraction: f64,
    /// Tracking aborts when two eigenvalues come closer than `gap_floor · (1 + |λ|)`.
    pub gap_floor: f64,
    /// Newton iterations allowed per corrector before the step is halved.
    pub corrector_iterations: usize,
    /// Also bound the gap by `2|F'/F''|`, which sees untracked neighbours.
    pub derivative_gap: bool,
}

impl Default for TrackControls {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            newton: NewtonSettings::default(),
            initial_step: 1.0 / 64.0,
            min_step: 1e-8,
            max_step: 1.0 / 8.0,
            displacement_fraction: 0.25,
            gap_floor: 1e-4,
            corrector_iterations: 12,
            derivative_gap: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceStatus {
    Completed,
    AbortedNearBranch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    pub t: f64,
    #[serde(with = "crate::serde_complex")]
    pub alpha: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub lambda: Complex64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuationTrace {
    pub parity: Parity,
    pub samples: Vec<TraceSample>,
    pub status: TraceStatus,
    /// Why tracking stopped early, if it did.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ContinuationTrace {
    pub fn completed(&self) -> bool {
        self.status == TraceStatus::Completed
    }

    pub fn last(&self) -> &TraceSample {
        self.samples.last().expect("traces always hold the start sample")
    }

    pub fn end_lambda(&self) -> Complex64 {
        self.last().lambda
    }
}

fn quartic_along(path: &PathSpec, t: f64) -> PolynomialPotential {
    PolynomialPotential::quartic(path.at(t))
}

/// Polishes `start` into an eigenvalue at `alpha`; fails if it is not close to one.
pub fn polish_start(alpha: Complex64, start: Complex64, parity: Parity, controls: &TrackControls) -> Result<(Complex64, f64)> {
    let pot = PolynomialPotential::quartic(alpha);
    let det = Determinant::near(&pot, parity, controls.tol, start)?;
    let residual = det.eval(start)?.relative_residual();
    let root = newton_on(&det, start, &controls.newton).map_err(|_| Error::NotAnEigenvalue { value: start, residual })?;
    if (root.value - start).norm() > 1e-6 * (1.0 + start.norm()) {
        return Err(Error::NotAnEigenvalue { value: start, residual });
    }
    Ok((root.value, root.residual))
}

struct Corrected {
    values: Vec<Complex64>,
    residuals: Vec<f64>,
    gaps: Vec<f64>,
    max_iterations: usize,
}

fn pairwise_gaps(values: &[Complex64]) -> Vec<f64> {
    values
        .iter()
        .enumerate()
        .map(|(i, a)| {
            values
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, b)| (a - b).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

fn correct(
    pot: &PolynomialPotential,
    predictions: &[Complex64],
    parity: Parity,
    controls: &TrackControls,
) -> Result<Corrected> {
    let bound = predictions.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let det = Determinant::new(pot, parity, controls.tol, 1.5 * bound + 2.0)?;
    let settings = NewtonSettings {
        max_iterations: controls.corrector_iterations,
        ..controls.newton
    };
    let mut values = Vec::with_capacity(predictions.len());
    let mut residuals = Vec::with_capacity(predictions.len());
    let mut max_iterations = 0;
    for p in predictions {
        let root = newton_on(&det, *p, &settings)?;
        values.push(root.value);
        residuals.push(root.residual);
        max_iterations = max_iterations.max(root.iterations);
    }
    let mut gaps = pairwise_gaps(&values);
    if controls.derivative_gap {
        for (gap, v) in gaps.iter_mut().zip(&values) {
            *gap = gap.min(det.jet(*v)?.gap_estimate());
        }
    }
    Ok(Corrected {
        values,
        residuals,
        gaps,
        max_iterations,
    })
}

fn floor_violated(values: &[Complex64], controls: &TrackControls) -> Option<f64> {
    let gaps = pairwise_gaps(values);
    values
        .iter()
        .zip(gaps)
        .find(|(v, g)| *g < controls.gap_floor * (1.0 + v.norm()))
        .map(|(_, g)| g)
}

/// Continues the eigenvalue `lambda_start` (at `α = path(0)`) along the path.
pub fn continue_eigenvalue(
    path: &PathSpec,
    lambda_start: Complex64,
    parity: Parity,
    controls: &TrackControls,
) -> Result<ContinuationTrace> {
    let mut traces = track_labels(path, &[lambda_start], parity, controls)?;
    Ok(traces.remove(0))
}

/// Tracks several eigenvalues of one parity in lockstep along the path.
///
/// All traces share their `t` samples. When two tracked eigenvalues approach
/// closer than the gap floor, or the step underflows, every trace stops with
/// status `AbortedNearBranch` at the last good sample.
pub fn track_labels(
    path: &PathSpec,
    starts: &[Complex64],
    parity: Parity,
    controls: &TrackControls,
) -> Result<Vec<ContinuationTrace>> {
    path.validate()?;
    if starts.is_empty() {
        return Ok(Vec::new());
    }
    let alpha0 = path.start();
    let mut current = Vec::with_capacity(starts.len());
    let mut traces = Vec::with_capacity(starts.len());
    for s in starts {
        let (value, residual) = polish_start(alpha0, *s, parity, controls)?;
        current.push(value);
        traces.push(ContinuationTrace {
            parity,
            samples: vec![TraceSample {
                t: 0.0,
                alpha: alpha0,
                lambda: value,
                residual,
            }],
            status: TraceStatus::Completed,
            note: None,
        });
    }
    let abort = |traces: &mut Vec<ContinuationTrace>, note: String| {
        for tr in traces.iter_mut() {
            tr.status = TraceStatus::AbortedNearBranch;
            tr.note = Some(note.clone());
        }
    };
    if let Some(g) = floor_violated(&current, controls) {
        abort(&mut traces, format!("start eigenvalues only {g:.3e} apart"));
        return Ok(traces);
    }
    if path.length() == 0.0 {
        return Ok(traces);
    }

    let mut t = 0.0;
    let mut h = controls.initial_step;
    let mut previous: Option<(Vec<Complex64>, f64)> = None;
    while t < 1.0 {
        let step = h.min(1.0 - t);
        let t_new = if step >= 1.0 - t { 1.0 } else { t + step };
        let predictions: Vec<Complex64> = match &previous {
            Some((prev, h_prev)) => current
                .iter()
                .zip(prev)
                .map(|(c, p)| c + (c - p) * (step / h_prev))
                .collect(),
            None => current.clone(),
        };
        let pot = quartic_along(path, t_new);
        let accepted = match correct(&pot, &predictions, parity, controls) {
            Ok(c) => {
                let ok = c
                    .values
                    .iter()
                    .zip(&predictions)
                    .zip(&c.gaps)
                    .all(|((v, p), g)| (v - p).norm() <= controls.displacement_fraction * g);
                ok.then_some(c)
            }
            Err(Error::NewtonDiverged { .. }) | Err(Error::WkbInvalid { .. }) | Err(Error::StepUnderflow { .. }) => None,
            Err(e) => return Err(e),
        };
        match accepted {
            Some(c) => {
                let easy = c.max_iterations <= 4
                    && c
                        .values
                        .iter()
                        .zip(&predictions)
                        .zip(&c.gaps)
                        .all(|((v, p), g)| (v - p).norm() <= 0.25 * controls.displacement_fraction * g);
                let alpha = path.at(t_new);
                for ((tr, v), r) in traces.iter_mut().zip(&c.values).zip(&c.residuals) {
                    tr.samples.push(TraceSample {
                        t: t_new,
                        alpha,
                        lambda: *v,
                        residual: *r,
                    });
                }
                previous = Some((std::mem::replace(&mut current, c.values), step));
                t = t_new;
                if let Some(g) = floor_violated(&current, controls) {
                    abort(&mut traces, format!("eigenvalues {g:.3e} apart at alpha = {alpha}"));
                    return Ok(traces);
                }
                if easy {
                    h = (2.0 * h).min(controls.max_step);
                }
            }
            None => {
                h *= 0.5;
                if h < controls.min_step {
                    let alpha = path.at(t);
                    abort(&mut traces, format!("step underflow at t = {t:.6}, alpha = {alpha}"));
                    return Ok(traces);
                }
            }
        }
    }
    Ok(traces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{real_zeros, SpectrumSettings};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ground(alpha: f64) -> Complex64 {
        let pot = PolynomialPotential::quartic(c(alpha, 0.0));
        real_zeros(&pot, Parity::Even, 1, &SpectrumSettings::default()).unwrap()[0].value
    }

    #[test]
    fn constant_path_gives_constant_trace() {
        let l0 = ground(1.0);
        let path = PathSpec::segment(c(1.0, 0.0), c(1.0, 0.0));
        let tr = continue_eigenvalue(&path, l0, Parity::Even, &TrackControls::default()).unwrap();
        assert!(tr.completed());
        assert!(tr.samples.iter().all(|s| (s.lambda - l0).norm() < 1e-12));
    }

    #[test]
    fn there_and_back_returns_to_start() {
        let l0 = ground(1.0);
        let out = PathSpec::segment(c(1.0, 0.0), c(0.5, 1.5));
        let path = out.then(&out.reversed()).unwrap();
        let tr = continue_eigenvalue(&path, l0, Parity::Even, &TrackControls::default()).unwrap();
        assert!(tr.completed());
        assert!((tr.end_lambda() - l0).norm() < 1e-9);
        assert!(tr.samples.iter().all(|s| s.residual <= 1e-8));
    }

    #[test]
    fn rejects_non_eigenvalue_start() {
        let path = PathSpec::segment(c(1.0, 0.0), c(1.0, 1.0));
        let err = continue_eigenvalue(&path, c(2.0, 0.0), Parity::Even, &TrackControls::default()).unwrap_err();
        assert!(matches!(err, Error::NotAnEigenvalue { .. }));
    }
}
