//! Threshold beyond which eigenvalue moduli are strictly increasing, uniformly over a disk of `α`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::eigen::{eigenvalues_at, SpectrumSettings};
use super::potential::PolynomialPotential;
use crate::{Error, Result};

/// `|μ_{n+1}| > |μ_n|` is required with this relative margin.
pub const MODULUS_MARGIN: f64 = 1e-9;

/// Extra levels computed beyond `n_max` so the modulus-sorted prefix is complete.
const EXTRA_LEVELS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusOrderingReport {
    pub radius: f64,
    pub n_max: usize,
    #[serde(with = "crate::serde_complex::vec")]
    pub samples: Vec<Complex64>,
    /// Threshold at each sample.
    pub per_sample: Vec<usize>,
    /// Largest per-sample threshold.
    pub threshold: usize,
}

/// Smallest `N` with `|μ_{n+1}| > |μ_n|` for `N <= n < n_max`, where `μ` are the
/// eigenvalues sorted by modulus. `N = n_max` means the condition is vacuous.
pub fn ordering_threshold_at(alpha: Complex64, n_max: usize, settings: &SpectrumSettings) -> Result<usize> {
    let pot = PolynomialPotential::quartic(alpha);
    let mut moduli: Vec<f64> = eigenvalues_at(&pot, n_max + EXTRA_LEVELS, settings)?
        .iter()
        .map(|e| e.value.norm())
        .collect();
    moduli.sort_by(f64::total_cmp);
    let last_violation = (0..n_max)
        .rev()
        .find(|&n| moduli[n + 1] <= moduli[n] * (1.0 + MODULUS_MARGIN));
    Ok(last_violation.map_or(0, |n| n + 1))
}

/// `boundary` points on the circle `|α| = radius` and `interior` points spread over
/// the disk on a sunflower spiral, all rotated by an angle drawn from `seed`.
pub fn disk_samples(radius: f64, boundary: usize, interior: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rotation = rng.gen::<f64>() * TAU;
    let golden = PI * (3.0 - 5f64.sqrt());
    let ring = (0..boundary).map(|k| Complex64::from_polar(radius, rotation + TAU * k as f64 / boundary as f64));
    let inner = (0..interior).map(|k| {
        let r = radius * ((k as f64 + 0.5) / interior as f64).sqrt();
        Complex64::from_polar(r, rotation + golden * k as f64)
    });
    ring.chain(inner).collect()
}

/// Modulus-ordering threshold over sampled `α` with `|α| <= radius`.
pub fn modulus_ordering_threshold(
    radius: f64,
    n_max: usize,
    boundary: usize,
    interior: usize,
    seed: u64,
    settings: &SpectrumSettings,
) -> Result<ModulusOrderingReport> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidInput(format!("radius must be positive, got {radius}")));
    }
    let samples = disk_samples(radius, boundary, interior, seed);
    modulus_ordering_threshold_at(radius, &samples, n_max, settings)
}

/// Modulus-ordering threshold over explicit samples.
pub fn modulus_ordering_threshold_at(
    radius: f64,
    samples: &[Complex64],
    n_max: usize,
    settings: &SpectrumSettings,
) -> Result<ModulusOrderingReport> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("at least one sample is needed".into()));
    }
    let per_sample = samples
        .iter()
        .map(|a| ordering_threshold_at(*a, n_max, settings))
        .collect::<Result<Vec<_>>>()?;
    let threshold = per_sample.iter().copied().max().unwrap_or(0);
    Ok(ModulusOrderingReport {
        radius,
        n_max,
        samples: samples.to_vec(),
        per_sample,
        threshold,
    })
}
