//! The ratio `f = y / y₁` of an eigenfunction and the opposite-parity solution,
//! its asymptotic values along sector-centre rays, and its Schwarzian derivative.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::determinant::Determinant;
use super::integrate::{dominance_radius, ray_integrator};
use super::potential::PolynomialPotential;
use crate::{Error, Parity, Result};

/// A point of the Riemann sphere. Serializes as `{"re", "im"}` or `{"inf": true}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AsymptoticValue {
    Finite(#[serde(with = "crate::serde_complex")] Complex64),
    Infinite { inf: bool },
}

impl AsymptoticValue {
    pub const INFINITY: AsymptoticValue = AsymptoticValue::Infinite { inf: true };

    pub fn finite(&self) -> Option<Complex64> {
        match self {
            AsymptoticValue::Finite(z) => Some(*z),
            AsymptoticValue::Infinite { .. } => None,
        }
    }

    fn scaled(&self, c: Complex64) -> Self {
        match self {
            AsymptoticValue::Finite(z) => AsymptoticValue::Finite(z * c),
            inf => *inf,
        }
    }
}

/// Chordal distance on the Riemann sphere; at most 1.
pub fn chordal_distance(a: AsymptoticValue, b: AsymptoticValue) -> f64 {
    match (a.finite(), b.finite()) {
        (Some(x), Some(y)) => (x - y).norm() / ((1.0 + x.norm_sqr()).sqrt() * (1.0 + y.norm_sqr()).sqrt()),
        (Some(x), None) | (None, Some(x)) => 1.0 / (1.0 + x.norm_sqr()).sqrt(),
        (None, None) => 0.0,
    }
}

/// Asymptotic values `w_j` of `f` along the rays `arg z = 2πj/q`, `q = d + 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticValueSet {
    /// Parity of the eigenfunction `y`.
    pub parity: Parity,
    /// Limits of `f` with both solutions normalized at the origin.
    pub raw: Vec<AsymptoticValue>,
    /// `raw` multiplied by `normalization`.
    pub values: Vec<AsymptoticValue>,
    /// The constant `c` making `w_2 = 1`, when `w_2` is finite and nonzero.
    #[serde(default, with = "crate::serde_complex::option", skip_serializing_if = "Option::is_none")]
    pub normalization: Option<Complex64>,
}

impl AsymptoticValueSet {
    pub fn sector_count(&self) -> usize {
        self.raw.len()
    }

    /// Raw `c_1 = w_1`.
    pub fn c1(&self) -> AsymptoticValue {
        self.raw[1]
    }

    /// Raw `c_2 = w_2`.
    pub fn c2(&self) -> AsymptoticValue {
        self.raw[2]
    }

    /// Smallest chordal distance between cyclically adjacent values.
    pub fn min_adjacent_separation(&self) -> f64 {
        let q = self.raw.len();
        (0..q)
            .map(|j| chordal_distance(self.raw[j], self.raw[(j + 1) % q]))
            .fold(f64::INFINITY, f64::min)
    }
}

/// `f = y / y₁` for an eigenvalue `λ` of an even potential.
///
/// `y` is the eigenfunction with `(y, y')(0) = (1, 0)` (even) or `(0, 1)` (odd),
/// `y₁` the solution of opposite parity with the complementary initial data.
#[derive(Debug, Clone)]
pub struct EigenfunctionRatio {
    pot: PolynomialPotential,
    lambda: Complex64,
    parity: Parity,
    tol: f64,
    residual: f64,
}

fn canonical_data(parity: Parity) -> [Complex64; 2] {
    let (one, zero) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    match parity {
        Parity::Even => [one, zero],
        Parity::Odd => [zero, one],
    }
}

/// Ratio of two overflow-safe states `(mantissa, log_scale)`.
fn scaled_ratio(num: Complex64, num_log: f64, den: Complex64, den_log: f64) -> AsymptoticValue {
    let log_mod = num.norm().ln() - den.norm().ln() + num_log - den_log;
    if den == Complex64::new(0.0, 0.0) || log_mod > 700.0 {
        return AsymptoticValue::INFINITY;
    }
    if num == Complex64::new(0.0, 0.0) || log_mod < -700.0 {
        return AsymptoticValue::Finite(Complex64::new(0.0, 0.0));
    }
    AsymptoticValue::Finite(Complex64::from_polar(log_mod.exp(), num.arg() - den.arg()))
}

impl EigenfunctionRatio {
    /// Fails with `NotAnEigenvalue` unless one determinant has relative residual at most `residual_tol` at `λ`.
    pub fn new(pot: &PolynomialPotential, lambda: Complex64, tol: f64, residual_tol: f64) -> Result<Self> {
        let mut best = (Parity::Even, f64::INFINITY);
        for parity in [Parity::Even, Parity::Odd] {
            let r = Determinant::near(pot, parity, tol, lambda)?.eval(lambda)?.relative_residual();
            if r < best.1 {
                best = (parity, r);
            }
        }
        if best.1 > residual_tol {
            return Err(Error::NotAnEigenvalue {
                value: lambda,
                residual: best.1,
            });
        }
        Ok(Self {
            pot: pot.clone(),
            lambda,
            parity: best.0,
            tol,
            residual: best.1,
        })
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// `f(x)` at real points, with a guard against poles: fails when `|y₁ / y₁'| < guard`.
    pub fn values_on_axis(&self, xs: &[f64], guard: f64) -> Result<Vec<Complex64>> {
        let mut order: Vec<usize> = (0..xs.len()).collect();
        order.sort_by(|&a, &b| xs[a].abs().total_cmp(&xs[b].abs()));
        let mut out = vec![Complex64::new(0.0, 0.0); xs.len()];
        for positive in [true, false] {
            // Along z = -s the integrators carry d/dz, so y₁' keeps its meaning.
            let angle = if positive { 0.0 } else { std::f64::consts::PI };
            let mut y = ray_integrator(&self.pot, self.lambda, angle, 0.0, canonical_data(self.parity), self.tol);
            let mut y1 =
                ray_integrator(&self.pot, self.lambda, angle, 0.0, canonical_data(self.parity.opposite()), self.tol);
            for &i in order.iter().filter(|&&i| (xs[i] >= 0.0) == positive) {
                let s = xs[i].abs();
                y.advance_to(s)?;
                y1.advance_to(s)?;
                let [v1, dv1] = *y1.state();
                let distance = v1.norm() / dv1.norm();
                if distance < guard {
                    return Err(Error::PoleTooClose { x: xs[i], distance });
                }
                out[i] = y.state()[0] / v1 * (y.log_scale() - y1.log_scale()).exp();
            }
        }
        Ok(out)
    }

    /// Limit of `f` along the ray `arg z = angle`.
    pub fn ray_limit(&self, angle: f64) -> Result<AsymptoticValue> {
        let mut y = ray_integrator(&self.pot, self.lambda, angle, 0.0, canonical_data(self.parity), self.tol);
        let mut y1 = ray_integrator(&self.pot, self.lambda, angle, 0.0, canonical_data(self.parity.opposite()), self.tol);
        let r0 = dominance_radius(&self.pot, self.lambda.norm());
        let r_max = 4.0 * r0 + 10.0;
        let target = (100.0 * self.tol).max(1e-11);
        let ds = 0.25;
        let mut s = 0.0;
        let mut previous: Option<AsymptoticValue> = None;
        let mut quiet = 0;
        while s < r_max {
            s += ds;
            y.advance_to(s)?;
            y1.advance_to(s)?;
            let f = scaled_ratio(y.state()[0], y.log_scale(), y1.state()[0], y1.log_scale());
            if let Some(p) = previous {
                if s >= r0 && chordal_distance(f, p) <= target {
                    quiet += 1;
                    if quiet >= 2 {
                        return Ok(f);
                    }
                } else {
                    quiet = 0;
                }
            }
            previous = Some(f);
        }
        Err(Error::RayNotConverged { angle, radius: r_max })
    }
}

/// Asymptotic values of `f = y / y₁` along the `q = d + 2` sector-centre rays.
pub fn asymptotic_values(pot: &PolynomialPotential, lambda: Complex64, tol: f64) -> Result<AsymptoticValueSet> {
    let ratio = EigenfunctionRatio::new(pot, lambda, tol, 1e-8)?;
    asymptotic_values_of(&ratio)
}

pub fn asymptotic_values_of(ratio: &EigenfunctionRatio) -> Result<AsymptoticValueSet> {
    let q = ratio.pot.sector_count();
    let raw = (0..q)
        .map(|j| ratio.ray_limit(TAU * j as f64 / q as f64))
        .collect::<Result<Vec<_>>>()?;
    let normalization = raw[2].finite().filter(|w| w.norm() > 0.0).map(|w| 1.0 / w);
    let values = match normalization {
        Some(c) => raw.iter().map(|w| w.scaled(c)).collect(),
        None => raw.clone(),
    };
    Ok(AsymptoticValueSet {
        parity: ratio.parity,
        raw,
        values,
        normalization,
    })
}

const D1: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
const D2_CENTER: f64 = -205.0 / 72.0;
const D2: [f64; 4] = [8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0];
const D3: [f64; 4] = [-61.0 / 30.0, 169.0 / 120.0, -3.0 / 10.0, 7.0 / 240.0];

/// Stencil steps are `pole distance / 100`, clamped to this range.
pub const SCHWARZIAN_STEP_RANGE: (f64, f64) = (1e-3, 5e-3);

/// Samples closer than this to a pole of `f` are rejected.
pub const SCHWARZIAN_POLE_GUARD: f64 = 0.1;

/// Schwarzian `f'''/f' - 3/2 (f''/f')²` from nine values `f(x + m h)`, `m = -4..=4`.
pub fn schwarzian_from_stencil(v: &[Complex64; 9], h: f64) -> Complex64 {
    let at = |m: i32| v[(m + 4) as usize];
    let (mut d1, mut d2, mut d3) = (Complex64::new(0.0, 0.0), D2_CENTER * at(0), Complex64::new(0.0, 0.0));
    for k in 1..=4 {
        let (p, m) = (at(k as i32), at(-(k as i32)));
        d1 += D1[k - 1] * (p - m);
        d2 += D2[k - 1] * (p + m);
        d3 += D3[k - 1] * (p - m);
    }
    let (d1, d2, d3) = (d1 / h, d2 / (h * h), d3 / (h * h * h));
    d3 / d1 - 1.5 * (d2 / d1) * (d2 / d1)
}

/// `max |S_f(x) + 2(P(x) - λ)|` over the samples for any function `f` of the real axis,
/// with stencil step `steps[i]` at `xs[i]`.
pub fn schwarzian_residual_of<F>(f: F, pot: &PolynomialPotential, lambda: Complex64, xs: &[f64], steps: &[f64]) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<Vec<Complex64>>,
{
    if xs.len() != steps.len() {
        return Err(Error::InvalidInput("one stencil step per sample is needed".into()));
    }
    let mut points = Vec::with_capacity(9 * xs.len());
    for (&x, &h) in xs.iter().zip(steps) {
        points.extend((-4..=4).map(|m| x + f64::from(m) * h));
    }
    let values = f(&points)?;
    let mut worst: f64 = 0.0;
    for (i, (&x, &h)) in xs.iter().zip(steps).enumerate() {
        let stencil: [Complex64; 9] = values[9 * i..9 * i + 9].try_into().expect("nine values per sample");
        let s = schwarzian_from_stencil(&stencil, h);
        worst = worst.max((s + 2.0 * (pot.eval_real(x) - lambda)).norm());
    }
    Ok(worst)
}

impl EigenfunctionRatio {
    /// Distance estimate `|y₁ / y₁'|` from each sample to the nearest pole of `f`.
    pub fn pole_distances(&self, xs: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; xs.len()];
        for positive in [true, false] {
            let angle = if positive { 0.0 } else { std::f64::consts::PI };
            let mut y1 =
                ray_integrator(&self.pot, self.lambda, angle, 0.0, canonical_data(self.parity.opposite()), self.tol);
            let mut order: Vec<usize> = (0..xs.len()).filter(|&i| (xs[i] >= 0.0) == positive).collect();
            order.sort_by(|&a, &b| xs[a].abs().total_cmp(&xs[b].abs()));
            for i in order {
                y1.advance_to(xs[i].abs())?;
                let [v, dv] = *y1.state();
                out[i] = v.norm() / dv.norm();
            }
        }
        Ok(out)
    }

    /// Stencil steps adapted to the pole distances; fails for samples too close to a pole.
    pub fn schwarzian_steps(&self, xs: &[f64]) -> Result<Vec<f64>> {
        let (lo, hi) = SCHWARZIAN_STEP_RANGE;
        xs.iter()
            .zip(self.pole_distances(xs)?)
            .map(|(&x, rho)| {
                if rho < SCHWARZIAN_POLE_GUARD {
                    Err(Error::PoleTooClose { x, distance: rho })
                } else {
                    Ok((rho / 100.0).clamp(lo, hi))
                }
            })
            .collect()
    }
}

/// Schwarzian check for `f = y / y₁` at the eigenvalue `λ`.
pub fn schwarzian_residual(pot: &PolynomialPotential, lambda: Complex64, xs: &[f64], tol: f64) -> Result<f64> {
    let ratio = EigenfunctionRatio::new(pot, lambda, tol, 1e-8)?;
    let steps = ratio.schwarzian_steps(xs)?;
    schwarzian_residual_of(|pts| ratio.values_on_axis(pts, 0.0), pot, lambda, xs, &steps)
}
