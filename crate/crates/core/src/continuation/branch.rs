use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::monodromy::{labelled_eigenvalues, loop_permutation, MonodromyPermutation, BUFFER_LEVELS};
use super::path::PathSpec;
use super::track::{track_labels, TrackControls};
use crate::spectral::{real_anchor, real_zeros, Determinant, PolynomialPotential, SpectrumSettings};
use crate::{Error, Parity, Result};

/// Closed rectangle `[re_min, re_max] × [im_min, im_max]` in the `α`-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterBox {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl ParameterBox {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let b = Self {
            re_min,
            re_max,
            im_min,
            im_max,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.re_min, self.re_max, self.im_min, self.im_max].iter().all(|v| v.is_finite());
        if !finite || self.re_min >= self.re_max || self.im_min >= self.im_max {
            return Err(Error::InvalidInput(format!("degenerate or unbounded box {self:?}")));
        }
        Ok(())
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let slack = 1e-9 * (1.0 + z.norm());
        z.re >= self.re_min - slack && z.re <= self.re_max + slack && z.im >= self.im_min - slack && z.im <= self.im_max + slack
    }

    /// Node `(i, j)` of a grid with `cells` cells per side.
    fn node(&self, i: usize, j: usize, cells: usize) -> Complex64 {
        let s = cells as f64;
        Complex64::new(
            self.re_min + (self.re_max - self.re_min) * i as f64 / s,
            self.im_min + (self.im_max - self.im_min) * j as f64 / s,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchResiduals {
    /// `|F| / |(y(0), y'(0))|`.
    pub value: f64,
    /// `|∂F/∂λ| / |(y(0), y'(0))|`.
    pub slope: f64,
}

/// A double zero `F(α*, λ*) = ∂F/∂λ(α*, λ*) = 0` of the determinant of one parity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchPoint {
    #[serde(with = "crate::serde_complex")]
    pub alpha: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub lambda: Complex64,
    pub parity: Parity,
    /// The two labels that merge, as seen from the real anchor along a straight segment.
    pub labels: [usize; 2],
    /// Number of sheets joined at the point, confirmed by loop traversal.
    pub order: usize,
    pub residuals: BranchResiduals,
    /// Radius of the loop used to confirm the order.
    pub loop_radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchControls {
    pub track: TrackControls,
    /// Required relative size of both `F` and `∂F/∂λ` at an accepted point.
    pub residual_tol: f64,
    pub max_iterations: usize,
    /// A grid node seeds a search when its closest pair is nearer than this fraction of the mean gap.
    pub seed_fraction: f64,
    /// Points closer than `merge_radius · (1 + |α*|)` are merged.
    pub merge_radius: f64,
    /// Largest radius of the confirmation loop.
    pub max_loop_radius: f64,
    pub loop_sides: usize,
}

impl Default for BranchControls {
    fn default() -> Self {
        Self {
            track: TrackControls::default(),
            residual_tol: 1e-8,
            max_iterations: 40,
            seed_fraction: 0.05,
            merge_radius: 1e-6,
            max_loop_radius: 0.1,
            loop_sides: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscardedSeed {
    #[serde(with = "crate::serde_complex")]
    pub alpha: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub lambda: Complex64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchScan {
    pub region: ParameterBox,
    pub parity: Parity,
    pub n_max: usize,
    pub grid: usize,
    pub seeds: usize,
    pub points: Vec<BranchPoint>,
    pub discarded: Vec<DiscardedSeed>,
}

/// `(F, ∂F/∂λ)` and the Jacobian in `(α, λ)`, on a common scale.
struct Linearization {
    value: Complex64,
    slope: Complex64,
    value_alpha: Complex64,
    value_lambda: Complex64,
    slope_alpha: Complex64,
    slope_lambda: Complex64,
    residuals: BranchResiduals,
}

fn linearize(alpha: Complex64, lambda: Complex64, parity: Parity, tol: f64) -> Result<Linearization> {
    let pot = PolynomialPotential::quartic(alpha);
    let x_start = Determinant::near(&pot, parity, tol, lambda)?.x_start();
    let jet_at = |a: Complex64| Determinant::with_start(&PolynomialPotential::quartic(a), parity, tol, x_start)?.jet(lambda);
    let centre = jet_at(alpha)?;
    // The α-derivatives are central differences; λ-derivatives come from the variational equations.
    let h = 1e-6 * (1.0 + alpha.norm());
    let plus = jet_at(alpha + h)?;
    let minus = jet_at(alpha - h)?;
    let sp = (plus.exponent - centre.exponent).exp();
    let sm = (minus.exponent - centre.exponent).exp();
    Ok(Linearization {
        value: centre.value,
        slope: centre.first,
        value_alpha: (plus.value * sp - minus.value * sm) / (2.0 * h),
        value_lambda: centre.first,
        slope_alpha: (plus.first * sp - minus.first * sm) / (2.0 * h),
        slope_lambda: centre.second,
        residuals: BranchResiduals {
            value: centre.relative_residual(),
            slope: centre.relative_slope(),
        },
    })
}

/// Two-variable Newton iteration for a double zero of the determinant.
pub fn newton_branch_point(
    alpha: Complex64,
    lambda: Complex64,
    parity: Parity,
    controls: &BranchControls,
) -> Result<(Complex64, Complex64, BranchResiduals)> {
    let (mut a, mut l) = (alpha, lambda);
    for _ in 0..controls.max_iterations {
        let lin = linearize(a, l, parity, controls.track.tol)?;
        let det = lin.value_alpha * lin.slope_lambda - lin.value_lambda * lin.slope_alpha;
        if det.norm() == 0.0 || !det.norm().is_finite() {
            break;
        }
        let da = -(lin.value * lin.slope_lambda - lin.value_lambda * lin.slope) / det;
        let dl = -(lin.value_alpha * lin.slope - lin.slope_alpha * lin.value) / det;
        // Damp long steps so a poor seed cannot jump across the plane.
        let damping = 1f64.min(1.0 / da.norm().max(dl.norm()));
        a += da * damping;
        l += dl * damping;
        if !a.norm().is_finite() || !l.norm().is_finite() {
            break;
        }
        if da.norm() <= 1e-12 * (1.0 + a.norm()) && dl.norm() <= 1e-12 * (1.0 + l.norm()) {
            let residuals = linearize(a, l, parity, controls.track.tol)?.residuals;
            if residuals.value <= controls.residual_tol && residuals.slope <= controls.residual_tol {
                return Ok((a, l, residuals));
            }
            break;
        }
    }
    Err(Error::NewtonDiverged {
        start: alpha,
        iterations: controls.max_iterations,
    })
}

/// Closest pair among `values`: (distance, midpoint).
fn closest_pair(values: &[Complex64]) -> Option<(f64, Complex64)> {
    let mut best: Option<(f64, Complex64)> = None;
    for i in 0..values.len() {
        for j in 0..i {
            let d = (values[i] - values[j]).norm();
            if best.is_none_or(|(b, _)| d < b) {
                best = Some((d, 0.5 * (values[i] + values[j])));
            }
        }
    }
    best
}

fn mean_nearest_gap(values: &[Complex64]) -> f64 {
    let total: f64 = values
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
        .sum();
    total / values.len() as f64
}

enum NodeScan {
    /// Closest-pair ratio and midpoint.
    Completed { ratio: f64, midpoint: Complex64 },
    Aborted { alpha: Complex64, midpoint: Complex64 },
}

struct Anchors {
    settings: SpectrumSettings,
    cache: HashMap<u64, Vec<Complex64>>,
}

impl Anchors {
    fn starts(&mut self, anchor: &PolynomialPotential, parity: Parity, count: usize) -> Result<Vec<Complex64>> {
        let alpha = anchor.quartic_alpha().expect("quartic anchor");
        let key = alpha.re.to_bits();
        if let Some(v) = self.cache.get(&key) {
            return Ok(v.clone());
        }
        let v: Vec<Complex64> = real_zeros(anchor, parity, count, &self.settings)?
            .into_iter()
            .map(|r| r.value)
            .collect();
        self.cache.insert(key, v.clone());
        Ok(v)
    }
}

fn scan_node(alpha: Complex64, parity: Parity, count: usize, anchors: &mut Anchors, controls: &TrackControls) -> Result<NodeScan> {
    let pot = PolynomialPotential::quartic(alpha);
    let anchor = real_anchor(&pot)?;
    let starts = anchors.starts(&anchor, parity, count)?;
    let a0 = anchor.quartic_alpha().expect("quartic anchor");
    let traces = track_labels(&PathSpec::segment(a0, alpha), &starts, parity, controls)?;
    let values: Vec<Complex64> = traces.iter().map(|t| t.end_lambda()).collect();
    let (d, midpoint) = closest_pair(&values).expect("at least two tracked values");
    if traces[0].completed() {
        Ok(NodeScan::Completed {
            ratio: d / mean_nearest_gap(&values),
            midpoint,
        })
    } else {
        Ok(NodeScan::Aborted {
            alpha: traces[0].last().alpha,
            midpoint,
        })
    }
}

/// The two labels that merge at `(alpha, lambda)`, seen from `approach`, and their values there.
fn merging_labels(approach: Complex64, lambda: Complex64, parity: Parity, n_max: usize, controls: &TrackControls) -> Result<[usize; 2]> {
    let levels = labelled_eigenvalues(approach, parity, n_max + 2 * BUFFER_LEVELS, controls)?;
    let mut by_distance: Vec<(f64, usize)> = levels.iter().map(|(l, v)| ((v - lambda).norm(), *l)).collect();
    by_distance.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (d1, l1) = by_distance[1];
    let third = by_distance.get(2).map_or(f64::INFINITY, |x| x.0);
    if d1 >= 0.5 * third {
        return Err(Error::Unsupported(format!(
            "no isolated pair of tracked labels approaches lambda = {lambda}"
        )));
    }
    let (_, l0) = by_distance[0];
    let mut pair = [l0, l1];
    pair.sort_unstable();
    if pair[1] > n_max {
        return Err(Error::Unsupported(format!("labels {pair:?} exceed n_max = {n_max}")));
    }
    Ok(pair)
}

/// Outcome of traversing a loop around a branch point once and `order` times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RamificationCheck {
    pub order: usize,
    pub single: MonodromyPermutation,
    pub repeated: MonodromyPermutation,
}

/// Point on the loop of radius `radius` around `alpha` facing the real anchor.
fn loop_base(alpha: Complex64, radius: f64) -> Result<Complex64> {
    let anchor = real_anchor(&PolynomialPotential::quartic(alpha))?
        .quartic_alpha()
        .expect("quartic anchor");
    let dir = anchor - alpha;
    Ok(if dir.norm() > 0.0 {
        alpha + dir * (radius / dir.norm())
    } else {
        alpha + radius
    })
}

/// Cycle length of `label` under one loop around `alpha`, confirmed by traversing the loop that many times.
pub fn ramification_check(
    alpha: Complex64,
    radius: f64,
    label: usize,
    parity: Parity,
    n_max: usize,
    controls: &BranchControls,
) -> Result<RamificationCheck> {
    let base = loop_base(alpha, radius)?;
    let once = PathSpec::polygon_loop(alpha, base, controls.loop_sides, 1)?;
    let single = loop_permutation(&once, base, n_max, parity, &controls.track)?;
    if let Some(failure) = &single.failure {
        return Err(Error::Continuation {
            t: 0.0,
            alpha: base,
            reason: failure.clone(),
        });
    }
    let order = single.cycle_of(label)?.len();
    if order < 2 {
        return Err(Error::Unsupported(format!("the loop around {alpha} fixes label {label}")));
    }
    let k_fold = PathSpec::polygon_loop(alpha, base, controls.loop_sides, order as i32)?;
    let repeated = loop_permutation(&k_fold, base, n_max, parity, &controls.track)?;
    if !repeated.is_identity() {
        return Err(Error::CycleNotClosed { traversals: order });
    }
    Ok(RamificationCheck { order, single, repeated })
}

/// Order of the branch point: the cycle length of its labels, confirmed by a `k`-fold loop.
pub fn ramification_order(bp: &BranchPoint, n_max: usize, controls: &BranchControls) -> Result<usize> {
    if bp.residuals.value > controls.residual_tol || bp.residuals.slope > controls.residual_tol {
        return Err(Error::InvalidInput("branch point residuals exceed the tolerance".into()));
    }
    Ok(ramification_check(bp.alpha, bp.loop_radius, bp.labels[0], bp.parity, n_max, controls)?.order)
}

/// Branch points of the given parity inside the box that join labels `<= n_max`.
///
/// Seeds come from a `grid × grid` cell scan: nodes where the closest pair of
/// continued eigenvalues is nearer than the seed fraction of the mean gap, nodes
/// where that ratio is a local minimum, and nodes whose anchor segment aborted.
pub fn find_branch_points(
    region: &ParameterBox,
    parity: Parity,
    n_max: usize,
    grid: usize,
    controls: &BranchControls,
) -> Result<BranchScan> {
    region.validate()?;
    if grid < 8 {
        return Err(Error::InvalidInput(format!("grid must be at least 8, got {grid}")));
    }
    let count = parity.levels(n_max + 2 * BUFFER_LEVELS).count();
    let mut anchors = Anchors {
        settings: SpectrumSettings {
            tol: controls.track.tol,
            newton: controls.track.newton,
        },
        cache: HashMap::new(),
    };
    let side = grid + 1;
    let mut nodes = Vec::with_capacity(side * side);
    for j in 0..side {
        for i in 0..side {
            nodes.push(scan_node(region.node(i, j, grid), parity, count, &mut anchors, &controls.track)?);
        }
    }

    let mut seeds: Vec<(Complex64, Complex64)> = Vec::new();
    for j in 0..side {
        for i in 0..side {
            match nodes[j * side + i] {
                NodeScan::Aborted { alpha, midpoint } => seeds.push((alpha, midpoint)),
                NodeScan::Completed { ratio, midpoint } => {
                    let mut local_min = true;
                    for (di, dj) in [(-1i64, -1i64), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)] {
                        let (ni, nj) = (i as i64 + di, j as i64 + dj);
                        if ni < 0 || nj < 0 || ni >= side as i64 || nj >= side as i64 {
                            continue;
                        }
                        if let NodeScan::Completed { ratio: r, .. } = nodes[nj as usize * side + ni as usize] {
                            local_min &= ratio < r;
                        }
                    }
                    if ratio < controls.seed_fraction || local_min {
                        seeds.push((region.node(i, j, grid), midpoint));
                    }
                }
            }
        }
    }

    let mut located: Vec<(Complex64, Complex64, BranchResiduals)> = Vec::new();
    let mut discarded = Vec::new();
    for &(alpha, lambda) in &seeds {
        match newton_branch_point(alpha, lambda, parity, controls) {
            Ok((a, l, res)) => {
                if !region.contains(a) {
                    discarded.push(DiscardedSeed {
                        alpha,
                        lambda,
                        reason: format!("converged to {a} outside the box"),
                    });
                    continue;
                }
                let radius = controls.merge_radius * (1.0 + a.norm());
                let duplicate = located
                    .iter()
                    .any(|(b, m, _)| (b - a).norm() <= radius && (m - l).norm() <= radius * (1.0 + l.norm()));
                if !duplicate {
                    located.push((a, l, res));
                }
            }
            Err(e) => discarded.push(DiscardedSeed {
                alpha,
                lambda,
                reason: e.to_string(),
            }),
        }
    }

    let mut points = Vec::new();
    for (idx, &(alpha, lambda, residuals)) in located.iter().enumerate() {
        // Keep the loop clear of every other known branch point, including the mirror image.
        let mut clearance = located
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != idx)
            .map(|(_, (b, _, _))| (b - alpha).norm())
            .fold(f64::INFINITY, f64::min);
        if alpha.im != 0.0 {
            clearance = clearance.min(2.0 * alpha.im.abs());
        }
        let loop_radius = controls.max_loop_radius.min(0.25 * clearance);
        let confirmed = loop_base(alpha, loop_radius)
            .and_then(|approach| merging_labels(approach, lambda, parity, n_max, &controls.track))
            .and_then(|labels| {
                let check = ramification_check(alpha, loop_radius, labels[0], parity, n_max, controls)?;
                if !check.single.cycle_of(labels[0])?.contains(&labels[1]) {
                    return Err(Error::Unsupported(format!("labels {labels:?} are not exchanged by the loop")));
                }
                Ok((labels, check.order))
            });
        match confirmed {
            Ok((labels, order)) => points.push(BranchPoint {
                alpha,
                lambda,
                parity,
                labels,
                order,
                residuals,
                loop_radius,
            }),
            Err(e) => discarded.push(DiscardedSeed {
                alpha,
                lambda,
                reason: format!("located but not confirmed: {e}"),
            }),
        }
    }
    points.sort_by(|a, b| {
        (a.labels, a.alpha.norm())
            .partial_cmp(&(b.labels, b.alpha.norm()))
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(b.alpha.im.total_cmp(&a.alpha.im))
    });
    Ok(BranchScan {
        region: *region,
        parity,
        n_max,
        grid,
        seeds: seeds.len(),
        points,
        discarded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn newton_converges_to_a_double_zero() {
        let (a, l, res) =
            newton_branch_point(c(-4.0, 2.5), c(0.8, 3.2), Parity::Even, &BranchControls::default()).unwrap();
        assert!(res.value <= 1e-8 && res.slope <= 1e-8);
        // Conjugate seed gives the conjugate point.
        let (b, m, _) =
            newton_branch_point(c(-4.0, -2.5), c(0.8, -3.2), Parity::Even, &BranchControls::default()).unwrap();
        assert!((a - b.conj()).norm() < 1e-9 && (l - m.conj()).norm() < 1e-9);
    }

    #[test]
    fn box_validation() {
        assert!(ParameterBox::new(0.0, 0.0, -1.0, 1.0).is_err());
        assert!(ParameterBox::new(0.0, f64::INFINITY, -1.0, 1.0).is_err());
        let b = ParameterBox::new(-1.0, 1.0, -1.0, 1.0).unwrap();
        assert!(b.contains(c(1.0, -1.0)) && !b.contains(c(1.1, 0.0)));
    }

    #[test]
    fn closest_pair_midpoint() {
        let (d, m) = closest_pair(&[c(0.0, 0.0), c(3.0, 0.0), c(3.0, 1.0)]).unwrap();
        assert_eq!(d, 1.0);
        assert_eq!(m, c(3.0, 0.5));
    }
}
