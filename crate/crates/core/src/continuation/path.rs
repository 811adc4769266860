use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A path `t ∈ [0, 1] ↦ α(t)` in the parameter plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PathSpec {
    /// Piecewise linear through the waypoints, parametrized by arc length.
    Polyline {
        #[serde(with = "crate::serde_complex::vec")]
        points: Vec<Complex64>,
    },
    /// `center + radius · e^{i(start_angle + 2π turns t)}`.
    Circle {
        #[serde(with = "crate::serde_complex")]
        center: Complex64,
        radius: f64,
        turns: i32,
        start_angle: f64,
    },
}

impl PathSpec {
    pub fn polyline(points: Vec<Complex64>) -> Result<Self> {
        let path = PathSpec::Polyline { points };
        path.validate()?;
        Ok(path)
    }

    pub fn segment(from: Complex64, to: Complex64) -> Self {
        PathSpec::Polyline { points: vec![from, to] }
    }

    pub fn circle(center: Complex64, radius: f64, turns: i32, start_angle: f64) -> Result<Self> {
        let path = PathSpec::Circle {
            center,
            radius,
            turns,
            start_angle,
        };
        path.validate()?;
        Ok(path)
    }

    /// Closed polygonal loop around `center` through `based_at`, approximating a circle by `sides` chords.
    pub fn polygon_loop(center: Complex64, based_at: Complex64, sides: usize, turns: i32) -> Result<Self> {
        let offset = based_at - center;
        if offset.norm() == 0.0 || sides < 3 || turns == 0 {
            return Err(Error::InvalidInput("degenerate polygonal loop".into()));
        }
        let total = sides * turns.unsigned_abs() as usize;
        let sign = f64::from(turns.signum());
        let points = (0..=total)
            .map(|i| {
                if i % sides == 0 {
                    based_at
                } else {
                    center + offset * Complex64::from_polar(1.0, sign * TAU * i as f64 / sides as f64)
                }
            })
            .collect();
        Ok(PathSpec::Polyline { points })
    }

    /// Lasso: out along the segment from `base` to the circle around `center`,
    /// `turns` times around it, then back. The loop is a polygon with `sides` chords per turn.
    pub fn lasso(base: Complex64, center: Complex64, radius: f64, turns: i32, sides: usize) -> Result<Self> {
        let dir = base - center;
        if dir.norm() <= radius || radius <= 0.0 {
            return Err(Error::InvalidInput("lasso base must lie outside its circle".into()));
        }
        let touch = center + dir * (radius / dir.norm());
        let PathSpec::Polyline { points: ring } = Self::polygon_loop(center, touch, sides, turns)? else {
            unreachable!()
        };
        let mut points = vec![base];
        points.extend(ring);
        points.push(base);
        Ok(PathSpec::Polyline { points })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PathSpec::Polyline { points } => {
                if points.len() < 2 {
                    return Err(Error::InvalidInput("a polyline needs at least two points".into()));
                }
                if points.iter().any(|p| !p.re.is_finite() || !p.im.is_finite()) {
                    return Err(Error::InvalidInput("non-finite polyline point".into()));
                }
            }
            PathSpec::Circle {
                center,
                radius,
                turns,
                start_angle,
            } => {
                if !(*radius > 0.0) || !radius.is_finite() {
                    return Err(Error::InvalidInput(format!("circle radius must be positive, got {radius}")));
                }
                if *turns == 0 {
                    return Err(Error::InvalidInput("circle needs a nonzero number of turns".into()));
                }
                if !center.re.is_finite() || !center.im.is_finite() || !start_angle.is_finite() {
                    return Err(Error::InvalidInput("non-finite circle data".into()));
                }
            }
        }
        Ok(())
    }

    pub fn length(&self) -> f64 {
        match self {
            PathSpec::Polyline { points } => points.windows(2).map(|w| (w[1] - w[0]).norm()).sum(),
            PathSpec::Circle { radius, turns, .. } => TAU * radius * f64::from(turns.unsigned_abs()),
        }
    }

    pub fn at(&self, t: f64) -> Complex64 {
        let t = t.clamp(0.0, 1.0);
        match self {
            PathSpec::Polyline { points } => {
                let total = self.length();
                if total == 0.0 {
                    return points[0];
                }
                let mut remaining = t * total;
                for w in points.windows(2) {
                    let piece = (w[1] - w[0]).norm();
                    if remaining <= piece && piece > 0.0 {
                        return w[0] + (w[1] - w[0]) * (remaining / piece);
                    }
                    remaining -= piece;
                }
                *points.last().expect("validated polyline")
            }
            PathSpec::Circle {
                center,
                radius,
                turns,
                start_angle,
            } => *center + Complex64::from_polar(*radius, start_angle + TAU * f64::from(*turns) * t),
        }
    }

    pub fn start(&self) -> Complex64 {
        self.at(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.at(1.0)
    }

    pub fn is_closed(&self) -> bool {
        (self.end() - self.start()).norm() <= 1e-12 * (1.0 + self.start().norm())
    }

    pub fn reversed(&self) -> Self {
        match self {
            PathSpec::Polyline { points } => PathSpec::Polyline {
                points: points.iter().rev().copied().collect(),
            },
            PathSpec::Circle {
                center,
                radius,
                turns,
                start_angle,
            } => PathSpec::Circle {
                center: *center,
                radius: *radius,
                turns: -turns,
                start_angle: start_angle + TAU * f64::from(*turns),
            },
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            PathSpec::Polyline { points } => PathSpec::Polyline {
                points: points.iter().map(|p| p.conj()).collect(),
            },
            PathSpec::Circle {
                center,
                radius,
                turns,
                start_angle,
            } => PathSpec::Circle {
                center: center.conj(),
                radius: *radius,
                turns: -turns,
                start_angle: -start_angle,
            },
        }
    }

    /// Polyline approximation; circles get 64 chords per turn.
    pub fn to_polyline(&self) -> Vec<Complex64> {
        match self {
            PathSpec::Polyline { points } => points.clone(),
            PathSpec::Circle { turns, .. } => {
                let n = 64 * turns.unsigned_abs() as usize;
                (0..=n).map(|i| self.at(i as f64 / n as f64)).collect()
            }
        }
    }

    /// This path followed by `next`; fails unless `next` starts where this one ends.
    pub fn then(&self, next: &PathSpec) -> Result<Self> {
        let gap = (next.start() - self.end()).norm();
        if gap > 1e-9 * (1.0 + self.end().norm()) {
            return Err(Error::InvalidInput(format!(
                "paths do not connect: {} vs {}",
                self.end(),
                next.start()
            )));
        }
        let mut points = self.to_polyline();
        points.extend(next.to_polyline().into_iter().skip(1));
        Ok(PathSpec::Polyline { points })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn polyline_is_arc_length_parametrized() {
        let p = PathSpec::polyline(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 3.0)]).unwrap();
        assert_eq!(p.length(), 4.0);
        assert!((p.at(0.25) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((p.at(0.5) - c(1.0, 1.0)).norm() < 1e-15);
        assert!((p.reversed().at(0.25) - c(1.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn circle_endpoints_and_reversal() {
        let p = PathSpec::circle(c(1.0, 0.0), 0.5, 2, 0.3).unwrap();
        assert!(p.is_closed());
        let r = p.reversed();
        for t in [0.0, 0.2, 0.7] {
            assert!((r.at(t) - p.at(1.0 - t)).norm() < 1e-12);
        }
        assert!(PathSpec::circle(c(0.0, 0.0), 0.0, 1, 0.0).is_err());
        assert!(PathSpec::circle(c(0.0, 0.0), 1.0, 0, 0.0).is_err());
    }

    #[test]
    fn lasso_is_closed_and_avoids_center() {
        let p = PathSpec::lasso(c(1.0, 0.0), c(-2.0, 2.0), 0.3, 1, 64).unwrap();
        assert!(p.is_closed());
        let pts = p.to_polyline();
        assert!(pts.iter().all(|z| (z - c(-2.0, 2.0)).norm() > 0.29));
    }

    #[test]
    fn conjugate_circle_matches_pointwise() {
        let p = PathSpec::circle(c(-1.0, 2.0), 0.5, 1, 0.4).unwrap();
        let q = p.conj();
        for t in [0.0, 0.3, 0.9] {
            assert!((q.at(t) - p.at(t).conj()).norm() < 1e-12);
        }
    }
}
