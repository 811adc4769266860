use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("direction {angle} lies on the boundary ray between Stokes sectors {left} and {right}")]
    SectorBoundary { angle: f64, left: usize, right: usize },

    #[error("step size underflow at x = {x}")]
    StepUnderflow { x: Complex64 },

    #[error("WKB start point x = {x} is not in the asymptotic region (indicator {indicator:.3e})")]
    WkbInvalid { x: f64, indicator: f64 },

    #[error("Newton iteration did not converge from {start} after {iterations} iterations")]
    NewtonDiverged { start: Complex64, iterations: usize },

    #[error("{value} is not an eigenvalue (relative residual {residual:.3e})")]
    NotAnEigenvalue { value: Complex64, residual: f64 },

    #[error("determinant vanishes near the contour (min relative modulus {min_modulus:.3e}); perturb the radius")]
    ContourHitsZero { min_modulus: f64 },

    #[error("limit along the ray at angle {angle} did not converge up to radius {radius}")]
    RayNotConverged { angle: f64, radius: f64 },

    #[error("sample x = {x} is within {distance:.3e} of a pole")]
    PoleTooClose { x: f64, distance: f64 },

    #[error("zero count did not stabilize under grid refinement ({coarse} vs {fine})")]
    GridResolution { coarse: usize, fine: usize },

    #[error("continuation failed at t = {t} (alpha = {alpha}): {reason}")]
    Continuation { t: f64, alpha: Complex64, reason: String },

    #[error("monodromy cycle did not close within {traversals} traversals")]
    CycleNotClosed { traversals: usize },

    #[error("no table row applies: {0}")]
    OutOfTable(String),

    #[error("origin class of {0} is not determined")]
    Unclassified(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}
