//! Spectral determinants of `-y'' + P(z) y = λ y` with decay on both ends of the
//! real axis, and the quantities built from them.

mod counting;
mod determinant;
mod dop853;
mod eigen;
mod integrate;
mod ordering;
mod potential;
mod ratio;

pub use counting::{count_eigenvalues_in_disk, real_zero_count, MAX_ZERO_COUNT_LEVEL};
pub use determinant::{
    spectral_determinant, wronskian_determinant, Determinant, DeterminantValue, Evaluation, Jet, WronskianValue,
};
pub use dop853::{Dop853, RENORM_CEILING};
pub use integrate::{
    dominance_radius, integrate_subdominant, stokes_sector_of, wkb_indicator, wkb_start, ScaledSolution, DEFAULT_TOL,
};
pub use eigen::{
    eigenvalues_at, eigenvalues_of_parity, newton_eigenvalue, newton_on, real_anchor, real_zeros, Eigenvalue,
    NewtonRoot, NewtonSettings, SpectrumSettings,
};
pub use ordering::{
    disk_samples, modulus_ordering_threshold, modulus_ordering_threshold_at, ordering_threshold_at,
    ModulusOrderingReport, MODULUS_MARGIN,
};
pub use potential::PolynomialPotential;
pub use ratio::{
    asymptotic_values, asymptotic_values_of, chordal_distance, schwarzian_from_stencil, schwarzian_residual,
    schwarzian_residual_of, AsymptoticValue, AsymptoticValueSet, EigenfunctionRatio, SCHWARZIAN_POLE_GUARD, SCHWARZIAN_STEP_RANGE,
};
