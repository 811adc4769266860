//! Reference computations that share no code with `quartic-core`.
//!
//! Each oracle solves the same eigenvalue problems by a different method:
//! diagonalization in a harmonic-oscillator basis, Taylor-series integration,
//! and direct shooting with a Dirichlet wall far out.

pub mod hermite;
pub mod shooting;
pub mod taylor;
