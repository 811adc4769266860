//! Spectra of the complex quartic oscillator `-y'' + (x^4 + a x^2) y = λ y`.
//!
//! The crate is organized in four layers:
//!
//! * [`spectral`] evaluates spectral determinants by renormalized complex ODE
//!   integration and locates eigenvalues, asymptotic values and zero counts.
//! * [`scaling`] maps the two-parameter family `-y'' + (b x^4 + a x^2) y` onto
//!   the one-parameter quartic family.
//! * [`continuation`] tracks eigenvalues along paths in the `a`-plane, finds
//!   branch points and computes loop monodromy permutations.
//! * [`trees`] is the combinatorial side: tree/graph labels of eigenfunction
//!   ratios, the `s0`/`s∞` actions, free-group rewriting and orbits.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod continuation;
mod error;
pub mod scaling;
mod serde_complex;
pub mod spectral;
pub mod trees;

pub use error::{Error, Result};
pub use num_complex::Complex64;

use serde::{Deserialize, Serialize};

/// Parity of an eigenfunction of an even potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Parity of the `n`-th level of a real even potential.
    pub fn of_level(n: usize) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn opposite(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// Level indices `0..=n_max` carrying this parity.
    pub fn levels(self, n_max: usize) -> impl Iterator<Item = usize> {
        let first = match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        };
        (first..=n_max).step_by(2)
    }
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Parity::Even => f.write_str("even"),
            Parity::Odd => f.write_str("odd"),
        }
    }
}
