//! Matrix of `-d²/dx² + β x⁴ + α x²` in a harmonic-oscillator basis.

use nalgebra::{DMatrix, Schur, SymmetricEigen};
use num_complex::Complex64;

/// Basis setup: `size` basis functions of frequency `omega`, split by parity.
#[derive(Debug, Clone, Copy)]
pub struct HermiteBasis {
    pub size: usize,
    pub omega: f64,
}

impl Default for HermiteBasis {
    fn default() -> Self {
        Self { size: 240, omega: 3.0 }
    }
}

fn position_matrix(n: usize, omega: f64) -> DMatrix<f64> {
    let mut x = DMatrix::zeros(n, n);
    for k in 0..n - 1 {
        let v = ((k + 1) as f64 / (2.0 * omega)).sqrt();
        x[(k, k + 1)] = v;
        x[(k + 1, k)] = v;
    }
    x
}

/// Hamiltonian restricted to basis states of one parity (`parity = 0` even, `1` odd).
fn hamiltonian(alpha: Complex64, beta: f64, basis: HermiteBasis, parity: usize) -> DMatrix<Complex64> {
    let full = basis.size + 4;
    let x = position_matrix(full, basis.omega);
    let x2 = &x * &x;
    let x4 = &x2 * &x2;
    let idx: Vec<usize> = (parity..basis.size).step_by(2).collect();
    let w = basis.omega;
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| {
        let (a, b) = (idx[i], idx[j]);
        let mut h = Complex64::new(beta * x4[(a, b)], 0.0) + (alpha - w * w) * x2[(a, b)];
        if a == b {
            h += w * (2 * a + 1) as f64;
        }
        h
    })
}

fn sorted_eigenvalues(h: DMatrix<Complex64>) -> Vec<Complex64> {
    if h.iter().all(|v| v.im == 0.0) {
        // Real symmetric: the symmetric solver is markedly more accurate for low levels.
        let real = h.map(|v| v.re);
        let mut ev: Vec<f64> = SymmetricEigen::new(real).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        return ev.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    }
    let schur = Schur::new(h);
    let (_, t) = schur.unpack();
    let mut ev: Vec<Complex64> = (0..t.nrows()).map(|i| t[(i, i)]).collect();
    ev.sort_by(|a, b| a.re.total_cmp(&b.re));
    ev
}

/// The `count` lowest eigenvalues of one parity, sorted by real part.
///
/// For complex `alpha` the ordering by real part is only a convention; it matches
/// level order when the spectrum stays close to the real one.
pub fn parity_eigenvalues(alpha: Complex64, beta: f64, parity: usize, count: usize, basis: HermiteBasis) -> Vec<Complex64> {
    let mut ev = sorted_eigenvalues(hamiltonian(alpha, beta, basis, parity));
    ev.truncate(count);
    ev
}

/// Levels `0..=n_max` of `-y'' + (x⁴ + α x²) y = λ y` for real `α`, interleaving the parities.
pub fn quartic_levels(alpha: f64, n_max: usize, basis: HermiteBasis) -> Vec<f64> {
    let per = n_max / 2 + 1;
    let even = parity_eigenvalues(Complex64::new(alpha, 0.0), 1.0, 0, per, basis);
    let odd = parity_eigenvalues(Complex64::new(alpha, 0.0), 1.0, 1, per, basis);
    (0..=n_max)
        .map(|n| if n % 2 == 0 { even[n / 2].re } else { odd[n / 2].re })
        .collect()
}
