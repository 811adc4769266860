//! Power-series integration of `y'' = (P(x) - λ) y` along the real axis.

use num_complex::Complex64;

/// Coefficients of `q(x0 + s)` given `q(x) = Σ c_k x^k`.
fn shift(coeffs: &[Complex64], x0: f64) -> Vec<Complex64> {
    let n = coeffs.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    // Binomial expansion term by term; degrees are small.
    for (k, c) in coeffs.iter().enumerate() {
        let mut binom = 1.0;
        for (j, o) in out.iter_mut().enumerate().take(k + 1) {
            *o += c * binom * x0.powi((k - j) as i32);
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
    }
    out
}

/// Integrates from `x0` with data `(y, y')` to `x1`, for `q = P - λ` given by its monomial coefficients.
///
/// Each step expands the solution to `terms` orders about the current point.
pub fn integrate(q: &[Complex64], x0: f64, y0: Complex64, dy0: Complex64, x1: f64, step: f64, terms: usize) -> (Complex64, Complex64) {
    let n_steps = ((x1 - x0).abs() / step).ceil().max(1.0) as usize;
    let h = (x1 - x0) / n_steps as f64;
    let (mut y, mut dy) = (y0, dy0);
    let mut c = vec![Complex64::new(0.0, 0.0); terms];
    for i in 0..n_steps {
        let x = x0 + h * i as f64;
        let qs = shift(q, x);
        c.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        c[0] = y;
        c[1] = dy;
        for k in 0..terms - 2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, qm) in qs.iter().enumerate().take(k + 1) {
                acc += qm * c[k - m];
            }
            c[k + 2] = acc / ((k + 2) * (k + 1)) as f64;
        }
        let mut ny = Complex64::new(0.0, 0.0);
        let mut ndy = Complex64::new(0.0, 0.0);
        for k in (0..terms).rev() {
            ny = ny * h + c[k];
            if k >= 1 {
                ndy = ndy * h + c[k] * k as f64;
            }
        }
        y = ny;
        dy = ndy;
    }
    (y, dy)
}

/// Monomial coefficients of `β x⁴ + α x² - λ`.
pub fn quartic_coeffs(alpha: Complex64, beta: f64, lambda: Complex64) -> Vec<Complex64> {
    vec![
        -lambda,
        Complex64::new(0.0, 0.0),
        alpha,
        Complex64::new(0.0, 0.0),
        Complex64::new(beta, 0.0),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_ground_state_is_gaussian() {
        // y = exp(-x²/2) solves y'' = (x² - 1) y.
        let q = vec![Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let (y, dy) = integrate(&q, 0.0, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), 3.0, 0.1, 40);
        let exact = (-4.5f64).exp();
        assert!((y.re - exact).abs() < 1e-12 * 1e3);
        assert!((dy.re + 3.0 * exact).abs() < 1e-12 * 1e3);
    }
}
