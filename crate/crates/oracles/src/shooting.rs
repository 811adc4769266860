//! Eigenvalues of `-y'' + (β x⁴ + x²) y = λ y` by shooting from the origin to a
//! Dirichlet wall placed where the true eigenfunction is negligible.

use num_complex::Complex64;

use crate::taylor;

/// Wall position: the WKB action `∫ √(V - λ)` beyond the turning point exceeds 40.
fn wall(beta: f64, lambda: f64) -> f64 {
    let v = |x: f64| beta * x.powi(4) + x * x;
    let mut x = 0.0;
    while v(x) < lambda {
        x += 0.01;
    }
    let mut action = 0.0;
    while action < 40.0 {
        action += 0.01 * (v(x) - lambda).max(0.0).sqrt();
        x += 0.01;
    }
    x
}

/// Value at the wall of the even (`parity = 0`) or odd solution started at the origin.
fn miss(beta: f64, lambda: f64, parity: usize, wall_at: f64) -> f64 {
    let q = taylor::quartic_coeffs(Complex64::new(1.0, 0.0), beta, Complex64::new(lambda, 0.0));
    let (y0, dy0) = if parity == 0 { (1.0, 0.0) } else { (0.0, 1.0) };
    let (y, _) = taylor::integrate(
        &q,
        0.0,
        Complex64::new(y0, 0.0),
        Complex64::new(dy0, 0.0),
        wall_at,
        0.05,
        60,
    );
    y.re
}

/// The `n`-th eigenvalue (`n` counts both parities) for real `β > 0`.
pub fn beta_form_level(beta: f64, n: usize) -> f64 {
    assert!(beta > 0.0, "shooting oracle needs beta > 0");
    let parity = n % 2;
    let target = n / 2;
    // Levels of one parity are separated by more than 1 for this potential.
    let step = 0.25;
    let mut found = 0;
    let mut lo = 0.0;
    let far = wall(beta, 4.0 * (n as f64 + 2.0) * (1.0 + beta.cbrt()) + 50.0);
    let mut f_lo = miss(beta, lo, parity, far);
    loop {
        let hi = lo + step;
        let f_hi = miss(beta, hi, parity, far);
        if f_lo.signum() != f_hi.signum() {
            if found == target {
                return refine(beta, parity, far, lo, hi, f_lo);
            }
            found += 1;
        }
        lo = hi;
        f_lo = f_hi;
    }
}

fn refine(beta: f64, parity: usize, far: f64, mut a: f64, mut b: f64, f_a: f64) -> f64 {
    let sign_a = f_a.signum();
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if miss(beta, mid, parity, far).signum() == sign_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}
