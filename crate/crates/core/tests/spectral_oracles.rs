use quartic_core::scaling::beta_form_eigenvalues;
use quartic_core::spectral::{
    asymptotic_values, eigenvalues_at, eigenvalues_of_parity, integrate_subdominant, real_zero_count,
    schwarzian_residual, Determinant, PolynomialPotential, SpectrumSettings, DEFAULT_TOL,
};
use quartic_core::{Complex64, Parity};
use quartic_oracles::hermite::{parity_eigenvalues, quartic_levels, HermiteBasis};
use quartic_oracles::{shooting, taylor};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn subdominant_solution_matches_power_series() {
    for (alpha, lambda) in [(c(0.0, 0.0), c(1.0, 0.0)), (c(1.0, 0.5), c(2.0, -1.0)), (c(-2.0, 0.0), c(3.5, 0.2))] {
        let pot = PolynomialPotential::quartic(alpha);
        let x_start = Determinant::new(&pot, Parity::Even, DEFAULT_TOL, lambda.norm()).unwrap().x_start();
        let start = integrate_subdominant(&pot, lambda, x_start, x_start, DEFAULT_TOL).unwrap();
        let end = integrate_subdominant(&pot, lambda, x_start, 0.5, DEFAULT_TOL).unwrap();
        let q = taylor::quartic_coeffs(alpha, 1.0, lambda);
        let (y, dy) = taylor::integrate(&q, x_start, start.y, start.dy, 0.5, 0.02, 40);
        let scale = (end.log_scale - start.log_scale).exp();
        let norm = y.norm().hypot(dy.norm());
        assert!((end.y * scale - y).norm() <= 1e-9 * norm, "alpha {alpha}: {} vs {y}", end.y * scale);
        assert!((end.dy * scale - dy).norm() <= 1e-9 * norm);
    }
}

#[test]
fn real_levels_match_matrix_oracle() {
    let settings = SpectrumSettings::default();
    for alpha in [0.0, 1.0, -1.0] {
        let oracle = quartic_levels(alpha, 10, HermiteBasis::default());
        let levels = eigenvalues_at(&PolynomialPotential::quartic(c(alpha, 0.0)), 10, &settings).unwrap();
        for (ev, expected) in levels.iter().zip(&oracle) {
            assert!((ev.value - expected).norm() <= 1e-8, "alpha {alpha}, n {}: {} vs {expected}", ev.index, ev.value);
            assert!(ev.value.im == 0.0);
        }
    }
}

#[test]
fn complex_levels_match_matrix_oracle() {
    // Close to the real axis the continued labels agree with ordering by real part.
    let alpha = c(1.0, 0.3);
    let settings = SpectrumSettings::default();
    let pot = PolynomialPotential::quartic(alpha);
    for (parity, p) in [(Parity::Even, 0), (Parity::Odd, 1)] {
        let oracle = parity_eigenvalues(alpha, 1.0, p, 3, HermiteBasis::default());
        let levels = eigenvalues_of_parity(&pot, parity, 5, &settings).unwrap();
        for (ev, expected) in levels.iter().zip(&oracle) {
            assert!((ev.value - expected).norm() <= 1e-7, "{} vs {expected}", ev.value);
        }
    }
}

#[test]
fn conjugate_alpha_gives_conjugate_levels() {
    let settings = SpectrumSettings::default();
    let a = eigenvalues_at(&PolynomialPotential::quartic(c(-1.5, 2.0)), 5, &settings).unwrap();
    let b = eigenvalues_at(&PolynomialPotential::quartic(c(-1.5, -2.0)), 5, &settings).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x.value - y.value.conj()).norm() <= 1e-9);
    }
}

#[test]
fn large_alpha_approaches_harmonic_levels() {
    // First-order perturbation of the oscillator with frequency √α by x⁴.
    let alpha = 100.0f64;
    let levels = eigenvalues_at(&PolynomialPotential::quartic(c(alpha, 0.0)), 4, &SpectrumSettings::default()).unwrap();
    for ev in &levels {
        let n = ev.index as f64;
        let expected = alpha.sqrt() * (2.0 * n + 1.0) + 0.75 * (2.0 * n * n + 2.0 * n + 1.0) / alpha;
        assert!((ev.value.re - expected).abs() < 1e-3 * expected, "n {n}: {} vs {expected}", ev.value);
    }
}

#[test]
fn levels_interlace_by_parity() {
    let levels = eigenvalues_at(&PolynomialPotential::quartic(c(-2.0, 0.0)), 10, &SpectrumSettings::default()).unwrap();
    for w in levels.windows(2) {
        assert!(w[0].value.re < w[1].value.re);
        assert_ne!(w[0].parity, w[1].parity);
    }
}

#[test]
fn eigenvalues_depend_holomorphically_on_alpha() {
    // Cauchy-Riemann: the derivative along Re α equals -i times the derivative along Im α.
    let settings = SpectrumSettings::default();
    let alpha = c(0.5, 0.7);
    let h = 1e-4;
    let level = |a: Complex64| eigenvalues_of_parity(&PolynomialPotential::quartic(a), Parity::Even, 2, &settings).unwrap();
    let (xp, xm, yp, ym) = (level(alpha + h), level(alpha - h), level(alpha + c(0.0, h)), level(alpha - c(0.0, h)));
    for i in 0..2 {
        let dx = (xp[i].value - xm[i].value) / (2.0 * h);
        let dy = (yp[i].value - ym[i].value) / (2.0 * h);
        assert!((dx + c(0.0, 1.0) * dy).norm() < 1e-6 * dx.norm(), "level {i}: {dx} vs {dy}");
    }
}

#[test]
fn beta_form_scaling_matches_direct_shooting() {
    let settings = SpectrumSettings::default();
    for beta in [0.5, 2.0, 5.0] {
        let scaled = beta_form_eigenvalues(c(beta, 0.0), 6, &settings).unwrap();
        for ev in &scaled {
            let direct = shooting::beta_form_level(beta, ev.index);
            assert!((ev.value.re - direct).abs() <= 1e-8 * direct.abs(), "beta {beta}, n {}: {} vs {direct}", ev.index, ev.value);
            assert!(ev.value.im.abs() <= 1e-12 * direct.abs());
        }
    }
}

#[test]
fn eigenfunctions_have_n_real_zeros() {
    let settings = SpectrumSettings::default();
    for alpha in [-2.0, 0.0, 1.0] {
        for n in 0..=8 {
            assert_eq!(real_zero_count(alpha, n, &settings).unwrap(), n, "alpha {alpha}");
        }
    }
}

#[test]
fn asymptotic_values_of_real_problem_are_mirrored() {
    let settings = SpectrumSettings::default();
    let pot = PolynomialPotential::quartic(c(1.0, 0.0));
    for ev in eigenvalues_at(&pot, 4, &settings).unwrap() {
        let set = asymptotic_values(&pot, ev.value, DEFAULT_TOL).unwrap();
        let (c1, c2) = (set.c1().finite().unwrap(), set.c2().finite().unwrap());
        assert!((c2 + c1.conj()).norm() <= 1e-6 * (1.0 + c1.norm()), "n {}: {c1} {c2}", ev.index);
        assert_eq!(set.parity, ev.parity);
    }
}

#[test]
fn ratio_satisfies_schwarzian_equation() {
    let settings = SpectrumSettings::default();
    let xs: Vec<f64> = (0..10).map(|i| 0.25 + 0.1 * i as f64).collect();
    let pot = PolynomialPotential::quartic(c(0.0, 0.0));
    let ground = eigenvalues_at(&pot, 0, &settings).unwrap()[0].value;
    assert!(schwarzian_residual(&pot, ground, &xs, DEFAULT_TOL).unwrap() < 1e-6);
}
