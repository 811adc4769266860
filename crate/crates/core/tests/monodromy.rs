use quartic_core::continuation::{
    continue_eigenvalue, find_branch_points, loop_permutation, newton_branch_point, parity_separation_check,
    ramification_check, BranchControls, ParameterBox, PathSpec, TrackControls,
};
use quartic_core::spectral::{eigenvalues_of_parity, PolynomialPotential, SpectrumSettings};
use quartic_core::{Complex64, Parity};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Double zero of the even determinant near `-4.2 ± 2.2i`, polished from a rough seed.
fn lowest_even_branch_point(sign: f64) -> (Complex64, Complex64) {
    let (a, l, res) = newton_branch_point(c(-4.0, 2.5 * sign), c(0.8, 3.2 * sign), Parity::Even, &BranchControls::default()).unwrap();
    assert!(res.value <= 1e-8 && res.slope <= 1e-8);
    (a, l)
}

fn loop_around(center: Complex64, radius: f64, turns: i32) -> (PathSpec, Complex64) {
    let base = center + c(radius, 0.0);
    (PathSpec::polygon_loop(center, base, 64, turns).unwrap(), base)
}

#[test]
fn loop_around_branch_point_swaps_the_merging_levels() {
    let (alpha, _) = lowest_even_branch_point(1.0);
    let controls = BranchControls::default();
    let check = ramification_check(alpha, 0.1, 0, Parity::Even, 4, &controls).unwrap();
    assert_eq!(check.order, 2);
    assert_eq!(check.single.mapping.as_deref(), Some(&[2, 0, 4][..]));
    assert!(check.repeated.is_identity());
}

#[test]
fn mirrored_branch_point_gives_the_same_transposition() {
    let (alpha, _) = lowest_even_branch_point(-1.0);
    let check = ramification_check(alpha, 0.1, 0, Parity::Even, 4, &BranchControls::default()).unwrap();
    // A transposition is its own inverse, so the mirrored loop acts identically.
    assert_eq!(check.single.mapping.as_deref(), Some(&[2, 0, 4][..]));
}

#[test]
fn odd_levels_ignore_even_branch_points() {
    let (alpha, _) = lowest_even_branch_point(1.0);
    let base = alpha + c(0.1, 0.0);
    let (path, _) = loop_around(alpha, 0.1, 1);
    let report = parity_separation_check(&[path], base, 5, &TrackControls::default()).unwrap();
    assert!(report.separated);
    let entry = &report.entries[0];
    assert_eq!(entry.even.mapping.as_deref(), Some(&[2, 0, 4][..]));
    assert!(entry.odd.is_identity(), "{:?}", entry.odd);
}

#[test]
fn loop_then_reverse_is_identity_and_composition_is_ordered() {
    let (alpha, _) = lowest_even_branch_point(1.0);
    let (once, base) = loop_around(alpha, 0.1, 1);
    let controls = TrackControls::default();
    let both = once.then(&once.reversed()).unwrap();
    assert!(loop_permutation(&both, base, 4, Parity::Even, &controls).unwrap().is_identity());

    let twice = PathSpec::polygon_loop(alpha, base, 64, 2).unwrap();
    let p1 = loop_permutation(&once, base, 4, Parity::Even, &controls).unwrap();
    let p2 = loop_permutation(&twice, base, 4, Parity::Even, &controls).unwrap();
    assert_eq!(p1.then(&p1).unwrap(), p2.mapping.unwrap());
}

#[test]
fn deformed_loop_gives_the_same_permutation() {
    let (alpha, _) = lowest_even_branch_point(1.0);
    let (circle, base) = loop_around(alpha, 0.1, 1);
    // A wider loop through the same base point, centred off the branch point.
    let wide = PathSpec::polygon_loop(alpha + c(-0.08, 0.03), base, 48, 1).unwrap();
    let controls = TrackControls::default();
    let a = loop_permutation(&circle, base, 4, Parity::Even, &controls).unwrap();
    let b = loop_permutation(&wide, base, 4, Parity::Even, &controls).unwrap();
    assert_eq!(a.mapping, b.mapping);
}

#[test]
fn contractible_loop_is_identity() {
    let (path, base) = loop_around(c(1.0, 0.0), 0.1, 1);
    let perm = loop_permutation(&path, base, 5, Parity::Odd, &TrackControls::default()).unwrap();
    assert!(perm.is_identity());
}

#[test]
fn conjugate_path_gives_conjugate_trace() {
    let settings = SpectrumSettings::default();
    let start = eigenvalues_of_parity(&PolynomialPotential::quartic(c(1.0, 0.0)), Parity::Even, 2, &settings).unwrap()[1].value;
    let path = PathSpec::polyline(vec![c(1.0, 0.0), c(0.0, 1.5), c(-2.0, 2.0)]).unwrap();
    let controls = TrackControls::default();
    let a = continue_eigenvalue(&path, start, Parity::Even, &controls).unwrap();
    let b = continue_eigenvalue(&path.conj(), start, Parity::Even, &controls).unwrap();
    assert!(a.completed() && b.completed());
    assert!((a.end_lambda() - b.end_lambda().conj()).norm() < 1e-9);
    assert!(a.samples.iter().all(|s| s.residual <= 1e-8));
}

#[test]
fn real_positive_box_has_no_branch_points() {
    let region = ParameterBox::new(0.5, 3.0, -0.5, 0.5).unwrap();
    let scan = find_branch_points(&region, Parity::Even, 4, 8, &BranchControls::default()).unwrap();
    assert!(scan.points.is_empty(), "{:?}", scan.points);
}
