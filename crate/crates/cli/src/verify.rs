//! Acceptance checks with pinned tolerances, shared by `quartic verify` and the acceptance test target.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use quartic_core::continuation::{
    find_branch_points, parity_separation_check, ramification_check, BranchControls, ParameterBox,
};
use quartic_core::scaling::beta_form_eigenvalues;
use quartic_core::spectral::{
    asymptotic_values, eigenvalues_at, modulus_ordering_threshold, real_zero_count, schwarzian_residual,
    EigenfunctionRatio, PolynomialPotential, SpectrumSettings, DEFAULT_TOL,
};
use quartic_core::trees::{
    act, act_word, bounded_states, braid_rewrite_into, level_to_tree, orbit, Family, Fiber, Letter, OriginClass,
    QMove, SMove, TreeState,
};
use quartic_core::{Complex64, Parity};
use quartic_oracles::hermite::{quartic_levels, HermiteBasis};
use quartic_oracles::shooting;
use serde::Serialize;

/// Relative agreement of the scaled spectrum with direct shooting of the beta-form.
pub const SCALING_REL_TOL: f64 = 1e-8;
pub const SCALING_BETAS: [f64; 3] = [0.5, 2.0, 5.0];
pub const SCALING_N_MAX: usize = 6;
pub const SCALING_BUDGET: Duration = Duration::from_secs(120);

/// Absolute agreement with the Hermite-basis diagonalization.
pub const ORACLE_TOL: f64 = 1e-8;
pub const ORACLE_ALPHAS: [f64; 3] = [0.0, 1.0, -1.0];
pub const ORACLE_N_MAX: usize = 10;
pub const ORACLE_BASIS: usize = 240;

pub const ZERO_COUNT_ALPHAS: [f64; 3] = [-2.0, 0.0, 1.0];
pub const ZERO_COUNT_N_MAX: usize = 8;

pub const SCHWARZIAN_TOL: f64 = 1e-6;
pub const SCHWARZIAN_ALPHAS: [f64; 2] = [0.0, 1.0];
pub const SCHWARZIAN_SAMPLES: usize = 10;
/// Samples start evenly spaced on this interval and are nudged away from poles.
pub const SCHWARZIAN_INTERVAL: (f64, f64) = (0.2, 1.5);
/// Smallest accepted estimated distance from a sample to a pole of the ratio.
pub const SCHWARZIAN_POLE_CLEARANCE: f64 = 0.15;

pub const BRANCH_BOX: [f64; 4] = [-6.0, 0.0, -6.0, 6.0];
pub const BRANCH_RESIDUAL_TOL: f64 = 1e-8;
pub const BRANCH_GRID: usize = 8;
pub const BRANCH_N_MAX: usize = 4;
pub const RAMIFICATION_BUDGET: Duration = Duration::from_secs(600);

pub const ORDERING_RADIUS: f64 = 2.0;
pub const ORDERING_N_MAX: usize = 20;
pub const ORDERING_SAMPLES: (usize, usize) = (16, 9);

pub const TREE_BOUND: i64 = 12;
pub const TREES_BUDGET: Duration = Duration::from_secs(10);

pub const BRAID_MAX_LEN: usize = 8;

pub const CONJUGATE_TOL: f64 = 1e-6;
pub const ASYMPTOTIC_ALPHA: f64 = 1.0;
pub const ASYMPTOTIC_N_MAX: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    /// Skips the sample-doubling rerun of the modulus-ordering check.
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    /// One line of the pass/fail table.
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {:<34} {:>7.1}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub tier: String,
    pub seed: u64,
    pub criteria: Vec<CriterionResult>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn table(&self) -> String {
        let mut s = String::new();
        for c in &self.criteria {
            let _ = writeln!(s, "{}", c.line());
        }
        let failed = self.criteria.iter().filter(|c| !c.passed).count();
        let _ = write!(s, "{} of {} criteria passed ({} tier)", self.criteria.len() - failed, self.criteria.len(), self.tier);
        s
    }
}

pub const CRITERIA: [(u8, &str); 9] = [
    (1, "beta-form scaling"),
    (2, "Hermite oracle agreement"),
    (3, "real zero counts"),
    (4, "Schwarzian residual"),
    (5, "branch point ramification"),
    (6, "modulus ordering threshold"),
    (7, "tree moves and orbits"),
    (8, "braid rewrites invert"),
    (9, "asymptotic values and origin class"),
];

type Check = Result<(bool, String), String>;

fn settings() -> SpectrumSettings {
    SpectrumSettings::default()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Runs one criterion and times it.
pub fn run_criterion(id: u8, tier: Tier, seed: u64) -> CriterionResult {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map_or("unknown", |(_, n)| n)
        .to_string();
    let clock = Instant::now();
    let outcome = match id {
        1 => scaling(),
        2 => oracle(),
        3 => zero_counts(),
        4 => schwarzian(),
        5 => ramification(),
        6 => ordering(tier, seed),
        7 => trees(),
        8 => braids(),
        9 => asymptotics(),
        _ => Err(format!("no criterion {id}")),
    };
    let elapsed = clock.elapsed();
    let (mut passed, mut detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    let budget = match id {
        1 => Some(SCALING_BUDGET),
        5 => Some(RAMIFICATION_BUDGET),
        7 => Some(TREES_BUDGET),
        _ => None,
    };
    if let Some(b) = budget {
        if elapsed > b {
            passed = false;
            let _ = write!(detail, "; exceeded the {} s budget", b.as_secs());
        }
    }
    CriterionResult {
        id,
        name,
        passed,
        detail,
        seconds: elapsed.as_secs_f64(),
    }
}

/// Runs every criterion in order, calling `each` as results arrive.
pub fn run_suite(tier: Tier, seed: u64, mut each: impl FnMut(&CriterionResult)) -> SuiteReport {
    let criteria: Vec<CriterionResult> = CRITERIA
        .iter()
        .map(|(id, _)| {
            let r = run_criterion(*id, tier, seed);
            each(&r);
            r
        })
        .collect();
    SuiteReport {
        tier: match tier {
            Tier::Quick => "quick",
            Tier::Full => "full",
        }
        .into(),
        seed,
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn scaling() -> Check {
    let mut worst = 0.0f64;
    for beta in SCALING_BETAS {
        for ev in beta_form_eigenvalues(c(beta, 0.0), SCALING_N_MAX, &settings()).map_err(err)? {
            let direct = shooting::beta_form_level(beta, ev.index);
            worst = worst.max((ev.value - direct).norm() / direct.abs());
        }
    }
    Ok((worst <= SCALING_REL_TOL, format!("max relative deviation {worst:.2e} (tol {SCALING_REL_TOL:.0e})")))
}

fn oracle() -> Check {
    let basis = HermiteBasis {
        size: ORACLE_BASIS,
        ..HermiteBasis::default()
    };
    let mut worst = 0.0f64;
    for alpha in ORACLE_ALPHAS {
        let expected = quartic_levels(alpha, ORACLE_N_MAX, basis);
        let levels = eigenvalues_at(&PolynomialPotential::quartic(c(alpha, 0.0)), ORACLE_N_MAX, &settings()).map_err(err)?;
        if levels.len() != expected.len() {
            return Ok((false, format!("alpha {alpha}: {} levels vs {} from the oracle", levels.len(), expected.len())));
        }
        for (ev, x) in levels.iter().zip(&expected) {
            worst = worst.max((ev.value - x).norm());
        }
    }
    Ok((worst <= ORACLE_TOL, format!("max deviation {worst:.2e} (tol {ORACLE_TOL:.0e}, basis {ORACLE_BASIS})")))
}

fn zero_counts() -> Check {
    let mut wrong = Vec::new();
    for alpha in ZERO_COUNT_ALPHAS {
        for n in 0..=ZERO_COUNT_N_MAX {
            let count = real_zero_count(alpha, n, &settings()).map_err(err)?;
            if count != n {
                wrong.push(format!("alpha {alpha} n {n}: {count}"));
            }
        }
    }
    let total = ZERO_COUNT_ALPHAS.len() * (ZERO_COUNT_N_MAX + 1);
    Ok(if wrong.is_empty() {
        (true, format!("{total} eigenfunctions have n real zeros"))
    } else {
        (false, wrong.join(", "))
    })
}

/// Evenly spaced samples, each moved in steps of 0.01 (at most 0.3 either way) until it
/// clears the poles of the ratio and stays apart from the samples already chosen.
fn schwarzian_samples(ratio: &EigenfunctionRatio) -> Result<Vec<f64>, String> {
    let (a, b) = SCHWARZIAN_INTERVAL;
    let n = SCHWARZIAN_SAMPLES;
    let mut xs = Vec::with_capacity(n);
    for k in 0..n {
        let x0 = a + (b - a) * k as f64 / (n - 1) as f64;
        let candidates = (0..=60).map(|j| x0 + 0.01 * ((j + 1) / 2) as f64 * if j % 2 == 1 { 1.0 } else { -1.0 });
        let mut chosen = None;
        for x in candidates {
            let apart = xs.iter().all(|y: &f64| (x - y).abs() > 5e-3);
            if apart && ratio.pole_distances(&[x]).map_err(err)?[0] >= SCHWARZIAN_POLE_CLEARANCE {
                chosen = Some(x);
                break;
            }
        }
        xs.push(chosen.ok_or_else(|| format!("no pole-free sample near x = {x0}"))?);
    }
    Ok(xs)
}

fn schwarzian() -> Check {
    let mut worst = 0.0f64;
    for alpha in SCHWARZIAN_ALPHAS {
        let pot = PolynomialPotential::quartic(c(alpha, 0.0));
        for ev in eigenvalues_at(&pot, 1, &settings()).map_err(err)? {
            let ratio = EigenfunctionRatio::new(&pot, ev.value, DEFAULT_TOL, 1e-8).map_err(err)?;
            let xs = schwarzian_samples(&ratio)?;
            worst = worst.max(schwarzian_residual(&pot, ev.value, &xs, DEFAULT_TOL).map_err(err)?);
        }
    }
    Ok((worst < SCHWARZIAN_TOL, format!("max relative residual {worst:.2e} (tol {SCHWARZIAN_TOL:.0e})")))
}

fn ramification() -> Check {
    let [a, b, cc, d] = BRANCH_BOX;
    let region = ParameterBox::new(a, b, cc, d).map_err(err)?;
    let controls = BranchControls::default();
    let scan = find_branch_points(&region, Parity::Even, BRANCH_N_MAX, BRANCH_GRID, &controls).map_err(err)?;
    let Some(bp) = scan
        .points
        .iter()
        .filter(|p| p.residuals.value <= BRANCH_RESIDUAL_TOL && p.residuals.slope <= BRANCH_RESIDUAL_TOL)
        .min_by(|p, q| p.alpha.norm().total_cmp(&q.alpha.norm()))
    else {
        return Ok((false, format!("no even branch point with residuals <= {BRANCH_RESIDUAL_TOL:.0e} in the box")));
    };
    let check = ramification_check(bp.alpha, bp.loop_radius, bp.labels[0], Parity::Even, BRANCH_N_MAX, &controls)
        .map_err(err)?;
    let cycle = check.single.cycle_of(bp.labels[0]).map_err(err)?;
    let two_cycle = cycle.len() == 2 && check.single.moved().len() == 2;
    let double_identity = check.order == 2 && check.repeated.is_identity();
    let separation = parity_separation_check(
        std::slice::from_ref(&check.single.path),
        check.single.base,
        BRANCH_N_MAX + 1,
        &controls.track,
    )
    .map_err(err)?;
    let odd_fixed = separation.entries.iter().all(|e| e.odd.is_identity());
    let passed = two_cycle && double_identity && separation.separated && odd_fixed;
    Ok((
        passed,
        format!(
            "{} points; alpha* = {:.6}, residuals {:.1e}/{:.1e}, cycle {:?}, double loop identity {}, parities separated {}",
            scan.points.len(),
            bp.alpha,
            bp.residuals.value,
            bp.residuals.slope,
            cycle,
            double_identity,
            separation.separated && odd_fixed
        ),
    ))
}

fn ordering(tier: Tier, seed: u64) -> Check {
    let (boundary, interior) = ORDERING_SAMPLES;
    let first = modulus_ordering_threshold(ORDERING_RADIUS, ORDERING_N_MAX, boundary, interior, seed, &settings())
        .map_err(err)?;
    let found = first.threshold < ORDERING_N_MAX;
    let mut detail = format!("N = {} over {}+{} samples", first.threshold, boundary, interior);
    let mut stable = true;
    if tier == Tier::Full {
        let doubled =
            modulus_ordering_threshold(ORDERING_RADIUS, ORDERING_N_MAX, 2 * boundary, 2 * interior, seed, &settings())
                .map_err(err)?;
        stable = doubled.threshold == first.threshold;
        let _ = write!(detail, "; N = {} over {}+{}", doubled.threshold, 2 * boundary, 2 * interior);
    } else {
        detail.push_str("; doubling skipped in the quick tier");
    }
    Ok((found && stable, detail))
}

fn all_bounded(bound: i64) -> Vec<TreeState> {
    let mut v = bounded_states(Fiber::OverI, bound);
    v.extend(bounded_states(Fiber::OverMinusI, bound));
    v
}

fn trees() -> Check {
    let b = TREE_BOUND;
    let states = all_bounded(b);
    let mut failures = Vec::new();

    for (mv, inv) in [(SMove::S0, SMove::S0Inv), (SMove::Sinf, SMove::SinfInv)] {
        let images = states.iter().map(|x| act(mv, *x)).collect::<Result<Vec<_>, _>>().map_err(err)?;
        let distinct: BTreeSet<_> = images.iter().collect();
        if distinct.len() != images.len() {
            failures.push(format!("{mv} is not injective"));
        }
        for (x, y) in states.iter().zip(&images) {
            if x.fiber() == y.fiber() || act(inv, *y).ok() != Some(*x) {
                failures.push(format!("{mv} on {x}"));
                break;
            }
        }
        let reach: BTreeSet<_> = all_bounded(b + 2).iter().filter_map(|x| act(mv, *x).ok()).collect();
        if let Some(x) = all_bounded(b - 2).into_iter().find(|x| !reach.contains(x)) {
            failures.push(format!("{x} has no {mv} preimage"));
        }
    }

    if let Some(x) = states.iter().find(|x| {
        act(SMove::S0, x.conjugate())
            .and_then(|y| act(SMove::Sinf, y.conjugate())) != Ok(**x)
    }) {
        failures.push(format!("conjugation identity fails at {x}"));
    }

    let relation = QMove::relation_word();
    if let Some(x) = states.iter().find(|x| act_word(&relation, **x) != Ok(**x)) {
        failures.push(format!("relation word moves {x}"));
    }

    let even = orbit(TreeState::a(0), b).map_err(err)?;
    let odd = orbit(TreeState::new(Family::D, 0, 1), b).map_err(err)?;
    let over_i: BTreeSet<_> = bounded_states(Fiber::OverI, b).into_iter().collect();
    let union: BTreeSet<_> = even.union(&odd).copied().collect();
    if !even.is_disjoint(&odd) || union != over_i {
        failures.push("orbits of A[0] and D[0,1] do not partition the states over i".into());
    }

    for k in 0..=b {
        if act_word(&vec![SMove::S0; 2 * k as usize], TreeState::a(0)).ok() != Some(TreeState::a(k)) {
            failures.push(format!("s0^{} A[0] != A[{k}]", 2 * k));
        }
        for l in 1..=b / 2 {
            let word: Vec<SMove> = (0..l).flat_map(|_| [SMove::S0, SMove::Sinf]).collect();
            if act_word(&word, TreeState::a(k)).ok() != Some(TreeState::new(Family::D, k, 2 * l)) {
                failures.push(format!("(s0 si)^{l} A[{k}] != D[{k},{}]", 2 * l));
            }
        }
    }

    Ok(if failures.is_empty() {
        (
            true,
            format!(
                "{} bounded states; orbits of sizes {} and {} partition {} states over i",
                states.len(),
                even.len(),
                odd.len(),
                over_i.len()
            ),
        )
    } else {
        (false, failures.join("; "))
    })
}

fn braids() -> Check {
    let letters = Letter::all();
    let pairs = [(SMove::S0, SMove::S0Inv), (SMove::Sinf, SMove::SinfInv)];
    let mut word: Vec<Letter> = Vec::with_capacity(BRAID_MAX_LEN);
    let (mut once, mut back) = (Vec::new(), Vec::new());
    let mut checked = 0usize;
    let mut failure: Option<String> = None;

    // Depth-first over freely reduced words.
    fn visit(
        word: &mut Vec<Letter>,
        letters: &[Letter; 8],
        check: &mut dyn FnMut(&[Letter]) -> bool,
    ) -> bool {
        if !check(word) {
            return false;
        }
        if word.len() == BRAID_MAX_LEN {
            return true;
        }
        for &x in letters {
            if word.last() == Some(&x.inverse()) {
                continue;
            }
            word.push(x);
            let ok = visit(word, letters, check);
            word.pop();
            if !ok {
                return false;
            }
        }
        true
    }

    let mut check = |w: &[Letter]| {
        checked += 1;
        for (a, b) in pairs {
            for (f, g) in [(a, b), (b, a)] {
                braid_rewrite_into(f, w, &mut once);
                braid_rewrite_into(g, &once, &mut back);
                if back != w {
                    failure = Some(format!("{g} after {f} changes a word of length {}", w.len()));
                    return false;
                }
            }
        }
        true
    };
    visit(&mut word, &letters, &mut check);
    Ok(match failure {
        Some(f) => (false, f),
        None => (true, format!("{checked} reduced words of length <= {BRAID_MAX_LEN}, both move pairs")),
    })
}

fn asymptotics() -> Check {
    let pot = PolynomialPotential::quartic(c(ASYMPTOTIC_ALPHA, 0.0));
    let mut worst = 0.0f64;
    let mut mismatches = Vec::new();
    for ev in eigenvalues_at(&pot, ASYMPTOTIC_N_MAX, &settings()).map_err(err)? {
        let set = asymptotic_values(&pot, ev.value, DEFAULT_TOL).map_err(err)?;
        match (set.c1().finite(), set.c2().finite()) {
            (Some(c1), Some(c2)) => worst = worst.max((c2 + c1.conj()).norm() / (1.0 + c1.norm())),
            (None, None) => {}
            _ => mismatches.push(format!("n {}: only one of c1, c2 is infinite", ev.index)),
        }

        // Near the origin f behaves like x^-1 at a pole and like x at a zero.
        let ratio = EigenfunctionRatio::new(&pot, ev.value, DEFAULT_TOL, 1e-8).map_err(err)?;
        let f = ratio.values_on_axis(&[1e-3, 2e-3], 0.0).map_err(err)?;
        let observed = if f[1].norm() < f[0].norm() {
            OriginClass::PoleAtOrigin
        } else {
            OriginClass::ZeroAtOrigin
        };
        let tree = level_to_tree(ev.index);
        let predicted = tree.origin_class().map_err(err)?;
        if observed != predicted || ratio.parity() != Parity::of_level(ev.index) {
            mismatches.push(format!("n {}: {tree} predicts {predicted:?}, observed {observed:?}", ev.index));
        }
    }
    let ok = worst <= CONJUGATE_TOL && mismatches.is_empty();
    let mut detail = format!(
        "max |c2 + conj(c1)|/(1+|c1|) = {worst:.2e} (tol {CONJUGATE_TOL:.0e}); origin classes match for n <= {ASYMPTOTIC_N_MAX}"
    );
    if !mismatches.is_empty() {
        detail = format!("{detail}; {}", mismatches.join("; "));
    }
    Ok((ok, detail))
}
