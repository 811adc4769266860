use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use quartic_core::continuation::{
    continue_eigenvalue, find_branch_points, loop_permutation, BranchControls, ContinuationTrace, PathSpec,
    TrackControls,
};
use quartic_core::scaling::{alpha_to_beta, beta_form_eigenvalues, beta_to_alpha};
use quartic_core::spectral::{eigenvalues_of_parity, newton_eigenvalue, Eigenvalue, PolynomialPotential};
use quartic_core::trees::{act, braid_rewrite, orbit, parse_word, Fiber, FreeWord, TreeState};
use quartic_core::{Complex64, Parity};
use serde::Serialize;
use serde_json::{json, Value};

use crate::{settings_for, verify, Cli, CliError, Command, ParityArg, Report};

/// Adding zero turns `-0.0` into `0.0`.
fn cx(z: Complex64) -> Value {
    json!({ "re": z.re + 0.0, "im": z.im + 0.0 })
}

fn show(z: Complex64) -> String {
    let (re, im) = (z.re + 0.0, z.im + 0.0);
    if im < 0.0 {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Compute(e.to_string()))
}

fn parity_name(p: ParityArg) -> &'static str {
    match p {
        ParityArg::Even => "even",
        ParityArg::Odd => "odd",
        ParityArg::Both => "both",
    }
}

fn track_controls(tol: f64) -> TrackControls {
    TrackControls {
        tol,
        ..TrackControls::default()
    }
}

pub(crate) fn execute(cli: &Cli) -> Result<Report, (Value, CliError)> {
    let parameters = parameters(&cli.command);
    let with_params = |e: CliError| (parameters.clone(), e);
    let (payload, summary, ok) = match &cli.command {
        Command::Spectrum(a) => spectrum(a.alpha, a.n_max, a.parity, cli.tol),
        Command::Continue(a) => continuation(&a.path, a.start, a.parity, cli.tol, &cli.out_dir),
        Command::Monodromy(a) => monodromy(&a.path, a.n_max, a.parity, cli.tol),
        Command::BranchScan(a) => branch_scan(a, cli.tol),
        Command::Scale(a) => scale(a.beta, a.alpha, a.n_max, cli.tol),
        Command::TreesAct(a) => trees_act(&a.word, &a.state, a.free_word.as_deref()),
        Command::TreesOrbit(a) => trees_orbit(&a.start, a.bound),
        Command::Verify(a) => run_verify(a.full && !a.quick, cli.seed),
    }
    .map_err(with_params)?;
    Ok(Report {
        parameters,
        payload,
        summary,
        ok,
    })
}

fn parameters(command: &Command) -> Value {
    match command {
        Command::Spectrum(a) => json!({ "alpha": cx(a.alpha), "n_max": a.n_max, "parity": parity_name(a.parity) }),
        Command::Continue(a) => {
            let mut v = json!({ "path": serde_json::to_value(&a.path).unwrap_or(Value::Bool(false)), "start": cx(a.start) });
            if let Some(p) = a.parity {
                v["parity"] = json!(parity_name(p));
            }
            v
        }
        Command::Monodromy(a) => json!({
            "loop": serde_json::to_value(&a.path).unwrap_or(Value::Bool(false)),
            "n_max": a.n_max,
            "parity": parity_name(a.parity),
        }),
        Command::BranchScan(a) => json!({
            "box": { "re_min": a.region.re_min, "re_max": a.region.re_max, "im_min": a.region.im_min, "im_max": a.region.im_max },
            "grid": a.grid,
            "n_max": a.n_max,
            "parity": parity_name(a.parity),
        }),
        Command::Scale(a) => {
            let mut v = json!({});
            if let Some(b) = a.beta {
                v["beta"] = cx(b);
            }
            if let Some(al) = a.alpha {
                v["alpha"] = cx(al);
            }
            if let Some(n) = a.n_max {
                v["n_max"] = json!(n);
            }
            v
        }
        Command::TreesAct(a) => {
            let mut v = json!({ "word": a.word, "state": a.state });
            if let Some(w) = &a.free_word {
                v["free_word"] = json!(w);
            }
            v
        }
        Command::TreesOrbit(a) => json!({ "start": a.start, "bound": a.bound }),
        Command::Verify(a) => json!({ "tier": if a.full && !a.quick { "full" } else { "quick" } }),
    }
}

type Produced = Result<(Value, String, bool), CliError>;

fn eigen_table(levels: &[Eigenvalue]) -> String {
    let mut s = String::from("  n  parity  eigenvalue                                   residual\n");
    for e in levels {
        let _ = writeln!(
            s,
            "{:>3}  {:<6}  {:>20.12} {:+20.12}i  {:.1e}",
            e.index, e.parity.to_string(), e.value.re, e.value.im, e.residual
        );
    }
    s.trim_end().to_string()
}

fn spectrum(alpha: Complex64, n_max: usize, parity: ParityArg, tol: f64) -> Produced {
    let pot = PolynomialPotential::quartic(alpha);
    let settings = settings_for(tol);
    let mut levels = Vec::new();
    for p in parity.parities() {
        levels.extend(eigenvalues_of_parity(&pot, p, n_max, &settings)?);
    }
    levels.sort_by_key(|e| e.index);
    let summary = format!("eigenvalues at alpha = {}\n{}", show(alpha), eigen_table(&levels));
    Ok((json!({ "alpha": cx(alpha), "n_max": n_max, "eigenvalues": to_value(&levels)? }), summary, true))
}

/// Newton-refines an approximate start value, choosing the parity whose root lies closest.
fn refine_start(alpha: Complex64, start: Complex64, parities: &[Parity], tol: f64) -> Result<(Parity, Complex64), CliError> {
    let pot = PolynomialPotential::quartic(alpha);
    let mut best: Option<(Parity, Complex64)> = None;
    for &p in parities {
        if let Ok(root) = newton_eigenvalue(&pot, p, start, &settings_for(tol)) {
            if best.is_none_or(|(_, b)| (root.value - start).norm() < (b - start).norm()) {
                best = Some((p, root.value));
            }
        }
    }
    best.ok_or_else(|| CliError::Compute(format!("no eigenvalue found near {} at alpha = {}", show(start), show(alpha))))
}

fn write_trace_csv(trace: &ContinuationTrace, dir: &Path) -> Result<std::path::PathBuf, CliError> {
    let io = |e: &dyn std::fmt::Display| CliError::Io(format!("cannot write trace CSV: {e}"));
    std::fs::create_dir_all(dir).map_err(|e| io(&e))?;
    let file = dir.join("continue.csv");
    let mut w = csv::Writer::from_path(&file).map_err(|e| io(&e))?;
    w.write_record(["t", "re_alpha", "im_alpha", "re_lambda", "im_lambda", "residual"])
        .map_err(|e| io(&e))?;
    for s in &trace.samples {
        w.write_record(
            [s.t, s.alpha.re, s.alpha.im, s.lambda.re, s.lambda.im, s.residual].map(|x| x.to_string()),
        )
        .map_err(|e| io(&e))?;
    }
    w.flush().map_err(|e| io(&e))?;
    Ok(file)
}

fn continuation(path: &PathSpec, start: Complex64, parity: Option<ParityArg>, tol: f64, out_dir: &Path) -> Produced {
    let parities = match parity {
        Some(ParityArg::Both) => {
            return Err(CliError::Parse("continue follows one eigenvalue; use --parity even or odd".into()))
        }
        Some(p) => p.parities(),
        None => vec![Parity::Even, Parity::Odd],
    };
    let (parity, start) = refine_start(path.start(), start, &parities, tol)?;
    let trace = continue_eigenvalue(path, start, parity, &track_controls(tol))?;
    let csv = write_trace_csv(&trace, out_dir)?;
    let end = trace.end_lambda();
    let mut summary = format!(
        "{} parity eigenvalue continued from {} to {} in {} samples ({:?})\ntrace CSV: {}",
        parity,
        show(trace.samples[0].lambda),
        show(end),
        trace.samples.len(),
        trace.status,
        csv.display()
    );
    let mut payload = json!({
        "parity": parity.to_string(),
        "end": cx(end),
        "trace": to_value(&trace)?,
        "csv": csv.display().to_string(),
    });
    let ok = trace.completed();
    if !ok {
        let note = trace.note.clone().unwrap_or_else(|| "tracking aborted".into());
        let _ = write!(summary, "\nstopped early: {note}");
        payload["error"] = json!(note);
    }
    Ok((payload, summary, ok))
}

fn monodromy(path: &PathSpec, n_max: usize, parity: ParityArg, tol: f64) -> Produced {
    if !path.is_closed() {
        return Err(CliError::Parse("monodromy needs a closed loop".into()));
    }
    let base = path.start();
    let controls = track_controls(tol);
    let mut perms = Vec::new();
    let mut summary = format!("loop based at {}", show(base));
    let mut failures = Vec::new();
    for p in parity.parities() {
        let perm = loop_permutation(path, base, n_max, p, &controls)?;
        match &perm.mapping {
            Some(m) => {
                let arrows: Vec<String> = perm.labels.iter().zip(m).map(|(a, b)| format!("{a}->{b}")).collect();
                let _ = write!(summary, "\n{p}: {}", arrows.join(" "));
            }
            None => {
                let why = perm.failure.clone().unwrap_or_else(|| "tracking failed".into());
                let _ = write!(summary, "\n{p}: incomplete ({why})");
                failures.push(format!("{p}: {why}"));
            }
        }
        perms.push(perm);
    }
    let mut payload = json!({ "base": cx(base), "n_max": n_max, "permutations": to_value(&perms)? });
    if !failures.is_empty() {
        payload["error"] = json!(failures.join("; "));
    }
    Ok((payload, summary, failures.is_empty()))
}

fn branch_scan(a: &crate::BranchScanArgs, tol: f64) -> Produced {
    if a.grid < 8 {
        return Err(CliError::Parse(format!("--grid must be at least 8, got {}", a.grid)));
    }
    let controls = BranchControls {
        track: track_controls(tol),
        ..BranchControls::default()
    };
    let mut scans = Vec::new();
    let mut summary = String::new();
    for p in a.parity.parities() {
        let scan = find_branch_points(&a.region, p, a.n_max, a.grid, &controls)?;
        let _ = writeln!(summary, "{p}: {} seeds, {} branch points", scan.seeds, scan.points.len());
        for bp in &scan.points {
            let _ = writeln!(
                summary,
                "  alpha = {}  lambda = {}  labels {:?}  order {}",
                show(bp.alpha),
                show(bp.lambda), bp.labels, bp.order
            );
        }
        scans.push(scan);
    }
    Ok((json!({ "scans": to_value(&scans)? }), summary.trim_end().to_string(), true))
}

fn scale(beta: Option<Complex64>, alpha: Option<Complex64>, n_max: Option<usize>, tol: f64) -> Produced {
    let beta = match (beta, alpha) {
        (Some(b), _) => b,
        (None, Some(a)) => alpha_to_beta(a)?,
        (None, None) => return Err(CliError::Parse("give --beta or --alpha".into())),
    };
    let (alpha, factor) = beta_to_alpha(beta)?;
    let mut summary = format!("beta = {}  <->  alpha = {}, factor = {}", show(beta), show(alpha), show(factor));
    let mut payload = json!({ "beta": cx(beta), "alpha": cx(alpha), "factor": cx(factor) });
    if let Some(n) = n_max {
        let levels = beta_form_eigenvalues(beta, n, &settings_for(tol))?;
        let _ = write!(summary, "\n{}", eigen_table(&levels));
        payload["eigenvalues"] = to_value(&levels)?;
    }
    Ok((payload, summary, true))
}

fn parse_state(text: &str) -> Result<TreeState, CliError> {
    let state: TreeState = text.parse().map_err(|e: quartic_core::Error| CliError::Parse(e.to_string()))?;
    state.validate().map_err(CliError::Parse)?;
    Ok(state)
}

fn trees_act(word: &str, state: &str, free_word: Option<&str>) -> Produced {
    let moves = parse_word(word).map_err(|e| CliError::Parse(e.to_string()))?;
    let start = parse_state(state)?;
    let free = free_word
        .map(|w| w.parse::<FreeWord>().map_err(|e| CliError::Parse(e.to_string())))
        .transpose()?;
    let mut trajectory = vec![start];
    let mut current = start;
    for mv in &moves {
        current = act(*mv, current)?;
        trajectory.push(current);
    }
    let mut summary = trajectory.iter().map(ToString::to_string).collect::<Vec<_>>().join(" -> ");
    let mut payload = json!({
        "start": start.to_string(),
        "word": moves.iter().map(|m| m.token()).collect::<Vec<_>>(),
        "result": current.to_string(),
        "fiber": to_value(&current.fiber())?,
        "trajectory": trajectory.iter().map(ToString::to_string).collect::<Vec<_>>(),
    });
    if let Some(w) = free {
        let image = moves.iter().fold(w.clone(), |acc, mv| braid_rewrite(*mv, &acc));
        let _ = write!(summary, "\n{w}  ->  {image}");
        payload["free_word"] = json!({ "input": w.to_string(), "image": image.to_string() });
    }
    Ok((payload, summary, true))
}

fn trees_orbit(start: &str, bound: i64) -> Produced {
    let start = parse_state(start)?;
    if start.fiber() != Fiber::OverI {
        return Err(CliError::Parse(format!("orbits start from a state over i, got {start}")));
    }
    if bound < start.size() {
        return Err(CliError::Parse(format!("bound {bound} is below the size of {start}")));
    }
    let states = orbit(start, bound)?;
    let mut by_family: BTreeMap<String, usize> = BTreeMap::new();
    for s in &states {
        *by_family.entry(format!("{:?}", s.family)).or_default() += 1;
    }
    let class = start.origin_class()?;
    let summary = format!(
        "orbit of {start} with bound {bound}: {} states ({})",
        states.len(),
        by_family.iter().map(|(f, n)| format!("{f} {n}")).collect::<Vec<_>>().join(", ")
    );
    Ok((
        json!({
            "start": start.to_string(),
            "bound": bound,
            "size": states.len(),
            "origin_class": to_value(&class)?,
            "by_family": by_family,
            "states": states.iter().map(ToString::to_string).collect::<Vec<_>>(),
        }),
        summary,
        true,
    ))
}

fn run_verify(full: bool, seed: u64) -> Produced {
    let tier = if full { verify::Tier::Full } else { verify::Tier::Quick };
    let report = verify::run_suite(tier, seed, |c| println!("{}", c.line()));
    // The table rows were printed as each criterion finished.
    let summary = report.table().lines().last().unwrap_or_default().to_string();
    let ok = report.passed;
    let mut payload = to_value(&report)?;
    if !ok {
        payload["error"] = json!(format!("{} criteria failed", report.criteria.iter().filter(|c| !c.passed).count()));
    }
    Ok((payload, summary, ok))
}
