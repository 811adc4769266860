use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::path::PathSpec;
use super::track::{track_labels, TrackControls};
use crate::spectral::{eigenvalues_of_parity, PolynomialPotential, SpectrumSettings};
use crate::{Error, Parity, Result};

/// Extra levels of the same parity tracked beyond `n_max`, so that a label
/// leaving the requested set is detected instead of mismatched.
pub const BUFFER_LEVELS: usize = 2;

/// Permutation of level labels produced by one traversal of a closed loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonodromyPermutation {
    pub parity: Parity,
    #[serde(with = "crate::serde_complex")]
    pub base: Complex64,
    pub labels: Vec<usize>,
    /// `mapping[i]` is the label reached by continuing `labels[i]` once around the loop.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mapping: Option<Vec<usize>>,
    #[serde(rename = "loop")]
    pub path: PathSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl MonodromyPermutation {
    pub fn is_complete(&self) -> bool {
        self.mapping.is_some()
    }

    fn mapping_or_err(&self) -> Result<&[usize]> {
        self.mapping.as_deref().ok_or_else(|| {
            Error::Unsupported(format!(
                "monodromy is incomplete: {}",
                self.failure.as_deref().unwrap_or("tracking failed")
            ))
        })
    }

    pub fn image(&self, label: usize) -> Result<usize> {
        let mapping = self.mapping_or_err()?;
        let i = self
            .labels
            .iter()
            .position(|&l| l == label)
            .ok_or_else(|| Error::InvalidInput(format!("label {label} is not tracked")))?;
        Ok(mapping[i])
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.as_ref().is_some_and(|m| *m == self.labels)
    }

    /// Labels moved by the permutation.
    pub fn moved(&self) -> Vec<usize> {
        match &self.mapping {
            Some(m) => self.labels.iter().zip(m).filter(|(a, b)| a != b).map(|(a, _)| *a).collect(),
            None => Vec::new(),
        }
    }

    /// Cycle through `label`, starting with `label`.
    pub fn cycle_of(&self, label: usize) -> Result<Vec<usize>> {
        let mut cycle = vec![label];
        let mut next = self.image(label)?;
        while next != label {
            cycle.push(next);
            next = self.image(next)?;
        }
        Ok(cycle)
    }

    /// Permutation of this loop followed by `next`: `label ↦ next(self(label))`.
    pub fn then(&self, next: &MonodromyPermutation) -> Result<Vec<usize>> {
        if self.labels != next.labels || self.parity != next.parity {
            return Err(Error::InvalidInput("permutations act on different label sets".into()));
        }
        self.mapping_or_err()?
            .iter()
            .map(|&l| next.image(l))
            .collect()
    }
}

/// Eigenvalues of the given labels at `alpha`.
pub fn labelled_eigenvalues(alpha: Complex64, parity: Parity, n_max: usize, controls: &TrackControls) -> Result<Vec<(usize, Complex64)>> {
    let settings = SpectrumSettings {
        tol: controls.tol,
        newton: controls.newton,
    };
    Ok(eigenvalues_of_parity(&PolynomialPotential::quartic(alpha), parity, n_max, &settings)?
        .into_iter()
        .map(|e| (e.index, e.value))
        .collect())
}

/// Index of the unique start value within `1e-6 (1 + |λ|)` of `lambda`.
fn match_start(starts: &[(usize, Complex64)], lambda: Complex64) -> Option<usize> {
    let radius = 1e-6 * (1.0 + lambda.norm());
    let mut hits = starts.iter().filter(|(_, s)| (s - lambda).norm() <= radius);
    let first = hits.next()?;
    hits.next().is_none().then_some(first.0)
}

/// Continues the eigenvalues with labels `<= n_max` once around a closed loop based at `base`.
///
/// Tracking failures are reported in the result rather than as errors.
pub fn loop_permutation(path: &PathSpec, base: Complex64, n_max: usize, parity: Parity, controls: &TrackControls) -> Result<MonodromyPermutation> {
    path.validate()?;
    if !path.is_closed() {
        return Err(Error::InvalidInput("monodromy needs a closed loop".into()));
    }
    if (path.start() - base).norm() > 1e-9 * (1.0 + base.norm()) {
        return Err(Error::InvalidInput(format!("loop starts at {} rather than the base point {base}", path.start())));
    }
    let labels: Vec<usize> = parity.levels(n_max).collect();
    let mut result = MonodromyPermutation {
        parity,
        base,
        labels: labels.clone(),
        mapping: None,
        path: path.clone(),
        failure: None,
    };
    if labels.is_empty() {
        result.mapping = Some(Vec::new());
        return Ok(result);
    }
    let starts = labelled_eigenvalues(base, parity, n_max + 2 * BUFFER_LEVELS, controls)?;
    let values: Vec<Complex64> = starts.iter().map(|(_, v)| *v).collect();
    let traces = track_labels(path, &values, parity, controls)?;
    if let Some(tr) = traces.iter().find(|t| !t.completed()) {
        result.failure = Some(tr.note.clone().unwrap_or_else(|| "tracking aborted".into()));
        return Ok(result);
    }
    let mut mapping = Vec::with_capacity(labels.len());
    for (label, trace) in labels.iter().zip(&traces) {
        match match_start(&starts, trace.end_lambda()) {
            Some(image) if image <= n_max => mapping.push(image),
            Some(image) => {
                result.failure = Some(format!("label {label} continues to label {image}, outside the requested set"));
                return Ok(result);
            }
            None => {
                result.failure = Some(format!(
                    "label {label} ends at {} which matches no tracked eigenvalue",
                    trace.end_lambda()
                ));
                return Ok(result);
            }
        }
    }
    result.mapping = Some(mapping);
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParitySeparationEntry {
    #[serde(rename = "loop")]
    pub path: PathSpec,
    pub even: MonodromyPermutation,
    pub odd: MonodromyPermutation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParitySeparationReport {
    #[serde(with = "crate::serde_complex")]
    pub base: Complex64,
    pub n_max: usize,
    pub entries: Vec<ParitySeparationEntry>,
    /// True when every permutation maps labels to labels of the same parity.
    pub separated: bool,
}

/// Loop permutations of both parities for each loop, checking that no label changes parity.
pub fn parity_separation_check(
    loops: &[PathSpec],
    base: Complex64,
    n_max: usize,
    controls: &TrackControls,
) -> Result<ParitySeparationReport> {
    let mut entries = Vec::with_capacity(loops.len());
    let mut separated = true;
    for path in loops {
        let even = loop_permutation(path, base, n_max, Parity::Even, controls)?;
        let odd = loop_permutation(path, base, n_max, Parity::Odd, controls)?;
        for perm in [&even, &odd] {
            if let Some(failure) = &perm.failure {
                return Err(Error::Continuation {
                    t: 0.0,
                    alpha: base,
                    reason: failure.clone(),
                });
            }
            let mapping = perm.mapping.as_ref().expect("complete permutation");
            separated &= mapping.iter().all(|&l| Parity::of_level(l) == perm.parity);
        }
        entries.push(ParitySeparationEntry {
            path: path.clone(),
            even,
            odd,
        });
    }
    Ok(ParitySeparationReport {
        base,
        n_max,
        entries,
        separated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn small_circle_acts_trivially() {
        let loop_path = PathSpec::polygon_loop(c(1.0, 0.0), c(1.1, 0.0), 16, 1).unwrap();
        let perm = loop_permutation(&loop_path, c(1.1, 0.0), 4, Parity::Even, &TrackControls::default()).unwrap();
        assert!(perm.is_identity(), "{perm:?}");
        assert_eq!(perm.labels, vec![0, 2, 4]);
    }

    #[test]
    fn open_path_is_rejected() {
        let path = PathSpec::segment(c(1.0, 0.0), c(2.0, 0.0));
        assert!(loop_permutation(&path, c(1.0, 0.0), 2, Parity::Even, &TrackControls::default()).is_err());
    }

    #[test]
    fn cycles_and_composition() {
        let perm = MonodromyPermutation {
            parity: Parity::Even,
            base: c(1.0, 0.0),
            labels: vec![0, 2, 4],
            mapping: Some(vec![2, 0, 4]),
            path: PathSpec::segment(c(1.0, 0.0), c(1.0, 0.0)),
            failure: None,
        };
        assert_eq!(perm.cycle_of(0).unwrap(), vec![0, 2]);
        assert_eq!(perm.cycle_of(4).unwrap(), vec![4]);
        assert_eq!(perm.moved(), vec![0, 2]);
        assert_eq!(perm.then(&perm).unwrap(), vec![0, 2, 4]);
    }
}
