//! Empirical probe of when k-sunflowers appear beyond the extremal size `(k-1)^m`.
//!
//! The theorem's own threshold uses constants far beyond any computable range, so this only
//! reports observed thresholds on small instances.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::extremal::{build_extremal, certify_sunflower_free};
use crate::family::SetFamily;
use crate::random::random_m_set;
use crate::set::{GroundSet, Universe};
use crate::split_search::binomial;
use crate::sunflower::find_sunflower_through;

pub const EMPIRICAL_LABEL: &str = "empirical: the theorem's constant c is not testable";

/// The common envelope for command reports.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub results: Value,
    /// Wall-clock seconds per phase. Not part of the reproducible content.
    pub timings: BTreeMap<String, f64>,
    pub seed: Option<u64>,
}

impl ExperimentReport {
    pub fn new(command: &str, seed: Option<u64>) -> Self {
        ExperimentReport {
            command: command.into(),
            inputs: BTreeMap::new(),
            results: Value::Null,
            timings: BTreeMap::new(),
            seed,
        }
    }

    pub fn input(mut self, key: &str, value: impl Serialize) -> Self {
        self.inputs
            .insert(key.into(), serde_json::to_value(value).expect("plain data serializes"));
        self
    }

    /// Runs `phase`, recording its wall-clock time under `name`.
    pub fn timed<T>(&mut self, name: &str, phase: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = phase();
        self.timings.insert(name.into(), start.elapsed().as_secs_f64());
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundRow {
    pub k: usize,
    pub m: usize,
    pub n: usize,
    pub baseline: usize,
    /// `Some(true)` when the extremal family was certified free; `None` on budget exhaustion.
    pub baseline_free: Option<bool>,
    /// Family size at which the first k-sunflower appeared, per trial.
    pub thresholds: Vec<Option<usize>>,
    pub min_threshold: Option<usize>,
    pub max_threshold: Option<usize>,
    pub status: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundExperiment {
    pub label: &'static str,
    pub rows: Vec<BoundRow>,
}

/// For each `(k, m)`: certify the extremal family, then, per trial, embed it in `k m` labels
/// and add uniform new `m`-sets until a k-sunflower appears. Budget exhaustion marks the row.
pub fn verify_bound_experiment(
    ks: &[usize],
    ms: &[usize],
    trials: usize,
    seed: u64,
    budget: &Budget,
) -> Result<BoundExperiment> {
    let mut rows = Vec::new();
    let mut stream = 0u64;
    for &k in ks {
        for &m in ms {
            let row = bound_row(k, m, trials, seed, stream, budget);
            stream += 1;
            match row {
                Ok(row) => rows.push(row),
                Err(e) if e.is_budget() => rows.push(BoundRow {
                    k,
                    m,
                    n: k * m,
                    baseline: (k - 1).pow(m as u32),
                    baseline_free: None,
                    thresholds: Vec::new(),
                    min_threshold: None,
                    max_threshold: None,
                    status: format!("budget exceeded: {e}"),
                }),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(BoundExperiment {
        label: EMPIRICAL_LABEL,
        rows,
    })
}

fn bound_row(k: usize, m: usize, trials: usize, seed: u64, stream: u64, budget: &Budget) -> Result<BoundRow> {
    let ef = build_extremal(k, m, budget)?;
    let baseline = ef.family.len();
    let free = certify_sunflower_free(&ef, budget)?;
    let n = k * m;
    let universe = Universe::new(n)?;
    let lifted: Vec<GroundSet> = ef
        .family
        .iter()
        .map(|u| GroundSet::from_labels(universe, u.iter()))
        .collect::<Result<_>>()?;
    let total = binomial(n, m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut thresholds = Vec::with_capacity(trials);
    for _ in 0..trials {
        let mut family = SetFamily::new(universe, m, lifted.clone())?;
        let mut found = None;
        while num_bigint::BigUint::from(family.len()) < total {
            let set = random_m_set(universe, m, &mut rng)?;
            if !family.insert(set.clone())? {
                continue;
            }
            if find_sunflower_through(&family, &set, k, budget)?.is_some() {
                found = Some(family.len());
                break;
            }
        }
        thresholds.push(found);
    }
    if !free {
        return Err(Error::InvalidArgument(format!(
            "the extremal family for k = {k}, m = {m} contains a k-sunflower"
        )));
    }
    Ok(BoundRow {
        k,
        m,
        n,
        baseline,
        baseline_free: Some(free),
        min_threshold: thresholds.iter().flatten().min().copied(),
        max_threshold: thresholds.iter().flatten().max().copied(),
        thresholds,
        status: "ok".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rows() {
        let budget = Budget::default();
        let exp = verify_bound_experiment(&[2, 3], &[2, 3], 4, 11, &budget).unwrap();
        assert_eq!(exp.label, EMPIRICAL_LABEL);
        for row in &exp.rows {
            assert_eq!(row.baseline_free, Some(true));
            assert_eq!(row.baseline, (row.k - 1).pow(row.m as u32));
            for t in &row.thresholds {
                assert!(t.unwrap() > row.baseline);
            }
            if row.k == 2 {
                assert!(row.thresholds.iter().all(|t| *t == Some(2)));
            }
        }
        let k3m3 = exp.rows.iter().find(|r| (r.k, r.m) == (3, 3)).unwrap();
        assert_eq!(k3m3.baseline, 8);
        assert!(k3m3.min_threshold.unwrap() >= 9);
    }

    #[test]
    fn reproducible() {
        let budget = Budget::default();
        let a = verify_bound_experiment(&[3], &[2], 5, 4, &budget).unwrap();
        let b = verify_bound_experiment(&[3], &[2], 5, 4, &budget).unwrap();
        assert_eq!(a.rows, b.rows);
    }

    #[test]
    fn report_envelope() {
        let mut r = ExperimentReport::new("verify-bound", Some(3)).input("trials", 5);
        let x = r.timed("search", || 2 + 2);
        assert_eq!(x, 4);
        assert!(r.timings.contains_key("search"));
        assert_eq!(r.inputs["trials"], 5);
    }
}
