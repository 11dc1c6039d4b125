//! The recursive driver: feed each output of [`base_sets`] back in until the rank repeats or hits 0.

use std::sync::Arc;

use serde::Serialize;

use super::collection::GCollection;
use super::constants::Constants;
use super::engine::{base_sets, meets_input_floor, AuditCheck, BaseSetsOutput, ElementaryGammaHat, TraceRecord};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::split::Split;

/// One call of the driver: the inputs `(r_p, B_p, F̂_p)` and what came back.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessStep {
    pub p: usize,
    pub r_in: usize,
    pub g_size: usize,
    pub input_size: usize,
    pub input_floor_ok: bool,
    pub output: BaseSetsOutput,
}

#[derive(Debug)]
pub struct ProcessFailure {
    pub steps: Vec<ProcessStep>,
    pub source: Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessOutcome {
    pub steps: Vec<ProcessStep>,
    pub p_hat: usize,
    pub r_hat: usize,
    pub bases: SetFamily,
    pub fhat: SetFamily,
    /// The `T_{C,X'}` of the final call.
    pub parts: Vec<ElementaryGammaHat>,
}

impl ProcessOutcome {
    /// Every extraction of the run with its step index filled in.
    pub fn trace(&self) -> Vec<TraceRecord> {
        self.steps
            .iter()
            .flat_map(|s| {
                s.output.trace.iter().map(move |t| TraceRecord {
                    p: Some(s.p),
                    ..t.clone()
                })
            })
            .collect()
    }

    pub fn report(&self) -> ProcessReport {
        ProcessReport {
            p_hat: self.p_hat,
            r_hat: self.r_hat,
            bases: self.bases.iter().map(|b| b.to_vec()).collect(),
            fhat_size: self.fhat.len(),
            steps: self
                .steps
                .iter()
                .map(|s| StepReport {
                    p: s.p,
                    r_in: s.r_in,
                    r_out: s.output.r,
                    g_size: s.g_size,
                    input_size: s.input_size,
                    input_floor_ok: s.input_floor_ok,
                    output_size: s.output.fdagger.len(),
                    bases: s.output.bases.len(),
                })
                .collect(),
        }
    }

    /// Checks the driver's own invariants: call count, strictly decreasing ranks,
    /// the input floor at every step.
    pub fn audit(&self, m: usize) -> Vec<AuditCheck> {
        let calls = self.steps.len();
        let ranks: Vec<usize> = self.steps.iter().map(|s| s.r_in).collect();
        let decreasing = ranks.windows(2).all(|w| w[1] < w[0]);
        let floors = self.steps.iter().all(|s| s.input_floor_ok);
        vec![
            AuditCheck {
                name: "call-count",
                ok: calls <= m + 1,
                detail: format!("{calls} calls for m = {m}"),
            },
            AuditCheck {
                name: "rank-decreasing",
                ok: decreasing,
                detail: format!("ranks {ranks:?}, final {}", self.r_hat),
            },
            AuditCheck {
                name: "input-floor",
                ok: floors,
                detail: format!(
                    "sizes {:?}",
                    self.steps.iter().map(|s| s.input_size).collect::<Vec<_>>()
                ),
            },
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StepReport {
    pub p: usize,
    pub r_in: usize,
    pub r_out: usize,
    pub g_size: usize,
    pub input_size: usize,
    pub input_floor_ok: bool,
    pub output_size: usize,
    pub bases: usize,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProcessReport {
    pub p_hat: usize,
    pub r_hat: usize,
    pub bases: Vec<Vec<usize>>,
    pub fhat_size: usize,
    pub steps: Vec<StepReport>,
}

/// Starts from `p = 1`, `r_1 = m`, `B_1 = F̂_1 = F` with one component on the whole split.
pub fn process_r(family: &SetFamily, split: Arc<Split>, cfg: &Constants, budget: &Budget) -> Result<ProcessOutcome> {
    let mut steps: Vec<ProcessStep> = Vec::new();
    let fail = |steps: Vec<ProcessStep>, source: Error| Error::Process(Box::new(ProcessFailure { steps, source }));
    if split.rank() != cfg.m {
        return Err(Error::InvalidArgument(format!(
            "split rank {} differs from m = {}",
            split.rank(),
            cfg.m
        )));
    }
    let mut r = cfg.m;
    let mut g = family.clone();
    let mut coll = match GCollection::single(split.clone(), family.clone()) {
        Ok(c) => c,
        Err(e) => return Err(fail(steps, e)),
    };
    for p in 1.. {
        let input_size = coll.len();
        let out = match base_sets(r, &g, &coll, cfg, budget) {
            Ok(out) => out,
            Err(e) => return Err(fail(steps, e)),
        };
        let r_out = out.r;
        let next = (r_out != r && r_out != 0).then(|| {
            let parts = out.parts.iter().map(|t| (&t.base, &t.members));
            GCollection::from_parts(split.clone(), r_out, parts)
        });
        steps.push(ProcessStep {
            p,
            r_in: r,
            g_size: g.len(),
            input_size,
            input_floor_ok: meets_input_floor(input_size, cfg),
            output: out,
        });
        let Some(next) = next else {
            let last = &steps.last().expect("just pushed").output;
            return Ok(ProcessOutcome {
                p_hat: if r_out == r { p } else { p + 1 },
                r_hat: r_out,
                bases: last.bases.clone(),
                fhat: last.fdagger.clone(),
                parts: last.parts.clone(),
                steps,
            });
        };
        let next = match next.and_then(|c| {
            let bases = &steps.last().expect("just pushed").output.bases;
            c.validate_over(bases).map(|()| c)
        }) {
            Ok(c) => c,
            Err(e) => return Err(fail(steps, e)),
        };
        g = steps.last().expect("just pushed").output.bases.clone();
        coll = next;
        r = r_out;
    }
    unreachable!("the rank strictly decreases")
}
