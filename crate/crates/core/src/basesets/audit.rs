//! The terminal-rank report: the sandwich `f(r̂) <= |T_{C,X'}| <= |F[C]|` on every terminal
//! base set, and the chain bounding `r̂`, which is only meaningful under the theorem's hypotheses.

use serde::Serialize;

use super::constants::Constants;
use super::process::ProcessOutcome;
use crate::budget::Budget;
use crate::family::{restrict_count, SetFamily};
use crate::gamma::{check_gamma, GammaBase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LineStatus {
    Pass,
    Fail,
    HypothesisUnmet,
}

/// One numeric comparison `lhs < rhs` (or `<=`, per the name).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditLine {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub status: LineStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SandwichLine {
    #[serde(rename = "C")]
    pub base: Vec<usize>,
    #[serde(rename = "Xprime")]
    pub xprime: Vec<usize>,
    pub f_r: f64,
    #[serde(rename = "sizeT")]
    pub size_t: usize,
    pub restricted: usize,
    pub holds: bool,
}

/// `|F[C]|` against the parts on `C` plus the members of `F[C]` no part kept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConsistencyLine {
    #[serde(rename = "C")]
    pub base: Vec<usize>,
    pub restricted: usize,
    pub in_parts: usize,
    pub discarded: usize,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RemarkGReport {
    pub r_hat: usize,
    pub sandwich: Vec<SandwichLine>,
    pub consistency: Vec<ConsistencyLine>,
    pub hypotheses: Vec<AuditLine>,
    pub chain: Vec<AuditLine>,
}

impl RemarkGReport {
    pub fn sandwich_holds(&self) -> bool {
        self.sandwich.iter().all(|l| l.holds)
    }

    pub fn consistent(&self) -> bool {
        self.consistency.iter().all(|l| l.consistent)
    }

    pub fn hypotheses_met(&self) -> bool {
        self.hypotheses.iter().all(|l| l.status == LineStatus::Pass)
    }
}

fn line(name: &str, lhs: f64, rhs: f64, holds: bool, gated: bool) -> AuditLine {
    AuditLine {
        name: name.into(),
        lhs,
        rhs,
        status: match (gated, holds) {
            (true, _) => LineStatus::HypothesisUnmet,
            (false, true) => LineStatus::Pass,
            (false, false) => LineStatus::Fail,
        },
    }
}

pub fn audit_remark_g(outcome: &ProcessOutcome, family: &SetFamily, cfg: &Constants, budget: &Budget) -> RemarkGReport {
    let r_hat = outcome.r_hat;
    let threshold = cfg.threshold();
    let f_r = threshold.eval(r_hat);

    let sandwich: Vec<SandwichLine> = outcome
        .parts
        .iter()
        .map(|t| {
            let restricted = restrict_count(family, &t.base);
            let size_t = t.members.len();
            SandwichLine {
                base: t.base.to_vec(),
                xprime: t.xprime.indices().to_vec(),
                f_r,
                size_t,
                restricted,
                holds: threshold.admits(size_t, r_hat) && size_t <= restricted,
            }
        })
        .collect();

    let consistency = outcome
        .bases
        .iter()
        .map(|c| {
            let on_c: Vec<&SetFamily> = outcome.parts.iter().filter(|t| &t.base == c).map(|t| &t.members).collect();
            let in_parts: usize = on_c.iter().map(|t| t.len()).sum();
            let restricted = restrict_count(family, c);
            let discarded = family
                .iter()
                .filter(|u| u.is_superset(c) && !on_c.iter().any(|t| t.contains(u)))
                .count();
            ConsistencyLine {
                base: c.to_vec(),
                restricted,
                in_parts,
                discarded,
                consistent: in_parts + discarded == restricted,
            }
        })
        .collect();

    let ln_k = (cfg.k as f64).ln();
    let ln_spread = cfg.ln_spread_base();
    let spread_gamma = {
        let b = ln_spread.exp();
        // A base beyond |F| makes every singleton in the shadow a violator.
        if !b.is_finite() || b >= family.len() as f64 {
            Some(false)
        } else {
            GammaBase::from_f64(b)
                .ok()
                .and_then(|b| check_gamma(family, &b, budget).ok())
                .map(|r| r.holds)
        }
    };
    let hypotheses = vec![
        line("c > h > 1", cfg.c, cfg.h, cfg.c > cfg.h && cfg.h > 1.0, false),
        line(
            "ln m > ln(c^c ln k)",
            (cfg.m as f64).ln(),
            cfg.c * cfg.c.ln() + ln_k.ln(),
            (cfg.m as f64).ln() > cfg.c * cfg.c.ln() + ln_k.ln(),
            false,
        ),
        line(
            "ln |F| > m ln(c^c k ln k)",
            (family.len() as f64).ln(),
            cfg.m as f64 * ln_spread,
            (family.len() as f64).ln() > cfg.m as f64 * ln_spread,
            false,
        ),
        line(
            "F satisfies gamma(c^c k ln k)",
            f64::from(u8::from(spread_gamma == Some(true))),
            1.0,
            spread_gamma == Some(true),
            false,
        ),
    ];
    let gated = hypotheses.iter().any(|l| l.status != LineStatus::Pass);

    let mut chain = Vec::new();
    let worst_ln = outcome
        .bases
        .iter()
        .map(|c| (restrict_count(family, c).max(1) as f64).ln() - (ln_spread * -(c.len() as f64) + (family.len() as f64).ln()))
        .fold(f64::NEG_INFINITY, f64::max);
    chain.push(line(
        "max ln(|F[C]| / ((c^c k ln k)^-|C| |F|)) < 0",
        worst_ln,
        0.0,
        worst_ln < 0.0,
        gated,
    ));
    let bound1 = (5.0 * ln_k - 2.0 * cfg.m as f64 * cfg.epsilon.ln()) / ((cfg.c - cfg.h) * cfg.c.ln());
    chain.push(line("r < (5 ln k - 2m ln eps) / ((c - h) ln c)", r_hat as f64, bound1, (r_hat as f64) < bound1, gated));
    let m = cfg.m as f64;
    let bound2 = m / (2.0 * cfg.c) * (ln_k / m + 1.0);
    chain.push(line("(5 ln k - 2m ln eps) / ((c - h) ln c) < m/(2c) (ln k/m + 1)", bound1, bound2, bound1 < bound2, gated));
    let bound3 = m / cfg.c;
    chain.push(line("m/(2c) (ln k/m + 1) < m/c", bound2, bound3, bound2 < bound3, gated));

    RemarkGReport {
        r_hat,
        sandwich,
        consistency,
        hypotheses,
        chain,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basesets::process::process_r;
    use crate::set::Universe;
    use crate::split::Split;
    use std::sync::Arc;

    #[test]
    fn product_family_sandwich() {
        let budget = Budget::default();
        let split = Arc::new(Split::contiguous(Universe::new(8).unwrap(), 2).unwrap());
        let f = SetFamily::all_subsets_of_size(split.universe(), 2).filter(|u| split.holds(u));
        let cfg = Constants::surrogate(0.5, 2.0, 3.0, 3, 2, f.len()).unwrap();
        let out = process_r(&f, split, &cfg, &budget).unwrap();
        let report = audit_remark_g(&out, &f, &cfg, &budget);
        assert!(!report.sandwich.is_empty());
        assert!(report.sandwich_holds());
        assert!(report.consistent());
        // With c = 3 the requirement ln m > ln(c^c ln k) fails for m = 2.
        assert!(!report.hypotheses_met());
        assert!(report.chain.iter().all(|l| l.status == LineStatus::HypothesisUnmet));
    }
}
