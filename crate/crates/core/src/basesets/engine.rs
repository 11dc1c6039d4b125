//! The base-set extraction loop and the elementary Γ̂ verifier.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use serde::Serialize;

use super::collection::GCollection;
use super::constants::Constants;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::family::{restrict, shadow_contains, SetFamily};
use crate::gamma::{check_gamma_on_subsplit, maximal_among, subsplit_candidates, GammaBase, GammaReport};
use crate::set::GroundSet;
use crate::split::{combinations, Subsplit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `r < m'`: Γ(b) on `X' \ B` over `G`, plus the floor when `r = 0`.
    I,
    /// `r = m'`: a bucket of size at least `f(m')`.
    II,
}

/// A candidate `T_{B,X'}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryGammaHat {
    pub base: GroundSet,
    pub xprime: Subsplit,
    pub members: SetFamily,
    pub variant: Variant,
}

impl ElementaryGammaHat {
    pub fn r(&self) -> usize {
        self.base.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaHatVerdict {
    pub holds: bool,
    /// The first clause that failed, e.g. `"i(c)"`.
    pub failed: Option<&'static str>,
    /// The Γ(b) report for variant i, when it was evaluated.
    pub gamma: Option<GammaReport>,
}

impl GammaHatVerdict {
    fn pass(gamma: Option<GammaReport>) -> Self {
        GammaHatVerdict {
            holds: true,
            failed: None,
            gamma,
        }
    }

    fn fail(clause: &'static str, gamma: Option<GammaReport>) -> Self {
        GammaHatVerdict {
            holds: false,
            failed: Some(clause),
            gamma,
        }
    }
}

/// Verifies the Γ̂-i or Γ̂-ii clauses for `cand` inside the collection `coll` over `g`.
pub fn is_elementary_gamma_hat(
    cand: &ElementaryGammaHat,
    coll: &GCollection,
    g: &SetFamily,
    cfg: &Constants,
    budget: &Budget,
) -> Result<GammaHatVerdict> {
    let mp = coll.rank();
    let component = coll.components().get(&cand.xprime).ok_or_else(|| {
        Error::InvalidArgument(format!("{:?} is not a component of the collection", cand.xprime))
    })?;
    if !cand.xprime.holds(&cand.base) {
        return Err(Error::InvalidArgument(format!(
            "base set {} is not on {:?}",
            cand.base, cand.xprime
        )));
    }
    let r = cand.r();
    let t = &cand.members;
    let clause = |i: &'static str, ii: &'static str| match cand.variant {
        Variant::I => i,
        Variant::II => ii,
    };
    match cand.variant {
        Variant::I if r >= mp => return Ok(GammaHatVerdict::fail("i(a)", None)),
        Variant::II if r != mp => return Ok(GammaHatVerdict::fail("ii(a)", None)),
        _ => {}
    }
    if !shadow_contains(g, &cand.base) {
        return Ok(GammaHatVerdict::fail(clause("i(b)", "ii(b)"), None));
    }
    if t.is_empty() || !t.is_subfamily(component) {
        return Ok(GammaHatVerdict::fail(clause("i(c)", "ii(c)"), None));
    }
    match cand.variant {
        Variant::I => {
            if t.iter().any(|u| !u.is_superset(&cand.base)) {
                return Ok(GammaHatVerdict::fail("i(c)", None));
            }
            let report = check_gamma_on_subsplit(t, &cand.xprime.minus(&cand.base), g, &cfg.gamma_base()?, budget)?;
            if !report.holds {
                return Ok(GammaHatVerdict::fail("i(c)", Some(report)));
            }
            if r == 0 && !cfg.admits_floor(t.len()) {
                return Ok(GammaHatVerdict::fail("i(d)", Some(report)));
            }
            Ok(GammaHatVerdict::pass(Some(report)))
        }
        Variant::II => {
            let bucket = t.iter().filter(|u| u.is_superset(&cand.base)).count();
            if mp < cfg.m && !cfg.threshold().admits(bucket, mp) {
                return Ok(GammaHatVerdict::fail("ii(c)", None));
            }
            Ok(GammaHatVerdict::pass(None))
        }
    }
}

/// One extraction, as written to the JSONL trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub p: Option<usize>,
    pub r: usize,
    #[serde(rename = "B")]
    pub base: Vec<usize>,
    #[serde(rename = "Xprime")]
    pub xprime: Vec<usize>,
    #[serde(rename = "sizeT")]
    pub size_t: usize,
    pub cumulative: usize,
}

/// What one pass of the outer loop collected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LevelSummary {
    pub r: usize,
    pub extractions: usize,
    pub size: usize,
    pub meets_bound: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaseSetsOutput {
    pub mprime: usize,
    pub r: usize,
    pub bases: SetFamily,
    pub fdagger: SetFamily,
    pub parts: Vec<ElementaryGammaHat>,
    pub trace: Vec<TraceRecord>,
    pub levels: Vec<LevelSummary>,
}

impl BaseSetsOutput {
    pub fn report(&self) -> BaseSetsReport {
        BaseSetsReport {
            mprime: self.mprime,
            r: self.r,
            bases: self.bases.iter().map(GroundSet::to_vec).collect(),
            fdagger_size: self.fdagger.len(),
            parts: self
                .parts
                .iter()
                .map(|p| PartReport {
                    base: p.base.to_vec(),
                    xprime: p.xprime.indices().to_vec(),
                    size_t: p.members.len(),
                    variant: p.variant,
                })
                .collect(),
            levels: self.levels.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PartReport {
    #[serde(rename = "B")]
    pub base: Vec<usize>,
    #[serde(rename = "Xprime")]
    pub xprime: Vec<usize>,
    #[serde(rename = "sizeT")]
    pub size_t: usize,
    pub variant: Variant,
}

#[derive(Debug, Clone, Serialize)]
pub struct BaseSetsReport {
    pub mprime: usize,
    pub r: usize,
    pub bases: Vec<Vec<usize>>,
    #[serde(rename = "fdaggerSize")]
    pub fdagger_size: usize,
    pub parts: Vec<PartReport>,
    pub levels: Vec<LevelSummary>,
}

/// Carried by [`Error::GuaranteeViolated`].
#[derive(Debug, Clone)]
pub struct BaseSetsFailure {
    pub reason: String,
    pub trace: Vec<TraceRecord>,
    pub levels: Vec<LevelSummary>,
    pub audit: Option<OutputAudit>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditCheck {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutputAudit {
    pub checks: Vec<AuditCheck>,
}

impl OutputAudit {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditCheck> {
        self.checks.iter().filter(|c| !c.ok)
    }
}

/// `size * 3^(m' - r + 1) >= total`.
pub fn meets_size_bound(size: usize, total: usize, mprime: usize, r: usize) -> bool {
    BigUint::from(size) * BigUint::from(3u32).pow((mprime - r + 1) as u32) >= BigUint::from(total)
}

/// `size * 9^m >= fam_size`.
pub fn meets_input_floor(size: usize, cfg: &Constants) -> bool {
    BigUint::from(size) * BigUint::from(9u32).pow(cfg.m as u32) >= BigUint::from(cfg.fam_size)
}

fn check_inputs(mprime: usize, g: &SetFamily, coll: &GCollection, cfg: &Constants) -> Result<()> {
    if mprime < 1 || mprime > cfg.m {
        return Err(Error::InputCondition(format!("m' = {mprime} is outside [1, {}]", cfg.m)));
    }
    if coll.rank() != mprime {
        return Err(Error::InputCondition(format!(
            "collection has rank {}, expected m' = {mprime}",
            coll.rank()
        )));
    }
    coll.split().universe().check(g.universe())?;
    let split = coll.split();
    if let Some(u) = g.iter().find(|u| u.len() != mprime || !split.holds(u)) {
        return Err(Error::InputCondition(format!("{u} in G is not an m'-set on the split")));
    }
    if let Some(u) = g.iter().find(|u| !shadow_contains(coll.base(), u)) {
        return Err(Error::InputCondition(format!("{u} in G is outside the shadow of F'")));
    }
    if !meets_input_floor(coll.len(), cfg) {
        return Err(Error::InputCondition(format!(
            "|F'| = {} is below 3^-{} * {}",
            coll.len(),
            2 * cfg.m,
            cfg.fam_size
        )));
    }
    coll.validate_over(g)
}

/// Removes `T[S]` for a maximal violator `S` until `T` satisfies Γ(b) over `candidates`.
fn trim(mut t: SetFamily, candidates: &[GroundSet], b: &GammaBase) -> Result<SetFamily> {
    let empty = t.universe().empty_set();
    while !t.is_empty() {
        match maximal_among(&t, candidates, b, &empty)? {
            None => break,
            Some(s) => t = t.filter(|u| !u.is_superset(&s)),
        }
    }
    Ok(t)
}

/// Runs the extraction loop from `r = m'` down to 0 and returns at the first rank whose
/// collected family reaches `3^(r - m' - 1) |F'|`. The output is audited before it is returned.
pub fn base_sets(
    mprime: usize,
    g: &SetFamily,
    coll: &GCollection,
    cfg: &Constants,
    budget: &Budget,
) -> Result<BaseSetsOutput> {
    check_inputs(mprime, g, coll, cfg)?;
    let b = cfg.gamma_base()?;
    let threshold = cfg.threshold();
    let universe = coll.split().universe();
    let comps: Vec<&Subsplit> = coll.components().keys().collect();
    let mut working: Vec<SetFamily> = coll.components().values().cloned().collect();
    let mut trace = Vec::new();
    let mut levels = Vec::new();
    let mut gamma_candidates: HashMap<(usize, GroundSet), Vec<GroundSet>> = HashMap::new();

    for r in (0..=mprime).rev() {
        // Candidate base sets: r-subsets of the members' projections, in lexicographic order.
        let cands: Vec<Vec<GroundSet>> = comps
            .iter()
            .zip(&working)
            .map(|(sub, fam)| {
                let mut seen = HashSet::new();
                for u in fam {
                    let proj = u.intersection(sub.union()).to_vec();
                    for pick in combinations(&proj, r) {
                        seen.insert(GroundSet::from_labels(universe, pick).expect("labels from a member"));
                    }
                }
                let mut v: Vec<GroundSet> = seen.into_iter().collect();
                v.sort_unstable();
                v
            })
            .collect();
        let mut failed: Vec<HashSet<GroundSet>> = vec![HashSet::new(); comps.len()];
        let mut used: HashSet<(Option<usize>, GroundSet)> = HashSet::new();
        let mut parts: Vec<ElementaryGammaHat> = Vec::new();
        let mut cumulative = 0usize;
        loop {
            let mut found = None;
            'scan: for (idx, sub) in comps.iter().enumerate() {
                if working[idx].is_empty() {
                    continue;
                }
                for base in &cands[idx] {
                    let key = (if r == 0 { Some(idx) } else { None }, base.clone());
                    if used.contains(&key) || failed[idx].contains(base) {
                        continue;
                    }
                    let bucket = restrict(&working[idx], base)?;
                    let t = if bucket.is_empty() {
                        None
                    } else if r == mprime {
                        threshold.admits(bucket.len(), mprime).then_some(bucket)
                    } else {
                        let cand_key = (idx, base.clone());
                        if !gamma_candidates.contains_key(&cand_key) {
                            let list = subsplit_candidates(&sub.minus(base), g, budget)?;
                            gamma_candidates.insert(cand_key.clone(), list);
                        }
                        let t = trim(bucket, &gamma_candidates[&cand_key], &b)?;
                        (!t.is_empty() && (r > 0 || cfg.admits_floor(t.len()))).then_some(t)
                    };
                    match t {
                        Some(t) => {
                            found = Some((idx, key, t));
                            break 'scan;
                        }
                        None => {
                            failed[idx].insert(base.clone());
                        }
                    }
                }
            }
            let Some((idx, key, t)) = found else { break };
            working[idx] = working[idx].minus(&t);
            failed[idx].clear();
            cumulative += t.len();
            trace.push(TraceRecord {
                p: None,
                r,
                base: key.1.to_vec(),
                xprime: comps[idx].indices().to_vec(),
                size_t: t.len(),
                cumulative,
            });
            parts.push(ElementaryGammaHat {
                base: key.1.clone(),
                xprime: comps[idx].clone(),
                members: t,
                variant: if r == mprime { Variant::II } else { Variant::I },
            });
            used.insert(key);
        }
        let meets = meets_size_bound(cumulative, coll.len(), mprime, r);
        levels.push(LevelSummary {
            r,
            extractions: parts.len(),
            size: cumulative,
            meets_bound: meets,
        });
        if meets {
            let mut fdagger = SetFamily::empty(universe, coll.split().rank());
            for p in &parts {
                fdagger = fdagger.union(&p.members)?;
            }
            let bases = SetFamily::collect(universe, parts.iter().map(|p| p.base.clone()))?;
            let out = BaseSetsOutput {
                mprime,
                r,
                bases,
                fdagger,
                parts,
                trace,
                levels,
            };
            let audit = audit_output(&out, g, coll, cfg, budget)?;
            if !audit.all_ok() {
                let reason = audit
                    .failures()
                    .map(|c| format!("{}: {}", c.name, c.detail))
                    .collect::<Vec<_>>()
                    .join("; ");
                return Err(Error::GuaranteeViolated(Box::new(BaseSetsFailure {
                    reason: format!("output audit failed ({reason})"),
                    trace: out.trace,
                    levels: out.levels,
                    audit: Some(audit),
                })));
            }
            return Ok(out);
        }
    }
    Err(Error::GuaranteeViolated(Box::new(BaseSetsFailure {
        reason: format!("no rank in [0, {mprime}] collected 3^(r - m' - 1) |F'| of |F'| = {}", coll.len()),
        trace,
        levels,
        audit: None,
    })))
}

/// Re-checks the output of [`base_sets`] against its input: size bound, disjoint parts
/// covering `F†`, unique base sets, the bucket bound when `r < m'`, and Γ(b) plus the
/// floor on every component when `r = 0`. Γ is re-evaluated by the gamma module.
pub fn audit_output(
    out: &BaseSetsOutput,
    g: &SetFamily,
    coll: &GCollection,
    cfg: &Constants,
    budget: &Budget,
) -> Result<OutputAudit> {
    let mut checks = Vec::new();
    let mprime = out.mprime;
    let ok = meets_size_bound(out.fdagger.len(), coll.len(), mprime, out.r);
    checks.push(AuditCheck {
        name: "size-bound",
        ok,
        detail: format!(
            "|F†| = {}, |F'| = {}, factor 3^{}",
            out.fdagger.len(),
            coll.len(),
            mprime - out.r + 1
        ),
    });

    let total: usize = out.parts.iter().map(|p| p.members.len()).sum();
    let ok = total == out.fdagger.len()
        && out.parts.iter().all(|p| p.members.is_subfamily(&out.fdagger))
        && out.fdagger.is_subfamily(coll.base());
    checks.push(AuditCheck {
        name: "disjoint-union",
        ok,
        detail: format!("sum of |T| = {total}, |F†| = {}", out.fdagger.len()),
    });

    let mut keys = HashSet::new();
    let ok = out.parts.iter().all(|p| {
        let key = if out.r == 0 {
            (p.base.clone(), Some(p.xprime.indices().to_vec()))
        } else {
            (p.base.clone(), None)
        };
        keys.insert(key)
    });
    checks.push(AuditCheck {
        name: "unique-bases",
        ok,
        detail: format!("{} parts", out.parts.len()),
    });

    let mut bad_parts = Vec::new();
    for p in &out.parts {
        if p.r() != out.r {
            bad_parts.push(format!("{} has rank {}", p.base, p.r()));
            continue;
        }
        let verdict = is_elementary_gamma_hat(p, coll, g, cfg, budget)?;
        if !verdict.holds {
            bad_parts.push(format!("{} on {:?} fails {}", p.base, p.xprime.indices(), verdict.failed.unwrap_or("?")));
        }
    }
    checks.push(AuditCheck {
        name: "elementary-parts",
        ok: bad_parts.is_empty(),
        detail: if bad_parts.is_empty() {
            "all parts verified".into()
        } else {
            bad_parts.join(", ")
        },
    });

    if out.r < mprime {
        let threshold = cfg.threshold();
        let mut worst = 0usize;
        for (sub, comp) in coll.components() {
            let part = out.fdagger.filter(|u| comp.contains(u));
            for u in g.iter().filter(|u| sub.holds(u)) {
                worst = worst.max(part.iter().filter(|v| v.is_superset(u)).count());
            }
        }
        checks.push(AuditCheck {
            name: "remark-a",
            ok: worst == 0 || !threshold.admits(worst, mprime),
            detail: format!("largest |F†_X'[U]| = {worst}, f(m') = {:e}", threshold.eval(mprime)),
        });
    }

    if out.r == 0 {
        let b = cfg.gamma_base()?;
        let mut gamma_bad = Vec::new();
        let mut floor_bad = Vec::new();
        for (sub, comp) in coll.components() {
            let part = out.fdagger.filter(|u| comp.contains(u));
            if part.is_empty() {
                continue;
            }
            let report = check_gamma_on_subsplit(&part, sub, g, &b, budget)?;
            if !report.holds {
                gamma_bad.push(format!("{:?} witness {}", sub.indices(), report.witness_string()));
            }
            if !cfg.admits_floor(part.len()) {
                floor_bad.push(format!("{:?} has {}", sub.indices(), part.len()));
            }
        }
        checks.push(AuditCheck {
            name: "remark-c",
            ok: gamma_bad.is_empty(),
            detail: if gamma_bad.is_empty() {
                "every component satisfies gamma(b)".into()
            } else {
                gamma_bad.join(", ")
            },
        });
        checks.push(AuditCheck {
            name: "remark-b-floor",
            ok: floor_bad.is_empty(),
            detail: if floor_bad.is_empty() {
                format!("every component has at least {:e}", cfg.floor())
            } else {
                floor_bad.join(", ")
            },
        });
    }
    Ok(OutputAudit { checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::split::Split;
    use std::sync::Arc;

    fn product_family(split: &Split) -> SetFamily {
        let all = SetFamily::all_subsets_of_size(split.universe(), split.rank());
        all.filter(|u| split.holds(u))
    }

    #[test]
    fn size_bound_is_exact() {
        assert!(meets_size_bound(1, 3, 1, 1));
        assert!(!meets_size_bound(1, 4, 1, 1));
        assert!(meets_size_bound(1, 27, 2, 0));
        assert!(!meets_size_bound(1, 28, 2, 0));
    }

    #[test]
    fn top_rank_when_buckets_are_large() {
        // f(m') below 1 makes every projection bucket qualify.
        let split = Arc::new(Split::contiguous(crate::set::Universe::new(6).unwrap(), 3).unwrap());
        let f = product_family(&split);
        let cfg = Constants::surrogate(0.5, 2.0, 3.0, 3, 3, f.len()).unwrap();
        let sub = Subsplit::from_arc(split.clone(), vec![0, 1]).unwrap();
        let coll = GCollection::from_components(split.clone(), 2, [(sub.clone(), f.clone())]).unwrap();
        let g = SetFamily::collect(f.universe(), f.iter().map(|u| u.intersection(sub.union()))).unwrap();
        let out = base_sets(2, &g, &coll, &cfg, &Budget::default()).unwrap();
        assert_eq!(out.r, 2);
        assert_eq!(out.fdagger, f);
        assert_eq!(out.bases, g);
        assert!(out.parts.iter().all(|p| p.members.len() == 2 && p.variant == Variant::II));
        assert_eq!(out.trace.last().unwrap().cumulative, 8);
    }

    #[test]
    fn input_conditions() {
        let split = Arc::new(Split::contiguous(crate::set::Universe::new(6).unwrap(), 3).unwrap());
        let f = product_family(&split);
        let cfg = Constants::surrogate(0.5, 2.0, 3.0, 3, 3, f.len()).unwrap();
        let coll = GCollection::single(split.clone(), f.clone()).unwrap();
        let budget = Budget::default();
        assert!(matches!(base_sets(4, &f, &coll, &cfg, &budget), Err(Error::InputCondition(_))));
        assert!(matches!(base_sets(2, &f, &coll, &cfg, &budget), Err(Error::InputCondition(_))));
        let big = cfg.clone().with_fam_size(f.len() * 9usize.pow(3) + 1);
        assert!(matches!(base_sets(3, &f, &coll, &big, &budget), Err(Error::InputCondition(_))));
        let partial = f.filter(|u| u.contains(0));
        assert!(matches!(base_sets(3, &partial, &coll, &cfg, &budget), Err(Error::InputCondition(_))));
    }

    fn star_setup() -> (Arc<Split>, SetFamily, GCollection, Constants) {
        // Twelve members on a 3-split of 12 labels, all through label 0.
        let split = Arc::new(Split::contiguous(crate::set::Universe::new(12).unwrap(), 3).unwrap());
        let f = product_family(&split).filter(|u| u.contains(0));
        let f = SetFamily::collect(split.universe(), f.iter().take(12).cloned()).unwrap();
        // f(3) is about 6, so no single member forms a top-rank bucket.
        let cfg = Constants::surrogate(0.9, 1.5, 1.5, 2, 3, f.len() * 500).unwrap();
        let coll = GCollection::single(split.clone(), f.clone()).unwrap();
        (split, f, coll, cfg)
    }

    #[test]
    fn star_family_keeps_the_centre() {
        let (_, f, coll, cfg) = star_setup();
        assert_eq!(f.len(), 12);
        let budget = Budget::default();
        let out = base_sets(3, &f, &coll, &cfg, &budget).unwrap();
        assert!(out.r >= 1, "r = {}", out.r);
        assert!(out.r < 3);
        let centre = GroundSet::from_labels(f.universe(), [0]).unwrap();
        assert!(out.bases.iter().all(|b| b.is_superset(&centre)));
        let audit = audit_output(&out, &f, &coll, &cfg, &budget).unwrap();
        assert!(audit.all_ok(), "{audit:?}");
    }

    fn check<'a>(audit: &'a OutputAudit, name: &str) -> &'a AuditCheck {
        audit.checks.iter().find(|c| c.name == name).unwrap()
    }

    #[test]
    fn rank_zero_audit_lines() {
        // Not reachable through base_sets at this scale, so the output is built by hand.
        let split = Arc::new(Split::contiguous(crate::set::Universe::new(12).unwrap(), 3).unwrap());
        let f = product_family(&split);
        let cfg = Constants::surrogate(0.5, 1.2, 1.5, 2, 3, f.len()).unwrap();
        let coll = GCollection::single(split.clone(), f.clone()).unwrap();
        let budget = Budget::default();
        let whole = |members: SetFamily| BaseSetsOutput {
            mprime: 3,
            r: 0,
            bases: SetFamily::collect(f.universe(), [f.universe().empty_set()]).unwrap(),
            fdagger: members.clone(),
            parts: vec![ElementaryGammaHat {
                base: f.universe().empty_set(),
                xprime: Subsplit::full_arc(split.clone()),
                members,
                variant: Variant::I,
            }],
            trace: Vec::new(),
            levels: Vec::new(),
        };
        let audit = audit_output(&whole(f.clone()), &f, &coll, &cfg, &budget).unwrap();
        assert!(check(&audit, "remark-c").ok);
        assert!(check(&audit, "remark-b-floor").ok);
        assert!(check(&audit, "size-bound").ok);

        let star = f.filter(|u| u.contains(0));
        let audit = audit_output(&whole(star.clone()), &f, &coll, &cfg, &budget).unwrap();
        assert!(!check(&audit, "remark-c").ok);
        assert!(check(&audit, "remark-c").detail.contains("{0}"));
        let tiny = SetFamily::collect(f.universe(), star.iter().take(2).cloned()).unwrap();
        let audit = audit_output(&whole(tiny), &f, &coll, &cfg, &budget).unwrap();
        assert!(!check(&audit, "remark-b-floor").ok);
    }

    #[test]
    fn verifier_clauses() {
        let (split, f, coll, cfg) = star_setup();
        let budget = Budget::default();
        let full = Subsplit::full_arc(split.clone());
        let empty = f.universe().empty_set();
        // r = 0 with a small T fails the floor.
        let small = ElementaryGammaHat {
            base: empty.clone(),
            xprime: full.clone(),
            members: SetFamily::collect(f.universe(), f.iter().take(1).cloned()).unwrap(),
            variant: Variant::I,
        };
        let v = is_elementary_gamma_hat(&small, &coll, &f, &cfg, &budget).unwrap();
        assert!(!v.holds);
        // The whole star violates Γ(b) at {0}; the witness comes from the gamma module.
        let planted = ElementaryGammaHat {
            members: f.clone(),
            ..small.clone()
        };
        let v = is_elementary_gamma_hat(&planted, &coll, &f, &cfg, &budget).unwrap();
        assert_eq!(v.failed, Some("i(c)"));
        assert_eq!(v.gamma.unwrap().witness.unwrap().to_vec(), vec![0]);
        // Variant ii at m' = m: the threshold clause is vacuous.
        let top = ElementaryGammaHat {
            base: f.members()[0].clone(),
            xprime: full.clone(),
            members: SetFamily::collect(f.universe(), [f.members()[0].clone()]).unwrap(),
            variant: Variant::II,
        };
        assert!(is_elementary_gamma_hat(&top, &coll, &f, &cfg.clone().with_fam_size(1 << 40), &budget)
            .unwrap()
            .holds);
        // A base set off the subsplit is malformed.
        let off = Subsplit::from_arc(split.clone(), vec![1, 2]).unwrap();
        let sub_coll = GCollection::from_components(split, 3, [(full, f.clone())]).unwrap();
        let bad = ElementaryGammaHat {
            xprime: off,
            ..top
        };
        assert!(is_elementary_gamma_hat(&bad, &sub_coll, &f, &cfg, &budget).is_err());
    }
}
