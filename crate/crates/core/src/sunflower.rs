//! k-sunflowers: certificates, complete search, a brute-force oracle, and greedy extraction
//! of pairwise-disjoint members from a spread family.

use std::collections::HashMap;

use serde::{Serialize, Serializer};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::family::{shadow_work, SetFamily};
use crate::gamma::{check_gamma, GammaBase};
use crate::set::GroundSet;
use crate::split::combinations;

/// `k` distinct petals whose pairwise intersections all equal `core`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SunflowerCertificate {
    pub petals: Vec<GroundSet>,
    pub core: GroundSet,
}

impl SunflowerCertificate {
    pub fn k(&self) -> usize {
        self.petals.len()
    }
}

impl Serialize for SunflowerCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            core: Vec<usize>,
            petals: Vec<Vec<usize>>,
        }
        Wire {
            core: self.core.to_vec(),
            petals: self.petals.iter().map(GroundSet::to_vec).collect(),
        }
        .serialize(serializer)
    }
}

/// At least two petals, all distinct, every pair meeting in exactly `core`.
pub fn verify_certificate(cert: &SunflowerCertificate) -> bool {
    let petals = &cert.petals;
    if petals.len() < 2 {
        return false;
    }
    for (i, a) in petals.iter().enumerate() {
        if a.universe() != cert.core.universe() {
            return false;
        }
        for b in &petals[i + 1..] {
            if a == b || a.intersection(b) != cert.core {
                return false;
            }
        }
    }
    true
}

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k = {k}; a sunflower needs at least 2 petals")));
    }
    Ok(())
}

struct Packer<'a> {
    residuals: Vec<&'a GroundSet>,
    nodes: u64,
    limit: u64,
}

impl Packer<'_> {
    /// Depth-first search for `need` pairwise-disjoint residuals with index >= `from`.
    fn pack(&mut self, from: usize, used: &GroundSet, need: usize, chosen: &mut Vec<usize>) -> Result<bool> {
        if need == 0 {
            return Ok(true);
        }
        for i in from..self.residuals.len() {
            if self.residuals.len() - i < need {
                break;
            }
            self.nodes += 1;
            if self.nodes > self.limit {
                return Err(Error::BudgetExceeded {
                    what: "sunflower search",
                    limit: self.limit,
                    hint: "raise the sunflower budget",
                });
            }
            let r = self.residuals[i];
            if !r.is_disjoint(used) {
                continue;
            }
            chosen.push(i);
            if self.pack(i + 1, &used.union(r), need - 1, chosen)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
}

/// Complete search. Cores are tried in increasing (cardinality, lexicographic) order; for a
/// core `T`, a k-sunflower exists iff `k` members of `F[T]` have pairwise-disjoint `U - T`.
/// The first certificate found is returned; `None` proves `F` is k-sunflower-free.
pub fn find_sunflower_exact(family: &SetFamily, k: usize, budget: &Budget) -> Result<Option<SunflowerCertificate>> {
    check_k(k)?;
    if family.len() < k {
        return Ok(None);
    }
    if shadow_work(family) > budget.shadow {
        return Err(Error::BudgetExceeded {
            what: "sunflower core bucketing",
            limit: budget.shadow,
            hint: "the shadow is too large to bucket",
        });
    }
    let mut buckets: HashMap<GroundSet, Vec<usize>> = HashMap::new();
    for (i, u) in family.iter().enumerate() {
        for t in u.subsets() {
            buckets.entry(t).or_default().push(i);
        }
    }
    let mut cores: Vec<(GroundSet, Vec<usize>)> = buckets.into_iter().filter(|(_, v)| v.len() >= k).collect();
    cores.sort_unstable_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));

    let mut nodes = 0u64;
    for (core, members) in cores {
        let mut residuals: Vec<(GroundSet, usize)> = members
            .iter()
            .map(|&i| (family.members()[i].difference(&core), i))
            .collect();
        // Small residuals first: they block fewer others.
        residuals.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        let mut packer = Packer {
            residuals: residuals.iter().map(|(r, _)| r).collect(),
            nodes,
            limit: budget.sunflower,
        };
        let mut chosen = Vec::with_capacity(k);
        let found = packer.pack(0, &core.universe().empty_set(), k, &mut chosen)?;
        nodes = packer.nodes;
        if found {
            let mut petals: Vec<GroundSet> = chosen
                .iter()
                .map(|&c| family.members()[residuals[c].1].clone())
                .collect();
            petals.sort_unstable();
            return Ok(Some(SunflowerCertificate { petals, core }));
        }
    }
    Ok(None)
}

/// A k-sunflower with `set` among its petals, for families that were k-sunflower-free
/// before `set` was added. Petals other than `set` must meet it in exactly the core.
pub fn find_sunflower_through(
    family: &SetFamily,
    set: &GroundSet,
    k: usize,
    budget: &Budget,
) -> Result<Option<SunflowerCertificate>> {
    check_k(k)?;
    if !family.contains(set) {
        return Err(Error::InvalidArgument(format!("{set} is not a member")));
    }
    let mut cores: Vec<GroundSet> = set.subsets().collect();
    cores.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut nodes = 0u64;
    for core in cores {
        let mut residuals: Vec<(GroundSet, &GroundSet)> = family
            .iter()
            .filter(|u| *u != set && u.intersection(set) == core)
            .map(|u| (u.difference(&core), u))
            .collect();
        if residuals.len() < k - 1 {
            continue;
        }
        residuals.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        let mut packer = Packer {
            residuals: residuals.iter().map(|(r, _)| r).collect(),
            nodes,
            limit: budget.sunflower,
        };
        let mut chosen = Vec::with_capacity(k - 1);
        let found = packer.pack(0, &core.universe().empty_set(), k - 1, &mut chosen)?;
        nodes = packer.nodes;
        if found {
            let mut petals: Vec<GroundSet> = chosen.iter().map(|&c| residuals[c].1.clone()).collect();
            petals.push(set.clone());
            petals.sort_unstable();
            return Ok(Some(SunflowerCertificate { petals, core }));
        }
    }
    Ok(None)
}

/// Brute-force oracle: for every core in the shadow, every k-subset of the members
/// containing it is tested directly. Returns `true` when `F` is k-sunflower-free.
pub fn sunflower_free_oracle(family: &SetFamily, k: usize, budget: &Budget) -> Result<bool> {
    check_k(k)?;
    let mut cores: Vec<GroundSet> = Vec::new();
    for u in family {
        for t in u.subsets() {
            if !cores.contains(&t) {
                cores.push(t);
            }
        }
    }
    let mut work = 0u64;
    for core in &cores {
        let bucket: Vec<&GroundSet> = family.iter().filter(|u| u.is_superset(core)).collect();
        if bucket.len() < k {
            continue;
        }
        for combo in combinations(&bucket, k) {
            work += 1;
            if work > budget.oracle {
                return Err(Error::BudgetExceeded {
                    what: "sunflower oracle",
                    limit: budget.oracle,
                    hint: "instance too large for brute force",
                });
            }
            let ok = (0..k).all(|i| (i + 1..k).all(|j| combo[i].intersection(combo[j]) == *core));
            if ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Greedy disjoint extraction under Γ(b): take the first remaining member, drop everything
/// meeting it, repeat `k` times.
///
/// With `b >= k m` each pick removes fewer than `|F| / k` members (each of its at most `m`
/// elements lies in fewer than `|F| / b` members), so the greedy cannot stall.
pub fn extract_disjoint_via_gamma(
    family: &SetFamily,
    k: usize,
    b: &GammaBase,
    budget: &Budget,
) -> Result<Option<SunflowerCertificate>> {
    check_k(k)?;
    let report = check_gamma(family, b, budget)?;
    if !report.holds {
        return Err(Error::GammaViolated(Box::new(report)));
    }
    let mut remaining: Vec<&GroundSet> = family.iter().collect();
    let mut petals = Vec::with_capacity(k);
    while petals.len() < k {
        if remaining.is_empty() {
            break;
        }
        let pick = remaining.remove(0);
        remaining.retain(|u| u.is_disjoint(pick));
        petals.push(pick.clone());
    }
    if petals.len() < k {
        let m = family.iter().map(GroundSet::len).max().unwrap_or(0);
        debug_assert!(
            b.to_f64() < (k * m) as f64,
            "greedy extraction stalled although b >= km"
        );
        return Ok(None);
    }
    Ok(Some(SunflowerCertificate {
        petals,
        core: family.universe().empty_set(),
    }))
}
