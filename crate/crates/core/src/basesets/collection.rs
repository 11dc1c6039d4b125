//! G-collections: a family partitioned into components, one per rank-`m'` subsplit.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::set::GroundSet;
use crate::split::{Split, Subsplit};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GCollection {
    split: Arc<Split>,
    rank: usize,
    components: BTreeMap<Subsplit, SetFamily>,
    base: SetFamily,
}

impl GCollection {
    /// One component on the whole split.
    pub fn single(split: Arc<Split>, family: SetFamily) -> Result<Self> {
        let full = Subsplit::full_arc(split.clone());
        let rank = full.rank();
        Self::from_components(split, rank, [(full, family)])
    }

    pub fn from_components(
        split: Arc<Split>,
        rank: usize,
        components: impl IntoIterator<Item = (Subsplit, SetFamily)>,
    ) -> Result<Self> {
        let universe = split.universe();
        let mut map = BTreeMap::new();
        let mut base = SetFamily::empty(universe, split.rank());
        for (sub, fam) in components {
            if sub.rank() != rank {
                return Err(Error::InputCondition(format!(
                    "component {:?} has rank {}, expected {rank}",
                    sub.indices(),
                    sub.rank()
                )));
            }
            if sub.parent().as_ref() != split.as_ref() {
                return Err(Error::InputCondition("component subsplit belongs to another split".into()));
            }
            if fam.is_empty() {
                return Err(Error::InputCondition(format!("component {:?} is empty", sub.indices())));
            }
            if let Some(u) = fam.iter().find(|u| !split.holds(u) || u.len() != split.rank()) {
                return Err(Error::InputCondition(format!("member {u} is not a transversal of the split")));
            }
            if fam.iter().any(|u| base.contains(u)) {
                return Err(Error::InputCondition("components are not pairwise disjoint".into()));
            }
            base = base.union(&fam)?;
            if map.insert(sub.clone(), fam).is_some() {
                return Err(Error::InputCondition(format!("duplicate component {:?}", sub.indices())));
            }
        }
        Ok(GCollection {
            split,
            rank,
            components: map,
            base,
        })
    }

    /// Groups each part under the subsplit its base set meets. Parts sharing a subsplit merge.
    pub fn from_parts<'a>(
        split: Arc<Split>,
        rank: usize,
        parts: impl IntoIterator<Item = (&'a GroundSet, &'a SetFamily)>,
    ) -> Result<Self> {
        let mut grouped: BTreeMap<Subsplit, SetFamily> = BTreeMap::new();
        for (b, fam) in parts {
            let sub = Subsplit::hit_by(&split, b);
            match grouped.get_mut(&sub) {
                Some(existing) => *existing = existing.union(fam)?,
                None => {
                    grouped.insert(sub, fam.clone());
                }
            }
        }
        Self::from_components(split, rank, grouped)
    }

    pub fn split(&self) -> &Arc<Split> {
        &self.split
    }

    /// The component rank `m'`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn components(&self) -> &BTreeMap<Subsplit, SetFamily> {
        &self.components
    }

    /// The union of all components.
    pub fn base(&self) -> &SetFamily {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    /// Checks the collection property against `g`: every member projects onto its
    /// component in an `m'`-set of `g`.
    pub fn validate_over(&self, g: &SetFamily) -> Result<()> {
        for (sub, fam) in &self.components {
            for u in fam {
                let proj = u.intersection(sub.union());
                if proj.len() != self.rank || !g.contains(&proj) {
                    return Err(Error::InputCondition(format!(
                        "member {u} of component {:?} projects to {proj}, which is not in G",
                        sub.indices()
                    )));
                }
            }
        }
        Ok(())
    }
}
