//! Set families and the primitive operations on them: restriction, shadow, sets on a subsplit.

use std::collections::HashSet;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::set::{GroundSet, Universe};
use crate::split::Subsplit;

/// A family of distinct subsets of one universe, each of cardinality at most `max_card`.
///
/// Members are kept in canonical (lexicographic) order, so two families are equal exactly
/// when their member lists are bitwise equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    universe: Universe,
    max_card: usize,
    members: Vec<GroundSet>,
}

impl SetFamily {
    /// Fails on a duplicate member, a member above `max_card`, or a member from another universe.
    pub fn new(universe: Universe, max_card: usize, members: Vec<GroundSet>) -> Result<Self> {
        let mut members = members;
        for set in &members {
            universe.check(set.universe())?;
            if set.len() > max_card {
                return Err(Error::CardinalityExceeded {
                    set: set.to_string(),
                    card: set.len(),
                    bound: max_card,
                });
            }
        }
        members.sort_unstable();
        if let Some(pair) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateMember(pair[0].to_string()));
        }
        Ok(SetFamily {
            universe,
            max_card,
            members,
        })
    }

    /// Deduplicates and takes `max_card` from the largest member.
    pub fn collect<I: IntoIterator<Item = GroundSet>>(universe: Universe, sets: I) -> Result<Self> {
        let mut members: Vec<GroundSet> = sets.into_iter().collect();
        for set in &members {
            universe.check(set.universe())?;
        }
        members.sort_unstable();
        members.dedup();
        let max_card = members.iter().map(GroundSet::len).max().unwrap_or(0);
        Ok(SetFamily {
            universe,
            max_card,
            members,
        })
    }

    pub fn from_label_lists(n: usize, lists: &[&[usize]]) -> Result<Self> {
        let universe = Universe::new(n)?;
        let sets = lists
            .iter()
            .map(|l| GroundSet::from_labels(universe, l.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        let max_card = sets.iter().map(GroundSet::len).max().unwrap_or(0);
        SetFamily::new(universe, max_card, sets)
    }

    pub fn empty(universe: Universe, max_card: usize) -> Self {
        SetFamily {
            universe,
            max_card,
            members: Vec::new(),
        }
    }

    /// All `p`-subsets of the universe, in lexicographic order.
    pub fn all_subsets_of_size(universe: Universe, p: usize) -> SetFamily {
        let mut members = Vec::new();
        let n = universe.size();
        let mut combo: Vec<usize> = (0..p).collect();
        if p <= n {
            loop {
                members.push(GroundSet::from_labels(universe, combo.iter().copied()).expect("labels in range"));
                let Some(i) = (0..p).rev().find(|&i| combo[i] < n - p + i) else {
                    break;
                };
                combo[i] += 1;
                for j in i + 1..p {
                    combo[j] = combo[j - 1] + 1;
                }
            }
        }
        members.sort_unstable();
        SetFamily {
            universe,
            max_card: p,
            members,
        }
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    /// The declared cardinality bound `m`.
    pub fn max_card(&self) -> usize {
        self.max_card
    }

    pub fn members(&self) -> &[GroundSet] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GroundSet> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, set: &GroundSet) -> bool {
        self.members.binary_search(set).is_ok()
    }

    /// True when every member has cardinality exactly `m`.
    pub fn is_uniform(&self, m: usize) -> bool {
        self.members.iter().all(|s| s.len() == m)
    }

    pub fn with_max_card(mut self, max_card: usize) -> Result<Self> {
        if let Some(set) = self.members.iter().find(|s| s.len() > max_card) {
            return Err(Error::CardinalityExceeded {
                set: set.to_string(),
                card: set.len(),
                bound: max_card,
            });
        }
        self.max_card = max_card;
        Ok(self)
    }

    /// Keeps the members for which `keep` holds; order is preserved.
    pub fn filter(&self, mut keep: impl FnMut(&GroundSet) -> bool) -> SetFamily {
        SetFamily {
            universe: self.universe,
            max_card: self.max_card,
            members: self.members.iter().filter(|s| keep(s)).cloned().collect(),
        }
    }

    pub fn is_subfamily(&self, other: &SetFamily) -> bool {
        self.members.iter().all(|s| other.contains(s))
    }

    /// Family difference `self - other`.
    pub fn minus(&self, other: &SetFamily) -> SetFamily {
        self.filter(|s| !other.contains(s))
    }

    /// Family union; the bound is the larger of the two.
    pub fn union(&self, other: &SetFamily) -> Result<SetFamily> {
        self.universe.check(other.universe)?;
        let mut members = self.members.clone();
        members.extend(other.members.iter().cloned());
        members.sort_unstable();
        members.dedup();
        Ok(SetFamily {
            universe: self.universe,
            max_card: self.max_card.max(other.max_card),
            members,
        })
    }

    /// Adds `set` if absent. Returns whether it was inserted.
    pub fn insert(&mut self, set: GroundSet) -> Result<bool> {
        self.universe.check(set.universe())?;
        if set.len() > self.max_card {
            return Err(Error::CardinalityExceeded {
                set: set.to_string(),
                card: set.len(),
                bound: self.max_card,
            });
        }
        match self.members.binary_search(&set) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.members.insert(pos, set);
                Ok(true)
            }
        }
    }
}

impl<'a> IntoIterator for &'a SetFamily {
    type Item = &'a GroundSet;
    type IntoIter = std::slice::Iter<'a, GroundSet>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// `F[S]`: the members containing `s`.
pub fn restrict(family: &SetFamily, s: &GroundSet) -> Result<SetFamily> {
    family.universe.check(s.universe())?;
    Ok(family.filter(|u| u.is_superset(s)))
}

/// `|F[S]|` without building the family.
pub fn restrict_count(family: &SetFamily, s: &GroundSet) -> usize {
    family.members.iter().filter(|u| u.is_superset(s)).count()
}

/// Number of subsets a full shadow enumeration generates, saturating.
pub fn shadow_work(family: &SetFamily) -> u64 {
    family
        .members
        .iter()
        .map(|u| 1u64.checked_shl(u.len() as u32).unwrap_or(u64::MAX))
        .fold(0u64, u64::saturating_add)
}

/// All subsets of members, including the empty set and the members themselves.
///
/// Fails when `sum 2^|U|` exceeds `budget.shadow`; use [`shadow_contains`] for membership.
pub fn shadow(family: &SetFamily, budget: &Budget) -> Result<SetFamily> {
    let work = shadow_work(family);
    if work > budget.shadow {
        return Err(Error::BudgetExceeded {
            what: "shadow",
            limit: budget.shadow,
            hint: "query membership lazily with shadow_contains",
        });
    }
    let mut seen = HashSet::new();
    for u in &family.members {
        seen.extend(u.subsets());
    }
    let mut members: Vec<GroundSet> = seen.into_iter().collect();
    members.sort_unstable();
    Ok(SetFamily {
        universe: family.universe,
        max_card: family.max_card,
        members,
    })
}

/// Whether some member contains `t`.
pub fn shadow_contains(family: &SetFamily, t: &GroundSet) -> bool {
    family.members.iter().any(|u| u.is_superset(t))
}

/// Members that are `p`-sets on the subsplit: inside its union and meeting each strip at most once.
pub fn sets_on_subsplit(family: &SetFamily, subsplit: &Subsplit, p: usize) -> SetFamily {
    family.filter(|s| s.len() == p && subsplit.holds(s))
}
