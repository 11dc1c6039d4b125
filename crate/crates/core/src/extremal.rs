//! The recursive k-sunflower-free family of size `(k-1)^m`.
//!
//! Generation `g` (1-based) adds the fresh labels `(g-1)(k-1) .. g(k-1)-1`; every member
//! picks exactly one label per generation. The generations are the strips of a natural
//! split, and the family is exactly the set of one-per-strip `m`-sets on it.

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::set::{GroundSet, Universe};
use crate::split::Split;
use crate::sunflower::find_sunflower_exact;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalFamily {
    pub k: usize,
    pub m: usize,
    pub family: SetFamily,
}

impl ExtremalFamily {
    /// The split whose strips are the generations.
    pub fn natural_split(&self) -> Split {
        Split::contiguous(self.family.universe(), self.m).expect("universe is (k-1)m")
    }
}

pub fn build_extremal(k: usize, m: usize, budget: &Budget) -> Result<ExtremalFamily> {
    if k < 2 || m < 1 {
        return Err(Error::InvalidArgument(format!("need k >= 2 and m >= 1, got k = {k}, m = {m}")));
    }
    let size = (k as u64 - 1).checked_pow(m as u32);
    if size.is_none_or(|s| s > budget.extremal) {
        return Err(Error::BudgetExceeded {
            what: "extremal construction",
            limit: budget.extremal,
            hint: "(k-1)^m members requested",
        });
    }
    let width = k - 1;
    let universe = Universe::new(width * m)?;
    let mut generation: Vec<GroundSet> = (0..width)
        .map(|x| GroundSet::from_labels(universe, [x]).expect("in range"))
        .collect();
    for g in 1..m {
        generation = generation
            .iter()
            .flat_map(|u| (0..width).map(move |x| u.with(g * width + x)))
            .collect();
    }
    Ok(ExtremalFamily {
        k,
        m,
        family: SetFamily::new(universe, m, generation)?,
    })
}

/// True iff the exact search finds no k-sunflower.
pub fn certify_sunflower_free(ef: &ExtremalFamily, budget: &Budget) -> Result<bool> {
    Ok(find_sunflower_exact(&ef.family, ef.k, budget)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::sets_on_subsplit;
    use crate::split::Subsplit;

    #[test]
    fn small_cases() {
        let b = Budget::default();
        let f = build_extremal(3, 1, &b).unwrap();
        assert_eq!(f.family, SetFamily::from_label_lists(2, &[&[0], &[1]]).unwrap());

        for m in 1..5 {
            let f = build_extremal(2, m, &b).unwrap();
            assert_eq!(f.family.len(), 1);
            assert_eq!(f.family.members()[0].to_vec(), (0..m).collect::<Vec<_>>());
            assert!(certify_sunflower_free(&f, &b).unwrap());
        }

        let f = build_extremal(3, 2, &b).unwrap();
        assert_eq!(
            f.family,
            SetFamily::from_label_lists(4, &[&[0, 2], &[0, 3], &[1, 2], &[1, 3]]).unwrap()
        );
        assert!(certify_sunflower_free(&f, &b).unwrap());
    }

    #[test]
    fn rejects_bad_parameters() {
        let b = Budget::default();
        assert!(build_extremal(1, 2, &b).is_err());
        assert!(build_extremal(3, 0, &b).is_err());
        assert!(build_extremal(9, 9, &Budget { extremal: 1000, ..b }).unwrap_err().is_budget());
    }

    #[test]
    fn equals_one_per_strip_sets() {
        let b = Budget::default();
        for (k, m) in [(3, 3), (4, 2), (5, 2), (4, 3)] {
            let f = build_extremal(k, m, &b).unwrap();
            assert_eq!(f.family.len(), (k - 1).pow(m as u32));
            assert_eq!(f.family.universe().size(), (k - 1) * m);
            let all = SetFamily::all_subsets_of_size(f.family.universe(), m);
            let on = sets_on_subsplit(&all, &Subsplit::full(&f.natural_split()), m);
            assert_eq!(on, f.family);
        }
    }
}
