//! m-splits (ordered partitions of the universe into equal strips) and their subsplits.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::set::{GroundSet, Universe};

/// An ordered tuple of pairwise-disjoint strips of equal size `d` covering the universe.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Split {
    universe: Universe,
    strips: Vec<GroundSet>,
    strip_size: usize,
    strip_of: Vec<usize>,
}

impl Split {
    pub fn new(universe: Universe, strips: Vec<GroundSet>) -> Result<Self> {
        let m = strips.len();
        if m == 0 {
            return Err(Error::InvalidSplit("a split needs at least one strip".into()));
        }
        let n = universe.size();
        if !n.is_multiple_of(m) {
            return Err(Error::InvalidSplit(format!("{m} strips cannot evenly cover {n} elements")));
        }
        let d = n / m;
        let mut strip_of = vec![usize::MAX; n];
        for (i, strip) in strips.iter().enumerate() {
            universe.check(strip.universe())?;
            if strip.len() != d {
                return Err(Error::InvalidSplit(format!("strip {i} has {} elements, expected {d}", strip.len())));
            }
            for x in strip.iter() {
                if strip_of[x] != usize::MAX {
                    return Err(Error::InvalidSplit(format!("element {x} lies in strips {} and {i}", strip_of[x])));
                }
                strip_of[x] = i;
            }
        }
        Ok(Split {
            universe,
            strips,
            strip_size: d,
            strip_of,
        })
    }

    /// Strips `{0..d-1}, {d..2d-1}, ...`.
    pub fn contiguous(universe: Universe, m: usize) -> Result<Self> {
        if m == 0 || !universe.size().is_multiple_of(m) {
            return Err(Error::InvalidArgument(format!(
                "{m} does not divide the universe size {}",
                universe.size()
            )));
        }
        let d = universe.size() / m;
        let strips = (0..m)
            .map(|i| GroundSet::from_labels(universe, i * d..(i + 1) * d))
            .collect::<Result<Vec<_>>>()?;
        Split::new(universe, strips)
    }

    pub fn from_label_lists(n: usize, strips: &[Vec<usize>]) -> Result<Self> {
        let universe = Universe::new(n)?;
        let strips = strips
            .iter()
            .map(|s| GroundSet::from_labels(universe, s.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Split::new(universe, strips)
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn rank(&self) -> usize {
        self.strips.len()
    }

    pub fn strip_size(&self) -> usize {
        self.strip_size
    }

    pub fn strips(&self) -> &[GroundSet] {
        &self.strips
    }

    pub fn strip(&self, i: usize) -> &GroundSet {
        &self.strips[i]
    }

    /// Index of the strip holding `x`.
    pub fn strip_of(&self, x: usize) -> usize {
        self.strip_of[x]
    }

    /// Whether `set` meets every strip at most once.
    pub fn holds(&self, set: &GroundSet) -> bool {
        let mut seen = vec![false; self.rank()];
        set.iter().all(|x| !std::mem::replace(&mut seen[self.strip_of[x]], true))
    }

    pub fn to_label_lists(&self) -> Vec<Vec<usize>> {
        self.strips.iter().map(GroundSet::to_vec).collect()
    }
}

impl fmt::Debug for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.strips).finish()
    }
}

/// An order-preserving selection of strips of a parent split. Rank 0 is allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subsplit {
    parent: Arc<Split>,
    indices: Vec<usize>,
    union: GroundSet,
}

impl Subsplit {
    pub fn new(parent: &Split, indices: Vec<usize>) -> Result<Self> {
        Self::from_arc(Arc::new(parent.clone()), indices)
    }

    pub fn from_arc(parent: Arc<Split>, indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSplit(format!("strip indices {indices:?} are not strictly increasing")));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= parent.rank()) {
            return Err(Error::InvalidSplit(format!("strip index {bad} outside rank {}", parent.rank())));
        }
        let mut union = parent.universe().empty_set();
        for &i in &indices {
            union = union.union(parent.strip(i));
        }
        Ok(Subsplit { parent, indices, union })
    }

    pub fn full(parent: &Split) -> Self {
        Self::full_arc(Arc::new(parent.clone()))
    }

    pub fn full_arc(parent: Arc<Split>) -> Self {
        let indices = (0..parent.rank()).collect();
        Self::from_arc(parent, indices).expect("full index range is valid")
    }

    /// The subsplit of strips that `set` meets (`X_{*,B}` for a base set `B`).
    pub fn hit_by(parent: &Arc<Split>, set: &GroundSet) -> Self {
        let mut indices: Vec<usize> = set.iter().map(|x| parent.strip_of(x)).collect();
        indices.sort_unstable();
        indices.dedup();
        Self::from_arc(parent.clone(), indices).expect("indices come from the parent")
    }

    /// All rank-`r` subsplits of `parent` in lexicographic index order.
    pub fn all_of_rank(parent: &Arc<Split>, r: usize) -> Vec<Subsplit> {
        combinations(&(0..parent.rank()).collect::<Vec<_>>(), r)
            .into_iter()
            .map(|idx| Self::from_arc(parent.clone(), idx).expect("valid combination"))
            .collect()
    }

    pub fn parent(&self) -> &Arc<Split> {
        &self.parent
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn rank(&self) -> usize {
        self.indices.len()
    }

    pub fn union(&self) -> &GroundSet {
        &self.union
    }

    pub fn strips(&self) -> impl Iterator<Item = &GroundSet> + '_ {
        self.indices.iter().map(|&i| self.parent.strip(i))
    }

    /// Whether `set` is on this subsplit: inside the union, at most one element per strip.
    pub fn holds(&self, set: &GroundSet) -> bool {
        set.is_subset(&self.union) && self.parent.holds(set)
    }

    /// The strips of `self` disjoint from `b`, order preserved.
    pub fn minus(&self, b: &GroundSet) -> Subsplit {
        let indices = self
            .indices
            .iter()
            .copied()
            .filter(|&i| self.parent.strip(i).is_disjoint(b))
            .collect();
        Self::from_arc(self.parent.clone(), indices).expect("subset of valid indices")
    }

    /// Whether every strip of `self` is a strip of `other`.
    pub fn is_within(&self, other: &Subsplit) -> bool {
        self.indices.iter().all(|i| other.indices.contains(i))
    }

    /// All `p`-sets on this subsplit, in lexicographic order.
    pub fn sets_of_size(&self, p: usize) -> Vec<GroundSet> {
        let mut out = Vec::new();
        for chosen in combinations(&self.indices, p) {
            let strips: Vec<Vec<usize>> = chosen.iter().map(|&i| self.parent.strip(i).to_vec()).collect();
            let mut pick = vec![0usize; p];
            loop {
                let mut set = self.parent.universe().empty_set();
                for (s, &j) in strips.iter().zip(&pick) {
                    set.insert(s[j]);
                }
                out.push(set);
                let Some(pos) = (0..p).rev().find(|&t| pick[t] + 1 < strips[t].len()) else {
                    break;
                };
                pick[pos] += 1;
                pick[pos + 1..].fill(0);
            }
        }
        out.sort_unstable();
        out
    }
}

impl PartialOrd for Subsplit {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on strip indices, then by parent.
impl Ord for Subsplit {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.indices
            .cmp(&other.indices)
            .then_with(|| self.parent.as_ref().cmp(other.parent.as_ref()))
    }
}

impl fmt::Debug for Subsplit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subsplit{:?}", self.indices)
    }
}

/// `r`-combinations of `items` in lexicographic order.
pub(crate) fn combinations<T: Copy>(items: &[T], r: usize) -> Vec<Vec<T>> {
    let n = items.len();
    let mut out = Vec::new();
    if r > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let Some(i) = (0..r).rev().find(|&i| idx[i] < n - r + i) else {
            break;
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, xs: &[usize]) -> GroundSet {
        GroundSet::from_labels(Universe::new(n).unwrap(), xs.iter().copied()).unwrap()
    }

    #[test]
    fn split_validation() {
        assert!(Split::from_label_lists(4, &[vec![0, 1], vec![2, 3]]).is_ok());
        assert!(Split::from_label_lists(4, &[vec![0, 1], vec![1, 2]]).is_err());
        assert!(Split::from_label_lists(4, &[vec![0, 1, 2], vec![3]]).is_err());
        assert!(Split::from_label_lists(5, &[vec![0, 1], vec![2, 3]]).is_err());
        assert!(Split::contiguous(Universe::new(6).unwrap(), 4).is_err());
    }

    #[test]
    fn minus_examples() {
        let split = Split::from_label_lists(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let full = Subsplit::full(&split);
        assert_eq!(full.minus(&set(4, &[0])).indices(), &[1]);
        assert_eq!(full.minus(&set(4, &[])), full);

        let split = Split::from_label_lists(6, &[vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
        let full = Subsplit::full(&split);
        let rest = full.minus(&set(6, &[1, 4]));
        assert_eq!(rest.indices(), &[1]);
        assert_eq!(rest.union(), &set(6, &[2, 3]));
    }

    #[test]
    fn subsplit_rejects_bad_indices() {
        let split = Split::contiguous(Universe::new(6).unwrap(), 3).unwrap();
        assert!(Subsplit::new(&split, vec![1, 0]).is_err());
        assert!(Subsplit::new(&split, vec![3]).is_err());
        let empty = Subsplit::new(&split, vec![]).unwrap();
        assert_eq!(empty.rank(), 0);
        assert!(empty.union().is_empty());
    }

    #[test]
    fn holds_and_enumeration() {
        let split = Split::contiguous(Universe::new(6).unwrap(), 3).unwrap();
        let sub = Subsplit::new(&split, vec![0, 2]).unwrap();
        assert!(sub.holds(&set(6, &[0, 5])));
        assert!(!sub.holds(&set(6, &[0, 1])));
        assert!(!sub.holds(&set(6, &[0, 2])));
        assert_eq!(sub.sets_of_size(2).len(), 4);
        assert_eq!(sub.sets_of_size(1).len(), 4);
        assert_eq!(sub.sets_of_size(0), vec![set(6, &[])]);
        assert!(sub.sets_of_size(3).is_empty());
        let arc = Arc::new(split);
        assert_eq!(Subsplit::all_of_rank(&arc, 2).len(), 3);
        assert_eq!(Subsplit::hit_by(&arc, &set(6, &[5, 1])).indices(), &[0, 2]);
    }
}
