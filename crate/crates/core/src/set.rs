//! Ground sets over a finite universe `{0, .., n-1}`, stored as fixed-width bit vectors.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// The ground set `{0, .., n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Universe(usize);

impl Universe {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyUniverse);
        }
        Ok(Universe(n))
    }

    pub fn size(self) -> usize {
        self.0
    }

    pub fn words(self) -> usize {
        self.0.div_ceil(WORD)
    }

    pub fn check(self, other: Universe) -> Result<()> {
        if self != other {
            return Err(Error::UniverseMismatch {
                expected: self.0,
                found: other.0,
            });
        }
        Ok(())
    }

    pub fn empty_set(self) -> GroundSet {
        GroundSet::empty(self)
    }

    pub fn full_set(self) -> GroundSet {
        let mut set = GroundSet::empty(self);
        for x in 0..self.0 {
            set.insert(x);
        }
        set
    }
}

/// A subset of a [`Universe`]. The population count is cached.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroundSet {
    universe: Universe,
    card: u32,
    words: SmallVec<[u64; 2]>,
}

impl GroundSet {
    pub fn empty(universe: Universe) -> Self {
        GroundSet {
            universe,
            card: 0,
            words: SmallVec::from_elem(0, universe.words()),
        }
    }

    pub fn from_labels<I: IntoIterator<Item = usize>>(universe: Universe, labels: I) -> Result<Self> {
        let mut set = GroundSet::empty(universe);
        for label in labels {
            if label >= universe.size() {
                return Err(Error::LabelOutOfRange {
                    label,
                    n: universe.size(),
                });
            }
            set.insert(label);
        }
        Ok(set)
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.card as usize
    }

    pub fn is_empty(&self) -> bool {
        self.card == 0
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.universe.size() && self.words[x / WORD] >> (x % WORD) & 1 == 1
    }

    /// Panics if `x` lies outside the universe.
    pub fn insert(&mut self, x: usize) -> bool {
        assert!(x < self.universe.size(), "label {x} outside universe");
        let (w, bit) = (x / WORD, 1u64 << (x % WORD));
        if self.words[w] & bit != 0 {
            return false;
        }
        self.words[w] |= bit;
        self.card += 1;
        true
    }

    pub fn remove(&mut self, x: usize) -> bool {
        if !self.contains(x) {
            return false;
        }
        self.words[x / WORD] &= !(1u64 << (x % WORD));
        self.card -= 1;
        true
    }

    pub fn with(&self, x: usize) -> GroundSet {
        let mut out = self.clone();
        out.insert(x);
        out
    }

    pub fn iter(&self) -> Elements<'_> {
        Elements {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn is_subset(&self, other: &GroundSet) -> bool {
        self.card <= other.card && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_superset(&self, other: &GroundSet) -> bool {
        other.is_subset(self)
    }

    pub fn is_disjoint(&self, other: &GroundSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersection_len(&self, other: &GroundSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn union(&self, other: &GroundSet) -> GroundSet {
        self.combine(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &GroundSet) -> GroundSet {
        self.combine(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &GroundSet) -> GroundSet {
        self.combine(other, |a, b| a & !b)
    }

    fn combine(&self, other: &GroundSet, op: impl Fn(u64, u64) -> u64) -> GroundSet {
        debug_assert_eq!(self.universe, other.universe);
        let words: SmallVec<[u64; 2]> = self.words.iter().zip(&other.words).map(|(&a, &b)| op(a, b)).collect();
        let card = words.iter().map(|w| w.count_ones()).sum();
        GroundSet {
            universe: self.universe,
            card,
            words,
        }
    }

    /// Every subset of `self`, including the empty set and `self`, in no particular order.
    pub fn subsets(&self) -> impl Iterator<Item = GroundSet> + '_ {
        let elements = self.to_vec();
        let total: u64 = 1u64.checked_shl(elements.len() as u32).unwrap_or(0);
        (0..total).map(move |mask| {
            let mut set = GroundSet::empty(self.universe);
            for (i, &x) in elements.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    set.insert(x);
                }
            }
            set
        })
    }
}

/// Lexicographic order on the ascending element sequences, so a proper prefix sorts first.
/// Sets over different universes order by universe size first.
impl Ord for GroundSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.universe.cmp(&other.universe).then_with(|| {
            for (i, (&a, &b)) in self.words.iter().zip(&other.words).enumerate() {
                let diff = a ^ b;
                if diff == 0 {
                    continue;
                }
                let bit = diff.trailing_zeros() as usize;
                // The first differing element belongs to exactly one side. That side is smaller
                // unless the other side has no elements beyond it (then the other is a prefix).
                let (owner_is_self, rest) = if a >> bit & 1 == 1 { (true, b) } else { (false, a) };
                let other_has_more = (bit + 1 < WORD && rest >> (bit + 1) != 0)
                    || {
                        let tail = if owner_is_self { &other.words } else { &self.words };
                        tail[i + 1..].iter().any(|&w| w != 0)
                    };
                return match (owner_is_self, other_has_more) {
                    (true, true) | (false, false) => Ordering::Less,
                    (true, false) | (false, true) => Ordering::Greater,
                };
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for GroundSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

pub struct Elements<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Elements<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}
