//! Finding an m-split that keeps a large share of an m-uniform family, and the exact
//! transversal counting identity that guarantees one exists.
//!
//! For `d = n/m`, some split keeps at least `d^m |F| / C(n,m)` members, which in turn is
//! strictly above `|F| e^{-m}`. The guarantee follows from counting pairs `(U, (X_1..X_j))`
//! of a member and an ordered tuple of disjoint `d`-sets each meeting `U` exactly once:
//!
//! ```text
//! |T_{F,j}| = d^j C(n - dj, m - j) (|F| / C(n,m)) prod_{i<j} C(n - di, d)
//! ```

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::set::{GroundSet, Universe};
use crate::split::{combinations, Split, Subsplit};

/// Lower bound on e used for the exact Stirling-floor comparison.
const E_LOWER_NUM: u64 = 2_718_281_828;
const E_LOWER_DEN: u64 = 1_000_000_000;

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Number of unordered m-splits of an n-set: `n! / ((d!)^m m!)`.
pub fn split_count(n: usize, m: usize) -> BigUint {
    let d = n / m;
    factorial(n) / (num_traits::pow(factorial(d), m) * factorial(m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Randomized,
}

#[derive(Debug, Clone)]
pub struct SplitSearchResult {
    pub split: Split,
    /// `F ∩ (split choose m)`.
    pub retained: SetFamily,
    /// `(n/m)^m |F| / C(n,m)`.
    pub bound: f64,
    /// `|F| e^{-m}`.
    pub stirling_floor: f64,
    /// Whether `|retained| >= bound`, decided exactly.
    pub meets_bound: bool,
    pub splits_examined: u64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SplitReport {
    pub strips: Vec<Vec<usize>>,
    pub retained: usize,
    pub bound: f64,
    pub stirling_floor: f64,
    pub meets_bound: bool,
    pub bound_above_floor: bool,
    pub splits_examined: u64,
}

impl SplitSearchResult {
    pub fn report(&self) -> SplitReport {
        let n = self.split.universe().size();
        SplitReport {
            strips: self.split.to_label_lists(),
            retained: self.retained.len(),
            bound: self.bound,
            stirling_floor: self.stirling_floor,
            meets_bound: self.meets_bound,
            bound_above_floor: bound_exceeds_stirling_floor(n, self.split.rank()),
            splits_examined: self.splits_examined,
        }
    }
}

/// Checks that `F` is a nonempty m-uniform family with `m | n`; returns `(m, d)`.
fn uniform_params(family: &SetFamily) -> Result<(usize, usize)> {
    let m = family.max_card();
    let n = family.universe().size();
    if m == 0 || !n.is_multiple_of(m) {
        return Err(Error::InvalidArgument(format!(
            "m = {m} must be positive and divide n = {n} (pad the universe first)"
        )));
    }
    if !family.is_uniform(m) {
        return Err(Error::InvalidArgument(format!("every member must have exactly {m} elements")));
    }
    Ok((m, n / m))
}

/// `retained * C(n,m) >= d^m |F|`, in integers.
fn meets_bound(retained: usize, n: usize, m: usize, size: usize) -> bool {
    let d = n / m;
    BigUint::from(retained) * binomial(n, m) >= num_traits::pow(BigUint::from(d), m) * BigUint::from(size)
}

pub fn retention_bound(n: usize, m: usize, size: usize) -> BigRational {
    let d = n / m;
    BigRational::new(
        BigInt::from(num_traits::pow(BigUint::from(d), m) * BigUint::from(size)),
        BigInt::from(binomial(n, m)),
    )
}

/// Whether `d^m / C(n,m) > e^{-m}`, proved with a rational lower bound on `e`.
pub fn bound_exceeds_stirling_floor(n: usize, m: usize) -> bool {
    let d = n / m;
    let lhs = num_traits::pow(BigUint::from(d) * BigUint::from(E_LOWER_NUM), m);
    let rhs = binomial(n, m) * num_traits::pow(BigUint::from(E_LOWER_DEN), m);
    lhs > rhs
}

/// `|F| e^{-m}` with `m` the family's cardinality bound.
pub fn stirling_floor(family: &SetFamily) -> f64 {
    family.len() as f64 * (-(family.max_card() as f64)).exp()
}

fn retained_count(family: &SetFamily, split: &Split) -> usize {
    family.iter().filter(|u| split.holds(u)).count()
}

/// All unordered m-splits; each strip is started by the smallest unassigned element.
pub fn enumerate_splits(universe: Universe, m: usize, budget: &Budget) -> Result<Vec<Split>> {
    let n = universe.size();
    if m == 0 || !n.is_multiple_of(m) {
        return Err(Error::InvalidArgument(format!("{m} does not divide {n}")));
    }
    let count = split_count(n, m);
    if count > BigUint::from(budget.splits) {
        return Err(Error::BudgetExceeded {
            what: "exhaustive split enumeration",
            limit: budget.splits,
            hint: "use randomized mode",
        });
    }
    let d = n / m;
    let mut out = Vec::with_capacity(count.to_usize().unwrap_or(0));
    let mut strips = Vec::with_capacity(m);
    let mut free: Vec<usize> = (0..n).collect();
    fn rec(universe: Universe, d: usize, free: &mut Vec<usize>, strips: &mut Vec<GroundSet>, out: &mut Vec<Split>) {
        if free.is_empty() {
            out.push(Split::new(universe, strips.clone()).expect("canonical split is valid"));
            return;
        }
        let lead = free[0];
        let rest: Vec<usize> = free[1..].to_vec();
        for mates in combinations(&rest, d - 1) {
            let mut strip = GroundSet::from_labels(universe, mates.iter().copied()).expect("in range");
            strip.insert(lead);
            let saved = std::mem::replace(free, rest.iter().copied().filter(|x| !strip.contains(*x)).collect());
            strips.push(strip);
            rec(universe, d, free, strips, out);
            strips.pop();
            *free = saved;
        }
    }
    rec(universe, d, &mut free, &mut strips, &mut out);
    Ok(out)
}

fn uniform_split(universe: Universe, m: usize, rng: &mut ChaCha8Rng) -> Split {
    let n = universe.size();
    let d = n / m;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let strips = perm
        .chunks(d)
        .map(|c| GroundSet::from_labels(universe, c.iter().copied()).expect("in range"))
        .collect();
    Split::new(universe, strips).expect("chunks of a permutation form a split")
}

/// Draws a uniformly random ordered m-split.
pub fn sample_split(universe: Universe, m: usize, rng: &mut ChaCha8Rng) -> Result<Split> {
    if m == 0 || !universe.size().is_multiple_of(m) {
        return Err(Error::InvalidArgument(format!("{m} does not divide {}", universe.size())));
    }
    Ok(uniform_split(universe, m, rng))
}

/// A split keeping at least `(n/m)^m |F| / C(n,m)` members of the m-uniform family `F`.
///
/// Exhaustive mode returns a maximiser (first in canonical order). Randomized mode samples
/// uniform splits from `seed` until one meets the bound; running out of trials is an error
/// carrying the best split seen.
pub fn find_good_split(
    family: &SetFamily,
    mode: SearchMode,
    trials: u64,
    seed: u64,
    budget: &Budget,
) -> Result<SplitSearchResult> {
    let (m, _) = uniform_params(family)?;
    if family.is_empty() {
        return Err(Error::InvalidArgument("the family must be nonempty".into()));
    }
    let universe = family.universe();
    let n = universe.size();
    let size = family.len();
    let bound = retention_bound(n, m, size).to_f64().unwrap_or(f64::NAN);
    let floor = stirling_floor(family);
    let finish = |split: Split, examined: u64| {
        let retained = family.filter(|u| split.holds(u));
        SplitSearchResult {
            meets_bound: meets_bound(retained.len(), n, m, size),
            split,
            retained,
            bound,
            stirling_floor: floor,
            splits_examined: examined,
        }
    };
    match mode {
        SearchMode::Exhaustive => {
            let splits = enumerate_splits(universe, m, budget)?;
            let examined = splits.len() as u64;
            let (best, _) = splits
                .par_iter()
                .enumerate()
                .map(|(i, s)| (i, retained_count(family, s)))
                .reduce_with(|a, b| if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a })
                .expect("at least one split exists");
            Ok(finish(splits[best].clone(), examined))
        }
        SearchMode::Randomized => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut best: Option<(usize, Split)> = None;
            for t in 0..trials {
                let split = uniform_split(universe, m, &mut rng);
                let kept = retained_count(family, &split);
                if meets_bound(kept, n, m, size) {
                    return Ok(finish(split, t + 1));
                }
                if best.as_ref().is_none_or(|(b, _)| kept > *b) {
                    best = Some((kept, split));
                }
            }
            let best = best.map(|(_, s)| s).unwrap_or_else(|| Split::contiguous(universe, m).expect("m divides n"));
            Err(Error::TrialsExhausted {
                trials,
                best: Box::new(finish(best, trials)),
            })
        }
    }
}

/// `|T_{F,j}|` by enumerating every ordered tuple of `j` pairwise-disjoint `d`-sets.
pub fn transversal_count_brute(family: &SetFamily, j: usize, budget: &Budget) -> Result<u128> {
    let (m, d) = uniform_params(family)?;
    if j > m {
        return Err(Error::InvalidArgument(format!("j = {j} exceeds m = {m}")));
    }
    let n = family.universe().size();
    let tuples = (0..j).fold(BigUint::one(), |acc, i| acc * binomial(n - d * i, d));
    if tuples > BigUint::from(budget.transversal) {
        return Err(Error::BudgetExceeded {
            what: "transversal enumeration",
            limit: budget.transversal,
            hint: "reduce n or j",
        });
    }
    fn rec(free: &[usize], d: usize, left: usize, members: &[&GroundSet], universe: Universe) -> u128 {
        if members.is_empty() {
            return 0;
        }
        if left == 0 {
            return members.len() as u128;
        }
        let mut total = 0;
        for chosen in combinations(free, d) {
            let strip = GroundSet::from_labels(universe, chosen.iter().copied()).expect("in range");
            let hit: Vec<&GroundSet> = members.iter().copied().filter(|u| u.intersection_len(&strip) == 1).collect();
            if hit.is_empty() {
                continue;
            }
            let rest: Vec<usize> = free.iter().copied().filter(|x| !strip.contains(*x)).collect();
            total += rec(&rest, d, left - 1, &hit, universe);
        }
        total
    }
    let members: Vec<&GroundSet> = family.iter().collect();
    let free: Vec<usize> = (0..n).collect();
    Ok(rec(&free, d, j, &members, family.universe()))
}

/// The closed form for `|T_{F,j}|`, exact. `e^{-κ(F)}` is `|F| / C(n,m)`.
///
/// Also evaluated at `j = m`, where ordered full splits correspond one-to-one with
/// their first `m - 1` strips.
pub fn transversal_formula(family: &SetFamily, j: usize) -> Result<BigRational> {
    let (m, d) = uniform_params(family)?;
    if family.is_empty() {
        return Err(Error::InvalidArgument("κ(F) is undefined for an empty family".into()));
    }
    if d < 2 {
        return Err(Error::InvalidArgument("the closed form assumes d = n/m >= 2".into()));
    }
    if j > m {
        return Err(Error::InvalidArgument(format!("j = {j} exceeds m = {m}")));
    }
    let n = family.universe().size();
    let product = (0..j).fold(BigUint::one(), |acc, i| acc * binomial(n - d * i, d));
    let numer = num_traits::pow(BigUint::from(d), j) * binomial(n - d * j, m - j) * BigUint::from(family.len()) * product;
    Ok(BigRational::new(BigInt::from(numer), BigInt::from(binomial(n, m))))
}

/// Grows the universe to the next multiple of `m`, adding unused elements.
pub fn pad_universe(family: &SetFamily, m: usize) -> Result<SetFamily> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let n = family.universe().size();
    let padded = Universe::new(n.div_ceil(m) * m)?;
    let members = family
        .iter()
        .map(|u| GroundSet::from_labels(padded, u.iter()))
        .collect::<Result<Vec<_>>>()?;
    SetFamily::new(padded, family.max_card(), members)
}

/// The members of `F` on `split`, i.e. `F ∩ (split choose m)`.
pub fn retained_on(family: &SetFamily, split: &Split) -> SetFamily {
    let full = Subsplit::full(split);
    family.filter(|u| full.holds(u))
}
