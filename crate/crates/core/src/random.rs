//! Seeded random families.
//!
//! Every generator draws from `ChaCha8Rng::seed_from_u64(seed)`, a counter-based stream
//! cipher whose output depends only on the seed, so families replay across platforms.

use std::collections::HashSet;

use num_traits::ToPrimitive;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::set::{GroundSet, Universe};
use crate::split::{Split, Subsplit};
use crate::split_search::binomial;

/// Above this many candidate sets, sampling switches from enumeration to rejection.
const ENUMERATION_LIMIT: u64 = 1_000_000;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Number of `m`-sets available: `C(n, m)`, or `C(rank, m) d^m` one-per-strip sets on a split.
pub fn candidate_count(n: usize, m: usize, on_split: Option<&Split>) -> Option<u64> {
    match on_split {
        None => binomial(n, m).to_u64(),
        Some(split) => {
            let strips = binomial(split.rank(), m).to_u64()?;
            let per = (split.strip_size() as u64).checked_pow(m as u32)?;
            strips.checked_mul(per)
        }
    }
}

/// `size` distinct `m`-sets drawn uniformly, on `on_split` when given.
pub fn generate_random_family(
    n: usize,
    m: usize,
    size: usize,
    seed: u64,
    on_split: Option<&Split>,
) -> Result<SetFamily> {
    let universe = Universe::new(n)?;
    if let Some(split) = on_split {
        universe.check(split.universe())?;
    }
    let total = candidate_count(n, m, on_split);
    if total.is_some_and(|t| (size as u64) > t) {
        return Err(Error::InvalidArgument(format!(
            "{size} distinct {m}-sets requested but only {} exist",
            total.unwrap_or(0)
        )));
    }
    let mut rng = rng_from_seed(seed);
    let members = match total {
        Some(t) if t <= ENUMERATION_LIMIT => {
            let all = match on_split {
                None => SetFamily::all_subsets_of_size(universe, m).members().to_vec(),
                Some(split) => {
                    let mut v = Subsplit::full(split).sets_of_size(m);
                    v.sort_unstable();
                    v
                }
            };
            index::sample(&mut rng, all.len(), size)
                .into_iter()
                .map(|i| all[i].clone())
                .collect()
        }
        _ => {
            let mut seen: HashSet<GroundSet> = HashSet::with_capacity(size);
            let mut out = Vec::with_capacity(size);
            while out.len() < size {
                let set = match on_split {
                    None => GroundSet::from_labels(universe, index::sample(&mut rng, n, m))?,
                    Some(split) => {
                        let d = split.strip_size();
                        let strips = index::sample(&mut rng, split.rank(), m);
                        let labels: Vec<usize> =
                            strips.into_iter().map(|s| split.strip(s).to_vec()[rng.gen_range(0..d)]).collect();
                        GroundSet::from_labels(universe, labels)?
                    }
                };
                if seen.insert(set.clone()) {
                    out.push(set);
                }
            }
            out
        }
    };
    SetFamily::new(universe, m, members)
}

/// One uniform `m`-set of the universe.
pub fn random_m_set(universe: Universe, m: usize, rng: &mut ChaCha8Rng) -> Result<GroundSet> {
    if m > universe.size() {
        return Err(Error::InvalidArgument(format!("no {m}-set in a universe of {}", universe.size())));
    }
    GroundSet::from_labels(universe, index::sample(rng, universe.size(), m))
}
