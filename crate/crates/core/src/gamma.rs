//! Spreadness checks: the Γ(b)-condition `|F[S]| < b^{-|S|} |F|` for every nonempty `S`,
//! globally and restricted to the sets on a subsplit that lie in the shadow of another family.
//!
//! Thresholds are compared exactly when `b` is rational; otherwise with an absolute
//! tolerance of [`APPROX_TOLERANCE`]. Equality counts as a violation.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::family::{restrict_count, shadow_work, SetFamily};
use crate::set::GroundSet;
use crate::split::Subsplit;

pub const APPROX_TOLERANCE: f64 = 1e-9;

/// The base `b > 1` of a Γ(b)-condition.
#[derive(Debug, Clone, PartialEq)]
pub enum GammaBase {
    Exact(BigRational),
    Approx(f64),
}

impl GammaBase {
    pub fn ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Self::checked(GammaBase::Exact(BigRational::new(num.into(), den.into())))
    }

    pub fn integer(b: u64) -> Result<Self> {
        Self::checked(GammaBase::Exact(BigRational::from_integer(b.into())))
    }

    /// Integral values become exact; anything else is compared with the tolerance.
    pub fn from_f64(b: f64) -> Result<Self> {
        if b.is_finite() && b.fract() == 0.0 && b.abs() < 9.0e15 {
            return Self::checked(GammaBase::Exact(BigRational::from_integer(BigInt::from(b as i64))));
        }
        Self::checked(GammaBase::Approx(b))
    }

    /// Accepts `p/q`, integers and finite decimals (all exact), or anything `f64` parses.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = || Error::InvalidArgument(format!("`{text}` is not a number"));
        if let Some((p, q)) = text.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            return Self::checked(GammaBase::Exact(BigRational::new(p, q)));
        }
        let digits_only = |s: &str| !s.is_empty() && s.bytes().all(|c| c.is_ascii_digit());
        let (int, frac) = text.split_once('.').unwrap_or((text, ""));
        if digits_only(int) && (frac.is_empty() || digits_only(frac)) {
            let num: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
            let den = num_traits::pow(BigInt::from(10), frac.len());
            return Self::checked(GammaBase::Exact(BigRational::new(num, den)));
        }
        let value: f64 = text.parse().map_err(|_| bad())?;
        Self::checked(GammaBase::Approx(value))
    }

    fn checked(self) -> Result<Self> {
        let above_one = match &self {
            GammaBase::Exact(r) => *r > BigRational::one(),
            GammaBase::Approx(x) => x.is_finite() && *x > 1.0,
        };
        if !above_one {
            return Err(Error::InvalidArgument(format!(
                "gamma base must exceed 1, got {}",
                self.to_f64()
            )));
        }
        Ok(self)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            GammaBase::Exact(r) => r.to_f64().unwrap_or(f64::INFINITY),
            GammaBase::Approx(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, GammaBase::Exact(_))
    }
}

/// Per-size violation floors against a reference cardinality `total`:
/// `S` violates iff `|F[S]| >= total * b^-(|S| - offset)`.
pub(crate) struct Threshold<'a> {
    base: &'a GammaBase,
    total: usize,
    offset: usize,
    floors: Vec<u64>,
}

impl<'a> Threshold<'a> {
    pub(crate) fn new(base: &'a GammaBase, total: usize, offset: usize, max_size: usize) -> Self {
        let floors = (0..=max_size)
            .map(|size| {
                let s = size.saturating_sub(offset) as u32;
                match base {
                    GammaBase::Exact(b) => {
                        let scale = num_traits::pow(b.clone(), s as usize);
                        let need = BigRational::from_integer(BigInt::from(total)) / scale;
                        let ceil = need.ceil().to_integer();
                        if ceil.is_negative() {
                            0
                        } else {
                            ceil.to_u64().unwrap_or(u64::MAX)
                        }
                    }
                    GammaBase::Approx(b) => {
                        let need = total as f64 * b.powi(-(s as i32)) - APPROX_TOLERANCE;
                        need.ceil().max(0.0) as u64
                    }
                }
            })
            .collect();
        Threshold {
            base,
            total,
            offset,
            floors,
        }
    }

    pub(crate) fn violates(&self, count: usize, size: usize) -> bool {
        size < self.floors.len() && count as u64 >= self.floors[size]
    }

    /// `count * b^(size - offset) / total`.
    pub(crate) fn ratio(&self, count: usize, size: usize) -> f64 {
        let s = size.saturating_sub(self.offset) as i32;
        count as f64 * self.base.to_f64().powi(s) / self.total.max(1) as f64
    }

    pub(crate) fn cmp_ratio(&self, a: (usize, usize), b: (usize, usize)) -> Ordering {
        let (ca, sa) = (a.0, a.1.saturating_sub(self.offset));
        let (cb, sb) = (b.0, b.1.saturating_sub(self.offset));
        match self.base {
            GammaBase::Exact(r) => {
                let (p, q) = (r.numer(), r.denom());
                let lhs = BigInt::from(ca) * num_traits::pow(p.clone(), sa) * num_traits::pow(q.clone(), sb);
                let rhs = BigInt::from(cb) * num_traits::pow(p.clone(), sb) * num_traits::pow(q.clone(), sa);
                lhs.cmp(&rhs)
            }
            GammaBase::Approx(_) => {
                let (x, y) = (self.ratio(ca, a.1), self.ratio(cb, b.1));
                if (x - y).abs() <= APPROX_TOLERANCE * x.abs().max(y.abs()).max(1.0) {
                    Ordering::Equal
                } else {
                    x.partial_cmp(&y).unwrap_or(Ordering::Equal)
                }
            }
        }
    }

    /// Among `(set, count)` candidates, the violator of maximum ratio, lexicographically least on ties.
    fn worst<'c>(&self, candidates: &'c [(GroundSet, usize)]) -> Option<&'c (GroundSet, usize)> {
        candidates
            .par_iter()
            .filter(|(s, c)| self.violates(*c, s.len()))
            .reduce_with(|a, b| if self.better(a, b) { a } else { b })
    }

    fn better(&self, a: &(GroundSet, usize), b: &(GroundSet, usize)) -> bool {
        match self.cmp_ratio((a.1, a.0.len()), (b.1, b.0.len())) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => a.0 <= b.0,
        }
    }

    fn max_ratio(&self, candidates: &[(GroundSet, usize)]) -> f64 {
        candidates
            .par_iter()
            .map(|(s, c)| self.ratio(*c, s.len()))
            .reduce(|| 0.0, f64::max)
    }
}

/// Verdict of a Γ(b) check. `ratio` is `|F[S]| b^{|S|} / |F|` for the witness, or the
/// largest such ratio over all candidates when the condition holds.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaReport {
    pub holds: bool,
    pub witness: Option<GroundSet>,
    pub ratio: f64,
}

impl GammaReport {
    pub fn witness_string(&self) -> String {
        self.witness.as_ref().map_or_else(|| "none".into(), |w| w.to_string())
    }
}

impl Serialize for GammaReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            holds: bool,
            witness: Option<Vec<usize>>,
            ratio: f64,
        }
        Wire {
            holds: self.holds,
            witness: self.witness.as_ref().map(GroundSet::to_vec),
            ratio: self.ratio,
        }
        .serialize(serializer)
    }
}

fn validate(family: &SetFamily) -> Result<()> {
    if family.is_empty() {
        return Err(Error::InvalidArgument("gamma condition needs a nonempty family".into()));
    }
    Ok(())
}

fn report(threshold: &Threshold<'_>, candidates: &[(GroundSet, usize)]) -> GammaReport {
    match threshold.worst(candidates) {
        Some((set, count)) => GammaReport {
            holds: false,
            witness: Some(set.clone()),
            ratio: threshold.ratio(*count, set.len()),
        },
        None => GammaReport {
            holds: true,
            witness: None,
            ratio: threshold.max_ratio(candidates),
        },
    }
}

/// `|F[S]|` for every nonempty `S` in the shadow, by one pass over the members' subsets.
pub fn restriction_counts(family: &SetFamily, budget: &Budget) -> Result<HashMap<GroundSet, usize>> {
    if shadow_work(family) > budget.shadow {
        return Err(Error::BudgetExceeded {
            what: "gamma candidate scan",
            limit: budget.shadow,
            hint: "the shadow is too large to enumerate",
        });
    }
    let mut counts: HashMap<GroundSet, usize> = HashMap::new();
    for u in family {
        for s in u.subsets().filter(|s| !s.is_empty()) {
            *counts.entry(s).or_insert(0) += 1;
        }
    }
    Ok(counts)
}

/// Γ(b) over all nonempty `S`. Sets outside the shadow have `F[S] = ∅` and never violate.
pub fn check_gamma(family: &SetFamily, b: &GammaBase, budget: &Budget) -> Result<GammaReport> {
    validate(family)?;
    let candidates: Vec<(GroundSet, usize)> = restriction_counts(family, budget)?.into_iter().collect();
    let max_size = family.iter().map(GroundSet::len).max().unwrap_or(0);
    let threshold = Threshold::new(b, family.len(), 0, max_size);
    Ok(report(&threshold, &candidates))
}

/// Nonempty sets on `subsplit` inside the shadow of `over`.
pub fn subsplit_candidates(subsplit: &Subsplit, over: &SetFamily, budget: &Budget) -> Result<Vec<GroundSet>> {
    let parent = subsplit.parent();
    let mut seen: HashSet<GroundSet> = HashSet::new();
    let mut work: u64 = 0;
    for v in over {
        let w = v.intersection(subsplit.union());
        if w.is_empty() {
            continue;
        }
        // Group by strip; a candidate picks at most one element from each group.
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        for x in w.iter() {
            let strip = parent.strip_of(x);
            match groups.iter_mut().find(|(s, _)| *s == strip) {
                Some((_, xs)) => xs.push(x),
                None => groups.push((strip, vec![x])),
            }
        }
        let combos: u64 = groups
            .iter()
            .map(|(_, xs)| xs.len() as u64 + 1)
            .fold(1u64, u64::saturating_mul);
        work = work.saturating_add(combos);
        if work > budget.shadow {
            return Err(Error::BudgetExceeded {
                what: "subsplit candidate scan",
                limit: budget.shadow,
                hint: "the shadow restricted to the subsplit is too large",
            });
        }
        let mut choice = vec![0usize; groups.len()];
        loop {
            let mut s = parent.universe().empty_set();
            for ((_, xs), &c) in groups.iter().zip(&choice) {
                if c > 0 {
                    s.insert(xs[c - 1]);
                }
            }
            if !s.is_empty() {
                seen.insert(s);
            }
            let Some(pos) = (0..groups.len()).find(|&i| choice[i] < groups[i].1.len()) else {
                break;
            };
            choice[pos] += 1;
            for c in &mut choice[..pos] {
                *c = 0;
            }
        }
    }
    let mut out: Vec<GroundSet> = seen.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

/// Γ(b) on `subsplit` over `over`: `S` ranges over the nonempty sets on the subsplit that
/// lie in the shadow of `over`.
pub fn check_gamma_on_subsplit(
    family: &SetFamily,
    subsplit: &Subsplit,
    over: &SetFamily,
    b: &GammaBase,
    budget: &Budget,
) -> Result<GammaReport> {
    validate(family)?;
    family.universe().check(subsplit.parent().universe())?;
    family.universe().check(over.universe())?;
    let candidates: Vec<(GroundSet, usize)> = subsplit_candidates(subsplit, over, budget)?
        .into_par_iter()
        .map(|s| {
            let c = restrict_count(family, &s);
            (s, c)
        })
        .collect();
    let threshold = Threshold::new(b, family.len(), 0, subsplit.rank());
    Ok(report(&threshold, &candidates))
}

/// An inclusion-maximal `S ⊇ seed` in the candidate range of [`check_gamma_on_subsplit`]
/// with `|F[S]| >= b^-(|S| - |seed|) |F[seed]|`.
///
/// With an empty seed this is a maximal violator, or `None` when the condition holds.
/// A nonempty seed always qualifies itself, so the result is `Some`. Among qualifying sets
/// the largest is returned (ties: larger ratio, then lexicographically least), which makes
/// it maximal under inclusion.
pub fn maximal_violator(
    family: &SetFamily,
    subsplit: &Subsplit,
    over: &SetFamily,
    b: &GammaBase,
    seed: &GroundSet,
    budget: &Budget,
) -> Result<Option<GroundSet>> {
    let candidates = subsplit_candidates(subsplit, over, budget)?;
    maximal_among(family, &candidates, b, seed)
}

/// [`maximal_violator`] over an explicit candidate list.
pub fn maximal_among(
    family: &SetFamily,
    candidates: &[GroundSet],
    b: &GammaBase,
    seed: &GroundSet,
) -> Result<Option<GroundSet>> {
    validate(family)?;
    let base = restrict_count(family, seed);
    if base == 0 {
        return Err(Error::InvalidArgument(format!("no member contains the seed {seed}")));
    }
    let max_size = candidates.iter().map(GroundSet::len).max().unwrap_or(0).max(seed.len());
    let threshold = Threshold::new(b, base, seed.len(), max_size);
    let mut best: Option<(GroundSet, usize)> = (!seed.is_empty()).then(|| (seed.clone(), base));
    for s in candidates {
        if !s.is_superset(seed) || s == seed {
            continue;
        }
        let count = restrict_count(family, s);
        if !threshold.violates(count, s.len()) {
            continue;
        }
        let replace = match &best {
            None => true,
            Some((cur, cur_count)) => match s.len().cmp(&cur.len()) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => match threshold.cmp_ratio((count, s.len()), (*cur_count, cur.len())) {
                    Ordering::Greater => true,
                    Ordering::Less => false,
                    Ordering::Equal => s < cur,
                },
            },
        };
        if replace {
            best = Some((s.clone(), count));
        }
    }
    Ok(best.map(|(s, _)| s))
}
