//! Voter distributions, ballot files, ring weights and concentric projection.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::johnson::{ring, ring_size, BallSpec, CandidateSubset, ElectionParams};

/// A probability distribution over the `j`-lists of an election.
///
/// Only lists with positive weight are stored and the weights sum to
/// exactly one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoterDistribution {
    params: ElectionParams,
    support: BTreeMap<CandidateSubset, Rational>,
}

impl VoterDistribution {
    /// Validates and builds a distribution. Zero weights are dropped;
    /// duplicate keys are impossible by construction of the map.
    pub fn new(
        params: ElectionParams,
        weights: BTreeMap<CandidateSubset, Rational>,
    ) -> Result<Self> {
        let mut support = BTreeMap::new();
        let mut total = Rational::zero();
        for (list, w) in weights {
            params.check_list(&list)?;
            if w.is_negative() {
                return Err(Error::InvalidArgument(format!(
                    "negative weight {w} on {list}"
                )));
            }
            if w.is_zero() {
                continue;
            }
            total += &w;
            support.insert(list, w);
        }
        if total != Rational::one() {
            return Err(Error::InvalidArgument(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(VoterDistribution { params, support })
    }

    pub fn params(&self) -> &ElectionParams {
        &self.params
    }

    pub fn support(&self) -> &BTreeMap<CandidateSubset, Rational> {
        &self.support
    }

    pub fn weight(&self, list: &CandidateSubset) -> Rational {
        self.support.get(list).cloned().unwrap_or_default()
    }

    pub fn support_len(&self) -> usize {
        self.support.len()
    }

    /// Total weight on lists inside `spec`.
    pub fn mass_in(&self, spec: &BallSpec) -> Rational {
        self.support
            .iter()
            .filter(|(l, _)| spec.contains(l))
            .map(|(_, w)| w)
            .sum()
    }

    pub fn is_supported_in(&self, spec: &BallSpec) -> bool {
        self.support.keys().all(|l| spec.contains(l))
    }

    /// Ballot file with one `weight` entry per support list.
    pub fn to_raw(&self) -> RawBallotFile {
        RawBallotFile {
            params: self.params,
            entries: self
                .support
                .iter()
                .map(|(l, w)| RawEntry {
                    list: *l,
                    amount: Multiplicity::Share(w.clone()),
                })
                .collect(),
        }
    }
}

/// Ring masses `(w_0, ..., w_D)` about a center list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingWeights {
    pub center: CandidateSubset,
    pub weights: Vec<Rational>,
}

/// How much a ballot entry counts: an integer voter count or an exact share.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Multiplicity {
    Count(u64),
    Share(Rational),
}

impl Multiplicity {
    pub fn value(&self) -> Rational {
        match self {
            Multiplicity::Count(c) => Rational::from(*c),
            Multiplicity::Share(q) => q.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawEntry {
    pub list: CandidateSubset,
    pub amount: Multiplicity,
}

/// Ballots as read from disk; lists may be shorter than `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawBallotFile {
    pub params: ElectionParams,
    pub entries: Vec<RawEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileRepr {
    n: u32,
    k: u32,
    j: u32,
    ballots: Vec<EntryRepr>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryRepr {
    list: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    count: Option<u64>,
}

impl RawBallotFile {
    /// Parses the JSON ballot format. Structural problems are
    /// [`Error::Ballot`]; an inconsistent `n, k, j` header is
    /// [`Error::InvalidParams`].
    pub fn from_json(text: &str) -> Result<Self> {
        let repr: FileRepr =
            serde_json::from_str(text).map_err(|e| Error::Ballot(e.to_string()))?;
        let params = ElectionParams::new(repr.n, repr.k, repr.j)?;
        if repr.ballots.is_empty() {
            return Err(Error::Ballot("no ballots".into()));
        }
        let mut entries = Vec::with_capacity(repr.ballots.len());
        for (idx, e) in repr.ballots.into_iter().enumerate() {
            let list = CandidateSubset::from_members(&e.list)
                .map_err(|err| Error::Ballot(format!("ballot #{idx}: {err}")))?;
            if list.is_empty() || list.len() > params.j {
                return Err(Error::Ballot(format!(
                    "ballot #{idx}: list {list} must have between 1 and {} candidates",
                    params.j
                )));
            }
            if !list.within(params.n) {
                return Err(Error::Ballot(format!(
                    "ballot #{idx}: list {list} has candidates outside [1, {}]",
                    params.n
                )));
            }
            let amount = match (e.weight, e.count) {
                (Some(w), None) => {
                    let q: Rational = w
                        .parse()
                        .map_err(|err| Error::Ballot(format!("ballot #{idx}: {err}")))?;
                    if q.is_negative() || q.is_zero() {
                        return Err(Error::Ballot(format!(
                            "ballot #{idx}: weight {q} must be positive"
                        )));
                    }
                    Multiplicity::Share(q)
                }
                (None, Some(0)) => {
                    return Err(Error::Ballot(format!(
                        "ballot #{idx}: count must be positive"
                    )))
                }
                (None, Some(c)) => Multiplicity::Count(c),
                _ => {
                    return Err(Error::Ballot(format!(
                        "ballot #{idx}: exactly one of \"weight\" or \"count\" is required"
                    )))
                }
            };
            entries.push(RawEntry { list, amount });
        }
        Ok(RawBallotFile { params, entries })
    }

    pub fn to_json(&self) -> String {
        let repr = FileRepr {
            n: self.params.n,
            k: self.params.k,
            j: self.params.j,
            ballots: self
                .entries
                .iter()
                .map(|e| {
                    let (weight, count) = match &e.amount {
                        Multiplicity::Count(c) => (None, Some(*c)),
                        Multiplicity::Share(q) => (Some(q.to_string()), None),
                    };
                    EntryRepr {
                        list: e.list.to_vec(),
                        weight,
                        count,
                    }
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&repr).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        RawBallotFile::from_json(&text)
    }

    pub fn has_short_lists(&self) -> bool {
        self.entries.iter().any(|e| e.list.len() < self.params.j)
    }
}

/// Turns counts or shares into a distribution, merging repeated lists.
pub fn normalize(raw: &RawBallotFile) -> Result<VoterDistribution> {
    if raw.entries.is_empty() {
        return Err(Error::Ballot("no ballots".into()));
    }
    let mut acc: BTreeMap<CandidateSubset, Rational> = BTreeMap::new();
    let mut total = Rational::zero();
    for e in &raw.entries {
        if e.list.len() != raw.params.j {
            return Err(Error::Ballot(format!(
                "list {} has {} candidates; complete short lists before normalizing",
                e.list,
                e.list.len()
            )));
        }
        let v = e.amount.value();
        total += &v;
        *acc.entry(e.list).or_default() += v;
    }
    if total.is_zero() || total.is_negative() {
        return Err(Error::Ballot("total ballot weight must be positive".into()));
    }
    for w in acc.values_mut() {
        *w = w.checked_div(&total)?;
    }
    VoterDistribution::new(raw.params, acc)
}

/// Uniform distribution over the given lists.
pub fn uniform_on(params: &ElectionParams, lists: &[CandidateSubset]) -> Result<VoterDistribution> {
    let mut set = BTreeMap::new();
    for l in lists {
        params.check_list(l)?;
        set.insert(*l, Rational::zero());
    }
    if set.is_empty() {
        return Err(Error::InvalidArgument(
            "uniform distribution over no lists".into(),
        ));
    }
    let share = Rational::new(1, set.len() as u64).expect("nonzero");
    for w in set.values_mut() {
        *w = share.clone();
    }
    VoterDistribution::new(*params, set)
}

/// `w_r = P(R_r(center))` for each `0 <= r <= D`.
pub fn ring_weights(dist: &VoterDistribution, center: &CandidateSubset) -> Result<RingWeights> {
    let params = dist.params();
    params.check_list(center)?;
    let mut weights = vec![Rational::zero(); params.diameter() as usize + 1];
    for (list, w) in dist.support() {
        let r = (params.j - list.intersection_len(center)) as usize;
        weights[r] += w;
    }
    Ok(RingWeights {
        center: *center,
        weights,
    })
}

/// The concentric distribution with the given ring weights: each list in
/// ring `r` receives `w_r / |R_r|`.
///
/// Trailing entries beyond the diameter are accepted only when zero.
pub fn concentric(
    center: &CandidateSubset,
    weights: &[Rational],
    params: &ElectionParams,
) -> Result<VoterDistribution> {
    params.check_list(center)?;
    let d = params.diameter() as usize;
    if let Some((r, _)) = weights
        .iter()
        .enumerate()
        .skip(d + 1)
        .find(|(_, w)| !w.is_zero())
    {
        return Err(Error::InvalidArgument(format!(
            "weight on ring {r} beyond the diameter {d}"
        )));
    }
    if weights.iter().any(Rational::is_negative) {
        return Err(Error::InvalidArgument("negative ring weight".into()));
    }
    let mut support = BTreeMap::new();
    for (r, w) in weights.iter().enumerate().take(d + 1) {
        if w.is_zero() {
            continue;
        }
        let size: BigUint = ring_size(params, r as u32)?;
        let each = w.checked_div(&Rational::from(size))?;
        for l in ring(center, r as u32, params)? {
            support.insert(l, each.clone());
        }
    }
    VoterDistribution::new(*params, support)
}

/// `P°`: the concentric distribution about `center` with `P`'s ring weights.
pub fn project_concentric(
    dist: &VoterDistribution,
    center: &CandidateSubset,
) -> Result<VoterDistribution> {
    let rw = ring_weights(dist, center)?;
    concentric(center, &rw.weights, dist.params())
}

/// Extends every short list to a `j`-list inside `spec`.
///
/// Missing center members are added first in increasing order, then the
/// smallest outsiders. This maximizes overlap with the center, so when the
/// result falls outside the ball no superset lies inside it and the entry
/// is rejected.
pub fn complete_short_lists(raw: &RawBallotFile, spec: &BallSpec) -> Result<RawBallotFile> {
    let params = raw.params;
    params.check_list(&spec.center)?;
    let mut entries = Vec::with_capacity(raw.entries.len());
    for (idx, e) in raw.entries.iter().enumerate() {
        let mut list = e.list;
        let fill = spec
            .center
            .difference(&list)
            .iter()
            .chain(spec.center.union(&list).complement(params.n).iter());
        for c in fill {
            if list.len() >= params.j {
                break;
            }
            list = list.with(c);
        }
        if list.len() != params.j || !spec.contains(&list) {
            return Err(Error::OutsideBall(format!(
                "ballot #{idx} {} has no {}-candidate superset within distance {} of {}",
                e.list, params.j, spec.radius, spec.center
            )));
        }
        entries.push(RawEntry {
            list,
            amount: e.amount.clone(),
        });
    }
    Ok(RawBallotFile { params, entries })
}

/// Seeded generators for distributions and ballot files.
pub mod generate {
    use super::*;
    use crate::exactnum::{binomial_u64, unrank_subset};
    use crate::johnson::ball;
    use rand::Rng;

    pub fn uniform_all(params: &ElectionParams) -> Result<VoterDistribution> {
        let lists: Vec<_> = params.lists().collect();
        uniform_on(params, &lists)
    }

    pub fn uniform_ball(params: &ElectionParams, spec: &BallSpec) -> Result<VoterDistribution> {
        uniform_on(params, &ball(spec, params)?)
    }

    pub fn uniform_ring(
        params: &ElectionParams,
        center: &CandidateSubset,
        r: u32,
    ) -> Result<VoterDistribution> {
        uniform_on(params, &ring(center, r, params)?)
    }

    fn random_weights<R: Rng>(
        rng: &mut R,
        lists: Vec<CandidateSubset>,
        params: &ElectionParams,
    ) -> Result<VoterDistribution> {
        let counts: Vec<u64> = lists.iter().map(|_| rng.random_range(1..=12)).collect();
        let total: u64 = counts.iter().sum();
        let map = lists
            .into_iter()
            .zip(counts)
            .map(|(l, c)| (l, Rational::new(c, total).expect("total > 0")))
            .collect::<BTreeMap<_, _>>();
        VoterDistribution::new(*params, map)
    }

    /// Random distribution on up to `max_support` distinct lists of `J(n, j)`.
    pub fn random_distribution<R: Rng>(
        rng: &mut R,
        params: &ElectionParams,
        max_support: usize,
    ) -> Result<VoterDistribution> {
        let total = binomial_u64(params.n as u64, params.j as u64)
            .ok_or_else(|| Error::Overflow(format!("C({}, {})", params.n, params.j)))?;
        let cap = (max_support.max(1) as u64).min(total);
        let size = rng.random_range(1..=cap);
        let mut chosen = std::collections::BTreeSet::new();
        while (chosen.len() as u64) < size {
            chosen.insert(unrank_subset(
                rng.random_range(0..total),
                params.n,
                params.j,
            )?);
        }
        random_weights(rng, chosen.into_iter().collect(), params)
    }

    /// Random distribution on up to `max_support` distinct lists of a ball.
    pub fn random_on_ball<R: Rng>(
        rng: &mut R,
        params: &ElectionParams,
        spec: &BallSpec,
        max_support: usize,
    ) -> Result<VoterDistribution> {
        random_among(rng, params, ball(spec, params)?, max_support)
    }

    /// Random distribution on up to `max_support` lists from `pool`.
    pub fn random_among<R: Rng>(
        rng: &mut R,
        params: &ElectionParams,
        mut pool: Vec<CandidateSubset>,
        max_support: usize,
    ) -> Result<VoterDistribution> {
        if pool.is_empty() {
            return Err(Error::InvalidArgument("empty pool".into()));
        }
        let size = rng.random_range(1..=max_support.max(1).min(pool.len()));
        // partial Fisher-Yates
        for i in 0..size {
            let pick = rng.random_range(i..pool.len());
            pool.swap(i, pick);
        }
        pool.truncate(size);
        random_weights(rng, pool, params)
    }

    /// `voters` independent uniform picks from the ball, as a count file.
    pub fn random_ballots_on_ball<R: Rng>(
        rng: &mut R,
        params: &ElectionParams,
        spec: &BallSpec,
        voters: u64,
    ) -> Result<RawBallotFile> {
        if voters == 0 {
            return Err(Error::InvalidArgument(
                "at least one voter is required".into(),
            ));
        }
        let pool = ball(spec, params)?;
        let mut counts: BTreeMap<CandidateSubset, u64> = BTreeMap::new();
        for _ in 0..voters {
            *counts
                .entry(pool[rng.random_range(0..pool.len())])
                .or_default() += 1;
        }
        Ok(RawBallotFile {
            params: *params,
            entries: counts
                .into_iter()
                .map(|(list, c)| RawEntry {
                    list,
                    amount: Multiplicity::Count(c),
                })
                .collect(),
        })
    }

    /// `alpha * a + (1 - alpha) * b`.
    pub fn mix(
        a: &VoterDistribution,
        b: &VoterDistribution,
        alpha: &Rational,
    ) -> Result<VoterDistribution> {
        if a.params() != b.params() {
            return Err(Error::InvalidArgument(
                "mixing distributions with different parameters".into(),
            ));
        }
        if alpha.is_negative() || alpha > &Rational::one() {
            return Err(Error::InvalidArgument(format!(
                "mixing weight {alpha} outside [0, 1]"
            )));
        }
        let beta = Rational::one() - alpha;
        let mut map: BTreeMap<CandidateSubset, Rational> = BTreeMap::new();
        for (l, w) in a.support() {
            *map.entry(*l).or_default() += w * alpha;
        }
        for (l, w) in b.support() {
            *map.entry(*l).or_default() += w * &beta;
        }
        VoterDistribution::new(*a.params(), map)
    }
}
