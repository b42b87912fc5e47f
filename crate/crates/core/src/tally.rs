//! Approval proportions and exhaustive most-popular-committee search.
//!
//! Weights are rescaled to integers over their common denominator before
//! searching. Every partial sum is bounded by that denominator, so when it
//! fits in a `u128` the search runs on machine integers; otherwise it falls
//! back to big integers. Both paths are exact.

use std::collections::HashMap;
use std::ops::AddAssign;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ballots::VoterDistribution;
use crate::error::{Error, Result};
use crate::exactnum::{
    binomial, binomial_u64, common_denominator, to_u128, Combinations, Rational,
};
use crate::johnson::{CandidateSubset, ElectionParams};

/// Dense enumeration refuses pools larger than this.
pub const DENSE_MAX_N: u32 = 28;

const CHUNK: u64 = 4096;
const DENSE_LOOKUP_MAX: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Scatter each support list onto its superset committees.
    Sparse,
    /// Visit every committee and gather its sublists.
    Dense,
    /// Reference enumeration from [`crate::oracle`].
    Brute,
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::Sparse => "sparse",
            Strategy::Dense => "dense",
            Strategy::Brute => "brute",
        })
    }
}

/// The maximal approval proportion together with every committee that
/// attains it, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TallyResult {
    pub best_value: Rational,
    pub winners: Vec<CandidateSubset>,
    pub strategy_used: Strategy,
    /// Elementary accumulation steps the chosen strategy performs.
    pub predicted_work: String,
}

impl TallyResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

fn check_threshold(params: &ElectionParams, s: u32) -> Result<()> {
    if s > params.j {
        return Err(Error::InvalidArgument(format!(
            "threshold s = {s} exceeds list size j = {}",
            params.j
        )));
    }
    Ok(())
}

/// `π_P(C)`: total weight of lists contained in `committee`.
pub fn approval(dist: &VoterDistribution, committee: &CandidateSubset) -> Result<Rational> {
    dist.params().check_committee(committee)?;
    Ok(dist
        .support()
        .iter()
        .filter(|(l, _)| l.is_subset_of(committee))
        .map(|(_, w)| w)
        .sum())
}

/// Total weight of lists sharing at least `s` candidates with `committee`.
pub fn threshold_approval(
    dist: &VoterDistribution,
    committee: &CandidateSubset,
    s: u32,
) -> Result<Rational> {
    let params = dist.params();
    params.check_committee(committee)?;
    check_threshold(params, s)?;
    Ok(dist
        .support()
        .iter()
        .filter(|(l, _)| l.intersection_len(committee) >= s)
        .map(|(_, w)| w)
        .sum())
}

/// Mean approval over all `C(n, k)` committees; always `C(k, j) / C(n, j)`.
pub fn average_approval(dist: &VoterDistribution) -> Rational {
    let p = dist.params();
    // each list lies in C(n - j, k - j) committees
    let supersets = binomial((p.n - p.j) as i64, (p.k - p.j) as i64).expect("n >= j");
    let total: Rational = dist
        .support()
        .values()
        .map(|w| w * &Rational::from(supersets.clone()))
        .sum();
    total / Rational::from(p.committee_count())
}

/// Approval (or threshold approval) of every committee, in colex order.
pub fn approval_profile(
    dist: &VoterDistribution,
    s: Option<u32>,
) -> Result<Vec<(CandidateSubset, Rational)>> {
    let params = *dist.params();
    let s = s.unwrap_or(params.j);
    check_threshold(&params, s)?;
    dense_guard(&params)?;
    Ok(params
        .committees()
        .map(|c| {
            let v = dist
                .support()
                .iter()
                .filter(|(l, _)| l.intersection_len(&c) >= s)
                .map(|(_, w)| w)
                .sum();
            (c, v)
        })
        .collect())
}

fn dense_guard(params: &ElectionParams) -> Result<()> {
    if params.n > DENSE_MAX_N {
        return Err(Error::SizeGuard(format!(
            "dense enumeration over C({}, {}) = {} committees refused (n > {DENSE_MAX_N})",
            params.n,
            params.k,
            params.committee_count()
        )));
    }
    Ok(())
}

/// Work estimate for each strategy: `(sparse, dense)`.
///
/// Sparse costs `|support| * C(n - j, k - j)`. Dense costs
/// `C(n, k) * C(k, j)` for plain approval and `C(n, k) * |support|` for a
/// threshold below `j`.
pub fn predicted_work(dist: &VoterDistribution, s: u32) -> (BigUint, BigUint) {
    let p = dist.params();
    let support = BigUint::from(dist.support_len());
    let sparse = &support * binomial((p.n - p.j) as i64, (p.k - p.j) as i64).expect("n >= j");
    let per_committee = if s == p.j {
        binomial(p.k as i64, p.j as i64).expect("k >= j")
    } else {
        support
    };
    (sparse, p.committee_count() * per_committee)
}

/// Chooses sparse when its predicted work is strictly smaller; thresholds
/// below `j` always use dense.
pub fn choose_strategy(dist: &VoterDistribution, s: u32) -> Strategy {
    if s < dist.params().j {
        return Strategy::Dense;
    }
    let (sparse, dense) = predicted_work(dist, s);
    if sparse < dense {
        Strategy::Sparse
    } else {
        Strategy::Dense
    }
}

/// Exact maximum of (threshold) approval over all committees with the full
/// argmax set. `s = None` means plain approval (`s = j`).
pub fn best_committees(dist: &VoterDistribution, s: Option<u32>) -> Result<TallyResult> {
    let s = s.unwrap_or(dist.params().j);
    check_threshold(dist.params(), s)?;
    best_committees_with(dist, Some(s), choose_strategy(dist, s))
}

/// As [`best_committees`] with a forced strategy. Sparse is only available
/// for plain approval.
pub fn best_committees_with(
    dist: &VoterDistribution,
    s: Option<u32>,
    strategy: Strategy,
) -> Result<TallyResult> {
    let params = *dist.params();
    let s = s.unwrap_or(params.j);
    check_threshold(&params, s)?;
    match strategy {
        Strategy::Sparse if s != params.j => {
            return Err(Error::InvalidArgument(
                "sparse tally supports only s = j".into(),
            ))
        }
        Strategy::Brute => {
            return Err(Error::InvalidArgument(
                "brute enumeration lives in the oracle module".into(),
            ))
        }
        Strategy::Dense => dense_guard(&params)?,
        Strategy::Sparse => {}
    }
    let (sparse_work, dense_work) = predicted_work(dist, s);
    let work = if strategy == Strategy::Sparse {
        sparse_work
    } else {
        dense_work
    };

    let scale = common_denominator(dist.support().values());
    let scaled: Vec<(CandidateSubset, BigUint)> = dist
        .support()
        .iter()
        .map(|(l, w)| {
            let v = w * &Rational::from(scale.clone());
            (*l, v.numer().magnitude().clone())
        })
        .collect();

    let (best, mut winners) = if to_u128(&scale).is_some() {
        let small: Vec<(CandidateSubset, u128)> = scaled
            .iter()
            .map(|(l, v)| (*l, to_u128(v).expect("bounded by the scale")))
            .collect();
        let (b, w) = search(&params, s, strategy, &small)?;
        (BigUint::from(b), w)
    } else {
        search(&params, s, strategy, &scaled)?
    };
    winners.sort();
    Ok(TallyResult {
        best_value: Rational::ratio(&best, &scale),
        winners,
        strategy_used: strategy,
        predicted_work: work.to_string(),
    })
}

trait Score: Clone + Ord + Default + Send + Sync + for<'a> AddAssign<&'a Self> {}
impl<T: Clone + Ord + Default + Send + Sync + for<'a> AddAssign<&'a T>> Score for T {}

type Best<T> = Option<(T, Vec<CandidateSubset>)>;

fn offer<T: Score>(best: &mut Best<T>, value: T, committee: CandidateSubset) {
    match best {
        Some((b, w)) if value == *b => w.push(committee),
        Some((b, _)) if value < *b => {}
        _ => *best = Some((value, vec![committee])),
    }
}

fn merge<T: Score>(a: Best<T>, b: Best<T>) -> Best<T> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some((va, mut wa)), Some((vb, wb))) => match va.cmp(&vb) {
            std::cmp::Ordering::Greater => Some((va, wa)),
            std::cmp::Ordering::Less => Some((vb, wb)),
            std::cmp::Ordering::Equal => {
                wa.extend(wb);
                Some((va, wa))
            }
        },
    }
}

fn search<T: Score>(
    params: &ElectionParams,
    s: u32,
    strategy: Strategy,
    weights: &[(CandidateSubset, T)],
) -> Result<(T, Vec<CandidateSubset>)> {
    let best = match strategy {
        Strategy::Sparse => sparse_search(params, weights),
        _ if s == params.j => dense_search(params, weights)?,
        _ => threshold_search(params, s, weights)?,
    };
    best.ok_or_else(|| Error::InvalidArgument("no committees to search".into()))
}

fn sparse_search<T: Score>(params: &ElectionParams, weights: &[(CandidateSubset, T)]) -> Best<T> {
    let mut acc: HashMap<CandidateSubset, T> = HashMap::new();
    for (list, w) in weights {
        for extra in list.complement(params.n).subsets(params.k - params.j) {
            *acc.entry(list.union(&extra)).or_default() += w;
        }
    }
    let mut best = None;
    for (c, v) in acc {
        offer(&mut best, v, c);
    }
    best
}

/// Runs `score` over every committee, partitioned into rank chunks that are
/// searched in parallel and merged exactly.
fn over_committees<T: Score>(
    params: &ElectionParams,
    score: impl Fn(CandidateSubset) -> T + Sync,
) -> Result<Best<T>> {
    let total = binomial_u64(params.n as u64, params.k as u64)
        .ok_or_else(|| Error::Overflow(format!("C({}, {})", params.n, params.k)))?;
    let chunks = total.div_ceil(CHUNK);
    let (n, k) = (params.n, params.k);
    let best = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let start = i * CHUNK;
            let len = CHUNK.min(total - start);
            let mut local = None;
            for c in Combinations::from_rank(n, k, start, len).expect("start < total") {
                offer(&mut local, score(c), c);
            }
            local
        })
        .reduce(|| None, merge);
    Ok(best)
}

enum ListLookup<T> {
    ByRank { table: Vec<T>, colex: Vec<Vec<u64>> },
    ByMask(HashMap<CandidateSubset, T>),
}

fn colex_rank(colex: &[Vec<u64>], list: &CandidateSubset) -> usize {
    list.iter()
        .enumerate()
        .map(|(i, c)| colex[c as usize - 1][i + 1])
        .sum::<u64>() as usize
}

impl<T: Score> ListLookup<T> {
    fn new(params: &ElectionParams, weights: &[(CandidateSubset, T)]) -> Self {
        match binomial_u64(params.n as u64, params.j as u64) {
            Some(count) if count <= DENSE_LOOKUP_MAX => {
                let colex: Vec<Vec<u64>> = (0..=params.n as u64)
                    .map(|a| {
                        (0..=params.j as u64)
                            .map(|b| binomial_u64(a, b).expect("small"))
                            .collect()
                    })
                    .collect();
                let mut table = vec![T::default(); count as usize];
                for (l, w) in weights {
                    table[colex_rank(&colex, l)] = w.clone();
                }
                ListLookup::ByRank { table, colex }
            }
            _ => ListLookup::ByMask(weights.iter().cloned().collect()),
        }
    }

    fn get(&self, list: &CandidateSubset) -> Option<&T> {
        match self {
            ListLookup::ByRank { table, colex } => table.get(colex_rank(colex, list)),
            ListLookup::ByMask(map) => map.get(list),
        }
    }
}

fn dense_search<T: Score>(
    params: &ElectionParams,
    weights: &[(CandidateSubset, T)],
) -> Result<Best<T>> {
    let lookup = ListLookup::new(params, weights);
    let j = params.j;
    over_committees(params, |c| {
        let mut total = T::default();
        for l in c.subsets(j) {
            if let Some(w) = lookup.get(&l) {
                total += w;
            }
        }
        total
    })
}

fn threshold_search<T: Score>(
    params: &ElectionParams,
    s: u32,
    weights: &[(CandidateSubset, T)],
) -> Result<Best<T>> {
    over_committees(params, |c| {
        let mut total = T::default();
        for (l, w) in weights {
            if l.intersection_len(&c) >= s {
                total += w;
            }
        }
        total
    })
}
