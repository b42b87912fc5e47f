//! Naive reference implementations for cross-checking.
//!
//! Nothing here touches the ranking tables, strategies or coefficient
//! formulas of the optimized modules; only plain data types are shared.

use std::collections::BTreeSet;

use crate::ballots::VoterDistribution;
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::johnson::{CandidateSubset, ElectionParams};
use crate::tally::{Strategy, TallyResult};

pub const BRUTE_MAX_N: u32 = 20;
pub const GRID_MAX_RADIUS: u32 = 3;
pub const GRID_MAX_DENOMINATOR: u32 = 60;

/// All `size`-element subsets of `{1..n}` by plain recursion.
pub fn all_subsets(n: u32, size: u32) -> Vec<Vec<u32>> {
    fn go(next: u32, n: u32, size: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() as u32 == size {
            out.push(cur.clone());
            return;
        }
        for c in next..=n {
            cur.push(c);
            go(c + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, size, &mut Vec::new(), &mut out);
    out
}

fn overlap(a: &[u32], b: &[u32]) -> u32 {
    a.iter().filter(|x| b.contains(x)).count() as u32
}

fn to_subset(v: &[u32]) -> CandidateSubset {
    CandidateSubset::from_members(v).expect("oracle builds valid subsets")
}

/// Scores every committee by summing every support list whose overlap with
/// it is at least `s`.
pub fn brute_best(dist: &VoterDistribution, s: u32) -> Result<TallyResult> {
    let params = dist.params();
    if params.n > BRUTE_MAX_N {
        return Err(Error::SizeGuard(format!(
            "brute force is limited to n <= {BRUTE_MAX_N}"
        )));
    }
    if s > params.j {
        return Err(Error::InvalidArgument(format!(
            "threshold {s} exceeds j = {}",
            params.j
        )));
    }
    let support: Vec<(Vec<u32>, &Rational)> = dist
        .support()
        .iter()
        .map(|(l, w)| (l.to_vec(), w))
        .collect();
    let mut best: Option<Rational> = None;
    let mut winners = Vec::new();
    for committee in all_subsets(params.n, params.k) {
        let mut score = Rational::zero();
        for (list, w) in &support {
            if overlap(list, &committee) >= s {
                score += *w;
            }
        }
        match &best {
            Some(b) if score < *b => {}
            Some(b) if score == *b => winners.push(to_subset(&committee)),
            _ => {
                best = Some(score);
                winners = vec![to_subset(&committee)];
            }
        }
    }
    winners.sort();
    Ok(TallyResult {
        best_value: best.expect("at least one committee"),
        winners,
        strategy_used: Strategy::Brute,
        predicted_work: String::new(),
    })
}

/// Lists at distance exactly `r` from `center`, by filtering every list.
pub fn brute_ring(params: &ElectionParams, center: &[u32], r: u32) -> Vec<CandidateSubset> {
    let mut out: Vec<_> = all_subsets(params.n, params.j)
        .into_iter()
        .filter(|l| params.j - overlap(l, center) == r)
        .map(|l| to_subset(&l))
        .collect();
    out.sort();
    out
}

/// `b[r][m]` measured on a concrete committee: the share of ring-`r` lists
/// about `{1..j}` that a class-`m` committee contains.
pub fn brute_b_table(params: &ElectionParams) -> Vec<Vec<Rational>> {
    let (n, k, j) = (params.n, params.k, params.j);
    let center: Vec<u32> = (1..=j).collect();
    let lists = all_subsets(n, j);
    let max_r = j.min(n - j);
    let max_m = j.min(n - k);
    // class m: drop the last m center members, then fill from j+1 upward
    let committees: Vec<Vec<u32>> = (0..=max_m)
        .map(|m| (1..=j - m).chain(j + 1..=j + (k - j + m)).collect())
        .collect();
    (0..=max_r)
        .map(|r| {
            let ring: Vec<&Vec<u32>> = lists
                .iter()
                .filter(|l| j - overlap(l, &center) == r)
                .collect();
            committees
                .iter()
                .map(|cm| {
                    let inside = ring.iter().filter(|l| overlap(l, cm) == j).count() as u64;
                    Rational::new(inside, ring.len() as u64).expect("rings up to D are nonempty")
                })
                .collect()
        })
        .collect()
}

/// Minimum over grid weight vectors `(i_0/d, ..., i_ρ/d)` of the largest
/// class approval. Upper-bounds the exact concentric minimax.
pub fn brute_minimax_grid(
    params: &ElectionParams,
    radius: u32,
    denominator: u32,
) -> Result<Rational> {
    if radius > GRID_MAX_RADIUS || denominator == 0 || denominator > GRID_MAX_DENOMINATOR {
        return Err(Error::SizeGuard(format!(
            "grid search needs radius <= {GRID_MAX_RADIUS} and 1 <= denominator <= {GRID_MAX_DENOMINATOR}"
        )));
    }
    if params.n > BRUTE_MAX_N {
        return Err(Error::SizeGuard(format!(
            "grid search is limited to n <= {BRUTE_MAX_N}"
        )));
    }
    if radius > params.j.min(params.n - params.j) {
        return Err(Error::InvalidArgument(format!(
            "radius {radius} beyond the diameter"
        )));
    }
    let b = brute_b_table(params);
    let parts = radius as usize + 1;
    let mut best: Option<Rational> = None;
    let mut counts = vec![0u32; parts];
    compositions(denominator, parts, 0, &mut counts, &mut |c| {
        let w: Vec<Rational> = c
            .iter()
            .map(|&i| Rational::new(i, denominator).expect("d > 0"))
            .collect();
        let worst = (0..b[0].len())
            .map(|m| {
                w.iter()
                    .enumerate()
                    .map(|(r, x)| x * &b[r][m])
                    .sum::<Rational>()
            })
            .max()
            .expect("at least one class");
        if best.as_ref().is_none_or(|cur| worst < *cur) {
            best = Some(worst);
        }
    });
    Ok(best.expect("at least one grid point"))
}

fn compositions(
    left: u32,
    parts: usize,
    idx: usize,
    cur: &mut [u32],
    visit: &mut impl FnMut(&[u32]),
) {
    if idx == parts - 1 {
        cur[idx] = left;
        visit(cur);
        return;
    }
    for x in 0..=left {
        cur[idx] = x;
        compositions(left - x, parts, idx + 1, cur, visit);
    }
}

/// Lists reachable from `center` within distance `radius`, by filtering.
pub fn brute_ball(
    params: &ElectionParams,
    center: &[u32],
    radius: u32,
) -> BTreeSet<CandidateSubset> {
    (0..=radius)
        .flat_map(|r| brute_ring(params, center, r))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballots::{normalize, uniform_on, RawBallotFile};

    #[test]
    fn subsets_counts() {
        assert_eq!(all_subsets(5, 2).len(), 10);
        assert_eq!(all_subsets(4, 0), vec![Vec::<u32>::new()]);
        assert_eq!(all_subsets(3, 3), vec![vec![1, 2, 3]]);
    }

    #[test]
    fn seven_candidates_by_brute_force() {
        let text = r#"{"n":7,"k":4,"j":3,"ballots":[{"list":[1,2,3],"count":7},
            {"list":[4,5,6],"count":2},{"list":[4,5,7],"count":2},{"list":[4,6,7],"count":2},
            {"list":[5,6,7],"count":2}]}"#;
        let p = normalize(&RawBallotFile::from_json(text).unwrap()).unwrap();
        let res = brute_best(&p, 3).unwrap();
        assert_eq!(res.best_value, "8/15".parse().unwrap());
        assert_eq!(
            res.winners,
            vec![CandidateSubset::from_members(&[4, 5, 6, 7]).unwrap()]
        );
    }

    #[test]
    fn point_mass_winners() {
        let params = ElectionParams::new(6, 4, 2).unwrap();
        let l = CandidateSubset::from_members(&[2, 5]).unwrap();
        let p = uniform_on(&params, &[l]).unwrap();
        let res = brute_best(&p, 2).unwrap();
        assert_eq!(res.best_value, Rational::one());
        assert_eq!(res.winners.len(), 6); // C(4, 2)
        assert!(res.winners.iter().all(|c| l.is_subset_of(c)));
    }

    #[test]
    fn grid_examples() {
        let six = ElectionParams::new(6, 4, 3).unwrap();
        assert_eq!(
            brute_minimax_grid(&six, 1, 12).unwrap(),
            "1/3".parse().unwrap()
        );
        assert_eq!(brute_minimax_grid(&six, 0, 7).unwrap(), Rational::one());
        let g12 = brute_minimax_grid(&six, 2, 12).unwrap();
        let g24 = brute_minimax_grid(&six, 2, 24).unwrap();
        assert!(g24 <= g12);
        assert!(brute_minimax_grid(&six, 4, 12).is_err());
        assert!(brute_minimax_grid(&six, 1, 61).is_err());
    }

    #[test]
    fn guards() {
        let params = ElectionParams::new(21, 3, 2).unwrap();
        let l = CandidateSubset::from_members(&[1, 2]).unwrap();
        let p = uniform_on(&params, &[l]).unwrap();
        assert!(matches!(brute_best(&p, 2), Err(Error::SizeGuard(_))));
    }
}
