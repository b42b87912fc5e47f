//! Seeded verification sweeps: lemma validators, concentric domination,
//! oracle equivalence and bound self-tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ballots::generate::{random_distribution, random_on_ball};
use crate::ballots::project_concentric;
use crate::error::Result;
use crate::exactnum::{binomial_u64, unrank_subset, Rational};
use crate::johnson::{ring_monotonicity_check, BallSpec, ElectionParams};
use crate::oracle::brute_best;
use crate::report::VerificationReport;
use crate::tally::{best_committees, best_committees_with, Strategy};
use crate::theory::{b_coeff, ball_bound_radius_limit, lemma4_check_table, theorem2_bound};

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Largest pool size swept by the exhaustive validators.
    pub max_n: u32,
    pub seed: u64,
    /// Random instances per randomized suite.
    pub samples: usize,
    /// Replace `b[r][m]` before validating, to exercise the failure path.
    pub corrupt_b: Option<(u32, u32)>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_n: 10,
            seed: 0,
            samples: 100,
            corrupt_b: None,
        }
    }
}

/// Every valid `(n, k, j)` with `2 <= n <= max_n`.
pub fn all_params(max_n: u32) -> Vec<ElectionParams> {
    let mut out = Vec::new();
    for n in 2..=max_n.min(crate::johnson::MAX_CANDIDATES) {
        for k in 1..n {
            for j in 1..=k {
                out.push(ElectionParams::new(n, k, j).expect("enumerated in range"));
            }
        }
    }
    out
}

pub fn random_params<R: Rng>(rng: &mut R, min_n: u32, max_n: u32) -> ElectionParams {
    let n = rng.random_range(min_n.max(2)..=max_n);
    let k = rng.random_range(1..n);
    let j = rng.random_range(1..=k);
    ElectionParams::new(n, k, j).expect("drawn in range")
}

fn random_list<R: Rng>(
    rng: &mut R,
    params: &ElectionParams,
) -> Result<crate::johnson::CandidateSubset> {
    let total = binomial_u64(params.n as u64, params.j as u64).expect("n <= 64 and small j");
    unrank_subset(rng.random_range(0..total), params.n, params.j)
}

pub fn ring_monotonicity_suite(max_n: u32) -> VerificationReport {
    let mut report = VerificationReport::new("ring-monotonicity");
    for n in 2..=max_n {
        for j in 1..n {
            let params = ElectionParams::new(n, j, j).expect("j < n");
            report.absorb(ring_monotonicity_check(&params));
        }
    }
    report
}

pub fn lemma4_suite(max_n: u32, corrupt_b: Option<(u32, u32)>) -> VerificationReport {
    let mut report = VerificationReport::new("b-monotonicity");
    for params in all_params(max_n) {
        let mut table = b_coeff(&params);
        if let Some((r, m)) = corrupt_b {
            if let (Some(here), Some(next)) =
                (table.get(r, m).cloned(), table.get(r, m + 1).cloned())
            {
                // flip the comparison against the next class
                let flipped = if here >= next {
                    next - Rational::one()
                } else {
                    next + Rational::one()
                };
                table.set(r, m, flipped).expect("cell exists");
            }
        }
        report.absorb(lemma4_check_table(&table));
    }
    report
}

/// `best(P) >= best(P°)` for random `P` and random centers.
pub fn domination_suite(seed: u64, samples: usize, max_n: u32) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport::new("concentric-domination");
    for i in 0..samples {
        let params = random_params(&mut rng, 3, max_n);
        let dist = random_distribution(&mut rng, &params, 30)?;
        let center = random_list(&mut rng, &params)?;
        let proj = project_concentric(&dist, &center)?;
        let original = best_committees(&dist, None)?.best_value;
        let projected = best_committees(&proj, None)?.best_value;
        report.record(
            format!("#{i} {params} center={center}"),
            original >= projected,
            format!("best(P)={original} best(P°)={projected}"),
        );
    }
    Ok(report)
}

/// Optimized tallies against the brute-force oracle, including thresholds.
pub fn oracle_suite(seed: u64, samples: usize, max_n: u32) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport::new("oracle-equivalence");
    for i in 0..samples {
        let params = random_params(&mut rng, 3, max_n);
        let dist = random_distribution(&mut rng, &params, 40)?;
        let s = if i % 2 == 0 {
            params.j
        } else {
            rng.random_range(0..=params.j)
        };
        let reference = brute_best(&dist, s)?;
        let mut forced = vec![best_committees_with(&dist, Some(s), Strategy::Dense)?];
        if s == params.j {
            forced.push(best_committees_with(&dist, Some(s), Strategy::Sparse)?);
        }
        forced.push(best_committees(&dist, Some(s))?);
        let agree = forced
            .iter()
            .all(|r| r.best_value == reference.best_value && r.winners == reference.winners);
        report.record(
            format!("#{i} {params} s={s}"),
            agree,
            format!(
                "best={} winners={}",
                reference.best_value,
                reference.winners.len()
            ),
        );
    }
    Ok(report)
}

/// Random ball-supported distributions never tally below the ball bound.
pub fn bound_suite(seed: u64, samples: usize, max_n: u32) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport::new("ball-bound self-test");
    let eligible: Vec<(ElectionParams, u32)> = all_params(max_n)
        .into_iter()
        .filter(|p| p.j > 1)
        .flat_map(|p| {
            let limit = ball_bound_radius_limit(&p);
            (0..p.diameter())
                .filter(move |&rho| Rational::from(rho as u64) <= limit)
                .map(move |rho| (p, rho))
        })
        .collect();
    for i in 0..samples {
        let (params, rho) = eligible[rng.random_range(0..eligible.len())];
        let center = random_list(&mut rng, &params)?;
        let spec = BallSpec::new(center, rho, &params)?;
        let dist = random_on_ball(&mut rng, &params, &spec, 30)?;
        let bound = theorem2_bound(&params, rho)?;
        let best = best_committees(&dist, None)?.best_value;
        report.record(
            format!("#{i} {params} center={center} rho={rho}"),
            best >= bound,
            format!("best={best} bound={bound}"),
        );
    }
    Ok(report)
}

/// Runs every suite and returns the per-suite reports in a fixed order.
pub fn run_all(config: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    let random_n = config.max_n.min(9);
    Ok(vec![
        ring_monotonicity_suite(config.max_n),
        lemma4_suite(config.max_n, config.corrupt_b),
        domination_suite(config.seed, config.samples, random_n)?,
        oracle_suite(config.seed.wrapping_add(1), config.samples, random_n)?,
        bound_suite(config.seed.wrapping_add(2), config.samples, config.max_n)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep_passes_and_is_deterministic() {
        let cfg = VerifyConfig {
            max_n: 7,
            seed: 4,
            samples: 15,
            corrupt_b: None,
        };
        let a = run_all(&cfg).unwrap();
        assert!(
            a.iter().all(|r| r.passed()),
            "{:#?}",
            a.iter().filter(|r| !r.passed()).collect::<Vec<_>>()
        );
        assert_eq!(a, run_all(&cfg).unwrap());
    }

    #[test]
    fn corruption_is_reported() {
        let rep = lemma4_suite(6, Some((1, 0)));
        assert!(!rep.passed());
        assert!(rep.failures().all(|f| f.instance.contains("(r=1, m=0)")));
    }
}
