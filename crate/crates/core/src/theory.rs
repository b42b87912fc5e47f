//! Closed-form guarantees, the `b_{r,m}` kernel and the exact worst case over
//! concentric distributions.
//!
//! Fix a center list `v`. Committees fall into classes `C_m` by how many
//! members of `v` they miss, and lists fall into rings `R_r` by distance
//! from `v`. Under a concentric distribution with ring weights `w_r` every
//! committee of class `m` has approval `sum_r w_r * b[r][m]`, where
//! `b[r][m]` is the fraction of ring-`r` lists that such a committee
//! contains.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{binomial, Combinations, Rational};
use crate::johnson::{CandidateSubset, ElectionParams};
use crate::report::VerificationReport;

fn c(a: i64, b: i64) -> BigUint {
    if a < 0 {
        return BigUint::default();
    }
    binomial(a, b).expect("a >= 0")
}

/// `C(k, j) / C(n, j)`: some committee always reaches this approval.
pub fn theorem1_bound(params: &ElectionParams) -> Rational {
    let (n, k, j) = (params.n as i64, params.k as i64, params.j as i64);
    Rational::ratio(&c(k, j), &c(n, j))
}

/// Number of members of `center` missing from `committee`.
pub fn class_of(committee: &CandidateSubset, center: &CandidateSubset) -> u32 {
    center.len() - committee.intersection_len(center)
}

/// `|C_m| = C(j, j - m) * C(n - j, k + m - j)`.
pub fn class_size(params: &ElectionParams, m: u32) -> Result<BigUint> {
    if m > params.max_class() {
        return Err(Error::InvalidArgument(format!(
            "class index {m} exceeds min(j, n - k) = {}",
            params.max_class()
        )));
    }
    let (n, k, j, m) = (params.n as i64, params.k as i64, params.j as i64, m as i64);
    Ok(c(j, j - m) * c(n - j, k + m - j))
}

/// Number of class-`m` committees containing one fixed list at distance `r`
/// from the center: `C(r, r - m) * C(n - j - r, k - j + m - r)`.
pub fn committees_in_class_containing(params: &ElectionParams, r: u32, m: u32) -> BigUint {
    let (n, k, j, r, m) = (
        params.n as i64,
        params.k as i64,
        params.j as i64,
        r as i64,
        m as i64,
    );
    c(r, r - m) * c(n - j - r, k - j + m - r)
}

/// `b[r][m]` for `0 <= r <= D`, `0 <= m <= min(j, n - k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BCoeffTable {
    pub params: ElectionParams,
    entries: Vec<Vec<Rational>>,
}

impl BCoeffTable {
    pub fn get(&self, r: u32, m: u32) -> Option<&Rational> {
        self.entries.get(r as usize)?.get(m as usize)
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    pub fn max_ring(&self) -> u32 {
        self.entries.len() as u32 - 1
    }

    pub fn max_class(&self) -> u32 {
        self.entries[0].len() as u32 - 1
    }

    /// Overwrites one cell. Only meant for exercising validators.
    pub fn set(&mut self, r: u32, m: u32, value: Rational) -> Result<()> {
        let cell = self
            .entries
            .get_mut(r as usize)
            .and_then(|row| row.get_mut(m as usize))
            .ok_or_else(|| Error::InvalidArgument(format!("no b-table cell ({r}, {m})")))?;
        *cell = value;
        Ok(())
    }
}

/// `b[r][m] = C(j-m, j-r) C(k+m-j, r) / (C(j, j-r) C(n-j, r))`, zero-extended.
pub fn b_entry(params: &ElectionParams, r: u32, m: u32) -> Rational {
    let (n, k, j, r, m) = (
        params.n as i64,
        params.k as i64,
        params.j as i64,
        r as i64,
        m as i64,
    );
    let num = c(j - m, j - r) * c(k + m - j, r);
    let den = c(j, j - r) * c(n - j, r);
    Rational::ratio(&num, &den)
}

pub fn b_coeff(params: &ElectionParams) -> BCoeffTable {
    let entries = (0..=params.diameter())
        .map(|r| {
            (0..=params.max_class())
                .map(|m| b_entry(params, r, m))
                .collect()
        })
        .collect();
    BCoeffTable {
        params: *params,
        entries,
    }
}

fn factorial(x: i64) -> BigUint {
    (1..=x as u64).fold(BigUint::from(1u32), |acc, i| acc * i)
}

/// The product-of-factorials form of `b[r][m]`; `None` where some factorial
/// argument is negative.
pub fn b_factorial_form(params: &ElectionParams, r: u32, m: u32) -> Option<Rational> {
    let (n, k, j, r, m) = (
        params.n as i64,
        params.k as i64,
        params.j as i64,
        r as i64,
        m as i64,
    );
    let args = [
        r,
        r - m,
        k + m - j,
        k + m - j - r,
        j - m,
        j,
        n - j - r,
        n - j,
    ];
    if args.iter().any(|&a| a < 0) {
        return None;
    }
    let num = factorial(r) * factorial(k + m - j) * factorial(j - m) * factorial(n - j - r);
    let den = factorial(r - m) * factorial(k + m - j - r) * factorial(j) * factorial(n - j);
    Some(Rational::ratio(&num, &den))
}

/// Approval of any class-`m` committee under the concentric distribution
/// with ring weights `weights` (indices beyond the table must be absent).
pub fn concentric_approval(weights: &[Rational], m: u32, table: &BCoeffTable) -> Result<Rational> {
    if m > table.max_class() {
        return Err(Error::InvalidArgument(format!(
            "class index {m} exceeds {}",
            table.max_class()
        )));
    }
    if weights.len() > table.entries.len() {
        return Err(Error::InvalidArgument(format!(
            "{} ring weights for a graph of diameter {}",
            weights.len(),
            table.max_ring()
        )));
    }
    Ok(weights
        .iter()
        .zip(&table.entries)
        .map(|(w, row)| w * &row[m as usize])
        .sum())
}

/// `j (k + 1 + m - j) / (k + 1)`: `b[r][m] >= b[r][m+1]` exactly when
/// `r` is at most this value.
pub fn lemma4_threshold(params: &ElectionParams, m: u32) -> Rational {
    let (k, j, m) = (params.k as i64, params.j as i64, m as i64);
    Rational::new(j * (k + 1 + m - j), k + 1).expect("k + 1 > 0")
}

/// Largest admissible radius for the ball guarantee: `j (1 - j / (k + 1))`.
pub fn ball_bound_radius_limit(params: &ElectionParams) -> Rational {
    lemma4_threshold(params, 0)
}

pub fn lemma4_check(params: &ElectionParams) -> VerificationReport {
    lemma4_check_table(&b_coeff(params))
}

/// Checks the b-monotonicity equivalence on every `(r, m)` cell of `table`.
///
/// Cells where both `b[r][m]` and `b[r][m+1]` vanish carry no information
/// (the zero-extension makes `0 >= 0` hold trivially) and are recorded as
/// passing without comparing against the threshold.
pub fn lemma4_check_table(table: &BCoeffTable) -> VerificationReport {
    let params = table.params;
    let mut report = VerificationReport::new(format!("b-monotonicity {params}"));
    for m in 0..table.max_class() {
        let threshold = lemma4_threshold(&params, m);
        for r in 0..=table.max_ring() {
            let here = table.get(r, m).expect("in range");
            let next = table.get(r, m + 1).expect("in range");
            let holds = here >= next;
            let cell = format!("(r={r}, m={m})");
            if here.is_zero() && next.is_zero() {
                report.record(cell, true, "degenerate: both coefficients vanish");
                continue;
            }
            let predicted = Rational::from(r as u64) <= threshold;
            report.record(
                cell,
                holds == predicted,
                format!("b[r][m]={here} b[r][m+1]={next} threshold={threshold}"),
            );
        }
    }
    report
}

fn check_ball_radius(params: &ElectionParams, radius: u32) -> Result<()> {
    if params.j < 2 {
        return Err(Error::Hypothesis(format!(
            "ball guarantees need j > 1, got j = {}",
            params.j
        )));
    }
    if radius >= params.diameter() {
        return Err(Error::Hypothesis(format!(
            "radius {radius} must be below the diameter {}; the ball is the whole graph",
            params.diameter()
        )));
    }
    Ok(())
}

/// `C(k - j, ρ) / C(n - j, ρ)` for `ρ <= j (1 - j / (k + 1))`.
pub fn theorem2_bound(params: &ElectionParams, radius: u32) -> Result<Rational> {
    check_ball_radius(params, radius)?;
    let limit = ball_bound_radius_limit(params);
    if Rational::from(radius as u64) > limit {
        return Err(Error::Hypothesis(format!(
            "radius {radius} exceeds j(1 - j/(k+1)) = {limit} for {params}"
        )));
    }
    let (n, k, j, rho) = (
        params.n as i64,
        params.k as i64,
        params.j as i64,
        radius as i64,
    );
    Ok(Rational::ratio(&c(k - j, rho), &c(n - j, rho)))
}

/// The ball guarantee scaled by the fraction `alpha` of voters in the ball.
pub fn corollary1_bound(
    params: &ElectionParams,
    radius: u32,
    alpha: &Rational,
) -> Result<Rational> {
    if alpha.is_negative() || alpha > &Rational::one() {
        return Err(Error::InvalidArgument(format!(
            "alpha = {alpha} outside [0, 1]"
        )));
    }
    Ok(theorem2_bound(params, radius)? * alpha)
}

/// Minimax over concentric distributions on a ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorstCaseResult {
    pub value: Rational,
    /// Ring weights `w_0, ..., w_ρ`.
    pub weights: Vec<Rational>,
    /// Smallest class index whose committees attain `value`.
    pub achieving_class: u32,
}

/// Largest class approval for ring weights `weights`, with the smallest
/// class attaining it.
pub fn max_class_approval(weights: &[Rational], table: &BCoeffTable) -> (Rational, u32) {
    let mut best = (Rational::zero(), 0);
    for m in 0..=table.max_class() {
        let v = concentric_approval(weights, m, table).expect("m in range");
        if m == 0 || v > best.0 {
            best = (v, m);
        }
    }
    best
}

/// Exact minimum, over ring weights `w_0..w_ρ >= 0` summing to one, of the
/// best class approval `max_m sum_r w_r b[r][m]`.
///
/// Written as a linear program in `(w_0, ..., w_ρ, t)`: minimize `t`
/// subject to one row per class, nonnegativity, and the simplex equality.
/// The optimum sits at a vertex, so every choice of `ρ + 1` tight
/// inequalities is solved exactly and the feasible solutions compared.
/// Ties are broken toward the lexicographically smallest weight vector.
pub fn worst_case_concentric(params: &ElectionParams, radius: u32) -> Result<WorstCaseResult> {
    check_ball_radius(params, radius)?;
    let table = b_coeff(params);
    solve_minimax(&table, radius)
}

/// [`worst_case_concentric`] over an explicit coefficient table.
pub fn solve_minimax(table: &BCoeffTable, radius: u32) -> Result<WorstCaseResult> {
    if radius > table.max_ring() {
        return Err(Error::InvalidArgument(format!(
            "radius {radius} beyond the table"
        )));
    }
    let vars = radius as usize + 2; // w_0..w_ρ, t
    let t = vars - 1;
    let classes = table.max_class() as usize + 1;
    // inequality rows a.x <= 0: classes first, then -w_r <= 0
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(classes + vars - 1);
    for m in 0..classes {
        let mut row: Vec<Rational> = (0..=radius as usize)
            .map(|r| table.entries[r][m].clone())
            .collect();
        row.push(-Rational::one());
        rows.push(row);
    }
    for r in 0..=radius as usize {
        let mut row = vec![Rational::zero(); vars];
        row[r] = -Rational::one();
        rows.push(row);
    }
    let mut simplex = vec![Rational::one(); vars];
    simplex[t] = Rational::zero();

    let bases: Vec<CandidateSubset> =
        Combinations::new(rows.len() as u32, vars as u32 - 1).collect();
    let best = bases
        .par_iter()
        .filter_map(|basis| {
            let mut system: Vec<Vec<Rational>> =
                basis.iter().map(|i| rows[i as usize - 1].clone()).collect();
            let mut rhs = vec![Rational::zero(); vars - 1];
            system.push(simplex.clone());
            rhs.push(Rational::one());
            let x = solve_linear(system, rhs)?;
            let feasible = rows.iter().all(|row| {
                let lhs: Rational = row.iter().zip(&x).map(|(a, b)| a * b).sum();
                !(lhs > Rational::zero())
            });
            feasible.then_some(x)
        })
        .min_by(|a, b| a[t].cmp(&b[t]).then_with(|| a[..t].cmp(&b[..t])))
        .ok_or_else(|| Error::Arithmetic("no feasible vertex found".into()))?;

    let weights = best[..t].to_vec();
    let (value, achieving_class) = max_class_approval(&weights, table);
    debug_assert_eq!(value, best[t]);
    Ok(WorstCaseResult {
        value,
        weights,
        achieving_class,
    })
}

/// Gauss-Jordan elimination over the rationals; `None` when singular.
fn solve_linear(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let size = b.len();
    for col in 0..size {
        let pivot = (col..size).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip().ok()?;
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..size {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            let pivot_row = a[col].clone();
            for (x, p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                let delta = &factor * p;
                *x = &*x - &delta;
            }
            let delta = &factor * &b[col];
            b[r] = &b[r] - &delta;
        }
    }
    Some(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballots::{concentric, generate::random_distribution};
    use crate::johnson::{distance, ring, ring_size};
    use crate::tally::{approval, best_committees};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(n: u32, k: u32, j: u32) -> ElectionParams {
        ElectionParams::new(n, k, j).unwrap()
    }

    fn s(m: &[u32]) -> CandidateSubset {
        CandidateSubset::from_members(m).unwrap()
    }

    fn q(x: &str) -> Rational {
        x.parse().unwrap()
    }

    fn all_params(max_n: u32) -> Vec<ElectionParams> {
        let mut out = Vec::new();
        for n in 2..=max_n {
            for k in 1..n {
                for j in 1..=k {
                    out.push(p(n, k, j));
                }
            }
        }
        out
    }

    #[test]
    fn theorem1_examples() {
        assert_eq!(theorem1_bound(&p(6, 4, 3)), q("1/5"));
        assert_eq!(theorem1_bound(&p(7, 4, 3)), q("4/35"));
        for n in 3..12 {
            for j in 1..n - 1 {
                assert_eq!(
                    theorem1_bound(&p(n, n - 1, j)),
                    Rational::new(n - j, n).unwrap()
                );
            }
        }
    }

    #[test]
    fn class_examples() {
        let v = s(&[1, 2, 3]);
        assert_eq!(class_of(&s(&[1, 2, 3, 6]), &v), 0);
        assert_eq!(class_of(&s(&[4, 5, 6, 7]), &v), 3);
        assert_eq!(class_of(&s(&[1, 2, 4, 5]), &v), 1);
        let six = p(6, 4, 3);
        assert_eq!(class_size(&six, 0).unwrap(), BigUint::from(3u32));
        assert_eq!(class_size(&six, 2).unwrap(), BigUint::from(3u32));
        assert!(class_size(&six, 3).is_err());
        let count = |m| six.committees().filter(|c| class_of(c, &v) == m).count();
        assert_eq!(count(0), 3);
        assert_eq!(count(2), 3);
    }

    #[test]
    fn classes_partition_committees() {
        for params in all_params(14) {
            let total: BigUint = (0..=params.max_class())
                .map(|m| class_size(&params, m).unwrap())
                .sum();
            assert_eq!(total, params.committee_count(), "{params}");
        }
    }

    #[test]
    fn containing_counts_match_enumeration() {
        let six = p(6, 4, 3);
        // list {1,2,4}: only {1,2,3,4} contains it and all of {1,2,3}
        assert_eq!(
            committees_in_class_containing(&six, 1, 0),
            BigUint::from(1u32)
        );
        // and {1,2,4,5}, {1,2,4,6} contain it while missing one center member
        assert_eq!(
            committees_in_class_containing(&six, 1, 1),
            BigUint::from(2u32)
        );
        for params in all_params(8) {
            let v = CandidateSubset::first(params.j);
            assert_eq!(
                committees_in_class_containing(&params, 0, 0),
                c((params.n - params.j) as i64, (params.k - params.j) as i64)
            );
            for r in 0..=params.diameter() {
                let list = ring(&v, r, &params).unwrap()[0];
                for m in 0..=params.max_class() {
                    let direct = params
                        .committees()
                        .filter(|cm| class_of(cm, &v) == m && list.is_subset_of(cm))
                        .count();
                    assert_eq!(
                        committees_in_class_containing(&params, r, m),
                        BigUint::from(direct),
                        "{params} r={r} m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn b_table_examples_and_semantics() {
        for params in all_params(9) {
            let t = b_coeff(&params);
            assert_eq!(t.get(0, 0), Some(&Rational::one()));
            let v = CandidateSubset::first(params.j);
            for r in 0..=params.diameter() {
                let ring_r = ring(&v, r, &params).unwrap();
                let size = Rational::from(ring_size(&params, r).unwrap());
                for m in 0..=params.max_class() {
                    let b = t.get(r, m).unwrap();
                    assert!(&Rational::zero() <= b && b <= &Rational::one());
                    if r < m {
                        assert!(b.is_zero());
                    }
                    if let Some(f) = b_factorial_form(&params, r, m) {
                        assert_eq!(&f, b, "{params} r={r} m={m}");
                    }
                    // every class-m committee contains the same share of ring r
                    if params.n <= 8 {
                        for cm in params.committees().filter(|cm| class_of(cm, &v) == m) {
                            let inside = ring_r.iter().filter(|l| l.is_subset_of(&cm)).count();
                            assert_eq!(&(Rational::from(inside as u64) / size.clone()), b);
                        }
                    }
                }
            }
        }
        assert_eq!(b_coeff(&p(6, 4, 3)).get(1, 0), Some(&q("1/3")));
    }

    #[test]
    fn concentric_approval_matches_tally() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let six = p(6, 4, 3);
        let t = b_coeff(&six);
        assert_eq!(
            concentric_approval(&[Rational::one()], 0, &t).unwrap(),
            Rational::one()
        );
        assert_eq!(
            concentric_approval(&[Rational::zero(), Rational::one()], 0, &t).unwrap(),
            q("1/3")
        );
        for params in all_params(8) {
            let t = b_coeff(&params);
            let v = CandidateSubset::first(params.j);
            let raw: Vec<u64> = (0..=params.diameter())
                .map(|_| rng.random_range(0..5))
                .collect();
            let total: u64 = raw.iter().sum::<u64>().max(1);
            let mut w: Vec<Rational> = raw
                .iter()
                .map(|&x| Rational::new(x, total).unwrap())
                .collect();
            if raw.iter().all(|&x| x == 0) {
                w[0] = Rational::one();
            }
            let dist = concentric(&v, &w, &params).unwrap();
            for cm in params.committees() {
                let m = class_of(&cm, &v);
                assert_eq!(
                    concentric_approval(&w, m, &t).unwrap(),
                    approval(&dist, &cm).unwrap(),
                    "{params} {cm}"
                );
            }
        }
    }

    #[test]
    fn lemma4_examples() {
        let six = p(6, 4, 3);
        assert_eq!(lemma4_threshold(&six, 0), q("6/5"));
        let t = b_coeff(&six);
        assert!(t.get(1, 0).unwrap() >= t.get(1, 1).unwrap());
        for params in all_params(12) {
            let rep = lemma4_check(&params);
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn lemma4_integer_threshold_boundary() {
        // cells where r equals an integral threshold still satisfy >=
        let mut hits = 0;
        for params in all_params(12) {
            let t = b_coeff(&params);
            for m in 0..params.max_class() {
                let th = lemma4_threshold(&params, m);
                if th.is_integer() && th <= Rational::from(params.diameter() as u64) {
                    let r = th.floor().try_into().unwrap();
                    assert!(
                        t.get(r, m).unwrap() >= t.get(r, m + 1).unwrap(),
                        "{params} r={r} m={m}"
                    );
                    hits += 1;
                }
            }
        }
        assert!(hits > 10);
    }

    #[test]
    fn lemma4_detects_corruption() {
        let six = p(6, 4, 3);
        let mut t = b_coeff(&six);
        t.set(1, 0, Rational::zero()).unwrap();
        let rep = lemma4_check_table(&t);
        assert!(!rep.passed());
        assert!(rep.failures().any(|f| f.instance == "(r=1, m=0)"));
        assert!(t.set(9, 0, Rational::zero()).is_err());
    }

    #[test]
    fn theorem2_examples() {
        let six = p(6, 4, 3);
        assert_eq!(theorem2_bound(&six, 1).unwrap(), q("1/3"));
        assert!(matches!(theorem2_bound(&six, 2), Err(Error::Hypothesis(_))));
        assert_eq!(theorem2_bound(&p(8, 5, 3), 1).unwrap(), q("2/5"));
        assert_eq!(theorem2_bound(&p(9, 6, 2), 0).unwrap(), Rational::one());
        assert!(matches!(
            theorem2_bound(&p(5, 3, 1), 0),
            Err(Error::Hypothesis(_))
        ));
        assert_eq!(corollary1_bound(&six, 1, &q("3/4")).unwrap(), q("1/4"));
        assert_eq!(
            corollary1_bound(&six, 1, &Rational::one()).unwrap(),
            q("1/3")
        );
        assert!(corollary1_bound(&six, 1, &Rational::zero())
            .unwrap()
            .is_zero());
        assert!(corollary1_bound(&six, 1, &q("5/4")).is_err());
    }

    #[test]
    fn worst_case_examples() {
        let six = p(6, 4, 3);
        let wc = worst_case_concentric(&six, 1).unwrap();
        assert_eq!(wc.value, q("1/3"));
        assert_eq!(wc.weights, vec![Rational::zero(), Rational::one()]);
        assert_eq!(wc.achieving_class, 0);
        let wc0 = worst_case_concentric(&six, 0).unwrap();
        assert_eq!(
            (wc0.value, wc0.weights),
            (Rational::one(), vec![Rational::one()])
        );
        let wc2 = worst_case_concentric(&six, 2).unwrap();
        assert!(wc2.value <= q("4/19"));
        assert!(wc2.value >= q("1/5"));
        assert!(q("4/19") > q("1/5"));
        assert!(worst_case_concentric(&six, 3).is_err());
    }

    #[test]
    fn worst_case_matches_closed_form_inside_hypothesis() {
        for params in all_params(10).into_iter().filter(|p| p.j > 1) {
            let limit = ball_bound_radius_limit(&params);
            for rho in 0..params.diameter() {
                if Rational::from(rho as u64) > limit {
                    continue;
                }
                let wc = worst_case_concentric(&params, rho).unwrap();
                assert_eq!(
                    wc.value,
                    theorem2_bound(&params, rho).unwrap(),
                    "{params} rho={rho}"
                );
                let mut e = vec![Rational::zero(); rho as usize + 1];
                e[rho as usize] = Rational::one();
                assert_eq!(wc.weights, e);
                assert_eq!(wc.achieving_class, 0);
            }
        }
    }

    #[test]
    fn class_approval_monotone_inside_hypothesis() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for params in all_params(10).into_iter().filter(|p| p.j > 1) {
            let limit = ball_bound_radius_limit(&params);
            let t = b_coeff(&params);
            for rho in 0..params.diameter() {
                if Rational::from(rho as u64) > limit {
                    continue;
                }
                for _ in 0..5 {
                    let w: Vec<Rational> = (0..=rho)
                        .map(|_| Rational::from(rng.random_range(0..7u64)))
                        .collect();
                    for m in 0..params.max_class() {
                        assert!(
                            concentric_approval(&w, m, &t).unwrap()
                                >= concentric_approval(&w, m + 1, &t).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn worst_case_lower_bounds_every_ball_distribution() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for params in [p(6, 4, 3), p(7, 4, 3), p(8, 5, 4), p(8, 4, 2)] {
            let v = CandidateSubset::first(params.j);
            for rho in 0..params.diameter() {
                let wc = worst_case_concentric(&params, rho).unwrap();
                let pool: Vec<_> = params
                    .lists()
                    .filter(|l| distance(l, &v).unwrap() <= rho)
                    .collect();
                for _ in 0..20 {
                    let dist =
                        crate::ballots::generate::random_among(&mut rng, &params, pool.clone(), 30)
                            .unwrap();
                    assert!(best_committees(&dist, None).unwrap().best_value >= wc.value);
                }
            }
        }
        // random distributions on the whole graph still clear the average floor
        let six = p(6, 4, 3);
        for _ in 0..20 {
            let dist = random_distribution(&mut rng, &six, 20).unwrap();
            assert!(best_committees(&dist, None).unwrap().best_value >= theorem1_bound(&six));
        }
    }

    #[test]
    fn gauss_jordan_solves_and_detects_singular() {
        let a = vec![vec![q("2"), q("1")], vec![q("1"), q("3")]];
        let x = solve_linear(a, vec![q("3"), q("5")]).unwrap();
        assert_eq!(x, vec![q("4/5"), q("7/5")]);
        let sing = vec![vec![q("1"), q("2")], vec![q("2"), q("4")]];
        assert!(solve_linear(sing, vec![q("1"), q("1")]).is_none());
    }
}
