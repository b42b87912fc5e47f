//! Geometry of the list space: the Johnson graph `J(n, j)` on `j`-subsets of
//! `[n]`, where two lists are adjacent when they share `j - 1` candidates.
//!
//! The graph is never materialized. Distance is closed form and rings are
//! built by choosing `j - r` members of the center and `r` outsiders.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{binomial, low_bits, Combinations, Rational};
use crate::report::VerificationReport;

/// Largest supported candidate pool; subsets are stored as 64-bit masks.
pub const MAX_CANDIDATES: u32 = 64;

/// Pool size `n`, committee size `k` and list size `j`, with
/// `1 <= j <= k < n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ElectionParams {
    pub n: u32,
    pub k: u32,
    pub j: u32,
}

impl ElectionParams {
    pub fn new(n: u32, k: u32, j: u32) -> Result<Self> {
        if j < 1 {
            return Err(Error::InvalidParams(format!(
                "list size j = {j} must be at least 1"
            )));
        }
        if j > k {
            return Err(Error::InvalidParams(format!(
                "list size j = {j} exceeds committee size k = {k}"
            )));
        }
        if k >= n {
            return Err(Error::InvalidParams(format!(
                "committee size k = {k} must be smaller than the pool n = {n}"
            )));
        }
        if n > MAX_CANDIDATES {
            return Err(Error::InvalidParams(format!(
                "n = {n} exceeds the supported maximum of {MAX_CANDIDATES} candidates"
            )));
        }
        Ok(ElectionParams { n, k, j })
    }

    /// Parses `"n,k,j"`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::InvalidParams(format!(
                "expected n,k,j but got {s:?}"
            )));
        }
        let mut vals = [0u32; 3];
        for (slot, p) in vals.iter_mut().zip(&parts) {
            *slot = p
                .parse()
                .map_err(|_| Error::InvalidParams(format!("not a non-negative integer: {p:?}")))?;
        }
        ElectionParams::new(vals[0], vals[1], vals[2])
    }

    /// Diameter `D = min(j, n - j)` of `J(n, j)`.
    pub fn diameter(&self) -> u32 {
        self.j.min(self.n - self.j)
    }

    /// Largest class index a committee can have relative to a center list.
    pub fn max_class(&self) -> u32 {
        self.j.min(self.n - self.k)
    }

    pub fn list_count(&self) -> BigUint {
        binomial(self.n as i64, self.j as i64).expect("n >= 0")
    }

    pub fn committee_count(&self) -> BigUint {
        binomial(self.n as i64, self.k as i64).expect("n >= 0")
    }

    pub fn check_list(&self, list: &CandidateSubset) -> Result<()> {
        self.check_sized(list, self.j, "list")
    }

    pub fn check_committee(&self, committee: &CandidateSubset) -> Result<()> {
        self.check_sized(committee, self.k, "committee")
    }

    fn check_sized(&self, s: &CandidateSubset, size: u32, what: &str) -> Result<()> {
        if s.len() != size {
            return Err(Error::InvalidArgument(format!(
                "{what} {s} has {} members, expected {size}",
                s.len()
            )));
        }
        if !s.within(self.n) {
            return Err(Error::InvalidArgument(format!(
                "{what} {s} has candidates outside [1, {}]",
                self.n
            )));
        }
        Ok(())
    }

    /// Every `j`-list of `[n]` in colex order.
    pub fn lists(&self) -> Combinations {
        Combinations::new(self.n, self.j)
    }

    /// Every `k`-committee of `[n]` in colex order.
    pub fn committees(&self) -> Combinations {
        Combinations::new(self.n, self.k)
    }
}

impl fmt::Display for ElectionParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, k={}, j={})", self.n, self.k, self.j)
    }
}

/// A set of candidates drawn from `{1, ..., 64}`; used for both lists and
/// committees. Candidate `c` is bit `c - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CandidateSubset(u64);

impl CandidateSubset {
    pub fn from_mask(mask: u64) -> Self {
        CandidateSubset(mask)
    }

    /// Builds a subset from 1-based candidates in any order; duplicates and
    /// candidates outside `1..=64` are rejected.
    pub fn from_members(members: &[u32]) -> Result<Self> {
        let mut mask = 0u64;
        for &c in members {
            if c == 0 || c > MAX_CANDIDATES {
                return Err(Error::InvalidArgument(format!(
                    "candidate {c} outside [1, {MAX_CANDIDATES}]"
                )));
            }
            let bit = 1u64 << (c - 1);
            if mask & bit != 0 {
                return Err(Error::InvalidArgument(format!(
                    "candidate {c} listed twice"
                )));
            }
            mask |= bit;
        }
        Ok(CandidateSubset(mask))
    }

    /// `{1, ..., size}`.
    pub fn first(size: u32) -> Self {
        CandidateSubset(low_bits(size))
    }

    /// Parses `"1,2,3"` or `"{1,2,3}"`.
    pub fn parse(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
        if inner.trim().is_empty() {
            return Ok(CandidateSubset(0));
        }
        let members = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad candidate {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        CandidateSubset::from_members(&members)
    }

    pub fn mask(&self) -> u64 {
        self.0
    }

    pub fn len(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, candidate: u32) -> bool {
        (1..=MAX_CANDIDATES).contains(&candidate) && self.0 >> (candidate - 1) & 1 == 1
    }

    pub fn is_subset_of(&self, other: &CandidateSubset) -> bool {
        self.0 & !other.0 == 0
    }

    /// True when every member lies in `[1, n]`.
    pub fn within(&self, n: u32) -> bool {
        self.0 & !low_bits(n) == 0
    }

    pub fn intersection_len(&self, other: &CandidateSubset) -> u32 {
        (self.0 & other.0).count_ones()
    }

    pub fn union(&self, other: &CandidateSubset) -> CandidateSubset {
        CandidateSubset(self.0 | other.0)
    }

    pub fn difference(&self, other: &CandidateSubset) -> CandidateSubset {
        CandidateSubset(self.0 & !other.0)
    }

    pub fn with(&self, candidate: u32) -> CandidateSubset {
        assert!((1..=MAX_CANDIDATES).contains(&candidate));
        CandidateSubset(self.0 | 1 << (candidate - 1))
    }

    /// Complement within `[n]`.
    pub fn complement(&self, n: u32) -> CandidateSubset {
        CandidateSubset(!self.0 & low_bits(n))
    }

    /// Members in increasing order, 1-based.
    pub fn iter(&self) -> Members {
        Members(self.0)
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    /// All `size`-subsets of this set, in colex order.
    pub fn subsets(&self, size: u32) -> SubsetsOf {
        SubsetsOf {
            members: self.to_vec(),
            inner: Combinations::new(self.len(), size),
        }
    }
}

/// Iterator over the members of a [`CandidateSubset`].
pub struct Members(u64);

impl Iterator for Members {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let bit = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(bit + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

/// Fixed-size subsets of a given set, obtained by scattering index
/// combinations onto its members.
pub struct SubsetsOf {
    members: Vec<u32>,
    inner: Combinations,
}

impl Iterator for SubsetsOf {
    type Item = CandidateSubset;

    fn next(&mut self) -> Option<CandidateSubset> {
        let idx = self.inner.next()?;
        let mask = idx
            .iter()
            .fold(0u64, |acc, i| acc | 1 << (self.members[i as usize - 1] - 1));
        Some(CandidateSubset(mask))
    }
}

impl Ord for CandidateSubset {
    /// Lexicographic on the sorted member sequences.
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for CandidateSubset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CandidateSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for CandidateSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for CandidateSubset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for CandidateSubset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let members = Vec::<u32>::deserialize(deserializer)?;
        CandidateSubset::from_members(&members).map_err(serde::de::Error::custom)
    }
}

/// A ball `B_radius(center)` in `J(n, j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BallSpec {
    pub center: CandidateSubset,
    pub radius: u32,
}

impl BallSpec {
    pub fn new(center: CandidateSubset, radius: u32, params: &ElectionParams) -> Result<Self> {
        params.check_list(&center)?;
        if radius > params.diameter() {
            return Err(Error::InvalidParams(format!(
                "radius {radius} exceeds the diameter {} of J({}, {})",
                params.diameter(),
                params.n,
                params.j
            )));
        }
        Ok(BallSpec { center, radius })
    }

    pub fn contains(&self, list: &CandidateSubset) -> bool {
        list.len() == self.center.len()
            && self.center.len() - self.center.intersection_len(list) <= self.radius
    }
}

/// Number of candidates by which two lists differ: `j - |v ∩ w|`.
pub fn distance(v: &CandidateSubset, w: &CandidateSubset) -> Result<u32> {
    if v.len() != w.len() {
        return Err(Error::InvalidArgument(format!(
            "lists {v} and {w} have different sizes"
        )));
    }
    Ok(v.len() - v.intersection_len(w))
}

/// `|R_r(v)| = C(j, j - r) * C(n - j, r)`.
pub fn ring_size(params: &ElectionParams, r: u32) -> Result<BigUint> {
    check_radius(params, r)?;
    let (n, j, r) = (params.n as i64, params.j as i64, r as i64);
    Ok(binomial(j, j - r)? * binomial(n - j, r)?)
}

fn check_radius(params: &ElectionParams, r: u32) -> Result<()> {
    if r > params.diameter() {
        return Err(Error::InvalidArgument(format!(
            "ring radius {r} exceeds the diameter {}",
            params.diameter()
        )));
    }
    Ok(())
}

/// All lists at distance exactly `r` from `center`, in lexicographic order.
pub fn ring(
    center: &CandidateSubset,
    r: u32,
    params: &ElectionParams,
) -> Result<Vec<CandidateSubset>> {
    params.check_list(center)?;
    check_radius(params, r)?;
    let outside = center.complement(params.n);
    let mut out = Vec::new();
    for kept in center.subsets(params.j - r) {
        for added in outside.subsets(r) {
            out.push(kept.union(&added));
        }
    }
    out.sort();
    Ok(out)
}

/// Union of rings `0..=radius`, sorted.
pub fn ball(spec: &BallSpec, params: &ElectionParams) -> Result<Vec<CandidateSubset>> {
    check_radius(params, spec.radius)?;
    let mut out = Vec::new();
    for r in 0..=spec.radius {
        out.extend(ring(&spec.center, r, params)?);
    }
    out.sort();
    Ok(out)
}

/// `(n j - j^2 - 1) / (n + 2)`: ring sizes grow from `r` to `r + 1` exactly
/// when `r` is at most this value.
pub fn ring_monotone_threshold(params: &ElectionParams) -> Rational {
    let (n, j) = (params.n as i64, params.j as i64);
    Rational::new(n * j - j * j - 1, n + 2).expect("n + 2 > 0")
}

/// Checks, for every `0 <= r < D`, that `|R_r| <= |R_{r+1}|` holds exactly
/// when `r <= ring_monotone_threshold`, and that this agrees with
/// `(j - r)(n - j - r) >= (r + 1)^2`.
pub fn ring_monotonicity_check(params: &ElectionParams) -> VerificationReport {
    let mut report = VerificationReport::new(format!("ring-monotonicity {params}"));
    let threshold = ring_monotone_threshold(params);
    let (n, j) = (params.n as i64, params.j as i64);
    for r in 0..params.diameter() {
        let here = ring_size(params, r).expect("r < D");
        let next = ring_size(params, r + 1).expect("r + 1 <= D");
        let grows = here <= next;
        let predicted = Rational::from(r as u64) <= threshold;
        let ri = r as i64;
        let product_form = (j - ri) * (n - j - ri) >= (ri + 1) * (ri + 1);
        report.record(
            format!("r={r}"),
            grows == predicted && grows == product_form,
            format!("|R_r|={here} |R_r+1|={next} threshold={threshold}"),
        );
    }
    report
}
