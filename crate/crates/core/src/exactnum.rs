//! Exact rationals, binomial coefficients and colexicographic subset ranking.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::johnson::CandidateSubset;

/// An exact rational number, always kept in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    /// `numer / denom` for unsigned operands; panics on a zero denominator.
    pub fn ratio(numer: &BigUint, denom: &BigUint) -> Self {
        assert!(!denom.is_zero(), "ratio with zero denominator");
        Rational(BigRational::new(
            BigInt::from(numer.clone()),
            BigInt::from(denom.clone()),
        ))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Arithmetic("reciprocal of zero".into()));
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn checked_div(&self, other: &Rational) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::Arithmetic("division by zero".into()));
        }
        Ok(Rational(&self.0 / &other.0))
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }

    /// Decimal expansion truncated toward zero after `digits` places,
    /// computed by exact long division.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let negative = self.is_negative();
        let numer = self.numer().abs();
        let denom = self.denom().clone();
        let (int_part, mut rem) = numer.div_rem(&denom);
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        out.push_str(&int_part.to_string());
        if digits > 0 {
            out.push('.');
            let ten = BigInt::from(10);
            for _ in 0..digits {
                rem *= &ten;
                let (d, r) = rem.div_rem(&denom);
                out.push_str(&d.to_string());
                rem = r;
            }
        }
        out
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_integer(s: &str) -> Result<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("not an integer: {s:?}")));
    }
    s.parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("not an integer: {s:?} ({e})")))
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p` or `p/q` with decimal-free integers.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once('/') {
            None => Ok(Rational::from_integer(parse_integer(s)?)),
            Some((p, q)) => {
                let denom = parse_integer(q)?;
                if denom.is_negative() {
                    return Err(Error::Parse(format!("negative denominator in {s:?}")));
                }
                Rational::new(parse_integer(p)?, denom)
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<u64> for Rational {
    fn from(v: u64) -> Self {
        Rational::from_integer(v)
    }
}

impl From<BigUint> for Rational {
    fn from(v: BigUint) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Panics on a zero divisor, like integer division; use `checked_div` otherwise.
forward_binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Rational> for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

/// `C(a, b)`, zero-extended: returns 0 when `b < 0` or `b > a`.
pub fn binomial(a: i64, b: i64) -> Result<BigUint> {
    if a < 0 {
        return Err(Error::InvalidArgument(format!(
            "binomial with negative upper index {a}"
        )));
    }
    Ok(binomial_unchecked(a as u64, b))
}

fn binomial_unchecked(a: u64, b: i64) -> BigUint {
    if b < 0 || b as u64 > a {
        return BigUint::zero();
    }
    let b = (b as u64).min(a - b as u64);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// `C(a, b)` as a `u64`, zero-extended; `None` on overflow.
pub fn binomial_u64(a: u64, b: u64) -> Option<u64> {
    if b > a {
        return Some(0);
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b as u128 {
        acc = acc * (a as u128 - i) / (i + 1);
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Pascal triangle of exact binomial coefficients up to `max_n`.
#[derive(Clone, Debug)]
pub struct BinomialTable {
    max_n: usize,
    rows: Vec<Vec<BigUint>>,
}

impl BinomialTable {
    pub fn new(max_n: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![BigUint::one()]);
        for a in 1..=max_n {
            let prev = &rows[a - 1];
            let mut row = Vec::with_capacity(a + 1);
            row.push(BigUint::one());
            for b in 1..a {
                row.push(&prev[b - 1] + &prev[b]);
            }
            row.push(BigUint::one());
            rows.push(row);
        }
        BinomialTable { max_n, rows }
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    /// `C(a, b)` with zero-extension; `a` beyond the table is an error.
    pub fn get(&self, a: i64, b: i64) -> Result<BigUint> {
        if a < 0 {
            return Err(Error::InvalidArgument(format!(
                "binomial with negative upper index {a}"
            )));
        }
        if a as usize > self.max_n {
            return Err(Error::InvalidArgument(format!(
                "C({a}, {b}) exceeds table size {}",
                self.max_n
            )));
        }
        if b < 0 || b > a {
            return Ok(BigUint::zero());
        }
        Ok(self.rows[a as usize][b as usize].clone())
    }
}

/// Colexicographic rank of `s` among the `|s|`-subsets of `[n]`.
///
/// The subset with 0-based sorted members `c_0 < c_1 < ...` has rank
/// `sum_i C(c_i, i + 1)`. Colex order coincides with increasing bitmask
/// value, which is what lets enumeration proceed incrementally.
pub fn rank_subset(s: CandidateSubset, n: u32) -> Result<u64> {
    if !s.within(n) {
        return Err(Error::InvalidArgument(format!(
            "{s} is not a subset of [{n}]"
        )));
    }
    let mut rank: u64 = 0;
    for (i, c) in s.iter().enumerate() {
        let term = binomial_u64(u64::from(c - 1), i as u64 + 1)
            .ok_or_else(|| Error::Overflow(format!("rank of {s} in [{n}]")))?;
        rank = rank
            .checked_add(term)
            .ok_or_else(|| Error::Overflow(format!("rank of {s} in [{n}]")))?;
    }
    Ok(rank)
}

/// Inverse of [`rank_subset`].
pub fn unrank_subset(rank: u64, n: u32, size: u32) -> Result<CandidateSubset> {
    let total = binomial_u64(u64::from(n), u64::from(size))
        .ok_or_else(|| Error::Overflow(format!("C({n}, {size})")))?;
    if rank >= total {
        return Err(Error::InvalidArgument(format!(
            "rank {rank} out of range for {size}-subsets of [{n}] (count {total})"
        )));
    }
    let mut rest = rank;
    let mut mask: u64 = 0;
    let mut upper = n;
    for i in (1..=size).rev() {
        // largest c < upper with C(c, i) <= rest
        let mut c = upper - 1;
        loop {
            let v = binomial_u64(u64::from(c), u64::from(i)).expect("bounded by total");
            if v <= rest {
                rest -= v;
                break;
            }
            c -= 1;
        }
        mask |= 1 << c;
        upper = c;
    }
    Ok(CandidateSubset::from_mask(mask))
}

/// Next bitmask with the same popcount in increasing numeric order
/// (Gosper's hack). Returns `None` once the result would have a bit at
/// position `n` or above.
pub(crate) fn next_combination(mask: u64, n: u32) -> Option<u64> {
    if mask == 0 {
        return None;
    }
    let c = mask & mask.wrapping_neg();
    let r = mask.checked_add(c)?;
    if r == 0 {
        return None;
    }
    let next = (((r ^ mask) >> 2) / c) | r;
    if n < 64 && next >> n != 0 {
        None
    } else {
        Some(next)
    }
}

/// Iterator over all `size`-subsets of `[n]` in colex order.
pub struct Combinations {
    current: Option<u64>,
    n: u32,
    remaining: Option<u64>,
}

impl Combinations {
    pub fn new(n: u32, size: u32) -> Self {
        let current = if size > n {
            None
        } else if size == 0 {
            Some(0)
        } else {
            Some(low_bits(size))
        };
        Combinations {
            current,
            n,
            remaining: None,
        }
    }

    /// Iterates `count` subsets starting at colex rank `start`.
    pub fn from_rank(n: u32, size: u32, start: u64, count: u64) -> Result<Self> {
        let first = unrank_subset(start, n, size)?;
        Ok(Combinations {
            current: Some(first.mask()),
            n,
            remaining: Some(count),
        })
    }
}

pub(crate) fn low_bits(count: u32) -> u64 {
    if count >= 64 {
        u64::MAX
    } else {
        (1u64 << count) - 1
    }
}

impl Iterator for Combinations {
    type Item = CandidateSubset;

    fn next(&mut self) -> Option<CandidateSubset> {
        if let Some(rem) = self.remaining.as_mut() {
            if *rem == 0 {
                return None;
            }
            *rem -= 1;
        }
        let cur = self.current?;
        self.current = if cur == 0 {
            None
        } else {
            next_combination(cur, self.n)
        };
        Some(CandidateSubset::from_mask(cur))
    }
}

/// Lowest common multiple of the denominators of `values`.
pub(crate) fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigUint {
    values.into_iter().fold(BigUint::one(), |acc, v| {
        let d = v.denom().magnitude();
        acc.lcm(d)
    })
}

/// Fits a non-negative integer into `u128` if possible.
pub(crate) fn to_u128(v: &BigUint) -> Option<u128> {
    v.to_u128()
}
