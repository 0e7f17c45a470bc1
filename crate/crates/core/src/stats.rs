//! Finite averages, density series and height-bounded family counts built on
//! top of the counting functions.
//!
//! Every ratio is exact. Floating point shows up only in [`height`] and in
//! rendered output.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{Pow, ToPrimitive};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{factorize, prime_counts_at, primes_in, PrimeModulus};
use crate::counting::{count_literal, predict, CountingError, Family, Prediction, Predictor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error(transparent)]
    Counting(#[from] CountingError),
    #[error("no samples: {0}")]
    Empty(String),
    #[error("prediction does not cover c = {c} mod p = {p}")]
    NotCovered { p: u64, c: i64 },
    #[error("invalid range: {0}")]
    Range(String),
    #[error("value out of 64-bit range: {0}")]
    Overflow(String),
    #[error("unknown {what} {value:?}")]
    Unknown { what: &'static str, value: String },
}

/// Which residue class of `c` an average is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Filter {
    /// `p | c`
    DividesC,
    /// `p | c - 1`
    DividesCMinus1,
    /// `p | c + 1`
    DividesCPlus1,
    /// `p` does not divide `c`; sampled as `c = pt + 2`
    NotDividesC,
}

impl Filter {
    /// `c = p*t + offset`.
    pub fn offset(self) -> i64 {
        match self {
            Filter::DividesC => 0,
            Filter::DividesCMinus1 => 1,
            Filter::DividesCPlus1 => -1,
            Filter::NotDividesC => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Filter::DividesC => "divides-c",
            Filter::DividesCMinus1 => "divides-c-minus-1",
            Filter::DividesCPlus1 => "divides-c-plus-1",
            Filter::NotDividesC => "not-divides-c",
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Filter {
    type Err = StatsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Filter::DividesC,
            Filter::DividesCMinus1,
            Filter::DividesCPlus1,
            Filter::NotDividesC,
        ]
        .into_iter()
        .find(|f| f.as_str() == s)
        .ok_or_else(|| StatsError::Unknown { what: "filter", value: s.to_string() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Literal,
    Predicted,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Literal => "literal",
            Mode::Predicted => "predicted",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = StatsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "literal" => Ok(Mode::Literal),
            "predicted" => Ok(Mode::Predicted),
            _ => Err(StatsError::Unknown { what: "mode", value: s.to_string() }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AverageReport {
    pub family: Family,
    pub filter: Filter,
    pub mode: Mode,
    pub prime_lo: i64,
    pub prime_hi: i64,
    pub t_range: u64,
    pub sample_count: u64,
    pub sum: u64,
    pub mean: Ratio<u64>,
}

/// One fixed-point count in the requested mode.
fn count_in_mode(family: Family, c: i64, p: PrimeModulus, mode: Mode) -> Result<u64, StatsError> {
    match mode {
        Mode::Literal => Ok(count_literal(family, c, p)?),
        Mode::Predicted => match predict(family, c, p, Predictor::Published)?.predicted {
            Prediction::Covered(v) => Ok(v),
            Prediction::NotCovered => Err(StatsError::NotCovered { p: p.get(), c }),
        },
    }
}

/// Mean fixed-point count over `c = p*t + offset` for every prime `p` in
/// `[prime_lo, prime_hi]` and `t` in `1..=t_range`.
pub fn average(
    family: Family,
    filter: Filter,
    mode: Mode,
    prime_lo: i64,
    prime_hi: i64,
    t_range: u64,
) -> Result<AverageReport, StatsError> {
    if prime_lo < family.min_prime() as i64 {
        return Err(CountingError::Range {
            family,
            min: family.min_prime(),
            p: prime_lo.max(0) as u64,
        }
        .into());
    }
    let primes = primes_in(prime_lo, prime_hi);
    if primes.is_empty() || t_range == 0 {
        return Err(StatsError::Empty(format!(
            "no primes in [{prime_lo}, {prime_hi}] or t_range = 0"
        )));
    }
    let samples: Vec<(PrimeModulus, i64)> = primes
        .iter()
        .flat_map(|&p| (1..=t_range).map(move |t| (p, t)))
        .map(|(p, t)| {
            let c = (p as i64)
                .checked_mul(t as i64)
                .and_then(|pt| pt.checked_add(filter.offset()))
                .ok_or_else(|| StatsError::Overflow(format!("{p} * {t}")))?;
            Ok((PrimeModulus::new(p).expect("sieved"), c))
        })
        .collect::<Result<_, StatsError>>()?;
    let counts: Vec<u64> = samples
        .par_iter()
        .map(|&(p, c)| count_in_mode(family, c, p, mode))
        .collect::<Result<_, _>>()?;
    let sum: u64 = counts.iter().sum();
    let n = counts.len() as u64;
    Ok(AverageReport {
        family,
        filter,
        mode,
        prime_lo,
        prime_hi,
        t_range,
        sample_count: n,
        sum,
        mean: Ratio::new(sum, n),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DensityKind {
    /// Primes `3 <= p <= c` with `N_c(p) = 3`, against all such primes.
    OmegaOverPi,
    /// Primes `5 <= p <= c` with `M_c(p) = 2`.
    MDensity2,
    /// Primes `5 <= p <= c` with `M_c(p) = 1`.
    MDensity1,
    /// Primes `3 <= p <= c` with `N_c(p) = 0`.
    NZeroDensity,
    /// Primes `5 <= p <= c` with `M_c(p) = 0`.
    MZeroDensity,
}

impl DensityKind {
    pub const ALL: [DensityKind; 5] = [
        DensityKind::OmegaOverPi,
        DensityKind::MDensity2,
        DensityKind::MDensity1,
        DensityKind::NZeroDensity,
        DensityKind::MZeroDensity,
    ];

    pub fn family(self) -> Family {
        match self {
            DensityKind::OmegaOverPi | DensityKind::NZeroDensity => Family::DegreeP,
            _ => Family::DegreePMinus1,
        }
    }

    /// The count whose occurrences the numerator tallies.
    pub fn target(self) -> u64 {
        match self {
            DensityKind::OmegaOverPi => 3,
            DensityKind::MDensity2 => 2,
            DensityKind::MDensity1 => 1,
            DensityKind::NZeroDensity | DensityKind::MZeroDensity => 0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DensityKind::OmegaOverPi => "omega",
            DensityKind::MDensity2 => "m-two",
            DensityKind::MDensity1 => "m-one",
            DensityKind::NZeroDensity => "n-zero",
            DensityKind::MZeroDensity => "m-zero",
        }
    }
}

impl fmt::Display for DensityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DensityKind {
    type Err = StatsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DensityKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| StatsError::Unknown { what: "density kind", value: s.to_string() })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityRow {
    pub c: u64,
    pub numerator: u64,
    pub denominator: u64,
    pub ratio: Ratio<u64>,
}

impl DensityRow {
    fn new(c: u64, numerator: u64, denominator: u64) -> Self {
        DensityRow { c, numerator, denominator, ratio: Ratio::new(numerator, denominator) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensitySeries {
    pub kind: DensityKind,
    pub rows: Vec<DensityRow>,
}

fn strided(c_lo: u64, c_hi: u64, stride: u64) -> Result<Vec<u64>, StatsError> {
    if stride == 0 {
        return Err(StatsError::Range("stride must be positive".into()));
    }
    if c_lo > c_hi {
        return Err(StatsError::Range(format!("c range {c_lo}:{c_hi} is empty")));
    }
    if c_hi > i64::MAX as u64 {
        return Err(StatsError::Overflow(format!("c = {c_hi}")));
    }
    Ok((c_lo..=c_hi).step_by(stride as usize).collect())
}

/// Rows `(c, omega_odd(c), prime_count_odd(c), ratio)` for the strided range.
pub fn density_omega_series(c_lo: u64, c_hi: u64, stride: u64) -> Result<DensitySeries, StatsError> {
    if c_lo < 3 {
        return Err(StatsError::Range(format!("c_lo must be at least 3, got {c_lo}")));
    }
    let cs = strided(c_lo, c_hi, stride)?;
    let denominators = prime_counts_at(3, &cs);
    let rows = cs
        .par_iter()
        .zip(denominators.par_iter())
        .map(|(&c, &den)| DensityRow::new(c, factorize(c).omega_odd() as u64, den))
        .collect();
    Ok(DensitySeries { kind: DensityKind::OmegaOverPi, rows })
}

/// For each sampled `c`: primes `p` in `[family minimum, c]` whose count
/// equals the kind's target, over all such primes.
pub fn density_fixed_count(
    kind: DensityKind,
    mode: Mode,
    c_lo: u64,
    c_hi: u64,
    stride: u64,
) -> Result<DensitySeries, StatsError> {
    let cs = strided(c_lo, c_hi, stride)?;
    let family = kind.family();
    let lo = family.min_prime();
    if let Some(&c) = cs.iter().find(|&&c| c < lo) {
        return Err(StatsError::Empty(format!(
            "no primes in [{lo}, {c}] for density {kind}"
        )));
    }
    let primes: Vec<PrimeModulus> = primes_in(lo as i64, c_hi as i64)
        .into_iter()
        .map(|p| PrimeModulus::new(p).expect("sieved"))
        .collect();
    let rows = cs
        .par_iter()
        .map(|&c| {
            let upto = primes.partition_point(|p| p.get() <= c);
            let mut hits = 0;
            for &p in &primes[..upto] {
                let count = match mode {
                    Mode::Literal => Some(count_literal(family, c as i64, p)?),
                    Mode::Predicted => {
                        predict(family, c as i64, p, Predictor::Published)?.predicted.value()
                    }
                };
                if count == Some(kind.target()) {
                    hits += 1;
                }
            }
            Ok(DensityRow::new(c, hits, upto as u64))
        })
        .collect::<Result<_, StatsError>>()?;
    Ok(DensitySeries { kind, rows })
}

/// `2^omega(c) <= tau(c)`, as an exact integer comparison.
pub fn density_bound_check(c: u64) -> bool {
    let f = factorize(c);
    (1u64 << f.omega()) <= f.tau()
}

/// `H = |c|^(1/degree)`.
pub fn height(degree: u32, c: i64) -> f64 {
    assert!(degree >= 1, "degree must be positive");
    let a = c.unsigned_abs();
    if a == 0 {
        return 0.0;
    }
    let af = a as f64;
    let d = degree as f64;
    let mut r = af.powf(1.0 / d);
    // one Newton step on r^d = a
    r -= (r.powi(degree as i32) - af) / (d * r.powi(degree as i32 - 1));
    let rounded = r.round();
    if rounded >= 1.0 {
        let exact = (rounded as u128).checked_pow(degree);
        if exact == Some(a as u128) {
            return rounded;
        }
    }
    r
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyCountReport {
    pub degree: u32,
    pub x: u64,
    pub coefficient_bound: u64,
    pub total: u64,
    pub with_integer_root: u64,
    pub without_integer_root: u64,
}

/// Largest `b` with `b^(2d - 2) <= x^d`, i.e. `floor(x^(d / (2d - 2)))`.
pub fn coefficient_bound(degree: u32, x: u64) -> Result<u64, StatsError> {
    if degree < 2 {
        return Err(StatsError::Range(format!("degree must be at least 2, got {degree}")));
    }
    let e = 2 * degree - 2;
    let target: BigUint = Pow::pow(&BigUint::from(x), degree);
    let fits = |b: &BigUint| Pow::pow(b, e) <= target;
    let guess = (x as f64).powf(degree as f64 / e as f64);
    if !guess.is_finite() || guess > u64::MAX as f64 {
        return Err(StatsError::Overflow(format!("coefficient bound for X = {x}")));
    }
    let mut b = BigUint::from(guess.max(0.0) as u64);
    while b > BigUint::ZERO && !fits(&b) {
        b -= 1u32;
    }
    loop {
        let next = &b + 1u32;
        if !fits(&next) {
            break;
        }
        b = next;
    }
    b.to_u64().ok_or_else(|| StatsError::Overflow(format!("coefficient bound for X = {x}")))
}

/// All `c` in `[1, bound]` for which `x^degree - x + c` has an integer root.
/// An integer root `z` forces `c = z - z^degree`; sweep `z` outward from 0
/// until `|z|^degree - |z|` exceeds the bound.
pub fn rooted_coefficients(degree: u32, bound: u64) -> Vec<u64> {
    let mut marked = BTreeSet::new();
    for sign in [1i128, -1] {
        for mag in 0u64.. {
            let z = sign * mag as i128;
            let Some(zd) = z.checked_pow(degree) else { break };
            if mag >= 2 && zd.unsigned_abs() - mag as u128 > bound as u128 {
                break;
            }
            let c = z - zd;
            if c >= 1 && c as u128 <= bound as u128 {
                marked.insert(c as u64);
            }
        }
    }
    marked.into_iter().collect()
}

pub fn family_count(degree: u32, x: u64) -> Result<FamilyCountReport, StatsError> {
    let bound = coefficient_bound(degree, x)?;
    let with = rooted_coefficients(degree, bound).len() as u64;
    Ok(FamilyCountReport {
        degree,
        x,
        coefficient_bound: bound,
        total: bound,
        with_integer_root: with,
        without_integer_root: bound - with,
    })
}
