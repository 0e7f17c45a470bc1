//! Literal fixed-point counts for the two prime-indexed families and their
//! closed-form predictions.
//!
//! * `DegreeP`: `z -> z^p + c` over `Z/pZ`, counted by `N_c(p)`.
//! * `DegreePMinus1`: `z -> z^(p-1) + c` over `Z/pZ`, counted by `M_c(p)`.
//!
//! Predictions are checked, never trusted: [`verify`] pairs each prediction
//! with the exhaustive count and reports disagreement as data.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::arith::PrimeModulus;
use crate::dynamics::{fixed_points_mod, MapSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountingError {
    #[error("family {family} needs p >= {min}, got p = {p}")]
    Range { family: Family, min: u64, p: u64 },
    #[error("unknown family {0:?} (expected `p` or `p-1`)")]
    UnknownFamily(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `z^p + c`
    DegreeP,
    /// `z^(p-1) + c`
    DegreePMinus1,
}

impl Family {
    /// Smallest prime for which the family is defined.
    pub fn min_prime(self) -> u64 {
        match self {
            Family::DegreeP => 3,
            Family::DegreePMinus1 => 5,
        }
    }

    pub fn degree(self, p: u64) -> u64 {
        match self {
            Family::DegreeP => p,
            Family::DegreePMinus1 => p - 1,
        }
    }

    pub fn check(self, p: PrimeModulus) -> Result<(), CountingError> {
        if p.get() < self.min_prime() {
            return Err(CountingError::Range {
                family: self,
                min: self.min_prime(),
                p: p.get(),
            });
        }
        Ok(())
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Family::DegreeP => "p",
            Family::DegreePMinus1 => "p-1",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = CountingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "p" | "N" | "degree-p" => Ok(Family::DegreeP),
            "p-1" | "pm1" | "M" | "degree-p-1" => Ok(Family::DegreePMinus1),
            other => Err(CountingError::UnknownFamily(other.to_string())),
        }
    }
}

/// Which closed form to predict with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Predictor {
    /// The published counting theorems only.
    #[default]
    Published,
    /// For `M`, additionally predicts 1 on every residue outside `{0, p-1}`,
    /// from `z^(p-1) = 1` on nonzero residues. No effect on `N`.
    DerivedExtension,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Prediction {
    Covered(u64),
    NotCovered,
}

impl Prediction {
    pub fn value(self) -> Option<u64> {
        match self {
            Prediction::Covered(v) => Some(v),
            Prediction::NotCovered => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictionRecord {
    pub family: Family,
    pub residue_class: u64,
    pub predicted: Prediction,
    pub theorem_tag: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Match,
    Mismatch,
    NotCovered,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Match => "Match",
            Verdict::Mismatch => "Mismatch",
            Verdict::NotCovered => "NotCovered",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonRecord {
    pub p: PrimeModulus,
    pub c: i64,
    pub family: Family,
    pub literal: u64,
    pub prediction: PredictionRecord,
    pub verdict: Verdict,
}

/// Exhaustive count of fixed residues of the family's map for `(c, p)`.
pub fn count_literal(family: Family, c: i64, p: PrimeModulus) -> Result<u64, CountingError> {
    family.check(p)?;
    let map = MapSpec::new(family.degree(p.get()), c).expect("family degree is at least 2");
    Ok(fixed_points_mod(map, p).literal_count)
}

/// `N_c(p) = #{z mod p : z^p - z + c = 0}`.
pub fn count_n_literal(c: i64, p: PrimeModulus) -> Result<u64, CountingError> {
    count_literal(Family::DegreeP, c, p)
}

/// `M_c(p) = #{z mod p : z^(p-1) - z + c = 0}`.
pub fn count_m_literal(c: i64, p: PrimeModulus) -> Result<u64, CountingError> {
    count_literal(Family::DegreePMinus1, c, p)
}

/// 3 when `p | c`, otherwise 0.
pub fn predict_n(c: i64, p: PrimeModulus) -> Result<PredictionRecord, CountingError> {
    Family::DegreeP.check(p)?;
    let residue = p.reduce(c);
    Ok(PredictionRecord {
        family: Family::DegreeP,
        residue_class: residue,
        predicted: Prediction::Covered(if residue == 0 { 3 } else { 0 }),
        theorem_tag: if p.get() == 3 { "Thm 2.1" } else { "Thm 2.2" },
    })
}

/// 2 on `c = 0`, 1 on `c = 1`, 0 on `c = -1 (mod p)`; silent elsewhere.
pub fn predict_m(c: i64, p: PrimeModulus) -> Result<PredictionRecord, CountingError> {
    Family::DegreePMinus1.check(p)?;
    let residue = p.reduce(c);
    let predicted = match residue {
        0 => Prediction::Covered(2),
        1 => Prediction::Covered(1),
        r if r == p.get() - 1 => Prediction::Covered(0),
        _ => Prediction::NotCovered,
    };
    Ok(PredictionRecord {
        family: Family::DegreePMinus1,
        residue_class: residue,
        predicted,
        theorem_tag: if p.get() == 5 { "Thm 6.0.1" } else { "Thm 6.0.2" },
    })
}

/// [`predict_m`], with the uncovered residues filled in by the derived rule.
pub fn predict_m_extended(c: i64, p: PrimeModulus) -> Result<PredictionRecord, CountingError> {
    let mut rec = predict_m(c, p)?;
    if rec.predicted == Prediction::NotCovered {
        rec.predicted = Prediction::Covered(1);
        rec.theorem_tag = "derived-extension";
    }
    Ok(rec)
}

pub fn predict(
    family: Family,
    c: i64,
    p: PrimeModulus,
    predictor: Predictor,
) -> Result<PredictionRecord, CountingError> {
    match (family, predictor) {
        (Family::DegreeP, _) => predict_n(c, p),
        (Family::DegreePMinus1, Predictor::Published) => predict_m(c, p),
        (Family::DegreePMinus1, Predictor::DerivedExtension) => predict_m_extended(c, p),
    }
}

pub fn verdict(literal: u64, predicted: Prediction) -> Verdict {
    match predicted {
        Prediction::Covered(v) if v == literal => Verdict::Match,
        Prediction::Covered(_) => Verdict::Mismatch,
        Prediction::NotCovered => Verdict::NotCovered,
    }
}

/// Literal count against the published prediction.
pub fn verify(c: i64, p: PrimeModulus, family: Family) -> Result<ComparisonRecord, CountingError> {
    verify_with(c, p, family, Predictor::Published)
}

pub fn verify_with(
    c: i64,
    p: PrimeModulus,
    family: Family,
    predictor: Predictor,
) -> Result<ComparisonRecord, CountingError> {
    let literal = count_literal(family, c, p)?;
    let prediction = predict(family, c, p, predictor)?;
    Ok(ComparisonRecord {
        p,
        c,
        family,
        literal,
        verdict: verdict(literal, prediction.predicted),
        prediction,
    })
}

/// Verifies every `(p, c)` pair in parallel. Output is sorted by `(p, c)`
/// whatever order the pairs arrive in.
pub fn verify_grid(
    pairs: &[(PrimeModulus, i64)],
    family: Family,
    predictor: Predictor,
) -> Result<Vec<ComparisonRecord>, CountingError> {
    let mut sorted = pairs.to_vec();
    sorted.sort_unstable();
    sorted
        .par_iter()
        .map(|&(p, c)| verify_with(c, p, family, predictor))
        .collect()
}
