//! Iteration of the unicritical maps `z -> z^d + c`, over `Z/pZ` and exactly
//! over `Q`.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};
use thiserror::Error;

use crate::arith::{factorize, mod_pow, PrimeModulus};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error("map degree must be at least 2, got {0}")]
    Degree(u64),
    #[error("residue {z} is outside [0, {p})")]
    Residue { z: u64, p: u64 },
    #[error("cannot parse rational {0:?}")]
    Rational(String),
}

/// The map `z -> z^degree + c` with a 64-bit coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MapSpec {
    degree: u64,
    c: i64,
}

impl MapSpec {
    pub fn new(degree: u64, c: i64) -> Result<Self, DynamicsError> {
        if degree < 2 {
            return Err(DynamicsError::Degree(degree));
        }
        Ok(MapSpec { degree, c })
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn c(&self) -> i64 {
        self.c
    }
}

/// A reduced rational number with positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint(BigRational);

impl RationalPoint {
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Self {
        RationalPoint(BigRational::new(numerator.into(), denominator.into()))
    }

    pub fn integer(n: i64) -> Self {
        RationalPoint(BigRational::from_integer(n.into()))
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    /// Bit length of the larger of `|numerator|` and `denominator`.
    pub fn height_bits(&self) -> u64 {
        self.0.numer().bits().max(self.0.denom().bits())
    }
}

impl From<BigRational> for RationalPoint {
    fn from(r: BigRational) -> Self {
        RationalPoint(r)
    }
}

impl FromStr for RationalPoint {
    type Err = DynamicsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DynamicsError::Rational(s.to_string());
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(RationalPoint(BigRational::new(num, den)))
    }
}

/// Always `num/den`, including integers (`2/1`) so that list fields parse
/// back uniformly.
impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

/// `z -> z^degree + c` over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMap {
    degree: u64,
    c: RationalPoint,
}

impl RationalMap {
    pub fn new(degree: u64, c: RationalPoint) -> Result<Self, DynamicsError> {
        if degree < 2 {
            return Err(DynamicsError::Degree(degree));
        }
        Ok(RationalMap { degree, c })
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn c(&self) -> &RationalPoint {
        &self.c
    }

    pub fn eval(&self, z: &RationalPoint) -> RationalPoint {
        let zd: BigRational = Pow::pow(&z.0, self.degree as u32);
        RationalPoint(zd + &self.c.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitStatus {
    Resolved,
    Divergent,
}

/// Forward orbit of one point, split into its preperiodic tail and cycle.
///
/// For a resolved orbit `preperiod` is the minimal `m` and `period` the
/// minimal `n >= 1` with `f^(m+n)(start) = f^m(start)`. For a divergent
/// orbit `tail` holds every point computed before the cutoff, `preperiod`
/// equals its length and `period` is `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRecord<T> {
    pub start: T,
    pub preperiod: usize,
    pub period: Option<usize>,
    pub tail: Vec<T>,
    pub cycle: Vec<T>,
    pub status: OrbitStatus,
}

/// Iterates `step` from `start` until a point repeats or `diverged` fires.
/// Visited points are indexed by first appearance, so the first repeat
/// yields the minimal preperiod and period directly.
fn trace_orbit<T, F, D>(start: T, mut step: F, mut diverged: D) -> OrbitRecord<T>
where
    T: Clone + Eq + Hash,
    F: FnMut(&T) -> T,
    D: FnMut(&T) -> bool,
{
    let mut seen: HashMap<T, usize> = HashMap::new();
    let mut points: Vec<T> = Vec::new();
    let mut cur = start.clone();
    loop {
        if let Some(&first) = seen.get(&cur) {
            let cycle = points.split_off(first);
            return OrbitRecord {
                start,
                preperiod: first,
                period: Some(cycle.len()),
                tail: points,
                cycle,
                status: OrbitStatus::Resolved,
            };
        }
        if diverged(&cur) {
            return OrbitRecord {
                start,
                preperiod: points.len(),
                period: None,
                tail: points,
                cycle: Vec::new(),
                status: OrbitStatus::Divergent,
            };
        }
        seen.insert(cur.clone(), points.len());
        let next = step(&cur);
        points.push(std::mem::replace(&mut cur, next));
    }
}

/// `(z^d + c) mod p`, normalized into `[0, p)`.
pub fn eval_mod(map: MapSpec, z: u64, p: PrimeModulus) -> u64 {
    let m = p.get();
    debug_assert!(z < m);
    let zd = mod_pow(z as i64, map.degree, m);
    ((zd as u128 + p.reduce(map.c) as u128) % m as u128) as u64
}

/// Fixed residues of a map modulo `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointReport {
    pub p: PrimeModulus,
    pub map: MapSpec,
    pub residues: Vec<u64>,
    pub literal_count: u64,
}

/// Scans every residue mod `p` for `z^d + c = z`.
pub fn fixed_points_mod(map: MapSpec, p: PrimeModulus) -> FixedPointReport {
    let residues: Vec<u64> = (0..p.get())
        .filter(|&z| eval_mod(map, z, p) == z)
        .collect();
    FixedPointReport {
        p,
        map,
        literal_count: residues.len() as u64,
        residues,
    }
}

pub fn orbit_mod(
    map: MapSpec,
    z0: u64,
    p: PrimeModulus,
) -> Result<OrbitRecord<u64>, DynamicsError> {
    if z0 >= p.get() {
        return Err(DynamicsError::Residue { z: z0, p: p.get() });
    }
    Ok(trace_orbit(z0, |&z| eval_mod(map, z, p), |_| false))
}

/// Bit cutoff applied to numerators and denominators of rational iterates.
pub const DEFAULT_CUTOFF_BITS: u64 = 512;

/// Exact rational orbit. Divergent once any iterate's numerator or
/// denominator needs more than `size_cutoff_bits` bits.
pub fn orbit_rational(
    map: &RationalMap,
    z0: RationalPoint,
    size_cutoff_bits: u64,
) -> OrbitRecord<RationalPoint> {
    trace_orbit(
        z0,
        |z| map.eval(z),
        |z| z.height_bits() > size_cutoff_bits,
    )
}

/// `z^d - z + c == 0` evaluated exactly; overflow of `z^d` in 128 bits
/// means `|z^d|` dwarfs `|z| + |c|`, so such `z` is never a root.
pub(crate) fn is_integer_fixed_point(z: i64, degree: u64, c: i64) -> bool {
    let z = z as i128;
    let zd = match z {
        0 | 1 => z,
        -1 => {
            if degree.is_multiple_of(2) {
                1
            } else {
                -1
            }
        }
        _ => match u32::try_from(degree).ok().and_then(|d| z.checked_pow(d)) {
            Some(v) => v,
            None => return false,
        },
    };
    zd - z + c as i128 == 0
}

/// Every integer `z` with `z^d + c = z`, ascending.
pub fn integer_fixed_points(map: MapSpec) -> Vec<i64> {
    let (d, c) = (map.degree, map.c);
    if c == 0 {
        // roots of z (z^(d-1) - 1)
        return if d % 2 == 1 { vec![-1, 0, 1] } else { vec![0, 1] };
    }
    // monic with nonzero constant term: integer roots divide c
    let mut roots: Vec<i64> = factorize(c.unsigned_abs())
        .divisors()
        .into_iter()
        .flat_map(|q| {
            let q = q as i128;
            [q, -q]
        })
        .filter_map(|z| i64::try_from(z).ok())
        .filter(|&z| is_integer_fixed_point(z, d, c))
        .collect();
    roots.sort_unstable();
    roots
}

/// `z^d + c` on arbitrary-precision integers; used by tests that cross-check
/// the 128-bit root test.
pub fn eval_big(z: &BigInt, degree: u64, c: &BigInt) -> BigInt {
    Pow::pow(z, degree as u32) + c
}

/// Exact period `n >= 1` of a periodic rational point, if the orbit closes
/// up within `max_steps`.
pub fn exact_period(map: &RationalMap, z: &RationalPoint, max_steps: usize) -> Option<usize> {
    let mut cur = map.eval(z);
    for n in 1..=max_steps {
        if &cur == z {
            return Some(n);
        }
        cur = map.eval(&cur);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_in;

    fn pm(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn map(d: u64, c: i64) -> MapSpec {
        MapSpec::new(d, c).unwrap()
    }

    fn q(s: &str) -> RationalPoint {
        s.parse().unwrap()
    }

    #[test]
    fn degree_below_two_rejected() {
        assert_eq!(MapSpec::new(1, 0), Err(DynamicsError::Degree(1)));
        assert!(RationalMap::new(0, q("1")).is_err());
    }

    #[test]
    fn eval_mod_examples() {
        assert_eq!(eval_mod(map(3, 3), 2, pm(3)), 2);
        assert_eq!(eval_mod(map(4, 0), 1, pm(5)), 1);
        assert_eq!(eval_mod(map(5, -1), 0, pm(5)), 4);
        assert_eq!(eval_mod(map(2, i64::MIN), 3, pm(7)), (9 + (i64::MIN).rem_euclid(7) as u64) % 7);
    }

    #[test]
    fn fixed_points_examples() {
        let r = fixed_points_mod(map(3, 0), pm(3));
        assert_eq!((r.residues.as_slice(), r.literal_count), (&[0, 1, 2][..], 3));
        assert_eq!(fixed_points_mod(map(4, 0), pm(5)).residues, vec![0, 1]);
        let r = fixed_points_mod(map(4, 4), pm(5));
        assert!(r.residues.is_empty());
        assert_eq!(r.literal_count, 0);
        assert_eq!(fixed_points_mod(map(4, 2), pm(5)).residues, vec![3]);
    }

    #[test]
    fn orbit_mod_examples() {
        let r = orbit_mod(map(3, 0), 2, pm(3)).unwrap();
        assert_eq!((r.preperiod, r.period, r.cycle.clone()), (0, Some(1), vec![2]));

        // 0 -> 1 -> 2 -> 5 = 0 mod 5: purely periodic of length 3
        let r = orbit_mod(map(2, 1), 0, pm(5)).unwrap();
        assert_eq!(r.preperiod, 0);
        assert_eq!(r.period, Some(3));
        assert_eq!(r.cycle, vec![0, 1, 2]);

        let r = orbit_mod(map(4, 0), 2, pm(5)).unwrap();
        assert_eq!((r.preperiod, r.period), (1, Some(1)));
        assert_eq!((r.tail, r.cycle), (vec![2], vec![1]));

        assert!(orbit_mod(map(2, 0), 5, pm(5)).is_err());
    }

    #[test]
    fn rational_parse_and_display() {
        assert_eq!(q("-21/16").to_string(), "-21/16");
        assert_eq!(q("2/-4").to_string(), "-1/2");
        assert_eq!(q("3").to_string(), "3/1");
        assert!("1/0".parse::<RationalPoint>().is_err());
        assert!("x".parse::<RationalPoint>().is_err());
    }

    #[test]
    fn period_two_rational_orbit() {
        let f = RationalMap::new(2, q("-21/16")).unwrap();
        let r = orbit_rational(&f, q("1/4"), DEFAULT_CUTOFF_BITS);
        assert_eq!(r.status, OrbitStatus::Resolved);
        assert_eq!((r.preperiod, r.period), (0, Some(2)));
        assert_eq!(r.cycle, vec![q("1/4"), q("-5/4")]);
        assert!(r.tail.is_empty());
        assert_eq!(exact_period(&f, &q("1/4"), 10), Some(2));
    }

    #[test]
    fn preperiodic_rational_orbit() {
        let f = RationalMap::new(2, q("-29/16")).unwrap();
        let r = orbit_rational(&f, q("3/4"), DEFAULT_CUTOFF_BITS);
        assert_eq!((r.preperiod, r.period), (2, Some(3)));
        assert_eq!(r.tail, vec![q("3/4"), q("-5/4")]);
        assert_eq!(r.cycle, vec![q("-1/4"), q("-7/4"), q("5/4")]);
        assert_eq!(f.eval(r.cycle.last().unwrap()), r.cycle[0]);
    }

    #[test]
    fn escaping_integer_orbit_is_divergent() {
        let f = RationalMap::new(2, q("1")).unwrap();
        let r = orbit_rational(&f, q("1"), DEFAULT_CUTOFF_BITS);
        assert_eq!(r.status, OrbitStatus::Divergent);
        assert_eq!(r.period, None);
        assert!(r.cycle.is_empty());
        assert_eq!(&r.tail[..4], &[q("1"), q("2"), q("5"), q("26")]);
        assert_eq!(r.preperiod, r.tail.len());
        assert!(r.tail.iter().all(|z| z.height_bits() <= DEFAULT_CUTOFF_BITS));
        assert!(f.eval(r.tail.last().unwrap()).height_bits() > DEFAULT_CUTOFF_BITS);
    }

    #[test]
    fn integer_fixed_point_examples() {
        assert_eq!(integer_fixed_points(map(3, 0)), vec![-1, 0, 1]);
        assert_eq!(integer_fixed_points(map(4, 0)), vec![0, 1]);
        assert!(integer_fixed_points(map(3, 3)).is_empty());
        assert_eq!(integer_fixed_points(map(2, -6)), vec![-2, 3]);
        // z = -2: -8 + 2 + 6 = 0
        assert_eq!(integer_fixed_points(map(3, 6)), vec![-2]);
        assert!(integer_fixed_points(map(5, i64::MIN)).is_empty());
    }

    #[test]
    fn integer_root_test_agrees_with_bigint() {
        for d in 2..=9u64 {
            for c in -300i64..=300 {
                for z in -40i64..=40 {
                    let big = eval_big(&z.into(), d, &c.into()) - BigInt::from(z);
                    assert_eq!(is_integer_fixed_point(z, d, c), big.is_zero(), "d={d} c={c} z={z}");
                }
            }
        }
    }

    #[test]
    fn integer_roots_reduce_into_fixed_points_mod_p() {
        for d in 2..=6u64 {
            for c in -20i64..=20 {
                let roots = integer_fixed_points(map(d, c));
                for p in primes_in(2, 97) {
                    let fixed = fixed_points_mod(map(d, c), pm(p)).residues;
                    for &z in &roots {
                        assert!(fixed.contains(&pm(p).reduce(z)), "d={d} c={c} p={p} z={z}");
                    }
                }
            }
        }
    }

    #[test]
    fn fixed_points_are_exactly_the_unit_orbits() {
        for p in primes_in(2, 97) {
            let p = pm(p);
            for d in 2..=6u64 {
                for c in -20i64..=20 {
                    let f = map(d, c);
                    let rep = fixed_points_mod(f, p);
                    assert_eq!(rep.literal_count as usize, rep.residues.len());
                    let via_orbits: Vec<u64> = (0..p.get())
                        .filter(|&z| {
                            let o = orbit_mod(f, z, p).unwrap();
                            o.preperiod == 0 && o.period == Some(1)
                        })
                        .collect();
                    assert_eq!(rep.residues, via_orbits);
                    for &z in &rep.residues {
                        assert_eq!(eval_mod(f, z, p), z);
                    }
                }
            }
        }
    }
}
