//! Integer and modular arithmetic: primality, sieving, factorization and the
//! classical arithmetic functions ω, Ω, τ and π.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// A prime modulus, certified at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self, ArithError> {
        if is_prime(p) {
            Ok(PrimeModulus(p))
        } else {
            Err(ArithError::NotPrime(p))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// Floored residue of a signed integer, always in `[0, p)`.
    #[inline]
    pub fn reduce(self, c: i64) -> u64 {
        c.rem_euclid(self.0 as i64) as u64
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<u64> for PrimeModulus {
    type Error = ArithError;

    fn try_from(p: u64) -> Result<Self, Self::Error> {
        PrimeModulus::new(p)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` for `m >= 2`; negative bases are reduced first.
pub fn mod_pow(base: i64, exp: u64, m: u64) -> u64 {
    assert!(m >= 2, "modulus must be at least 2");
    let b = if m <= i64::MAX as u64 {
        base.rem_euclid(m as i64) as u64
    } else {
        (base as i128).rem_euclid(m as i128) as u64
    };
    pow_mod_u64(b, exp, m)
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

// The first twelve primes are a deterministic witness set below 3.3e24.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller–Rabin for every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &WITNESSES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest `r` with `r * r <= n`.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Plain sieve of Eratosthenes; `flags[i]` is true iff `i` is prime.
pub fn sieve(limit: usize) -> Vec<bool> {
    let mut flags = vec![true; limit + 1];
    flags[0] = false;
    if limit >= 1 {
        flags[1] = false;
    }
    let mut i = 2;
    while i * i <= limit {
        if flags[i] {
            for j in (i * i..=limit).step_by(i) {
                flags[j] = false;
            }
        }
        i += 1;
    }
    flags
}

const SEGMENT: u64 = 1 << 16;
// Above this base-prime bound the segmented sieve stops paying for itself.
const SIEVE_BASE_LIMIT: u64 = 1 << 24;

/// Calls `visit` on every prime in `[lo, hi]`, ascending.
fn for_each_prime_in(lo: u64, hi: u64, mut visit: impl FnMut(u64)) {
    let lo = lo.max(2);
    if lo > hi {
        return;
    }
    let root = isqrt(hi);
    if root > SIEVE_BASE_LIMIT {
        for n in lo..=hi {
            if is_prime(n) {
                visit(n);
            }
        }
        return;
    }
    let base: Vec<u64> = sieve(root as usize)
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i as u64))
        .collect();
    let mut seg_lo = lo;
    let mut marks = vec![true; SEGMENT as usize];
    loop {
        let seg_hi = hi.min(seg_lo.saturating_add(SEGMENT - 1));
        let len = (seg_hi - seg_lo + 1) as usize;
        marks[..len].fill(true);
        for &q in &base {
            if q * q > seg_hi {
                break;
            }
            let first = (q * q).max(seg_lo.div_ceil(q) * q);
            let mut j = first;
            while j <= seg_hi {
                marks[(j - seg_lo) as usize] = false;
                j += q;
            }
        }
        for (i, &m) in marks[..len].iter().enumerate() {
            if m {
                visit(seg_lo + i as u64);
            }
        }
        if seg_hi == hi {
            break;
        }
        seg_lo = seg_hi + 1;
    }
}

/// Primes in the closed interval `[lo, hi]`, ascending.
pub fn primes_in(lo: i64, hi: i64) -> Vec<u64> {
    let mut out = Vec::new();
    if hi < 2 || lo > hi {
        return out;
    }
    for_each_prime_in(lo.max(2) as u64, hi as u64, |p| out.push(p));
    out
}

/// Number of primes in `[lo, hi]`.
pub fn count_primes_in(lo: u64, hi: u64) -> u64 {
    let mut n = 0;
    for_each_prime_in(lo, hi, |_| n += 1);
    n
}

/// π(x): number of primes `<= x`.
pub fn prime_count(x: i64) -> u64 {
    if x < 2 {
        0
    } else {
        count_primes_in(2, x as u64)
    }
}

/// Number of primes `p` with `3 <= p <= x`.
pub fn prime_count_odd(x: i64) -> u64 {
    if x < 3 {
        0
    } else {
        count_primes_in(3, x as u64)
    }
}

/// Running prime counts: for each `x` in ascending `points`, the number of
/// primes in `[from, x]`. A single sieve pass covers the whole list.
pub fn prime_counts_at(from: u64, points: &[u64]) -> Vec<u64> {
    debug_assert!(points.windows(2).all(|w| w[0] <= w[1]));
    let Some(&last) = points.last() else {
        return Vec::new();
    };
    let mut out = Vec::with_capacity(points.len());
    let mut idx = 0;
    let mut running = 0u64;
    while idx < points.len() && points[idx] < from {
        out.push(0);
        idx += 1;
    }
    for_each_prime_in(from, last, |p| {
        while idx < points.len() && points[idx] < p {
            out.push(running);
            idx += 1;
        }
        running += 1;
    });
    while idx < points.len() {
        out.push(running);
        idx += 1;
    }
    out
}

/// Canonical prime factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(prime, exponent)` pairs with strictly ascending primes.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn tau(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    pub fn omega_odd(&self) -> u32 {
        self.factors.iter().filter(|&&(q, _)| q != 2).count() as u32
    }

    /// Reassembles `n` from its factors.
    pub fn product(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(q, e)| q.pow(e))
            .product()
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(q, e) in &self.factors {
            let prev = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= q;
                for i in 0..prev {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Factorizes `n >= 1`: trial division below 10^6, Pollard–Brent rho above.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize expects a positive integer");
    let mut primes: Vec<u64> = Vec::new();
    let mut rem = n;
    while rem.is_multiple_of(2) {
        primes.push(2);
        rem /= 2;
    }
    let mut d = 3u64;
    while d < TRIAL_LIMIT && d * d <= rem {
        if rem.is_multiple_of(d) {
            while rem.is_multiple_of(d) {
                primes.push(d);
                rem /= d;
            }
        } else if d == 1001 && is_prime(rem) {
            break;
        }
        d += 2;
    }
    if rem > 1 {
        split_large(rem, &mut primes);
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for q in primes {
        match factors.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => factors.push((q, 1)),
        }
    }
    Factorization { n, factors }
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let r = isqrt(n);
    if r * r == n {
        split_large(r, out);
        split_large(r, out);
        return;
    }
    let f = pollard_brent(n);
    split_large(f, out);
    split_large(n / f, out);
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A nontrivial factor of the odd composite `n`.
fn pollard_brent(n: u64) -> u64 {
    for seed in 1u64.. {
        let step = |x: u64| ((mul_mod(x, x, n) as u128 + seed as u128) % n as u128) as u64;
        let (mut y, mut r, mut q) = (seed + 1, 1u64, 1u64);
        let (mut x, mut ys, mut g);
        loop {
            x = y;
            for _ in 0..r {
                y = step(y);
            }
            let mut k = 0;
            loop {
                ys = y;
                for _ in 0..r.min(128).min(r - k) {
                    y = step(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += 128;
                if k >= r || g != 1 {
                    break;
                }
            }
            r *= 2;
            if g != 1 {
                break;
            }
        }
        if g == n {
            loop {
                ys = step(ys);
                g = gcd(x.abs_diff(ys), n);
                if g != 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

pub fn omega(n: u64) -> u32 {
    factorize(n).omega()
}

pub fn big_omega(n: u64) -> u32 {
    factorize(n).big_omega()
}

/// Number of positive divisors.
pub fn tau(n: u64) -> u64 {
    factorize(n).tau()
}

/// Number of distinct odd prime divisors.
pub fn omega_odd(n: u64) -> u32 {
    factorize(n).omega_odd()
}
