//! Fixed points of the maps `z -> z^d + c` modulo primes.
//!
//! * [`arith`]: primality, sieving, factorization, ω, Ω, τ, π.
//! * [`dynamics`]: orbits mod `p` and over `Q`, fixed-point scans, integer
//!   fixed points.
//! * [`counting`]: the counts `N_c(p)` (degree `p`) and `M_c(p)` (degree
//!   `p - 1`), their closed-form predictions and a reconciling verifier.
//! * [`stats`]: finite averages, density series, height-bounded family counts.
//! * [`table`] and [`cli`]: tabular CSV/JSON output and the `padfix` command.

pub mod arith;
pub mod cli;
pub mod counting;
pub mod dynamics;
pub mod stats;
pub mod table;

pub use arith::{PrimeModulus, Factorization};
pub use counting::{ComparisonRecord, Family, Prediction, PredictionRecord, Verdict};
pub use dynamics::{FixedPointReport, MapSpec, OrbitRecord, OrbitStatus, RationalMap, RationalPoint};
pub use stats::{AverageReport, DensityKind, DensitySeries, FamilyCountReport, Filter, Mode};
