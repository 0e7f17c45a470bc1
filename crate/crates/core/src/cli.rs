//! The `padfix` command line: one subcommand per library operation, each
//! emitting a single CSV or JSON table.
//!
//! Exit codes: 0 on success, 2 on usage errors, 1 on internal errors.
//! Output bytes depend only on the arguments, never on the worker count.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::arith::{factorize, prime_count, primes_in, PrimeModulus};
use crate::counting::{
    count_literal, predict, verdict, verify_grid, CountingError, Family, Prediction, Predictor,
};
use crate::dynamics::{
    fixed_points_mod, integer_fixed_points, orbit_mod, orbit_rational, MapSpec, OrbitRecord,
    OrbitStatus, RationalMap, RationalPoint, DEFAULT_CUTOFF_BITS,
};
use crate::stats::{
    average, density_bound_check, density_fixed_count, density_omega_series, family_count, height,
    DensityKind, Filter, Mode, StatsError,
};
use crate::table::{Cell, ColumnKind, Table, TableError};

/// Environment variable holding the default worker count.
pub const JOBS_ENV: &str = "PADFIX_JOBS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid value for {flag}: {message}")]
    Usage { flag: &'static str, message: String },
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Counting(#[from] CountingError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } => 2,
            _ => 1,
        }
    }
}

fn usage(flag: &'static str, message: impl Into<String>) -> CliError {
    CliError::Usage { flag, message: message.into() }
}

#[derive(Debug, Parser)]
#[command(name = "padfix", version, about = "Fixed points of z^d + c modulo primes")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Write the table here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads (default: available parallelism).
    #[arg(long, env = JOBS_ENV, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Literal,
    Predicted,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Orbit of z0 under z^d + c, modulo p or over Q.
    ///
    /// Columns: d,c,p,z0,status,m,n,tail,cycle. `p` is `Q` for rational
    /// orbits; `n` is 0 for divergent ones; `tail` and `cycle` are
    /// comma-joined point lists.
    Orbit(OrbitArgs),
    /// Fixed residues of z^d + c modulo each prime in the grid.
    ///
    /// Columns: p,c,d,count,residues,integer_roots.
    Fixedpoints(FixedArgs),
    /// N_c(p) or M_c(p) for each (p, c), with its prediction.
    ///
    /// Columns: p,c,family,residue,literal,predicted,theorem,verdict. Cells
    /// not requested by --mode are empty.
    Count(CountArgs),
    /// Literal counts against predictions over a (p, c) grid.
    ///
    /// Columns: p,c,family,residue,literal,predicted,theorem,verdict.
    Verify(VerifyArgs),
    /// Exact mean count over c = p*t + offset for t in 1..=t-max.
    ///
    /// Columns: family,filter,mode,prime_lo,prime_hi,t_max,samples,sum,mean,mean_f64.
    Avg(AvgArgs),
    /// Density of primes p <= c with a given fixed-point count.
    ///
    /// Columns: kind,mode,c,numerator,denominator,ratio,ratio_f64,pi,omega,tau,bound_holds.
    /// `denominator` counts primes from the family minimum (3 or 5) up to c;
    /// `pi` is the full prime count π(c).
    Density(DensityArgs),
    /// Counts of x^d - x + c, 1 <= c <= floor(X^(d/(2d-2))), with an integer root.
    ///
    /// Columns: degree,x,coefficient_bound,total,with_integer_root,without_integer_root,max_height.
    Fields(FieldsArgs),
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[arg(long)]
    pub d: u64,
    /// Coefficient: integer, or num/den with --rational.
    #[arg(long, allow_hyphen_values = true)]
    pub c: String,
    /// Starting point; a residue range lo:hi modulo p (default: all
    /// residues), or a rational with --rational.
    #[arg(long, allow_hyphen_values = true)]
    pub z0: Option<String>,
    #[arg(long)]
    pub p: Option<u64>,
    /// Iterate exactly over Q instead of modulo p.
    #[arg(long)]
    pub rational: bool,
    #[arg(long, default_value_t = DEFAULT_CUTOFF_BITS)]
    pub cutoff_bits: u64,
}

#[derive(Debug, Args)]
pub struct FixedArgs {
    #[arg(long)]
    pub d: u64,
    /// Coefficient or range lo:hi.
    #[arg(long, alias = "c-range", allow_hyphen_values = true)]
    pub c: String,
    /// Prime or range lo:hi (primes within it are used).
    #[arg(long, alias = "p-range")]
    pub p: String,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// `p` (degree p, N_c) or `p-1` (degree p-1, M_c).
    #[arg(long)]
    pub family: String,
    #[arg(long, alias = "c-range", allow_hyphen_values = true)]
    pub c: String,
    #[arg(long, alias = "p-range")]
    pub p: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    pub mode: ModeArg,
    /// Fill residues the published M prediction skips with the derived rule.
    #[arg(long)]
    pub extended: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long, alias = "c-range", allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long, alias = "p-range")]
    pub p: String,
    /// Use c = p*t for t in 1..=t-max instead of --c.
    #[arg(long)]
    pub c_multiples: bool,
    #[arg(long, default_value_t = 10)]
    pub t_max: u64,
    #[arg(long)]
    pub extended: bool,
}

#[derive(Debug, Args)]
pub struct AvgArgs {
    #[arg(long)]
    pub family: String,
    /// divides-c, divides-c-minus-1, divides-c-plus-1, not-divides-c, or all.
    #[arg(long, default_value = "divides-c")]
    pub filter: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Literal)]
    pub mode: ModeArg,
    #[arg(long, alias = "p-range")]
    pub p: String,
    #[arg(long, default_value_t = 10)]
    pub t_max: u64,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// omega, m-two, m-one, n-zero or m-zero.
    #[arg(long)]
    pub kind: String,
    #[arg(long, alias = "c")]
    pub c_range: String,
    #[arg(long, default_value_t = 1)]
    pub stride: u64,
    /// Whether the defining count comes from the prediction or the scan.
    #[arg(long, value_enum, default_value_t = ModeArg::Predicted)]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct FieldsArgs {
    /// Degree or range lo:hi.
    #[arg(long)]
    pub degree: String,
    /// Comma-separated discriminant bounds X.
    #[arg(long, value_delimiter = ',')]
    pub x: Vec<u64>,
}

/// Parses `lo:hi` (inclusive) or a single value.
pub fn parse_range(flag: &'static str, s: &str) -> Result<(i64, i64), CliError> {
    let parse = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| usage(flag, format!("{t:?} is not a 63-bit integer")))
    };
    let (lo, hi) = match s.split_once(':') {
        Some((a, b)) => (parse(a)?, parse(b)?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(usage(flag, format!("range {s} is empty")));
    }
    Ok((lo, hi))
}

fn parse_family(s: &str) -> Result<Family, CliError> {
    s.parse().map_err(|e: CountingError| usage("--family", e.to_string()))
}

/// Primes of a `--p` argument, all admissible for the family.
fn prime_grid(s: &str, family: Option<Family>) -> Result<Vec<PrimeModulus>, CliError> {
    let (lo, hi) = parse_range("--p", s)?;
    if lo == hi && !crate::arith::is_prime(lo.max(0) as u64) {
        return Err(usage("--p", format!("{lo} is not prime")));
    }
    let primes = primes_in(lo, hi);
    if primes.is_empty() {
        return Err(usage("--p", format!("no primes in {s}")));
    }
    if let Some(f) = family {
        if primes[0] < f.min_prime() {
            return Err(usage(
                "--p",
                format!("family {f} needs p >= {}, range starts at {}", f.min_prime(), primes[0]),
            ));
        }
    }
    Ok(primes.into_iter().map(|p| PrimeModulus::new(p).expect("sieved")).collect())
}

fn coefficients(s: &str) -> Result<Vec<i64>, CliError> {
    let (lo, hi) = parse_range("--c", s)?;
    Ok((lo..=hi).collect())
}

fn modes(m: ModeArg) -> Vec<Mode> {
    match m {
        ModeArg::Literal => vec![Mode::Literal],
        ModeArg::Predicted => vec![Mode::Predicted],
        ModeArg::Both => vec![Mode::Literal, Mode::Predicted],
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

const ORBIT_COLUMNS: [(&str, ColumnKind); 9] = [
    ("d", ColumnKind::Int),
    ("c", ColumnKind::Text),
    ("p", ColumnKind::Text),
    ("z0", ColumnKind::Text),
    ("status", ColumnKind::Text),
    ("m", ColumnKind::Int),
    ("n", ColumnKind::Int),
    ("tail", ColumnKind::Text),
    ("cycle", ColumnKind::Text),
];

fn orbit_row<T: ToString>(d: u64, c: &str, p: &str, rec: &OrbitRecord<T>) -> Vec<Cell> {
    vec![
        Cell::uint(d),
        Cell::text(c),
        Cell::text(p),
        Cell::text(rec.start.to_string()),
        Cell::text(match rec.status {
            OrbitStatus::Resolved => "Resolved",
            OrbitStatus::Divergent => "Divergent",
        }),
        Cell::uint(rec.preperiod as u64),
        Cell::uint(rec.period.unwrap_or(0) as u64),
        Cell::text(join(&rec.tail)),
        Cell::text(join(&rec.cycle)),
    ]
}

fn run_orbit(a: &OrbitArgs) -> Result<Table, CliError> {
    let mut table = Table::new(&ORBIT_COLUMNS);
    if a.rational {
        let c: RationalPoint = a.c.parse().map_err(|_| usage("--c", format!("{:?} is not a rational", a.c)))?;
        let map = RationalMap::new(a.d, c).map_err(|e| usage("--d", e.to_string()))?;
        let z0 = a.z0.as_deref().ok_or_else(|| usage("--z0", "required with --rational"))?;
        let z0: RationalPoint = z0.parse().map_err(|_| usage("--z0", format!("{z0:?} is not a rational")))?;
        if a.cutoff_bits == 0 {
            return Err(usage("--cutoff-bits", "must be positive"));
        }
        let rec = orbit_rational(&map, z0, a.cutoff_bits);
        table.push(orbit_row(a.d, &map.c().to_string(), "Q", &rec));
        return Ok(table);
    }
    let p = a.p.ok_or_else(|| usage("--p", "required unless --rational"))?;
    let p = PrimeModulus::new(p).map_err(|e| usage("--p", e.to_string()))?;
    let c: i64 = a.c.parse().map_err(|_| usage("--c", format!("{:?} is not an integer", a.c)))?;
    let map = MapSpec::new(a.d, c).map_err(|e| usage("--d", e.to_string()))?;
    let (lo, hi) = match &a.z0 {
        Some(s) => parse_range("--z0", s)?,
        None => (0, p.get() as i64 - 1),
    };
    if lo < 0 || hi as u64 >= p.get() {
        return Err(usage("--z0", format!("residues must lie in [0, {}]", p.get() - 1)));
    }
    use rayon::prelude::*;
    let rows: Vec<Vec<Cell>> = (lo as u64..=hi as u64)
        .into_par_iter()
        .map(|z| {
            let rec = orbit_mod(map, z, p).expect("residue checked");
            orbit_row(a.d, &c.to_string(), &p.to_string(), &rec)
        })
        .collect();
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

fn run_fixed(a: &FixedArgs) -> Result<Table, CliError> {
    use rayon::prelude::*;
    let primes = prime_grid(&a.p, None)?;
    let cs = coefficients(&a.c)?;
    MapSpec::new(a.d, 0).map_err(|e| usage("--d", e.to_string()))?;
    let grid: Vec<(PrimeModulus, i64)> =
        primes.iter().flat_map(|&p| cs.iter().map(move |&c| (p, c))).collect();
    let rows: Vec<Vec<Cell>> = grid
        .par_iter()
        .map(|&(p, c)| {
            let map = MapSpec::new(a.d, c).expect("degree checked");
            let rep = fixed_points_mod(map, p);
            vec![
                Cell::uint(p.get()),
                Cell::Int(c),
                Cell::uint(a.d),
                Cell::uint(rep.literal_count),
                Cell::text(join(&rep.residues)),
                Cell::text(join(&integer_fixed_points(map))),
            ]
        })
        .collect();
    let mut table = Table::new(&[
        ("p", ColumnKind::Int),
        ("c", ColumnKind::Int),
        ("d", ColumnKind::Int),
        ("count", ColumnKind::Int),
        ("residues", ColumnKind::Text),
        ("integer_roots", ColumnKind::Text),
    ]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

const COMPARISON_COLUMNS: [(&str, ColumnKind); 8] = [
    ("p", ColumnKind::Int),
    ("c", ColumnKind::Int),
    ("family", ColumnKind::Text),
    ("residue", ColumnKind::Int),
    ("literal", ColumnKind::Int),
    ("predicted", ColumnKind::Int),
    ("theorem", ColumnKind::Text),
    ("verdict", ColumnKind::Text),
];

fn predictor(extended: bool) -> Predictor {
    if extended {
        Predictor::DerivedExtension
    } else {
        Predictor::Published
    }
}

fn run_count(a: &CountArgs) -> Result<Table, CliError> {
    use rayon::prelude::*;
    let family = parse_family(&a.family)?;
    let primes = prime_grid(&a.p, Some(family))?;
    let cs = coefficients(&a.c)?;
    let grid: Vec<(PrimeModulus, i64)> =
        primes.iter().flat_map(|&p| cs.iter().map(move |&c| (p, c))).collect();
    let want_literal = a.mode != ModeArg::Predicted;
    let want_predicted = a.mode != ModeArg::Literal;
    let pred = predictor(a.extended);
    let rows: Vec<Vec<Cell>> = grid
        .par_iter()
        .map(|&(p, c)| -> Result<Vec<Cell>, CountingError> {
            let literal = want_literal.then(|| count_literal(family, c, p)).transpose()?;
            let prediction = want_predicted.then(|| predict(family, c, p, pred)).transpose()?;
            let verdict_cell = match (literal, &prediction) {
                (Some(l), Some(pr)) => Cell::text(verdict(l, pr.predicted).to_string()),
                _ => Cell::Null,
            };
            Ok(vec![
                Cell::uint(p.get()),
                Cell::Int(c),
                Cell::text(family.as_str()),
                Cell::uint(p.reduce(c)),
                literal.map_or(Cell::Null, Cell::uint),
                prediction
                    .as_ref()
                    .and_then(|pr| pr.predicted.value())
                    .map_or(Cell::Null, Cell::uint),
                prediction.as_ref().map_or(Cell::Null, |pr| Cell::text(pr.theorem_tag)),
                verdict_cell,
            ])
        })
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(&COMPARISON_COLUMNS);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

fn run_verify(a: &VerifyArgs) -> Result<Table, CliError> {
    let family = parse_family(&a.family)?;
    let primes = prime_grid(&a.p, Some(family))?;
    let mut grid: Vec<(PrimeModulus, i64)> = Vec::new();
    match (&a.c, a.c_multiples) {
        (Some(_), true) => return Err(usage("--c", "conflicts with --c-multiples")),
        (None, false) => return Err(usage("--c", "give --c or --c-multiples")),
        (Some(s), false) => {
            let cs = coefficients(s)?;
            for &p in &primes {
                grid.extend(cs.iter().map(|&c| (p, c)));
            }
        }
        (None, true) => {
            if a.t_max == 0 {
                return Err(usage("--t-max", "must be positive"));
            }
            for &p in &primes {
                for t in 1..=a.t_max {
                    let c = (p.get() as i64)
                        .checked_mul(t as i64)
                        .ok_or_else(|| usage("--t-max", "p * t overflows 63 bits"))?;
                    grid.push((p, c));
                }
            }
        }
    }
    let records = verify_grid(&grid, family, predictor(a.extended))?;
    let mut table = Table::new(&COMPARISON_COLUMNS);
    for r in records {
        table.push(vec![
            Cell::uint(r.p.get()),
            Cell::Int(r.c),
            Cell::text(family.as_str()),
            Cell::uint(r.prediction.residue_class),
            Cell::uint(r.literal),
            match r.prediction.predicted {
                Prediction::Covered(v) => Cell::uint(v),
                Prediction::NotCovered => Cell::Null,
            },
            Cell::text(r.prediction.theorem_tag),
            Cell::text(r.verdict.to_string()),
        ]);
    }
    Ok(table)
}

fn run_avg(a: &AvgArgs) -> Result<Table, CliError> {
    let family = parse_family(&a.family)?;
    let (lo, hi) = parse_range("--p", &a.p)?;
    if lo < family.min_prime() as i64 {
        return Err(usage("--p", format!("family {family} needs p >= {}", family.min_prime())));
    }
    if primes_in(lo, hi).is_empty() {
        return Err(usage("--p", format!("no primes in {}", a.p)));
    }
    if a.t_max == 0 {
        return Err(usage("--t-max", "must be positive"));
    }
    let filters: Vec<Filter> = if a.filter == "all" {
        vec![Filter::DividesC, Filter::DividesCMinus1, Filter::DividesCPlus1, Filter::NotDividesC]
    } else {
        vec![a.filter.parse().map_err(|e: StatsError| usage("--filter", e.to_string()))?]
    };
    let mut table = Table::new(&[
        ("family", ColumnKind::Text),
        ("filter", ColumnKind::Text),
        ("mode", ColumnKind::Text),
        ("prime_lo", ColumnKind::Int),
        ("prime_hi", ColumnKind::Int),
        ("t_max", ColumnKind::Int),
        ("samples", ColumnKind::Int),
        ("sum", ColumnKind::Int),
        ("mean", ColumnKind::Ratio),
    ]);
    for filter in filters {
        for mode in modes(a.mode) {
            let rep = match average(family, filter, mode, lo, hi, a.t_max) {
                Err(StatsError::NotCovered { p, c }) => {
                    return Err(usage(
                        "--mode",
                        format!("prediction does not cover c = {c} (mod {p}); use --mode literal"),
                    ))
                }
                other => other?,
            };
            table.push(vec![
                Cell::text(family.as_str()),
                Cell::text(filter.as_str()),
                Cell::text(mode.as_str()),
                Cell::Int(rep.prime_lo),
                Cell::Int(rep.prime_hi),
                Cell::uint(rep.t_range),
                Cell::uint(rep.sample_count),
                Cell::uint(rep.sum),
                Cell::ratio(rep.mean),
            ]);
        }
    }
    Ok(table)
}

fn run_density(a: &DensityArgs) -> Result<Table, CliError> {
    use rayon::prelude::*;
    let kind: DensityKind = a.kind.parse().map_err(|e: StatsError| usage("--kind", e.to_string()))?;
    let (lo, hi) = parse_range("--c-range", &a.c_range)?;
    if lo < 1 {
        return Err(usage("--c-range", "coefficients must be positive"));
    }
    if a.stride == 0 {
        return Err(usage("--stride", "must be positive"));
    }
    let min = kind.family().min_prime() as i64;
    if lo < min {
        return Err(usage("--c-range", format!("no primes in [{min}, {lo}] for kind {kind}")));
    }
    let mut table = Table::new(&[
        ("kind", ColumnKind::Text),
        ("mode", ColumnKind::Text),
        ("c", ColumnKind::Int),
        ("numerator", ColumnKind::Int),
        ("denominator", ColumnKind::Int),
        ("ratio", ColumnKind::Ratio),
        ("pi", ColumnKind::Int),
        ("omega", ColumnKind::Int),
        ("tau", ColumnKind::Int),
        ("bound_holds", ColumnKind::Text),
    ]);
    for mode in modes(a.mode) {
        let series = match (kind, mode) {
            (DensityKind::OmegaOverPi, Mode::Predicted) => {
                density_omega_series(lo as u64, hi as u64, a.stride)?
            }
            _ => density_fixed_count(kind, mode, lo as u64, hi as u64, a.stride)?,
        };
        let pis = crate::arith::prime_counts_at(
            2,
            &series.rows.iter().map(|r| r.c).collect::<Vec<_>>(),
        );
        let rows: Vec<Vec<Cell>> = series
            .rows
            .par_iter()
            .zip(pis.par_iter())
            .map(|(row, &pi)| {
                let f = factorize(row.c);
                vec![
                    Cell::text(kind.as_str()),
                    Cell::text(mode.as_str()),
                    Cell::uint(row.c),
                    Cell::uint(row.numerator),
                    Cell::uint(row.denominator),
                    Cell::ratio(row.ratio),
                    Cell::uint(pi),
                    Cell::uint(f.omega() as u64),
                    Cell::uint(f.tau()),
                    Cell::text(density_bound_check(row.c).to_string()),
                ]
            })
            .collect();
        rows.into_iter().for_each(|r| table.push(r));
    }
    debug_assert!(table.rows().iter().all(|r| matches!(r[6], Cell::Int(pi) if pi as u64 == prime_count(match r[2] { Cell::Int(c) => c, _ => 0 }))));
    Ok(table)
}

fn run_fields(a: &FieldsArgs) -> Result<Table, CliError> {
    let (lo, hi) = parse_range("--degree", &a.degree)?;
    if lo < 2 || hi > 64 {
        return Err(usage("--degree", "degrees must lie in 2..=64"));
    }
    if a.x.is_empty() || a.x.contains(&0) {
        return Err(usage("--x", "give one or more positive bounds"));
    }
    let mut table = Table::new(&[
        ("degree", ColumnKind::Int),
        ("x", ColumnKind::Int),
        ("coefficient_bound", ColumnKind::Int),
        ("total", ColumnKind::Int),
        ("with_integer_root", ColumnKind::Int),
        ("without_integer_root", ColumnKind::Int),
        ("max_height", ColumnKind::Float),
    ]);
    for degree in lo as u32..=hi as u32 {
        for &x in &a.x {
            let rep = match family_count(degree, x) {
                Err(StatsError::Overflow(m)) => return Err(usage("--x", m)),
                other => other?,
            };
            let bound = i64::try_from(rep.coefficient_bound)
                .map_err(|_| usage("--x", "coefficient bound exceeds 63 bits"))?;
            table.push(vec![
                Cell::uint(degree as u64),
                Cell::uint(x),
                Cell::uint(rep.coefficient_bound),
                Cell::uint(rep.total),
                Cell::uint(rep.with_integer_root),
                Cell::uint(rep.without_integer_root),
                Cell::Float(height(degree, bound)),
            ]);
        }
    }
    Ok(table)
}

/// Executes the subcommand on the current rayon pool.
pub fn execute(command: &Command) -> Result<Table, CliError> {
    match command {
        Command::Orbit(a) => run_orbit(a),
        Command::Fixedpoints(a) => run_fixed(a),
        Command::Count(a) => run_count(a),
        Command::Verify(a) => run_verify(a),
        Command::Avg(a) => run_avg(a),
        Command::Density(a) => run_density(a),
        Command::Fields(a) => run_fields(a),
    }
}

/// Builds the table for a parsed command line on a pool of the requested size.
pub fn build_table(cli: &Cli) -> Result<Table, CliError> {
    let jobs = match cli.jobs {
        Some(0) => return Err(usage("--jobs", "must be at least 1")),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    pool.install(|| execute(&cli.command))
}

pub fn render(table: &Table, format: Format) -> Result<Vec<u8>, CliError> {
    Ok(match format {
        Format::Csv => table.to_csv()?.into_bytes(),
        Format::Json => table.to_json()?.into_bytes(),
    })
}

/// Parses `args`, runs, writes the table to `--output` or `stdout`, and
/// returns the process exit code. Diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(rendered.as_bytes());
            } else {
                let _ = stderr.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let result = build_table(&cli).and_then(|t| render(&t, cli.format)).and_then(|bytes| {
        match &cli.output {
            Some(path) => {
                let mut w = BufWriter::new(File::create(path)?);
                w.write_all(&bytes)?;
                w.flush()?;
            }
            None => stdout.write_all(&bytes)?,
        }
        Ok(())
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "padfix: {e}");
            e.exit_code()
        }
    }
}
