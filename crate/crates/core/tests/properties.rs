use num_rational::Ratio;
use proptest::prelude::*;

use padfix::arith::{factorize, is_prime, mod_pow, primes_in, PrimeModulus};
use padfix::counting::{count_literal, predict, verdict, Family, Predictor, Verdict};
use padfix::dynamics::{eval_mod, fixed_points_mod, orbit_mod, MapSpec, OrbitStatus};
use padfix::stats::{density_fixed_count, height, DensityKind, Mode};
use padfix::table::Table;

fn small_prime() -> impl Strategy<Value = PrimeModulus> {
    let primes = primes_in(2, 400);
    proptest::sample::select(primes).prop_map(|p| PrimeModulus::new(p).unwrap())
}

fn odd_prime_at_least_5() -> impl Strategy<Value = PrimeModulus> {
    let primes = primes_in(5, 400);
    proptest::sample::select(primes).prop_map(|p| PrimeModulus::new(p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn orbit_is_minimal(p in small_prime(), d in 2u64..8, c in -1000i64..1000, z in 0u64..400) {
        let z0 = z % p.get();
        let map = MapSpec::new(d, c).unwrap();
        let rec = orbit_mod(map, z0, p).unwrap();
        prop_assert_eq!(rec.status, OrbitStatus::Resolved);
        let m = rec.preperiod;
        let n = rec.period.unwrap();
        let f = |z| eval_mod(map, z, p);
        let mut seq = vec![z0];
        for _ in 0..(m + n) {
            let next = f(*seq.last().unwrap());
            seq.push(next);
        }
        prop_assert_eq!(seq[m + n], seq[m]);
        // No earlier repeat: the first m + n points are distinct.
        let mut head = seq[..m + n].to_vec();
        head.sort_unstable();
        head.dedup();
        prop_assert_eq!(head.len(), m + n);
        prop_assert_eq!(&rec.tail[..], &seq[..m]);
        prop_assert_eq!(&rec.cycle[..], &seq[m..m + n]);
    }

    #[test]
    fn counts_depend_only_on_residue(p in odd_prime_at_least_5(), c in -100_000i64..100_000, k in -50i64..50) {
        let shifted = c + k * p.get() as i64;
        for family in [Family::DegreeP, Family::DegreePMinus1] {
            prop_assert_eq!(
                count_literal(family, c, p).unwrap(),
                count_literal(family, shifted, p).unwrap()
            );
            prop_assert_eq!(
                predict(family, c, p, Predictor::Published).unwrap().predicted,
                predict(family, shifted, p, Predictor::Published).unwrap().predicted
            );
        }
    }

    #[test]
    fn degree_p_count_is_zero_or_p(p in small_prime().prop_filter("odd", |p| p.get() >= 3), c in any::<i32>()) {
        let n = count_literal(Family::DegreeP, c as i64, p).unwrap();
        let want = if (c as i64).rem_euclid(p.get() as i64) == 0 { p.get() } else { 0 };
        prop_assert_eq!(n, want);
    }

    #[test]
    fn extended_m_prediction_never_mismatches(p in odd_prime_at_least_5(), c in any::<i32>()) {
        let literal = count_literal(Family::DegreePMinus1, c as i64, p).unwrap();
        let pred = predict(Family::DegreePMinus1, c as i64, p, Predictor::DerivedExtension).unwrap();
        prop_assert_eq!(verdict(literal, pred.predicted), Verdict::Match);
    }

    #[test]
    fn fixed_points_are_fixed(p in small_prime(), d in 2u64..20, c in any::<i32>()) {
        let map = MapSpec::new(d, c as i64).unwrap();
        let rep = fixed_points_mod(map, p);
        for &z in &rep.residues {
            let v = (mod_pow(z as i64, d, p.get()) + p.reduce(c as i64)) % p.get();
            prop_assert_eq!(v, z);
        }
        prop_assert!(rep.literal_count <= d.min(p.get()));
    }

    #[test]
    fn factorization_round_trips(n in 1u64..) {
        let f = factorize(n);
        prop_assert_eq!(f.product(), n);
        prop_assert!(f.factors().iter().all(|&(q, _)| is_prime(q)));
        prop_assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
        prop_assert!(1u64 << f.omega() <= f.tau());
    }

    #[test]
    fn height_inverts_power(degree in 2u32..8, c in -1_000_000_000_000i64..=1_000_000_000_000) {
        let h = height(degree, c);
        let back = h.powi(degree as i32);
        let target = c.unsigned_abs() as f64;
        prop_assert!((back - target).abs() <= 1e-9 * target.max(1.0));
    }

    #[test]
    fn density_ratios_are_probabilities(c_lo in 5u64..400, span in 0u64..40, stride in 1u64..7) {
        for kind in [DensityKind::NZeroDensity, DensityKind::MDensity2, DensityKind::MDensity1, DensityKind::MZeroDensity] {
            let s = density_fixed_count(kind, Mode::Literal, c_lo, c_lo + span, stride).unwrap();
            prop_assert!(s.rows.windows(2).all(|w| w[0].c < w[1].c));
            for row in &s.rows {
                prop_assert!(row.ratio <= Ratio::from_integer(1));
                prop_assert!(row.numerator <= row.denominator);
            }
        }
    }
}

#[test]
fn json_round_trip_for_every_subcommand() {
    let invocations: &[&[&str]] = &[
        &["orbit", "--d", "3", "--c", "-2", "--p", "11"],
        &["orbit", "--rational", "--d", "2", "--c", "-29/16", "--z0", "3/4"],
        &["fixedpoints", "--d", "4", "--c", "-5:5", "--p", "3:30"],
        &["count", "--family", "p-1", "--c", "-20:20", "--p", "5:40"],
        &["verify", "--family", "p-1", "--c", "0:30", "--p", "5:23", "--extended"],
        &["avg", "--family", "p", "--filter", "all", "--mode", "literal", "--p", "3:50"],
        &["density", "--kind", "m-two", "--c-range", "10:200", "--stride", "7", "--mode", "both"],
        &["fields", "--degree", "2:5", "--x", "10,1000,100000"],
    ];
    for args in invocations {
        let mut json = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("padfix").chain(args.iter().copied()).chain(["--format", "json"]);
        assert_eq!(padfix::cli::run(argv, &mut json, &mut err), 0, "{args:?}: {}", String::from_utf8_lossy(&err));
        let parsed = Table::from_json(std::str::from_utf8(&json).unwrap()).unwrap();
        let mut csv = Vec::new();
        let argv = std::iter::once("padfix").chain(args.iter().copied());
        assert_eq!(padfix::cli::run(argv, &mut csv, &mut err), 0);
        assert_eq!(parsed.to_csv().unwrap().as_bytes(), &csv[..], "{args:?}");
        assert_eq!(parsed.to_json().unwrap().as_bytes(), &json[..], "{args:?}");
    }
}
