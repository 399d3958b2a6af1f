use std::collections::HashMap;

use permstar_core::generators::{
    dedupe_permutations, enumerate_kronecker_generators, farey_fractions, fibonacci_set,
    kronecker_lattice, random_permutation, random_permutation_stream, sobol, three_value_check,
    van_der_corput_lifted, GeneratorOrigin, KroneckerGenerator, KroneckerParam, ShiftSpec,
};
use permstar_core::{
    extract_permutation, extract_permutation3d, lift_points, LiftIndex, Permutation, PointSet,
    Ratio,
};
use proptest::prelude::*;

fn totient(k: u64) -> u64 {
    (1..=k).filter(|&j| gcd(j, k) == 1).count() as u64
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Ranks by value, ties by index; written independently of the library.
fn ranks(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap().then(a.cmp(&b)));
    let mut r = vec![0; values.len()];
    for (rank, &i) in order.iter().enumerate() {
        r[i] = rank + 1;
    }
    r
}

#[test]
fn farey_counts_are_totient_sums() {
    let mut sum = 0;
    for n in 1..=200u64 {
        sum += totient(n);
        let f = farey_fractions(n as usize);
        assert_eq!(f.len() as u64, sum, "n = {n}");
        assert!(f.windows(2).all(|w| w[0] < w[1]));
        assert!(f.iter().all(|r| r.den() <= n && gcd(r.num(), r.den()) == 1));
        if n >= 2 {
            let gens = enumerate_kronecker_generators(n as usize).unwrap();
            let fractions = gens
                .iter()
                .filter(|g| g.origin == GeneratorOrigin::FareyFraction)
                .count();
            assert_eq!(fractions as u64, sum);
            assert_eq!(gens.len() as u64, 2 * sum);
        }
    }
}

#[test]
fn kronecker_permutations_have_three_differences_mod_n() {
    for n in 3..=100 {
        let gens = enumerate_kronecker_generators(n).unwrap();
        let unique = dedupe_permutations(&gens).unwrap();
        assert!(unique.len() < 2 * farey_fractions(n).len());
        for (p, g) in &unique {
            let report = three_value_check(p).unwrap();
            assert!(report.passes, "n={n} r={} {:?}", g.param, report.observed);
        }
    }
}

#[test]
fn interval_midpoints_represent_their_intervals() {
    let n = 100;
    let fr = farey_fractions(n);
    let mut bounds = vec![Ratio::new(0, 1)];
    bounds.extend(fr.iter().copied());
    for w in bounds.windows(2) {
        let (l, r) = (w[0], w[1]);
        let mid = KroneckerGenerator {
            n,
            param: KroneckerParam::Interior(Ratio::midpoint(l, r)),
            origin: GeneratorOrigin::IntervalMidpoint { left: l, right: r },
        };
        let want = mid.permutation().unwrap();
        // l + (r − l)·a/b for a few interior weights
        for (a, b) in [(1u128, 7u128), (1, 3), (5, 6)] {
            let (ln, ld) = (l.num() as u128, l.den() as u128);
            let (rn, rd) = (r.num() as u128, r.den() as u128);
            let num = ln * rd * (b - a) + rn * ld * a;
            let den = ld * rd * b;
            let g = gcd(num as u64, den as u64) as u128;
            let t = Ratio::new((num / g) as u64, (den / g) as u64);
            let other = KroneckerGenerator {
                n,
                param: KroneckerParam::Interior(t),
                origin: GeneratorOrigin::User,
            };
            assert_eq!(
                other.permutation().unwrap(),
                want,
                "interval ({l}, {r}) at {t}"
            );
        }
    }
}

#[test]
fn small_enumeration_is_complete() {
    let gens = enumerate_kronecker_generators(3).unwrap();
    let values: Vec<String> = gens.iter().map(|g| g.param.to_string()).collect();
    assert_eq!(gens.len(), 8, "{values:?}");
    let unique = dedupe_permutations(&gens).unwrap();
    assert!(unique.len() <= 8);
    assert!(unique.iter().any(|(p, _)| p.is_identity()));
    let mut seen = std::collections::HashSet::new();
    assert!(unique.iter().all(|(p, _)| seen.insert(p.clone())));
}

#[test]
fn fibonacci_is_the_golden_kronecker_lattice() {
    for n in [5, 34, 100, 377] {
        let fib = fibonacci_set(n, ShiftSpec(0)).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let kr = kronecker_lattice(&KroneckerGenerator::real(n, phi.fract()).unwrap()).unwrap();
        let mut a: Vec<f64> = fib.axis(1).collect();
        let mut b: Vec<f64> = kr.axis(1).collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        for (u, v) in a.iter().zip(&b) {
            assert!((u - v).abs() < 1e-12);
        }
        assert_eq!(
            extract_permutation(&fib).unwrap(),
            extract_permutation(&kr).unwrap()
        );
    }
}

#[test]
fn fibonacci_shift_moves_the_index() {
    let base = fibonacci_set(120, ShiftSpec(0)).unwrap();
    let shifted = fibonacci_set(100, ShiftSpec(20)).unwrap();
    for i in 0..100 {
        assert!((shifted.point(i)[1] - base.point(i + 20)[1]).abs() < 1e-12);
        assert_eq!(shifted.point(i)[0], i as f64 / 100.0);
    }
}

#[test]
fn van_der_corput_orders() {
    let ps = van_der_corput_lifted(8, ShiftSpec(0)).unwrap();
    let y: Vec<f64> = ps.axis(1).collect();
    assert_eq!(ranks(&y), vec![1, 5, 3, 7, 2, 6, 4, 8]);
    assert_eq!(extract_permutation(&ps).unwrap().to_one_based(), ranks(&y));
}

#[test]
fn lifted_sobol_ranks_match_brute_force() {
    let base = sobol(4, 2, 0).unwrap();
    let lifted = lift_points(&base, LiftIndex::ZeroBased).unwrap();
    let want: Vec<Vec<f64>> = vec![
        vec![0.0, 0.0, 0.0],
        vec![0.25, 0.5, 0.5],
        vec![0.5, 0.75, 0.25],
        vec![0.75, 0.25, 0.75],
    ];
    let got: Vec<Vec<f64>> = lifted.points().map(<[f64]>::to_vec).collect();
    assert_eq!(got, want);
    let p = extract_permutation3d(&lifted).unwrap();
    let y: Vec<f64> = lifted.axis(1).collect();
    let z: Vec<f64> = lifted.axis(2).collect();
    assert_eq!(p.sigma.to_one_based(), ranks(&y));
    assert_eq!(p.tau.to_one_based(), ranks(&z));
}

#[test]
fn sobol_first_points_and_dimensions() {
    let s3 = sobol(8, 3, 0).unwrap();
    let s2 = sobol(8, 2, 0).unwrap();
    for i in 0..8 {
        assert_eq!(&s3.point(i)[..2], s2.point(i));
    }
    // each axis of the first 2^m points is a permutation of the dyadic grid
    for axis in 0..3 {
        let mut v: Vec<f64> = s3.axis(axis).collect();
        v.sort_by(f64::total_cmp);
        assert_eq!(v, (0..8).map(|k| k as f64 / 8.0).collect::<Vec<_>>());
    }
    let skipped = sobol(4, 2, 1).unwrap();
    assert_eq!(skipped.point(0), s2.point(1));
    assert!(sobol(4, 4, 0).is_err());
}

#[test]
fn random_permutation_golden_value() {
    assert_eq!(random_permutation(1, 123).to_one_based(), vec![1]);
    let p = random_permutation(3, 2024);
    assert_eq!(p, random_permutation(3, 2024));
    assert_eq!(p.to_one_based(), vec![3, 2, 1]);
    assert_ne!(
        random_permutation_stream(50, 7, 0),
        random_permutation_stream(50, 7, 1)
    );
}

#[test]
fn random_permutations_are_uniform_on_four_points() {
    let draws = 10_000u64;
    let mut freq: HashMap<Vec<usize>, u64> = HashMap::new();
    for k in 0..draws {
        *freq
            .entry(random_permutation_stream(4, 31, k).to_one_based())
            .or_default() += 1;
    }
    assert_eq!(freq.len(), 24);
    let p = 1.0 / 24.0;
    let mean = draws as f64 * p;
    let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
    let mut chi2 = 0.0;
    for &c in freq.values() {
        assert!((c as f64 - mean).abs() <= 5.0 * sigma, "count {c}");
        chi2 += (c as f64 - mean).powi(2) / mean;
    }
    // 23 degrees of freedom; 0.999 quantile ≈ 49.7
    assert!(chi2 < 49.7, "chi2 {chi2}");
}

#[test]
fn three_value_examples() {
    let fib = extract_permutation(&fibonacci_set(5, ShiftSpec(0)).unwrap()).unwrap();
    assert_eq!(fib.to_one_based(), vec![1, 4, 2, 5, 3]);
    let r = three_value_check(&fib).unwrap();
    assert!(r.passes);
    assert_eq!(r.observed, vec![3]);

    let r = three_value_check(&Permutation::identity(7)).unwrap();
    assert!(r.passes && r.observed == vec![1]);

    let r = three_value_check(&Permutation::from_one_based(&[1, 3, 2, 4]).unwrap()).unwrap();
    assert_eq!(r.observed_signed, vec![-1, 2]);
    assert_eq!(r.observed, vec![2, 3]);
    assert!(r.passes);

    assert!(three_value_check(&Permutation::identity(2)).is_err());
}

#[test]
fn rational_lattice_ties_are_exact() {
    let g = KroneckerGenerator::rational(4, Ratio::new(1, 2)).unwrap();
    let ps: PointSet = kronecker_lattice(&g).unwrap();
    assert_eq!(ps.axis(1).collect::<Vec<_>>(), vec![0.0, 0.5, 0.0, 0.5]);
    assert_eq!(
        extract_permutation(&ps).unwrap().to_one_based(),
        vec![1, 3, 2, 4]
    );
    let id = KroneckerGenerator::rational(9, Ratio::new(1, 9)).unwrap();
    assert!(id.permutation().unwrap().is_identity());
    assert!(KroneckerGenerator::rational(4, Ratio::new(1, 5)).is_err());
}

proptest! {
    #[test]
    fn random_permutations_are_bijections(n in 1usize..500, seed in any::<u64>()) {
        let p = random_permutation(n, seed);
        let mut v = p.to_one_based();
        v.sort_unstable();
        prop_assert_eq!(v, (1..=n).collect::<Vec<_>>());
    }

    #[test]
    fn kronecker_permutation_is_rank_of_fractional_parts(
        (n, p, q) in (2usize..60)
            .prop_flat_map(|n| (Just(n), 1..=n as u64))
            .prop_flat_map(|(n, q)| (Just(n), 1..=q, Just(q))),
    ) {
        let g = gcd(p, q);
        let r = Ratio::new(p / g, q / g);
        let gen = KroneckerGenerator::rational(n, r).unwrap();
        // integer residues (i·p mod q) rank exactly like the fractional parts
        let residues: Vec<f64> = (0..n as u64).map(|i| ((i * r.num()) % r.den()) as f64).collect();
        prop_assert_eq!(gen.permutation().unwrap().to_one_based(), ranks(&residues));
    }
}
