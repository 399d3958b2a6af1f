use permstar_core::generators::{fibonacci_set, random_permutation_stream, ShiftSpec};
use permstar_core::optimizer::{
    build_problem, evaluate_model_f, evaluate_model_f3, optimize, solve_block_lp,
    solve_block_simplex, NoClock, OptimizationProblem, PermutationSpec, SolverConfig,
};
use permstar_core::{
    cumulative_counts, cumulative_counts3d, star_discrepancy, CoordinateFamily,
    CumulativeCountTable, Permutation, Permutation3D,
};
use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const EPS: f64 = 1e-6;

fn model(fams: &[CoordinateFamily], counts: &CumulativeCountTable) -> f64 {
    match fams {
        [x, y] => evaluate_model_f(x, y, counts).unwrap(),
        [x, y, z] => evaluate_model_f3(x, y, z, counts).unwrap(),
        _ => unreachable!(),
    }
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn random_family(n: usize, rng: &mut ChaCha8Rng) -> CoordinateFamily {
    let v: Vec<f64> = (0..n).map(|_| unit(rng)).collect();
    CoordinateFamily::project(&v, EPS).unwrap()
}

/// Minimum of the model over the free family by grid search refined with a
/// shrinking pattern search from the best grid cells.
fn grid_minimum(fams: &[CoordinateFamily], free: usize, counts: &CumulativeCountTable) -> f64 {
    let n = counts.n();
    let eval = |t: &[f64]| -> f64 {
        if t.windows(2).any(|w| w[1] - w[0] < EPS) || t.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return f64::INFINITY;
        }
        let mut f = fams.to_vec();
        f[free] = CoordinateFamily::new(t.to_vec()).unwrap();
        model(&f, counts)
    };
    let steps: usize = [0, 400, 120, 40][n];
    let mut cells: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let t: Vec<f64> = idx.iter().map(|&i| i as f64 / steps as f64).collect();
        let v = eval(&t);
        if v.is_finite() {
            cells.push((v, t));
        }
        let mut a = n;
        loop {
            if a == 0 {
                break;
            }
            a -= 1;
            idx[a] += 1;
            if idx[a] <= steps {
                break;
            }
            idx[a] = 0;
        }
        if idx.iter().all(|&i| i == 0) {
            break;
        }
    }
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));
    let dirs: Vec<Vec<f64>> = (0..3usize.pow(n as u32))
        .map(|mut c| {
            (0..n)
                .map(|_| {
                    let d = (c % 3) as f64 - 1.0;
                    c /= 3;
                    d
                })
                .collect()
        })
        .collect();
    let mut best = f64::INFINITY;
    for (mut v, mut t) in cells.into_iter().take(25) {
        let mut h = 1.0 / steps as f64;
        while h > 1e-10 {
            let mut moved = false;
            for d in &dirs {
                let cand: Vec<f64> = t.iter().zip(d).map(|(a, b)| a + h * b).collect();
                let w = eval(&cand);
                if w < v {
                    v = w;
                    t = cand;
                    moved = true;
                }
            }
            if !moved {
                h *= 0.5;
            }
        }
        best = best.min(v);
    }
    best
}

#[test]
fn two_point_identity_block_matches_grid_and_simplex() {
    let p = Permutation::identity(2);
    let counts = cumulative_counts(&p);
    let x = CoordinateFamily::new(vec![0.4, 0.8]).unwrap();
    let fams = [x.clone(), CoordinateFamily::midpoints(2)];
    let (y, f) = solve_block_lp(&fams, 1, &counts, EPS).unwrap();
    assert!((model(&[x, y], &counts) - f).abs() < 1e-12);
    let grid = grid_minimum(&fams, 1, &counts);
    assert!((f - grid).abs() < 1e-6, "parametric {f} grid {grid}");
    let (_, g) = solve_block_simplex(&fams, 1, &counts, EPS).unwrap();
    assert!((f - g).abs() < 1e-9, "parametric {f} simplex {g}");
}

#[test]
fn small_blocks_match_grid_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..24 {
        let n = 1 + case % 3;
        let p = random_permutation_stream(n, 5, case as u64);
        let counts = cumulative_counts(&p);
        let fams = [random_family(n, &mut rng), random_family(n, &mut rng)];
        let free = case % 2;
        let (_, f) = solve_block_lp(&fams, free, &counts, EPS).unwrap();
        let grid = grid_minimum(&fams, free, &counts);
        assert!(
            (f - grid).abs() < 1e-5,
            "case {case} {p}: parametric {f} grid {grid}"
        );
    }
}

#[test]
fn block_solution_is_never_worse_than_current_family() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..40u64 {
        let n = 2 + (case as usize % 30);
        let p = random_permutation_stream(n, 9, case);
        let counts = cumulative_counts(&p);
        let fams = vec![random_family(n, &mut rng), random_family(n, &mut rng)];
        let before = model(&fams, &counts);
        for free in 0..2 {
            let (fam, f) = solve_block_lp(&fams, free, &counts, EPS).unwrap();
            assert!(fam.min_gap() >= EPS * (1.0 - 1e-9));
            assert!(f <= before + 1e-15);
            let mut next = fams.clone();
            next[free] = fam;
            assert!((model(&next, &counts) - f).abs() <= 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parametric_matches_simplex_2d(n in 1usize..=7, seed in any::<u64>(), free in 0usize..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_permutation_stream(n, seed, 1);
        let counts = cumulative_counts(&p);
        let fams = [random_family(n, &mut rng), random_family(n, &mut rng)];
        let (_, a) = solve_block_lp(&fams, free, &counts, EPS).unwrap();
        let (fam, b) = solve_block_simplex(&fams, free, &counts, EPS).unwrap();
        prop_assert!((a - b).abs() <= 1e-9, "parametric {} simplex {}", a, b);
        // the simplex family attains its value in the model
        let mut next = fams.to_vec();
        next[free] = fam;
        prop_assert!((model(&next, &counts) - b).abs() <= 1e-9);
    }

    #[test]
    fn parametric_matches_simplex_3d(n in 1usize..=4, seed in any::<u64>(), free in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = Permutation3D::new(
            random_permutation_stream(n, seed, 1),
            random_permutation_stream(n, seed, 2),
        ).unwrap();
        let counts = cumulative_counts3d(&p);
        let fams = [
            random_family(n, &mut rng),
            random_family(n, &mut rng),
            random_family(n, &mut rng),
        ];
        let (fam, a) = solve_block_lp(&fams, free, &counts, EPS).unwrap();
        let (_, b) = solve_block_simplex(&fams, free, &counts, EPS).unwrap();
        prop_assert!((a - b).abs() <= 1e-9, "parametric {} simplex {}", a, b);
        let mut next = fams.to_vec();
        next[free] = fam;
        prop_assert!((model(&next, &counts) - a).abs() <= 1e-12);
    }

    #[test]
    fn model_equals_exact_discrepancy(n in 1usize..=40, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_permutation_stream(n, seed, 0);
        let (x, y) = (random_family(n, &mut rng), random_family(n, &mut rng));
        let f = evaluate_model_f(&x, &y, &cumulative_counts(&p)).unwrap();
        let ps = permstar_core::assemble(&x, &y, &p).unwrap();
        prop_assert!((f - star_discrepancy(&ps).value).abs() <= 1e-12);
    }
}

fn check_result(problem: &OptimizationProblem, config: &SolverConfig) -> f64 {
    let r = optimize(problem, config, &NoClock).unwrap();
    assert!((r.f - r.exact).abs() <= 1e-9, "f {} exact {}", r.f, r.exact);
    assert!(r.trace.windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(*r.trace.last().unwrap(), r.f);
    for fam in &r.coordinates {
        assert!(fam.min_gap() >= problem.epsilon() * (1.0 - 1e-9));
        assert!(fam.values().iter().all(|v| (0.0..=1.0).contains(v)));
    }
    if problem.dim() == 2 && problem.n() >= 4 {
        assert!(r.exact >= 1.0 / problem.n() as f64);
    }
    r.f
}

#[test]
fn optimizer_invariants_on_random_orders() {
    let config = SolverConfig {
        restarts: 2,
        seed: 4,
        ..SolverConfig::default()
    };
    for n in [1, 2, 3, 5, 8, 13, 40] {
        let p = random_permutation_stream(n, 21, n as u64);
        let problem = OptimizationProblem::new(PermutationSpec::Two(p), EPS, None).unwrap();
        check_result(&problem, &config);
    }
    let p3 = Permutation3D::new(
        random_permutation_stream(9, 2, 0),
        random_permutation_stream(9, 2, 1),
    )
    .unwrap();
    let problem = OptimizationProblem::new(PermutationSpec::Three(p3), EPS, None).unwrap();
    check_result(&problem, &config);
}

#[test]
fn optimizing_a_fibonacci_order_improves_on_the_lattice() {
    let ps = fibonacci_set(50, ShiftSpec(1)).unwrap();
    let before = star_discrepancy(&ps).value;
    let problem = build_problem(&ps, EPS, true).unwrap();
    let config = SolverConfig {
        restarts: 0,
        ..SolverConfig::default()
    };
    let after = check_result(&problem, &config);
    assert!(after < before);
    assert!(after <= 0.0275, "{after}");
}

#[test]
fn same_seed_same_result() {
    let p = random_permutation_stream(30, 8, 0);
    let problem = OptimizationProblem::new(PermutationSpec::Two(p), EPS, None).unwrap();
    let config = SolverConfig {
        restarts: 3,
        seed: 99,
        ..SolverConfig::default()
    };
    let a = optimize(&problem, &config, &NoClock).unwrap();
    let b = optimize(&problem, &config, &NoClock).unwrap();
    assert_eq!(a, b);
}

#[test]
fn time_limit_is_reported() {
    let p = random_permutation_stream(60, 1, 0);
    let problem = OptimizationProblem::new(PermutationSpec::Two(p), EPS, None).unwrap();
    let config = SolverConfig {
        time_limit: 1e-9,
        ..SolverConfig::default()
    };
    let clock = || 1.0;
    let r = optimize(&problem, &config, &clock).unwrap();
    assert_eq!(r.status, permstar_core::optimizer::Status::TimeLimit);
    assert!((r.f - r.exact).abs() <= 1e-9);
}
