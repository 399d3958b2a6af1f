use permstar::format::{
    heatmap_rows, heatmap_to_csv, parse_heatmap_csv, parse_permutation, parse_point_set,
    permutation_to_string, point_set_to_string,
};
use permstar_core::optimizer::PermutationSpec;
use permstar_core::{local_discrepancy_map, Permutation, Permutation3D, PointSet, Provenance};
use proptest::prelude::*;

fn points(dim: usize) -> impl Strategy<Value = PointSet> {
    prop::collection::vec(prop::collection::vec(0.0f64..=1.0, dim), 1..40)
        .prop_map(|pts| PointSet::from_points(&pts, Provenance::External).unwrap())
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_one_based(&v).unwrap())
}

proptest! {
    #[test]
    fn point_sets_round_trip_exactly(ps in (1usize..=4).prop_flat_map(points)) {
        let text = point_set_to_string(&ps);
        let back = parse_point_set(&text, "mem").unwrap();
        prop_assert_eq!(back.dim(), ps.dim());
        prop_assert_eq!(back.coords(), ps.coords());
    }

    #[test]
    fn permutations_round_trip(spec in (1usize..30).prop_flat_map(|n| (permutation(n), permutation(n), any::<bool>()))) {
        let (sigma, tau, three) = spec;
        let p = if three {
            PermutationSpec::Three(Permutation3D::new(sigma, tau).unwrap())
        } else {
            PermutationSpec::Two(sigma)
        };
        let back = parse_permutation(&permutation_to_string(&p), "mem").unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn heatmaps_round_trip(ps in points(2)) {
        let map = local_discrepancy_map(&ps).unwrap();
        let back = parse_heatmap_csv(&heatmap_to_csv(&map), "mem").unwrap();
        prop_assert_eq!(back, heatmap_rows(&map));
    }
}

#[test]
fn malformed_point_sets_name_the_line() {
    for (text, line) in [
        ("", 1),
        ("x 2\n", 1),
        ("2 2\n0.1 0.2\n", 3),
        ("1 2\n0.1\n", 2),
        ("1 2\n0.1 1.5\n", 2),
        ("1 2\n0.1 0.2\n0.3 0.4\n", 3),
        ("1 2\n0.1 NaN\n", 2),
    ] {
        let err = parse_point_set(text, "f.txt").unwrap_err().to_string();
        assert!(
            err.starts_with(&format!("f.txt:{line}:")),
            "{text:?} -> {err}"
        );
    }
}

#[test]
fn malformed_permutations_are_rejected() {
    for text in [
        "",
        "3\n1 2\n",
        "3\n1 1 2\n",
        "3\n1 2 4\n",
        "2\n1 2\n2 1\n1 2\n",
    ] {
        assert!(parse_permutation(text, "p.txt").is_err(), "{text:?}");
    }
}
