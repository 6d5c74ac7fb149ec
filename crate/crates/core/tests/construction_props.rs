use chromacap::construction::{brute_force_optimal, construct, ConstructionConfig};
use chromacap::{min_pairwise_diff, validate_palette, Color};

fn grid_cfg(n: usize, g: usize) -> ConstructionConfig {
    ConstructionConfig {
        grid_levels: Some(g),
        ..ConstructionConfig::new(n)
    }
}

#[test]
fn construct_matches_brute_force_on_small_grids() {
    for (n, g, expected) in [
        (2, 2, 765),
        (2, 4, 765),
        (3, 2, 510),
        (3, 3, 510),
        (4, 2, 510),
    ] {
        let oracle = brute_force_optimal(n, g).unwrap();
        let heuristic = construct(&grid_cfg(n, g)).unwrap();
        assert_eq!(oracle.achieved_min_diff, expected, "oracle ({n},{g})");
        assert_eq!(heuristic.achieved_min_diff, expected, "construct ({n},{g})");
    }
}

#[test]
fn construct_reaches_oracle_on_wider_grids() {
    // a little beyond the pinned cases, still cheap to enumerate
    for (n, g) in [(4, 3), (5, 3), (3, 5), (5, 2), (6, 2)] {
        let oracle = brute_force_optimal(n, g).unwrap().achieved_min_diff;
        let got = construct(&grid_cfg(n, g)).unwrap().achieved_min_diff;
        assert!(
            got <= oracle,
            "({n},{g}) beat the optimum: {got} > {oracle}"
        );
        assert_eq!(got, oracle, "({n},{g})");
    }
}

#[test]
fn brute_force_optimum_is_non_increasing_in_n() {
    for g in [2, 3] {
        let max_n = if g == 2 { 8 } else { 6 };
        let mins: Vec<u16> = (2..=max_n)
            .map(|n| brute_force_optimal(n, g).unwrap().achieved_min_diff)
            .collect();
        assert!(mins.windows(2).all(|w| w[1] <= w[0]), "g={g}: {mins:?}");
    }
}

#[test]
fn construct_is_deterministic() {
    let mut cfg = ConstructionConfig::new(12);
    cfg.seed = 42;
    let a = construct(&cfg).unwrap();
    let b = construct(&cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.palette.name, "ms12-seed42");
}

#[test]
fn construct_is_independent_of_thread_count() {
    let cfg = ConstructionConfig::new(10);
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| construct(&cfg).unwrap());
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| construct(&cfg).unwrap());
    assert_eq!(one, many);
}

#[test]
fn more_restarts_never_hurt() {
    for n in [5, 9, 14] {
        let mut last = 0;
        for restarts in [1, 2, 4, 8] {
            let cfg = ConstructionConfig {
                restarts,
                ..ConstructionConfig::new(n)
            };
            let got = construct(&cfg).unwrap().achieved_min_diff;
            assert!(got >= last, "n={n} restarts={restarts}: {got} < {last}");
            last = got;
        }
    }
}

#[test]
fn outputs_are_valid_palettes() {
    for n in [2, 3, 7, 16, 33] {
        let r = construct(&ConstructionConfig::new(n)).unwrap();
        assert_eq!(r.palette.len(), n);
        assert!(validate_palette(&r.palette).is_empty());
        assert_eq!(min_pairwise_diff(&r.palette).unwrap(), r.achieved_min_diff);
        assert_eq!(r.restarts_used, 8);
    }
}

#[test]
fn full_cube_targets() {
    assert_eq!(
        construct(&ConstructionConfig::new(2))
            .unwrap()
            .achieved_min_diff,
        765
    );
    assert!(
        construct(&ConstructionConfig::new(4))
            .unwrap()
            .achieved_min_diff
            >= 510
    );
    assert!(
        construct(&ConstructionConfig::new(8))
            .unwrap()
            .achieved_min_diff
            >= 255
    );
}

#[test]
fn start_color_off_grid_is_rejected() {
    let cfg = ConstructionConfig {
        start_color: Color::new(1, 0, 0),
        ..grid_cfg(3, 2)
    };
    assert!(construct(&cfg).is_err());
}

// The heuristic does not guarantee this; see the decisions notes. Run with
// `cargo test -- --ignored` to see the current violations.
#[test]
#[ignore = "heuristic min diff is not monotone in n (n=24 -> 179, n=25 -> 182)"]
fn min_diff_non_increasing_in_n() {
    let mins: Vec<u16> = (2..=30)
        .map(|n| {
            construct(&ConstructionConfig::new(n))
                .unwrap()
                .achieved_min_diff
        })
        .collect();
    let bad: Vec<_> = mins
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1] > w[0])
        .map(|(i, w)| (i + 2, w[0], w[1]))
        .collect();
    assert!(bad.is_empty(), "violations (n, min(n), min(n+1)): {bad:?}");
}
