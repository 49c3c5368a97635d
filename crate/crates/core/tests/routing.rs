mod support;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::{all_paths, argmin_set, graph, min_cost, random_specs, EdgeSpec};
use walkgraph_core::features::SegmentKind;
use walkgraph_core::router::{edge_cost, shortest_path, CostProfile, EdgeCost, Penalty};
use walkgraph_core::Error;

fn ramp_profile(require: bool) -> CostProfile {
    CostProfile {
        require_curb_ramps: require,
        ramp_penalty: Penalty::Cost(8.0),
        ..CostProfile::default()
    }
}

#[test]
fn shortest_path_matches_exhaustive_enumeration() {
    for (seed, integer) in [(1, false), (2, true), (3, false)] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..50 {
            let (n, specs) = random_specs(&mut rng, integer, false);
            let g = graph(n, &specs);
            let (o, d) = (rng.random_range(0..n), rng.random_range(0..n));
            let p = CostProfile::default();
            let paths = all_paths(&g, &p, o, d);
            match (shortest_path(&g, &p, o, d), min_cost(&paths)) {
                (Ok(r), Some(c)) => {
                    assert_eq!(r.total_cost, c);
                    assert!(argmin_set(&paths).contains(&r.edges.iter().map(|e| e.edge).collect()));
                }
                (Err(Error::NoRoute { .. }), None) => {}
                (got, want) => panic!("seed {seed}: {got:?} vs {want:?}"),
            }
        }
    }
}

#[test]
fn scaling_keeps_the_argmin_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut checked = 0;
    while checked < 20 {
        let (n, specs) = random_specs(&mut rng, true, true);
        let g = graph(n, &specs);
        let (o, d) = (0, n - 1);
        let base = ramp_profile(true);
        let want = argmin_set(&all_paths(&g, &base, o, d));
        if want.is_empty() {
            continue;
        }
        for k in [0.5, 3.0] {
            let scaled = base.scaled(k);
            assert_eq!(argmin_set(&all_paths(&g, &scaled, o, d)), want);
            let r = shortest_path(&g, &scaled, o, d).unwrap();
            assert!(want.contains(&r.edges.iter().map(|e| e.edge).collect()));
        }
        checked += 1;
    }
}

#[test]
fn ramps_are_irrelevant_when_not_required() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let (n, specs) = random_specs(&mut rng, false, true);
        let flipped: Vec<EdgeSpec> = specs.iter().map(|s| EdgeSpec { ramps: (!s.ramps.0, s.ramps.1), ..*s }).collect();
        let p = ramp_profile(false);
        let a = shortest_path(&graph(n, &specs), &p, 0, n - 1);
        let b = shortest_path(&graph(n, &flipped), &p, 0, n - 1);
        match (a, b) {
            (Ok(a), Ok(b)) => assert_eq!(a, b),
            (Err(a), Err(b)) => assert_eq!(a, b),
            (a, b) => panic!("{a:?} vs {b:?}"),
        }
    }
}

#[test]
fn missing_ramp_costs_exactly_the_penalty() {
    for length in [1.0, 7.3, 12.25, 40.0] {
        for ramps in [(false, false), (true, false), (false, true)] {
            let crossing = EdgeSpec {
                a: 0,
                b: 1,
                length,
                kind: SegmentKind::Crossing,
                ramps,
            };
            let twin = EdgeSpec { ramps: (true, true), ..crossing };
            let g = graph(2, &[crossing, twin]);
            for penalty in [0.5, 8.0, 123.4] {
                let p = CostProfile {
                    ramp_penalty: Penalty::Cost(penalty),
                    ..ramp_profile(true)
                };
                let (EdgeCost::Cost(bare), EdgeCost::Cost(ramped)) = (edge_cost(&g.edges()[0], 0, &p), edge_cost(&g.edges()[1], 0, &p)) else {
                    panic!("finite penalties never exclude");
                };
                assert_eq!(bare, ramped + penalty);
            }
        }
    }
}

proptest! {
    #[test]
    fn route_is_a_connected_walk_whose_costs_add_up(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, specs) = random_specs(&mut rng, false, true);
        let g = graph(n, &specs);
        if let Ok(r) = shortest_path(&g, &ramp_profile(true), 0, n - 1) {
            prop_assert_eq!(r.nodes.first(), Some(&0));
            prop_assert_eq!(r.nodes.last(), Some(&(n - 1)));
            let mut total = 0.0;
            for (w, e) in r.nodes.windows(2).zip(&r.edges) {
                let edge = &g.edges()[e.edge];
                prop_assert!((edge.a, edge.b) == (w[0], w[1]) || (edge.b, edge.a) == (w[0], w[1]));
                total += e.cost;
            }
            prop_assert_eq!(total, r.total_cost);
        }
    }

    #[test]
    fn route_cost_never_beats_any_simple_path(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, specs) = random_specs(&mut rng, false, true);
        let g = graph(n.min(7), &specs.into_iter().filter(|s| s.a < 7 && s.b < 7).collect::<Vec<_>>());
        let n = g.nodes().len();
        let p = ramp_profile(true);
        if let Ok(r) = shortest_path(&g, &p, 0, n - 1) {
            for path in all_paths(&g, &p, 0, n - 1) {
                prop_assert!(r.total_cost <= path.cost);
            }
        }
    }
}
