mod common;

use common::random_connected_graph;
use hypcone::geometry::{bounded_geometry_bound, capacity, greedy_maximal_net, is_quasiconvex, neighborhood};
use hypcone::{path_metric, FiniteMetricSpace, Metric, WeightedGraph};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EPS: f64 = 1e-9;

fn space(seed: u64, n: usize, extra: usize) -> FiniteMetricSpace {
    path_metric(&random_connected_graph(&mut ChaCha8Rng::seed_from_u64(seed), n, extra, 3))
}

fn subset(mask: u64, n: usize) -> Vec<usize> {
    let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
    if s.is_empty() {
        vec![0]
    } else {
        s
    }
}

fn separated(m: &FiniteMetricSpace, set: &[usize], r: f64) -> bool {
    set.iter()
        .enumerate()
        .all(|(i, &a)| set[i + 1..].iter().all(|&b| m.dist(a, b) >= r - EPS))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn witness_nets_are_separated_and_maximal(seed in any::<u64>(), n in 1usize..=12, extra in 0usize..10, r in 0.5f64..6.0, mask in any::<u64>()) {
        let m = space(seed, n, extra);
        let region = subset(mask, n);
        let c = capacity(&m, &region, r).unwrap();
        prop_assert_eq!(c.witness_net.len(), c.capacity);
        prop_assert!(separated(&m, &c.witness_net, r));
        prop_assert!(c.witness_net.iter().all(|x| region.contains(x)));

        let net = greedy_maximal_net(&m, r).unwrap();
        prop_assert!(separated(&m, &net, r));
        for x in 0..n {
            prop_assert!(net.contains(&x) || net.iter().any(|&s| m.dist(x, s) < r - EPS));
        }
        prop_assert!(net.len() <= capacity(&m, &(0..n).collect::<Vec<_>>(), r).unwrap().capacity);
    }

    #[test]
    fn neighborhoods_are_monotone(seed in any::<u64>(), n in 1usize..=12, extra in 0usize..10, a1 in 0.0f64..5.0, a2 in 0.0f64..5.0, m1 in any::<u64>(), m2 in any::<u64>()) {
        let m = space(seed, n, extra);
        let (lo, hi) = (a1.min(a2), a1.max(a2));
        let y = subset(m1, n);
        let mut bigger = y.clone();
        bigger.extend(subset(m2, n));
        bigger.sort_unstable();
        bigger.dedup();
        let small = neighborhood(&m, &y, lo).unwrap();
        let large = neighborhood(&m, &y, hi).unwrap();
        prop_assert!(small.iter().all(|x| large.contains(x)));
        let wider = neighborhood(&m, &bigger, lo).unwrap();
        prop_assert!(small.iter().all(|x| wider.contains(x)));
    }

    #[test]
    fn quasiconvexity_is_upward_closed(seed in any::<u64>(), n in 1usize..=10, extra in 0usize..10, a1 in 0.0f64..4.0, a2 in 0.0f64..4.0, mask in any::<u64>()) {
        let m = space(seed, n, extra);
        let y = subset(mask, n);
        let (lo, hi) = (a1.min(a2), a1.max(a2));
        if is_quasiconvex(&m, &y, lo).unwrap().holds {
            prop_assert!(is_quasiconvex(&m, &y, hi).unwrap().holds);
        }
    }

    #[test]
    fn capacity_is_monotone(seed in any::<u64>(), n in 1usize..=12, extra in 0usize..10, r1 in 0.5f64..5.0, r2 in 0.5f64..5.0, m1 in any::<u64>(), m2 in any::<u64>()) {
        let m = space(seed, n, extra);
        let (lo, hi) = (r1.min(r2), r1.max(r2));
        let region = subset(m1, n);
        let mut bigger = region.clone();
        bigger.extend(subset(m2, n));
        bigger.sort_unstable();
        bigger.dedup();
        let c = capacity(&m, &region, lo).unwrap().capacity;
        prop_assert!(capacity(&m, &region, hi).unwrap().capacity <= c);
        prop_assert!(capacity(&m, &bigger, lo).unwrap().capacity >= c);
    }
}

#[test]
fn bounded_geometry_respects_valence_bound_on_bundled_graphs() {
    let dir = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    for name in ["tree.json", "c4.json", "c6.json", "c8.json", "p4.json"] {
        let g = WeightedGraph::from_json_str(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap();
        let m = path_metric(&g);
        let d = g.max_degree();
        for radius in [0.5f64, 1.0, 1.5, 2.0, 3.0] {
            let steps = radius.ceil() as u32;
            let bound: usize = (0..=steps).map(|k| d.pow(k)).sum();
            let n = bounded_geometry_bound(&m, 1.0, radius).unwrap().bound;
            assert!(n <= bound, "{name}: N = {n} > {bound} at radius {radius}");
        }
    }
}
