use hypcone::actions::{build_orbit_graph, min_set_axis, translation_length, uniform_properness_bound};
use hypcone::{path_metric, ActionTable, FiniteMetricSpace, Metric, WeightedGraph};
use proptest::prelude::*;

fn bundled() -> Vec<(FiniteMetricSpace, ActionTable, f64)> {
    let dir = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let read = |n: &str| std::fs::read_to_string(dir.join(n)).unwrap();
    [
        ("c4.json", "z4_c4.action.json", 1.0),
        ("p4.json", "reflection_p4.action.json", 1.0),
        ("c8.json", "d8_c8.action.json", 1.5),
        ("c8.json", "rot_c8.action.json", 1.0),
        ("c8.json", "halfturn_c8.action.json", 2.0),
    ]
    .into_iter()
    .map(|(g, a, r)| {
        let g = WeightedGraph::from_json_str(&read(g)).unwrap();
        (path_metric(&g), ActionTable::from_json_str(&read(a)).unwrap(), r)
    })
    .collect()
}

#[test]
fn translation_length_is_a_conjugacy_invariant() {
    for (m, a, _) in bundled() {
        for g in 0..a.order() {
            let ell = translation_length(&m, &a.element_map(g));
            for u in 0..a.order() {
                let c = a.mul(a.mul(u, g), a.inverse(u));
                assert_eq!(translation_length(&m, &a.element_map(c)), ell);
            }
        }
    }
}

#[test]
fn min_sets_are_invariant() {
    for (m, a, _) in bundled() {
        for g in 0..a.order() {
            let map = a.element_map(g);
            let axis = min_set_axis(&m, &map);
            let mut moved: Vec<usize> = axis.iter().map(|&x| map.apply(x).unwrap()).collect();
            moved.sort_unstable();
            assert_eq!(moved, axis);
        }
    }
}

/// Reversing the point order and conjugating the action leaves the measured
/// orbit-graph constants unchanged.
#[test]
fn orbit_graph_constants_survive_relabeling() {
    for (m, a, r) in bundled() {
        let n = m.points();
        let relabel = |x: usize| n - 1 - x;
        let rows: Vec<Vec<f64>> = (0..n).map(|x| (0..n).map(|y| m.dist(relabel(x), relabel(y))).collect()).collect();
        let m2 = FiniteMetricSpace::new(rows).unwrap();
        let perm: Vec<Vec<usize>> = (0..a.order())
            .map(|g| (0..n).map(|x| relabel(a.act(g, relabel(x)))).collect())
            .collect();
        let mult: Vec<Vec<usize>> = (0..a.order()).map(|g| (0..a.order()).map(|h| a.mul(g, h)).collect()).collect();
        let a2 = ActionTable::new(mult, perm, a.generators().to_vec()).unwrap();
        let o1 = build_orbit_graph(&a, &m, r).unwrap();
        let o2 = build_orbit_graph(&a2, &m2, r).unwrap();
        assert_eq!(o1.distortion, o2.distortion);
        assert_eq!(o1.max_valence, o2.max_valence);
        assert_eq!((o1.capacity_bound, o1.properness_bound), (o2.capacity_bound, o2.properness_bound));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn properness_is_monotone_and_scale_invariant(r1 in 0.0f64..6.0, r2 in 0.0f64..6.0, scale in 0.1f64..10.0, which in 0usize..5) {
        let (m, a, _) = bundled().swap_remove(which);
        let (lo, hi) = (r1.min(r2), r1.max(r2));
        let b_lo = uniform_properness_bound(&a, &m, lo).unwrap().bound;
        prop_assert!(uniform_properness_bound(&a, &m, hi).unwrap().bound >= b_lo);
        let scaled = m.rescale(scale).unwrap();
        prop_assert_eq!(uniform_properness_bound(&a, &scaled, lo * scale).unwrap().bound, b_lo);
    }
}
