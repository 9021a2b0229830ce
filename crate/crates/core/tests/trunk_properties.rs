use fiid_forest::graph::{bfs_dist, connected_components, is_connected, VertexId, Window};
use fiid_forest::hierarchy::{build_block_hierarchy, class_of};
use fiid_forest::labels::LabelField;
use fiid_forest::replicas::{seed_range, Mode};
use fiid_forest::stats::{mtp_check, received_mass, NeighborRule};
use fiid_forest::substrates::{make_window, snake_tree, SubstrateKind, SubstrateSpec};
use fiid_forest::trunk::{
    bernoulli_connectors, lift_to_g, marginal_bound_check, quotient_graph, ratio_profile_replicas, ConnectorRule,
};
use proptest::prelude::*;

#[test]
fn projection_keeps_spine_and_maps_every_edge() {
    for (kind, side) in [(SubstrateKind::Grid2d, 16), (SubstrateKind::Torus2d, 16), (SubstrateKind::Ladder, 20)] {
        let w = make_window(&SubstrateSpec::new(kind, side)).unwrap();
        for pendant in [false, true] {
            let t = snake_tree(&w, pendant).unwrap();
            let q = quotient_graph(&w, &t, &LabelField::new(0)).unwrap();
            for i in 1..q.len() {
                assert!(q.graph.edge_between(i as VertexId - 1, i as VertexId).is_some());
            }
            let mut index = vec![u32::MAX; w.len()];
            for (i, &x) in q.spine.iter().enumerate() {
                index[x as usize] = i as u32;
            }
            for &(u, v) in w.edges() {
                let (a, b) = (index[t.bush_of(u) as usize], index[t.bush_of(v) as usize]);
                assert!(a == b || q.graph.edge_between(a, b).is_some());
            }
        }
    }
}

#[test]
fn bare_path_marginals() {
    let w = make_window(&SubstrateSpec::new(SubstrateKind::Path, 400)).unwrap();
    let t = snake_tree(&w, false).unwrap();
    let q = quotient_graph(&w, &t, &LabelField::new(0)).unwrap();
    for n in 2..=4 {
        let b = marginal_bound_check(&q, n, 8, &seed_range(0, 10), Mode::Sequential).unwrap();
        assert_eq!(b.lhs.mean, 1.0);
        assert!((b.rhs.mean - 2.0).abs() < 1e-12);
    }
    let prof = ratio_profile_replicas(&q, &[1, 10, 50], &seed_range(0, 8), Mode::Sequential).unwrap();
    assert!(prof.iter().all(|(_, e)| e.mean == 1.0));
}

#[test]
fn k_marginal_drops_with_n_on_long_ladder() {
    let w = make_window(&SubstrateSpec::new(SubstrateKind::Ladder, 2048)).unwrap();
    let t = snake_tree(&w, true).unwrap();
    let q = quotient_graph(&w, &t, &LabelField::new(0)).unwrap();
    // spine along one rail, so connectors are spine segments and K covers
    // everything between extremes; a zigzag spine instead leaves rungs out
    let z = snake_tree(&w, false).unwrap();
    let qz = quotient_graph(&w, &z, &LabelField::new(0)).unwrap();
    let seeds = seed_range(0, 30);
    let fractions: Vec<f64> = (1..=5)
        .map(|n| marginal_bound_check(&qz, n, 16, &seeds, Mode::Parallel).unwrap().lhs.mean)
        .collect();
    assert!(fractions.windows(2).all(|p| p[1] <= p[0] + 0.02), "{fractions:?}");
    assert!(marginal_bound_check(&q, 3, 16, &seeds, Mode::Parallel).unwrap().holds());
}

#[test]
fn lift_is_connected_on_large_torus() {
    let w = make_window(&SubstrateSpec::new(SubstrateKind::Torus2d, 64)).unwrap();
    for pendant in [false, true] {
        let t = snake_tree(&w, pendant).unwrap();
        let q = quotient_graph(&w, &t, &LabelField::new(2)).unwrap();
        for n in 1..=6 {
            let cs = bernoulli_connectors(&q, n, &LabelField::new(n as u64)).unwrap();
            let h = lift_to_g(&cs, &q, &t, &w);
            assert!(is_connected(&w, &h));
        }
    }
}

#[test]
fn hierarchy_eventually_merges_every_pair() {
    let w = Window::lattice(16, 16, true, 0).unwrap();
    let h = build_block_hierarchy(&w).unwrap();
    for u in 0..w.len() as VertexId {
        for v in 0..w.len() as VertexId {
            let merged = (0..=4).find(|&m| class_of(&h, m, u) == class_of(&h, m, v)).unwrap();
            for m in merged..=4 {
                assert_eq!(class_of(&h, m, u), class_of(&h, m, v));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn connectors_are_shortest_and_k_connected(seed in 0u64..1_000_000, n in 1u32..6, pendant in any::<bool>()) {
        let w = make_window(&SubstrateSpec::new(SubstrateKind::Grid2d, 32)).unwrap();
        let t = snake_tree(&w, pendant).unwrap();
        let q = quotient_graph(&w, &t, &LabelField::new(seed)).unwrap();
        let cs = bernoulli_connectors(&q, n, &LabelField::new(seed)).unwrap();
        let full = q.graph.full_mask();
        for (c, pair) in cs.connectors.iter().zip(cs.open.windows(2)) {
            let d = bfs_dist(&q.graph, &full, pair[0] as VertexId, pair[1] as VertexId).unwrap().unwrap();
            prop_assert_eq!(c.len(), d + 1);
            prop_assert_eq!(c[0], pair[0]);
            prop_assert_eq!(*c.last().unwrap(), pair[1]);
        }
        prop_assert_eq!(connected_components(&q.graph, &cs.k).len(), 1);
    }

    #[test]
    fn transport_balances_on_torus(seed in 0u64..1_000_000, n in 1u32..6) {
        let w = make_window(&SubstrateSpec::new(SubstrateKind::Torus2d, 32)).unwrap();
        let t = snake_tree(&w, false).unwrap();
        let q = quotient_graph(&w, &t, &LabelField::new(seed)).unwrap();
        let cs = bernoulli_connectors(&q, n, &LabelField::new(seed)).unwrap();
        let rule = ConnectorRule::new(&cs, q.orientation);
        let (out, inn) = mtp_check(&q.graph, &rule).unwrap();
        prop_assert!((out - inn).abs() <= 1e-9 * out.abs().max(1e-300));
        let got = received_mass(&q.graph, &rule);
        prop_assert!(cs.k.vertices().all(|v| got[v as usize] >= 1.0 - 1e-9));
        let (a, b) = mtp_check(&w, &NeighborRule).unwrap();
        prop_assert_eq!((a, b), (4.0, 4.0));
    }
}
