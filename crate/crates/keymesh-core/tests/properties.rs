//! Structural invariants over randomly drawn parameters.

use keymesh_core::analysis::{c_pound, c_star, components, components_excluding};
use keymesh_core::attack::{analytic_p_compromised_tau, capture, link_compromised, CaptureState, CaptureStrategy};
use keymesh_core::formulas::{p_q_exact, rho_distribution};
use keymesh_core::generators::{
    geometric_graph, geometric_graph_brute_force, key_graph, key_graph_brute_force, shared_key_count,
};
use keymesh_core::geometry::place_nodes;
use keymesh_core::graph::intersect_graphs;
use keymesh_core::keys::assign_keys;
use keymesh_core::{AdjacencyGraph, GeoParams, RegionKind, RngStream, SchemeParams};
use proptest::prelude::*;

fn scheme() -> impl Strategy<Value = SchemeParams> {
    (2usize..80, 1usize..12, 0usize..60, 1usize..4)
        .prop_map(|(n, k, extra, q)| SchemeParams::new(n, k, k + extra, q.min(k)).unwrap())
}

fn graph() -> impl Strategy<Value = AdjacencyGraph> {
    (1usize..40).prop_flat_map(|n| {
        proptest::collection::vec((0..n as u32, 0..n as u32), 0..80)
            .prop_map(move |pairs| AdjacencyGraph::from_edges(n, pairs.into_iter().filter(|(a, b)| a != b)).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn components_partition_nodes(g in graph()) {
        let r = components(&g).unwrap();
        prop_assert_eq!(r.component_sizes.iter().sum::<usize>(), g.n());
        prop_assert!(r.component_sizes.iter().all(|&s| s > 0));
        prop_assert_eq!(r.connected, r.component_sizes == vec![g.n()]);
        let isolated = (0..g.n()).filter(|&v| g.degree(v) == 0).count();
        prop_assert_eq!(r.isolated_count, isolated);
    }

    #[test]
    fn removing_nothing_changes_nothing(g in graph()) {
        let mask = vec![false; g.n()];
        prop_assert_eq!(components_excluding(&g, &mask).unwrap(), components(&g).unwrap());
    }

    #[test]
    fn intersection_is_commutative_and_idempotent(a in graph(), seed in any::<u64>()) {
        let b = AdjacencyGraph::from_edges(a.n(), a.edges().filter(|&(i, j)| (i as u64 ^ j as u64 ^ seed) & 1 == 0)).unwrap();
        let ab = intersect_graphs(&[&a, &b]).unwrap();
        prop_assert_eq!(&ab, &intersect_graphs(&[&b, &a]).unwrap());
        prop_assert_eq!(&ab, &b);
        prop_assert_eq!(intersect_graphs(&[&a, &a]).unwrap(), a);
    }

    #[test]
    fn key_graph_matches_pairwise_definition(s in scheme(), seed in any::<u64>()) {
        let a = assign_keys(&s, &RngStream::new(seed, 0));
        let g = key_graph(&a, s.overlap());
        prop_assert_eq!(&g, &key_graph_brute_force(&a, s.overlap()));
        for (i, j) in g.edges() {
            prop_assert!(shared_key_count(&a, i as usize, j as usize) >= s.overlap());
        }
        for ring in a.rings() {
            prop_assert!(ring.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(ring.iter().all(|&k| (k as usize) < s.pool_size()));
        }
    }

    #[test]
    fn geometric_grid_matches_all_pairs(n in 0usize..150, r in 0.005f64..0.8, seed in any::<u64>(), torus in any::<bool>()) {
        let region = if torus { RegionKind::UnitTorus } else { RegionKind::UnitSquare };
        let pl = place_nodes(n, &GeoParams::disk(region, r).unwrap(), &RngStream::new(seed, 1)).unwrap();
        prop_assert_eq!(geometric_graph(&pl, r), geometric_graph_brute_force(&pl, r));
    }

    #[test]
    fn compromised_keys_are_union_of_captured_rings(s in scheme(), seed in any::<u64>(), m in 0usize..20) {
        let stream = RngStream::new(seed, 2);
        let a = assign_keys(&s, &stream);
        let m = m.min(s.n());
        let st = capture(&CaptureStrategy::Random { m }, &a, None, &stream).unwrap();
        let mut naive: Vec<u32> = st.captured().iter().flat_map(|&v| a.ring(v as usize).to_vec()).collect();
        naive.sort_unstable();
        naive.dedup();
        prop_assert_eq!(st.captured().len(), m);
        prop_assert_eq!(st.compromised_keys(), naive);
        if m > 0 {
            prop_assert!(st.tau() >= s.ring_size() && st.tau() <= (m * s.ring_size()).min(s.pool_size()));
        }
    }

    #[test]
    fn link_compromise_is_monotone_in_capture(s in scheme(), seed in any::<u64>(), m in 1usize..10) {
        let stream = RngStream::new(seed, 3);
        let a = assign_keys(&s, &stream);
        let n = s.n();
        let m = m.min(n - 1);
        let small = capture(&CaptureStrategy::Random { m }, &a, None, &stream).unwrap();
        // Grow the capture by one more node that is not yet taken.
        let extra = (0..n as u32).find(|v| !small.is_captured(*v as usize));
        let mut grown: Vec<u32> = small.captured().to_vec();
        grown.extend(extra);
        let big = CaptureState::from_nodes(&a, &grown).unwrap();
        let g = key_graph(&a, s.overlap());
        for (i, j) in g.edges() {
            let (i, j) = (i as usize, j as usize);
            if big.is_captured(i) || big.is_captured(j) {
                continue;
            }
            let before = link_compromised(i, j, &a, &small, s.overlap()).unwrap();
            let after = link_compromised(i, j, &a, &big, s.overlap()).unwrap();
            prop_assert!(!before || after);
        }
    }

    #[test]
    fn analytic_compromise_monotone_and_bounded(s in scheme()) {
        let (k, p, q) = (s.ring_size(), s.pool_size(), s.overlap());
        let mut prev = 0.0;
        for tau in 0..=p {
            let v = analytic_p_compromised_tau(&s, tau).unwrap();
            prop_assert!(v + 1e-15 >= prev);
            if p > k {
                let bound = ((tau as f64) / (p - k) as f64).powi(q as i32);
                prop_assert!(v <= bound * (1.0 + 1e-9) + 1e-300);
            }
            prev = v;
        }
        prop_assert_eq!(analytic_p_compromised_tau(&s, p).unwrap(), 1.0);
    }

    #[test]
    fn overlap_distribution_is_normalized(s in scheme()) {
        let total: f64 = rho_distribution(&s).iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        let tail: f64 = rho_distribution(&s)[s.overlap()..].iter().sum();
        prop_assert!((tail.min(1.0) - p_q_exact(&s)).abs() < 1e-12);
    }

    #[test]
    fn pound_reduces_to_star(n in 2usize..100_000, k in 1usize..100, p in 1usize..1_000_000) {
        prop_assert_eq!(c_pound(n, k, p, 1.0, 1).unwrap(), c_star(n, k, p).unwrap());
    }
}
