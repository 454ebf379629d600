use lagrangia::hypergraph::{
    binomial, colex_compare, colex_rank, colex_unrank, ground_set, pair_link, pair_link_complement,
    subsets, vertex_link, vertex_link_complement,
};
use lagrangia::lagrangian::{evaluate, lagrangian, LagrangianOptions, Weighting};
use lagrangia::structure::{clique_number, compress, contains_clique, is_left_compressed};
use lagrangia::{Edge, Hypergraph};
use proptest::prelude::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Hypergraph> {
    (2usize..=3, 4usize..=max_n).prop_flat_map(|(r, n)| {
        let all: Vec<Edge> = subsets(ground_set(n), r).collect();
        let len = all.len();
        proptest::collection::vec(any::<bool>(), len).prop_map(move |keep| {
            let edges = all.iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| *e);
            Hypergraph::new(r, n, edges).unwrap()
        })
    })
}

fn arb_edge(r: usize) -> impl Strategy<Value = Edge> {
    proptest::sample::subsequence((1u32..=20).collect::<Vec<_>>(), r)
        .prop_map(|vs| Edge::new(&vs).unwrap())
}

/// Colex order straight from the definition: compare the largest element of the
/// symmetric difference.
fn colex_less(a: &[u32], b: &[u32]) -> bool {
    let top = a
        .iter()
        .filter(|v| !b.contains(v))
        .chain(b.iter().filter(|v| !a.contains(v)))
        .max();
    matches!(top, Some(v) if b.contains(v))
}

#[test]
fn rank_unrank_exhaustive() {
    for r in 1..=5 {
        let mut prev: Option<Edge> = None;
        let limit = binomial(64, r as u64);
        if limit < 10_000 {
            assert!(colex_unrank(r, limit).is_err());
        }
        for k in 0..limit.min(10_000) {
            let e = colex_unrank(r, k).unwrap();
            assert_eq!(e.len(), r);
            assert_eq!(colex_rank(e), k);
            if let Some(p) = prev {
                assert!(colex_less(&p.to_vec(), &e.to_vec()), "{p:?} then {e:?}");
            }
            prev = Some(e);
        }
    }
}

proptest! {
    #[test]
    fn compare_matches_rank(a in arb_edge(3), b in arb_edge(3)) {
        let by_rank = colex_rank(a).cmp(&colex_rank(b));
        prop_assert_eq!(colex_compare(a, b).unwrap(), by_rank);
        prop_assert_eq!(colex_less(&a.to_vec(), &b.to_vec()), by_rank.is_lt());
    }

    #[test]
    fn link_complement_sizes(g in arb_graph(7)) {
        let n = g.n() as u64;
        let r = g.r() as u64;
        for i in 1..=g.n() as u32 {
            let link = vertex_link(&g, i).unwrap();
            let comp = vertex_link_complement(&g, i).unwrap();
            prop_assert_eq!((link.len() + comp.len()) as u64, binomial(n - 1, r - 1));
            for j in i + 1..=g.n() as u32 {
                let pl = pair_link(&g, i, j).unwrap();
                let pc = pair_link_complement(&g, i, j).unwrap();
                prop_assert_eq!((pl.len() + pc.len()) as u64, binomial(n - 2, r - 2));
            }
        }
    }

    #[test]
    fn compression_keeps_size_and_shifts(g in arb_graph(7)) {
        let (h, trace) = compress(&g);
        prop_assert!(trace.fixed_point);
        prop_assert_eq!(h.edge_count(), g.edge_count());
        prop_assert!(is_left_compressed(&h));
        prop_assert!(clique_number(&h) >= clique_number(&g));
    }

    #[test]
    fn compression_does_not_lower_lagrangian(g in arb_graph(6)) {
        let opts = LagrangianOptions::default();
        let (h, _) = compress(&g);
        prop_assert!(lagrangian(&h, &opts).value >= lagrangian(&g, &opts).value - 1e-9);
    }

    #[test]
    fn subgraph_monotone(g in arb_graph(6), drop in 0usize..20) {
        let opts = LagrangianOptions::default();
        let edges: Vec<Edge> = g.edges().iter().copied().enumerate()
            .filter(|(k, _)| g.edge_count() == 0 || *k != drop % g.edge_count())
            .map(|(_, e)| e).collect();
        let sub = Hypergraph::new(g.r(), g.n(), edges).unwrap();
        prop_assert!(lagrangian(&sub, &opts).value <= lagrangian(&g, &opts).value + 1e-9);
    }

    #[test]
    fn optimum_dominates_feasible_points(g in arb_graph(6), raw in proptest::collection::vec(0.01f64..1.0, 6)) {
        let res = lagrangian(&g, &LagrangianOptions::default());
        let sum: f64 = raw[..g.n()].iter().sum();
        let x = Weighting::new(raw[..g.n()].iter().map(|v| v / sum).collect()).unwrap();
        prop_assert!(evaluate(&g, &x).unwrap() <= res.value + 1e-9);
        prop_assert!((evaluate(&g, &res.weighting).unwrap() - res.value).abs() < 1e-12);
    }

    #[test]
    fn isolated_vertex_changes_nothing(g in arb_graph(6)) {
        let opts = LagrangianOptions::default();
        let wider = g.with_vertex_count(g.n() + 1).unwrap();
        let (a, b) = (lagrangian(&g, &opts).value, lagrangian(&wider, &opts).value);
        prop_assert!((a - b).abs() < 1e-9);
        prop_assert_eq!(clique_number(&g), clique_number(&wider));
    }

    #[test]
    fn clique_search_agrees_with_brute_force(g in arb_graph(7)) {
        let n = g.n();
        let brute = (0u64..1 << n)
            .map(Edge::from_mask)
            .filter(|s| subsets(*s, g.r()).all(|e| g.contains(e)))
            .map(|s| s.len())
            .max()
            .unwrap()
            .max(g.r() - 1);
        prop_assert_eq!(clique_number(&g), brute);
        for t in 0..=n {
            prop_assert_eq!(contains_clique(&g, t), t <= brute);
        }
    }
}

#[test]
fn compression_exhaustive_small() {
    for n in 3..=5 {
        let all: Vec<Edge> = subsets(ground_set(n), 3).collect();
        for pick in 0u64..1 << all.len() {
            let edges = all
                .iter()
                .enumerate()
                .filter(|(k, _)| pick >> k & 1 == 1)
                .map(|(_, &e)| e);
            let g = Hypergraph::new(3, n, edges).unwrap();
            let (h, _) = compress(&g);
            assert_eq!(h.edge_count(), g.edge_count());
            assert!(is_left_compressed(&h), "{g:?}");
            assert!(clique_number(&h) >= clique_number(&g), "{g:?}");
        }
    }
}
