use nudhy::diagnostics::{kendall_tau, ndcg, spearman};
use nudhy::hypercore::{
    compute_joint, degree_profile, joint_marginals, merge_to_undirected, parse_hypergraph, serialize_hypergraph,
    to_bipartite, to_hypergraph, undirected_to_directed, DirectedHypergraph, Direction, UndirectedHypergraph,
};
use nudhy::rng::Rng;
use nudhy::samplers::{ChainState, Model};
use nudhy::structmetrics::{
    binary_entropy, hyper_core_decomposition, hyperedge_reciprocity, multi_order_laplacian, pagerank, project_weighted,
    reciprocal_candidates, LaplacianOrder, ReciprocityConfig, Side,
};
use proptest::prelude::*;
use rand::SeedableRng;

type RawEdge = (Vec<u64>, Vec<u64>, u32);

fn raw_edges(max_node: u64, max_edges: usize) -> impl Strategy<Value = Vec<RawEdge>> {
    let side = prop::collection::btree_set(1..=max_node, 0..4).prop_map(|s| s.into_iter().collect::<Vec<_>>());
    prop::collection::vec((side.clone(), side, 1u32..3), 1..max_edges)
        .prop_map(|es| es.into_iter().filter(|(h, t, _)| !h.is_empty() || !t.is_empty()).collect())
}

fn hypergraph(max_node: u64, max_edges: usize) -> impl Strategy<Value = DirectedHypergraph> {
    (raw_edges(max_node, max_edges), prop::collection::vec(1..=max_node + 3, 0..3))
        .prop_map(|(es, iso)| DirectedHypergraph::from_ids(iso, es).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn text_round_trip(h in hypergraph(12, 15)) {
        prop_assert_eq!(parse_hypergraph(&serialize_hypergraph(&h)).unwrap(), h);
    }

    #[test]
    fn bipartite_round_trip(h in hypergraph(12, 15)) {
        let g = to_bipartite(&h);
        g.validate().unwrap();
        prop_assert_eq!(to_hypergraph(&g).unwrap(), h);
    }

    #[test]
    fn handshake(h in hypergraph(12, 15)) {
        let p = degree_profile(&to_bipartite(&h));
        let sum = |v: &[u32]| v.iter().map(|&x| x as u64).sum::<u64>();
        prop_assert_eq!(sum(&p.left_out), sum(&p.right_in));
        prop_assert_eq!(sum(&p.left_in), sum(&p.right_out));
        prop_assert_eq!(p.right_in.len(), h.edge_count());
        prop_assert_eq!(sum(&p.left_in) + sum(&p.left_out), h.incidence_count() as u64);
    }

    #[test]
    fn joint_reproduces_degree_histograms(h in hypergraph(12, 20)) {
        let g = to_bipartite(&h);
        let t = compute_joint(&g);
        prop_assert_eq!(joint_marginals(&t), degree_profile(&g).histograms());
        prop_assert_eq!(t.total(Direction::Head), g.edge_count(Direction::Head) as u64);
        prop_assert_eq!(t.total(Direction::Tail), g.edge_count(Direction::Tail) as u64);
    }

    #[test]
    fn chains_preserve_their_invariants(h in hypergraph(10, 12), seed in any::<u64>()) {
        let g = to_bipartite(&h);
        let profile = degree_profile(&g);
        let joint = compute_joint(&g);
        for model in [Model::Degs, Model::Joint] {
            let mut st = ChainState::new(g.clone(), Rng::seed_from_u64(seed), model, None).unwrap();
            st.run(300).unwrap();
            st.validate().unwrap();
            prop_assert_eq!(&degree_profile(st.graph()), &profile);
            if model == Model::Joint {
                prop_assert_eq!(&compute_joint(st.graph()), &joint);
            }
        }
    }

    #[test]
    fn undirected_round_trip(h in hypergraph(10, 12)) {
        let u: UndirectedHypergraph = merge_to_undirected(&h);
        prop_assert_eq!(merge_to_undirected(&undirected_to_directed(&u)), u);
    }

    #[test]
    fn correlations_are_symmetric(x in prop::collection::vec(0u8..6, 3..30), y in prop::collection::vec(0u8..6, 3..30)) {
        let n = x.len().min(y.len());
        let (x, y): (Vec<f64>, Vec<f64>) = (x[..n].iter().map(|&v| v as f64).collect(), y[..n].iter().map(|&v| v as f64).collect());
        if let (Ok(a), Ok(b)) = (spearman(&x, &y), spearman(&y, &x)) {
            prop_assert!((a - b).abs() < 1e-12);
            let cubed: Vec<f64> = x.iter().map(|v| v * v * v + 1.0).collect();
            prop_assert!((spearman(&cubed, &y).unwrap() - a).abs() < 1e-12);
        }
        if let (Ok(a), Ok(b)) = (kendall_tau(&x, &y), kendall_tau(&y, &x)) {
            prop_assert!((a - b).abs() < 1e-12 && (-1.0..=1.0).contains(&a));
        }
        let v = ndcg(&x, &y).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&v));
    }

    #[test]
    fn entropy_symmetric_and_bounded(p in 0.0f64..=1.0) {
        let s = binary_entropy(p);
        prop_assert!((s - binary_entropy(1.0 - p)).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&s));
    }

    #[test]
    fn pagerank_is_a_distribution(h in hypergraph(12, 15)) {
        let pr = pagerank(&project_weighted(&h), 0.85, 1e-10).unwrap();
        prop_assert_eq!(pr.len(), h.node_count());
        prop_assume!(!pr.is_empty());
        prop_assert!((pr.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(pr.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn laplacian_symmetric_psd(h in hypergraph(9, 12)) {
        let u = merge_to_undirected(&h);
        let d = u.max_edge_size().min(8);
        if d >= 2 {
            for order in [LaplacianOrder::Size, LaplacianOrder::SizeMinusOne] {
                let Ok(l) = multi_order_laplacian(&u, d, order, |_| 1.0) else { continue };
                prop_assert_eq!(&l, &l.transpose());
                let eig = nalgebra::SymmetricEigen::new(l);
                prop_assert!(eig.eigenvalues.iter().all(|&x| x >= -1e-9));
            }
        }
    }

    #[test]
    fn reciprocity_bounded_and_penalized(h in hypergraph(8, 10)) {
        let cfg = ReciprocityConfig::default();
        for (i, e) in h.edges().iter().enumerate() {
            let cands = reciprocal_candidates(&h, i);
            let set: Vec<_> = cands.iter().map(|&c| &h.edges()[c]).collect();
            let r = hyperedge_reciprocity(e, &set, &cfg);
            prop_assert!((0.0..=1.0).contains(&r));
            if let Some(first) = set.first() {
                let doubled = [*first, *first];
                prop_assert!(hyperedge_reciprocity(e, &doubled, &cfg) <= hyperedge_reciprocity(e, &[*first], &cfg));
            }
        }
    }

    #[test]
    fn core_shells_nest(h in hypergraph(10, 15)) {
        for side in [Side::Head, Side::Tail] {
            let p = hyper_core_decomposition(&h, side);
            for m in 2..p.max_size() {
                for v in 0..h.node_count() as u32 {
                    prop_assert!(p.shell(m + 1, v) <= p.shell(m, v));
                }
            }
            let sum: Vec<u64> = (0..h.node_count() as u32)
                .map(|v| (2..=p.max_size()).map(|m| p.shell(m, v) as u64).sum())
                .collect();
            prop_assert_eq!(sum, p.hyper_coreness.clone());
        }
    }
}
