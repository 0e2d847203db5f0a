mod common;

use dsm_core::das3::{compute_degree_groups, group_masses, Synopses};
use dsm_core::embedding::{dominates, key, Embedder, EmbeddingConfig, EmbeddingMode};
use dsm_core::graph::{DynamicGraph, UpdateOp};
use dsm_core::matcher::{embed_query, is_valid_plan, make_plan};
use dsm_core::oracle::enumerate_substructure_embeddings;
use dsm_core::oracle::stars::bounds;
use dsm_core::{Engine, EngineConfig};
use proptest::prelude::*;

fn embedder(mode_idx: usize, salt: u64) -> Embedder {
    let mut cfg = EmbeddingConfig::default().with_mode(EmbeddingMode::ALL[mode_idx]);
    cfg.seed_salt = salt;
    Embedder::new(cfg).unwrap()
}

proptest! {
    #[test]
    fn graph_invariants_hold_under_random_ops(
        ops in proptest::collection::vec((0u32..8, 0u32..8, 0u32..3, any::<bool>()), 0..80),
    ) {
        let mut g = DynamicGraph::new();
        for (a, b, l, ins) in ops {
            let op = if ins { UpdateOp::insert_labeled(a, b, l, l) } else { UpdateOp::delete(a, b) };
            let before = g.clone();
            if g.apply_update(&op).is_err() {
                prop_assert_eq!(&g, &before);
            }
            prop_assert!(g.check_invariants());
            prop_assert_eq!(g.edges().count(), g.edge_count());
        }
    }

    #[test]
    fn key_is_monotone_under_dominance(
        a in proptest::collection::vec(0.0f64..4.0, 4),
        bump in proptest::collection::vec(0.0f64..1.0, 4),
    ) {
        let b: Vec<f64> = a.iter().zip(&bump).map(|(x, y)| x + y).collect();
        prop_assert!(dominates(&a, &b).unwrap());
        prop_assert!(key(&a) <= key(&b));
    }

    #[test]
    fn substructures_are_dominated_and_bounded_by_mbr(
        labels in proptest::collection::vec(0u32..4, 9),
        pairs in proptest::collection::vec((0u32..9, 0u32..9), 0..30),
        mode_idx in 0usize..3,
        salt in 0u64..1000,
    ) {
        let g = common::graph_from(&labels, &pairs);
        let e = embedder(mode_idx, salt);
        let groups = compute_degree_groups(g.vertex_ids().map(|v| g.degree(v)), 1);
        let spec = dsm_core::das3::GridSpec::for_config(e.config(), 4, dsm_core::das3::span_max(&g, &e));
        let syn = Synopses::build(&g, groups, spec, &e);
        for v in g.vertex_ids() {
            let full = e.embed_vertex(&g, v).unwrap();
            for delta in 1..=g.degree(v) {
                let subs = enumerate_substructure_embeddings(&g, v, delta, &e).unwrap();
                for s in &subs {
                    prop_assert!(dominates(s.as_slice(), full.as_slice()).unwrap());
                }
                let (lo, hi) = bounds(&subs);
                let mbr = syn.mbr_for_degree(v, delta, &e).unwrap();
                prop_assert_eq!(&mbr.low, &lo);
                prop_assert_eq!(&mbr.high, &hi);
            }
        }
    }

    #[test]
    fn plans_are_prefix_connected(
        s in common::scenario(12, 3, 3),
        sizes in proptest::collection::vec(0usize..20, 6),
    ) {
        for q in &s.queries {
            let plan = make_plan(q, &sizes[..q.len()]);
            prop_assert!(is_valid_plan(q, &plan));
            let first = plan[0];
            prop_assert!((0..q.len()).all(|u| (sizes[first], first) <= (sizes[u], u)));
        }
    }

    #[test]
    fn degree_groups_are_balanced(
        raw in proptest::collection::vec(1.0f64..200.0, 20..400),
        m in 1usize..6,
    ) {
        // heavy-tailed degrees: floor(200 / x)
        let degrees: Vec<usize> = raw.iter().map(|x| (200.0 / x) as usize).collect();
        let g = compute_degree_groups(degrees.iter().copied(), m);
        let masses = group_masses(&g, degrees.iter().copied());
        let mut freq = std::collections::BTreeMap::new();
        for &d in &degrees {
            *freq.entry(d).or_insert(0usize) += 1;
        }
        let fmax = *freq.values().max().unwrap();
        let spread = masses.iter().max().unwrap() - masses.iter().min().unwrap();
        prop_assert!(spread <= fmax, "masses {:?} fmax {}", masses, fmax);
        prop_assert!(g.len() <= m);
    }

    #[test]
    fn sampled_query_anchor_is_dominated(
        s in common::scenario(14, 3, 4),
        mode_idx in 0usize..3,
    ) {
        let e = embedder(mode_idx, 0);
        let mut full = s.g0.clone();
        for op in &s.stream {
            full.apply_update(op).unwrap();
        }
        for start in full.vertex_ids() {
            if let Some(q) = common::query_around(&full, start, 5, &[]) {
                let emb = embed_query(&q, &e);
                let anchor = e.embed_vertex(&full, start).unwrap();
                prop_assert!(dominates(emb[0].as_slice(), anchor.as_slice()).unwrap());
            }
        }
    }

    #[test]
    fn maintained_state_equals_rebuild(
        s in common::scenario(16, 4, 1),
        mode_idx in 0usize..3,
        groups in 1usize..4,
    ) {
        let mut cfg = EngineConfig::default();
        cfg.embedding.mode = EmbeddingMode::ALL[mode_idx];
        cfg.groups = groups;
        let mut engine = Engine::new(s.g0.clone(), cfg).unwrap();
        for op in &s.stream {
            engine.process_update(op).unwrap();
        }
        let syn = engine.synopses();
        let rebuilt = Synopses::build(engine.graph(), syn.groups().clone(), syn.spec().clone(), engine.embedder());
        prop_assert!(syn == &rebuilt);
        for (v, star) in syn.stars() {
            let y = engine.embedder().span(engine.graph(), v).unwrap();
            prop_assert_eq!(&star.span, &y);
        }
    }
}
