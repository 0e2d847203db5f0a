use std::collections::BTreeSet;

use proptest::prelude::*;

use dsm_cli::config::DataArgs;
use dsm_cli::formats::{write_graph, write_query, write_stream};
use dsm_cli::generate::{generate_graph, sample_queries, GraphParams, LabelDistribution};
use dsm_core::oracle::enumerate_matches;
use dsm_core::QueryGraph;

fn connected(q: &QueryGraph) -> bool {
    let mut seen = BTreeSet::from([0]);
    let mut stack = vec![0];
    while let Some(u) = stack.pop() {
        for &w in q.neighbors(u) {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == q.len()
}

#[test]
fn same_seed_gives_identical_files() {
    let args = DataArgs {
        vertices: 500,
        queries: 10,
        ..DataArgs::default()
    };
    let (a, b) = (args.dataset().unwrap(), args.dataset().unwrap());
    assert_eq!(write_graph(&a.graph), write_graph(&b.graph));
    assert_eq!(write_stream(&a.stream), write_stream(&b.stream));
    let qa: Vec<String> = a.queries.iter().map(write_query).collect();
    let qb: Vec<String> = b.queries.iter().map(write_query).collect();
    assert_eq!(qa, qb);
    let c = DataArgs { seed: 2, ..args }.dataset().unwrap();
    assert_ne!(write_graph(&a.graph), write_graph(&c.graph));
}

#[test]
fn average_degree_is_calibrated() {
    for target in [3.0, 4.0, 5.0, 6.0, 7.0, 9.0] {
        for seed in 0..3 {
            let g = generate_graph(&GraphParams::with_avg_degree(
                5000,
                target,
                15,
                LabelDistribution::Uniform,
                seed,
            ))
            .unwrap();
            let avg = 2.0 * g.edge_count() as f64 / g.vertex_count() as f64;
            assert!((avg - target).abs() <= 0.1 * target, "target {target}, got {avg}");
        }
    }
}

#[test]
fn sampled_queries_match_their_source() {
    let g = generate_graph(&GraphParams::with_avg_degree(
        400,
        5.0,
        15,
        LabelDistribution::Gaussian,
        4,
    ))
    .unwrap();
    for q in sample_queries(&g, 30, 6, 3.0, 4).unwrap() {
        assert!(!enumerate_matches(&g, &q).is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_queries_are_connected(
        seed in any::<u64>(),
        size in 2usize..9,
        avg in 1.0f64..4.0,
        dist in prop_oneof![
            Just(LabelDistribution::Uniform),
            Just(LabelDistribution::Gaussian),
            Just(LabelDistribution::Zipf),
        ],
    ) {
        let g = generate_graph(&GraphParams::with_avg_degree(200, 5.0, 8, dist, seed)).unwrap();
        for q in sample_queries(&g, 5, size, avg, seed).unwrap() {
            prop_assert_eq!(q.len(), size);
            prop_assert!(connected(&q));
            prop_assert!(q.edges().len() >= size - 1);
        }
    }

    #[test]
    fn insertion_stream_rebuilds_the_graph(seed in any::<u64>(), rate in 0.0f64..0.5) {
        let g = generate_graph(&GraphParams::with_avg_degree(150, 5.0, 5, LabelDistribution::Uniform, seed)).unwrap();
        let (g0, stream) = dsm_cli::generate::split_stream(&g, rate, 0.0, seed).unwrap();
        prop_assert_eq!(g0.edge_count() + stream.len(), g.edge_count());
        let mut h = g0;
        for op in &stream {
            h.apply_update(op).unwrap();
        }
        prop_assert_eq!(write_graph(&h), write_graph(&g));
    }
}
