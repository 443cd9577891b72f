//! Repeated multithreaded runs: results may differ across schedules, but
//! every run must produce a structurally sound partition with consistent
//! weights, and quality must not collapse relative to the deterministic
//! single-thread run.

mod common;

use leiden_core::batch::{generate_batch, BatchSpec};
use leiden_core::dynamic::{dynamic_frontier, DynamicContext};
use leiden_core::leiden::{leiden_static, LeidenParams};
use leiden_core::quality::{audit_connectivity, community_weights, modularity};
use leiden_core::synthetic::planted_partition;

#[test]
fn multithreaded_static_runs_stay_sound() {
    let g = planted_partition(3_000, 30, 7.0, 2.0, 71);
    let reference = {
        let params = LeidenParams::default();
        modularity(&g, &leiden_static(&g, &params).membership)
    };
    for round in 0..10u64 {
        let params = LeidenParams {
            threads: 4,
            chunk_size_main: 64,
            chunk_size_aggregation: 8,
            seed: round,
            ..LeidenParams::default()
        };
        let out = leiden_static(&g, &params);
        let n = g.vertex_count();
        assert!(out.membership.iter().all(|&c| (c as usize) < n));
        assert!(
            audit_connectivity(&g, &out.membership).is_empty(),
            "round {round}: disconnected community"
        );
        let sigma = community_weights(&out.membership, &g.weighted_degrees(), n);
        for c in 0..n {
            assert!((out.community_weight[c] - sigma[c]).abs() < 1e-6);
        }
        let q = modularity(&g, &out.membership);
        assert!(
            q > 0.8 * reference,
            "round {round}: quality collapsed to {q} (reference {reference})"
        );
    }
}

#[test]
fn multithreaded_dynamic_runs_stay_sound() {
    let g0 = planted_partition(3_000, 30, 7.0, 2.0, 72);
    let single = LeidenParams::default();
    let ctx = DynamicContext::compute(&g0, leiden_static(&g0, &single).membership);
    let batch = generate_batch(
        &g0,
        &BatchSpec {
            edge_fraction: 0.01,
            insertion_share: 0.8,
            seed: 9,
            repetitions: 1,
        },
    )
    .unwrap();
    let g1 = g0.apply_batch(&batch).unwrap().graph;
    let reference = modularity(&g1, &dynamic_frontier(&g1, &batch, &ctx, &single).membership);
    for round in 0..10u64 {
        let params = LeidenParams {
            threads: 4,
            chunk_size_main: 64,
            chunk_size_aggregation: 8,
            seed: round,
            ..LeidenParams::default()
        };
        let out = dynamic_frontier(&g1, &batch, &ctx, &params);
        assert!(audit_connectivity(&g1, &out.membership).is_empty());
        let q = modularity(&g1, &out.membership);
        assert!(
            q > 0.8 * reference,
            "round {round}: quality collapsed to {q} (reference {reference})"
        );
        assert_eq!(out.vertex_weight, g1.weighted_degrees());
    }
}
