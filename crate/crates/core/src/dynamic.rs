//! The three dynamic front-ends over the Leiden engine.
//!
//! All of them start the engine from the previous snapshot's community
//! assignment with incrementally maintained vertex and community weights;
//! they differ only in which vertices the first pass may process:
//!
//! - Naive-dynamic (ND) processes every vertex;
//! - Delta-screening (DS) marks a modularity-screened region around the
//!   batch and processes only that region;
//! - Dynamic Frontier (DF) marks just the batch endpoints that can change
//!   community and lets vertex pruning grow the set along the frontier.

use std::ops::Range;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use crate::graph::{BatchUpdate, Graph};
use crate::leiden::{
    changed_communities, distinct_count, leiden, AffectedHooks, AllAffected, EngineReport,
    LeidenParams,
};
use crate::parallel::{ownership_ranges, parallel_for_chunks};
use crate::quality::{community_weights, delta_modularity};

/// Community state carried across snapshots: the assignment at `t-1`
/// together with the vertex and community weights it was computed under.
#[derive(Debug, Clone)]
pub struct DynamicContext {
    pub membership: Vec<u32>,
    pub vertex_weight: Vec<f64>,
    pub community_weight: Vec<f64>,
}

impl DynamicContext {
    pub fn new(
        membership: Vec<u32>,
        vertex_weight: Vec<f64>,
        community_weight: Vec<f64>,
    ) -> Self {
        assert_eq!(membership.len(), vertex_weight.len());
        assert_eq!(membership.len(), community_weight.len());
        DynamicContext {
            membership,
            vertex_weight,
            community_weight,
        }
    }

    /// Builds the context from scratch for a given assignment on `g`.
    pub fn compute(g: &Graph, membership: Vec<u32>) -> Self {
        let vertex_weight = g.weighted_degrees();
        let community_weight =
            community_weights(&membership, &vertex_weight, g.vertex_count());
        DynamicContext {
            membership,
            vertex_weight,
            community_weight,
        }
    }
}

/// Per-run report of a dynamic variant.
#[derive(Debug, Clone, Default)]
pub struct VariantReport {
    pub engine: EngineReport,
    /// Wall time of affected-vertex marking plus weight maintenance.
    pub marking_seconds: f64,
    /// Fraction of vertices the variant marked: the initial frontier for DF,
    /// the expanded region for DS, and all vertices for ND.
    pub affected_fraction: f64,
    /// Fraction of previous-snapshot communities marked for refinement: the
    /// batch-driven flags for ND and DF, plus the screening-marked
    /// communities for DS.
    pub changed_community_fraction: f64,
}

/// Result of one dynamic step: the new assignment plus the maintained
/// weights, ready to serve as the next step's [`DynamicContext`].
#[derive(Debug, Clone)]
pub struct DynamicOutcome {
    pub membership: Vec<u32>,
    pub vertex_weight: Vec<f64>,
    pub community_weight: Vec<f64>,
    pub report: VariantReport,
}

impl DynamicOutcome {
    pub fn into_context(self) -> DynamicContext {
        DynamicContext {
            membership: self.membership,
            vertex_weight: self.vertex_weight,
            community_weight: self.community_weight,
        }
    }
}

/// Maintains vertex and community weights across a batch instead of
/// recomputing them: each directed record adjusts the weighted degree of its
/// source and the weight of the source's previous community.
///
/// Workers own disjoint index ranges and apply only the records whose target
/// falls in their range, so no atomics are involved. The result matches a
/// from-scratch recomputation on the updated graph grouped by the previous
/// assignment.
pub fn update_weights(
    g_t: &Graph,
    batch: &BatchUpdate,
    ctx: &DynamicContext,
    threads: usize,
) -> (Vec<f64>, Vec<f64>) {
    let n = g_t.vertex_count();
    assert_eq!(ctx.membership.len(), n);
    let mut vertex_weight = ctx.vertex_weight.clone();
    let mut community_weight = ctx.community_weight.clone();

    let apply = |k: &mut [f64], sigma: &mut [f64], range: &Range<usize>| {
        let signed: [(&[(u32, u32, f32)], f64); 2] =
            [(&batch.deletions, -1.0), (&batch.insertions, 1.0)];
        for (records, sign) in signed {
            for &(i, _, w) in records {
                let i = i as usize;
                let delta = sign * w as f64;
                if range.contains(&i) {
                    k[i - range.start] += delta;
                }
                let c = ctx.membership[i] as usize;
                if range.contains(&c) {
                    sigma[c - range.start] += delta;
                }
            }
        }
    };

    let ranges = ownership_ranges(n, threads.max(1));
    if ranges.len() == 1 {
        apply(&mut vertex_weight, &mut community_weight, &ranges[0]);
    } else {
        let apply = &apply;
        std::thread::scope(|scope| {
            let mut k_rest = vertex_weight.as_mut_slice();
            let mut sigma_rest = community_weight.as_mut_slice();
            for range in &ranges {
                let (k_chunk, k_next) = k_rest.split_at_mut(range.len());
                let (sigma_chunk, sigma_next) = sigma_rest.split_at_mut(range.len());
                k_rest = k_next;
                sigma_rest = sigma_next;
                scope.spawn(move || apply(k_chunk, sigma_chunk, range));
            }
        });
    }
    (vertex_weight, community_weight)
}

/// Hook implementation backed by a flag vector. An open range lets pruning
/// re-queues expand processing beyond the initial marks (DF); a closed range
/// confines the whole run to the marked region (DS).
#[derive(Debug)]
pub struct MarkedHooks {
    affected: Vec<bool>,
    open_range: bool,
}

impl AffectedHooks for MarkedHooks {
    fn is_affected(&self, v: u32) -> bool {
        self.affected[v as usize]
    }
    fn in_affected_range(&self, v: u32) -> bool {
        self.open_range || self.affected[v as usize]
    }
}

/// Delta-screening marks: vertices to reprocess, vertices whose whole
/// neighborhood is affected, and communities whose members are all affected.
#[derive(Debug, Clone)]
pub struct AffectedMarks {
    pub vertex: Vec<bool>,
    pub neighbors: Vec<bool>,
    pub community: Vec<bool>,
}

impl AffectedMarks {
    pub fn affected_fraction(&self) -> f64 {
        if self.vertex.is_empty() {
            return 0.0;
        }
        self.vertex.iter().filter(|&&f| f).count() as f64 / self.vertex.len() as f64
    }
}

/// The initial Dynamic Frontier marks: endpoints of intra-community
/// deletions and of cross-community insertions. Symmetric batches make the
/// one-sided marking effectively two-sided.
pub fn dynamic_frontier_marks(batch: &BatchUpdate, c_prev: &[u32], threads: usize) -> Vec<bool> {
    let n = c_prev.len();
    let flags: Vec<AtomicBool> = (0..n).map(|_| AtomicBool::new(false)).collect();
    let mut scratch = vec![(); threads.max(1)];
    parallel_for_chunks(
        batch.deletions.len(),
        1024,
        &mut scratch,
        |_, range: Range<usize>| {
            for &(i, j, _) in &batch.deletions[range] {
                if c_prev[i as usize] == c_prev[j as usize] {
                    flags[i as usize].store(true, Ordering::Relaxed);
                }
            }
        },
    );
    parallel_for_chunks(
        batch.insertions.len(),
        1024,
        &mut scratch,
        |_, range: Range<usize>| {
            for &(i, j, _) in &batch.insertions[range] {
                if c_prev[i as usize] != c_prev[j as usize] {
                    flags[i as usize].store(true, Ordering::Relaxed);
                }
            }
        },
    );
    flags.into_iter().map(|f| f.into_inner()).collect()
}

/// Delta-screening marking. Intra-community deletions affect the source, its
/// neighborhood, and the community; for the cross-community insertions of
/// each source, the target community with the highest delta-modularity is
/// affected along with the source and its neighborhood. The marks are then
/// expanded: a marked neighborhood affects all neighbors, a marked community
/// affects all members.
pub fn delta_screening_marks(
    g_t: &Graph,
    batch: &BatchUpdate,
    ctx: &DynamicContext,
    threads: usize,
) -> AffectedMarks {
    let n = g_t.vertex_count();
    let c_prev = &ctx.membership;
    let vertex: Vec<AtomicBool> = (0..n).map(|_| AtomicBool::new(false)).collect();
    let neighbors: Vec<AtomicBool> = (0..n).map(|_| AtomicBool::new(false)).collect();
    let community: Vec<AtomicBool> = (0..n).map(|_| AtomicBool::new(false)).collect();
    let mut scratch = vec![(); threads.max(1)];

    parallel_for_chunks(
        batch.deletions.len(),
        1024,
        &mut scratch,
        |_, range: Range<usize>| {
            for &(i, j, _) in &batch.deletions[range] {
                if c_prev[i as usize] == c_prev[j as usize] {
                    vertex[i as usize].store(true, Ordering::Relaxed);
                    neighbors[i as usize].store(true, Ordering::Relaxed);
                    community[c_prev[j as usize] as usize].store(true, Ordering::Relaxed);
                }
            }
        },
    );

    // group insertions by source; the batch contract keeps them sorted per
    // source after this sort regardless of input order
    let mut insertions: Vec<(u32, u32, f32)> = batch.insertions.clone();
    insertions.sort_unstable_by_key(|&(i, j, _)| (i, j));
    let mut groups: Vec<Range<usize>> = Vec::new();
    let mut start = 0;
    for idx in 1..=insertions.len() {
        if idx == insertions.len() || insertions[idx].0 != insertions[start].0 {
            groups.push(start..idx);
            start = idx;
        }
    }
    // screening works with the previous snapshot's quantities throughout
    let m_prev: f64 = ctx.vertex_weight.iter().sum::<f64>() / 2.0;
    parallel_for_chunks(
        groups.len(),
        64,
        &mut scratch,
        |_, range: Range<usize>| {
            let mut candidates: Vec<(u32, f64)> = Vec::new();
            for group in &groups[range] {
                let records = &insertions[group.clone()];
                let source = records[0].0 as usize;
                candidates.clear();
                for &(_, j, w) in records {
                    let target = c_prev[j as usize];
                    if target == c_prev[source] {
                        continue;
                    }
                    match candidates.iter_mut().find(|(c, _)| *c == target) {
                        Some((_, total)) => *total += w as f64,
                        None => candidates.push((target, w as f64)),
                    }
                }
                if candidates.is_empty() || m_prev <= 0.0 {
                    continue;
                }
                let k_i = ctx.vertex_weight[source];
                let sigma_own = ctx.community_weight[c_prev[source] as usize];
                let mut best: Option<(u32, f64)> = None;
                for &(target, weight_to) in candidates.iter() {
                    let gain = delta_modularity(
                        weight_to,
                        0.0,
                        k_i,
                        ctx.community_weight[target as usize],
                        sigma_own,
                        m_prev,
                    );
                    let better = match best {
                        None => true,
                        Some((b, g)) => gain > g || (gain == g && target < b),
                    };
                    if better {
                        best = Some((target, gain));
                    }
                }
                let (chosen, _) = best.unwrap();
                vertex[source].store(true, Ordering::Relaxed);
                neighbors[source].store(true, Ordering::Relaxed);
                community[chosen as usize].store(true, Ordering::Relaxed);
            }
        },
    );

    parallel_for_chunks(n, 2048, &mut scratch, |_, range: Range<usize>| {
        for v in range {
            if neighbors[v].load(Ordering::Relaxed) {
                for (j, _) in g_t.neighbors(v as u32) {
                    vertex[j as usize].store(true, Ordering::Relaxed);
                }
            }
            if community[c_prev[v] as usize].load(Ordering::Relaxed) {
                vertex[v].store(true, Ordering::Relaxed);
            }
        }
    });

    AffectedMarks {
        vertex: vertex.into_iter().map(|f| f.into_inner()).collect(),
        neighbors: neighbors.into_iter().map(|f| f.into_inner()).collect(),
        community: community.into_iter().map(|f| f.into_inner()).collect(),
    }
}

fn fraction(flags: &[bool]) -> f64 {
    if flags.is_empty() {
        return 0.0;
    }
    flags.iter().filter(|&&f| f).count() as f64 / flags.len() as f64
}

fn changed_fraction(changed: &[bool], c_prev: &[u32]) -> f64 {
    let live = distinct_count(c_prev);
    if live == 0 {
        return 0.0;
    }
    changed.iter().filter(|&&f| f).count() as f64 / live as f64
}

#[allow(clippy::too_many_arguments)]
fn run_variant<H: AffectedHooks>(
    g_t: &Graph,
    ctx: &DynamicContext,
    hooks: &H,
    changed0: &[bool],
    vertex_weight: Vec<f64>,
    community_weight: Vec<f64>,
    params: &LeidenParams,
    marking_seconds: f64,
    affected_fraction: f64,
    changed_community_fraction: f64,
) -> DynamicOutcome {
    let outcome = leiden(
        g_t,
        &ctx.membership,
        &vertex_weight,
        &community_weight,
        hooks,
        changed0,
        params,
    );
    DynamicOutcome {
        membership: outcome.membership,
        vertex_weight,
        community_weight: outcome.community_weight,
        report: VariantReport {
            engine: outcome.report,
            marking_seconds,
            affected_fraction,
            changed_community_fraction,
        },
    }
}

/// Naive-dynamic: previous assignment, maintained weights, every vertex
/// processed.
pub fn naive_dynamic(
    g_t: &Graph,
    batch: &BatchUpdate,
    ctx: &DynamicContext,
    params: &LeidenParams,
) -> DynamicOutcome {
    let clock = Instant::now();
    let (vertex_weight, community_weight) = update_weights(g_t, batch, ctx, params.threads);
    let changed0 = changed_communities(g_t, &ctx.membership, batch, true);
    let marking_seconds = clock.elapsed().as_secs_f64();
    let changed = changed_fraction(&changed0, &ctx.membership);
    run_variant(
        g_t,
        ctx,
        &AllAffected,
        &changed0,
        vertex_weight,
        community_weight,
        params,
        marking_seconds,
        1.0,
        changed,
    )
}

/// Delta-screening: processing is confined to the modularity-screened
/// affected region.
pub fn delta_screening(
    g_t: &Graph,
    batch: &BatchUpdate,
    ctx: &DynamicContext,
    params: &LeidenParams,
) -> DynamicOutcome {
    let clock = Instant::now();
    let marks = delta_screening_marks(g_t, batch, ctx, params.threads);
    let (vertex_weight, community_weight) = update_weights(g_t, batch, ctx, params.threads);
    let changed0 = changed_communities(g_t, &ctx.membership, batch, true);
    let marking_seconds = clock.elapsed().as_secs_f64();
    let affected = marks.affected_fraction();
    // the screening-marked communities are refined work induced by DS on top
    // of the batch-driven flags
    let induced: Vec<bool> = changed0
        .iter()
        .zip(marks.community.iter())
        .map(|(&a, &b)| a || b)
        .collect();
    let changed = changed_fraction(&induced, &ctx.membership);
    let hooks = MarkedHooks {
        affected: marks.vertex,
        open_range: false,
    };
    run_variant(
        g_t,
        ctx,
        &hooks,
        &changed0,
        vertex_weight,
        community_weight,
        params,
        marking_seconds,
        affected,
        changed,
    )
}

/// Dynamic Frontier: only batch endpoints start affected; the set expands
/// along moved vertices' neighborhoods via vertex pruning.
pub fn dynamic_frontier(
    g_t: &Graph,
    batch: &BatchUpdate,
    ctx: &DynamicContext,
    params: &LeidenParams,
) -> DynamicOutcome {
    let clock = Instant::now();
    let initial = dynamic_frontier_marks(batch, &ctx.membership, params.threads);
    let (vertex_weight, community_weight) = update_weights(g_t, batch, ctx, params.threads);
    let changed0 = changed_communities(g_t, &ctx.membership, batch, true);
    let marking_seconds = clock.elapsed().as_secs_f64();
    let affected = fraction(&initial);
    let changed = changed_fraction(&changed0, &ctx.membership);
    let hooks = MarkedHooks {
        affected: initial,
        open_range: true,
    };
    run_variant(
        g_t,
        ctx,
        &hooks,
        &changed0,
        vertex_weight,
        community_weight,
        params,
        marking_seconds,
        affected,
        changed,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::batch::{generate_batch, BatchSpec};
    use crate::leiden::leiden_static;
    use crate::quality::modularity;
    use crate::synthetic::random_graph;

    fn barbell() -> Graph {
        let edges = [
            (0, 1, 1.0),
            (1, 2, 1.0),
            (0, 2, 1.0),
            (3, 4, 1.0),
            (4, 5, 1.0),
            (3, 5, 1.0),
            (2, 3, 1.0),
        ];
        Graph::build(&edges, 6).unwrap()
    }

    fn barbell_ctx() -> DynamicContext {
        DynamicContext::compute(&barbell(), vec![0, 0, 0, 3, 3, 3])
    }

    fn canonical(membership: &[u32]) -> Vec<Vec<u32>> {
        let mut groups: std::collections::BTreeMap<u32, Vec<u32>> = Default::default();
        for (v, &c) in membership.iter().enumerate() {
            groups.entry(c).or_default().push(v as u32);
        }
        let mut parts: Vec<Vec<u32>> = groups.into_values().collect();
        parts.sort();
        parts
    }

    #[test]
    fn update_weights_applies_deletions_per_direction() {
        let g0 = barbell();
        let batch = BatchUpdate {
            deletions: vec![(0, 1, 1.0), (1, 0, 1.0)],
            insertions: vec![],
        };
        let g1 = g0.apply_batch(&batch).unwrap().graph;
        let (k, sigma) = update_weights(&g1, &batch, &barbell_ctx(), 1);
        assert_eq!(k[0], 1.0);
        assert_eq!(k[1], 1.0);
        assert_eq!(sigma[0], 5.0);
        assert_eq!(sigma[3], 7.0);
    }

    #[test]
    fn update_weights_empty_batch_is_identity() {
        let ctx = barbell_ctx();
        let (k, sigma) = update_weights(&barbell(), &BatchUpdate::default(), &ctx, 1);
        assert_eq!(k, ctx.vertex_weight);
        assert_eq!(sigma, ctx.community_weight);
    }

    #[test]
    fn update_weights_cross_community_insertion() {
        let g0 = barbell();
        let batch = BatchUpdate {
            deletions: vec![],
            insertions: vec![(2, 4, 1.0), (4, 2, 1.0)],
        };
        let g1 = g0.apply_batch(&batch).unwrap().graph;
        let (k, sigma) = update_weights(&g1, &batch, &barbell_ctx(), 1);
        assert_eq!(k[2], 4.0);
        assert_eq!(k[4], 3.0);
        assert_eq!(sigma[0], 8.0);
        assert_eq!(sigma[3], 8.0);
    }

    #[test]
    fn update_weights_matches_recomputation_on_random_batches() {
        for seed in 0..30u64 {
            let g0 = random_graph(80, 6.0, seed);
            let membership = leiden_static(&g0, &LeidenParams::default()).membership;
            let ctx = DynamicContext::compute(&g0, membership);
            let spec = BatchSpec {
                edge_fraction: 0.08,
                insertion_share: 0.8,
                seed: seed + 1000,
                repetitions: 1,
            };
            let batch = generate_batch(&g0, &spec).unwrap();
            let g1 = g0.apply_batch(&batch).unwrap().graph;
            let threads = if seed % 2 == 0 { 1 } else { 3 };
            let (k, sigma) = update_weights(&g1, &batch, &ctx, threads);
            assert_eq!(k, g1.weighted_degrees(), "seed {seed}");
            let expected = community_weights(&ctx.membership, &k, g1.vertex_count());
            assert_eq!(sigma, expected, "seed {seed}");
        }
    }

    #[test]
    fn nd_empty_batch_returns_previous_partition() {
        let g = barbell();
        let ctx = barbell_ctx();
        let out = naive_dynamic(&g, &BatchUpdate::default(), &ctx, &LeidenParams::default());
        assert_eq!(canonical(&out.membership), canonical(&ctx.membership));
        assert_eq!(out.report.engine.moves_per_pass[0], 0);
        assert_eq!(out.report.affected_fraction, 1.0);
    }

    #[test]
    fn nd_bridge_deletion_keeps_triangles_and_raises_q() {
        let g0 = barbell();
        let ctx = barbell_ctx();
        let q_before = modularity(&g0, &ctx.membership);
        let batch = BatchUpdate {
            deletions: vec![(2, 3, 1.0), (3, 2, 1.0)],
            insertions: vec![],
        };
        let g1 = g0.apply_batch(&batch).unwrap().graph;
        let out = naive_dynamic(&g1, &batch, &ctx, &LeidenParams::default());
        assert_eq!(canonical(&out.membership), canonical(&ctx.membership));
        let q_after = modularity(&g1, &out.membership);
        assert!(q_after > q_before);
        assert!((q_after - 0.5).abs() < 1e-9);
    }

    #[test]
    fn nd_tracks_static_quality_on_random_graphs() {
        let g0 = random_graph(64, 6.0, 11);
        let params = LeidenParams::default();
        let ctx = DynamicContext::compute(&g0, leiden_static(&g0, &params).membership);
        let spec = BatchSpec {
            edge_fraction: 0.01,
            ..BatchSpec::default()
        };
        let batch = generate_batch(&g0, &spec).unwrap();
        let g1 = g0.apply_batch(&batch).unwrap().graph;
        let q_static = modularity(&g1, &leiden_static(&g1, &params).membership);
        let out = naive_dynamic(&g1, &batch, &ctx, &params);
        let q_dynamic = modularity(&g1, &out.membership);
        assert!((q_dynamic - q_static).abs() <= 0.01);
    }

    #[test]
    fn ds_marks_community_and_neighborhoods_for_intra_deletion() {
        let g0 = barbell();
        let ctx = barbell_ctx();
        let batch = BatchUpdate {
            deletions: vec![(0, 1, 1.0), (1, 0, 1.0)],
            insertions: vec![],
        };
        let g1 = g0.apply_batch(&batch).unwrap().graph;
        let marks = delta_screening_marks(&g1, &batch, &ctx, 1);
        assert_eq!(marks.vertex, vec![true, true, true, false, false, false]);
        assert!((marks.affected_fraction() - 0.5).abs() < 1e-12);
        assert!(marks.community[0]);
    }

    #[test]
    fn ds_ignores_cross_community_deletions() {
        let g0 = barbell();
        let ctx = barbell_ctx();
        let batch = BatchUpdate {
            deletions: vec![(2, 3, 1.0), (3, 2, 1.0)],
            insertions: vec![],
        };
        let g1 = g0.apply_batch(&batch).unwrap().graph;
        let marks = delta_screening_marks(&g1, &batch, &ctx, 1);
        assert!(marks.vertex.iter().all(|&f| !f));
        let out = delta_screening(&g1, &batch, &ctx, &LeidenParams::default());
        assert_eq!(canonical(&out.membership), canonical(&ctx.membership));
    }

    #[test]
    fn ds_empty_batch_marks_nothing_and_preserves_partition() {
        let g = barbell();
        let ctx = barbell_ctx();
        let out = delta_screening(&g, &BatchUpdate::default(), &ctx, &LeidenParams::default());
        assert_eq!(out.report.affected_fraction, 0.0);
        assert_eq!(canonical(&out.membership), canonical(&ctx.membership));
    }

    #[test]
    fn ds_marks_best_insertion_target_community() {
        let g0 = barbell();
        let ctx = barbell_ctx();
        // vertex 0 gains two cross-community edges; community 3 is the only
        // candidate and must be marked, making all its members affected
        let batch = BatchUpdate {
            deletions: vec![],
            insertions: vec![(0, 4, 1.0), (4, 0, 1.0), (0, 5, 1.0), (5, 0, 1.0)],
        };
        let g1 = g0.apply_batch(&batch).unwrap().graph;
        let marks = delta_screening_marks(&g1, &batch, &ctx, 1);
        assert!(marks.community[3]);
        for v in [0usize, 3, 4, 5] {
            assert!(marks.vertex[v], "vertex {v} should be affected");
        }
    }

    #[test]
    fn df_marks_only_intra_deletion_endpoints() {
        let ctx = barbell_ctx();
        let batch = BatchUpdate {
            deletions: vec![(0, 1, 1.0), (1, 0, 1.0)],
            insertions: vec![],
        };
        let marks = dynamic_frontier_marks(&batch, &ctx.membership, 1);
        assert_eq!(marks, vec![true, true, false, false, false, false]);
    }

    #[test]
    fn df_ignores_intra_community_insertions() {
        let ctx = barbell_ctx();
        let batch = BatchUpdate {
            deletions: vec![],
            insertions: vec![(0, 1, 1.0), (1, 0, 1.0)], // would be intra-A
        };
        let marks = dynamic_frontier_marks(&batch, &ctx.membership, 1);
        assert!(marks.iter().all(|&f| !f));
    }

    #[test]
    fn df_initial_marks_are_a_subset_of_ds_marks() {
        for seed in 0..20u64 {
            let g0 = random_graph(100, 6.0, seed);
            let params = LeidenParams::default();
            let ctx = DynamicContext::compute(&g0, leiden_static(&g0, &params).membership);
            let spec = BatchSpec {
                edge_fraction: 0.05,
                seed: seed * 7 + 3,
                ..BatchSpec::default()
            };
            let batch = generate_batch(&g0, &spec).unwrap();
            let g1 = g0.apply_batch(&batch).unwrap().graph;
            let df = dynamic_frontier_marks(&batch, &ctx.membership, 1);
            let ds = delta_screening_marks(&g1, &batch, &ctx, 1);
            for v in 0..g0.vertex_count() {
                assert!(!df[v] || ds.vertex[v], "seed {seed}: DF marked {v}, DS did not");
            }
        }
    }

    #[test]
    fn variants_return_weights_consistent_with_their_membership() {
        let g0 = random_graph(150, 8.0, 4);
        let params = LeidenParams::default();
        let ctx = DynamicContext::compute(&g0, leiden_static(&g0, &params).membership);
        let spec = BatchSpec {
            edge_fraction: 0.05,
            seed: 17,
            ..BatchSpec::default()
        };
        let batch = generate_batch(&g0, &spec).unwrap();
        let g1 = g0.apply_batch(&batch).unwrap().graph;
        for run in [
            naive_dynamic(&g1, &batch, &ctx, &params),
            delta_screening(&g1, &batch, &ctx, &params),
            dynamic_frontier(&g1, &batch, &ctx, &params),
        ] {
            assert_eq!(run.vertex_weight, g1.weighted_degrees());
            let expected =
                community_weights(&run.membership, &run.vertex_weight, g1.vertex_count());
            for c in 0..expected.len() {
                assert!((run.community_weight[c] - expected[c]).abs() < 1e-9);
            }
        }
    }
}
