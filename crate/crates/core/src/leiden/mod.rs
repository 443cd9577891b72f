//! The dynamic-supporting parallel Leiden engine.
//!
//! One pass = local-moving, subset renumbering, breaking changed communities,
//! constrained refinement, and aggregation of refined sub-communities into
//! super-vertices. Passes repeat until the local-moving phase converges in a
//! single iteration, the community count stops shrinking past the
//! aggregation tolerance, or the pass limit is reached.
//!
//! Dynamic front-ends steer the first pass through [`AffectedHooks`]
//! (which vertices start unprocessed and which may be processed at all) and
//! through the changed-community flags (which communities are broken up and
//! refined). From the second pass on, every super-vertex is processed and
//! every community refined.

mod aggregate;
mod local_move;
mod refine;
mod table;

pub use aggregate::{aggregate, dendrogram_lookup, dense_renumber};
pub use local_move::{local_move, scan_communities, MoveStats};
pub use refine::{break_changed_communities, refine, scan_bounded, subset_renumber};
pub use table::CommunityScanTable;

use std::sync::atomic::{AtomicBool, AtomicU32, Ordering};
use std::time::Instant;

use crate::graph::{BatchUpdate, Graph};
use crate::parallel::AtomicF64;
use crate::quality::community_weights;

/// Tuning knobs for the engine.
#[derive(Debug, Clone)]
pub struct LeidenParams {
    /// Local-moving stops when the per-iteration modularity gain drops to
    /// this threshold.
    pub tolerance: f64,
    /// The threshold tightens by this factor after every pass.
    pub tolerance_drop: f64,
    /// Iteration cap per local-moving phase.
    pub max_iterations: usize,
    /// Pass cap; hitting it is flagged in the report.
    pub max_passes: usize,
    /// Stop passing once live communities exceed this fraction of the
    /// current vertex count. `1.0` disables the check.
    pub aggregation_tolerance: f64,
    /// Dynamic-scheduling chunk for the local-moving and refinement loops.
    pub chunk_size_main: usize,
    /// Dynamic-scheduling chunk for the aggregation loop; smaller chunks
    /// even out the load when only a few communities were refined.
    pub chunk_size_aggregation: usize,
    /// Worker threads. One thread makes runs bit-reproducible.
    pub threads: usize,
    /// Recorded in reports; the engine itself is deterministic for a fixed
    /// thread count of one and carries no randomness.
    pub seed: u64,
}

impl Default for LeidenParams {
    fn default() -> Self {
        LeidenParams {
            tolerance: 0.01,
            tolerance_drop: 10.0,
            max_iterations: 20,
            max_passes: 10,
            aggregation_tolerance: 0.8,
            chunk_size_main: 2048,
            chunk_size_aggregation: 32,
            threads: 1,
            seed: 0,
        }
    }
}

impl LeidenParams {
    pub fn validate(&self) {
        assert!(self.tolerance > 0.0, "tolerance must be positive");
        assert!(self.tolerance_drop > 1.0, "tolerance drop must exceed 1");
        assert!(self.max_iterations >= 1);
        assert!(self.max_passes >= 1);
        assert!((0.0..=1.0).contains(&self.aggregation_tolerance));
        assert!(self.chunk_size_main >= 1 && self.chunk_size_aggregation >= 1);
        assert!(self.threads >= 1);
    }
}

/// Which vertices the first local-moving phase may touch.
///
/// `is_affected` picks the initially unprocessed vertices;
/// `in_affected_range` gates whether a vertex may be processed when vertex
/// pruning re-queues it. Marking neighbors of a moved vertex as affected is
/// realized by the pruning re-queue itself, so hooks carry no callback for
/// it; a hook that returns `true` from `in_affected_range` lets the affected
/// set grow along the frontier.
pub trait AffectedHooks: Sync {
    fn is_affected(&self, v: u32) -> bool;
    fn in_affected_range(&self, v: u32) -> bool;
}

/// Hooks that mark everything: static runs and the Naive-dynamic front-end.
#[derive(Debug, Clone, Copy)]
pub struct AllAffected;

impl AffectedHooks for AllAffected {
    fn is_affected(&self, _v: u32) -> bool {
        true
    }
    fn in_affected_range(&self, _v: u32) -> bool {
        true
    }
}

/// Mutable per-vertex and per-community state shared by all phases.
///
/// Community ids are vertex ids of the current (super-vertex) graph, so all
/// arrays share one index space. Fields written concurrently during a phase
/// are atomics; reads may observe values from moves still in flight, which
/// the asynchronous engine tolerates.
pub struct CommunityState {
    /// Community of each vertex.
    pub membership: Vec<AtomicU32>,
    /// Weighted degree of each vertex; constant during a phase.
    pub vertex_weight: Vec<f64>,
    /// Total vertex weight per community id.
    pub community_weight: Vec<AtomicF64>,
    /// Communities whose sub-structure may have changed and which therefore
    /// must be broken and refined.
    pub changed: Vec<AtomicBool>,
    /// Vertex pruning state: processed vertices are skipped until a
    /// neighbor's move re-queues them.
    pub processed: Vec<AtomicBool>,
    len: usize,
}

impl CommunityState {
    pub fn new(
        membership: &[u32],
        vertex_weight: Vec<f64>,
        community_weight: Vec<f64>,
        changed: &[bool],
    ) -> Self {
        let n = membership.len();
        assert_eq!(vertex_weight.len(), n);
        assert_eq!(community_weight.len(), n);
        assert_eq!(changed.len(), n);
        CommunityState {
            membership: membership.iter().map(|&c| AtomicU32::new(c)).collect(),
            vertex_weight,
            community_weight: community_weight.iter().map(|&w| AtomicF64::new(w)).collect(),
            changed: changed.iter().map(|&f| AtomicBool::new(f)).collect(),
            processed: (0..n).map(|_| AtomicBool::new(false)).collect(),
            len: n,
        }
    }

    /// Number of vertices of the current (super-vertex) graph; arrays keep
    /// the original capacity while passes shrink this prefix.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn membership_snapshot(&self) -> Vec<u32> {
        self.membership[..self.len]
            .iter()
            .map(|c| c.load(Ordering::Relaxed))
            .collect()
    }

    pub fn community_weight_snapshot(&self) -> Vec<f64> {
        self.community_weight[..self.len].iter().map(|w| w.load()).collect()
    }

    /// Re-seeds the state for a freshly aggregated graph: identity
    /// membership, weights from the graph, all communities changed, all
    /// vertices unprocessed.
    fn reset_for_aggregated(&mut self, g: &Graph) {
        let n = g.vertex_count();
        assert!(n <= self.membership.len());
        self.len = n;
        let degrees = g.weighted_degrees();
        for v in 0..n {
            self.membership[v].store(v as u32, Ordering::Relaxed);
            self.vertex_weight[v] = degrees[v];
            self.community_weight[v].store(degrees[v]);
            self.changed[v].store(true, Ordering::Relaxed);
            self.processed[v].store(false, Ordering::Relaxed);
        }
    }

    #[cfg(debug_assertions)]
    fn assert_weight_consistency(&self) {
        let membership = self.membership_snapshot();
        let expected = community_weights(&membership, &self.vertex_weight, self.len);
        let mut live = vec![false; self.len];
        for &c in &membership {
            live[c as usize] = true;
        }
        for (c, &want) in expected.iter().enumerate() {
            if !live[c] {
                continue;
            }
            let got = self.community_weight[c].load();
            let scale = want.abs().max(1.0);
            debug_assert!(
                (got - want).abs() <= 1e-6 * scale,
                "community {c}: stored weight {got}, members sum to {want}"
            );
        }
    }
}

/// Per-thread scratch shared by all phases: the dense scan table plus the
/// accumulators the local-moving loop folds at iteration barriers.
pub(crate) struct ThreadCtx {
    pub table: CommunityScanTable,
    pub gain: f64,
    pub moves: u64,
}

/// Worker scratch and chunk configuration, allocated once per run.
pub struct Workspace {
    pub(crate) ctxs: Vec<ThreadCtx>,
    pub chunk_main: usize,
    pub chunk_agg: usize,
}

impl Workspace {
    pub fn new(params: &LeidenParams, capacity: usize) -> Self {
        Workspace {
            ctxs: (0..params.threads.max(1))
                .map(|_| ThreadCtx {
                    table: CommunityScanTable::new(capacity),
                    gain: 0.0,
                    moves: 0,
                })
                .collect(),
            chunk_main: params.chunk_size_main,
            chunk_agg: params.chunk_size_aggregation,
        }
    }
}

/// What the engine observed during a run.
#[derive(Debug, Clone, Default)]
pub struct EngineReport {
    pub passes: usize,
    pub iterations_per_pass: Vec<usize>,
    pub moves_per_pass: Vec<u64>,
    pub community_count: usize,
    /// Pass limit reached before convergence.
    pub max_passes_hit: bool,
    pub move_seconds: f64,
    /// Includes subset renumbering and community breaking.
    pub refine_seconds: f64,
    /// Includes dendrogram bookkeeping and weight resets.
    pub aggregate_seconds: f64,
}

/// Result of a run: the flat top-level membership, community weights keyed
/// by it, the per-pass dendrogram levels whose composition reproduces the
/// flat membership, and the run report.
#[derive(Debug, Clone)]
pub struct LeidenOutcome {
    pub membership: Vec<u32>,
    pub community_weight: Vec<f64>,
    pub dendrogram: Vec<Vec<u32>>,
    pub report: EngineReport,
}

/// Flags communities touched by the batch: in dynamic mode, the community of
/// every deletion or insertion whose endpoints share a community; in static
/// mode, everything. Flags are keyed by community id.
pub fn changed_communities(
    g: &Graph,
    c_prev: &[u32],
    batch: &BatchUpdate,
    dynamic: bool,
) -> Vec<bool> {
    let n = g.vertex_count();
    if !dynamic {
        return vec![true; n];
    }
    let mut flags = vec![false; n];
    for records in [&batch.deletions, &batch.insertions] {
        for &(i, j, _) in records.iter() {
            let ci = c_prev[i as usize];
            if ci == c_prev[j as usize] {
                flags[ci as usize] = true;
            }
        }
    }
    flags
}

/// Runs the engine from a previous community assignment.
///
/// `vertex_weights` and `community_weights_in` must be consistent with `g`
/// and `c_prev` (community weight = sum of member vertex weights), and
/// `changed0` carries the initial changed-community flags keyed by the ids
/// used in `c_prev`.
pub fn leiden<H: AffectedHooks>(
    g: &Graph,
    c_prev: &[u32],
    vertex_weights: &[f64],
    community_weights_in: &[f64],
    hooks: &H,
    changed0: &[bool],
    params: &LeidenParams,
) -> LeidenOutcome {
    params.validate();
    let n = g.vertex_count();
    assert_eq!(c_prev.len(), n);
    assert_eq!(vertex_weights.len(), n);
    assert_eq!(community_weights_in.len(), n);
    assert_eq!(changed0.len(), n);

    let total_weight = g.total_edge_weight();
    let mut report = EngineReport::default();

    if n == 0 || total_weight <= 0.0 {
        // nothing to optimize; echo the previous assignment
        report.community_count = distinct_count(c_prev);
        return LeidenOutcome {
            membership: c_prev.to_vec(),
            community_weight: community_weights(c_prev, vertex_weights, n),
            dendrogram: Vec::new(),
            report,
        };
    }

    let mut ws = Workspace::new(params, n);
    let mut state = CommunityState::new(
        c_prev,
        vertex_weights.to_vec(),
        community_weights_in.to_vec(),
        changed0,
    );
    for v in 0..n {
        state.processed[v].store(!hooks.is_affected(v as u32), Ordering::Relaxed);
    }

    let mut flat: Vec<u32> = (0..n as u32).collect();
    let mut dendrogram: Vec<Vec<u32>> = Vec::new();
    let mut working: Option<Graph> = None; // None = original graph
    let mut tolerance = params.tolerance;
    let mut converged = false;

    for pass in 0..params.max_passes {
        let current: &Graph = working.as_ref().unwrap_or(g);
        report.passes = pass + 1;

        let clock = Instant::now();
        let stats = local_move(
            current,
            &state,
            if pass == 0 { Some(hooks) } else { None },
            tolerance,
            params.max_iterations,
            total_weight,
            &mut ws,
        );
        report.move_seconds += clock.elapsed().as_secs_f64();
        report.iterations_per_pass.push(stats.iterations);
        report.moves_per_pass.push(stats.moves);
        #[cfg(debug_assertions)]
        state.assert_weight_consistency();

        let clock = Instant::now();
        subset_renumber(&state, &mut ws);
        let bounds = state.membership_snapshot();
        break_changed_communities(&state, &mut ws);
        refine(current, &bounds, &state, total_weight, &mut ws);
        report.refine_seconds += clock.elapsed().as_secs_f64();
        #[cfg(debug_assertions)]
        state.assert_weight_consistency();

        if pass > 0 && stats.iterations <= 1 {
            converged = true;
            break;
        }

        let clock = Instant::now();
        let refined = state.membership_snapshot();
        let (live, dense) = dense_renumber(&refined);
        if live as f64 > params.aggregation_tolerance * state.len() as f64 {
            report.aggregate_seconds += clock.elapsed().as_secs_f64();
            converged = true;
            break;
        }
        let level: Vec<u32> = refined.iter().map(|&c| dense[c as usize]).collect();
        for slot in flat.iter_mut() {
            *slot = level[*slot as usize];
        }
        dendrogram.push(level.clone());
        let next = aggregate(current, &level, live, &mut ws);
        state.reset_for_aggregated(&next);
        working = Some(next);
        report.aggregate_seconds += clock.elapsed().as_secs_f64();

        tolerance /= params.tolerance_drop;
    }
    report.max_passes_hit = !converged;

    let last_level = state.membership_snapshot();
    for slot in flat.iter_mut() {
        *slot = last_level[*slot as usize];
    }
    dendrogram.push(last_level);

    report.community_count = distinct_count(&flat);
    let sigma = community_weights(&flat, vertex_weights, n);
    LeidenOutcome {
        membership: flat,
        community_weight: sigma,
        dendrogram,
        report,
    }
}

/// Static detection: singleton seed, every vertex affected, every community
/// refined.
pub fn leiden_static(g: &Graph, params: &LeidenParams) -> LeidenOutcome {
    let n = g.vertex_count();
    let identity: Vec<u32> = (0..n as u32).collect();
    let degrees = g.weighted_degrees();
    let sigma = degrees.clone();
    let changed = vec![true; n];
    leiden(g, &identity, &degrees, &sigma, &AllAffected, &changed, params)
}

pub(crate) fn distinct_count(membership: &[u32]) -> usize {
    let mut seen = vec![false; membership.len()];
    let mut count = 0;
    for &c in membership {
        if !seen[c as usize] {
            seen[c as usize] = true;
            count += 1;
        }
    }
    count
}
