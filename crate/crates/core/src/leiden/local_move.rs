//! Local-moving phase: greedy reassignment of vertices to the neighboring
//! community with the highest delta-modularity, with vertex pruning.

use std::ops::Range;
use std::sync::atomic::{AtomicU32, Ordering};

use super::table::CommunityScanTable;
use super::{AffectedHooks, CommunityState, ThreadCtx, Workspace};
use crate::graph::Graph;
use crate::parallel::parallel_for_chunks;
use crate::quality::delta_modularity;

/// Anything that can answer "which community is vertex `v` in".
pub trait MembershipView: Sync {
    fn community_of(&self, v: u32) -> u32;
}

impl MembershipView for [u32] {
    #[inline]
    fn community_of(&self, v: u32) -> u32 {
        self[v as usize]
    }
}

impl MembershipView for [AtomicU32] {
    #[inline]
    fn community_of(&self, v: u32) -> u32 {
        self[v as usize].load(Ordering::Relaxed)
    }
}

/// Accumulates, into `acc`, the edge weight from `v` to each neighboring
/// community. Self-loops are skipped unless `include_self` is set.
pub fn scan_communities<M: MembershipView + ?Sized>(
    acc: &mut CommunityScanTable,
    g: &Graph,
    membership: &M,
    v: u32,
    include_self: bool,
) {
    for (j, w) in g.neighbors(v) {
        if !include_self && j == v {
            continue;
        }
        acc.add(membership.community_of(j), w as f64);
    }
}

/// Picks the scanned community with the highest delta-modularity for moving
/// `v` out of `current`; ties go to the lowest community id. Returns
/// `(current, 0.0)` when no move improves modularity.
pub(crate) fn choose_best_community(
    acc: &CommunityScanTable,
    current: u32,
    vertex_weight: f64,
    state: &CommunityState,
    total_weight: f64,
) -> (u32, f64) {
    let weight_to_current = acc.get(current);
    let sigma_current = state.community_weight[current as usize].load();
    let mut best = current;
    let mut best_gain = 0.0;
    for (candidate, weight_to_candidate) in acc.iter() {
        if candidate == current {
            continue;
        }
        let gain = delta_modularity(
            weight_to_candidate,
            weight_to_current,
            vertex_weight,
            state.community_weight[candidate as usize].load(),
            sigma_current,
            total_weight,
        );
        if gain > best_gain || (gain == best_gain && best_gain > 0.0 && candidate < best) {
            best_gain = gain;
            best = candidate;
        }
    }
    (best, best_gain)
}

/// Outcome of one local-moving phase.
#[derive(Debug, Clone, Copy, Default)]
pub struct MoveStats {
    /// Iterations performed, counting the final converged sweep.
    pub iterations: usize,
    pub moves: u64,
    pub total_gain: f64,
}

/// Runs local-moving until the per-iteration gain drops to `tolerance` or
/// the iteration cap is reached, returning the iterations performed.
///
/// `hooks` gate the first pass of a dynamic run: vertices outside the
/// affected range are skipped (and stay pruned until a neighbor's move
/// re-queues them). Passing `None` processes every queued vertex. Whenever a
/// vertex moves, its source and target communities are flagged as changed.
pub fn local_move<H: AffectedHooks>(
    g: &Graph,
    state: &CommunityState,
    hooks: Option<&H>,
    tolerance: f64,
    max_iterations: usize,
    total_weight: f64,
    ws: &mut Workspace,
) -> MoveStats {
    let n = state.len();
    let mut stats = MoveStats::default();
    for iteration in 0..max_iterations {
        for ctx in ws.ctxs.iter_mut() {
            ctx.gain = 0.0;
            ctx.moves = 0;
        }
        let body = |ctx: &mut ThreadCtx, range: Range<usize>| {
            for v in range {
                // load before swap: keeps already-processed vertices from
                // dirtying the flag's cacheline on every sweep
                if state.processed[v].load(Ordering::Relaxed)
                    || state.processed[v].swap(true, Ordering::Relaxed)
                {
                    continue;
                }
                if let Some(h) = hooks {
                    if !h.in_affected_range(v as u32) {
                        continue;
                    }
                }
                let current = state.membership[v].load(Ordering::Relaxed);
                let vertex_weight = state.vertex_weight[v];
                ctx.table.clear();
                scan_communities(&mut ctx.table, g, state.membership.as_slice(), v as u32, false);
                let (target, gain) =
                    choose_best_community(&ctx.table, current, vertex_weight, state, total_weight);
                if target == current || gain <= 0.0 {
                    continue;
                }
                debug_assert!(gain > 0.0);
                state.community_weight[current as usize].fetch_sub(vertex_weight);
                state.community_weight[target as usize].fetch_add(vertex_weight);
                state.membership[v].store(target, Ordering::Relaxed);
                state.changed[current as usize].store(true, Ordering::Relaxed);
                state.changed[target as usize].store(true, Ordering::Relaxed);
                ctx.gain += gain;
                ctx.moves += 1;
                // vertex pruning re-queue; this is also how the affected
                // frontier expands for the dynamic front-ends
                for (j, _) in g.neighbors(v as u32) {
                    state.processed[j as usize].store(false, Ordering::Relaxed);
                }
            }
        };
        parallel_for_chunks(n, ws.chunk_main, &mut ws.ctxs, body);

        let gain: f64 = ws.ctxs.iter().map(|c| c.gain).sum();
        let moves: u64 = ws.ctxs.iter().map(|c| c.moves).sum();
        stats.iterations = iteration + 1;
        stats.moves += moves;
        stats.total_gain += gain;
        if gain <= tolerance {
            break;
        }
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leiden::{AllAffected, LeidenParams};
    use crate::quality::{community_weights, modularity};

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

    fn state_for(g: &Graph, membership: &[u32]) -> CommunityState {
        let k = g.weighted_degrees();
        let sigma = community_weights(membership, &k, g.vertex_count());
        CommunityState::new(membership, k, sigma, &vec![false; g.vertex_count()])
    }

    fn run_move(g: &Graph, state: &CommunityState) -> MoveStats {
        let mut ws = Workspace::new(&LeidenParams::default(), g.vertex_count());
        local_move(
            g,
            state,
            Some(&AllAffected),
            1e-12,
            20,
            g.total_edge_weight(),
            &mut ws,
        )
    }

    #[test]
    fn scan_accumulates_neighbor_communities() {
        let g = barbell();
        let membership = [0u32, 0, 0, 3, 3, 3];
        let mut acc = CommunityScanTable::new(6);
        scan_communities(&mut acc, &g, membership.as_slice(), 2, false);
        assert_eq!(acc.get(0), 2.0);
        assert_eq!(acc.get(3), 1.0);
        acc.clear();
        scan_communities(&mut acc, &g, membership.as_slice(), 0, false);
        assert_eq!(acc.get(0), 2.0);
        assert_eq!(acc.len(), 1);
    }

    #[test]
    fn scan_excludes_self_loop_unless_asked() {
        let g = Graph::build(&[(0, 0, 4.0), (0, 1, 1.0)], 2).unwrap();
        let membership = [0u32, 1];
        let mut acc = CommunityScanTable::new(2);
        scan_communities(&mut acc, &g, membership.as_slice(), 0, false);
        assert_eq!(acc.get(0), 0.0);
        assert_eq!(acc.get(1), 1.0);
        acc.clear();
        scan_communities(&mut acc, &g, membership.as_slice(), 0, true);
        assert_eq!(acc.get(0), 4.0);
    }

    #[test]
    fn converged_start_takes_one_iteration_and_no_moves() {
        let g = barbell();
        let state = state_for(&g, &[0, 0, 0, 3, 3, 3]);
        let stats = run_move(&g, &state);
        assert_eq!(stats.iterations, 1);
        assert_eq!(stats.moves, 0);
    }

    #[test]
    fn two_vertex_path_merges_with_exact_gain() {
        let g = Graph::build(&[(0, 1, 1.0)], 2).unwrap();
        let state = state_for(&g, &[0, 1]);
        let stats = run_move(&g, &state);
        assert_eq!(stats.moves, 1);
        // the accepted gain equals the direct modularity difference
        let before = modularity(&g, &[0, 1]);
        let after = modularity(&g, &state.membership_snapshot());
        assert!((stats.total_gain - (after - before)).abs() < 1e-12);
    }

    #[test]
    fn barbell_from_singletons_reaches_two_communities() {
        let g = barbell();
        let singletons: Vec<u32> = (0..6).collect();
        let state = state_for(&g, &singletons);
        run_move(&g, &state);
        let membership = state.membership_snapshot();
        assert_eq!(crate::leiden::distinct_count(&membership), 2);
        assert_eq!(membership[0], membership[1]);
        assert_eq!(membership[1], membership[2]);
        assert_eq!(membership[3], membership[4]);
        assert_eq!(membership[4], membership[5]);
    }

    #[test]
    fn moves_flag_source_and_target_communities() {
        let g = Graph::build(&[(0, 1, 1.0)], 2).unwrap();
        let state = state_for(&g, &[0, 1]);
        run_move(&g, &state);
        assert!(state.changed[0].load(Ordering::Relaxed));
        assert!(state.changed[1].load(Ordering::Relaxed));
    }
}
