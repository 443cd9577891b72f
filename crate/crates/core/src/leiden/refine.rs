//! Subset renumbering, breaking of changed communities, and the constrained
//! refinement phase.
//!
//! Refining only a subset of communities is sound only when every community
//! id equals one of its member vertices; otherwise a broken-out vertex can
//! collide with an untouched community that shares its id and end up
//! internally disconnected from it. Renumbering picks one member vertex per
//! community as its new id and re-keys the community weights and changed
//! flags accordingly, after which the flagged communities can be broken into
//! singletons and re-merged within their old bounds.

use std::ops::Range;
use std::sync::atomic::{AtomicBool, AtomicU32, Ordering};

use super::local_move::{choose_best_community, MembershipView};
use super::table::CommunityScanTable;
use super::{CommunityState, ThreadCtx, Workspace};
use crate::graph::Graph;
use crate::parallel::{parallel_for_chunks, AtomicF64};

const EMPTY: u32 = u32::MAX;

/// Relabels every live community to the id of one of its member vertices and
/// re-keys community weights and changed flags to the new ids. The partition
/// itself is unchanged. With one worker the representative is the minimum
/// member id; with several it is the first CAS winner.
pub fn subset_renumber(state: &CommunityState, ws: &mut Workspace) {
    let n = state.len();
    let representative: Vec<AtomicU32> = (0..n).map(|_| AtomicU32::new(EMPTY)).collect();
    parallel_for_chunks(n, ws.chunk_main, &mut ws.ctxs, |_, range: Range<usize>| {
        for v in range {
            let c = state.membership[v].load(Ordering::Relaxed);
            let _ = representative[c as usize].compare_exchange(
                EMPTY,
                v as u32,
                Ordering::Relaxed,
                Ordering::Relaxed,
            );
        }
    });

    let new_weight: Vec<AtomicF64> = (0..n).map(|_| AtomicF64::new(0.0)).collect();
    let new_changed: Vec<AtomicBool> = (0..n).map(|_| AtomicBool::new(false)).collect();
    parallel_for_chunks(n, ws.chunk_main, &mut ws.ctxs, |_, range: Range<usize>| {
        for c in range {
            let rep = representative[c].load(Ordering::Relaxed);
            if rep != EMPTY {
                new_weight[rep as usize].store(state.community_weight[c].load());
                new_changed[rep as usize]
                    .store(state.changed[c].load(Ordering::Relaxed), Ordering::Relaxed);
            }
        }
    });
    parallel_for_chunks(n, ws.chunk_main, &mut ws.ctxs, |_, range: Range<usize>| {
        for v in range {
            let c = state.membership[v].load(Ordering::Relaxed);
            let rep = representative[c as usize].load(Ordering::Relaxed);
            state.membership[v].store(rep, Ordering::Relaxed);
            state.community_weight[v].store(new_weight[v].load());
            state.changed[v].store(new_changed[v].load(Ordering::Relaxed), Ordering::Relaxed);
        }
    });
}

/// Splits every flagged community into singletons: each member becomes its
/// own community carrying its vertex weight, and inherits the changed flag
/// so refinement will process it.
pub fn break_changed_communities(state: &CommunityState, ws: &mut Workspace) {
    let n = state.len();
    parallel_for_chunks(n, ws.chunk_main, &mut ws.ctxs, |_, range: Range<usize>| {
        for v in range {
            let c = state.membership[v].load(Ordering::Relaxed);
            if !state.changed[c as usize].load(Ordering::Relaxed) {
                continue;
            }
            state.membership[v].store(v as u32, Ordering::Relaxed);
            state.community_weight[v].store(state.vertex_weight[v]);
            state.changed[v].store(true, Ordering::Relaxed);
        }
    });
}

/// Like `scan_communities` but only over neighbors inside the same community
/// bound.
pub fn scan_bounded<M: MembershipView + ?Sized>(
    acc: &mut CommunityScanTable,
    g: &Graph,
    bounds: &[u32],
    membership: &M,
    v: u32,
    include_self: bool,
) {
    let bound = bounds[v as usize];
    for (j, w) in g.neighbors(v) {
        if !include_self && j == v {
            continue;
        }
        if bounds[j as usize] != bound {
            continue;
        }
        acc.add(membership.community_of(j), w as f64);
    }
}

/// Constrained-merge refinement: one parallel sweep in which isolated
/// vertices of changed communities may join the best community inside their
/// bound. The commit path compares-and-swaps the source community weight
/// against the vertex weight, so a vertex that anything has merged into can
/// no longer move and communities stay internally connected.
pub fn refine(
    g: &Graph,
    bounds: &[u32],
    state: &CommunityState,
    total_weight: f64,
    ws: &mut Workspace,
) {
    let n = state.len();
    let body = |ctx: &mut ThreadCtx, range: Range<usize>| {
        for v in range {
            let current = state.membership[v].load(Ordering::Relaxed);
            if !state.changed[current as usize].load(Ordering::Relaxed) {
                continue;
            }
            let vertex_weight = state.vertex_weight[v];
            if state.community_weight[current as usize].load() != vertex_weight {
                continue; // not isolated: something already merged in
            }
            ctx.table.clear();
            scan_bounded(
                &mut ctx.table,
                g,
                bounds,
                state.membership.as_slice(),
                v as u32,
                false,
            );
            let (target, gain) =
                choose_best_community(&ctx.table, current, vertex_weight, state, total_weight);
            if target == current || gain <= 0.0 {
                continue;
            }
            // refuse to chase a community whose representative has moved on
            if state.membership[target as usize].load(Ordering::Relaxed) != target {
                continue;
            }
            if state.community_weight[current as usize].compare_exchange(vertex_weight, 0.0) {
                state.community_weight[target as usize].fetch_add(vertex_weight);
                state.membership[v].store(target, Ordering::Relaxed);
            }
        }
    };
    parallel_for_chunks(n, ws.chunk_main, &mut ws.ctxs, body);
}
