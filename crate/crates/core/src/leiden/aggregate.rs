//! Aggregation of communities into super-vertices, dense community
//! renumbering, and dendrogram composition.

use std::ops::Range;
use std::sync::atomic::{AtomicU32, Ordering};

use super::local_move::scan_communities;
use super::{ThreadCtx, Workspace};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::parallel::parallel_for_chunks;

/// Renumbers community ids to a dense `0..count` range in first-occurrence
/// order. Returns the live community count and the old-id to dense-id map
/// (`u32::MAX` for ids with no members).
pub fn dense_renumber(membership: &[u32]) -> (usize, Vec<u32>) {
    let mut map = vec![u32::MAX; membership.len()];
    let mut count = 0u32;
    for &c in membership {
        if map[c as usize] == u32::MAX {
            map[c as usize] = count;
            count += 1;
        }
    }
    (count as usize, map)
}

/// Composes a membership with the next dendrogram level:
/// `result[v] = level[flat[v]]`.
pub fn dendrogram_lookup(flat: &[u32], level: &[u32]) -> Result<Vec<u32>> {
    flat.iter()
        .map(|&c| {
            level
                .get(c as usize)
                .copied()
                .ok_or(Error::UnmappedCommunity { id: c })
        })
        .collect()
}

/// Collapses each community into a super-vertex. `membership` must use dense
/// ids `0..community_count`. Edge weights between two communities are
/// summed; intra-community weight becomes a self-loop. Total edge weight is
/// conserved.
pub fn aggregate(
    g: &Graph,
    membership: &[u32],
    community_count: usize,
    ws: &mut Workspace,
) -> Graph {
    let n = g.vertex_count();
    assert_eq!(membership.len(), n);

    // community-vertices CSR: count, exclusive scan, then a counting-sort
    // fill so member order is independent of scheduling
    let mut member_offsets = vec![0usize; community_count + 1];
    for &c in membership {
        member_offsets[c as usize + 1] += 1;
    }
    for c in 0..community_count {
        member_offsets[c + 1] += member_offsets[c];
    }
    let mut members = vec![0u32; n];
    let mut cursor = member_offsets.clone();
    for v in 0..n {
        let c = membership[v] as usize;
        members[cursor[c]] = v as u32;
        cursor[c] += 1;
    }

    // upper-bound slot ranges per super-vertex: total degree of the members
    let mut slot_offsets = vec![0usize; community_count + 1];
    for c in 0..community_count {
        let degree_sum: usize = members[member_offsets[c]..member_offsets[c + 1]]
            .iter()
            .map(|&v| g.degree(v))
            .sum();
        slot_offsets[c + 1] = slot_offsets[c] + degree_sum;
    }
    let total_slots = slot_offsets[community_count];
    let slot_neighbor: Vec<AtomicU32> = (0..total_slots).map(|_| AtomicU32::new(0)).collect();
    let slot_weight: Vec<AtomicU32> = (0..total_slots).map(|_| AtomicU32::new(0)).collect();
    let super_degree: Vec<AtomicU32> = (0..community_count).map(|_| AtomicU32::new(0)).collect();

    let body = |ctx: &mut ThreadCtx, range: Range<usize>| {
        for c in range {
            ctx.table.clear();
            for &v in &members[member_offsets[c]..member_offsets[c + 1]] {
                scan_communities(&mut ctx.table, g, membership, v, true);
            }
            let base = slot_offsets[c];
            for (slot, (d, w)) in ctx.table.iter().enumerate() {
                slot_neighbor[base + slot].store(d, Ordering::Relaxed);
                slot_weight[base + slot].store((w as f32).to_bits(), Ordering::Relaxed);
            }
            super_degree[c].store(ctx.table.len() as u32, Ordering::Relaxed);
        }
    };
    parallel_for_chunks(community_count, ws.chunk_agg, &mut ws.ctxs, body);

    // compact the slotted rows into a tight CSR, sorting each row
    let mut offsets = vec![0usize; community_count + 1];
    for c in 0..community_count {
        offsets[c + 1] = offsets[c] + super_degree[c].load(Ordering::Relaxed) as usize;
    }
    let mut neighbors = vec![0u32; offsets[community_count]];
    let mut weights = vec![0f32; offsets[community_count]];
    let mut row: Vec<(u32, f32)> = Vec::new();
    for c in 0..community_count {
        let degree = super_degree[c].load(Ordering::Relaxed) as usize;
        let base = slot_offsets[c];
        row.clear();
        row.extend((0..degree).map(|s| {
            (
                slot_neighbor[base + s].load(Ordering::Relaxed),
                f32::from_bits(slot_weight[base + s].load(Ordering::Relaxed)),
            )
        }));
        row.sort_unstable_by_key(|&(d, _)| d);
        for (slot, &(d, w)) in row.iter().enumerate() {
            neighbors[offsets[c] + slot] = d;
            weights[offsets[c] + slot] = w;
        }
    }
    Graph::from_csr_parts(offsets, neighbors, weights)
}
