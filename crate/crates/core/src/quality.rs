//! Partition quality: modularity, the exact delta-modularity of a single
//! vertex move, a connectivity audit, and summary statistics.

use crate::graph::Graph;

/// Summary of a partition: community count, a (size, count) histogram whose
/// weighted sum is the vertex count, modularity, and how many communities are
/// internally disconnected.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionStats {
    pub community_count: usize,
    pub size_histogram: Vec<(usize, usize)>,
    pub modularity: f64,
    pub disconnected_count: usize,
}

fn assert_valid_membership(g: &Graph, membership: &[u32]) {
    let n = g.vertex_count();
    assert_eq!(membership.len(), n, "membership length != vertex count");
    for &c in membership {
        assert!((c as usize) < n, "community id {c} out of range");
    }
}

/// Modularity of a partition.
///
/// Intra-community weight counts both stored directions of every edge and a
/// self-loop once at full stored weight, so aggregating a partition into
/// super-vertices with self-loops preserves the score exactly. An empty graph
/// scores 0.
pub fn modularity(g: &Graph, membership: &[u32]) -> f64 {
    assert_valid_membership(g, membership);
    let m = g.total_edge_weight();
    if m <= 0.0 {
        return 0.0;
    }
    let n = g.vertex_count();
    let mut intra = vec![0.0f64; n];
    let mut total = vec![0.0f64; n];
    for v in 0..n as u32 {
        let c = membership[v as usize];
        for (j, w) in g.neighbors(v) {
            total[c as usize] += w as f64;
            if membership[j as usize] == c {
                intra[c as usize] += w as f64;
            }
        }
    }
    let two_m = 2.0 * m;
    (0..n)
        .map(|c| intra[c] / two_m - (total[c] / two_m) * (total[c] / two_m))
        .sum()
}

/// Modularity by integer record counting, valid for unit-weight graphs only.
/// An independent route used to cross-check [`modularity`]: it tallies
/// stored records instead of summing weights, under the same
/// one-record-per-self-loop convention.
pub fn modularity_by_counting(g: &Graph, membership: &[u32]) -> f64 {
    assert_valid_membership(g, membership);
    let records = g.directed_edge_count();
    if records == 0 {
        return 0.0;
    }
    let n = g.vertex_count();
    let mut intra = vec![0u64; n];
    let mut ends = vec![0u64; n];
    for (i, j, _) in g.directed_edges() {
        ends[membership[i as usize] as usize] += 1;
        if membership[i as usize] == membership[j as usize] {
            intra[membership[i as usize] as usize] += 1;
        }
    }
    let records = records as f64;
    (0..n)
        .map(|c| {
            let e = intra[c] as f64 / records;
            let d = ends[c] as f64 / records;
            e - d * d
        })
        .sum()
}

/// Exact modularity change of moving a vertex from community `d` to `c`.
///
/// `k_i_to_c` / `k_i_to_d` are the weights from the vertex to each community
/// (self-loops excluded), `k_i` its weighted degree, `sigma_c` the target
/// community weight without the vertex, `sigma_d` the source community weight
/// with the vertex still counted, and `m` the total edge weight.
#[inline]
pub fn delta_modularity(
    k_i_to_c: f64,
    k_i_to_d: f64,
    k_i: f64,
    sigma_c: f64,
    sigma_d: f64,
    m: f64,
) -> f64 {
    debug_assert!(m > 0.0);
    (k_i_to_c - k_i_to_d) / m - k_i * (k_i + sigma_c - sigma_d) / (2.0 * m * m)
}

/// Ids of communities that are not internally connected: a BFS over
/// intra-community edges from one member fails to reach every member.
/// Empty communities do not exist by construction and are never reported.
pub fn audit_connectivity(g: &Graph, membership: &[u32]) -> Vec<u32> {
    assert_valid_membership(g, membership);
    let n = g.vertex_count();
    let mut size = vec![0usize; n];
    for &c in membership {
        size[c as usize] += 1;
    }
    let mut seed = vec![u32::MAX; n];
    for v in (0..n as u32).rev() {
        seed[membership[v as usize] as usize] = v;
    }

    let mut reached = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    let mut bad = Vec::new();
    for c in 0..n {
        if size[c] == 0 {
            continue;
        }
        let mut count = 0usize;
        queue.clear();
        queue.push_back(seed[c]);
        reached[seed[c] as usize] = true;
        while let Some(v) = queue.pop_front() {
            count += 1;
            for (j, _) in g.neighbors(v) {
                if membership[j as usize] as usize == c && !reached[j as usize] {
                    reached[j as usize] = true;
                    queue.push_back(j);
                }
            }
        }
        if count != size[c] {
            bad.push(c as u32);
        }
    }
    bad
}

/// Sum of vertex weights per community id, the invariant form of the
/// community weights maintained by the engine.
pub fn community_weights(membership: &[u32], vertex_weights: &[f64], len: usize) -> Vec<f64> {
    let mut sigma = vec![0.0f64; len];
    for (v, &c) in membership.iter().enumerate() {
        sigma[c as usize] += vertex_weights[v];
    }
    sigma
}

pub fn partition_stats(g: &Graph, membership: &[u32]) -> PartitionStats {
    assert_valid_membership(g, membership);
    let n = g.vertex_count();
    let mut size = vec![0usize; n];
    for &c in membership {
        size[c as usize] += 1;
    }
    let mut by_size = std::collections::BTreeMap::new();
    let mut community_count = 0;
    for &s in size.iter().filter(|&&s| s > 0) {
        community_count += 1;
        *by_size.entry(s).or_insert(0usize) += 1;
    }
    PartitionStats {
        community_count,
        size_histogram: by_size.into_iter().collect(),
        modularity: modularity(g, membership),
        disconnected_count: audit_connectivity(g, membership).len(),
    }
}
