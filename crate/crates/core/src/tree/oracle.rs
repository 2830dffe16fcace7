//! Exhaustive minimum-entropy coding trees for tiny graphs.
//!
//! Any tree of height at most `k` has the same entropy as a leveled tree of
//! height exactly `k` (FILL and unary padding are free), and a leveled tree is
//! a chain of `k - 1` successively coarser partitions. Enumerating every such
//! chain therefore realizes the minimum over all trees of height `k`.

use crate::entropy::{node_term, LogBase};
use crate::error::{Result, SepError};
use crate::graph::Graph;

use super::CodingTree;

pub const BRUTE_FORCE_MAX_NODES: usize = 8;

/// Every set partition of `0..n` as a restricted growth string: `labels[i]`
/// is the block of item `i`, and blocks are numbered by first appearance.
fn for_each_partition(n: usize, mut visit: impl FnMut(&[usize], usize)) {
    if n == 0 {
        visit(&[], 0);
        return;
    }
    let mut labels = vec![0usize; n];
    // max label used among labels[..=i]
    let mut prefix_max = vec![0usize; n];
    loop {
        visit(&labels, prefix_max[n - 1] + 1);
        // advance to the next restricted growth string
        let mut i = n - 1;
        loop {
            if i == 0 {
                return;
            }
            if labels[i] <= prefix_max[i - 1] {
                labels[i] += 1;
                prefix_max[i] = prefix_max[i - 1].max(labels[i]);
                for j in i + 1..n {
                    labels[j] = 0;
                    prefix_max[j] = prefix_max[i];
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Entropy in bits of the leveled tree described by `levels`.
///
/// `levels[0]` maps graph nodes to level-1 clusters, `levels[1]` maps those
/// clusters to level-2 clusters, and so on; the last level's clusters hang
/// off the root. Statistics are recomputed from the edge list at each level.
pub fn leveled_entropy(graph: &Graph, levels: &[Vec<usize>]) -> f64 {
    let vol = graph.total_volume();
    // which cluster each graph node belongs to at the current level
    let mut owner: Vec<usize> = (0..graph.node_count()).collect();
    let mut entity_vol: Vec<f64> = graph.degrees().to_vec();
    let mut entity_cut: Vec<f64> = entity_vol.clone();
    let mut h = 0.0;
    for map in levels {
        let clusters = map.iter().copied().max().map_or(0, |m| m + 1);
        let mut cvol = vec![0.0; clusters];
        for (e, &c) in map.iter().enumerate() {
            cvol[c] += entity_vol[e];
        }
        for (e, &c) in map.iter().enumerate() {
            h += node_term(entity_cut[e], entity_vol[e], cvol[c], vol, LogBase::Bits);
        }
        for o in owner.iter_mut() {
            *o = map[*o];
        }
        let mut ccut = vec![0.0; clusters];
        for e in graph.edges() {
            let (a, b) = (owner[e.u], owner[e.v]);
            if a != b {
                ccut[a] += e.w;
                ccut[b] += e.w;
            }
        }
        entity_vol = cvol;
        entity_cut = ccut;
    }
    for e in 0..entity_vol.len() {
        h += node_term(entity_cut[e], entity_vol[e], vol, vol, LogBase::Bits);
    }
    h
}

fn tree_from_levels(graph: &Graph, levels: &[Vec<usize>]) -> Result<CodingTree> {
    let mut parents: Vec<Option<usize>> = Vec::new();
    let mut offset = 0;
    let mut width = graph.node_count();
    for map in levels {
        let next_offset = offset + width;
        parents.extend(map.iter().map(|&c| Some(next_offset + c)));
        offset = next_offset;
        width = map.iter().copied().max().map_or(0, |m| m + 1);
    }
    let root = offset + width;
    parents.extend(std::iter::repeat_n(Some(root), width));
    parents.push(None);
    CodingTree::from_parents(graph, &parents)
}

/// Minimum-entropy tree of height `k` by exhaustive search.
///
/// Accepts graphs of at most [`BRUTE_FORCE_MAX_NODES`] nodes and
/// `k` in `1..=3`. The first minimizer in enumeration order is returned.
pub fn brute_force_optimal(graph: &Graph, k: usize) -> Result<(CodingTree, f64)> {
    let n = graph.node_count();
    if n > BRUTE_FORCE_MAX_NODES {
        return Err(SepError::domain(format!(
            "exhaustive search is limited to {BRUTE_FORCE_MAX_NODES} nodes, graph has {n}"
        )));
    }
    if !(1..=3).contains(&k) {
        return Err(SepError::domain(format!("exhaustive search supports k in 1..=3, got {k}")));
    }
    if graph.total_volume() <= 0.0 {
        return Err(SepError::domain("graph has no edges; structural entropy is undefined"));
    }

    let mut best: Option<(f64, Vec<Vec<usize>>)> = None;
    let mut consider = |levels: Vec<Vec<usize>>| {
        let h = leveled_entropy(graph, &levels);
        if best.as_ref().is_none_or(|(b, _)| h < *b) {
            best = Some((h, levels));
        }
    };
    match k {
        1 => consider(Vec::new()),
        2 => for_each_partition(n, |p, _| consider(vec![p.to_vec()])),
        _ => for_each_partition(n, |p1, blocks| {
            for_each_partition(blocks, |p2, _| consider(vec![p1.to_vec(), p2.to_vec()]));
        }),
    }
    let (h, levels) = best.expect("at least one partition chain exists");
    let tree = tree_from_levels(graph, &levels)?;
    debug_assert_eq!(tree.height(), k);
    Ok((tree, h))
}
