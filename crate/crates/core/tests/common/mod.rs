//! Test-only oracles and generators. Nothing here calls into the entropy or
//! tree-statistics code paths it is used to check.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use sepool::graph::Graph;
use sepool::tree::{CodingTree, NodeId};

/// Structural entropy straight from the definition: for each nonroot node,
/// collect its leaf set by walking parent pointers, then scan every edge for
/// the cut and sum degrees for the volume. O(nodes * (n + m)).
pub fn naive_entropy(graph: &Graph, tree: &CodingTree) -> f64 {
    let n = graph.node_count();
    let vol_total: f64 = graph.edges().iter().map(|e| 2.0 * e.w).sum();
    let ids: Vec<NodeId> = tree.node_ids().collect();
    let under = |v: NodeId| -> Vec<bool> {
        let mut mask = vec![false; n];
        for (leaf, slot) in mask.iter_mut().enumerate() {
            let mut x = NodeId(leaf);
            loop {
                if x == v {
                    *slot = true;
                    break;
                }
                match tree.parent(x) {
                    Some(p) => x = p,
                    None => break,
                }
            }
        }
        mask
    };
    let stats = |mask: &[bool]| -> (f64, f64) {
        let mut vol = 0.0;
        let mut cut = 0.0;
        for e in graph.edges() {
            if mask[e.u] {
                vol += e.w;
            }
            if mask[e.v] {
                vol += e.w;
            }
            if mask[e.u] != mask[e.v] {
                cut += e.w;
            }
        }
        (vol, cut)
    };
    let mut h = 0.0;
    for &v in &ids {
        let Some(p) = tree.parent(v) else { continue };
        let (vol, cut) = stats(&under(v));
        let (pvol, _) = stats(&under(p));
        if cut > 0.0 && vol > 0.0 {
            h -= cut / vol_total * (vol / pvol).log2();
        }
    }
    h
}

/// Random tree over the graph's nodes: a few rounds of grouping random
/// subsets of the current top-level entities, which leaves cross-layer links
/// and unary nodes in place.
pub fn random_tree<R: Rng>(graph: &Graph, rng: &mut R) -> CodingTree {
    let n = graph.node_count();
    let mut parents: Vec<Option<usize>> = vec![None; n];
    let mut top: Vec<usize> = (0..n).collect();
    let rounds = rng.gen_range(0..4);
    for _ in 0..rounds {
        top.shuffle(rng);
        let take = rng.gen_range(1..=top.len());
        let (grouped, rest) = top.split_at(take);
        let clusters = rng.gen_range(1..=grouped.len());
        let first = parents.len();
        parents.extend(std::iter::repeat_n(None, clusters));
        for (i, &e) in grouped.iter().enumerate() {
            // every cluster gets at least one member
            let c = if i < clusters { i } else { rng.gen_range(0..clusters) };
            parents[e] = Some(first + c);
        }
        let mut next: Vec<usize> = rest.to_vec();
        next.extend(first..first + clusters);
        top = next;
    }
    let root = parents.len();
    for &e in &top {
        parents[e] = Some(root);
    }
    parents.push(None);
    CodingTree::from_parents(graph, &parents).expect("generated tree is valid")
}

/// `G(n, p)` with optional random weights, resampled until it has an edge.
pub fn random_small_graph<R: Rng>(rng: &mut R, n: usize, p: f64, weighted: bool) -> Graph {
    loop {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen::<f64>() < p {
                    let w = if weighted { rng.gen_range(0.1..5.0) } else { 1.0 };
                    edges.push((u, v, w));
                }
            }
        }
        if !edges.is_empty() {
            return Graph::from_edges(n, edges).unwrap();
        }
    }
}

/// Connected random graph: a random spanning tree plus extra `G(n, p)` edges.
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, p: f64, weights: impl Fn(&mut R) -> f64) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.push((order[i], order[j]));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    let edges: Vec<(usize, usize, f64)> = {
        let mut seen = std::collections::BTreeSet::new();
        edges
            .into_iter()
            .filter(|&(u, v)| seen.insert((u.min(v), u.max(v))))
            .map(|(u, v)| (u, v, weights(rng)))
            .collect()
    };
    Graph::from_edges(n, edges).unwrap()
}

/// Every connected labeled simple graph on `n` nodes.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &(u, v))| (u, v, 1.0));
        let g = Graph::from_edges(n, edges).unwrap();
        if g.edge_count() > 0 && g.is_connected() {
            out.push(g);
        }
    }
    out
}

pub fn median(sorted: &[f64]) -> f64 {
    quantile(sorted, 0.5)
}

/// Linear-interpolated quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}
