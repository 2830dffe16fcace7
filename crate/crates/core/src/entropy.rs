//! Structural entropy of a graph under a coding tree, and the closed-form
//! entropy changes of the MERGE and REMOVE edits.
//!
//! Every nonroot node `v` contributes `-(g_v / vol(V)) * log(vol(v) / vol(parent))`
//! where `g_v` is its cut. Terms with a zero cut or a zero volume are 0.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SepError};
use crate::graph::Graph;
use crate::tree::{CodingTree, NodeId};

/// Logarithm base of the reported entropy. Changing it rescales every value
/// by a constant factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    /// Base 2.
    #[default]
    Bits,
    /// Base e.
    Nats,
}

impl LogBase {
    #[inline]
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Bits => x.log2(),
            LogBase::Nats => x.ln(),
        }
    }
}

/// Per-node and total entropy. Keys of `terms` are tree node ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub total: f64,
    pub terms: BTreeMap<usize, f64>,
}

impl EntropyReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Contribution of one nonroot node.
#[inline]
pub fn node_term(cut: f64, volume: f64, parent_volume: f64, total_volume: f64, base: LogBase) -> f64 {
    if cut == 0.0 || volume == 0.0 {
        return 0.0;
    }
    -(cut / total_volume) * base.log(volume / parent_volume)
}

/// Entropy reduction `H(T) - H(T')` when two root children with volumes
/// `vol_a`, `vol_b` and `weight` between them are merged.
///
/// Only the two merged nodes and the new node change terms, which collapses
/// to `2 w / vol(V) * log(vol(V) / (vol_a + vol_b))`.
#[inline]
pub fn merge_gain(weight: f64, vol_a: f64, vol_b: f64, total_volume: f64, base: LogBase) -> f64 {
    if weight == 0.0 {
        return 0.0;
    }
    2.0 * weight / total_volume * base.log(total_volume / (vol_a + vol_b))
}

/// Entropy increase `H(T') - H(T)` when `v` is removed.
///
/// `internal_cut` is `sum(cut(child)) - cut(v)`, twice the weight running
/// between distinct children of `v`. The removed term and the re-parented
/// children's terms combine to `internal_cut / vol(V) * log(vol(parent) / vol(v))`.
#[inline]
pub fn remove_cost(internal_cut: f64, volume: f64, parent_volume: f64, total_volume: f64, base: LogBase) -> f64 {
    if internal_cut == 0.0 || volume == 0.0 {
        return 0.0;
    }
    internal_cut / total_volume * base.log(parent_volume / volume)
}

fn check_pair(graph: &Graph, tree: &CodingTree) -> Result<()> {
    if tree.leaf_count() != graph.node_count() {
        return Err(SepError::structural(format!(
            "tree has {} leaves but graph has {} nodes",
            tree.leaf_count(),
            graph.node_count()
        )));
    }
    let (a, b) = (tree.total_volume(), graph.total_volume());
    if (a - b).abs() > 1e-9 * a.abs().max(b.abs()) {
        return Err(SepError::structural(format!(
            "tree volume {a} does not match graph volume {b}"
        )));
    }
    if b <= 0.0 {
        return Err(SepError::domain("graph has no edges; structural entropy is undefined"));
    }
    Ok(())
}

/// Structural entropy in bits.
pub fn structural_entropy(graph: &Graph, tree: &CodingTree) -> Result<EntropyReport> {
    structural_entropy_in(graph, tree, LogBase::Bits)
}

pub fn structural_entropy_in(graph: &Graph, tree: &CodingTree, base: LogBase) -> Result<EntropyReport> {
    check_pair(graph, tree)?;
    let total_volume = graph.total_volume();
    let mut terms = BTreeMap::new();
    let mut total = 0.0;
    for v in tree.node_ids() {
        let Some(p) = tree.parent(v) else { continue };
        let s = tree.stats(v);
        let term = node_term(s.cut, s.volume, tree.stats(p).volume, total_volume, base);
        terms.insert(v.0, term);
        total += term;
    }
    Ok(EntropyReport { total, terms })
}

/// Entropy of the height-1 star tree, i.e. the Shannon entropy of the
/// degree distribution.
pub fn one_dimensional_entropy(graph: &Graph) -> Result<f64> {
    Ok(structural_entropy(graph, &CodingTree::star(graph))?.total)
}

/// `H(T) - H(MERGE(a, b))` in bits without rebuilding the tree.
pub fn delta_merge(graph: &Graph, tree: &CodingTree, a: NodeId, b: NodeId) -> Result<f64> {
    check_pair(graph, tree)?;
    tree.check_merge(a, b)?;
    let w = tree.weight_between(graph, a, b);
    Ok(merge_gain(
        w,
        tree.stats(a).volume,
        tree.stats(b).volume,
        graph.total_volume(),
        LogBase::Bits,
    ))
}

/// `H(REMOVE(v)) - H(T)` in bits without rebuilding the tree.
pub fn delta_remove(graph: &Graph, tree: &CodingTree, v: NodeId) -> Result<f64> {
    check_pair(graph, tree)?;
    if !tree.contains(v) {
        return Err(SepError::structural(format!("node {v} is not in the tree")));
    }
    let Some(parent) = tree.parent(v) else {
        return Err(SepError::structural("the root cannot be removed"));
    };
    if tree.is_leaf(v) {
        return Err(SepError::structural(format!("leaf {v} cannot be removed")));
    }
    let child_cuts: f64 = tree.children(v).map(|c| tree.stats(c).cut).sum();
    let s = tree.stats(v);
    Ok(remove_cost(
        child_cuts - s.cut,
        s.volume,
        tree.stats(parent).volume,
        graph.total_volume(),
        LogBase::Bits,
    ))
}
