//! Greedy construction of a coding tree of fixed height.
//!
//! Three stages run in order:
//!
//! 1. **Merge.** Starting from the star tree, repeatedly MERGE the pair of
//!    root children with the largest entropy reduction until the root has at
//!    most two children. Only pairs joined by an edge can reduce entropy, so
//!    candidates live in a max-heap fed from cluster adjacency. When no pair
//!    has a positive gain (disconnected input) the first two root children in
//!    canonical order are merged.
//!
//!    Adjacency maps are merged small into large. Neighbours of the larger
//!    side keep their old heap entries: the merged volume only grows, so
//!    those gains can only drop and the stale entries are upper bounds. An
//!    entry is re-scored when it reaches the top and accepted only if its
//!    score is current.
//! 2. **Remove.** While the tree is taller than `k`, REMOVE the internal node
//!    whose removal increases entropy the least. Costs are kept in a
//!    min-heap with per-node versions; stale entries are skipped on pop.
//!    The tree height is tracked as the maximum leaf depth in a segment tree
//!    over leaves in DFS order, so only the root height is exact during this
//!    stage. Subtree heights are recomputed when it ends.
//! 3. **Fill.** Top-down, FILL every link that crosses more than one layer.
//!    If the tree is still shorter than `k`, unary nodes are inserted above
//!    the leaves. Neither step changes the entropy.
//!
//! Ties are broken by the smallest `(min leaf of first, min leaf of second)`
//! in stage 1, and by smallest min leaf, then smallest arena id, in stage 2.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rustc_hash::FxHashMap;

use crate::entropy::{merge_gain, remove_cost, LogBase};
use crate::error::{Result, SepError};
use crate::graph::Graph;

use super::{CodingTree, NodeId, NodeStats};

#[derive(Debug, Clone, Copy, Default)]
pub struct BuildOptions {
    /// Base used when scoring edits. Any base yields the same tree up to
    /// floating-point ties.
    pub log_base: LogBase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Merge,
    Remove,
    Fill,
    Pad,
    Done,
}

/// One edit performed by the builder. Ids are arena ids of the tree as it
/// stood at that moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    Merge {
        a: NodeId,
        b: NodeId,
        merged: NodeId,
        gain: f64,
        /// Another candidate had exactly the same gain.
        tied: bool,
    },
    Remove {
        node: NodeId,
        cost: f64,
        tied: bool,
    },
    Fill {
        node: NodeId,
        inserted: NodeId,
    },
    /// Unary node inserted above a leaf to reach the requested height.
    Pad {
        leaf: NodeId,
        inserted: NodeId,
    },
}

/// Counters collected during a build.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BuildTrace {
    pub merges: usize,
    pub removes: usize,
    pub fills: usize,
    pub pads: usize,
    /// Merge or remove selections whose best score was shared.
    pub ties: usize,
    /// Height after stage 1.
    pub merged_height: usize,
    /// Internal nodes present when stage 2 started.
    pub internal_after_merge: usize,
}

impl BuildTrace {
    pub fn tie_free(&self) -> bool {
        self.ties == 0
    }
}

#[derive(Debug, Clone, Copy)]
struct MergeCandidate {
    gain: f64,
    key: (u32, u32),
    /// Cluster handles.
    a: u32,
    b: u32,
}

impl PartialEq for MergeCandidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for MergeCandidate {}
impl PartialOrd for MergeCandidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for MergeCandidate {
    // max-heap: larger gain first, then smaller key
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.key.cmp(&self.key))
    }
}

#[derive(Debug, Clone, Copy)]
struct RemoveCandidate {
    cost: f64,
    min_leaf: usize,
    node: NodeId,
    version: u32,
}

impl PartialEq for RemoveCandidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for RemoveCandidate {}
impl PartialOrd for RemoveCandidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for RemoveCandidate {
    // max-heap over the reversed order: smallest cost, min leaf, id first
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.min_leaf.cmp(&self.min_leaf))
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Leaf depths in DFS order with range add and global max. A removal lowers
/// the depth of a contiguous block of leaves.
struct LeafDepths {
    /// `[lo, hi)` leaf positions under each arena node.
    span: Vec<(usize, usize)>,
    size: usize,
    max: Vec<i64>,
    add: Vec<i64>,
}

impl LeafDepths {
    fn new(tree: &CodingTree) -> Self {
        let n = tree.leaf_count();
        let mut span = vec![(0, 0); tree.arena_len()];
        let mut depth = vec![0i64; n];
        let mut next = 0;
        let mut stack = vec![(tree.root(), 0i64, false)];
        while let Some((v, d, done)) = stack.pop() {
            if done {
                span[v.0].1 = next;
                continue;
            }
            span[v.0].0 = next;
            if tree.is_leaf(v) {
                depth[next] = d;
                next += 1;
                span[v.0].1 = next;
                continue;
            }
            stack.push((v, d, true));
            let kids: Vec<NodeId> = tree.children(v).collect();
            stack.extend(kids.into_iter().rev().map(|c| (c, d + 1, false)));
        }
        let size = n.next_power_of_two();
        let mut max = vec![i64::MIN / 2; 2 * size];
        max[size..size + n].copy_from_slice(&depth);
        for i in (1..size).rev() {
            max[i] = max[2 * i].max(max[2 * i + 1]);
        }
        LeafDepths {
            span,
            size,
            max,
            add: vec![0; 2 * size],
        }
    }

    fn lower(&mut self, v: NodeId) {
        let (lo, hi) = self.span[v.0];
        let (mut l, mut r) = (lo + self.size, hi + self.size);
        let (l0, r0) = (l, r - 1);
        while l < r {
            if l & 1 == 1 {
                self.apply(l);
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                self.apply(r);
            }
            l >>= 1;
            r >>= 1;
        }
        self.pull(l0);
        self.pull(r0);
    }

    fn apply(&mut self, i: usize) {
        self.max[i] -= 1;
        self.add[i] -= 1;
    }

    fn pull(&mut self, mut i: usize) {
        while i > 1 {
            i >>= 1;
            self.max[i] = self.add[i] + self.max[2 * i].max(self.max[2 * i + 1]);
        }
    }

    fn height(&self) -> usize {
        self.max[1] as usize
    }
}

/// Step-wise driver for the three-stage construction.
pub struct TreeBuilder<'g> {
    graph: &'g Graph,
    k: usize,
    base: LogBase,
    tree: CodingTree,
    stage: Stage,
    trace: BuildTrace,

    /// Edge weight from each root-child cluster to the others, by handle.
    /// Never iterated where order could leak into the result.
    adjacency: Vec<FxHashMap<usize, f64>>,
    /// Tree node currently holding each handle; `None` once absorbed.
    node_of: Vec<Option<NodeId>>,
    /// Handle of each arena node that is or was a root child.
    handle_of: Vec<usize>,
    merge_heap: BinaryHeap<MergeCandidate>,

    child_cut_sum: Vec<f64>,
    version: Vec<u32>,
    depths: Option<LeafDepths>,
    remove_heap: BinaryHeap<RemoveCandidate>,

    fill_queue: VecDeque<NodeId>,
    fill_cursor: Option<NodeId>,
    pad_cursor: usize,
    pads_left: usize,
}

impl<'g> TreeBuilder<'g> {
    pub fn new(graph: &'g Graph, k: usize, options: BuildOptions) -> Result<Self> {
        if k <= 1 {
            return Err(SepError::domain(format!(
                "tree height k must be greater than 1, got {k}; use the star tree for k = 1"
            )));
        }
        if graph.edge_count() == 0 || graph.total_volume() <= 0.0 {
            return Err(SepError::domain("graph has no edges (or only zero weights)"));
        }
        let n = graph.node_count();
        if n >= u32::MAX as usize {
            return Err(SepError::domain(format!("graph has {n} nodes, more than the builder supports")));
        }
        let tree = CodingTree::star(graph);
        let total = graph.total_volume();
        let adjacency: Vec<FxHashMap<usize, f64>> = (0..n)
            .map(|u| graph.neighbors(u).collect())
            .collect();
        let node_of = (0..n).map(|u| Some(NodeId(u))).collect();
        // the root slot gets no handle
        let mut handle_of: Vec<usize> = (0..n).collect();
        handle_of.push(usize::MAX);
        let mut merge_heap = BinaryHeap::with_capacity(graph.edge_count());
        for e in graph.edges() {
            merge_heap.push(MergeCandidate {
                gain: merge_gain(e.w, graph.degree(e.u), graph.degree(e.v), total, options.log_base),
                key: (e.u as u32, e.v as u32),
                a: e.u as u32,
                b: e.v as u32,
            });
        }
        Ok(TreeBuilder {
            graph,
            k,
            base: options.log_base,
            tree,
            stage: Stage::Merge,
            trace: BuildTrace::default(),
            adjacency,
            node_of,
            handle_of,
            merge_heap,
            child_cut_sum: Vec::new(),
            version: Vec::new(),
            depths: None,
            remove_heap: BinaryHeap::new(),
            fill_queue: VecDeque::new(),
            fill_cursor: None,
            pad_cursor: 0,
            pads_left: 0,
        })
    }

    /// The tree in its current, possibly intermediate, state.
    pub fn tree(&self) -> &CodingTree {
        &self.tree
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn trace(&self) -> &BuildTrace {
        &self.trace
    }

    pub fn target_height(&self) -> usize {
        self.k
    }

    /// Performs the next edit, or returns `None` once the tree is finished.
    pub fn step(&mut self) -> Option<Step> {
        loop {
            let next = match self.stage {
                Stage::Merge => self.merge_step(),
                Stage::Remove => self.remove_step(),
                Stage::Fill => self.fill_step(),
                Stage::Pad => self.pad_step(),
                Stage::Done => return None,
            };
            if next.is_some() {
                return next;
            }
        }
    }

    /// Runs every remaining step and returns the compacted tree.
    pub fn finish(mut self) -> (CodingTree, BuildTrace) {
        while self.step().is_some() {}
        let mut tree = self.tree;
        tree.compact();
        debug_assert_eq!(tree.height(), self.k);
        (tree, self.trace)
    }

    /// Current score of a candidate pair, or `None` if either side is gone.
    fn rescore(&self, a: usize, b: usize) -> Option<MergeCandidate> {
        let (na, nb) = (self.node_of[a]?, self.node_of[b]?);
        let w = *self.adjacency[a].get(&b)?;
        let (ka, kb) = (self.tree.min_leaf(na), self.tree.min_leaf(nb));
        Some(MergeCandidate {
            gain: merge_gain(
                w,
                self.tree.stats(na).volume,
                self.tree.stats(nb).volume,
                self.graph.total_volume(),
                self.base,
            ),
            key: (ka.min(kb) as u32, ka.max(kb) as u32),
            a: a as u32,
            b: b as u32,
        })
    }

    /// Pops dead entries and re-scores stale ones until the top is current.
    fn settle_merge_heap(&mut self) {
        while let Some(top) = self.merge_heap.peek().copied() {
            match self.rescore(top.a as usize, top.b as usize) {
                Some(now) if now.gain.to_bits() == top.gain.to_bits() && now.key == top.key => return,
                Some(now) => {
                    *self.merge_heap.peek_mut().unwrap() = now;
                }
                None => {
                    self.merge_heap.pop();
                }
            }
        }
    }

    fn merge_step(&mut self) -> Option<Step> {
        let root = self.tree.root();
        if self.tree.child_count(root) <= 2 {
            self.begin_remove();
            return None;
        }
        self.settle_merge_heap();
        let total = self.graph.total_volume();

        let (ha, hb, gain, tied) = match self.merge_heap.peek() {
            Some(top) if top.gain > 0.0 => {
                let best = self.merge_heap.pop().unwrap();
                let pair = (best.a.min(best.b), best.a.max(best.b));
                loop {
                    self.settle_merge_heap();
                    match self.merge_heap.peek() {
                        Some(c) if (c.a.min(c.b), c.a.max(c.b)) == pair => {
                            self.merge_heap.pop();
                        }
                        _ => break,
                    }
                }
                let tied = self.merge_heap.peek().is_some_and(|c| c.gain == best.gain);
                (best.a as usize, best.b as usize, best.gain, tied)
            }
            _ => {
                // every pair scores zero: take the first two in canonical order
                let mut kids = self.tree.children(root);
                let (a, b) = (kids.next().unwrap(), kids.next().unwrap());
                let (ha, hb) = (self.handle_of[a.0], self.handle_of[b.0]);
                let w = self.adjacency[ha].get(&hb).copied().unwrap_or(0.0);
                let (va, vb) = (self.tree.stats(a).volume, self.tree.stats(b).volume);
                let gain = merge_gain(w, va, vb, total, self.base);
                let tied = self.tree.child_count(root) > 2;
                (ha, hb, gain, tied)
            }
        };
        let (a, b) = (self.node_of[ha].unwrap(), self.node_of[hb].unwrap());

        let w_ab = self.adjacency[ha].remove(&hb).unwrap_or(0.0);
        self.adjacency[hb].remove(&ha);
        let (keep, gone) = if self.adjacency[ha].len() >= self.adjacency[hb].len() {
            (ha, hb)
        } else {
            (hb, ha)
        };
        let small = std::mem::take(&mut self.adjacency[gone]);
        let (sa, sb) = (self.tree.stats(a), self.tree.stats(b));
        let volume = sa.volume + sb.volume;
        let mut merged = std::mem::take(&mut self.adjacency[keep]);
        let cut = if merged.is_empty() && small.is_empty() {
            0.0
        } else {
            (sa.cut + sb.cut - 2.0 * w_ab).max(0.0)
        };
        let e = self.tree.merge_unchecked(a, b, NodeStats { volume, cut });
        debug_assert_eq!(e.0, self.handle_of.len());
        self.handle_of.push(keep);
        self.node_of[keep] = Some(e);
        self.node_of[gone] = None;

        let touched: Vec<usize> = small.keys().copied().collect();
        for (c, w) in small {
            let entry = merged.entry(c).or_insert(0.0);
            *entry += w;
            let nbr = &mut self.adjacency[c];
            nbr.remove(&gone);
            nbr.insert(keep, *entry);
        }
        self.adjacency[keep] = merged;
        for c in touched {
            if let Some(cand) = self.rescore(keep, c) {
                self.merge_heap.push(cand);
            }
        }

        self.trace.merges += 1;
        self.trace.ties += usize::from(tied);
        Some(Step::Merge {
            a,
            b,
            merged: e,
            gain,
            tied,
        })
    }

    fn begin_remove(&mut self) {
        self.adjacency = Vec::new();
        self.node_of = Vec::new();
        self.handle_of = Vec::new();
        self.merge_heap = BinaryHeap::new();
        self.trace.merged_height = self.tree.height();

        let len = self.tree.arena_len();
        self.child_cut_sum = vec![0.0; len];
        self.version = vec![0; len];
        let internal: Vec<NodeId> = self.tree.internal_nodes().collect();
        self.trace.internal_after_merge = internal.len();
        for v in self.tree.node_ids() {
            if !self.tree.is_leaf(v) {
                self.child_cut_sum[v.0] = self.tree.children(v).map(|c| self.tree.stats(c).cut).sum();
            }
        }
        for v in internal {
            self.push_remove(v);
        }
        self.depths = Some(LeafDepths::new(&self.tree));
        self.stage = Stage::Remove;
    }

    fn push_remove(&mut self, v: NodeId) {
        let parent = self.tree.parent(v).expect("internal node has a parent");
        let s = self.tree.stats(v);
        let cost = remove_cost(
            self.child_cut_sum[v.0] - s.cut,
            s.volume,
            self.tree.stats(parent).volume,
            self.graph.total_volume(),
            self.base,
        );
        self.remove_heap.push(RemoveCandidate {
            cost,
            min_leaf: self.tree.min_leaf(v),
            node: v,
            version: self.version[v.0],
        });
    }

    fn drop_stale_removes(&mut self) {
        while let Some(top) = self.remove_heap.peek() {
            if self.tree.contains(top.node) && self.version[top.node.0] == top.version {
                return;
            }
            self.remove_heap.pop();
        }
    }

    fn remove_step(&mut self) -> Option<Step> {
        if self.tree.height() <= self.k {
            self.begin_fill();
            return None;
        }
        self.drop_stale_removes();
        let best = self
            .remove_heap
            .pop()
            .expect("a tree taller than 2 has an internal node");
        self.drop_stale_removes();
        let tied = self.remove_heap.peek().is_some_and(|c| c.cost == best.cost);

        let v = best.node;
        let parent = self.tree.parent(v).unwrap();
        let children: Vec<NodeId> = self.tree.children(v).collect();
        self.child_cut_sum[parent.0] =
            self.child_cut_sum[parent.0] - self.tree.stats(v).cut + self.child_cut_sum[v.0];
        let depths = self.depths.as_mut().expect("stage 2 tracks leaf depths");
        depths.lower(v);
        let height = depths.height();
        self.tree.detach(v).expect("candidate is a live internal node");
        self.tree.set_root_height(height);

        if parent != self.tree.root() {
            self.version[parent.0] += 1;
            self.push_remove(parent);
        }
        for c in children {
            if !self.tree.is_leaf(c) {
                self.version[c.0] += 1;
                self.push_remove(c);
            }
        }

        self.trace.removes += 1;
        self.trace.ties += usize::from(tied);
        Some(Step::Remove {
            node: v,
            cost: best.cost,
            tied,
        })
    }

    fn begin_fill(&mut self) {
        self.depths = None;
        self.tree.recompute_heights();
        self.remove_heap = BinaryHeap::new();
        self.child_cut_sum = Vec::new();
        self.version = Vec::new();
        let root = self.tree.root();
        self.fill_queue = self.tree.children(root).collect();
        self.fill_cursor = None;
        self.stage = Stage::Fill;
    }

    fn needs_fill(&self, v: NodeId) -> bool {
        let parent = self.tree.parent(v).unwrap();
        self.tree.subtree_height(parent) > self.tree.subtree_height(v) + 1
    }

    fn fill_step(&mut self) -> Option<Step> {
        loop {
            if let Some(v) = self.fill_cursor {
                if self.needs_fill(v) {
                    let inserted = self.tree.fill(v).expect("link crosses a layer");
                    self.fill_cursor = Some(inserted);
                    self.trace.fills += 1;
                    return Some(Step::Fill { node: v, inserted });
                }
                self.fill_cursor = None;
            }
            match self.fill_queue.pop_front() {
                Some(v) => {
                    self.fill_queue.extend(self.tree.children(v));
                    self.fill_cursor = Some(v);
                }
                None => {
                    self.stage = Stage::Pad;
                    self.pad_cursor = 0;
                    let short = self.k.saturating_sub(self.tree.height());
                    self.pads_left = short * self.tree.leaf_count();
                    return None;
                }
            }
        }
    }

    fn pad_step(&mut self) -> Option<Step> {
        if self.pads_left == 0 {
            self.stage = Stage::Done;
            return None;
        }
        // each pass over the leaves lifts all of them by one level
        let leaf = NodeId(self.pad_cursor);
        let inserted = self.tree.insert_above(leaf);
        self.pad_cursor = (self.pad_cursor + 1) % self.tree.leaf_count();
        self.pads_left -= 1;
        self.trace.pads += 1;
        Some(Step::Pad { leaf, inserted })
    }
}

/// Builds a coding tree of height exactly `k` with entropy scored in bits.
pub fn build_coding_tree(graph: &Graph, k: usize) -> Result<CodingTree> {
    build_coding_tree_with(graph, k, BuildOptions::default())
}

pub fn build_coding_tree_with(graph: &Graph, k: usize, options: BuildOptions) -> Result<CodingTree> {
    Ok(TreeBuilder::new(graph, k, options)?.finish().0)
}

pub fn build_coding_tree_traced(graph: &Graph, k: usize) -> Result<(CodingTree, BuildTrace)> {
    Ok(TreeBuilder::new(graph, k, BuildOptions::default())?.finish())
}
