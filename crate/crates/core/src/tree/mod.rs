//! Coding trees: rooted trees whose leaves are the graph's nodes and whose
//! internal nodes denote clusters of their leaf descendants.
//!
//! The tree lives in an arena. Leaves always occupy ids `0..n` and leaf `i`
//! is graph node `i`. Edits leave tombstones behind; [`CodingTree::compact`]
//! renumbers the surviving nodes.

mod build;
mod json;
mod oracle;

pub use build::{build_coding_tree, build_coding_tree_traced, build_coding_tree_with, BuildOptions, BuildTrace, Stage, Step, TreeBuilder};
pub use json::{NodeDocument, TreeDocument};
pub use oracle::{brute_force_optimal, leveled_entropy, BRUTE_FORCE_MAX_NODES};

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SepError};
use crate::graph::Graph;

/// Arena index of a tree node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Volume and cut of the leaf set under a tree node.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NodeStats {
    /// Sum of weighted degrees of the leaf descendants.
    pub volume: f64,
    /// Total weight of edges with exactly one endpoint among the leaf
    /// descendants.
    pub cut: f64,
}

#[derive(Debug, Clone)]
pub struct TreeNode {
    parent: Option<NodeId>,
    /// Keyed by each child's smallest leaf id, which keeps siblings in
    /// canonical order.
    children: BTreeMap<usize, NodeId>,
    stats: NodeStats,
    min_leaf: usize,
    /// Longest downward path to a leaf, in edges.
    height: usize,
    alive: bool,
}

impl TreeNode {
    fn leaf(id: usize, volume: f64) -> Self {
        TreeNode {
            parent: None,
            children: BTreeMap::new(),
            stats: NodeStats { volume, cut: volume },
            min_leaf: id,
            height: 0,
            alive: true,
        }
    }

    pub fn parent(&self) -> Option<NodeId> {
        self.parent
    }

    pub fn children(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.children.values().copied()
    }

    pub fn stats(&self) -> NodeStats {
        self.stats
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn min_leaf(&self) -> usize {
        self.min_leaf
    }
}

#[derive(Debug, Clone)]
pub struct CodingTree {
    nodes: Vec<TreeNode>,
    root: NodeId,
    leaf_count: usize,
    total_volume: f64,
}

impl CodingTree {
    /// Height-1 tree: every graph node hangs directly off the root.
    pub fn star(graph: &Graph) -> Self {
        let n = graph.node_count();
        let mut nodes: Vec<TreeNode> = (0..n).map(|v| TreeNode::leaf(v, graph.degree(v))).collect();
        let root = NodeId(n);
        for leaf in &mut nodes {
            leaf.parent = Some(root);
        }
        nodes.push(TreeNode {
            parent: None,
            children: (0..n).map(|v| (v, NodeId(v))).collect(),
            stats: NodeStats {
                volume: graph.total_volume(),
                cut: 0.0,
            },
            min_leaf: 0,
            height: usize::from(n > 0),
            alive: true,
        });
        CodingTree {
            nodes,
            root,
            leaf_count: n,
            total_volume: graph.total_volume(),
        }
    }

    /// Builds a tree from a parent array and recomputes every node's
    /// statistics from the graph's edges.
    ///
    /// Entries `0..n` are the leaves for graph nodes `0..n`; exactly one entry
    /// is `None` (the root), which must lie at index `n` or above. Every
    /// non-leaf must have at least one child.
    pub fn from_parents(graph: &Graph, parents: &[Option<usize>]) -> Result<Self> {
        let n = graph.node_count();
        let total = parents.len();
        if total <= n {
            return Err(SepError::structural(format!(
                "{total} tree nodes cannot hold {n} leaves plus a root"
            )));
        }
        let mut root = None;
        for (i, p) in parents.iter().enumerate() {
            match p {
                None if root.is_some() => {
                    return Err(SepError::structural("tree has more than one root"))
                }
                None => root = Some(i),
                Some(p) if *p >= total => {
                    return Err(SepError::structural(format!(
                        "node {i} has parent {p} outside the arena"
                    )))
                }
                Some(p) if *p < n => {
                    return Err(SepError::structural(format!(
                        "node {i} has leaf {p} as its parent"
                    )))
                }
                Some(_) => {}
            }
        }
        let root = root.ok_or_else(|| SepError::structural("tree has no root"))?;
        if root < n {
            return Err(SepError::structural("a leaf cannot be the root"));
        }

        let mut nodes: Vec<TreeNode> = (0..total)
            .map(|i| {
                let mut node = TreeNode::leaf(i, if i < n { graph.degree(i) } else { 0.0 });
                node.parent = parents[i].map(NodeId);
                if i >= n {
                    node.stats = NodeStats::default();
                    node.min_leaf = usize::MAX;
                }
                node
            })
            .collect();

        // every node must reach the root without revisiting anything
        let mut depth: Vec<Option<usize>> = vec![None; total];
        depth[root] = Some(0);
        for start in 0..total {
            let mut path = Vec::new();
            let mut x = start;
            while depth[x].is_none() {
                if path.len() > total {
                    return Err(SepError::structural("parent pointers contain a cycle"));
                }
                path.push(x);
                x = parents[x].expect("only the root lacks a parent");
            }
            let mut d = depth[x].unwrap();
            for &y in path.iter().rev() {
                d += 1;
                depth[y] = Some(d);
            }
        }
        let depth: Vec<usize> = depth.into_iter().map(Option::unwrap).collect();

        // bottom-up: volume, min leaf, height
        let mut order: Vec<usize> = (0..total).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(depth[i]));
        for &i in &order {
            if let Some(p) = parents[i] {
                let (vol, min_leaf, h) = (nodes[i].stats.volume, nodes[i].min_leaf, nodes[i].height);
                let parent = &mut nodes[p];
                parent.stats.volume += vol;
                parent.min_leaf = parent.min_leaf.min(min_leaf);
                parent.height = parent.height.max(h + 1);
            }
        }
        for i in 0..total {
            if let Some(p) = parents[i] {
                let key = nodes[i].min_leaf;
                nodes[p].children.insert(key, NodeId(i));
            }
        }
        if let Some(i) = (n..total).find(|&i| nodes[i].children.is_empty()) {
            return Err(SepError::structural(format!(
                "internal node {i} has no leaf descendants"
            )));
        }

        // Each edge adds its weight to the cut of every node strictly below
        // the lowest common ancestor of its endpoints.
        for node in &mut nodes[n..total] {
            node.stats.cut = 0.0;
        }
        for e in graph.edges() {
            let (mut a, mut b) = (e.u, e.v);
            while a != b {
                if depth[a] >= depth[b] {
                    if a >= n {
                        nodes[a].stats.cut += e.w;
                    }
                    a = parents[a].unwrap();
                } else {
                    if b >= n {
                        nodes[b].stats.cut += e.w;
                    }
                    b = parents[b].unwrap();
                }
            }
        }

        Ok(CodingTree {
            nodes,
            root: NodeId(root),
            leaf_count: n,
            total_volume: graph.total_volume(),
        })
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    /// Number of leaves, i.e. graph nodes.
    pub fn leaf_count(&self) -> usize {
        self.leaf_count
    }

    /// Tree leaf holding graph node `v`.
    pub fn leaf_of(&self, v: usize) -> NodeId {
        assert!(v < self.leaf_count, "graph node {v} out of range");
        NodeId(v)
    }

    pub fn total_volume(&self) -> f64 {
        self.total_volume
    }

    /// Number of live nodes, including leaves and root.
    pub fn node_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.alive).count()
    }

    /// Size of the arena, including tombstones.
    pub fn arena_len(&self) -> usize {
        self.nodes.len()
    }

    /// Live node ids in arena order.
    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.alive)
            .map(|(i, _)| NodeId(i))
    }

    /// Live nodes that are neither root nor leaf.
    pub fn internal_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.node_ids()
            .filter(move |&v| v != self.root && !self.is_leaf(v))
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.nodes.get(v.0).is_some_and(|n| n.alive)
    }

    pub fn node(&self, v: NodeId) -> &TreeNode {
        &self.nodes[v.0]
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.nodes[v.0].parent
    }

    /// Children in canonical order (ascending smallest leaf id).
    pub fn children(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes[v.0].children.values().copied()
    }

    pub fn child_count(&self, v: NodeId) -> usize {
        self.nodes[v.0].children.len()
    }

    pub fn stats(&self, v: NodeId) -> NodeStats {
        self.nodes[v.0].stats
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        v.0 < self.leaf_count
    }

    pub fn min_leaf(&self, v: NodeId) -> usize {
        self.nodes[v.0].min_leaf
    }

    /// Height of the whole tree.
    pub fn height(&self) -> usize {
        self.nodes[self.root.0].height
    }

    /// Height of the subtree rooted at `v`.
    pub fn subtree_height(&self, v: NodeId) -> usize {
        self.nodes[v.0].height
    }

    /// Depth of every live node, indexed by arena id (`None` for tombstones).
    pub fn depths(&self) -> Vec<Option<usize>> {
        let mut depth = vec![None; self.nodes.len()];
        let mut queue = VecDeque::from([(self.root, 0usize)]);
        while let Some((v, d)) = queue.pop_front() {
            depth[v.0] = Some(d);
            queue.extend(self.children(v).map(|c| (c, d + 1)));
        }
        depth
    }

    /// Live nodes grouped by depth, each group in breadth-first canonical
    /// order.
    pub fn levels(&self) -> Vec<Vec<NodeId>> {
        let mut levels: Vec<Vec<NodeId>> = Vec::new();
        let mut queue = VecDeque::from([(self.root, 0usize)]);
        while let Some((v, d)) = queue.pop_front() {
            if levels.len() <= d {
                levels.push(Vec::new());
            }
            levels[d].push(v);
            queue.extend(self.children(v).map(|c| (c, d + 1)));
        }
        levels
    }

    /// Graph nodes under `v`, ascending.
    pub fn leaves_under(&self, v: NodeId) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            if self.is_leaf(x) {
                out.push(x.0);
            } else {
                stack.extend(self.children(x));
            }
        }
        out.sort_unstable();
        out
    }

    /// True when every leaf sits at depth `height()`.
    pub fn is_leveled(&self) -> bool {
        let h = self.height();
        let depth = self.depths();
        (0..self.leaf_count).all(|v| depth[v] == Some(h))
    }

    /// The partition of graph nodes induced by the nodes at `depth`, each
    /// block sorted and blocks listed by smallest member. Leaves shallower
    /// than `depth` form singleton blocks.
    pub fn partition_at_depth(&self, depth: usize) -> Vec<Vec<usize>> {
        let mut blocks = Vec::new();
        let mut queue = VecDeque::from([(self.root, 0usize)]);
        while let Some((v, d)) = queue.pop_front() {
            if d == depth || self.is_leaf(v) {
                blocks.push(self.leaves_under(v));
            } else {
                queue.extend(self.children(v).map(|c| (c, d + 1)));
            }
        }
        blocks.sort();
        blocks
    }

    fn check_live(&self, v: NodeId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(SepError::structural(format!("node {v} is not in the tree")))
        }
    }

    fn check_root_child(&self, v: NodeId) -> Result<()> {
        self.check_live(v)?;
        if self.parent(v) != Some(self.root) {
            return Err(SepError::structural(format!("node {v} is not a child of the root")));
        }
        Ok(())
    }

    /// Total edge weight between the leaf sets of `a` and `b`.
    pub fn weight_between(&self, graph: &Graph, a: NodeId, b: NodeId) -> f64 {
        let (a_leaves, b_leaves) = (self.leaves_under(a), self.leaves_under(b));
        let (small, large) = if a_leaves.len() <= b_leaves.len() {
            (a_leaves, b_leaves)
        } else {
            (b_leaves, a_leaves)
        };
        let mut in_large = vec![false; self.leaf_count];
        for &v in &large {
            in_large[v] = true;
        }
        let mut w = 0.0;
        for &u in &small {
            for (x, wx) in graph.neighbors(u) {
                if in_large[x] {
                    w += wx;
                }
            }
        }
        w
    }

    /// MERGE: inserts a new node between the root and two of its children.
    ///
    /// The new node's cut is `cut(a) + cut(b) - 2 w(a, b)`.
    pub fn merge(&mut self, graph: &Graph, a: NodeId, b: NodeId) -> Result<NodeId> {
        self.check_merge(a, b)?;
        let w = self.weight_between(graph, a, b);
        let (sa, sb) = (self.stats(a), self.stats(b));
        let stats = NodeStats {
            volume: sa.volume + sb.volume,
            cut: sa.cut + sb.cut - 2.0 * w,
        };
        Ok(self.merge_unchecked(a, b, stats))
    }

    pub(crate) fn check_merge(&self, a: NodeId, b: NodeId) -> Result<()> {
        if a == b {
            return Err(SepError::structural("cannot merge a node with itself"));
        }
        self.check_root_child(a)?;
        self.check_root_child(b)
    }

    pub(crate) fn merge_unchecked(&mut self, a: NodeId, b: NodeId, stats: NodeStats) -> NodeId {
        let id = NodeId(self.nodes.len());
        let root = self.root;
        let (ka, kb) = (self.min_leaf(a), self.min_leaf(b));
        let height = 1 + self.subtree_height(a).max(self.subtree_height(b));
        let root_node = &mut self.nodes[root.0];
        root_node.children.remove(&ka);
        root_node.children.remove(&kb);
        root_node.children.insert(ka.min(kb), id);
        root_node.height = root_node.height.max(height + 1);
        self.nodes[a.0].parent = Some(id);
        self.nodes[b.0].parent = Some(id);
        self.nodes.push(TreeNode {
            parent: Some(root),
            children: BTreeMap::from([(ka, a), (kb, b)]),
            stats,
            min_leaf: ka.min(kb),
            height,
            alive: true,
        });
        id
    }

    /// REMOVE: deletes an internal node and hands its children to its parent.
    /// Statistics of every remaining node are unchanged.
    pub fn remove(&mut self, v: NodeId) -> Result<()> {
        self.remove_inner(v, true)
    }

    /// REMOVE without height upkeep. Subtree heights are stale until
    /// [`recompute_heights`](Self::recompute_heights) runs; the caller is
    /// responsible for the root height.
    pub(crate) fn detach(&mut self, v: NodeId) -> Result<()> {
        self.remove_inner(v, false)
    }

    pub(crate) fn set_root_height(&mut self, h: usize) {
        self.nodes[self.root.0].height = h;
    }

    /// Recomputes every subtree height bottom-up.
    pub(crate) fn recompute_heights(&mut self) {
        let mut stack = vec![(self.root, false)];
        while let Some((v, done)) = stack.pop() {
            if done {
                let h = self
                    .children(v)
                    .map(|c| self.nodes[c.0].height + 1)
                    .max()
                    .unwrap_or(0);
                self.nodes[v.0].height = h;
            } else {
                stack.push((v, true));
                stack.extend(self.children(v).map(|c| (c, false)));
            }
        }
    }

    fn remove_inner(&mut self, v: NodeId, keep_heights: bool) -> Result<()> {
        self.check_live(v)?;
        if v == self.root {
            return Err(SepError::structural("cannot remove the root"));
        }
        if self.is_leaf(v) {
            return Err(SepError::structural(format!("cannot remove leaf {v}")));
        }
        let parent = self.parent(v).expect("non-root node has a parent");
        let key = self.min_leaf(v);
        let was_tallest = self.subtree_height(v) + 1 == self.subtree_height(parent);
        let children = std::mem::take(&mut self.nodes[v.0].children);
        let node = &mut self.nodes[v.0];
        node.alive = false;
        node.parent = None;
        self.nodes[parent.0].children.remove(&key);
        for (k, c) in children {
            self.nodes[c.0].parent = Some(parent);
            self.nodes[parent.0].children.insert(k, c);
        }
        if keep_heights && was_tallest {
            self.refresh_heights_from(parent);
        }
        Ok(())
    }

    /// Recomputes the height of `v` from its children and walks upward while
    /// heights keep changing.
    fn refresh_heights_from(&mut self, mut v: NodeId) {
        loop {
            let h = self
                .children(v)
                .map(|c| self.subtree_height(c) + 1)
                .max()
                .unwrap_or(0);
            let old = self.nodes[v.0].height;
            if h == old {
                return;
            }
            self.nodes[v.0].height = h;
            match self.parent(v) {
                Some(p) if old + 1 == self.subtree_height(p) || h + 1 > self.subtree_height(p) => v = p,
                _ => return,
            }
        }
    }

    /// FILL: splices a node with identical statistics between `v` and its
    /// parent. Requires `height(parent) - height(v) > 1`.
    pub fn fill(&mut self, v: NodeId) -> Result<NodeId> {
        self.check_live(v)?;
        let parent = self
            .parent(v)
            .ok_or_else(|| SepError::structural("cannot fill above the root"))?;
        if self.subtree_height(parent) <= self.subtree_height(v) + 1 {
            return Err(SepError::structural(format!(
                "link {v} -> {parent} does not cross a layer (heights {} and {})",
                self.subtree_height(v),
                self.subtree_height(parent)
            )));
        }
        Ok(self.insert_above(v))
    }

    /// Splices a node with `v`'s statistics between `v` and its parent,
    /// without any precondition beyond `v` not being the root.
    pub(crate) fn insert_above(&mut self, v: NodeId) -> NodeId {
        let parent = self.parent(v).expect("insert_above needs a parent");
        let id = NodeId(self.nodes.len());
        let key = self.min_leaf(v);
        let height = self.subtree_height(v) + 1;
        self.nodes.push(TreeNode {
            parent: Some(parent),
            children: BTreeMap::from([(key, v)]),
            stats: self.stats(v),
            min_leaf: key,
            height,
            alive: true,
        });
        self.nodes[v.0].parent = Some(id);
        self.nodes[parent.0].children.insert(key, id);
        if height + 1 > self.subtree_height(parent) {
            self.refresh_heights_from(parent);
        }
        id
    }

    /// Drops tombstones and renumbers live nodes in arena order. Leaves keep
    /// their ids. Returns the old-to-new id map.
    pub fn compact(&mut self) -> Vec<Option<NodeId>> {
        let mut map = vec![None; self.nodes.len()];
        let mut next = 0;
        for (i, n) in self.nodes.iter().enumerate() {
            if n.alive {
                map[i] = Some(NodeId(next));
                next += 1;
            }
        }
        let old = std::mem::take(&mut self.nodes);
        self.nodes = old
            .into_iter()
            .filter(|n| n.alive)
            .map(|mut n| {
                n.parent = n.parent.map(|p| map[p.0].expect("parent is live"));
                for c in n.children.values_mut() {
                    *c = map[c.0].expect("child is live");
                }
                n
            })
            .collect();
        self.root = map[self.root.0].expect("root is live");
        map
    }

    /// Parent array in arena order, suitable for [`CodingTree::from_parents`]
    /// once the tree is compact.
    pub fn parent_array(&self) -> Vec<Option<usize>> {
        self.nodes.iter().map(|n| n.parent.map(|p| p.0)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> Graph {
        Graph::from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]).unwrap()
    }

    fn k2() -> Graph {
        Graph::from_edges(2, [(0, 1, 1.0)]).unwrap()
    }

    #[test]
    fn star_shape() {
        let t = CodingTree::star(&c4());
        assert_eq!(t.height(), 1);
        assert_eq!(t.child_count(t.root()), 4);
        assert_eq!(t.stats(t.root()).volume, 8.0);
        assert_eq!(t.stats(NodeId(2)).cut, 2.0);
    }

    #[test]
    fn merge_k2_leaves() {
        let g = k2();
        let mut t = CodingTree::star(&g);
        let e = t.merge(&g, NodeId(0), NodeId(1)).unwrap();
        assert_eq!(t.children(t.root()).collect::<Vec<_>>(), vec![e]);
        assert_eq!(t.stats(e), NodeStats { volume: 2.0, cut: 0.0 });
        assert_eq!(t.height(), 2);
    }

    #[test]
    fn merge_c4_pair() {
        let g = c4();
        let mut t = CodingTree::star(&g);
        let e = t.merge(&g, NodeId(0), NodeId(1)).unwrap();
        assert_eq!(t.stats(e), NodeStats { volume: 4.0, cut: 2.0 });
        let kids: Vec<_> = t.children(t.root()).collect();
        assert_eq!(kids, vec![e, NodeId(2), NodeId(3)]);
    }

    #[test]
    fn merge_preconditions() {
        let g = c4();
        let mut t = CodingTree::star(&g);
        assert!(t.merge(&g, NodeId(0), NodeId(0)).is_err());
        let e = t.merge(&g, NodeId(0), NodeId(1)).unwrap();
        assert!(matches!(t.merge(&g, NodeId(0), NodeId(2)), Err(SepError::Structural(_))));
        assert!(t.merge(&g, e, NodeId(99)).is_err());
    }

    #[test]
    fn remove_chain_node() {
        let g = k2();
        let mut t = CodingTree::star(&g);
        let e = t.merge(&g, NodeId(0), NodeId(1)).unwrap();
        assert_eq!(t.height(), 2);
        t.remove(e).unwrap();
        assert_eq!(t.height(), 1);
        assert_eq!(t.child_count(t.root()), 2);
        assert!(!t.contains(e));
        assert!(t.remove(t.root()).is_err());
        assert!(t.remove(NodeId(0)).is_err());
        assert!(t.remove(e).is_err());
    }

    #[test]
    fn fill_below_root() {
        let g = Graph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let mut t = CodingTree::star(&g);
        t.merge(&g, NodeId(0), NodeId(1)).unwrap();
        assert_eq!(t.height(), 2);
        assert!(!t.is_leveled());
        assert!(t.fill(NodeId(0)).is_err());
        let f = t.fill(NodeId(2)).unwrap();
        assert_eq!(t.stats(f), t.stats(NodeId(2)));
        assert_eq!(t.depths()[2], Some(2));
        assert!(t.is_leveled());
        assert_eq!(t.height(), 2);
    }

    #[test]
    fn from_parents_matches_incremental_stats() {
        let g = c4();
        let mut t = CodingTree::star(&g);
        let a = t.merge(&g, NodeId(0), NodeId(1)).unwrap();
        let b = t.merge(&g, NodeId(2), NodeId(3)).unwrap();
        t.compact();
        let rebuilt = CodingTree::from_parents(&g, &t.parent_array()).unwrap();
        for v in t.node_ids() {
            assert_eq!(t.stats(v), rebuilt.stats(v), "node {v}");
            assert_eq!(t.subtree_height(v), rebuilt.subtree_height(v));
        }
        let _ = (a, b);
        assert_eq!(rebuilt.partition_at_depth(1), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn from_parents_rejects_malformed() {
        let g = k2();
        assert!(CodingTree::from_parents(&g, &[Some(2), Some(2)]).is_err());
        assert!(CodingTree::from_parents(&g, &[Some(2), Some(2), None, None]).is_err());
        assert!(CodingTree::from_parents(&g, &[Some(3), Some(2), Some(3), Some(2)]).is_err());
        assert!(CodingTree::from_parents(&g, &[Some(2), Some(2), None, Some(2)]).is_err());
        assert!(CodingTree::from_parents(&g, &[None, Some(0), Some(0)]).is_err());
        assert!(CodingTree::from_parents(&g, &[Some(2), Some(2), None]).is_ok());
    }

    #[test]
    fn compact_keeps_leaves() {
        let g = c4();
        let mut t = CodingTree::star(&g);
        let a = t.merge(&g, NodeId(0), NodeId(1)).unwrap();
        let b = t.merge(&g, a, NodeId(2)).unwrap();
        t.remove(a).unwrap();
        let map = t.compact();
        assert_eq!(map[0], Some(NodeId(0)));
        assert_eq!(map[a.0], None);
        assert_eq!(t.arena_len(), t.node_count());
        let b = map[b.0].unwrap();
        assert_eq!(t.children(b).collect::<Vec<_>>(), vec![NodeId(0), NodeId(1), NodeId(2)]);
    }
}
