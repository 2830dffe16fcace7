use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::CodingTree;
use crate::error::{Result, SepError};
use crate::graph::Graph;

/// Serialized form of a coding tree.
///
/// ```json
/// {"height": 2,
///  "nodes": [{"id": 0, "parent": 4, "children": [], "vol": 2.0, "cut": 2.0}, ...],
///  "leaf_of": {"0": 0, "1": 1}}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeDocument {
    pub height: usize,
    pub nodes: Vec<NodeDocument>,
    pub leaf_of: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeDocument {
    pub id: usize,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub vol: f64,
    pub cut: f64,
}

impl CodingTree {
    /// Live nodes in arena order. Compact the tree first for dense ids.
    pub fn to_document(&self) -> TreeDocument {
        let nodes = self
            .node_ids()
            .map(|v| {
                let s = self.stats(v);
                NodeDocument {
                    id: v.0,
                    parent: self.parent(v).map(|p| p.0),
                    children: self.children(v).map(|c| c.0).collect(),
                    vol: s.volume,
                    cut: s.cut,
                }
            })
            .collect();
        TreeDocument {
            height: self.height(),
            nodes,
            leaf_of: (0..self.leaf_count()).map(|v| (v, self.leaf_of(v).0)).collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(&self.to_document())?;
        s.push('\n');
        Ok(s)
    }

    /// Rebuilds a tree from its document. Only the structure is read; all
    /// statistics are recomputed from `graph`.
    pub fn from_document(graph: &Graph, doc: &TreeDocument) -> Result<Self> {
        let n = graph.node_count();
        if doc.leaf_of.len() != n || doc.leaf_of.keys().copied().ne(0..n) {
            return Err(SepError::structural(format!(
                "leaf_of must cover graph nodes 0..{n} exactly"
            )));
        }
        let mut remap: BTreeMap<usize, usize> = BTreeMap::new();
        for (&g, &t) in &doc.leaf_of {
            if remap.insert(t, g).is_some() {
                return Err(SepError::structural(format!("tree node {t} holds two graph nodes")));
            }
        }
        let mut next = n;
        for node in &doc.nodes {
            if let std::collections::btree_map::Entry::Vacant(slot) = remap.entry(node.id) {
                slot.insert(next);
                next += 1;
            }
        }
        if remap.len() != doc.nodes.len() {
            return Err(SepError::structural(
                "leaf_of references nodes missing from the node list",
            ));
        }
        let mut parents = vec![None; next];
        for node in &doc.nodes {
            let id = remap[&node.id];
            parents[id] = match node.parent {
                None => None,
                Some(p) => Some(*remap.get(&p).ok_or_else(|| {
                    SepError::structural(format!("node {} has unknown parent {p}", node.id))
                })?),
            };
        }
        let tree = CodingTree::from_parents(graph, &parents)?;
        if tree.height() != doc.height {
            return Err(SepError::structural(format!(
                "document claims height {} but the tree has height {}",
                doc.height,
                tree.height()
            )));
        }
        Ok(tree)
    }

    pub fn from_json(graph: &Graph, text: &str) -> Result<Self> {
        let doc: TreeDocument = serde_json::from_str(text)?;
        CodingTree::from_document(graph, &doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::build_coding_tree;

    #[test]
    fn round_trip_preserves_structure_and_stats() {
        let (g, _) = crate::graph::make_grid(4, 3).unwrap();
        let t = build_coding_tree(&g, 3).unwrap();
        let text = t.to_json().unwrap();
        let back = CodingTree::from_json(&g, &text).unwrap();
        assert_eq!(back.to_json().unwrap(), text);
    }

    #[test]
    fn shape_of_document() {
        let g = Graph::from_edges(2, [(0, 1, 1.0)]).unwrap();
        let t = CodingTree::star(&g);
        let v: serde_json::Value = serde_json::from_str(&t.to_json().unwrap()).unwrap();
        assert_eq!(v["height"], 1);
        assert_eq!(v["leaf_of"]["1"], 1);
        assert_eq!(v["nodes"][2]["children"], serde_json::json!([0, 1]));
        assert_eq!(v["nodes"][2]["parent"], serde_json::Value::Null);
        assert_eq!(v["nodes"][0]["vol"], 1.0);
    }

    #[test]
    fn rejects_inconsistent_documents() {
        let g = Graph::from_edges(2, [(0, 1, 1.0)]).unwrap();
        let mut doc = CodingTree::star(&g).to_document();
        doc.height = 3;
        assert!(CodingTree::from_document(&g, &doc).is_err());
        let mut doc = CodingTree::star(&g).to_document();
        doc.leaf_of.insert(1, 0);
        assert!(CodingTree::from_document(&g, &doc).is_err());
        let mut doc = CodingTree::star(&g).to_document();
        doc.nodes[0].parent = Some(17);
        assert!(CodingTree::from_document(&g, &doc).is_err());
    }
}
