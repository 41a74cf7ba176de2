//! Rooted trees, structure metrics and set proximity.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::num::Rat;

/// Rooted tree stored as a child -> parent map; arcs run root -> leaves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedTree {
    pub root: NodeId,
    pub parent: BTreeMap<NodeId, NodeId>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub node_weight: BTreeMap<NodeId, Rat>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub arc_weight: BTreeMap<NodeId, Rat>,
}

impl RootedTree {
    pub fn new(root: NodeId, parent: BTreeMap<NodeId, NodeId>) -> Result<RootedTree> {
        let tree = RootedTree {
            root,
            parent,
            node_weight: BTreeMap::new(),
            arc_weight: BTreeMap::new(),
        };
        tree.validate()?;
        Ok(tree)
    }

    pub fn validate(&self) -> Result<()> {
        if self.parent.contains_key(&self.root) {
            return Err(Error::validation("root", "root must not have a parent"));
        }
        // every chain of parents must terminate at the root without cycles
        for &start in self.parent.keys() {
            let mut seen = BTreeSet::from([start]);
            let mut v = start;
            while v != self.root {
                let Some(&p) = self.parent.get(&v) else {
                    return Err(Error::validation(
                        format!("parent[{v}]"),
                        "chain does not reach the root",
                    ));
                };
                if !seen.insert(p) {
                    return Err(Error::validation(
                        format!("parent[{start}]"),
                        "parent mapping contains a cycle",
                    ));
                }
                v = p;
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> BTreeSet<NodeId> {
        let mut out: BTreeSet<NodeId> = self.parent.keys().copied().collect();
        out.insert(self.root);
        out
    }

    pub fn node_count(&self) -> usize {
        self.parent.len() + 1
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v == self.root || self.parent.contains_key(&v)
    }

    /// Children of each node, sorted ascending.
    pub fn children_map(&self) -> BTreeMap<NodeId, Vec<NodeId>> {
        let mut map: BTreeMap<NodeId, Vec<NodeId>> =
            self.nodes().into_iter().map(|v| (v, Vec::new())).collect();
        for (&c, &p) in &self.parent {
            map.get_mut(&p).unwrap().push(c);
        }
        map
    }

    pub fn children(&self, v: NodeId) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = self
            .parent
            .iter()
            .filter_map(|(&c, &p)| (p == v).then_some(c))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn leaves(&self) -> Vec<NodeId> {
        let parents: BTreeSet<NodeId> = self.parent.values().copied().collect();
        self.nodes()
            .into_iter()
            .filter(|v| !parents.contains(v))
            .collect()
    }

    /// Depth of every node (root = 0), breadth-first.
    pub fn depths(&self) -> BTreeMap<NodeId, usize> {
        let children = self.children_map();
        let mut out = BTreeMap::from([(self.root, 0usize)]);
        let mut queue = VecDeque::from([self.root]);
        while let Some(v) = queue.pop_front() {
            let d = out[&v];
            for &c in &children[&v] {
                out.insert(c, d + 1);
                queue.push_back(c);
            }
        }
        out
    }

    pub fn depth(&self) -> usize {
        self.depths().values().copied().max().unwrap_or(0)
    }

    /// Nodes of the subtree rooted at `v`, including `v` itself.
    pub fn subtree(&self, v: NodeId) -> BTreeSet<NodeId> {
        let children = self.children_map();
        let mut out = BTreeSet::new();
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            out.insert(x);
            for &c in &children[&x] {
                queue.push_back(c);
            }
        }
        out
    }

    pub fn is_ancestor(&self, a: NodeId, v: NodeId) -> bool {
        let mut cur = v;
        while let Some(&p) = self.parent.get(&cur) {
            if p == a {
                return true;
            }
            cur = p;
        }
        false
    }
}

/// Property vector of a structure: the concrete component set is an
/// artifact choice, the per-field definitions are conventional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructMetrics {
    pub depth: usize,
    pub max_degree: usize,
    pub leaf_count: usize,
    pub node_count: usize,
    /// Weighted mean root-to-leaf arc count; uniform weights if none given.
    pub expected_root_leaf_length: Rat,
}

/// Computes the metric vector of a rooted tree. Degree is the undirected
/// degree (children plus parent link); a single-node tree counts its root
/// as a leaf.
pub fn tree_metrics(
    tree: &RootedTree,
    leaf_weights: Option<&BTreeMap<NodeId, Rat>>,
) -> Result<StructMetrics> {
    let depths = tree.depths();
    let leaves = tree.leaves();
    let children = tree.children_map();
    if let Some(w) = leaf_weights {
        for (&v, weight) in w {
            if weight.is_negative() {
                return Err(Error::NegativeLeafWeight(v));
            }
        }
    }
    let weight_of = |v: NodeId| -> Rat {
        leaf_weights
            .and_then(|w| w.get(&v).copied())
            .unwrap_or(Rat::ONE)
    };
    let total: Rat = leaves.iter().map(|&v| weight_of(v)).sum();
    if total.is_zero() {
        return Err(Error::validation(
            "leaf_weights",
            "leaf weights must not sum to zero",
        ));
    }
    let weighted: Rat = leaves
        .iter()
        .map(|&v| weight_of(v) * Rat::from(depths[&v]))
        .sum();
    let max_degree = tree
        .nodes()
        .into_iter()
        .map(|v| children[&v].len() + usize::from(v != tree.root))
        .max()
        .unwrap_or(0);
    Ok(StructMetrics {
        depth: tree.depth(),
        max_degree,
        leaf_count: leaves.len(),
        node_count: tree.node_count(),
        expected_root_leaf_length: weighted / total,
    })
}

/// Symmetric-difference cardinality between two sets over a common
/// universe; zero exactly when the sets coincide.
pub fn structure_proximity<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> usize {
    a.symmetric_difference(b).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: u32) -> RootedTree {
        let parent = (1..n).map(|v| (v, v - 1)).collect();
        RootedTree::new(0, parent).unwrap()
    }

    #[test]
    fn star_metrics() {
        let parent = (1..=5).map(|v| (v, 0)).collect();
        let tree = RootedTree::new(0, parent).unwrap();
        let m = tree_metrics(&tree, None).unwrap();
        assert_eq!(m.depth, 1);
        assert_eq!(m.leaf_count, 5);
        assert_eq!(m.max_degree, 5);
        assert_eq!(m.expected_root_leaf_length, Rat::ONE);
    }

    #[test]
    fn single_node_is_its_own_leaf() {
        let tree = RootedTree::new(3, BTreeMap::new()).unwrap();
        let m = tree_metrics(&tree, None).unwrap();
        assert_eq!(m.depth, 0);
        assert_eq!(m.leaf_count, 1);
        assert_eq!(m.node_count, 1);
    }

    #[test]
    fn weighted_expected_length() {
        let tree = chain(3); // 0 -> 1 -> 2
        let weights = BTreeMap::from([(2, Rat::from(4u32))]);
        let m = tree_metrics(&tree, Some(&weights)).unwrap();
        assert_eq!(m.expected_root_leaf_length, Rat::from(2u32));
    }

    #[test]
    fn negative_weight_rejected() {
        let tree = chain(2);
        let weights = BTreeMap::from([(1, -Rat::ONE)]);
        assert!(matches!(
            tree_metrics(&tree, Some(&weights)),
            Err(Error::NegativeLeafWeight(1))
        ));
    }

    #[test]
    fn cycle_detected() {
        let parent = BTreeMap::from([(1, 2), (2, 1)]);
        assert!(RootedTree::new(0, parent).is_err());
    }

    #[test]
    fn proximity_basics() {
        let a: BTreeSet<u32> = [1, 2].into();
        let b: BTreeSet<u32> = [3, 4, 5].into();
        assert_eq!(structure_proximity(&a, &a), 0);
        assert_eq!(structure_proximity(&a, &b), 5);
    }
}
