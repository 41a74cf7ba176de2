//! Steiner tree heuristic, maximum-leaf spanning trees and the
//! connected-dominating-set correspondence.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{edge, Edge, EdgeSetSolution, Graph, NodeId};
use crate::num::Rat;

/// Steiner problem input: a connected graph and the terminal set Q.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SteinerInstance {
    pub graph: Graph,
    pub terminals: BTreeSet<NodeId>,
}

impl SteinerInstance {
    pub fn validate(&self) -> Result<()> {
        if self.terminals.is_empty() {
            return Err(Error::validation("terminals", "terminal set is empty"));
        }
        for &t in &self.terminals {
            if !self.graph.contains_node(t) {
                return Err(Error::validation(
                    "terminals",
                    format!("terminal {t} is not a graph node"),
                ));
            }
        }
        if !self.graph.is_connected() {
            return Err(Error::DisconnectedInput);
        }
        Ok(())
    }
}

/// Distance-network 2-approximation: metric closure over terminals, MST
/// of the closure, expansion to shortest paths, MST of the expansion and
/// pruning of non-terminal leaves.
pub fn steiner_heuristic(instance: &SteinerInstance) -> Result<EdgeSetSolution> {
    instance.validate()?;
    let graph = &instance.graph;
    let terminals: Vec<NodeId> = instance.terminals.iter().copied().collect();
    if terminals.len() == 1 {
        return Ok(EdgeSetSolution::from_edges(graph, BTreeSet::new()));
    }
    // metric closure restricted to terminal pairs
    let mut closure = Graph::with_nodes(terminals.iter().copied());
    let mut paths: BTreeMap<Edge, Vec<NodeId>> = BTreeMap::new();
    for &t in &terminals {
        let (dist, pred) = graph.shortest_paths(t);
        for &u in &terminals {
            if u <= t {
                continue;
            }
            let mut path = vec![u];
            let mut cur = u;
            while cur != t {
                cur = pred[&cur];
                path.push(cur);
            }
            closure.add_edge(t, u, dist[&u])?;
            paths.insert(edge(t, u), path);
        }
    }
    let closure_mst = crate::graph::mst(&closure)?;
    // expand closure edges back to shortest paths
    let mut expansion = Graph::new();
    for e in &closure_mst.edges {
        let path = &paths[e];
        for window in path.windows(2) {
            expansion.add_node(window[0]);
            expansion.add_node(window[1]);
            if !expansion.has_edge(window[0], window[1]) {
                expansion.add_edge(
                    window[0],
                    window[1],
                    graph.weight(window[0], window[1]).unwrap(),
                )?;
            }
        }
    }
    let mut tree = crate::graph::mst(&expansion)?.edges;
    // prune non-terminal leaves until none remain
    loop {
        let mut degree: BTreeMap<NodeId, usize> = BTreeMap::new();
        for &(u, v) in &tree {
            *degree.entry(u).or_default() += 1;
            *degree.entry(v).or_default() += 1;
        }
        let prune: Vec<Edge> = tree
            .iter()
            .copied()
            .filter(|&(u, v)| {
                (degree[&u] == 1 && !instance.terminals.contains(&u))
                    || (degree[&v] == 1 && !instance.terminals.contains(&v))
            })
            .collect();
        if prune.is_empty() {
            break;
        }
        for e in prune {
            tree.remove(&e);
        }
    }
    Ok(EdgeSetSolution::from_edges(graph, tree))
}

/// Spanning tree with its leaf/internal node split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafTreeSolution {
    pub root: NodeId,
    pub edges: BTreeSet<Edge>,
    pub leaves: BTreeSet<NodeId>,
    pub internal: BTreeSet<NodeId>,
}

impl LeafTreeSolution {
    /// Classifies nodes by tree degree: degree one is a leaf, everything
    /// else internal. The root is just a designated node and may fall in
    /// either class; a single-node tree counts its node as a leaf.
    fn from_edges(graph: &Graph, edges: BTreeSet<Edge>) -> LeafTreeSolution {
        let mut degree: BTreeMap<NodeId, usize> = graph.nodes().map(|v| (v, 0)).collect();
        for &(u, v) in &edges {
            *degree.get_mut(&u).unwrap() += 1;
            *degree.get_mut(&v).unwrap() += 1;
        }
        let leaves: BTreeSet<NodeId> = graph
            .nodes()
            .filter(|v| degree[v] == 1 || graph.node_count() == 1)
            .collect();
        let internal: BTreeSet<NodeId> = graph.nodes().filter(|v| !leaves.contains(v)).collect();
        let root = internal
            .iter()
            .chain(leaves.iter())
            .next()
            .copied()
            .unwrap_or_default();
        LeafTreeSolution {
            root,
            edges,
            leaves,
            internal,
        }
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }
}

pub const DEFAULT_EXACT_BOUND: usize = 10;

/// Spanning tree maximizing the leaf count, by scanning candidate
/// internal sets in ascending size; intended for small inputs.
pub fn max_leaf_exact(graph: &Graph, bound: Option<usize>) -> Result<LeafTreeSolution> {
    let bound = bound.unwrap_or(DEFAULT_EXACT_BOUND);
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n > bound {
        return Err(Error::TooLargeForExact(format!(
            "{n} nodes exceeds the exact bound {bound}"
        )));
    }
    if !graph.is_connected() {
        return Err(Error::DisconnectedInput);
    }
    let nodes: Vec<NodeId> = graph.nodes().collect();
    if n <= 2 {
        let edges: BTreeSet<Edge> = graph.edges().map(|(e, _)| e).take(n - 1).collect();
        return Ok(LeafTreeSolution::from_edges(graph, edges));
    }
    // the internal set of a spanning tree is a connected dominating set;
    // scan candidate sets by ascending size, then lexicographically
    for size in 1..=n {
        let mut found: Option<BTreeSet<NodeId>> = None;
        let mut scan = |set: &BTreeSet<NodeId>| {
            if found.is_none() && is_connected_dominating(graph, set) {
                found = Some(set.clone());
            }
        };
        subsets_of_size(&nodes, size, &mut scan);
        if let Some(internal) = found {
            return Ok(tree_from_internal_set(graph, &internal));
        }
    }
    unreachable!("the full node set always dominates a connected graph")
}

fn subsets_of_size(nodes: &[NodeId], size: usize, visit: &mut impl FnMut(&BTreeSet<NodeId>)) {
    fn rec(
        nodes: &[NodeId],
        size: usize,
        start: usize,
        cur: &mut BTreeSet<NodeId>,
        visit: &mut impl FnMut(&BTreeSet<NodeId>),
    ) {
        if cur.len() == size {
            visit(cur);
            return;
        }
        let need = size - cur.len();
        for i in start..nodes.len() {
            if nodes.len() - i < need {
                break;
            }
            cur.insert(nodes[i]);
            rec(nodes, size, i + 1, cur, visit);
            cur.remove(&nodes[i]);
        }
    }
    rec(nodes, size, 0, &mut BTreeSet::new(), visit);
}

fn is_connected_dominating(graph: &Graph, set: &BTreeSet<NodeId>) -> bool {
    if set.is_empty() {
        return false;
    }
    // connectivity of the induced subgraph
    let mut seen = BTreeSet::new();
    let start = *set.iter().next().unwrap();
    let mut stack = vec![start];
    seen.insert(start);
    while let Some(v) = stack.pop() {
        for n in graph.neighbors(v) {
            if set.contains(&n) && seen.insert(n) {
                stack.push(n);
            }
        }
    }
    if seen.len() != set.len() {
        return false;
    }
    // domination
    graph
        .nodes()
        .all(|v| set.contains(&v) || graph.neighbors(v).iter().any(|n| set.contains(n)))
}

/// Builds a spanning tree whose internal nodes all lie inside `internal`:
/// a BFS tree over the internal set plus leaf attachments.
fn tree_from_internal_set(graph: &Graph, internal: &BTreeSet<NodeId>) -> LeafTreeSolution {
    let mut edges = BTreeSet::new();
    let start = *internal.iter().next().unwrap();
    let mut seen = BTreeSet::from([start]);
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for n in graph.neighbors(v) {
            if internal.contains(&n) && seen.insert(n) {
                edges.insert(edge(v, n));
                queue.push_back(n);
            }
        }
    }
    for v in graph.nodes() {
        if internal.contains(&v) {
            continue;
        }
        let host = graph
            .neighbors(v)
            .into_iter()
            .find(|n| internal.contains(n))
            .expect("dominating set covers every outside node");
        edges.insert(edge(v, host));
    }
    LeafTreeSolution::from_edges(graph, edges)
}

/// Leafy-forest greedy: repeatedly expand the node that adds the most
/// new neighbors, then connect the forest components.
pub fn max_leaf_greedy(graph: &Graph) -> Result<LeafTreeSolution> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if !graph.is_connected() {
        return Err(Error::DisconnectedInput);
    }
    let mut edges: BTreeSet<Edge> = BTreeSet::new();
    let mut in_forest: BTreeSet<NodeId> = BTreeSet::new();
    loop {
        // node with the most neighbors still outside the forest; a star
        // expansion pays off only with at least two fresh neighbors
        let mut best: Option<(usize, NodeId)> = None;
        for v in graph.nodes() {
            let fresh = graph
                .neighbors(v)
                .into_iter()
                .filter(|u| !in_forest.contains(u))
                .count();
            if fresh >= 2 && best.is_none_or(|(bc, bv)| fresh > bc || (fresh == bc && v < bv)) {
                best = Some((fresh, v));
            }
        }
        let Some((_, center)) = best else { break };
        in_forest.insert(center);
        for u in graph.neighbors(center) {
            if !in_forest.contains(&u) {
                in_forest.insert(u);
                edges.insert(edge(center, u));
            }
        }
    }
    // connect components (and untouched nodes) with the lexicographically
    // smallest available edges
    fn find(uf: &mut BTreeMap<NodeId, NodeId>, v: NodeId) -> NodeId {
        let p = uf[&v];
        if p == v {
            return v;
        }
        let r = find(uf, p);
        uf.insert(v, r);
        r
    }
    let mut uf: BTreeMap<NodeId, NodeId> = graph.nodes().map(|v| (v, v)).collect();
    for &(u, v) in &edges {
        let (ru, rv) = (find(&mut uf, u), find(&mut uf, v));
        if ru != rv {
            let (keep, drop) = (ru.min(rv), ru.max(rv));
            uf.insert(drop, keep);
        }
    }
    for ((u, v), _) in graph.edges() {
        let (ru, rv) = (find(&mut uf, u), find(&mut uf, v));
        if ru != rv {
            edges.insert(edge(u, v));
            let (keep, drop) = (ru.min(rv), ru.max(rv));
            uf.insert(drop, keep);
        }
    }
    Ok(LeafTreeSolution::from_edges(graph, edges))
}

/// Internal-node set of a spanning tree, verified to be a connected
/// dominating set of the host graph.
pub fn cds_from_spanning_tree(
    solution: &LeafTreeSolution,
    graph: &Graph,
) -> Result<BTreeSet<NodeId>> {
    if solution.edges.len() + 1 != graph.node_count() {
        return Err(Error::validation(
            "solution",
            "edge set does not span the graph",
        ));
    }
    let set = if solution.internal.is_empty() {
        // degenerate one- and two-node trees: fall back to a single hub
        BTreeSet::from([solution.root])
    } else {
        solution.internal.clone()
    };
    if !is_connected_dominating(graph, &set) {
        return Err(Error::DominationViolation);
    }
    Ok(set)
}

/// Weight of an edge set under the host graph's edge weights.
pub fn solution_weight(graph: &Graph, edges: &BTreeSet<Edge>) -> Rat {
    edges
        .iter()
        .map(|&(u, v)| graph.weight(u, v).unwrap_or(Rat::ZERO))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(v: i64) -> Rat {
        Rat::from(v)
    }

    fn path_graph(n: u32) -> Graph {
        let mut g = Graph::with_nodes(0..n);
        for v in 1..n {
            g.add_edge(v - 1, v, Rat::ONE).unwrap();
        }
        g
    }

    fn star_graph(n: u32) -> Graph {
        let mut g = Graph::with_nodes(0..n);
        for v in 1..n {
            g.add_edge(0, v, Rat::ONE).unwrap();
        }
        g
    }

    #[test]
    fn steiner_all_terminals_is_mst() {
        let mut g = Graph::with_nodes([1, 2, 3]);
        g.add_edge(1, 2, rat(1)).unwrap();
        g.add_edge(2, 3, rat(2)).unwrap();
        g.add_edge(1, 3, rat(3)).unwrap();
        let instance = SteinerInstance {
            terminals: g.nodes().collect(),
            graph: g.clone(),
        };
        let sol = steiner_heuristic(&instance).unwrap();
        assert_eq!(sol.total_weight, crate::graph::mst(&g).unwrap().total_weight);
    }

    #[test]
    fn steiner_two_terminals_is_shortest_path() {
        let mut g = Graph::with_nodes([1, 2, 3, 4]);
        g.add_edge(1, 2, rat(10)).unwrap();
        g.add_edge(1, 3, rat(1)).unwrap();
        g.add_edge(3, 4, rat(1)).unwrap();
        g.add_edge(4, 2, rat(1)).unwrap();
        let instance = SteinerInstance {
            graph: g,
            terminals: BTreeSet::from([1, 2]),
        };
        let sol = steiner_heuristic(&instance).unwrap();
        assert_eq!(sol.total_weight, rat(3));
        assert_eq!(sol.edges.len(), 3);
    }

    #[test]
    fn steiner_output_has_no_nonterminal_leaves() {
        let mut g = Graph::with_nodes(0..6);
        for (u, v, w) in [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (0, 5, 9)] {
            g.add_edge(u, v, rat(w)).unwrap();
        }
        let instance = SteinerInstance {
            graph: g,
            terminals: BTreeSet::from([0, 3]),
        };
        let sol = steiner_heuristic(&instance).unwrap();
        let mut degree: BTreeMap<NodeId, usize> = BTreeMap::new();
        for &(u, v) in &sol.edges {
            *degree.entry(u).or_default() += 1;
            *degree.entry(v).or_default() += 1;
        }
        for (v, d) in degree {
            assert!(d > 1 || instance.terminals.contains(&v));
        }
    }

    #[test]
    fn max_leaf_star() {
        let g = star_graph(6);
        assert_eq!(max_leaf_exact(&g, None).unwrap().leaf_count(), 5);
        assert_eq!(max_leaf_greedy(&g).unwrap().leaf_count(), 5);
    }

    #[test]
    fn max_leaf_path_is_two() {
        let g = path_graph(5);
        assert_eq!(max_leaf_exact(&g, None).unwrap().leaf_count(), 2);
        assert_eq!(max_leaf_greedy(&g).unwrap().leaf_count(), 2);
    }

    #[test]
    fn max_leaf_exact_bound_enforced() {
        let g = path_graph(12);
        assert!(matches!(
            max_leaf_exact(&g, None),
            Err(Error::TooLargeForExact(_))
        ));
        assert!(max_leaf_exact(&g, Some(12)).is_ok());
    }

    #[test]
    fn disconnected_rejected() {
        let g = Graph::with_nodes([0, 1]);
        assert!(matches!(max_leaf_greedy(&g), Err(Error::DisconnectedInput)));
    }

    #[test]
    fn cds_star_is_center() {
        let g = star_graph(5);
        let sol = max_leaf_exact(&g, None).unwrap();
        let cds = cds_from_spanning_tree(&sol, &g).unwrap();
        assert_eq!(cds, BTreeSet::from([0]));
    }

    #[test]
    fn cds_path_is_middle() {
        let g = path_graph(6);
        let sol = max_leaf_exact(&g, None).unwrap();
        let cds = cds_from_spanning_tree(&sol, &g).unwrap();
        assert_eq!(cds, BTreeSet::from([1, 2, 3, 4]));
    }

    #[test]
    fn greedy_never_beats_exact() {
        let mut g = path_graph(7);
        g.add_edge(0, 3, Rat::ONE).unwrap();
        g.add_edge(2, 6, Rat::ONE).unwrap();
        let exact = max_leaf_exact(&g, None).unwrap();
        let greedy = max_leaf_greedy(&g).unwrap();
        assert!(exact.leaf_count() >= greedy.leaf_count());
    }
}
