//! Undirected weighted graph, classic spanning algorithms and the
//! flow-based vertex-connectivity check.

use std::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Rat;

pub type NodeId = u32;

/// Unordered node pair, stored normalized as (min, max).
pub type Edge = (NodeId, NodeId);

pub fn edge(u: NodeId, v: NodeId) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Undirected graph with nonnegative rational edge weights.
///
/// Invariants enforced at construction: no self-loops, no duplicate
/// edges, every endpoint declared, weights >= 0. Serializes as a node
/// list plus `[u, v, weight]` triples.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    nodes: BTreeSet<NodeId>,
    edges: BTreeMap<Edge, Rat>,
    node_attrs: BTreeMap<NodeId, BTreeMap<String, String>>,
}

// attr keys travel as strings so the wire form survives serde content
// buffering (flatten, tagged enums), which stringifies map keys
#[derive(Serialize, Deserialize)]
struct GraphWire {
    nodes: Vec<NodeId>,
    edges: Vec<(NodeId, NodeId, Rat)>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    node_attrs: BTreeMap<String, BTreeMap<String, String>>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GraphWire {
            nodes: self.nodes.iter().copied().collect(),
            edges: self.edges.iter().map(|(&(u, v), &w)| (u, v, w)).collect(),
            node_attrs: self
                .node_attrs
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Graph, D::Error> {
        let wire = GraphWire::deserialize(deserializer)?;
        let mut graph = Graph::with_nodes(wire.nodes);
        for (u, v, w) in wire.edges {
            graph.add_edge(u, v, w).map_err(serde::de::Error::custom)?;
        }
        for (key, attrs) in wire.node_attrs {
            let id: NodeId = key.parse().map_err(|_| {
                serde::de::Error::custom(format!("node_attrs key {key:?} is not a node id"))
            })?;
            graph.node_attrs.insert(id, attrs);
        }
        Ok(graph)
    }
}

impl Graph {
    pub fn new() -> Graph {
        Graph::default()
    }

    pub fn with_nodes(ids: impl IntoIterator<Item = NodeId>) -> Graph {
        let mut g = Graph::new();
        for id in ids {
            g.add_node(id);
        }
        g
    }

    pub fn add_node(&mut self, id: NodeId) {
        self.nodes.insert(id);
    }

    pub fn add_edge(&mut self, u: NodeId, v: NodeId, weight: Rat) -> Result<()> {
        if u == v {
            return Err(Error::validation(
                format!("edges[{u},{v}]"),
                "self-loops are not allowed",
            ));
        }
        if !self.nodes.contains(&u) || !self.nodes.contains(&v) {
            return Err(Error::validation(
                format!("edges[{u},{v}]"),
                "edge endpoint is not a declared node",
            ));
        }
        if weight.is_negative() {
            return Err(Error::validation(
                format!("edges[{u},{v}]"),
                "edge weight must be nonnegative",
            ));
        }
        if self.edges.insert(edge(u, v), weight).is_some() {
            return Err(Error::validation(
                format!("edges[{u},{v}]"),
                "duplicate edge",
            ));
        }
        Ok(())
    }

    pub fn set_node_attr(&mut self, id: NodeId, key: &str, value: &str) {
        self.node_attrs
            .entry(id)
            .or_default()
            .insert(key.to_string(), value.to_string());
    }

    pub fn node_attrs(&self, id: NodeId) -> Option<&BTreeMap<String, String>> {
        self.node_attrs.get(&id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().copied()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn contains_node(&self, id: NodeId) -> bool {
        self.nodes.contains(&id)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Edge, Rat)> + '_ {
        self.edges.iter().map(|(e, w)| (*e, *w))
    }

    pub fn weight(&self, u: NodeId, v: NodeId) -> Option<Rat> {
        self.edges.get(&edge(u, v)).copied()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.edges.contains_key(&edge(u, v))
    }

    pub fn neighbors(&self, v: NodeId) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = self
            .edges
            .keys()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.edges
            .keys()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    /// Connected components as sorted node sets, sorted by smallest member.
    pub fn components(&self) -> Vec<BTreeSet<NodeId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let adj = self.adjacency();
        for &start in &self.nodes {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            while let Some(v) = queue.pop_front() {
                comp.insert(v);
                for &n in adj.get(&v).map(|v| v.as_slice()).unwrap_or(&[]) {
                    if seen.insert(n) {
                        queue.push_back(n);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    fn adjacency(&self) -> BTreeMap<NodeId, Vec<NodeId>> {
        let mut adj: BTreeMap<NodeId, Vec<NodeId>> =
            self.nodes.iter().map(|&v| (v, Vec::new())).collect();
        for &(u, v) in self.edges.keys() {
            adj.get_mut(&u).unwrap().push(v);
            adj.get_mut(&v).unwrap().push(u);
        }
        for list in adj.values_mut() {
            list.sort_unstable();
        }
        adj
    }

    /// Single-source shortest paths (Dijkstra). Returns distance and
    /// predecessor maps for the reachable part; predecessor ties resolve
    /// to the smallest node id so reconstructed paths are reproducible.
    pub fn shortest_paths(&self, source: NodeId) -> (BTreeMap<NodeId, Rat>, BTreeMap<NodeId, NodeId>) {
        let mut dist: BTreeMap<NodeId, Rat> = BTreeMap::new();
        let mut pred: BTreeMap<NodeId, NodeId> = BTreeMap::new();
        let mut heap: BinaryHeap<std::cmp::Reverse<(Rat, NodeId)>> = BinaryHeap::new();
        dist.insert(source, Rat::ZERO);
        heap.push(std::cmp::Reverse((Rat::ZERO, source)));
        while let Some(std::cmp::Reverse((d, v))) = heap.pop() {
            if dist.get(&v).is_some_and(|&best| d > best) {
                continue;
            }
            for n in self.neighbors(v) {
                let nd = d + self.weight(v, n).unwrap();
                let better = match dist.get(&n) {
                    None => true,
                    Some(&cur) => nd < cur || (nd == cur && v < pred[&n]),
                };
                if better {
                    dist.insert(n, nd);
                    pred.insert(n, v);
                    heap.push(std::cmp::Reverse((nd, n)));
                }
            }
        }
        (dist, pred)
    }
}

/// A selected edge subset together with its recomputed total weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSetSolution {
    pub edges: BTreeSet<Edge>,
    pub total_weight: Rat,
}

impl EdgeSetSolution {
    pub fn from_edges(graph: &Graph, edges: BTreeSet<Edge>) -> EdgeSetSolution {
        let total_weight = edges
            .iter()
            .map(|&(u, v)| graph.weight(u, v).unwrap_or(Rat::ZERO))
            .sum();
        EdgeSetSolution {
            edges,
            total_weight,
        }
    }
}

struct UnionFind {
    parent: BTreeMap<NodeId, NodeId>,
}

impl UnionFind {
    fn new(nodes: impl IntoIterator<Item = NodeId>) -> UnionFind {
        UnionFind {
            parent: nodes.into_iter().map(|v| (v, v)).collect(),
        }
    }

    fn find(&mut self, v: NodeId) -> NodeId {
        let p = self.parent[&v];
        if p == v {
            return v;
        }
        let root = self.find(p);
        self.parent.insert(v, root);
        root
    }

    fn unite(&mut self, u: NodeId, v: NodeId) -> bool {
        let (ru, rv) = (self.find(u), self.find(v));
        if ru == rv {
            return false;
        }
        self.parent.insert(ru.max(rv), ru.min(rv));
        true
    }
}

/// Kruskal's algorithm with the crate-wide tie rule: equal-weight edges
/// are taken in ascending (min id, max id) order.
pub fn mst(graph: &Graph) -> Result<EdgeSetSolution> {
    if graph.node_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !graph.is_connected() {
        return Err(Error::DisconnectedInput);
    }
    Ok(kruskal(graph))
}

/// Minimum spanning forest: the per-component MST union; never fails.
pub fn spanning_forest(graph: &Graph) -> EdgeSetSolution {
    kruskal(graph)
}

fn kruskal(graph: &Graph) -> EdgeSetSolution {
    let mut order: Vec<(Rat, Edge)> = graph.edges().map(|(e, w)| (w, e)).collect();
    order.sort();
    let mut uf = UnionFind::new(graph.nodes());
    let mut chosen = BTreeSet::new();
    for (_, (u, v)) in order {
        if uf.unite(u, v) {
            chosen.insert((u, v));
        }
    }
    EdgeSetSolution::from_edges(graph, chosen)
}

/// Prim's algorithm; second route to the same optimum, kept public so the
/// two implementations can be cross-checked on any input.
pub fn mst_prim(graph: &Graph) -> Result<EdgeSetSolution> {
    if graph.node_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !graph.is_connected() {
        return Err(Error::DisconnectedInput);
    }
    let start = graph.nodes().next().unwrap();
    let mut in_tree = BTreeSet::from([start]);
    let mut chosen = BTreeSet::new();
    // (weight, edge) heap; edge normalization gives deterministic ties
    let mut heap: BinaryHeap<std::cmp::Reverse<(Rat, Edge)>> = BinaryHeap::new();
    let push_frontier = |v: NodeId, heap: &mut BinaryHeap<_>| {
        for n in graph.neighbors(v) {
            heap.push(std::cmp::Reverse((graph.weight(v, n).unwrap(), edge(v, n))));
        }
    };
    push_frontier(start, &mut heap);
    while in_tree.len() < graph.node_count() {
        let Some(std::cmp::Reverse((_, (u, v)))) = heap.pop() else {
            break;
        };
        let new = match (in_tree.contains(&u), in_tree.contains(&v)) {
            (true, false) => v,
            (false, true) => u,
            _ => continue,
        };
        chosen.insert((u, v));
        in_tree.insert(new);
        push_frontier(new, &mut heap);
    }
    Ok(EdgeSetSolution::from_edges(graph, chosen))
}

/// True iff the graph is at least k-vertex-connected.
///
/// Menger check by unit-vertex-capacity max flow over every non-adjacent
/// pair, with the min-degree and node-count prechecks; adjacent pairs need
/// no flow because global connectivity is attained on some non-adjacent
/// pair unless the graph is complete. The O(n^2) pair loop is intended
/// for desk-scale instances.
pub fn vertex_connectivity_at_least(graph: &Graph, k: u32) -> bool {
    assert!(k >= 1, "k must be positive");
    let n = graph.node_count();
    if n < k as usize + 1 {
        return false;
    }
    let nodes: Vec<NodeId> = graph.nodes().collect();
    if nodes.iter().any(|&v| graph.degree(v) < k as usize) {
        return false;
    }
    let mut flow = SplitFlow::new(graph);
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            let (u, v) = (nodes[i], nodes[j]);
            if graph.has_edge(u, v) {
                continue;
            }
            if flow.disjoint_paths(u, v, k) < k {
                return false;
            }
        }
    }
    true
}

/// Unit-capacity node-split flow network for internally disjoint paths.
struct SplitFlow {
    index: BTreeMap<NodeId, usize>,
    // adjacency over split nodes: node v becomes v_in = 2i, v_out = 2i+1
    to: Vec<Vec<usize>>,
    cap: Vec<Vec<u32>>,
}

impl SplitFlow {
    fn new(graph: &Graph) -> SplitFlow {
        let ids: Vec<NodeId> = graph.nodes().collect();
        let index: BTreeMap<NodeId, usize> =
            ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let n = ids.len();
        let mut net = SplitFlow {
            index,
            to: vec![Vec::new(); 2 * n],
            cap: vec![Vec::new(); 2 * n],
        };
        for i in 0..n {
            net.link(2 * i, 2 * i + 1, 1); // vertex capacity
        }
        for ((u, v), _) in graph.edges() {
            let (iu, iv) = (net.index[&u], net.index[&v]);
            net.link(2 * iu + 1, 2 * iv, u32::MAX / 4);
            net.link(2 * iv + 1, 2 * iu, u32::MAX / 4);
        }
        net
    }

    fn link(&mut self, a: usize, b: usize, capacity: u32) {
        self.to[a].push(b);
        self.cap[a].push(capacity);
        self.to[b].push(a);
        self.cap[b].push(0);
    }

    /// Number of internally vertex-disjoint paths between two distinct
    /// nodes, capped at `limit` augmentations.
    fn disjoint_paths(&mut self, s: NodeId, t: NodeId, limit: u32) -> u32 {
        let mut cap = self.cap.clone();
        let source = 2 * self.index[&s] + 1;
        let sink = 2 * self.index[&t];
        let mut found = 0;
        while found < limit {
            // BFS for an augmenting path of unit capacity
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.to.len()];
            let mut queue = VecDeque::from([source]);
            prev[source] = Some((source, usize::MAX));
            while let Some(v) = queue.pop_front() {
                if v == sink {
                    break;
                }
                for (ei, &n) in self.to[v].iter().enumerate() {
                    if cap[v][ei] > 0 && prev[n].is_none() {
                        prev[n] = Some((v, ei));
                        queue.push_back(n);
                    }
                }
            }
            if prev[sink].is_none() {
                break;
            }
            let mut v = sink;
            while v != source {
                let (p, ei) = prev[v].unwrap();
                cap[p][ei] -= 1;
                // find reverse edge index
                let rev = self.to[v].iter().position(|&x| x == p).unwrap();
                cap[v][rev] += 1;
                v = p;
            }
            found += 1;
        }
        found
    }
}
