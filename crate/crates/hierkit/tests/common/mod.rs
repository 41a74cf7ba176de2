//! Shared test oracles and instance generators.
//!
//! Everything in here re-derives expected values from first principles
//! (exhaustive enumeration, direct recomputation) and stays independent
//! of the library code paths it is used to check.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use hierkit::condense::{CondensePlan, OverlayTree};
use hierkit::graph::{Edge, Graph, NodeId};
use hierkit::knapsack::{ChoiceInstance, Item};
use hierkit::num::Rat;
use hierkit::tree::RootedTree;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn rat(v: i64) -> Rat {
    Rat::from(v)
}

// -------------------------------------------------------------------
// graph generators
// -------------------------------------------------------------------

/// Connected graph: random tree skeleton plus extra random edges.
pub fn random_connected_graph(r: &mut StdRng, n: u32, extra_edges: usize, max_w: i64) -> Graph {
    let mut g = Graph::with_nodes(0..n);
    for v in 1..n {
        let parent = r.gen_range(0..v);
        g.add_edge(parent, v, rat(r.gen_range(1..=max_w))).unwrap();
    }
    for _ in 0..extra_edges {
        let u = r.gen_range(0..n);
        let v = r.gen_range(0..n);
        if u != v && !g.has_edge(u, v) {
            g.add_edge(u, v, rat(r.gen_range(1..=max_w))).unwrap();
        }
    }
    g
}

/// Possibly-disconnected graph: several component skeletons.
pub fn random_forest_graph(r: &mut StdRng, parts: usize, part_size: u32, max_w: i64) -> Graph {
    let mut g = Graph::new();
    for p in 0..parts as u32 {
        let base = p * part_size;
        for v in 0..part_size {
            g.add_node(base + v);
        }
        for v in 1..part_size {
            let parent = base + r.gen_range(0..v);
            g.add_edge(parent, base + v, rat(r.gen_range(1..=max_w)))
                .unwrap();
        }
        if part_size >= 3 && r.gen_bool(0.7) {
            let u = base + r.gen_range(0..part_size);
            let v = base + r.gen_range(0..part_size);
            if u != v && !g.has_edge(u, v) {
                g.add_edge(u, v, rat(r.gen_range(1..=max_w))).unwrap();
            }
        }
    }
    g
}

/// Random rooted tree over nodes 0..n with root 0.
pub fn random_rooted_tree(r: &mut StdRng, n: u32) -> RootedTree {
    let parent: BTreeMap<NodeId, NodeId> = (1..n).map(|v| (v, r.gen_range(0..v))).collect();
    RootedTree::new(0, parent).unwrap()
}

// -------------------------------------------------------------------
// spanning tree oracle
// -------------------------------------------------------------------

/// Exhaustive spanning tree enumeration over the edge list, using its
/// own union-find; yields each tree as an edge set.
pub fn oracle_spanning_trees(g: &Graph) -> Vec<BTreeSet<Edge>> {
    let edges: Vec<Edge> = g.edges().map(|(e, _)| e).collect();
    let nodes: Vec<NodeId> = g.nodes().collect();
    let n = nodes.len();
    let index: BTreeMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut stack: Vec<(usize, Vec<usize>, Vec<Edge>)> = vec![(0, (0..n).collect(), Vec::new())];
    while let Some((at, comp, chosen)) = stack.pop() {
        if chosen.len() == n - 1 {
            out.push(chosen.into_iter().collect());
            continue;
        }
        if at == edges.len() || edges.len() - at < n - 1 - chosen.len() {
            continue;
        }
        let (u, v) = edges[at];
        // skip edge
        stack.push((at + 1, comp.clone(), chosen.clone()));
        // take edge unless it closes a cycle
        let (cu, cv) = (comp[index[&u]], comp[index[&v]]);
        if cu != cv {
            let mut merged = comp;
            for c in merged.iter_mut() {
                if *c == cv {
                    *c = cu;
                }
            }
            let mut taken = chosen;
            taken.push((u, v));
            stack.push((at + 1, merged, taken));
        }
    }
    out
}

pub fn edge_set_weight(g: &Graph, edges: &BTreeSet<Edge>) -> Rat {
    edges.iter().map(|&(u, v)| g.weight(u, v).unwrap()).sum()
}

/// Minimum spanning tree weight by full enumeration.
pub fn oracle_mst_weight(g: &Graph) -> Option<Rat> {
    oracle_spanning_trees(g)
        .iter()
        .map(|t| edge_set_weight(g, t))
        .min()
}

/// Maximum leaf count over all spanning trees by full enumeration.
pub fn oracle_max_leaves(g: &Graph) -> usize {
    let n = g.node_count();
    oracle_spanning_trees(g)
        .iter()
        .map(|t| {
            let mut deg: BTreeMap<NodeId, usize> = BTreeMap::new();
            for &(u, v) in t {
                *deg.entry(u).or_default() += 1;
                *deg.entry(v).or_default() += 1;
            }
            g.nodes().filter(|v| deg.get(v) == Some(&1) || n == 1).count()
        })
        .max()
        .unwrap_or(0)
}

// -------------------------------------------------------------------
// Steiner oracle
// -------------------------------------------------------------------

/// Exact Steiner optimum: try every subset of optional vertices, build
/// the induced subgraph, and take the best spanning tree weight over
/// the terminals plus the subset.
pub fn oracle_steiner_optimum(g: &Graph, terminals: &BTreeSet<NodeId>) -> Rat {
    let optional: Vec<NodeId> = g.nodes().filter(|v| !terminals.contains(v)).collect();
    let mut best: Option<Rat> = None;
    for mask in 0u32..(1 << optional.len()) {
        let mut keep: BTreeSet<NodeId> = terminals.clone();
        for (i, &v) in optional.iter().enumerate() {
            if mask >> i & 1 == 1 {
                keep.insert(v);
            }
        }
        let mut sub = Graph::with_nodes(keep.iter().copied());
        for ((u, v), w) in g.edges() {
            if keep.contains(&u) && keep.contains(&v) {
                sub.add_edge(u, v, w).unwrap();
            }
        }
        for tree in oracle_spanning_trees(&sub) {
            let w = edge_set_weight(&sub, &tree);
            if best.is_none_or(|b| w < b) {
                best = Some(w);
            }
        }
    }
    best.expect("terminals are connectable in a connected graph")
}

// -------------------------------------------------------------------
// knapsack oracles
// -------------------------------------------------------------------

pub fn oracle_knapsack_optimum(items: &[Item], budget: Rat) -> Rat {
    let mut best = Rat::ZERO;
    for mask in 0u64..(1 << items.len()) {
        let mut weight = Rat::ZERO;
        let mut profit = Rat::ZERO;
        for (i, item) in items.iter().enumerate() {
            if mask >> i & 1 == 1 {
                weight += item.weight;
                profit += item.profit;
            }
        }
        if weight <= budget && profit > best {
            best = profit;
        }
    }
    best
}

/// Exhaustive multiple choice optimum; `None` when infeasible.
pub fn oracle_mchoice_optimum(instance: &ChoiceInstance) -> Option<Rat> {
    let mut best: Option<Rat> = None;
    let sizes: Vec<usize> = instance.groups.iter().map(|g| g.options.len()).collect();
    let mut cursor = vec![0usize; sizes.len()];
    loop {
        let mut weight = Rat::ZERO;
        let mut profit = Rat::ZERO;
        for (gi, &oi) in cursor.iter().enumerate() {
            weight += instance.groups[gi].options[oi].weight;
            profit += instance.groups[gi].options[oi].profit;
        }
        if weight <= instance.budget && best.is_none_or(|b| profit > b) {
            best = Some(profit);
        }
        let mut gi = 0;
        loop {
            if gi == sizes.len() {
                return best;
            }
            cursor[gi] += 1;
            if cursor[gi] < sizes[gi] {
                break;
            }
            cursor[gi] = 0;
            gi += 1;
        }
    }
}

pub fn random_items(r: &mut StdRng, n: usize) -> Vec<Item> {
    (0..n)
        .map(|i| Item {
            id: format!("i{i:02}"),
            profit: Rat::new(r.gen_range(0..=60), r.gen_range(1..=2)),
            weight: Rat::new(r.gen_range(0..=40), r.gen_range(1..=2)),
        })
        .collect()
}

pub fn random_choice_instance(r: &mut StdRng, max_groups: usize, max_opts: usize) -> ChoiceInstance {
    let groups = (0..r.gen_range(1..=max_groups))
        .map(|gi| hierkit::knapsack::ChoiceGroup {
            name: format!("g{gi}"),
            options: (0..r.gen_range(1..=max_opts))
                .map(|oi| Item {
                    id: format!("g{gi}o{oi}"),
                    profit: rat(r.gen_range(0..=30)),
                    weight: rat(r.gen_range(0..=20)),
                })
                .collect(),
        })
        .collect();
    ChoiceInstance {
        groups,
        budget: rat(r.gen_range(0..=50)),
    }
}

// -------------------------------------------------------------------
// overlay condensing oracle
// -------------------------------------------------------------------

/// Independent plan evaluator: compresses condensed arcs by path
/// shortcutting and enumerates every root-to-leaf RAM chain explicitly.
/// Returns (saved frequency, kernel weight, heaviest tail).
pub fn oracle_evaluate_plan(tree: &OverlayTree, condensed: &BTreeSet<NodeId>) -> (Rat, Rat, Rat) {
    let saved: Rat = condensed.iter().map(|v| tree.freq[v]).sum();
    // host of a vertex: walk up while the incoming arc is condensed
    let host = |mut v: NodeId| -> NodeId {
        while condensed.contains(&v) {
            v = tree.tree.parent[&v];
        }
        v
    };
    let mut comp_ram: BTreeMap<NodeId, Rat> = BTreeMap::new();
    for v in tree.tree.nodes() {
        *comp_ram.entry(host(v)).or_insert(Rat::ZERO) += tree.ram[&v];
    }
    // parent relation between components
    let mut children: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for (&c, &p) in &tree.tree.parent {
        if condensed.contains(&c) {
            continue;
        }
        children.entry(host(p)).or_default().push(c);
    }
    let root = tree.tree.root;
    let kernel = comp_ram[&root];
    // explicit path enumeration from the root component
    let mut heaviest_total = Rat::ZERO;
    let mut stack = vec![(root, comp_ram[&root])];
    while let Some((comp, acc)) = stack.pop() {
        match children.get(&comp) {
            None => heaviest_total = heaviest_total.max(acc),
            Some(list) if list.is_empty() => heaviest_total = heaviest_total.max(acc),
            Some(list) => {
                for &c in list {
                    stack.push((c, acc + comp_ram[&c]));
                }
            }
        }
    }
    (saved, kernel, heaviest_total - kernel)
}

/// Best saved frequency over all plans feasible under a kind-1 budget.
pub fn oracle_condense_kind1(tree: &OverlayTree, b: Rat) -> Option<(Rat, BTreeSet<NodeId>)> {
    oracle_condense(tree, |_, kernel, tail| kernel + tail <= b)
}

/// Best saved frequency over all plans feasible under a kind-2 budget.
pub fn oracle_condense_kind2(
    tree: &OverlayTree,
    b_minus: Rat,
    b_plus: Rat,
) -> Option<(Rat, BTreeSet<NodeId>)> {
    oracle_condense(tree, |_, kernel, tail| kernel <= b_minus && tail <= b_plus)
}

fn oracle_condense(
    tree: &OverlayTree,
    feasible: impl Fn(Rat, Rat, Rat) -> bool,
) -> Option<(Rat, BTreeSet<NodeId>)> {
    let vertices: Vec<NodeId> = tree.tree.parent.keys().copied().collect();
    let mut best: Option<(Rat, BTreeSet<NodeId>)> = None;
    for mask in 0u32..(1 << vertices.len()) {
        let plan: BTreeSet<NodeId> = vertices
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        let (saved, kernel, tail) = oracle_evaluate_plan(tree, &plan);
        if !feasible(saved, kernel, tail) {
            continue;
        }
        let better = match &best {
            None => true,
            Some((bs, bp)) => saved > *bs || (saved == *bs && plan < *bp),
        };
        if better {
            best = Some((saved, plan));
        }
    }
    best
}

pub fn random_overlay_tree(r: &mut StdRng, n: u32) -> OverlayTree {
    let tree = random_rooted_tree(r, n);
    let ram = tree
        .nodes()
        .into_iter()
        .map(|v| (v, rat(r.gen_range(1..=6))))
        .collect();
    let freq = tree
        .parent
        .keys()
        .map(|&v| (v, rat(r.gen_range(1..=9))))
        .collect();
    OverlayTree { tree, ram, freq }
}

/// Random tree with exactly three levels (root, middles, leaves).
pub fn random_three_level_overlay(r: &mut StdRng, middles: u32, leaves: u32) -> OverlayTree {
    let mut parent: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    for m in 1..=middles {
        parent.insert(m, 0);
    }
    for l in 0..leaves {
        parent.insert(middles + 1 + l, r.gen_range(1..=middles));
    }
    let tree = RootedTree::new(0, parent).unwrap();
    let ram = tree
        .nodes()
        .into_iter()
        .map(|v| (v, rat(r.gen_range(1..=6))))
        .collect();
    let freq = tree
        .parent
        .keys()
        .map(|&v| (v, rat(r.gen_range(1..=9))))
        .collect();
    OverlayTree { tree, ram, freq }
}

pub fn plan_of(set: &BTreeSet<NodeId>) -> CondensePlan {
    CondensePlan {
        condensed: set.clone(),
    }
}

// -------------------------------------------------------------------
// hotlink oracle
// -------------------------------------------------------------------

/// Expected access cost recomputed with a plain breadth-first search
/// over the tree arcs plus hotlink arcs.
pub fn oracle_access_cost(
    tree: &RootedTree,
    weights: &BTreeMap<NodeId, Rat>,
    links: &BTreeSet<(NodeId, NodeId)>,
) -> Rat {
    let mut adjacency: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for (&c, &p) in &tree.parent {
        adjacency.entry(p).or_default().push(c);
    }
    for &(s, t) in links {
        adjacency.entry(s).or_default().push(t);
    }
    let mut dist: BTreeMap<NodeId, Rat> = BTreeMap::from([(tree.root, Rat::ZERO)]);
    let mut queue = VecDeque::from([tree.root]);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        for &n in adjacency.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
            if !dist.contains_key(&n) {
                dist.insert(n, d + Rat::ONE);
                queue.push_back(n);
            }
        }
    }
    let mut num = Rat::ZERO;
    let mut den = Rat::ZERO;
    for leaf in tree.leaves() {
        let w = weights.get(&leaf).copied().unwrap_or(Rat::ZERO);
        num += w * dist[&leaf];
        den += w;
    }
    num / den
}

/// Exhaustive minimum cost over all hotlink sets of size <= k drawn
/// from root-to-descendant candidates.
pub fn oracle_hotlink_minimum(
    tree: &RootedTree,
    weights: &BTreeMap<NodeId, Rat>,
    k: usize,
) -> Rat {
    let mut candidates: Vec<(NodeId, NodeId)> = Vec::new();
    for t in tree.nodes() {
        if t != tree.root && tree.parent.get(&t) != Some(&tree.root) {
            candidates.push((tree.root, t));
        }
    }
    let mut best = oracle_access_cost(tree, weights, &BTreeSet::new());
    let m = candidates.len();
    for mask in 0u64..(1 << m) {
        if (mask.count_ones() as usize) > k {
            continue;
        }
        let links: BTreeSet<(NodeId, NodeId)> = candidates
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &l)| l)
            .collect();
        let cost = oracle_access_cost(tree, weights, &links);
        if cost < best {
            best = cost;
        }
    }
    best
}

// -------------------------------------------------------------------
// dominance-peeling oracle
// -------------------------------------------------------------------

/// Pareto layer peeling over arbitrary comparable tuples, driven by a
/// caller-supplied dominance predicate.
pub fn oracle_peel_layers<T>(items: &[T], dominates: impl Fn(&T, &T) -> bool) -> Vec<usize> {
    let mut rank = vec![0usize; items.len()];
    let mut alive: BTreeSet<usize> = (0..items.len()).collect();
    let mut layer = 0;
    while !alive.is_empty() {
        layer += 1;
        let front: Vec<usize> = alive
            .iter()
            .copied()
            .filter(|&i| !alive.iter().any(|&j| j != i && dominates(&items[j], &items[i])))
            .collect();
        for i in front {
            rank[i] = layer;
            alive.remove(&i);
        }
    }
    rank
}

// -------------------------------------------------------------------
// clustering reference implementation
// -------------------------------------------------------------------

/// Independent agglomerative loop (full matrix rescan each round,
/// explicit tie handling); returns the partition after every merge.
pub fn oracle_agglomerate_states(
    ids: &[u32],
    rows: &[Vec<Rat>],
    target: usize,
) -> Vec<Vec<BTreeSet<u32>>> {
    #[derive(Clone)]
    struct Cl {
        ids: BTreeSet<u32>,
        vec: Vec<Rat>,
    }
    let mut live: Vec<Cl> = ids
        .iter()
        .zip(rows)
        .map(|(&id, row)| Cl {
            ids: BTreeSet::from([id]),
            vec: row.clone(),
        })
        .collect();
    let mut states = vec![live.iter().map(|c| c.ids.clone()).collect::<Vec<_>>()];
    while live.len() > target {
        let mut best: Option<(Rat, (u32, u32), usize, usize)> = None;
        for j in 0..live.len() {
            for i in 0..j {
                let d2: Rat = live[i]
                    .vec
                    .iter()
                    .zip(&live[j].vec)
                    .map(|(&a, &b)| (a - b) * (a - b))
                    .sum();
                let (ma, mb) = (
                    *live[i].ids.iter().next().unwrap(),
                    *live[j].ids.iter().next().unwrap(),
                );
                let key = (ma.min(mb), ma.max(mb));
                let replace = match &best {
                    None => true,
                    Some((bd, bk, _, _)) => d2 < *bd || (d2 == *bd && key < *bk),
                };
                if replace {
                    best = Some((d2, key, i, j));
                }
            }
        }
        let (_, _, i, j) = best.unwrap();
        let half = Rat::new(1, 2);
        let merged = Cl {
            ids: live[i].ids.union(&live[j].ids).copied().collect(),
            vec: live[i]
                .vec
                .iter()
                .zip(&live[j].vec)
                .map(|(&a, &b)| (a + b) * half)
                .collect(),
        };
        live.remove(j);
        live.remove(i);
        live.push(merged);
        states.push(live.iter().map(|c| c.ids.clone()).collect());
    }
    states
}

// -------------------------------------------------------------------
// morphological enumeration oracle
// -------------------------------------------------------------------

/// Product-space filter over all leaf alternative combinations; counts
/// the combinations whose declared pairs all have compatibility >= 1.
pub fn oracle_morpho_count(h: &hierkit::morpho::MorphHierarchy) -> usize {
    let leaves = h.tree.leaves();
    let lookup = |la: NodeId, da: &str, lb: NodeId, db: &str| -> Option<u32> {
        for table in &h.tables {
            if table.leaves == (la, lb) {
                if let Some(v) = table
                    .entries
                    .iter()
                    .find(|(a, b, _)| a == da && b == db)
                    .map(|(_, _, v)| *v)
                {
                    return Some(v);
                }
            }
            if table.leaves == (lb, la) {
                if let Some(v) = table
                    .entries
                    .iter()
                    .find(|(a, b, _)| a == db && b == da)
                    .map(|(_, _, v)| *v)
                {
                    return Some(v);
                }
            }
        }
        None
    };
    let sizes: Vec<usize> = leaves.iter().map(|l| h.alternatives[l].len()).collect();
    let mut cursor = vec![0usize; sizes.len()];
    let mut count = 0usize;
    loop {
        let ok = (0..leaves.len()).all(|i| {
            ((i + 1)..leaves.len()).all(|j| {
                let da = &h.alternatives[&leaves[i]][cursor[i]].id;
                let db = &h.alternatives[&leaves[j]][cursor[j]].id;
                lookup(leaves[i], da, leaves[j], db).map_or(true, |v| v >= 1)
            })
        });
        if ok {
            count += 1;
        }
        let mut li = 0;
        loop {
            if li == sizes.len() {
                return count;
            }
            cursor[li] += 1;
            if cursor[li] < sizes[li] {
                break;
            }
            cursor[li] = 0;
            li += 1;
        }
    }
}
