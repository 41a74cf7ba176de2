//! Hierarchy modification: hotlink assignment, tree-to-Steiner-tree
//! augmentation and budgeted restructuring of existing solutions.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{edge, Edge, Graph, NodeId};
use crate::knapsack::{self, ChoiceGroup, ChoiceInstance, Item, Selection};
use crate::num::Rat;
use crate::tree::{tree_metrics, RootedTree};

// ---------------------------------------------------------------------
// Hotlinks
// ---------------------------------------------------------------------

/// Hotlink problem input: the searched information sits at the leaves,
/// shortcut arcs may start at any listed source (the root by default).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HotlinkInstance {
    pub tree: RootedTree,
    /// Access weight per leaf; missing leaves count as zero.
    pub weights: BTreeMap<NodeId, Rat>,
    pub k: usize,
    pub sources: BTreeSet<NodeId>,
}

impl HotlinkInstance {
    pub fn new(tree: RootedTree, weights: BTreeMap<NodeId, Rat>, k: usize) -> HotlinkInstance {
        let sources = BTreeSet::from([tree.root]);
        HotlinkInstance {
            tree,
            weights,
            k,
            sources,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.tree.validate()?;
        let mut any_positive = false;
        for (&v, w) in &self.weights {
            if w.is_negative() {
                return Err(Error::NegativeLeafWeight(v));
            }
            if !w.is_zero() {
                any_positive = true;
            }
        }
        if !any_positive {
            return Err(Error::validation(
                "weights",
                "leaf access weights must not be all zero",
            ));
        }
        for &s in &self.sources {
            if !self.tree.contains(s) {
                return Err(Error::UnknownVertex(s));
            }
        }
        Ok(())
    }

    /// All admissible shortcut arcs: proper descendants of a source that
    /// are not already its children.
    pub fn candidate_links(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for &s in &self.sources {
            for t in self.tree.subtree(s) {
                if t == s || self.tree.parent.get(&t) == Some(&s) {
                    continue;
                }
                out.push((s, t));
            }
        }
        out.sort_unstable();
        out
    }
}

/// A set of shortcut arcs.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HotlinkSet {
    pub links: BTreeSet<(NodeId, NodeId)>,
}

/// Weighted mean number of arcs from the root to each leaf when the
/// user can also take hotlink shortcuts (shortest path in the combined
/// arc set; every arc counts one step).
pub fn expected_access_cost(
    tree: &RootedTree,
    weights: &BTreeMap<NodeId, Rat>,
    hotlinks: &HotlinkSet,
) -> Rat {
    let mut succ: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for (&c, &p) in &tree.parent {
        succ.entry(p).or_default().push(c);
    }
    for &(s, t) in &hotlinks.links {
        succ.entry(s).or_default().push(t);
    }
    let mut dist: BTreeMap<NodeId, usize> = BTreeMap::from([(tree.root, 0)]);
    let mut queue = VecDeque::from([tree.root]);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        for &n in succ.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
            if !dist.contains_key(&n) {
                dist.insert(n, d + 1);
                queue.push_back(n);
            }
        }
    }
    let mut total = Rat::ZERO;
    let mut mass = Rat::ZERO;
    for leaf in tree.leaves() {
        let w = weights.get(&leaf).copied().unwrap_or(Rat::ZERO);
        total += w * Rat::from(dist[&leaf]);
        mass += w;
    }
    if mass.is_zero() {
        Rat::ZERO
    } else {
        total / mass
    }
}

const HOTLINK_EXACT_LIMIT: usize = 20;

/// Minimizes the expected access cost over all hotlink sets of size at
/// most k; exhaustive over the candidate links.
pub fn hotlink_exact_small(instance: &HotlinkInstance) -> Result<HotlinkSet> {
    instance.validate()?;
    let candidates = instance.candidate_links();
    if candidates.len() > HOTLINK_EXACT_LIMIT {
        return Err(Error::TooLargeForExact(format!(
            "{} candidate links exceeds the exact bound {HOTLINK_EXACT_LIMIT}",
            candidates.len()
        )));
    }
    let mut best = HotlinkSet::default();
    let mut best_cost = expected_access_cost(&instance.tree, &instance.weights, &best);
    let k = instance.k.min(candidates.len());
    let mut subset: Vec<usize> = Vec::new();
    fn rec(
        candidates: &[(NodeId, NodeId)],
        k: usize,
        start: usize,
        subset: &mut Vec<usize>,
        instance: &HotlinkInstance,
        best: &mut HotlinkSet,
        best_cost: &mut Rat,
    ) {
        if !subset.is_empty() {
            let set = HotlinkSet {
                links: subset.iter().map(|&i| candidates[i]).collect(),
            };
            let cost = expected_access_cost(&instance.tree, &instance.weights, &set);
            if cost < *best_cost || (cost == *best_cost && set < *best) {
                *best = set;
                *best_cost = cost;
            }
        }
        if subset.len() == k {
            return;
        }
        for i in start..candidates.len() {
            subset.push(i);
            rec(candidates, k, i + 1, subset, instance, best, best_cost);
            subset.pop();
        }
    }
    rec(
        &candidates,
        k,
        0,
        &mut subset,
        instance,
        &mut best,
        &mut best_cost,
    );
    Ok(best)
}

/// Adds one hotlink per round, always the one with the largest marginal
/// reduction of the expected cost (ties: smallest target id, then
/// smallest source id); stops early when nothing improves.
pub fn hotlink_greedy(instance: &HotlinkInstance) -> Result<HotlinkSet> {
    instance.validate()?;
    let candidates = instance.candidate_links();
    let mut chosen = HotlinkSet::default();
    let mut cost = expected_access_cost(&instance.tree, &instance.weights, &chosen);
    for _ in 0..instance.k {
        let mut best: Option<((NodeId, NodeId), Rat)> = None;
        for &link in &candidates {
            if chosen.links.contains(&link) {
                continue;
            }
            let mut trial = chosen.clone();
            trial.links.insert(link);
            let trial_cost = expected_access_cost(&instance.tree, &instance.weights, &trial);
            if trial_cost >= cost {
                continue;
            }
            let better = match best {
                None => true,
                Some((blink, bcost)) => {
                    trial_cost < bcost
                        || (trial_cost == bcost && (link.1, link.0) < (blink.1, blink.0))
                }
            };
            if better {
                best = Some((link, trial_cost));
            }
        }
        let Some((link, new_cost)) = best else { break };
        chosen.links.insert(link);
        cost = new_cost;
    }
    Ok(chosen)
}

// ---------------------------------------------------------------------
// Tree -> Steiner tree augmentation
// ---------------------------------------------------------------------

/// How a Steiner point is wired into the tree when selected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Splice {
    /// Id of the added Steiner node.
    pub node: NodeId,
    /// Tree edges removed by the splice.
    pub remove: Vec<(NodeId, NodeId)>,
    /// Edges added by the splice (typically from `node` to the region).
    pub add: Vec<(NodeId, NodeId)>,
}

/// One candidate Steiner point with its objective and resource
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SteinerCandidate {
    pub id: String,
    pub profit: Rat,
    pub weight: Rat,
    pub splice: Splice,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentRegion {
    pub name: String,
    pub members: BTreeSet<NodeId>,
    pub candidates: Vec<SteinerCandidate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentInstance {
    pub tree: RootedTree,
    pub regions: Vec<AugmentRegion>,
    pub budget: Rat,
}

impl AugmentInstance {
    pub fn validate(&self) -> Result<()> {
        self.tree.validate()?;
        let tree_edges: BTreeSet<Edge> = self
            .tree
            .parent
            .iter()
            .map(|(&c, &p)| edge(c, p))
            .collect();
        for (ri, region) in self.regions.iter().enumerate() {
            if region.members.is_empty() {
                return Err(Error::validation(
                    format!("regions[{ri}].members"),
                    "region must not be empty",
                ));
            }
            for (ci, cand) in region.candidates.iter().enumerate() {
                for &(u, v) in &cand.splice.remove {
                    if !tree_edges.contains(&edge(u, v)) {
                        return Err(Error::validation(
                            format!("regions[{ri}].candidates[{ci}].splice.remove"),
                            format!("({u},{v}) is not a tree edge"),
                        ));
                    }
                }
                if self.tree.contains(cand.splice.node) {
                    return Err(Error::validation(
                        format!("regions[{ri}].candidates[{ci}].splice.node"),
                        "steiner node id collides with a tree node",
                    ));
                }
            }
        }
        Ok(())
    }

    /// The selection model: one option per region, an implicit zero-cost
    /// "none" option plus the region's candidates.
    pub fn to_choice_instance(&self) -> ChoiceInstance {
        ChoiceInstance {
            groups: self
                .regions
                .iter()
                .map(|r| ChoiceGroup {
                    name: r.name.clone(),
                    options: std::iter::once(Item {
                        id: "none".into(),
                        profit: Rat::ZERO,
                        weight: Rat::ZERO,
                    })
                    .chain(r.candidates.iter().map(|c| Item {
                        id: c.id.clone(),
                        profit: c.profit,
                        weight: c.weight,
                    }))
                    .collect(),
                })
                .collect(),
            budget: self.budget,
        }
    }
}

/// Selects Steiner points by the multiple choice model and splices them
/// into the tree; the result is re-rooted at the original root and must
/// stay a tree.
pub fn steiner_augment(instance: &AugmentInstance) -> Result<(Selection, RootedTree)> {
    instance.validate()?;
    let selection = knapsack::multiple_choice_exact(&instance.to_choice_instance())?;
    let mut edges: BTreeSet<Edge> = instance
        .tree
        .parent
        .iter()
        .map(|(&c, &p)| edge(c, p))
        .collect();
    let mut nodes = instance.tree.nodes();
    for (region, chosen_id) in instance.regions.iter().zip(&selection.chosen) {
        if chosen_id == "none" {
            continue;
        }
        let cand = region
            .candidates
            .iter()
            .find(|c| &c.id == chosen_id)
            .expect("selection ids come from the candidate list");
        for &(u, v) in &cand.splice.remove {
            if !edges.remove(&edge(u, v)) {
                return Err(Error::validation(
                    "splice",
                    format!("edge ({u},{v}) removed twice by overlapping splices"),
                ));
            }
        }
        nodes.insert(cand.splice.node);
        for &(u, v) in &cand.splice.add {
            edges.insert(edge(u, v));
        }
    }
    let tree = rooted_from_edges(instance.tree.root, &nodes, &edges)?;
    Ok((selection, tree))
}

/// Rebuilds a parent map from an undirected edge set; fails unless the
/// edges form a tree spanning `nodes`.
fn rooted_from_edges(
    root: NodeId,
    nodes: &BTreeSet<NodeId>,
    edges: &BTreeSet<Edge>,
) -> Result<RootedTree> {
    if edges.len() + 1 != nodes.len() {
        return Err(Error::validation(
            "splice",
            "spliced edge set does not have tree cardinality",
        ));
    }
    let mut adj: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for &(u, v) in edges {
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    let mut parent = BTreeMap::new();
    let mut seen = BTreeSet::from([root]);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &n in adj.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
            if seen.insert(n) {
                parent.insert(n, v);
                queue.push_back(n);
            }
        }
    }
    if seen.len() != nodes.len() {
        return Err(Error::validation(
            "splice",
            "spliced structure is disconnected",
        ));
    }
    RootedTree::new(root, parent)
}

// ---------------------------------------------------------------------
// Restructuring
// ---------------------------------------------------------------------

/// Element-wise change costs; elements without an entry cost one unit.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangeCosts {
    #[serde(default)]
    pub add: BTreeMap<String, Rat>,
    #[serde(default)]
    pub remove: BTreeMap<String, Rat>,
}

impl ChangeCosts {
    fn add_cost(&self, element: &str) -> Rat {
        self.add.get(element).copied().unwrap_or(Rat::ONE)
    }

    fn remove_cost(&self, element: &str) -> Rat {
        self.remove.get(element).copied().unwrap_or(Rat::ONE)
    }
}

/// Cost of transforming one solution into another: additions pay the
/// add cost, deletions the remove cost.
pub fn change_cost(
    from: &BTreeSet<String>,
    to: &BTreeSet<String>,
    costs: &ChangeCosts,
) -> Rat {
    let added: Rat = to.difference(from).map(|e| costs.add_cost(e)).sum();
    let removed: Rat = from.difference(to).map(|e| costs.remove_cost(e)).sum();
    added + removed
}

/// Lower bounds on structure metrics used as a feasibility filter for
/// goal-structure searches.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricBounds {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_leaf_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_max_degree: Option<usize>,
}

impl MetricBounds {
    fn is_empty(&self) -> bool {
        self.min_leaf_count.is_none() && self.min_depth.is_none() && self.min_max_degree.is_none()
    }
}

/// The combinatorial problem a restructured solution must stay feasible
/// for. Spanning-tree solutions are edge sets encoded as `u-v` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EmbeddedProblem {
    Knapsack {
        items: Vec<Item>,
        budget: Rat,
    },
    Mchoice {
        groups: Vec<ChoiceGroup>,
        budget: Rat,
    },
    SpanningTree {
        graph: Graph,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        root: Option<NodeId>,
        #[serde(default, skip_serializing_if = "MetricBounds::is_empty")]
        metric_bounds: MetricBounds,
    },
}

pub fn edge_id(u: NodeId, v: NodeId) -> String {
    let (a, b) = edge(u, v);
    format!("{a}-{b}")
}

fn parse_edge_id(text: &str) -> Result<Edge> {
    let parts: Vec<&str> = text.split('-').collect();
    if parts.len() != 2 {
        return Err(Error::Syntax(format!("bad edge id {text:?}")));
    }
    let u: NodeId = parts[0]
        .parse()
        .map_err(|_| Error::Syntax(format!("bad edge id {text:?}")))?;
    let v: NodeId = parts[1]
        .parse()
        .map_err(|_| Error::Syntax(format!("bad edge id {text:?}")))?;
    Ok(edge(u, v))
}

impl EmbeddedProblem {
    /// Objective value of a solution (profit for the selection problems,
    /// total edge weight for spanning trees).
    pub fn objective(&self, solution: &BTreeSet<String>) -> Result<Rat> {
        match self {
            EmbeddedProblem::Knapsack { items, .. } => items
                .iter()
                .filter(|it| solution.contains(&it.id))
                .map(|it| Ok(it.profit))
                .sum(),
            EmbeddedProblem::Mchoice { groups, .. } => groups
                .iter()
                .flat_map(|g| g.options.iter())
                .filter(|o| solution.contains(&o.id))
                .map(|o| Ok(o.profit))
                .sum(),
            EmbeddedProblem::SpanningTree { graph, .. } => solution
                .iter()
                .map(|id| {
                    let (u, v) = parse_edge_id(id)?;
                    graph
                        .weight(u, v)
                        .ok_or_else(|| Error::validation("solution", format!("unknown edge {id}")))
                })
                .sum(),
        }
    }

    pub fn is_feasible(&self, solution: &BTreeSet<String>) -> bool {
        self.check_feasible(solution).is_ok()
    }

    fn check_feasible(&self, solution: &BTreeSet<String>) -> Result<()> {
        match self {
            EmbeddedProblem::Knapsack { items, budget } => {
                let by_id: BTreeMap<&str, &Item> =
                    items.iter().map(|it| (it.id.as_str(), it)).collect();
                let mut total = Rat::ZERO;
                for id in solution {
                    let item = by_id.get(id.as_str()).ok_or_else(|| {
                        Error::validation("solution", format!("unknown item {id}"))
                    })?;
                    total += item.weight;
                }
                if total > *budget {
                    return Err(Error::Infeasible("weight over budget".into()));
                }
                Ok(())
            }
            EmbeddedProblem::Mchoice { groups, budget } => {
                let mut total = Rat::ZERO;
                for (gi, group) in groups.iter().enumerate() {
                    let chosen: Vec<&Item> = group
                        .options
                        .iter()
                        .filter(|o| solution.contains(&o.id))
                        .collect();
                    if chosen.len() != 1 {
                        return Err(Error::validation(
                            format!("groups[{gi}]"),
                            "exactly one option per group required",
                        ));
                    }
                    total += chosen[0].weight;
                }
                if total > *budget {
                    return Err(Error::Infeasible("weight over budget".into()));
                }
                Ok(())
            }
            EmbeddedProblem::SpanningTree {
                graph,
                root,
                metric_bounds,
            } => {
                let mut edges = BTreeSet::new();
                for id in solution {
                    let (u, v) = parse_edge_id(id)?;
                    if graph.weight(u, v).is_none() {
                        return Err(Error::validation(
                            "solution",
                            format!("unknown edge {id}"),
                        ));
                    }
                    edges.insert((u, v));
                }
                let nodes: BTreeSet<NodeId> = graph.nodes().collect();
                if edges.len() + 1 != nodes.len() {
                    return Err(Error::Infeasible("not a spanning tree".into()));
                }
                let root = root.unwrap_or_else(|| *nodes.iter().next().unwrap());
                let tree = rooted_from_edges(root, &nodes, &edges)
                    .map_err(|_| Error::Infeasible("not a spanning tree".into()))?;
                if !metric_bounds.is_empty() {
                    let metrics = tree_metrics(&tree, None)?;
                    if metric_bounds
                        .min_leaf_count
                        .is_some_and(|b| metrics.leaf_count < b)
                        || metric_bounds.min_depth.is_some_and(|b| metrics.depth < b)
                        || metric_bounds
                            .min_max_degree
                            .is_some_and(|b| metrics.max_degree < b)
                    {
                        return Err(Error::Infeasible("metric bounds violated".into()));
                    }
                }
                Ok(())
            }
        }
    }

    /// Every feasible solution, for the exact-small search.
    fn enumerate_feasible(&self) -> Result<Vec<BTreeSet<String>>> {
        match self {
            EmbeddedProblem::Knapsack { items, .. } => {
                if items.len() > 20 {
                    return Err(Error::TooLargeForExact(format!(
                        "{} items in the embedded knapsack",
                        items.len()
                    )));
                }
                let mut out = Vec::new();
                for mask in 0u64..(1u64 << items.len()) {
                    let set: BTreeSet<String> = items
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, it)| it.id.clone())
                        .collect();
                    if self.is_feasible(&set) {
                        out.push(set);
                    }
                }
                Ok(out)
            }
            EmbeddedProblem::Mchoice { groups, .. } => {
                let combos: usize = groups.iter().map(|g| g.options.len()).product();
                if combos > 1_000_000 {
                    return Err(Error::TooLargeForExact(format!(
                        "{combos} option combinations"
                    )));
                }
                let mut out = Vec::new();
                let mut cursor = vec![0usize; groups.len()];
                loop {
                    let set: BTreeSet<String> = groups
                        .iter()
                        .zip(&cursor)
                        .map(|(g, &i)| g.options[i].id.clone())
                        .collect();
                    if self.is_feasible(&set) {
                        out.push(set);
                    }
                    let mut gi = 0;
                    loop {
                        if gi == groups.len() {
                            return Ok(out);
                        }
                        cursor[gi] += 1;
                        if cursor[gi] < groups[gi].options.len() {
                            break;
                        }
                        cursor[gi] = 0;
                        gi += 1;
                    }
                }
            }
            EmbeddedProblem::SpanningTree { graph, .. } => {
                let trees = enumerate_spanning_trees(graph, 2_000_000)?;
                Ok(trees
                    .into_iter()
                    .map(|edges| edges.iter().map(|&(u, v)| edge_id(u, v)).collect())
                    .filter(|set| self.is_feasible(set))
                    .collect())
            }
        }
    }
}

/// All spanning trees of a graph by include/exclude recursion over the
/// edge list, with a hard output cap.
pub fn enumerate_spanning_trees(graph: &Graph, cap: usize) -> Result<Vec<BTreeSet<Edge>>> {
    let n = graph.node_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    let edges: Vec<Edge> = graph.edges().map(|(e, _)| e).collect();
    let mut out: Vec<BTreeSet<Edge>> = Vec::new();
    let mut chosen: Vec<Edge> = Vec::new();

    fn components(nodes: &BTreeSet<NodeId>, edges: &[Edge]) -> usize {
        let mut uf: BTreeMap<NodeId, NodeId> = nodes.iter().map(|&v| (v, v)).collect();
        fn find(uf: &mut BTreeMap<NodeId, NodeId>, v: NodeId) -> NodeId {
            let p = uf[&v];
            if p == v {
                return v;
            }
            let r = find(uf, p);
            uf.insert(v, r);
            r
        }
        let mut count = nodes.len();
        for &(u, v) in edges {
            let (ru, rv) = (find(&mut uf, u), find(&mut uf, v));
            if ru != rv {
                uf.insert(ru.max(rv), ru.min(rv));
                count -= 1;
            }
        }
        count
    }

    fn rec(
        all: &[Edge],
        nodes: &BTreeSet<NodeId>,
        index: usize,
        chosen: &mut Vec<Edge>,
        out: &mut Vec<BTreeSet<Edge>>,
        cap: usize,
    ) -> Result<()> {
        if out.len() > cap {
            return Err(Error::TooLargeForExact(
                "spanning tree enumeration exceeded its cap".into(),
            ));
        }
        if chosen.len() == nodes.len() - 1 {
            if components(nodes, chosen) == 1 {
                out.push(chosen.iter().copied().collect());
            }
            return Ok(());
        }
        if index == all.len() || all.len() - index < nodes.len() - 1 - chosen.len() {
            return Ok(());
        }
        // include all[index] unless it closes a cycle
        let mut trial = chosen.clone();
        trial.push(all[index]);
        if components(nodes, &trial) < components(nodes, chosen) {
            chosen.push(all[index]);
            rec(all, nodes, index + 1, chosen, out, cap)?;
            chosen.pop();
        }
        rec(all, nodes, index + 1, chosen, out, cap)
    }

    let nodes: BTreeSet<NodeId> = graph.nodes().collect();
    rec(&edges, &nodes, 0, &mut chosen, &mut out, cap)?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProximityMode {
    SymmetricDifference,
    ObjectiveGap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RestructureMode {
    ExactSmall,
    Greedy,
}

/// Restructuring input: move solution `s1` toward the goal `s2` within
/// a change-cost budget, staying feasible for the embedded problem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestructureInstance {
    pub problem: EmbeddedProblem,
    pub s1: BTreeSet<String>,
    pub s2: BTreeSet<String>,
    #[serde(default)]
    pub costs: ChangeCosts,
    pub h_max: Rat,
    pub proximity: ProximityMode,
}

impl RestructureInstance {
    pub fn proximity(&self, a: &BTreeSet<String>, b: &BTreeSet<String>) -> Result<Rat> {
        match self.proximity {
            ProximityMode::SymmetricDifference => {
                Ok(Rat::from(a.symmetric_difference(b).count()))
            }
            ProximityMode::ObjectiveGap => {
                Ok((self.problem.objective(a)? - self.problem.objective(b)?).abs())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestructureOutcome {
    pub solution: BTreeSet<String>,
    pub change_cost: Rat,
    pub proximity_to_goal: Rat,
}

/// Minimizes proximity to the goal under the change-cost budget.
pub fn restructure_solve(
    instance: &RestructureInstance,
    mode: RestructureMode,
) -> Result<RestructureOutcome> {
    instance
        .problem
        .check_feasible(&instance.s1)
        .map_err(|e| Error::Infeasible(format!("s1 is not feasible: {e}")))?;
    instance
        .problem
        .check_feasible(&instance.s2)
        .map_err(|e| Error::Infeasible(format!("s2 is not feasible: {e}")))?;
    if instance.h_max.is_negative() {
        return Err(Error::validation("h_max", "budget must be nonnegative"));
    }
    let solution = match mode {
        RestructureMode::ExactSmall => {
            let mut best: Option<(Rat, BTreeSet<String>)> = None;
            for candidate in instance.problem.enumerate_feasible()? {
                if change_cost(&instance.s1, &candidate, &instance.costs) > instance.h_max {
                    continue;
                }
                let rho = instance.proximity(&candidate, &instance.s2)?;
                let better = match &best {
                    None => true,
                    Some((brho, bset)) => rho < *brho || (rho == *brho && candidate < *bset),
                };
                if better {
                    best = Some((rho, candidate));
                }
            }
            best.expect("s1 itself is always within budget").1
        }
        RestructureMode::Greedy => greedy_walk(instance)?,
    };
    Ok(RestructureOutcome {
        change_cost: change_cost(&instance.s1, &solution, &instance.costs),
        proximity_to_goal: instance.proximity(&solution, &instance.s2)?,
        solution,
    })
}

/// Single-move neighborhood walk from s1 toward s2: each round applies
/// the cheapest feasible move that strictly reduces the proximity, until
/// the budget is exhausted or no move helps.
fn greedy_walk(instance: &RestructureInstance) -> Result<BTreeSet<String>> {
    let mut current = instance.s1.clone();
    loop {
        let spent = change_cost(&instance.s1, &current, &instance.costs);
        let rho = instance.proximity(&current, &instance.s2)?;
        let mut best: Option<(Rat, Rat, BTreeSet<String>)> = None; // (cost, rho, set)
        for candidate in restructure_moves(instance, &current) {
            if !instance.problem.is_feasible(&candidate) {
                continue;
            }
            let total = change_cost(&instance.s1, &candidate, &instance.costs);
            if total > instance.h_max {
                continue;
            }
            let step_cost = total - spent;
            let new_rho = instance.proximity(&candidate, &instance.s2)?;
            if new_rho >= rho {
                continue;
            }
            let better = match &best {
                None => true,
                Some((bc, brho, bset)) => {
                    step_cost < *bc
                        || (step_cost == *bc && new_rho < *brho)
                        || (step_cost == *bc && new_rho == *brho && candidate < *bset)
                }
            };
            if better {
                best = Some((step_cost, new_rho, candidate));
            }
        }
        match best {
            Some((_, _, next)) => current = next,
            None => return Ok(current),
        }
    }
}

/// Neighborhood of single moves toward the goal solution.
fn restructure_moves(
    instance: &RestructureInstance,
    current: &BTreeSet<String>,
) -> Vec<BTreeSet<String>> {
    let mut moves = Vec::new();
    match &instance.problem {
        EmbeddedProblem::Knapsack { .. } => {
            for e in instance.s2.difference(current) {
                let mut next = current.clone();
                next.insert(e.clone());
                moves.push(next);
            }
            for e in current.difference(&instance.s2) {
                let mut next = current.clone();
                next.remove(e);
                moves.push(next);
            }
        }
        EmbeddedProblem::Mchoice { groups, .. } => {
            for group in groups {
                let cur = group.options.iter().find(|o| current.contains(&o.id));
                let goal = group.options.iter().find(|o| instance.s2.contains(&o.id));
                if let (Some(cur), Some(goal)) = (cur, goal) {
                    if cur.id != goal.id {
                        let mut next = current.clone();
                        next.remove(&cur.id);
                        next.insert(goal.id.clone());
                        moves.push(next);
                    }
                }
            }
        }
        EmbeddedProblem::SpanningTree { graph, .. } => {
            // edge exchange: bring in a goal edge, drop a non-goal edge
            for add in instance.s2.difference(current) {
                for remove in current.difference(&instance.s2) {
                    let mut next = current.clone();
                    next.insert(add.clone());
                    next.remove(remove);
                    let _ = graph;
                    moves.push(next);
                }
            }
        }
    }
    moves
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(v: i64) -> Rat {
        Rat::from(v)
    }

    /// chain 0 -> 1 -> 2 -> 3 plus a short branch 0 -> 4.
    fn chain_tree() -> RootedTree {
        RootedTree::new(0, BTreeMap::from([(1, 0), (2, 1), (3, 2), (4, 0)])).unwrap()
    }

    fn uniform_weights(tree: &RootedTree) -> BTreeMap<NodeId, Rat> {
        tree.leaves().into_iter().map(|v| (v, Rat::ONE)).collect()
    }

    #[test]
    fn access_cost_without_links_is_mean_depth() {
        let tree = chain_tree();
        let cost = expected_access_cost(&tree, &uniform_weights(&tree), &HotlinkSet::default());
        // leaves 3 (depth 3) and 4 (depth 1)
        assert_eq!(cost, Rat::new(4, 2));
    }

    #[test]
    fn shortcut_to_deep_parent_cuts_distance() {
        let tree = chain_tree();
        let links = HotlinkSet {
            links: BTreeSet::from([(0, 2)]),
        };
        let cost = expected_access_cost(&tree, &uniform_weights(&tree), &links);
        // leaf 3 now reachable in 2 steps
        assert_eq!(cost, Rat::new(3, 2));
    }

    #[test]
    fn exact_k0_changes_nothing() {
        let tree = chain_tree();
        let instance = HotlinkInstance {
            k: 0,
            ..HotlinkInstance::new(tree.clone(), uniform_weights(&tree), 0)
        };
        assert!(hotlink_exact_small(&instance).unwrap().links.is_empty());
    }

    #[test]
    fn greedy_single_pick_matches_exact_cost() {
        let tree = chain_tree();
        let instance = HotlinkInstance::new(tree.clone(), uniform_weights(&tree), 1);
        let exact = hotlink_exact_small(&instance).unwrap();
        let greedy = hotlink_greedy(&instance).unwrap();
        assert_eq!(
            expected_access_cost(&tree, &instance.weights, &exact),
            expected_access_cost(&tree, &instance.weights, &greedy),
        );
    }

    #[test]
    fn greedy_cost_monotone_per_round() {
        let parent: BTreeMap<NodeId, NodeId> =
            [(1, 0), (2, 0), (3, 1), (4, 1), (5, 2), (6, 3), (7, 5)].into();
        let tree = RootedTree::new(0, parent).unwrap();
        let weights = uniform_weights(&tree);
        let mut last = expected_access_cost(&tree, &weights, &HotlinkSet::default());
        for k in 1..=3 {
            let instance = HotlinkInstance::new(tree.clone(), weights.clone(), k);
            let links = hotlink_greedy(&instance).unwrap();
            let cost = expected_access_cost(&tree, &weights, &links);
            assert!(cost <= last);
            last = cost;
        }
    }

    #[test]
    fn weights_all_zero_rejected() {
        let tree = chain_tree();
        let weights = BTreeMap::from([(3, Rat::ZERO)]);
        let instance = HotlinkInstance::new(tree, weights, 1);
        assert!(instance.validate().is_err());
    }

    fn small_augment() -> AugmentInstance {
        // path 0 -> 1 -> 2; candidate splices a hub 10 replacing both arcs
        let tree = RootedTree::new(0, BTreeMap::from([(1, 0), (2, 1)])).unwrap();
        AugmentInstance {
            tree,
            regions: vec![AugmentRegion {
                name: "r1".into(),
                members: BTreeSet::from([0, 1, 2]),
                candidates: vec![SteinerCandidate {
                    id: "s11".into(),
                    profit: rat(3),
                    weight: rat(2),
                    splice: Splice {
                        node: 10,
                        remove: vec![(0, 1), (1, 2)],
                        add: vec![(10, 0), (10, 1), (10, 2)],
                    },
                }],
            }],
            budget: rat(2),
        }
    }

    #[test]
    fn augment_zero_budget_keeps_tree() {
        let mut instance = small_augment();
        instance.budget = Rat::ZERO;
        let (sel, tree) = steiner_augment(&instance).unwrap();
        assert_eq!(sel.chosen, vec!["none"]);
        assert_eq!(tree, instance.tree);
    }

    #[test]
    fn augment_splices_selected_point() {
        let instance = small_augment();
        let (sel, tree) = steiner_augment(&instance).unwrap();
        assert_eq!(sel.chosen, vec!["s11"]);
        assert_eq!(sel.total_profit, rat(3));
        assert!(tree.contains(10));
        assert_eq!(tree.node_count(), 4);
        assert_eq!(tree.parent[&1], 10);
    }

    #[test]
    fn change_cost_unit_is_symmetric_difference() {
        let a: BTreeSet<String> = ["x".into(), "y".into()].into();
        let b: BTreeSet<String> = ["y".into(), "z".into(), "w".into()].into();
        assert_eq!(change_cost(&a, &b, &ChangeCosts::default()), rat(3));
        assert_eq!(change_cost(&a, &a, &ChangeCosts::default()), Rat::ZERO);
    }

    fn knapsack_restructure(h: i64) -> RestructureInstance {
        let items = vec![
            Item {
                id: "a".into(),
                profit: rat(3),
                weight: rat(2),
            },
            Item {
                id: "b".into(),
                profit: rat(2),
                weight: rat(2),
            },
            Item {
                id: "c".into(),
                profit: rat(4),
                weight: rat(3),
            },
        ];
        RestructureInstance {
            problem: EmbeddedProblem::Knapsack {
                items,
                budget: rat(5),
            },
            s1: ["a".into(), "b".into()].into(),
            s2: ["a".into(), "c".into()].into(),
            costs: ChangeCosts::default(),
            h_max: rat(h),
            proximity: ProximityMode::SymmetricDifference,
        }
    }

    #[test]
    fn zero_budget_returns_s1() {
        let instance = knapsack_restructure(0);
        for mode in [RestructureMode::ExactSmall, RestructureMode::Greedy] {
            let out = restructure_solve(&instance, mode).unwrap();
            assert_eq!(out.solution, instance.s1);
            assert_eq!(out.change_cost, Rat::ZERO);
        }
    }

    #[test]
    fn ample_budget_reaches_goal() {
        let instance = knapsack_restructure(10);
        for mode in [RestructureMode::ExactSmall, RestructureMode::Greedy] {
            let out = restructure_solve(&instance, mode).unwrap();
            assert_eq!(out.solution, instance.s2);
            assert_eq!(out.proximity_to_goal, Rat::ZERO);
        }
    }

    #[test]
    fn spanning_tree_enumeration_on_triangle() {
        let mut g = Graph::with_nodes([1, 2, 3]);
        g.add_edge(1, 2, Rat::ONE).unwrap();
        g.add_edge(2, 3, Rat::ONE).unwrap();
        g.add_edge(1, 3, Rat::ONE).unwrap();
        let trees = enumerate_spanning_trees(&g, 100).unwrap();
        assert_eq!(trees.len(), 3);
    }

    #[test]
    fn spanning_restructure_edge_exchange() {
        let mut g = Graph::with_nodes([1, 2, 3]);
        g.add_edge(1, 2, Rat::ONE).unwrap();
        g.add_edge(2, 3, Rat::ONE).unwrap();
        g.add_edge(1, 3, Rat::ONE).unwrap();
        let instance = RestructureInstance {
            problem: EmbeddedProblem::SpanningTree {
                graph: g,
                root: None,
                metric_bounds: MetricBounds::default(),
            },
            s1: [edge_id(1, 2), edge_id(2, 3)].into(),
            s2: [edge_id(1, 3), edge_id(2, 3)].into(),
            costs: ChangeCosts::default(),
            h_max: rat(2),
            proximity: ProximityMode::SymmetricDifference,
        };
        let exact = restructure_solve(&instance, RestructureMode::ExactSmall).unwrap();
        let greedy = restructure_solve(&instance, RestructureMode::Greedy).unwrap();
        assert_eq!(exact.solution, instance.s2);
        assert_eq!(greedy.solution, instance.s2);
    }
}
