//! Overlay-tree condensing: merge tree vertices to save call frequency
//! while keeping root-to-leaf RAM chains within budget.
//!
//! Two constraint kinds are supported. Kind 1 bounds the whole condensed
//! tree weight (heaviest root-to-leaf RAM chain) by `b`; kind 2 bounds
//! the condensed root component ("kernel") by `b-` and the heaviest
//! remaining tail by `b+`. Exact-small mode enumerates condensation
//! plans; approx mode runs a bottom-up cascade over per-subtree option
//! menus with an (epsilon) profit guarantee and a (1+delta) constraint
//! relaxation.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::num::Rat;
use crate::tree::RootedTree;

/// Rooted tree with per-vertex RAM weights and per-arc call frequencies
/// (the frequency is keyed by the arc's child endpoint).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlayTree {
    pub tree: RootedTree,
    pub ram: BTreeMap<NodeId, Rat>,
    pub freq: BTreeMap<NodeId, Rat>,
}

impl OverlayTree {
    pub fn validate(&self) -> Result<()> {
        self.tree.validate()?;
        for v in self.tree.nodes() {
            match self.ram.get(&v) {
                Some(r) if *r > Rat::ZERO => {}
                Some(_) => {
                    return Err(Error::validation(
                        format!("ram[{v}]"),
                        "RAM weight must be positive",
                    ))
                }
                None => {
                    return Err(Error::validation(
                        format!("ram[{v}]"),
                        "missing RAM weight",
                    ))
                }
            }
            if v != self.tree.root {
                match self.freq.get(&v) {
                    Some(f) if *f > Rat::ZERO => {}
                    Some(_) => {
                        return Err(Error::validation(
                            format!("freq[{v}]"),
                            "call frequency must be positive",
                        ))
                    }
                    None => {
                        return Err(Error::validation(
                            format!("freq[{v}]"),
                            "missing call frequency",
                        ))
                    }
                }
            }
        }
        Ok(())
    }

    pub fn non_root_vertices(&self) -> Vec<NodeId> {
        self.tree.parent.keys().copied().collect()
    }

    pub fn total_ram(&self) -> Rat {
        self.tree.nodes().iter().map(|v| self.ram[v]).sum()
    }

    pub fn total_freq(&self) -> Rat {
        self.freq.values().copied().sum()
    }
}

/// Binary condensation plan over the non-root vertices: membership means
/// the arc into that vertex is condensed.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CondensePlan {
    pub condensed: BTreeSet<NodeId>,
}

impl CondensePlan {
    pub fn empty() -> CondensePlan {
        CondensePlan::default()
    }

    pub fn all(tree: &OverlayTree) -> CondensePlan {
        CondensePlan {
            condensed: tree.non_root_vertices().into_iter().collect(),
        }
    }

    pub fn validate(&self, tree: &OverlayTree) -> Result<()> {
        for &v in &self.condensed {
            if v == tree.tree.root || !tree.tree.contains(v) {
                return Err(Error::validation(
                    "plan",
                    format!("vertex {v} is not a condensable non-root vertex"),
                ));
            }
        }
        Ok(())
    }
}

/// Condensed tree plus the recomputable report numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CondenseResult {
    pub plan: CondensePlan,
    pub condensed: OverlayTree,
    /// Sum of the call frequencies of condensed arcs.
    pub saved_frequency: Rat,
    /// RAM weight of the condensed root component.
    pub chain_weight: Rat,
    /// Heaviest remaining root tail (tree weight minus kernel).
    pub tail_weight: Rat,
}

/// Merges every condensed arc: each merged component collapses into its
/// topmost vertex, which keeps that vertex's id, accumulates the
/// component's RAM and inherits the outgoing uncondensed arcs. Chained
/// condensations compose because components are closed under the merge
/// relation.
pub fn apply_plan(tree: &OverlayTree, plan: &CondensePlan) -> Result<OverlayTree> {
    tree.validate()?;
    plan.validate(tree)?;
    // host(v): topmost vertex of v's merged component
    let mut host: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let nodes = tree.tree.nodes();
    for &v in &nodes {
        let mut cur = v;
        while plan.condensed.contains(&cur) {
            cur = tree.tree.parent[&cur];
        }
        host.insert(v, cur);
    }
    let mut ram: BTreeMap<NodeId, Rat> = BTreeMap::new();
    for &v in &nodes {
        *ram.entry(host[&v]).or_insert(Rat::ZERO) += tree.ram[&v];
    }
    let mut parent: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let mut freq: BTreeMap<NodeId, Rat> = BTreeMap::new();
    for (&child, &par) in &tree.tree.parent {
        if plan.condensed.contains(&child) {
            continue;
        }
        parent.insert(child, host[&par]);
        freq.insert(child, tree.freq[&child]);
    }
    let out = OverlayTree {
        tree: RootedTree {
            root: tree.tree.root,
            parent,
            node_weight: BTreeMap::new(),
            arc_weight: BTreeMap::new(),
        },
        ram,
        freq,
    };
    out.validate()?;
    Ok(out)
}

/// Heaviest root-to-leaf RAM chain.
pub fn tree_weight(tree: &OverlayTree) -> Rat {
    down_weight(tree, tree.tree.root)
}

/// RAM sum of the heaviest path from `v` to a leaf below it.
fn down_weight(tree: &OverlayTree, v: NodeId) -> Rat {
    let children = tree.tree.children(v);
    let below = children
        .into_iter()
        .map(|c| down_weight(tree, c))
        .max()
        .unwrap_or(Rat::ZERO);
    tree.ram[&v] + below
}

/// Tail weight of a vertex: subtree weight minus the vertex's own RAM.
pub fn tail_weight(tree: &OverlayTree, v: NodeId) -> Result<Rat> {
    if !tree.tree.contains(v) {
        return Err(Error::UnknownVertex(v));
    }
    Ok(down_weight(tree, v) - tree.ram[&v])
}

pub fn saved_frequency(tree: &OverlayTree, plan: &CondensePlan) -> Rat {
    plan.condensed.iter().map(|v| tree.freq[v]).sum()
}

/// Evaluates a plan into a full result record.
pub fn evaluate_plan(tree: &OverlayTree, plan: &CondensePlan) -> Result<CondenseResult> {
    let condensed = apply_plan(tree, plan)?;
    let chain_weight = condensed.ram[&condensed.tree.root];
    let tail_weight = tree_weight(&condensed) - chain_weight;
    Ok(CondenseResult {
        saved_frequency: saved_frequency(tree, plan),
        plan: plan.clone(),
        condensed,
        chain_weight,
        tail_weight,
    })
}

/// Constraint side of the two problem kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Budget {
    /// Kind 1: chain + tail (i.e. the condensed tree weight) within `b`.
    Coupled { b: Rat },
    /// Kind 2: kernel within `b_minus`, heaviest tail within `b_plus`.
    Split { b_minus: Rat, b_plus: Rat },
}

impl Budget {
    fn admits(&self, chain: Rat, tail: Rat, slack: Rat) -> bool {
        match *self {
            Budget::Coupled { b } => chain + tail <= b * slack,
            Budget::Split { b_minus, b_plus } => {
                chain <= b_minus * slack && tail <= b_plus * slack
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMode {
    ExactSmall,
    Approx { epsilon: Rat, delta: Rat },
}

const EXACT_PLAN_LIMIT: usize = 13;

/// Kind-1 solve: maximize saved frequency subject to the condensed tree
/// weight staying within `b`.
pub fn solve_kind1(tree: &OverlayTree, b: Rat, mode: SolveMode) -> Result<CondenseResult> {
    solve(tree, Budget::Coupled { b }, mode)
}

/// Kind-2 solve: kernel within `b_minus`, heaviest remaining tail within
/// `b_plus`.
pub fn solve_kind2(
    tree: &OverlayTree,
    b_minus: Rat,
    b_plus: Rat,
    mode: SolveMode,
) -> Result<CondenseResult> {
    solve(tree, Budget::Split { b_minus, b_plus }, mode)
}

pub fn solve(tree: &OverlayTree, budget: Budget, mode: SolveMode) -> Result<CondenseResult> {
    tree.validate()?;
    match mode {
        SolveMode::ExactSmall => solve_exact(tree, budget),
        SolveMode::Approx { epsilon, delta } => cascade(tree, budget, epsilon, delta),
    }
}

/// Exhaustive scan over all condensation plans; ties prefer the
/// lexicographically smallest condensed vertex set.
fn solve_exact(tree: &OverlayTree, budget: Budget) -> Result<CondenseResult> {
    let vertices = tree.non_root_vertices();
    if vertices.len() > EXACT_PLAN_LIMIT {
        return Err(Error::TooLargeForExact(format!(
            "{} non-root vertices exceeds the exact bound {EXACT_PLAN_LIMIT}",
            vertices.len()
        )));
    }
    let mut best: Option<(Rat, CondensePlan)> = None;
    for mask in 0u32..(1u32 << vertices.len()) {
        let plan = CondensePlan {
            condensed: vertices
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect(),
        };
        let result = evaluate_plan(tree, &plan)?;
        if !budget.admits(result.chain_weight, result.tail_weight, Rat::ONE) {
            continue;
        }
        let saved = result.saved_frequency;
        let better = match &best {
            None => true,
            Some((bs, bp)) => saved > *bs || (saved == *bs && plan < *bp),
        };
        if better {
            best = Some((saved, plan));
        }
    }
    let Some((_, plan)) = best else {
        return Err(Error::Infeasible(
            "no condensation plan satisfies the weight constraints".into(),
        ));
    };
    evaluate_plan(tree, &plan)
}

/// One candidate way of condensing a subtree.
#[derive(Debug, Clone)]
struct MenuState {
    /// Condensed vertices inside the subtree.
    plan: BTreeSet<NodeId>,
    /// Saved frequency inside the subtree (rounded down in approx mode).
    profit: Rat,
    /// RAM of the component containing the subtree root.
    chain: Rat,
    /// Heaviest path weight strictly below that component.
    tail: Rat,
}

fn dominated(a: &MenuState, by: &MenuState) -> bool {
    by.profit >= a.profit && by.chain <= a.chain && by.tail <= a.tail
}

/// Bottom-up cascade: every vertex publishes a menu of nondominated
/// (profit, chain, tail) options for its subtree; the parent solves the
/// grouped coupled-selection problem over the child menus. Menus are
/// thinned on a (1+gamma) grid in the constraint dimensions and profits
/// are rounded to the epsilon grid, which yields a saved frequency of at
/// least (1-epsilon) times the strict optimum while observing the
/// constraints within a (1+delta) factor.
fn cascade(tree: &OverlayTree, budget: Budget, epsilon: Rat, delta: Rat) -> Result<CondenseResult> {
    if epsilon <= Rat::ZERO || epsilon >= Rat::ONE {
        return Err(Error::InvalidEpsilon(epsilon.to_string()));
    }
    if delta <= Rat::ZERO || delta >= Rat::ONE {
        return Err(Error::validation("delta", "delta must lie in (0, 1)"));
    }
    // a state is re-thinned once per processed arc, so the per-thinning
    // grid step must keep (1+gamma)^n within (1+delta)
    let n = tree.non_root_vertices().len().max(1);
    let gamma = delta.to_f64() / (2.0 * n as f64);
    // profit grid anchored at a feasible single-arc condensation
    let mut anchor = Rat::ZERO;
    for v in tree.non_root_vertices() {
        let single = CondensePlan {
            condensed: BTreeSet::from([v]),
        };
        let r = evaluate_plan(tree, &single)?;
        if budget.admits(r.chain_weight, r.tail_weight, Rat::ONE) && tree.freq[&v] > anchor {
            anchor = tree.freq[&v];
        }
    }
    let unit = if anchor.is_zero() {
        None
    } else {
        Some(epsilon * anchor / Rat::from(n))
    };
    let menu = subtree_menu(tree, tree.tree.root, gamma, unit);
    let slack = Rat::ONE + delta;
    let mut best: Option<&MenuState> = None;
    for state in &menu {
        if !budget.admits(state.chain, state.tail, slack) {
            continue;
        }
        let better = match best {
            None => true,
            Some(b) => {
                state.profit > b.profit || (state.profit == b.profit && state.plan < b.plan)
            }
        };
        if better {
            best = Some(state);
        }
    }
    let Some(state) = best else {
        return Err(Error::Infeasible(
            "no cascade state satisfies the relaxed constraints".into(),
        ));
    };
    evaluate_plan(
        tree,
        &CondensePlan {
            condensed: state.plan.clone(),
        },
    )
}

/// Menu of nondominated condensation options for the subtree at `v`.
fn subtree_menu(tree: &OverlayTree, v: NodeId, gamma: f64, unit: Option<Rat>) -> Vec<MenuState> {
    let children = tree.tree.children(v);
    let mut states = vec![MenuState {
        plan: BTreeSet::new(),
        profit: Rat::ZERO,
        chain: tree.ram[&v],
        tail: Rat::ZERO,
    }];
    for child in children {
        let child_menu = subtree_menu(tree, child, gamma, unit);
        let mut next: Vec<MenuState> = Vec::new();
        for state in &states {
            for option in &child_menu {
                // keep the child component separate
                next.push(MenuState {
                    plan: state.plan.union(&option.plan).copied().collect(),
                    profit: state.profit + option.profit,
                    chain: state.chain,
                    tail: state.tail.max(option.chain + option.tail),
                });
                // condense the arc into the child component
                let mut plan: BTreeSet<NodeId> =
                    state.plan.union(&option.plan).copied().collect();
                plan.insert(child);
                next.push(MenuState {
                    plan,
                    profit: state.profit + option.profit + tree.freq[&child],
                    chain: state.chain + option.chain,
                    tail: state.tail.max(option.tail),
                });
            }
        }
        states = thin(next, gamma, unit);
    }
    states
}

/// Drops dominated states and collapses each (chain, tail) grid bucket
/// to its best-profit representative; profits are floored to the unit
/// grid first so the menu stays polynomial in 1/epsilon and 1/delta.
fn thin(mut states: Vec<MenuState>, gamma: f64, unit: Option<Rat>) -> Vec<MenuState> {
    if let Some(unit) = unit {
        for s in &mut states {
            s.profit = Rat::from_int((s.profit / unit).floor().max(0)) * unit;
        }
    }
    let bucket = |value: Rat| -> i64 {
        let v = value.to_f64();
        if v <= 0.0 {
            return i64::MIN;
        }
        (v.ln() / (1.0 + gamma).ln()).floor() as i64
    };
    let mut by_bucket: BTreeMap<(i64, i64), MenuState> = BTreeMap::new();
    for state in states {
        let key = (bucket(state.chain), bucket(state.tail));
        match by_bucket.get(&key) {
            Some(kept)
                if kept.profit > state.profit
                    || (kept.profit == state.profit && kept.plan <= state.plan) => {}
            _ => {
                by_bucket.insert(key, state);
            }
        }
    }
    let mut kept: Vec<MenuState> = by_bucket.into_values().collect();
    // final dominance sweep across buckets
    let mut out: Vec<MenuState> = Vec::new();
    kept.sort_by(|a, b| {
        a.chain
            .cmp(&b.chain)
            .then(a.tail.cmp(&b.tail))
            .then(b.profit.cmp(&a.profit))
    });
    for state in kept {
        if !out.iter().any(|o| dominated(&state, o)) {
            out.push(state);
        }
    }
    out
}

/// Leaves-upward sweep for a multi-level tree; the deepest fans reduce to
/// the split-budget fan problem, intermediate levels to the grouped
/// split problem and the root couples the budgets.
pub fn cascade_bottom_up(
    tree: &OverlayTree,
    b_minus: Rat,
    b_plus: Rat,
    epsilon: Rat,
    delta: Rat,
) -> Result<CondenseResult> {
    tree.validate()?;
    if tree.tree.children(tree.tree.root).is_empty() {
        return Err(Error::validation(
            "tree",
            "cascade needs a root with at least one child",
        ));
    }
    cascade(tree, Budget::Split { b_minus, b_plus }, epsilon, delta)
}

// ---------------------------------------------------------------------
// Auxiliary fan problems
// ---------------------------------------------------------------------

/// The eight auxiliary problems over one- and two-level fans. The first
/// digit picks the base problem (single elements vs grouped options),
/// the second the variant: .1/.3 couple the budgets, .2/.4 split them,
/// .3/.4 carry per-element tails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AuxKind {
    P1_1,
    P1_2,
    P1_3,
    P1_4,
    P2_1,
    P2_2,
    P2_3,
    P2_4,
}

impl AuxKind {
    pub fn parse(text: &str) -> Result<AuxKind> {
        Ok(match text {
            "1.1" => AuxKind::P1_1,
            "1.2" => AuxKind::P1_2,
            "1.3" => AuxKind::P1_3,
            "1.4" => AuxKind::P1_4,
            "2.1" => AuxKind::P2_1,
            "2.2" => AuxKind::P2_2,
            "2.3" => AuxKind::P2_3,
            "2.4" => AuxKind::P2_4,
            other => return Err(Error::UnknownKind(other.to_string())),
        })
    }

    fn grouped(self) -> bool {
        matches!(
            self,
            AuxKind::P2_1 | AuxKind::P2_2 | AuxKind::P2_3 | AuxKind::P2_4
        )
    }

    fn split_budget(self) -> bool {
        matches!(
            self,
            AuxKind::P1_2 | AuxKind::P1_4 | AuxKind::P2_2 | AuxKind::P2_4
        )
    }

    fn has_tails(self) -> bool {
        matches!(
            self,
            AuxKind::P1_3 | AuxKind::P1_4 | AuxKind::P2_3 | AuxKind::P2_4
        )
    }
}

/// One option of a fan group: picking it yields `pick_profit`, merging
/// the picked option into the kernel additionally yields `merge_profit`
/// and moves `chain` RAM into the kernel; `tail` always stays below.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxOption {
    pub id: String,
    #[serde(default)]
    pub pick_profit: Rat,
    pub merge_profit: Rat,
    pub chain: Rat,
    #[serde(default)]
    pub tail: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxGroup {
    pub name: String,
    pub options: Vec<AuxOption>,
}

/// Fan instance shared by all auxiliary kinds; ungrouped kinds (1.x)
/// expect singleton groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxInstance {
    pub root_weight: Rat,
    pub groups: Vec<AuxGroup>,
}

/// Chosen option and merge flag per group, plus recomputed totals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxSelection {
    pub picks: Vec<(String, bool)>,
    pub profit: Rat,
    pub chain: Rat,
    pub tail: Rat,
}

/// Solves one auxiliary problem. Exact mode enumerates the coupled
/// selection/merge vectors; approx mode reuses the cascade's thinned
/// frontier.
pub fn solve_auxiliary(
    kind: AuxKind,
    instance: &AuxInstance,
    budget: Budget,
    mode: SolveMode,
) -> Result<AuxSelection> {
    for (gi, group) in instance.groups.iter().enumerate() {
        if group.options.is_empty() {
            return Err(Error::validation(
                format!("groups[{gi}]"),
                "every group needs at least one option",
            ));
        }
        if !kind.grouped() && group.options.len() != 1 {
            return Err(Error::validation(
                format!("groups[{gi}]"),
                "ungrouped kinds expect singleton groups",
            ));
        }
        if !kind.has_tails() {
            for (oi, opt) in group.options.iter().enumerate() {
                if !opt.tail.is_zero() {
                    return Err(Error::validation(
                        format!("groups[{gi}].options[{oi}].tail"),
                        "this kind has no tail weights",
                    ));
                }
            }
        }
    }
    match (kind.split_budget(), budget) {
        (true, Budget::Split { .. }) | (false, Budget::Coupled { .. }) => {}
        _ => {
            return Err(Error::validation(
                "budget",
                "budget shape does not match the problem kind",
            ))
        }
    }
    match mode {
        SolveMode::ExactSmall => aux_exact(instance, budget),
        SolveMode::Approx { epsilon, delta } => aux_approx(instance, budget, epsilon, delta),
    }
}

fn aux_states(
    instance: &AuxInstance,
    thin_with: Option<(f64, Option<Rat>)>,
) -> Vec<(Vec<(usize, bool)>, Rat, Rat, Rat)> {
    // state: (picks, profit, chain, tail)
    let mut states = vec![(Vec::new(), Rat::ZERO, instance.root_weight, Rat::ZERO)];
    for group in &instance.groups {
        let mut next = Vec::new();
        for (picks, profit, chain, tail) in &states {
            for (oi, opt) in group.options.iter().enumerate() {
                for merged in [false, true] {
                    let mut picks = picks.clone();
                    picks.push((oi, merged));
                    let profit = *profit
                        + opt.pick_profit
                        + if merged { opt.merge_profit } else { Rat::ZERO };
                    let chain = *chain + if merged { opt.chain } else { Rat::ZERO };
                    let tail = (*tail).max(if merged {
                        opt.tail
                    } else {
                        opt.chain + opt.tail
                    });
                    next.push((picks, profit, chain, tail));
                }
            }
        }
        if let Some((gamma, unit)) = thin_with {
            next = thin_aux(next, gamma, unit);
        }
        states = next;
    }
    states
}

fn thin_aux(
    states: Vec<(Vec<(usize, bool)>, Rat, Rat, Rat)>,
    gamma: f64,
    unit: Option<Rat>,
) -> Vec<(Vec<(usize, bool)>, Rat, Rat, Rat)> {
    let bucket = |value: Rat| -> i64 {
        let v = value.to_f64();
        if v <= 0.0 {
            return i64::MIN;
        }
        (v.ln() / (1.0 + gamma).ln()).floor() as i64
    };
    let mut by_bucket: BTreeMap<(i64, i64), (Vec<(usize, bool)>, Rat, Rat, Rat)> = BTreeMap::new();
    for (picks, mut profit, chain, tail) in states {
        if let Some(unit) = unit {
            profit = Rat::from_int((profit / unit).floor().max(0)) * unit;
        }
        let key = (bucket(chain), bucket(tail));
        match by_bucket.get(&key) {
            Some((_, kept, _, _)) if *kept >= profit => {}
            _ => {
                by_bucket.insert(key, (picks, profit, chain, tail));
            }
        }
    }
    by_bucket.into_values().collect()
}

fn select_best(
    instance: &AuxInstance,
    states: Vec<(Vec<(usize, bool)>, Rat, Rat, Rat)>,
    budget: Budget,
    slack: Rat,
) -> Result<AuxSelection> {
    let mut best: Option<(Vec<(usize, bool)>, Rat, Rat, Rat)> = None;
    for (picks, profit, chain, tail) in states {
        if !budget.admits(chain, tail, slack) {
            continue;
        }
        let better = match &best {
            None => true,
            Some((bp, bprofit, _, _)) => profit > *bprofit || (profit == *bprofit && picks < *bp),
        };
        if better {
            best = Some((picks, profit, chain, tail));
        }
    }
    let Some((picks, _, chain, tail)) = best else {
        return Err(Error::Infeasible(
            "no selection satisfies the constraints".into(),
        ));
    };
    // recompute the exact (unrounded) profit of the winning picks
    let mut profit = Rat::ZERO;
    let mut named = Vec::new();
    for (gi, &(oi, merged)) in picks.iter().enumerate() {
        let opt = &instance.groups[gi].options[oi];
        profit += opt.pick_profit + if merged { opt.merge_profit } else { Rat::ZERO };
        named.push((opt.id.clone(), merged));
    }
    Ok(AuxSelection {
        picks: named,
        profit,
        chain,
        tail,
    })
}

fn aux_exact(instance: &AuxInstance, budget: Budget) -> Result<AuxSelection> {
    let combos: usize = instance
        .groups
        .iter()
        .map(|g| 2 * g.options.len())
        .product();
    if combos > 1 << 22 {
        return Err(Error::TooLargeForExact(format!(
            "{combos} coupled selection vectors"
        )));
    }
    select_best(instance, aux_states(instance, None), budget, Rat::ONE)
}

fn aux_approx(instance: &AuxInstance, budget: Budget, epsilon: Rat, delta: Rat) -> Result<AuxSelection> {
    if epsilon <= Rat::ZERO || epsilon >= Rat::ONE {
        return Err(Error::InvalidEpsilon(epsilon.to_string()));
    }
    if delta <= Rat::ZERO || delta >= Rat::ONE {
        return Err(Error::validation("delta", "delta must lie in (0, 1)"));
    }
    let gamma = delta.to_f64() / (2.0 * instance.groups.len().max(1) as f64);
    // profit anchor: best single feasible (pick, merge) move
    let mut anchor = Rat::ZERO;
    for group in &instance.groups {
        for opt in &group.options {
            for merged in [false, true] {
                let chain = instance.root_weight + if merged { opt.chain } else { Rat::ZERO };
                let tail = if merged { opt.tail } else { opt.chain + opt.tail };
                let profit =
                    opt.pick_profit + if merged { opt.merge_profit } else { Rat::ZERO };
                if budget.admits(chain, tail, Rat::ONE) && profit > anchor {
                    anchor = profit;
                }
            }
        }
    }
    let m = instance.groups.len().max(1);
    let unit = if anchor.is_zero() {
        None
    } else {
        Some(epsilon * anchor / Rat::from(m))
    };
    let states = aux_states(instance, Some((gamma, unit)));
    select_best(instance, states, budget, Rat::ONE + delta)
}
