//! Morphological hierarchy: design alternatives at the leaves, ordinal
//! estimates, pairwise ordinal compatibility, and enumeration of
//! feasible compositions with Pareto filtering.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::tree::RootedTree;

/// A design alternative with its ordinal estimate (1 is best).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alternative {
    pub id: String,
    pub estimate: u32,
}

/// Compatibility table between the alternatives of two leaves; entries
/// are (alternative of the first leaf, alternative of the second leaf,
/// ordinal value in 0..=3 where 0 means forbidden). Leaf pairs without
/// a declared table are unconstrained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatibilityTable {
    pub leaves: (NodeId, NodeId),
    pub entries: Vec<(String, String, u32)>,
}

/// Morphological hierarchy over a rooted tree: every leaf carries its
/// alternative list; selected leaf pairs carry compatibility tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphHierarchy {
    pub tree: RootedTree,
    pub alternatives: BTreeMap<NodeId, Vec<Alternative>>,
    pub tables: Vec<CompatibilityTable>,
    /// Informational labels, e.g. subsystem names per node.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<NodeId, String>,
}

impl MorphHierarchy {
    pub fn validate(&self) -> Result<()> {
        self.tree.validate()?;
        let leaves: BTreeSet<NodeId> = self.tree.leaves().into_iter().collect();
        for &leaf in &leaves {
            let list = self.alternatives.get(&leaf).ok_or_else(|| {
                Error::validation(
                    format!("alternatives[{leaf}]"),
                    "every leaf needs at least one alternative",
                )
            })?;
            if list.is_empty() {
                return Err(Error::validation(
                    format!("alternatives[{leaf}]"),
                    "every leaf needs at least one alternative",
                ));
            }
            for a in list {
                if a.estimate < 1 {
                    return Err(Error::validation(
                        format!("alternatives[{leaf}]"),
                        format!("estimate of {} must be at least 1", a.id),
                    ));
                }
            }
        }
        for (ti, table) in self.tables.iter().enumerate() {
            let (a, b) = table.leaves;
            // tables may reference composite (non-leaf) nodes; those rows
            // are stored but never consulted by enumeration
            for &node in [a, b].iter() {
                if !self.tree.contains(node) {
                    return Err(Error::validation(
                        format!("tables[{ti}]"),
                        format!("{node} is not a tree node"),
                    ));
                }
            }
            for (da, db, value) in &table.entries {
                if *value > 3 {
                    return Err(Error::validation(
                        format!("tables[{ti}][{da},{db}]"),
                        "compatibility is an ordinal in 0..=3",
                    ));
                }
            }
        }
        Ok(())
    }

    /// Compatibility of two chosen alternatives, if their leaf pair is
    /// declared (in either orientation).
    fn compatibility(&self, la: NodeId, da: &str, lb: NodeId, db: &str) -> Option<u32> {
        for table in &self.tables {
            if table.leaves == (la, lb) {
                if let Some(v) = table
                    .entries
                    .iter()
                    .find(|(x, y, _)| x == da && y == db)
                    .map(|(_, _, v)| *v)
                {
                    return Some(v);
                }
            }
            if table.leaves == (lb, la) {
                if let Some(v) = table
                    .entries
                    .iter()
                    .find(|(x, y, _)| x == db && y == da)
                    .map(|(_, _, v)| *v)
                {
                    return Some(v);
                }
            }
        }
        None
    }

    pub fn composition_space(&self) -> u128 {
        self.tree
            .leaves()
            .iter()
            .map(|leaf| self.alternatives.get(leaf).map(Vec::len).unwrap_or(0) as u128)
            .product()
    }
}

/// One selected alternative per leaf plus the quality signature used by
/// the Pareto filter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Composition {
    pub choice: BTreeMap<NodeId, String>,
    /// Number of chosen alternatives per estimate level (index 0 holds
    /// level 1, the best).
    pub level_counts: Vec<usize>,
    /// Minimum compatibility over declared leaf pairs; the scale top
    /// (3) when no pair is declared.
    pub min_compatibility: u32,
}

pub const DEFAULT_COMPOSITION_LIMIT: u128 = 1_000_000;

/// Enumerates every composition whose declared pairs are all compatible
/// (value >= 1), in lexicographic leaf/alternative order.
pub fn enumerate_compositions(
    hierarchy: &MorphHierarchy,
    limit: Option<u128>,
) -> Result<Vec<Composition>> {
    hierarchy.validate()?;
    let limit = limit.unwrap_or(DEFAULT_COMPOSITION_LIMIT);
    let space = hierarchy.composition_space();
    if space > limit {
        return Err(Error::TooManyCombinations { got: space, limit });
    }
    let leaves = hierarchy.tree.leaves();
    let max_level = hierarchy
        .alternatives
        .values()
        .flat_map(|l| l.iter().map(|a| a.estimate))
        .max()
        .unwrap_or(1) as usize;
    let mut out = Vec::new();
    let mut choice: Vec<(NodeId, usize)> = Vec::new();
    enumerate_rec(hierarchy, &leaves, &mut choice, max_level, &mut out);
    Ok(out)
}

fn enumerate_rec(
    hierarchy: &MorphHierarchy,
    leaves: &[NodeId],
    choice: &mut Vec<(NodeId, usize)>,
    max_level: usize,
    out: &mut Vec<Composition>,
) {
    if choice.len() == leaves.len() {
        let mut level_counts = vec![0usize; max_level];
        let mut min_compat = 3u32;
        let mut map = BTreeMap::new();
        for &(leaf, ai) in choice.iter() {
            let alt = &hierarchy.alternatives[&leaf][ai];
            level_counts[(alt.estimate as usize).min(max_level) - 1] += 1;
            map.insert(leaf, alt.id.clone());
        }
        for (i, &(la, ai)) in choice.iter().enumerate() {
            for &(lb, bi) in &choice[i + 1..] {
                let da = &hierarchy.alternatives[&la][ai].id;
                let db = &hierarchy.alternatives[&lb][bi].id;
                if let Some(v) = hierarchy.compatibility(la, da, lb, db) {
                    min_compat = min_compat.min(v);
                }
            }
        }
        out.push(Composition {
            choice: map,
            level_counts,
            min_compatibility: min_compat,
        });
        return;
    }
    let leaf = leaves[choice.len()];
    for ai in 0..hierarchy.alternatives[&leaf].len() {
        // prune on the declared pairs already decided
        let da = &hierarchy.alternatives[&leaf][ai].id;
        let compatible = choice.iter().all(|&(lb, bi)| {
            let db = &hierarchy.alternatives[&lb][bi].id;
            hierarchy
                .compatibility(leaf, da, lb, db)
                .map_or(true, |v| v >= 1)
        });
        if !compatible {
            continue;
        }
        choice.push((leaf, ai));
        enumerate_rec(hierarchy, leaves, choice, max_level, out);
        choice.pop();
    }
}

/// Cumulative count of alternatives at level `l` or better.
fn cumulative(counts: &[usize], level: usize) -> usize {
    counts.iter().take(level + 1).sum()
}

/// True when `a` is at least as good as `b` on every axis and strictly
/// better somewhere: more alternatives at every cumulative estimate
/// level and no worse minimum compatibility.
pub fn dominates(a: &Composition, b: &Composition) -> bool {
    let levels = a.level_counts.len().max(b.level_counts.len());
    let mut any_strict = a.min_compatibility > b.min_compatibility;
    if a.min_compatibility < b.min_compatibility {
        return false;
    }
    for l in 0..levels {
        let (ca, cb) = (cumulative(&a.level_counts, l), cumulative(&b.level_counts, l));
        if ca < cb {
            return false;
        }
        if ca > cb {
            any_strict = true;
        }
    }
    any_strict
}

/// Nondominated compositions; equal signatures are all retained.
pub fn pareto_filter(compositions: &[Composition]) -> Vec<Composition> {
    compositions
        .iter()
        .filter(|c| !compositions.iter().any(|other| dominates(other, c)))
        .cloned()
        .collect()
}
