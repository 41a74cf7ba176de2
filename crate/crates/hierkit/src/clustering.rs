//! Agglomerative hierarchical clustering with pluggable aggregation and
//! the ordinal / Pareto pair-selection variant.
//!
//! A merged cluster is represented by a single aggregated estimate vector
//! rather than by linkage over raw members, and distances are compared on
//! exact squared values. Equal minima resolve to the pair whose
//! (smallest contained id, largest of the two smallest ids) key is
//! lexicographically least.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Rat;

/// Element table: one estimate vector of `m` attributes per element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementTable {
    pub elements: Vec<u32>,
    pub attrs: Vec<Vec<Rat>>,
}

impl ElementTable {
    pub fn new(elements: Vec<u32>, attrs: Vec<Vec<Rat>>) -> Result<ElementTable> {
        let table = ElementTable { elements, attrs };
        table.validate()?;
        Ok(table)
    }

    pub fn validate(&self) -> Result<()> {
        if self.elements.is_empty() {
            return Err(Error::validation("elements", "table must not be empty"));
        }
        if self.elements.len() != self.attrs.len() {
            return Err(Error::validation(
                "attrs",
                format!(
                    "expected {} rows, got {}",
                    self.elements.len(),
                    self.attrs.len()
                ),
            ));
        }
        let width = self.attrs[0].len();
        if width == 0 {
            return Err(Error::validation("attrs[0]", "rows must not be empty"));
        }
        for (i, row) in self.attrs.iter().enumerate() {
            if row.len() != width {
                return Err(Error::validation(
                    format!("attrs[{i}]"),
                    format!("expected {} columns, got {}", width, row.len()),
                ));
            }
        }
        let mut seen = BTreeSet::new();
        for &id in &self.elements {
            if !seen.insert(id) {
                return Err(Error::validation(
                    "elements",
                    format!("duplicate element id {id}"),
                ));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn width(&self) -> usize {
        self.attrs.first().map(Vec::len).unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Euclidean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AggregationRule {
    Average,
    Min,
    Max,
}

/// Stop condition for the merge loop; merging also stops once a single
/// cluster remains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopRule {
    Clusters(usize),
    /// Stop before any merge whose distance exceeds the threshold.
    MaxDistance(Rat),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterConfig {
    #[serde(default = "default_metric")]
    pub metric: Metric,
    #[serde(default = "default_rule")]
    pub rule: AggregationRule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<StopRule>,
}

fn default_metric() -> Metric {
    Metric::Euclidean
}

fn default_rule() -> AggregationRule {
    AggregationRule::Average
}

impl Default for ClusterConfig {
    fn default() -> Self {
        ClusterConfig {
            metric: Metric::Euclidean,
            rule: AggregationRule::Average,
            stop: None,
        }
    }
}

/// One merge record. `distance_sq` is filled by the metric variant,
/// `proximity` by the ordinal variant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeStep {
    pub index: usize,
    pub cluster_a: BTreeSet<u32>,
    pub cluster_b: BTreeSet<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance_sq: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proximity: Option<Vec<Rat>>,
}

/// Ordered merge log plus the final partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dendrogram {
    pub steps: Vec<MergeStep>,
    pub final_clusters: Vec<BTreeSet<u32>>,
}

/// Symmetric matrix of exact squared pair distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    pub ids: Vec<u32>,
    pub squared: Vec<Vec<Rat>>,
}

impl DistanceMatrix {
    /// Reported (non-squared) distance, for display only.
    pub fn distance_f64(&self, i: usize, j: usize) -> f64 {
        self.squared[i][j].to_f64().sqrt()
    }
}

/// Stage-1 matrix of pairwise distances; squared values are exact, the
/// square root is applied only when reporting.
pub fn distance_matrix(table: &ElementTable, _metric: Metric) -> DistanceMatrix {
    let n = table.len();
    let mut squared = vec![vec![Rat::ZERO; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = squared_euclidean(&table.attrs[i], &table.attrs[j]);
            squared[i][j] = d;
            squared[j][i] = d;
        }
    }
    DistanceMatrix {
        ids: table.elements.clone(),
        squared,
    }
}

fn squared_euclidean(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = *x - *y;
            d * d
        })
        .sum()
}

/// Componentwise aggregation of two estimate vectors.
pub fn aggregate_pair(z1: &[Rat], z2: &[Rat], rule: AggregationRule) -> Result<Vec<Rat>> {
    if z1.len() != z2.len() {
        return Err(Error::LengthMismatch(z1.len(), z2.len()));
    }
    let half = Rat::new(1, 2);
    Ok(z1
        .iter()
        .zip(z2)
        .map(|(&a, &b)| match rule {
            AggregationRule::Average => (a + b) * half,
            AggregationRule::Min => a.min(b),
            AggregationRule::Max => a.max(b),
        })
        .collect())
}

struct LiveCluster {
    members: BTreeSet<u32>,
    vector: Vec<Rat>,
    min_id: u32,
}

fn pair_key(a: &LiveCluster, b: &LiveCluster) -> (u32, u32) {
    (a.min_id.min(b.min_id), a.min_id.max(b.min_id))
}

fn stop_count(table: &ElementTable, stop: &Option<StopRule>) -> usize {
    match stop {
        Some(StopRule::Clusters(k)) => (*k).max(1).min(table.len()),
        _ => 1,
    }
}

/// Basic agglomerative loop: find the minimum pair distance, merge via
/// the aggregation rule, recompute distances against the merged element.
pub fn agglomerate(table: &ElementTable, config: &ClusterConfig) -> Result<Dendrogram> {
    table.validate()?;
    let target = stop_count(table, &config.stop);
    let max_dist_sq = match &config.stop {
        Some(StopRule::MaxDistance(d)) => Some(*d * *d),
        _ => None,
    };
    let mut live: Vec<LiveCluster> = table
        .elements
        .iter()
        .zip(&table.attrs)
        .map(|(&id, row)| LiveCluster {
            members: BTreeSet::from([id]),
            vector: row.clone(),
            min_id: id,
        })
        .collect();
    let mut steps = Vec::new();
    while live.len() > target {
        let mut best: Option<(Rat, (u32, u32), usize, usize)> = None;
        for i in 0..live.len() {
            for j in (i + 1)..live.len() {
                let d = squared_euclidean(&live[i].vector, &live[j].vector);
                let key = pair_key(&live[i], &live[j]);
                if best
                    .as_ref()
                    .is_none_or(|(bd, bk, _, _)| d < *bd || (d == *bd && key < *bk))
                {
                    best = Some((d, key, i, j));
                }
            }
        }
        let (dist_sq, _, i, j) = best.expect("at least two live clusters");
        if max_dist_sq.is_some_and(|limit| dist_sq > limit) {
            break;
        }
        merge(&mut live, &mut steps, i, j, config.rule, Some(dist_sq), None)?;
    }
    Ok(Dendrogram {
        final_clusters: live.iter().map(|c| c.members.clone()).collect(),
        steps,
    })
}

/// Ordinal modification: pair proximity is the componentwise absolute
/// difference vector and the merged pair is drawn from the Pareto-minimal
/// set of those vectors.
pub fn agglomerate_ordinal(table: &ElementTable, config: &ClusterConfig) -> Result<Dendrogram> {
    table.validate()?;
    let target = stop_count(table, &config.stop);
    let mut live: Vec<LiveCluster> = table
        .elements
        .iter()
        .zip(&table.attrs)
        .map(|(&id, row)| LiveCluster {
            members: BTreeSet::from([id]),
            vector: row.clone(),
            min_id: id,
        })
        .collect();
    let mut steps = Vec::new();
    while live.len() > target {
        let mut pairs: Vec<(Vec<Rat>, (u32, u32), usize, usize)> = Vec::new();
        for i in 0..live.len() {
            for j in (i + 1)..live.len() {
                let prox: Vec<Rat> = live[i]
                    .vector
                    .iter()
                    .zip(&live[j].vector)
                    .map(|(&a, &b)| (a - b).abs())
                    .collect();
                pairs.push((prox, pair_key(&live[i], &live[j]), i, j));
            }
        }
        let minimal: Vec<&(Vec<Rat>, (u32, u32), usize, usize)> = pairs
            .iter()
            .filter(|(p, _, _, _)| !pairs.iter().any(|(q, _, _, _)| dominates(q, p)))
            .collect();
        let chosen = minimal
            .into_iter()
            .min_by_key(|(_, key, _, _)| *key)
            .expect("nonempty pair set");
        let (prox, _, i, j) = chosen.clone();
        merge(&mut live, &mut steps, i, j, config.rule, None, Some(prox))?;
    }
    Ok(Dendrogram {
        final_clusters: live.iter().map(|c| c.members.clone()).collect(),
        steps,
    })
}

/// Strict componentwise dominance: q <= p everywhere, strictly somewhere.
fn dominates(q: &[Rat], p: &[Rat]) -> bool {
    q.iter().zip(p).all(|(a, b)| a <= b) && q != p
}

fn merge(
    live: &mut Vec<LiveCluster>,
    steps: &mut Vec<MergeStep>,
    i: usize,
    j: usize,
    rule: AggregationRule,
    distance_sq: Option<Rat>,
    proximity: Option<Vec<Rat>>,
) -> Result<()> {
    let (first, second) = if live[i].min_id <= live[j].min_id {
        (i, j)
    } else {
        (j, i)
    };
    let vector = aggregate_pair(&live[first].vector, &live[second].vector, rule)?;
    let members: BTreeSet<u32> = live[first]
        .members
        .union(&live[second].members)
        .copied()
        .collect();
    steps.push(MergeStep {
        index: steps.len() + 1,
        cluster_a: live[first].members.clone(),
        cluster_b: live[second].members.clone(),
        distance_sq,
        proximity,
    });
    let min_id = *members.iter().next().unwrap();
    let merged = LiveCluster {
        members,
        vector,
        min_id,
    };
    let (hi, lo) = (first.max(second), first.min(second));
    live.remove(hi);
    live.remove(lo);
    live.push(merged);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(s: &str) -> Rat {
        Rat::parse(s).unwrap()
    }

    fn row(vals: &[&str]) -> Vec<Rat> {
        vals.iter().map(|v| rat(v)).collect()
    }

    #[test]
    fn identical_rows_have_zero_distance() {
        let t = ElementTable::new(
            vec![1, 2],
            vec![row(&["1", "2", "3"]), row(&["1", "2", "3"])],
        )
        .unwrap();
        let m = distance_matrix(&t, Metric::Euclidean);
        assert_eq!(m.squared[0][1], Rat::ZERO);
    }

    #[test]
    fn aggregate_rules() {
        let avg = aggregate_pair(&row(&["3", "3"]), &row(&["4", "5"]), AggregationRule::Average)
            .unwrap();
        assert_eq!(avg, row(&["3.5", "4"]));
        let min =
            aggregate_pair(&row(&["1", "5"]), &row(&["3", "2"]), AggregationRule::Min).unwrap();
        assert_eq!(min, row(&["1", "2"]));
        let same = row(&["2", "7"]);
        for rule in [
            AggregationRule::Average,
            AggregationRule::Min,
            AggregationRule::Max,
        ] {
            assert_eq!(aggregate_pair(&same, &same, rule).unwrap(), same);
        }
    }

    #[test]
    fn aggregate_length_mismatch() {
        assert!(matches!(
            aggregate_pair(&row(&["1"]), &row(&["1", "2"]), AggregationRule::Min),
            Err(Error::LengthMismatch(1, 2))
        ));
    }

    #[test]
    fn single_element_table_has_no_steps() {
        let t = ElementTable::new(vec![1], vec![row(&["1"])]).unwrap();
        let d = agglomerate(&t, &ClusterConfig::default()).unwrap();
        assert!(d.steps.is_empty());
        assert_eq!(d.final_clusters.len(), 1);
    }

    #[test]
    fn two_elements_always_merge() {
        let t = ElementTable::new(vec![1, 2], vec![row(&["0", "0"]), row(&["9", "9"])]).unwrap();
        let d = agglomerate_ordinal(&t, &ClusterConfig::default()).unwrap();
        assert_eq!(d.steps.len(), 1);
    }

    #[test]
    fn ordinal_prefers_identical_pair() {
        let t = ElementTable::new(
            vec![1, 2, 3, 4],
            vec![
                row(&["5", "0"]),
                row(&["2", "2"]),
                row(&["2", "2"]),
                row(&["0", "5"]),
            ],
        )
        .unwrap();
        let d = agglomerate_ordinal(
            &t,
            &ClusterConfig {
                stop: Some(StopRule::Clusters(3)),
                ..ClusterConfig::default()
            },
        )
        .unwrap();
        assert_eq!(d.steps[0].cluster_a, BTreeSet::from([2]));
        assert_eq!(d.steps[0].cluster_b, BTreeSet::from([3]));
    }

    #[test]
    fn max_distance_stop() {
        let t = ElementTable::new(
            vec![1, 2, 3],
            vec![row(&["0"]), row(&["1"]), row(&["100"])],
        )
        .unwrap();
        let d = agglomerate(
            &t,
            &ClusterConfig {
                stop: Some(StopRule::MaxDistance(rat("5"))),
                ..ClusterConfig::default()
            },
        )
        .unwrap();
        assert_eq!(d.steps.len(), 1);
        assert_eq!(d.final_clusters.len(), 2);
    }
}
