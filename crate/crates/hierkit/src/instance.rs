//! The self-describing instance file format shared by the library, the
//! examples and the command-line front end.
//!
//! An instance is a single JSON document with a `kind` tag and a
//! kind-specific payload; all numbers travel as decimal (or `p/q`)
//! strings so parsing and re-serialization are loss-free.

use serde::{Deserialize, Serialize};

use crate::clustering::ClusterConfig;
use crate::condense::Budget;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::knapsack::{ChoiceGroup, ChoiceInstance, Item};
use crate::modify::{AugmentInstance, HotlinkInstance, RestructureInstance, RestructureMode};
use crate::morpho::MorphHierarchy;
use crate::multilayer::{AssignInstance, CenterScheme, HigherTopology, Site};
use crate::num::Rat;
use crate::tree::RootedTree;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClusterVariant {
    #[default]
    Basic,
    Ordinal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterPayload {
    pub elements: Vec<u32>,
    pub attrs: Vec<Vec<Rat>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<ClusterConfig>,
    #[serde(default)]
    pub variant: ClusterVariant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SteinerPayload {
    pub graph: Graph,
    pub terminals: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxleafPayload {
    pub graph: Graph,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_bound: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KconnectPayload {
    pub sites: Vec<Site>,
    pub k: u32,
    pub scheme: CenterScheme,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwolevelPayload {
    pub sites: Vec<Site>,
    pub primary: Vec<NodeId>,
    pub topology: HigherTopology,
    pub primary_cost: Rat,
    pub secondary_cost: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnapsackPayload {
    pub items: Vec<Item>,
    pub budget: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MchoicePayload {
    pub groups: Vec<ChoiceGroup>,
    pub budget: Rat,
}

impl MchoicePayload {
    pub fn to_choice_instance(&self, budget_override: Option<Rat>) -> ChoiceInstance {
        ChoiceInstance {
            groups: self.groups.clone(),
            budget: budget_override.unwrap_or(self.budget),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CondensePayload {
    pub root: NodeId,
    pub parent: std::collections::BTreeMap<NodeId, NodeId>,
    pub ram: std::collections::BTreeMap<NodeId, Rat>,
    pub freq: std::collections::BTreeMap<NodeId, Rat>,
    pub constraint: Budget,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Rat>,
}

impl CondensePayload {
    pub fn to_overlay(&self) -> Result<crate::condense::OverlayTree> {
        let tree = RootedTree::new(self.root, self.parent.clone())?;
        let overlay = crate::condense::OverlayTree {
            tree,
            ram: self.ram.clone(),
            freq: self.freq.clone(),
        };
        overlay.validate()?;
        Ok(overlay)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HotlinkPayload {
    pub root: NodeId,
    pub parent: std::collections::BTreeMap<NodeId, NodeId>,
    pub weights: std::collections::BTreeMap<NodeId, Rat>,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sources: Option<Vec<NodeId>>,
}

impl HotlinkPayload {
    pub fn to_instance(&self) -> Result<HotlinkInstance> {
        let tree = RootedTree::new(self.root, self.parent.clone())?;
        let mut instance = HotlinkInstance::new(tree, self.weights.clone(), self.k);
        if let Some(sources) = &self.sources {
            instance.sources = sources.iter().copied().collect();
        }
        instance.validate()?;
        Ok(instance)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestructurePayload {
    pub problem: crate::modify::EmbeddedProblem,
    pub s1: std::collections::BTreeSet<String>,
    pub s2: std::collections::BTreeSet<String>,
    #[serde(default)]
    pub costs: crate::modify::ChangeCosts,
    pub h_max: Rat,
    pub proximity: crate::modify::ProximityMode,
    pub mode: RestructureMode,
}

impl RestructurePayload {
    pub fn to_instance(&self) -> RestructureInstance {
        RestructureInstance {
            problem: self.problem.clone(),
            s1: self.s1.clone(),
            s2: self.s2.clone(),
            costs: self.costs.clone(),
            h_max: self.h_max,
            proximity: self.proximity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphoPayload {
    pub tree: RootedTree,
    pub alternatives: std::collections::BTreeMap<NodeId, Vec<crate::morpho::Alternative>>,
    #[serde(default)]
    pub tables: Vec<crate::morpho::CompatibilityTable>,
    #[serde(default, skip_serializing_if = "std::collections::BTreeMap::is_empty")]
    pub labels: std::collections::BTreeMap<NodeId, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<u64>,
}

impl MorphoPayload {
    pub fn to_hierarchy(&self) -> MorphHierarchy {
        MorphHierarchy {
            tree: self.tree.clone(),
            alternatives: self.alternatives.clone(),
            tables: self.tables.clone(),
            labels: self.labels.clone(),
        }
    }
}

/// Any instance the toolkit understands, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Graph(Graph),
    Cluster(ClusterPayload),
    Steiner(SteinerPayload),
    Maxleaf(MaxleafPayload),
    Kconnect(KconnectPayload),
    Twolevel(TwolevelPayload),
    Assign(AssignInstance),
    Knapsack(KnapsackPayload),
    Mchoice(MchoicePayload),
    Condense(CondensePayload),
    Hotlink(HotlinkPayload),
    Augment(AugmentInstance),
    Restructure(RestructurePayload),
    Morpho(MorphoPayload),
}

// the `kind` tag is dispatched by hand so payload maps with integer
// keys never pass through serde's string-keyed content buffering
impl Serialize for Instance {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::Error as _;
        let payload = match self {
            Instance::Graph(p) => serde_json::to_value(p),
            Instance::Cluster(p) => serde_json::to_value(p),
            Instance::Steiner(p) => serde_json::to_value(p),
            Instance::Maxleaf(p) => serde_json::to_value(p),
            Instance::Kconnect(p) => serde_json::to_value(p),
            Instance::Twolevel(p) => serde_json::to_value(p),
            Instance::Assign(p) => serde_json::to_value(p),
            Instance::Knapsack(p) => serde_json::to_value(p),
            Instance::Mchoice(p) => serde_json::to_value(p),
            Instance::Condense(p) => serde_json::to_value(p),
            Instance::Hotlink(p) => serde_json::to_value(p),
            Instance::Augment(p) => serde_json::to_value(p),
            Instance::Restructure(p) => serde_json::to_value(p),
            Instance::Morpho(p) => serde_json::to_value(p),
        }
        .map_err(S::Error::custom)?;
        let serde_json::Value::Object(fields) = payload else {
            return Err(S::Error::custom("instance payload must be an object"));
        };
        let mut doc = serde_json::Map::new();
        doc.insert("kind".into(), serde_json::Value::String(self.kind().into()));
        doc.extend(fields);
        serde_json::Value::Object(doc).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Instance, D::Error> {
        use serde::de::Error as _;
        let mut value = serde_json::Value::deserialize(deserializer)?;
        let Some(object) = value.as_object_mut() else {
            return Err(D::Error::custom("instance must be a JSON object"));
        };
        let kind = match object.remove("kind") {
            Some(serde_json::Value::String(s)) => s,
            _ => return Err(D::Error::custom("missing string field `kind`")),
        };
        let payload = serde_json::Value::Object(std::mem::take(object));
        let result = match kind.as_str() {
            "graph" => serde_json::from_value(payload).map(Instance::Graph),
            "cluster" => serde_json::from_value(payload).map(Instance::Cluster),
            "steiner" => serde_json::from_value(payload).map(Instance::Steiner),
            "maxleaf" => serde_json::from_value(payload).map(Instance::Maxleaf),
            "kconnect" => serde_json::from_value(payload).map(Instance::Kconnect),
            "twolevel" => serde_json::from_value(payload).map(Instance::Twolevel),
            "assign" => serde_json::from_value(payload).map(Instance::Assign),
            "knapsack" => serde_json::from_value(payload).map(Instance::Knapsack),
            "mchoice" => serde_json::from_value(payload).map(Instance::Mchoice),
            "condense" => serde_json::from_value(payload).map(Instance::Condense),
            "hotlink" => serde_json::from_value(payload).map(Instance::Hotlink),
            "augment" => serde_json::from_value(payload).map(Instance::Augment),
            "restructure" => serde_json::from_value(payload).map(Instance::Restructure),
            "morpho" => serde_json::from_value(payload).map(Instance::Morpho),
            other => return Err(D::Error::custom(format!("unknown instance kind {other:?}"))),
        };
        result.map_err(D::Error::custom)
    }
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Graph(_) => "graph",
            Instance::Cluster(_) => "cluster",
            Instance::Steiner(_) => "steiner",
            Instance::Maxleaf(_) => "maxleaf",
            Instance::Kconnect(_) => "kconnect",
            Instance::Twolevel(_) => "twolevel",
            Instance::Assign(_) => "assign",
            Instance::Knapsack(_) => "knapsack",
            Instance::Mchoice(_) => "mchoice",
            Instance::Condense(_) => "condense",
            Instance::Hotlink(_) => "hotlink",
            Instance::Augment(_) => "augment",
            Instance::Restructure(_) => "restructure",
            Instance::Morpho(_) => "morpho",
        }
    }

    /// Runs the payload-level validators; errors carry field paths.
    pub fn validate(&self) -> Result<Vec<String>> {
        match self {
            Instance::Graph(_) => Ok(Vec::new()),
            Instance::Cluster(p) => {
                crate::clustering::ElementTable::new(p.elements.clone(), p.attrs.clone())?;
                Ok(Vec::new())
            }
            Instance::Steiner(p) => {
                crate::spanning::SteinerInstance {
                    graph: p.graph.clone(),
                    terminals: p.terminals.iter().copied().collect(),
                }
                .validate()?;
                Ok(Vec::new())
            }
            Instance::Maxleaf(p) => {
                if p.graph.node_count() == 0 {
                    return Err(Error::EmptyGraph);
                }
                Ok(Vec::new())
            }
            Instance::Kconnect(p) => {
                let need = (p.k * (p.k + 1) + p.k) as usize;
                if p.sites.len() < need {
                    return Err(Error::TooFewSites {
                        need,
                        got: p.sites.len(),
                    });
                }
                Ok(Vec::new())
            }
            Instance::Twolevel(p) => {
                if p.primary.is_empty() {
                    return Err(Error::EmptyPrimarySet);
                }
                Ok(Vec::new())
            }
            Instance::Assign(p) => p.validate(),
            Instance::Knapsack(_) => Ok(Vec::new()),
            Instance::Mchoice(p) => {
                p.to_choice_instance(None).validate()?;
                Ok(Vec::new())
            }
            Instance::Condense(p) => {
                p.to_overlay()?;
                Ok(Vec::new())
            }
            Instance::Hotlink(p) => {
                p.to_instance()?;
                Ok(Vec::new())
            }
            Instance::Augment(p) => {
                p.validate()?;
                Ok(Vec::new())
            }
            Instance::Restructure(_) => Ok(Vec::new()),
            Instance::Morpho(p) => {
                p.to_hierarchy().validate()?;
                Ok(Vec::new())
            }
        }
    }
}

/// Parses an instance document, optionally insisting on a kind.
pub fn parse_instance(text: &str, expected_kind: Option<&str>) -> Result<Instance> {
    let instance: Instance =
        serde_json::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
    if let Some(expected) = expected_kind {
        if instance.kind() != expected {
            return Err(Error::validation(
                "kind",
                format!("expected {expected:?}, found {:?}", instance.kind()),
            ));
        }
    }
    instance.validate()?;
    Ok(instance)
}

/// Canonical serialization; parsing it back yields an identical value.
pub fn serialize_instance(instance: &Instance) -> String {
    let mut out = serde_json::to_string_pretty(instance).expect("instances are serializable");
    out.push('\n');
    out
}
