//! Layered k-connected network construction, two-level network design
//! and the access-point/user assignment heuristic.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clustering::{agglomerate, ClusterConfig, ElementTable, StopRule};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::num::Rat;

/// A located site; coordinates are exact rationals in length units.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Site {
    pub id: NodeId,
    pub x: Rat,
    pub y: Rat,
    pub z: Rat,
}

impl Site {
    pub fn squared_distance(&self, other: &Site) -> Rat {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        dx * dx + dy * dy + dz * dz
    }

    pub fn distance_f64(&self, other: &Site) -> f64 {
        self.squared_distance(other).to_f64().sqrt()
    }
}

/// Euclidean distance rounded to a millionth, so that graphs built from
/// geometry still carry exact, comparable edge weights.
pub fn rational_distance(a: &Site, b: &Site) -> Rat {
    let d = a.distance_f64(b);
    Rat::new((d * 1e6).round() as i128, 1_000_000)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CenterScheme {
    /// Geographically tight centers picked from central candidates.
    Regional,
    /// Each center draws its members from across the whole site set.
    Distributed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer {
    Center,
    User,
}

/// Three-layer k-connected network: k disjoint (k+1)-cliques as centers
/// plus one edge from every user into each center.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayeredNetwork {
    pub k: u32,
    pub centers: Vec<BTreeSet<NodeId>>,
    pub users: BTreeSet<NodeId>,
    pub layer: BTreeMap<NodeId, Layer>,
    pub graph: Graph,
}

impl LayeredNetwork {
    /// Re-checks all structural invariants from first principles.
    pub fn check_invariants(&self) -> Result<()> {
        let k = self.k as usize;
        if self.centers.len() != k {
            return Err(Error::validation("centers", "expected k center cliques"));
        }
        let mut seen: BTreeSet<NodeId> = BTreeSet::new();
        for (ci, center) in self.centers.iter().enumerate() {
            if center.len() != k + 1 {
                return Err(Error::validation(
                    format!("centers[{ci}]"),
                    "center must have k+1 members",
                ));
            }
            for &v in center {
                if !seen.insert(v) {
                    return Err(Error::validation(
                        format!("centers[{ci}]"),
                        format!("node {v} appears in two centers"),
                    ));
                }
            }
            for &a in center {
                for &b in center {
                    if a < b && !self.graph.has_edge(a, b) {
                        return Err(Error::validation(
                            format!("centers[{ci}]"),
                            format!("missing clique edge ({a},{b})"),
                        ));
                    }
                }
            }
        }
        if self.users.len() < k {
            return Err(Error::validation("users", "need at least k users"));
        }
        for &u in &self.users {
            for center in &self.centers {
                let links = center.iter().filter(|&&c| self.graph.has_edge(u, c)).count();
                if links != 1 {
                    return Err(Error::validation(
                        "users",
                        format!("user {u} has {links} edges into a center, expected 1"),
                    ));
                }
            }
        }
        Ok(())
    }
}

fn sites_by_id(sites: &[Site]) -> Result<BTreeMap<NodeId, &Site>> {
    let mut map = BTreeMap::new();
    for (i, s) in sites.iter().enumerate() {
        if map.insert(s.id, s).is_some() {
            return Err(Error::validation(
                format!("sites[{i}]"),
                format!("duplicate site id {}", s.id),
            ));
        }
    }
    Ok(map)
}

/// Assembles the layered network for an explicit list of center node
/// sets; every other site becomes a user attached to the geometrically
/// nearest member of each center.
pub fn assemble_network(
    sites: &[Site],
    k: u32,
    centers: Vec<BTreeSet<NodeId>>,
) -> Result<LayeredNetwork> {
    let by_id = sites_by_id(sites)?;
    let mut graph = Graph::with_nodes(by_id.keys().copied());
    let mut layer: BTreeMap<NodeId, Layer> = BTreeMap::new();
    let mut center_members: BTreeSet<NodeId> = BTreeSet::new();
    for center in &centers {
        for &v in center {
            if !by_id.contains_key(&v) {
                return Err(Error::UnknownVertex(v));
            }
            center_members.insert(v);
            layer.insert(v, Layer::Center);
        }
        let members: Vec<NodeId> = center.iter().copied().collect();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                graph.add_edge(a, b, rational_distance(by_id[&a], by_id[&b]))?;
            }
        }
    }
    let users: BTreeSet<NodeId> = by_id
        .keys()
        .copied()
        .filter(|v| !center_members.contains(v))
        .collect();
    for center in centers.iter() {
        // nearest-member attachment first
        let mut attach: BTreeMap<NodeId, NodeId> = BTreeMap::new();
        for &u in &users {
            let nearest = center
                .iter()
                .copied()
                .min_by_key(|&c| (by_id[&u].squared_distance(by_id[&c]), c))
                .expect("centers are nonempty");
            attach.insert(u, nearest);
        }
        // k-connectivity needs at least k members of every center to
        // carry a user; shift the cheapest users from multiply-served
        // members onto uncovered ones until that holds
        loop {
            let mut load: BTreeMap<NodeId, usize> = center.iter().map(|&m| (m, 0)).collect();
            for m in attach.values() {
                *load.get_mut(m).unwrap() += 1;
            }
            let carriers = load.values().filter(|&&c| c > 0).count();
            if carriers >= (k as usize).min(users.len()) {
                break;
            }
            let mv = attach
                .iter()
                .filter(|(_, m)| load[m] >= 2)
                .flat_map(|(&u, _)| {
                    center
                        .iter()
                        .copied()
                        .filter(|m| load[m] == 0)
                        .map(move |m| (u, m))
                })
                .min_by_key(|&(u, m)| (by_id[&u].squared_distance(by_id[&m]), u, m))
                .expect("enough users to cover k members");
            attach.insert(mv.0, mv.1);
        }
        for (&u, &m) in &attach {
            graph.add_edge(u, m, rational_distance(by_id[&u], by_id[&m]))?;
        }
    }
    for &u in &users {
        layer.insert(u, Layer::User);
    }
    let network = LayeredNetwork {
        k,
        centers,
        users,
        layer,
        graph,
    };
    network.check_invariants()?;
    Ok(network)
}

/// Builds a k-connected three-layer network from located sites.
pub fn build_k_connected(
    sites: &[Site],
    k: u32,
    scheme: CenterScheme,
    seed: u64,
) -> Result<LayeredNetwork> {
    if k < 2 {
        return Err(Error::validation("k", "k must be at least 2"));
    }
    let need = (k * (k + 1) + k) as usize;
    if sites.len() < need {
        return Err(Error::TooFewSites {
            need,
            got: sites.len(),
        });
    }
    let by_id = sites_by_id(sites)?;
    let centers = match scheme {
        CenterScheme::Regional => regional_centers(sites, &by_id, k),
        CenterScheme::Distributed => distributed_centers(sites, &by_id, k, seed),
    };
    assemble_network(sites, k, centers)
}

/// Centrality proxy used to shortlist candidates: total distance to all
/// other sites, ascending (summed in fixed id order).
fn centrality(site: &Site, all: &[Site]) -> f64 {
    all.iter().map(|s| site.distance_f64(s)).sum()
}

fn regional_centers(
    sites: &[Site],
    by_id: &BTreeMap<NodeId, &Site>,
    k: u32,
) -> Vec<BTreeSet<NodeId>> {
    let mut ranked: Vec<&Site> = sites.iter().collect();
    ranked.sort_by(|a, b| {
        crate::num::cmp_f64(centrality(a, sites), centrality(b, sites)).then(a.id.cmp(&b.id))
    });
    let candidates: Vec<NodeId> = ranked
        .iter()
        .take((k * (k + 1)) as usize)
        .map(|s| s.id)
        .collect();
    let clusters = cluster_sites(&candidates, by_id, k as usize);
    balance_clusters(clusters, by_id, (k + 1) as usize)
}

fn distributed_centers(
    sites: &[Site],
    by_id: &BTreeMap<NodeId, &Site>,
    k: u32,
    seed: u64,
) -> Vec<BTreeSet<NodeId>> {
    let ids: Vec<NodeId> = sites.iter().map(|s| s.id).collect();
    let clusters = cluster_sites(&ids, by_id, k as usize);
    let target = ids.len() / k as usize; // balanced to within one member
    let clusters = balance_clusters(clusters, by_id, target);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<Vec<NodeId>> = clusters
        .iter()
        .map(|c| c.iter().copied().collect())
        .collect();
    let mut centers = Vec::new();
    for c in 0..k as usize {
        let mut center = BTreeSet::new();
        // one representative per cluster, plus one extra from cluster c
        for (j, members) in pool.iter_mut().enumerate() {
            let picks = if j == c { 2 } else { 1 };
            for _ in 0..picks {
                members.shuffle(&mut rng);
                let pick = members.pop().expect("balanced clusters are large enough");
                center.insert(pick);
            }
        }
        centers.push(center);
    }
    centers
}

/// Clusters a set of sites by coordinates, reusing the agglomerative
/// loop with euclidean distance and average aggregation.
fn cluster_sites(
    ids: &[NodeId],
    by_id: &BTreeMap<NodeId, &Site>,
    k: usize,
) -> Vec<BTreeSet<NodeId>> {
    let table = ElementTable::new(
        ids.to_vec(),
        ids.iter()
            .map(|id| {
                let s = by_id[id];
                vec![s.x, s.y, s.z]
            })
            .collect(),
    )
    .expect("site coordinates form a rectangular table");
    let dendro = agglomerate(
        &table,
        &ClusterConfig {
            stop: Some(StopRule::Clusters(k)),
            ..ClusterConfig::default()
        },
    )
    .expect("clustering cannot fail on a valid table");
    dendro.final_clusters
}

/// Moves members from oversized clusters to the nearest undersized one
/// until every cluster has exactly `target` members (surplus clusters
/// simply keep donating their outermost member).
fn balance_clusters(
    mut clusters: Vec<BTreeSet<NodeId>>,
    by_id: &BTreeMap<NodeId, &Site>,
    target: usize,
) -> Vec<BTreeSet<NodeId>> {
    let centroid = |c: &BTreeSet<NodeId>| -> (f64, f64, f64) {
        let n = c.len() as f64;
        let (mut x, mut y, mut z) = (0.0, 0.0, 0.0);
        for id in c {
            x += by_id[id].x.to_f64();
            y += by_id[id].y.to_f64();
            z += by_id[id].z.to_f64();
        }
        (x / n, y / n, z / n)
    };
    let dist_to = |id: NodeId, c: (f64, f64, f64)| -> f64 {
        let s = by_id[&id];
        let (dx, dy, dz) = (s.x.to_f64() - c.0, s.y.to_f64() - c.1, s.z.to_f64() - c.2);
        (dx * dx + dy * dy + dz * dz).sqrt()
    };
    loop {
        let Some(donor) = (0..clusters.len()).find(|&i| clusters[i].len() > target) else {
            break;
        };
        let Some(receiver) = (0..clusters.len())
            .filter(|&i| clusters[i].len() < target)
            .min_by(|&a, &b| {
                let d = centroid(&clusters[donor]);
                crate::num::cmp_f64(
                    dist_to_centroids(centroid(&clusters[a]), d),
                    dist_to_centroids(centroid(&clusters[b]), d),
                )
                .then(a.cmp(&b))
            })
        else {
            break;
        };
        let rc = centroid(&clusters[receiver]);
        // donate the member closest to the receiving cluster
        let moved = clusters[donor]
            .iter()
            .copied()
            .min_by(|&a, &b| crate::num::cmp_f64(dist_to(a, rc), dist_to(b, rc)).then(a.cmp(&b)))
            .expect("donor cluster is nonempty");
        clusters[donor].remove(&moved);
        clusters[receiver].insert(moved);
    }
    clusters
}

fn dist_to_centroids(a: (f64, f64, f64), b: (f64, f64, f64)) -> f64 {
    let (dx, dy, dz) = (a.0 - b.0, a.1 - b.1, a.2 - b.2);
    (dx * dx + dy * dy + dz * dz).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HigherTopology {
    Path,
    Tree,
    Ring,
}

/// Two-level network: a primary path/tree/ring over the primary nodes,
/// with every secondary node reaching the primary level through a
/// cheapest secondary tree.
pub fn two_level_design(
    sites: &[Site],
    primary: &BTreeSet<NodeId>,
    topology: HigherTopology,
    primary_cost: Rat,
    secondary_cost: Rat,
) -> Result<Graph> {
    let by_id = sites_by_id(sites)?;
    if primary.is_empty() {
        return Err(Error::EmptyPrimarySet);
    }
    for &p in primary {
        if !by_id.contains_key(&p) {
            return Err(Error::UnknownVertex(p));
        }
    }
    if primary_cost <= secondary_cost {
        return Err(Error::validation(
            "primary_cost",
            "primary arcs must cost more than secondary arcs",
        ));
    }
    let mut out = Graph::with_nodes(by_id.keys().copied());
    for (&id, _) in &by_id {
        let level = if primary.contains(&id) { "primary" } else { "secondary" };
        out.set_node_attr(id, "level", level);
    }
    let dist = |a: NodeId, b: NodeId| rational_distance(by_id[&a], by_id[&b]);

    // higher level
    let order: Vec<NodeId> = primary.iter().copied().collect();
    match topology {
        HigherTopology::Tree => {
            let mut complete = Graph::with_nodes(order.iter().copied());
            for (i, &a) in order.iter().enumerate() {
                for &b in &order[i + 1..] {
                    complete.add_edge(a, b, dist(a, b))?;
                }
            }
            for (e, _) in crate::graph::mst(&complete)?.edges.iter().map(|&e| (e, ())) {
                out.add_edge(e.0, e.1, primary_cost * dist(e.0, e.1))?;
            }
        }
        HigherTopology::Path | HigherTopology::Ring => {
            let path = primary_path(&order, &dist);
            for window in path.windows(2) {
                out.add_edge(window[0], window[1], primary_cost * dist(window[0], window[1]))?;
            }
            if matches!(topology, HigherTopology::Ring) && path.len() >= 3 {
                let (first, last) = (path[0], *path.last().unwrap());
                out.add_edge(first, last, primary_cost * dist(first, last))?;
            }
        }
    }

    // lower level: spanning structure over the secondary nodes with the
    // whole primary level contracted into one virtual hub
    let secondary: Vec<NodeId> = by_id
        .keys()
        .copied()
        .filter(|v| !primary.contains(v))
        .collect();
    if !secondary.is_empty() {
        let hub: NodeId = by_id.keys().max().unwrap() + 1;
        let mut lower = Graph::with_nodes(secondary.iter().copied().chain([hub]));
        let mut gate: BTreeMap<NodeId, NodeId> = BTreeMap::new();
        for (i, &a) in secondary.iter().enumerate() {
            for &b in &secondary[i + 1..] {
                lower.add_edge(a, b, dist(a, b))?;
            }
            let nearest = primary
                .iter()
                .copied()
                .min_by_key(|&p| (by_id[&a].squared_distance(by_id[&p]), p))
                .unwrap();
            gate.insert(a, nearest);
            lower.add_edge(a, hub, dist(a, nearest))?;
        }
        for e in crate::graph::mst(&lower)?.edges {
            let (u, v) = e;
            if v == hub || u == hub {
                let s = if v == hub { u } else { v };
                out.add_edge(s, gate[&s], secondary_cost * dist(s, gate[&s]))?;
            } else {
                out.add_edge(u, v, secondary_cost * dist(u, v))?;
            }
        }
    }
    Ok(out)
}

/// Nearest-neighbor tour from the smallest id followed by 2-opt to a
/// local optimum; exact rational lengths keep the descent terminating.
fn primary_path(order: &[NodeId], dist: &impl Fn(NodeId, NodeId) -> Rat) -> Vec<NodeId> {
    if order.len() <= 1 {
        return order.to_vec();
    }
    let mut remaining: BTreeSet<NodeId> = order.iter().copied().collect();
    let start = *order.iter().min().unwrap();
    remaining.remove(&start);
    let mut path = vec![start];
    while !remaining.is_empty() {
        let last = *path.last().unwrap();
        let next = remaining
            .iter()
            .copied()
            .min_by_key(|&v| (dist(last, v), v))
            .unwrap();
        remaining.remove(&next);
        path.push(next);
    }
    // 2-opt: reverse segments while doing so shortens the path
    let mut improved = true;
    while improved {
        improved = false;
        for i in 0..path.len().saturating_sub(2) {
            for j in (i + 1)..path.len() - 1 {
                let before = edge_or_zero(&path, i, dist) + dist(path[j], path[j + 1]);
                let after = if i == 0 {
                    Rat::ZERO
                } else {
                    dist(path[i - 1], path[j])
                } + dist(path[i], path[j + 1]);
                if after < before {
                    path[i..=j].reverse();
                    improved = true;
                }
            }
        }
    }
    path
}

fn edge_or_zero(path: &[NodeId], i: usize, dist: &impl Fn(NodeId, NodeId) -> Rat) -> Rat {
    if i == 0 {
        Rat::ZERO
    } else {
        dist(path[i - 1], path[i])
    }
}

/// End-user demand profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserProfile {
    #[serde(flatten)]
    pub site: Site,
    pub bandwidth: Rat,
    pub priority: u8,
    pub reliability: u32,
}

/// Access point with service capacities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccessPoint {
    #[serde(flatten)]
    pub site: Site,
    pub bandwidth: Rat,
    pub max_users: u32,
    pub reliability: u32,
}

/// Full assignment problem input; `l_max` is the distance constraint
/// defining each user's feasible access points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignInstance {
    pub users: Vec<UserProfile>,
    pub aps: Vec<AccessPoint>,
    pub l_max: Rat,
}

impl AssignInstance {
    /// Hard validation plus soft scale warnings: printed values outside
    /// the nominal ordinal scales are preserved, not rejected.
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        for (i, u) in self.users.iter().enumerate() {
            if u.bandwidth <= Rat::ZERO {
                return Err(Error::validation(
                    format!("users[{i}].bandwidth"),
                    "bandwidth must be positive",
                ));
            }
            if !(1..=3).contains(&u.priority) {
                return Err(Error::validation(
                    format!("users[{i}].priority"),
                    "priority must be 1, 2 or 3",
                ));
            }
            if u.reliability < 1 {
                return Err(Error::validation(
                    format!("users[{i}].reliability"),
                    "reliability must be at least 1",
                ));
            }
            if u.bandwidth > Rat::from(10u32) {
                warnings.push(format!(
                    "users[{i}] (id {}): bandwidth {} exceeds the nominal 1..10 scale",
                    u.site.id, u.bandwidth
                ));
            }
            if u.reliability > 10 {
                warnings.push(format!(
                    "users[{i}] (id {}): reliability {} exceeds the nominal 1..10 scale",
                    u.site.id, u.reliability
                ));
            }
        }
        for (j, a) in self.aps.iter().enumerate() {
            if a.bandwidth <= Rat::ZERO {
                return Err(Error::validation(
                    format!("aps[{j}].bandwidth"),
                    "capacity bandwidth must be positive",
                ));
            }
            if a.max_users < 1 {
                return Err(Error::validation(
                    format!("aps[{j}].max_users"),
                    "user capacity must be at least 1",
                ));
            }
        }
        if self.l_max <= Rat::ZERO {
            return Err(Error::validation("l_max", "distance limit must be positive"));
        }
        Ok(warnings)
    }
}

/// Subset of access points a user may connect to under the distance
/// constraint, compared on exact squared distances.
pub fn feasible_access_points<'a>(
    user: &UserProfile,
    aps: &'a [AccessPoint],
    l_max: Rat,
) -> Vec<&'a AccessPoint> {
    let limit = l_max * l_max;
    aps.iter()
        .filter(|ap| user.site.squared_distance(&ap.site) <= limit)
        .collect()
}

/// Vector estimate of one user/access-point pair: reliability and
/// bandwidth are maximized, the priority number minimized (1 is best).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairEstimate {
    pub reliability: u32,
    pub bandwidth: Rat,
    pub priority: u8,
}

impl PairEstimate {
    fn dominates(&self, other: &PairEstimate) -> bool {
        self.reliability >= other.reliability
            && self.bandwidth >= other.bandwidth
            && self.priority <= other.priority
            && (self.reliability > other.reliability
                || self.bandwidth > other.bandwidth
                || self.priority < other.priority)
    }

    /// Scalar score used when a single objective is needed for reports
    /// and oracle comparisons; all three criteria point upward.
    pub fn score(&self) -> Rat {
        Rat::from(self.reliability) + self.bandwidth + Rat::from(4 - self.priority as u32)
    }
}

/// Pareto-layer ranking: rank 1 is the nondominated set, each further
/// rank the nondominated remainder.
pub fn rank_pairs(pairs: &[PairEstimate]) -> Vec<usize> {
    let mut rank = vec![0usize; pairs.len()];
    let mut remaining: BTreeSet<usize> = (0..pairs.len()).collect();
    let mut layer = 0usize;
    while !remaining.is_empty() {
        layer += 1;
        let front: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| {
                !remaining
                    .iter()
                    .any(|&j| j != i && pairs[j].dominates(&pairs[i]))
            })
            .collect();
        debug_assert!(!front.is_empty(), "dominance is a strict partial order");
        for i in front {
            rank[i] = layer;
            remaining.remove(&i);
        }
    }
    rank
}

/// Load bookkeeping per access point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApLoad {
    pub assigned_users: u32,
    pub bandwidth: Rat,
}

/// Partial user -> access-point mapping with recomputable summaries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub assigned: BTreeMap<NodeId, NodeId>,
    pub loads: BTreeMap<NodeId, ApLoad>,
    pub unassigned: BTreeSet<NodeId>,
    /// Sum of pair scores over assigned users.
    pub score: Rat,
}

/// Two-stage heuristic: every feasible pair gets a Pareto-layer rank,
/// then pairs are scanned in ascending rank and accepted while the
/// access point still has user and bandwidth capacity.
pub fn assign_users_greedy(instance: &AssignInstance) -> Result<Assignment> {
    instance.validate()?;
    let mut pair_index: Vec<(usize, usize)> = Vec::new();
    let mut estimates: Vec<PairEstimate> = Vec::new();
    for (ui, user) in instance.users.iter().enumerate() {
        for (ai, ap) in instance.aps.iter().enumerate() {
            let limit = instance.l_max * instance.l_max;
            if user.site.squared_distance(&ap.site) <= limit {
                pair_index.push((ui, ai));
                estimates.push(PairEstimate {
                    reliability: user.reliability.min(ap.reliability),
                    bandwidth: user.bandwidth,
                    priority: user.priority,
                });
            }
        }
    }
    let ranks = rank_pairs(&estimates);
    let mut order: Vec<usize> = (0..pair_index.len()).collect();
    order.sort_by_key(|&i| {
        let (ui, ai) = pair_index[i];
        (
            ranks[i],
            instance.users[ui].site.id,
            instance.aps[ai].site.id,
        )
    });
    let mut assigned: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let mut loads: BTreeMap<NodeId, ApLoad> = instance
        .aps
        .iter()
        .map(|ap| {
            (
                ap.site.id,
                ApLoad {
                    assigned_users: 0,
                    bandwidth: Rat::ZERO,
                },
            )
        })
        .collect();
    let mut score = Rat::ZERO;
    for i in order {
        let (ui, ai) = pair_index[i];
        let user = &instance.users[ui];
        let ap = &instance.aps[ai];
        if assigned.contains_key(&user.site.id) {
            continue;
        }
        let load = loads.get_mut(&ap.site.id).unwrap();
        if load.assigned_users + 1 > ap.max_users || load.bandwidth + user.bandwidth > ap.bandwidth
        {
            continue;
        }
        load.assigned_users += 1;
        load.bandwidth += user.bandwidth;
        assigned.insert(user.site.id, ap.site.id);
        score += estimates[i].score();
    }
    let unassigned: BTreeSet<NodeId> = instance
        .users
        .iter()
        .map(|u| u.site.id)
        .filter(|id| !assigned.contains_key(id))
        .collect();
    Ok(Assignment {
        assigned,
        loads,
        unassigned,
        score,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn site(id: NodeId, x: i64, y: i64) -> Site {
        Site {
            id,
            x: Rat::from(x),
            y: Rat::from(y),
            z: Rat::ZERO,
        }
    }

    fn grid_sites(n: u32) -> Vec<Site> {
        (0..n)
            .map(|i| site(i + 1, (i % 5) as i64 * 10, (i / 5) as i64 * 10))
            .collect()
    }

    #[test]
    fn too_few_sites_rejected() {
        let sites = grid_sites(5);
        assert!(matches!(
            build_k_connected(&sites, 2, CenterScheme::Regional, 1),
            Err(Error::TooFewSites { need: 8, .. })
        ));
    }

    #[test]
    fn regional_network_invariants() {
        let sites = grid_sites(12);
        let net = build_k_connected(&sites, 2, CenterScheme::Regional, 1).unwrap();
        net.check_invariants().unwrap();
        assert_eq!(net.centers.len(), 2);
        assert_eq!(net.users.len(), 6);
        // 2 triangles + 6 users x 2 edges
        assert_eq!(net.graph.edge_count(), 2 * 3 + 6 * 2);
    }

    #[test]
    fn distributed_network_deterministic_per_seed() {
        let sites = grid_sites(14);
        let a = build_k_connected(&sites, 2, CenterScheme::Distributed, 9).unwrap();
        let b = build_k_connected(&sites, 2, CenterScheme::Distributed, 9).unwrap();
        assert_eq!(a, b);
        a.check_invariants().unwrap();
    }

    #[test]
    fn two_level_single_primary_is_star_tree() {
        let sites = grid_sites(6);
        let g = two_level_design(
            &sites,
            &BTreeSet::from([1]),
            HigherTopology::Path,
            Rat::from(3u32),
            Rat::ONE,
        )
        .unwrap();
        assert_eq!(g.edge_count(), 5);
        assert!(g.is_connected());
    }

    #[test]
    fn two_level_all_primary_tree_is_scaled_mst() {
        let sites = grid_sites(5);
        let primary: BTreeSet<NodeId> = sites.iter().map(|s| s.id).collect();
        let g = two_level_design(
            &sites,
            &primary,
            HigherTopology::Tree,
            Rat::from(2u32),
            Rat::ONE,
        )
        .unwrap();
        let mut plain = Graph::with_nodes(primary.iter().copied());
        for (i, a) in sites.iter().enumerate() {
            for b in &sites[i + 1..] {
                plain.add_edge(a.id, b.id, rational_distance(a, b)).unwrap();
            }
        }
        let mst = crate::graph::mst(&plain).unwrap();
        let total: Rat = g.edges().map(|(_, w)| w).sum();
        assert_eq!(total, Rat::from(2u32) * mst.total_weight);
    }

    #[test]
    fn ring_topology_closes_cycle() {
        let sites = grid_sites(8);
        let primary: BTreeSet<NodeId> = [1, 2, 3, 4].into();
        let g = two_level_design(&sites, &primary, HigherTopology::Ring, Rat::from(3u32), Rat::ONE)
            .unwrap();
        for &p in &primary {
            let deg = primary
                .iter()
                .filter(|&&q| q != p && g.has_edge(p, q))
                .count();
            assert_eq!(deg, 2, "ring degree of {p}");
        }
    }

    fn user(id: NodeId, x: i64, y: i64, f: i64, p: u8, r: u32) -> UserProfile {
        UserProfile {
            site: site(id, x, y),
            bandwidth: Rat::from(f),
            priority: p,
            reliability: r,
        }
    }

    fn ap(id: NodeId, x: i64, y: i64, f: i64, n: u32, r: u32) -> AccessPoint {
        AccessPoint {
            site: site(id, x, y),
            bandwidth: Rat::from(f),
            max_users: n,
            reliability: r,
        }
    }

    #[test]
    fn feasible_set_by_distance() {
        let u = user(1, 0, 0, 5, 1, 5);
        let aps = vec![ap(1, 3, 4, 30, 4, 10), ap(2, 100, 100, 30, 4, 10)];
        let feas = feasible_access_points(&u, &aps, Rat::from(5u32));
        assert_eq!(feas.len(), 1);
        assert_eq!(feas[0].site.id, 1);
        let all = feasible_access_points(&u, &aps, Rat::from(1000u32));
        assert_eq!(all.len(), 2);
    }

    #[test]
    fn rank_single_pair() {
        let pairs = vec![PairEstimate {
            reliability: 5,
            bandwidth: Rat::ONE,
            priority: 2,
        }];
        assert_eq!(rank_pairs(&pairs), vec![1]);
    }

    #[test]
    fn dominance_orders_ranks() {
        let a = PairEstimate {
            reliability: 9,
            bandwidth: Rat::from(8u32),
            priority: 1,
        };
        let b = PairEstimate {
            reliability: 3,
            bandwidth: Rat::from(2u32),
            priority: 3,
        };
        let ranks = rank_pairs(&[b, a]);
        assert!(ranks[1] < ranks[0]);
    }

    #[test]
    fn unconstrained_capacity_assigns_everyone() {
        let users: Vec<UserProfile> = (1..=4).map(|i| user(i, i as i64, 0, 2, 1, 5)).collect();
        let aps = vec![ap(10, 0, 0, 1000, 100, 10)];
        let instance = AssignInstance {
            users,
            aps,
            l_max: Rat::from(100u32),
        };
        let sol = assign_users_greedy(&instance).unwrap();
        assert!(sol.unassigned.is_empty());
        assert_eq!(sol.loads[&10].assigned_users, 4);
    }

    #[test]
    fn capacity_limits_respected() {
        let users: Vec<UserProfile> = (1..=5).map(|i| user(i, 0, 0, 4, 1, 5)).collect();
        let aps = vec![ap(10, 0, 0, 10, 3, 10)];
        let instance = AssignInstance {
            users,
            aps,
            l_max: Rat::from(10u32),
        };
        let sol = assign_users_greedy(&instance).unwrap();
        // bandwidth cap 10 admits two users of 4 before the third fails
        assert_eq!(sol.loads[&10].assigned_users, 2);
        assert_eq!(sol.loads[&10].bandwidth, Rat::from(8u32));
        assert_eq!(sol.unassigned.len(), 3);
    }
}
