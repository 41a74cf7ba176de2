//! Command-line front end: parse an instance file, dispatch to the
//! matching solver, print a deterministic report.
//!
//! Exit codes: 0 success, 1 infeasible, 2 input error, 3 internal.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::clustering;
use crate::condense::{self, SolveMode};
use crate::dot::{graph_to_dot, tree_to_dot, Highlight};
use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::instance::{parse_instance, ClusterVariant, Instance};
use crate::knapsack::{self, ChoiceInstance, Selection};
use crate::modify::{self, RestructureMode};
use crate::morpho;
use crate::multilayer;
use crate::num::Rat;
use crate::report::RunReport;
use crate::spanning::{self, LeafTreeSolution};
use crate::tree::RootedTree;

#[derive(Debug, Parser)]
#[command(
    name = "hierkit",
    about = "Hierarchy design and modification toolkit",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Approx,
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
struct CommonArgs {
    /// Instance file in the common JSON format.
    #[arg(long)]
    input: std::path::PathBuf,
    /// Solver mode where the subcommand supports several.
    #[arg(long)]
    mode: Option<Mode>,
    /// Profit guarantee knob for approximation schemes.
    #[arg(long)]
    epsilon: Option<String>,
    /// Constraint relaxation knob for approximation schemes.
    #[arg(long)]
    delta: Option<String>,
    /// Budget override for the budgeted problems.
    #[arg(long)]
    budget: Option<String>,
    /// k override (hotlink count, connectivity degree).
    #[arg(long)]
    k: Option<u32>,
    /// Seed override for randomized constructions.
    #[arg(long)]
    seed: Option<u64>,
    /// Write a DOT rendering of the result structure to this path.
    #[arg(long)]
    dot: Option<std::path::PathBuf>,
    /// Report format on standard output.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Agglomerative clustering of an element table.
    Cluster(CommonArgs),
    /// Minimum spanning tree of a connected graph.
    Mst(CommonArgs),
    /// Steiner tree heuristic over a terminal set.
    Steiner(CommonArgs),
    /// Maximum-leaf spanning tree (exact or greedy).
    Maxleaf(CommonArgs),
    /// Layered k-connected network construction.
    Kconnect(CommonArgs),
    /// Two-level network design.
    Twolevel(CommonArgs),
    /// Greedy user to access-point assignment.
    Assign(CommonArgs),
    /// 0/1 knapsack (exact or FPTAS).
    Knapsack(CommonArgs),
    /// Multiple choice problem (exact or FPTAS).
    Mchoice(CommonArgs),
    /// Overlay-tree condensing under RAM constraints.
    Condense(CommonArgs),
    /// Hotlink assignment over an access tree.
    Hotlink(CommonArgs),
    /// Tree-to-Steiner-tree augmentation.
    Augment(CommonArgs),
    /// Budgeted restructuring toward a goal solution.
    Restructure(CommonArgs),
    /// Morphological composition enumeration and Pareto filter.
    Morpho(CommonArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Cluster(_) => "cluster",
            Command::Mst(_) => "mst",
            Command::Steiner(_) => "steiner",
            Command::Maxleaf(_) => "maxleaf",
            Command::Kconnect(_) => "kconnect",
            Command::Twolevel(_) => "twolevel",
            Command::Assign(_) => "assign",
            Command::Knapsack(_) => "knapsack",
            Command::Mchoice(_) => "mchoice",
            Command::Condense(_) => "condense",
            Command::Hotlink(_) => "hotlink",
            Command::Augment(_) => "augment",
            Command::Restructure(_) => "restructure",
            Command::Morpho(_) => "morpho",
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::Cluster(a)
            | Command::Mst(a)
            | Command::Steiner(a)
            | Command::Maxleaf(a)
            | Command::Kconnect(a)
            | Command::Twolevel(a)
            | Command::Assign(a)
            | Command::Knapsack(a)
            | Command::Mchoice(a)
            | Command::Condense(a)
            | Command::Hotlink(a)
            | Command::Augment(a)
            | Command::Restructure(a)
            | Command::Morpho(a) => a,
        }
    }
}

/// Entry point used by the binary.
pub fn run_main() -> i32 {
    let argv: Vec<String> = std::env::args().collect();
    let mut stdout = std::io::stdout();
    let mut stderr = std::io::stderr();
    run(&argv[1..], &mut stdout, &mut stderr)
}

/// Runs one invocation; all report bytes go to `out`, diagnostics and
/// timing to `err`.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(std::iter::once("hierkit".to_string()).chain(argv.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    let started = Instant::now();
    match execute(&cli.command, err) {
        Ok(report) => {
            let rendered = match cli.command.args().format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
            };
            let _ = out.write_all(rendered.as_bytes());
            let _ = writeln!(err, "elapsed: {:.3}s", started.elapsed().as_secs_f64());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn parse_rat_flag(value: &Option<String>, flag: &str) -> Result<Option<Rat>> {
    match value {
        None => Ok(None),
        Some(text) => Rat::parse(text)
            .map(Some)
            .map_err(|_| Error::validation(flag, format!("cannot parse {text:?} as a number"))),
    }
}

fn execute(command: &Command, diag: &mut dyn Write) -> Result<RunReport> {
    let args = command.args();
    let bytes = std::fs::read(&args.input)?;
    let text = String::from_utf8_lossy(&bytes);
    let instance = parse_instance(&text, Some(command.name_for_kind()))?;
    for warning in instance.validate()? {
        let _ = writeln!(diag, "warning: {warning}");
    }
    let mut report = RunReport::new(command.name(), &bytes);
    report.set_param("input", args.input.display());
    if let Some(mode) = args.mode {
        report.set_param("mode", format!("{mode:?}").to_lowercase());
    }
    for (key, value) in [
        ("epsilon", &args.epsilon),
        ("delta", &args.delta),
        ("budget", &args.budget),
    ] {
        if let Some(v) = value {
            report.set_param(key, v);
        }
    }
    if let Some(k) = args.k {
        report.set_param("k", k);
    }
    if let Some(seed) = args.seed {
        report.set_param("seed", seed);
    }

    let epsilon = parse_rat_flag(&args.epsilon, "epsilon")?;
    let delta = parse_rat_flag(&args.delta, "delta")?;
    let budget = parse_rat_flag(&args.budget, "budget")?;
    let mut dot: Option<String> = None;

    report.output = match (command, instance) {
        (Command::Cluster(_), Instance::Cluster(p)) => {
            let table = clustering::ElementTable::new(p.elements, p.attrs)?;
            let config = p.config.unwrap_or_default();
            let dendro = match p.variant {
                ClusterVariant::Basic => clustering::agglomerate(&table, &config)?,
                ClusterVariant::Ordinal => clustering::agglomerate_ordinal(&table, &config)?,
            };
            dendrogram_value(&dendro)
        }
        (Command::Mst(_), Instance::Graph(g)) => {
            let sol = crate::graph::mst(&g)?;
            dot = Some(graph_to_dot(
                &g,
                Some(&Highlight {
                    nodes: BTreeSet::new(),
                    edges: sol.edges.clone(),
                }),
            ));
            edge_solution_value(&sol.edges, sol.total_weight)
        }
        (Command::Steiner(_), Instance::Steiner(p)) => {
            let instance = spanning::SteinerInstance {
                graph: p.graph.clone(),
                terminals: p.terminals.iter().copied().collect(),
            };
            let sol = spanning::steiner_heuristic(&instance)?;
            dot = Some(graph_to_dot(
                &p.graph,
                Some(&Highlight {
                    nodes: instance.terminals.clone(),
                    edges: sol.edges.clone(),
                }),
            ));
            edge_solution_value(&sol.edges, sol.total_weight)
        }
        (Command::Maxleaf(_), Instance::Maxleaf(p)) => {
            let sol = match args.mode.unwrap_or(Mode::Greedy) {
                Mode::Exact => spanning::max_leaf_exact(&p.graph, p.exact_bound)?,
                Mode::Greedy => spanning::max_leaf_greedy(&p.graph)?,
                Mode::Approx => {
                    return Err(Error::validation("mode", "maxleaf supports exact|greedy"))
                }
            };
            let cds = spanning::cds_from_spanning_tree(&sol, &p.graph)?;
            dot = Some(graph_to_dot(
                &p.graph,
                Some(&Highlight {
                    nodes: sol.internal.clone(),
                    edges: sol.edges.clone(),
                }),
            ));
            leaf_tree_value(&sol, &cds)
        }
        (Command::Kconnect(_), Instance::Kconnect(p)) => {
            let k = args.k.unwrap_or(p.k);
            let seed = args.seed.unwrap_or(p.seed);
            let net = multilayer::build_k_connected(&p.sites, k, p.scheme, seed)?;
            dot = Some(graph_to_dot(
                &net.graph,
                Some(&Highlight {
                    nodes: net.centers.iter().flatten().copied().collect(),
                    edges: BTreeSet::new(),
                }),
            ));
            json!({
                "k": net.k,
                "centers": net.centers,
                "users": net.users,
                "edge_count": net.graph.edge_count(),
                "graph": serde_json::to_value(&net.graph).expect("graph serializes"),
            })
        }
        (Command::Twolevel(_), Instance::Twolevel(p)) => {
            let primary: BTreeSet<u32> = p.primary.iter().copied().collect();
            let g = multilayer::two_level_design(
                &p.sites,
                &primary,
                p.topology,
                p.primary_cost,
                p.secondary_cost,
            )?;
            dot = Some(graph_to_dot(
                &g,
                Some(&Highlight {
                    nodes: primary.clone(),
                    edges: BTreeSet::new(),
                }),
            ));
            let total: Rat = g.edges().map(|(_, w)| w).sum();
            json!({
                "total_cost": total,
                "edge_count": g.edge_count(),
                "graph": serde_json::to_value(&g).expect("graph serializes"),
            })
        }
        (Command::Assign(_), Instance::Assign(p)) => {
            let sol = multilayer::assign_users_greedy(&p)?;
            serde_json::to_value(&sol).expect("assignment serializes")
        }
        (Command::Knapsack(_), Instance::Knapsack(p)) => {
            let b = budget.unwrap_or(p.budget);
            let sel = match args.mode.unwrap_or(Mode::Exact) {
                Mode::Exact => knapsack::knapsack_exact(&p.items, b)?,
                Mode::Approx => {
                    let eps = epsilon.ok_or_else(|| {
                        Error::validation("epsilon", "approx mode needs --epsilon")
                    })?;
                    knapsack::knapsack_fptas(&p.items, b, eps)?
                }
                Mode::Greedy => {
                    return Err(Error::validation("mode", "knapsack supports exact|approx"))
                }
            };
            selection_value(&sel)
        }
        (Command::Mchoice(_), Instance::Mchoice(p)) => {
            let instance: ChoiceInstance = p.to_choice_instance(budget);
            let sel = match args.mode.unwrap_or(Mode::Exact) {
                Mode::Exact => knapsack::multiple_choice_exact(&instance)?,
                Mode::Approx => {
                    let eps = epsilon.ok_or_else(|| {
                        Error::validation("epsilon", "approx mode needs --epsilon")
                    })?;
                    knapsack::multiple_choice_fptas(&instance, eps)?
                }
                Mode::Greedy => {
                    return Err(Error::validation("mode", "mchoice supports exact|approx"))
                }
            };
            selection_value(&sel)
        }
        (Command::Condense(_), Instance::Condense(p)) => {
            let overlay = p.to_overlay()?;
            let mode = match args.mode.unwrap_or(Mode::Exact) {
                Mode::Exact => SolveMode::ExactSmall,
                Mode::Approx => SolveMode::Approx {
                    epsilon: epsilon.or(p.epsilon).ok_or_else(|| {
                        Error::validation("epsilon", "approx mode needs epsilon")
                    })?,
                    delta: delta
                        .or(p.delta)
                        .ok_or_else(|| Error::validation("delta", "approx mode needs delta"))?,
                },
                Mode::Greedy => {
                    return Err(Error::validation("mode", "condense supports exact|approx"))
                }
            };
            let result = condense::solve(&overlay, p.constraint, mode)?;
            dot = Some(tree_to_dot(&weighted_tree(&result.condensed), None));
            json!({
                "condensed_arcs": result.plan.condensed,
                "saved_frequency": result.saved_frequency,
                "chain_weight": result.chain_weight,
                "tail_weight": result.tail_weight,
                "vertices_after": result.condensed.tree.node_count(),
            })
        }
        (Command::Hotlink(_), Instance::Hotlink(p)) => {
            let mut instance = p.to_instance()?;
            if let Some(k) = args.k {
                instance.k = k as usize;
            }
            let base =
                modify::expected_access_cost(&instance.tree, &instance.weights, &Default::default());
            let links = match args.mode.unwrap_or(Mode::Greedy) {
                Mode::Exact => modify::hotlink_exact_small(&instance)?,
                Mode::Greedy => modify::hotlink_greedy(&instance)?,
                Mode::Approx => {
                    return Err(Error::validation("mode", "hotlink supports exact|greedy"))
                }
            };
            let cost = modify::expected_access_cost(&instance.tree, &instance.weights, &links);
            let mut tree = instance.tree.clone();
            tree.node_weight = instance.weights.clone();
            dot = Some(tree_to_dot(
                &tree,
                Some(&Highlight {
                    nodes: links.links.iter().map(|&(_, t)| t).collect(),
                    edges: BTreeSet::new(),
                }),
            ));
            json!({
                "hotlinks": links.links,
                "expected_cost_before": base,
                "expected_cost_after": cost,
            })
        }
        (Command::Augment(_), Instance::Augment(mut p)) => {
            if let Some(b) = budget {
                p.budget = b;
            }
            let (sel, tree) = modify::steiner_augment(&p)?;
            dot = Some(tree_to_dot(&tree, None));
            let mut value = selection_value(&sel);
            value["steiner_points"] = json!(sel
                .chosen
                .iter()
                .filter(|id| id.as_str() != "none")
                .collect::<Vec<_>>());
            value["tree_nodes"] = json!(tree.node_count());
            value
        }
        (Command::Restructure(_), Instance::Restructure(p)) => {
            let mode = match args.mode {
                None => p.mode,
                Some(Mode::Exact) => RestructureMode::ExactSmall,
                Some(Mode::Greedy) => RestructureMode::Greedy,
                Some(Mode::Approx) => {
                    return Err(Error::validation("mode", "restructure supports exact|greedy"))
                }
            };
            let out = modify::restructure_solve(&p.to_instance(), mode)?;
            serde_json::to_value(&out).expect("outcome serializes")
        }
        (Command::Morpho(_), Instance::Morpho(p)) => {
            let comps =
                morpho::enumerate_compositions(&p.to_hierarchy(), p.limit.map(u128::from))?;
            let pareto = morpho::pareto_filter(&comps);
            let shown: Vec<Value> = pareto
                .iter()
                .take(100)
                .map(|c| {
                    json!({
                        "choice": c.choice,
                        "level_counts": c.level_counts,
                        "min_compatibility": c.min_compatibility,
                    })
                })
                .collect();
            json!({
                "feasible_count": comps.len(),
                "pareto_count": pareto.len(),
                "pareto_truncated": pareto.len() > 100,
                "pareto": shown,
            })
        }
        (command, instance) => {
            return Err(Error::validation(
                "kind",
                format!(
                    "instance kind {:?} does not fit subcommand {:?}",
                    instance.kind(),
                    command.name()
                ),
            ));
        }
    };

    if let Some(path) = &args.dot {
        match dot {
            Some(text) => std::fs::write(path, text)?,
            None => {
                let _ = writeln!(
                    diag,
                    "warning: {} produces no graph structure, --dot ignored",
                    command.name()
                );
            }
        }
    }
    Ok(report)
}

impl Command {
    /// Instance kind expected by each subcommand.
    fn name_for_kind(&self) -> &'static str {
        match self {
            Command::Mst(_) => "graph",
            other => other.name(),
        }
    }
}

fn edge_solution_value(edges: &BTreeSet<Edge>, total: Rat) -> Value {
    json!({
        "edges": edges.iter().map(|&(u, v)| json!([u, v])).collect::<Vec<_>>(),
        "edge_count": edges.len(),
        "total_weight": total,
    })
}

fn selection_value(sel: &Selection) -> Value {
    json!({
        "chosen": sel.chosen,
        "profit": sel.total_profit,
        "weight": sel.total_weight,
    })
}

fn leaf_tree_value(sol: &LeafTreeSolution, cds: &BTreeSet<u32>) -> Value {
    json!({
        "edges": sol.edges.iter().map(|&(u, v)| json!([u, v])).collect::<Vec<_>>(),
        "leaf_count": sol.leaf_count(),
        "leaves": sol.leaves,
        "internal": sol.internal,
        "connected_dominating_set": cds,
    })
}

fn dendrogram_value(dendro: &clustering::Dendrogram) -> Value {
    let steps: Vec<Value> = dendro
        .steps
        .iter()
        .map(|s| {
            let mut v = json!({
                "step": s.index,
                "merge_a": s.cluster_a,
                "merge_b": s.cluster_b,
            });
            if let Some(d) = s.distance_sq {
                v["distance_sq"] = json!(d);
                v["distance"] = json!(format!("{:.4}", d.to_f64().sqrt()));
            }
            if let Some(p) = &s.proximity {
                v["proximity"] = json!(p);
            }
            v
        })
        .collect();
    json!({
        "steps": steps,
        "final_clusters": dendro.final_clusters,
    })
}

/// Condensed overlay tree with RAM annotations for DOT output.
fn weighted_tree(overlay: &crate::condense::OverlayTree) -> RootedTree {
    let mut tree = overlay.tree.clone();
    tree.node_weight = overlay.ram.clone();
    tree.arc_weight = overlay.freq.clone();
    tree
}
