//! Restructuring: move an existing solution toward a goal solution
//! under a change-cost budget, staying feasible for the embedded
//! problem; shown for a knapsack solution and a spanning tree.
//!
//! Run with: cargo run --example restructure

use hierkit::graph::Graph;
use hierkit::instance::{parse_instance, Instance};
use hierkit::modify::{
    edge_id, restructure_solve, ChangeCosts, EmbeddedProblem, MetricBounds, ProximityMode,
    RestructureInstance, RestructureMode,
};
use hierkit::Rat;

fn main() -> hierkit::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/restructure_sample.json");
    let text = std::fs::read_to_string(path)?;
    let Instance::Restructure(payload) = parse_instance(&text, Some("restructure"))? else {
        unreachable!("kind was checked by the parser");
    };
    let instance = payload.to_instance();
    for h in ["0", "1", "2", "4"] {
        let mut budgeted = instance.clone();
        budgeted.h_max = Rat::parse(h)?;
        let out = restructure_solve(&budgeted, RestructureMode::ExactSmall)?;
        println!(
            "knapsack, budget {h}: {:?} (cost {}, distance to goal {})",
            out.solution, out.change_cost, out.proximity_to_goal
        );
    }

    // spanning-tree restructuring with an edge exchange walk
    let mut g = Graph::with_nodes(1..=4);
    for (u, v, w) in [(1, 2, "1"), (2, 3, "1"), (3, 4, "1"), (4, 1, "1"), (1, 3, "2")] {
        g.add_edge(u, v, Rat::parse(w)?)?;
    }
    let instance = RestructureInstance {
        problem: EmbeddedProblem::SpanningTree {
            graph: g,
            root: Some(1),
            metric_bounds: MetricBounds::default(),
        },
        s1: [edge_id(1, 2), edge_id(2, 3), edge_id(3, 4)].into(),
        s2: [edge_id(4, 1), edge_id(1, 3), edge_id(3, 2)].into(),
        costs: ChangeCosts::default(),
        h_max: Rat::parse("2")?,
        proximity: ProximityMode::SymmetricDifference,
    };
    let out = restructure_solve(&instance, RestructureMode::Greedy)?;
    println!(
        "spanning tree, budget 2: {:?} (cost {}, distance to goal {})",
        out.solution, out.change_cost, out.proximity_to_goal
    );
    Ok(())
}
