//! Steiner tree heuristic: connect a terminal subset cheaply, allowing
//! non-terminal relay vertices.
//!
//! Run with: cargo run --example steiner_tree

use hierkit::instance::{parse_instance, Instance};
use hierkit::spanning::{steiner_heuristic, SteinerInstance};

fn main() -> hierkit::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/steiner_sample.json");
    let text = std::fs::read_to_string(path)?;
    let Instance::Steiner(payload) = parse_instance(&text, Some("steiner"))? else {
        unreachable!("kind was checked by the parser");
    };
    let instance = SteinerInstance {
        graph: payload.graph,
        terminals: payload.terminals.into_iter().collect(),
    };

    let tree = steiner_heuristic(&instance)?;
    println!("terminals: {:?}", instance.terminals);
    println!("tree edges: {:?}", tree.edges);
    println!("tree weight: {}", tree.total_weight);

    let mst_weight = hierkit::graph::mst(&instance.graph)?.total_weight;
    println!("plain spanning tree weight for comparison: {mst_weight}");
    Ok(())
}
