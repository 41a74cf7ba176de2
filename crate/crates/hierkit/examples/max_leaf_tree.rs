//! Maximum-leaf spanning trees and the connected dominating set they
//! induce: the internal nodes of a many-leaf tree form a small backbone.
//!
//! Run with: cargo run --example max_leaf_tree

use hierkit::instance::{parse_instance, Instance};
use hierkit::spanning::{cds_from_spanning_tree, max_leaf_exact, max_leaf_greedy};

fn main() -> hierkit::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/maxleaf_sample.json");
    let text = std::fs::read_to_string(path)?;
    let Instance::Maxleaf(payload) = parse_instance(&text, Some("maxleaf"))? else {
        unreachable!("kind was checked by the parser");
    };
    let graph = payload.graph;

    let exact = max_leaf_exact(&graph, payload.exact_bound)?;
    let greedy = max_leaf_greedy(&graph)?;
    println!("exact:  {} leaves {:?}", exact.leaf_count(), exact.leaves);
    println!("greedy: {} leaves {:?}", greedy.leaf_count(), greedy.leaves);

    let backbone = cds_from_spanning_tree(&exact, &graph)?;
    println!("connected dominating set: {backbone:?}");
    println!(
        "complementarity: {} internal nodes + {} leaves = {} nodes",
        backbone.len(),
        exact.leaf_count(),
        graph.node_count()
    );
    Ok(())
}
