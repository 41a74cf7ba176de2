//! Minimum spanning trees and forests plus DOT export.
//!
//! Run with: cargo run --example spanning_basics

use hierkit::dot::{graph_to_dot, Highlight};
use hierkit::graph::{mst, mst_prim, spanning_forest, Graph};
use hierkit::Rat;

fn main() -> hierkit::Result<()> {
    // a small weighted mesh
    let mut g = Graph::with_nodes(1..=6);
    for (u, v, w) in [
        (1, 2, "4"),
        (1, 3, "2"),
        (2, 3, "1"),
        (2, 4, "5"),
        (3, 4, "8"),
        (3, 5, "10"),
        (4, 5, "2"),
        (4, 6, "6"),
        (5, 6, "3"),
    ] {
        g.add_edge(u, v, Rat::parse(w)?)?;
    }

    let kruskal = mst(&g)?;
    let prim = mst_prim(&g)?;
    println!("mst edges: {:?}", kruskal.edges);
    println!("mst weight (kruskal): {}", kruskal.total_weight);
    println!("mst weight (prim):    {}", prim.total_weight);
    assert_eq!(kruskal.total_weight, prim.total_weight);

    // forests handle disconnected inputs per component
    let mut two_parts = Graph::with_nodes(1..=6);
    for (u, v, w) in [(1, 2, "1"), (2, 3, "2"), (1, 3, "3"), (4, 5, "1"), (5, 6, "1")] {
        two_parts.add_edge(u, v, Rat::parse(w)?)?;
    }
    let forest = spanning_forest(&two_parts);
    println!(
        "forest on two components: {} edges, weight {}",
        forest.edges.len(),
        forest.total_weight
    );

    let highlight = Highlight {
        nodes: Default::default(),
        edges: kruskal.edges.clone(),
    };
    println!("\nDOT with the tree highlighted:\n{}", graph_to_dot(&g, Some(&highlight)));
    Ok(())
}
