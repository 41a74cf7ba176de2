//! Two-level network design: an expensive primary path over backbone
//! nodes, cheap secondary trees hanging off it.
//!
//! Run with: cargo run --example two_level_network

use std::collections::BTreeSet;

use hierkit::instance::{parse_instance, Instance};
use hierkit::multilayer::{two_level_design, HigherTopology};
use hierkit::Rat;

fn main() -> hierkit::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/fig22_twolevel.json");
    let text = std::fs::read_to_string(path)?;
    let Instance::Twolevel(payload) = parse_instance(&text, Some("twolevel"))? else {
        unreachable!("kind was checked by the parser");
    };
    let primary: BTreeSet<u32> = payload.primary.iter().copied().collect();

    for topology in [HigherTopology::Path, HigherTopology::Tree, HigherTopology::Ring] {
        let g = two_level_design(
            &payload.sites,
            &primary,
            topology,
            payload.primary_cost,
            payload.secondary_cost,
        )?;
        let total: Rat = g.edges().map(|(_, w)| w).sum();
        let primary_edges = g
            .edges()
            .filter(|((u, v), _)| primary.contains(u) && primary.contains(v))
            .count();
        println!(
            "{topology:?}: total cost {:.2}, {} primary edges, {} edges overall",
            total.to_f64(),
            primary_edges,
            g.edge_count()
        );
    }
    Ok(())
}
