//! Three-layer k-connected network construction over located sites,
//! with both center-selection schemes and an independent connectivity
//! check.
//!
//! Run with: cargo run --example k_connected_network

use hierkit::graph::vertex_connectivity_at_least;
use hierkit::instance::{parse_instance, Instance};
use hierkit::multilayer::{build_k_connected, CenterScheme};

fn main() -> hierkit::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/fig19_sites.json");
    let text = std::fs::read_to_string(path)?;
    let Instance::Kconnect(payload) = parse_instance(&text, Some("kconnect"))? else {
        unreachable!("kind was checked by the parser");
    };

    for scheme in [CenterScheme::Regional, CenterScheme::Distributed] {
        let net = build_k_connected(&payload.sites, payload.k, scheme, payload.seed)?;
        println!("scheme {scheme:?}:");
        for (i, center) in net.centers.iter().enumerate() {
            println!("  center {}: {:?}", i + 1, center);
        }
        println!("  users: {:?}", net.users);
        println!("  edges: {}", net.graph.edge_count());
        let ok = vertex_connectivity_at_least(&net.graph, payload.k);
        println!("  {}-connected (flow check): {}", payload.k, ok);
        assert!(ok);
    }
    Ok(())
}
