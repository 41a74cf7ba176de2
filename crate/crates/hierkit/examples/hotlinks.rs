//! Hotlink assignment: add a few shortcut arcs from the root to cut the
//! expected number of clicks to the leaves.
//!
//! Run with: cargo run --example hotlinks

use hierkit::instance::{parse_instance, Instance};
use hierkit::modify::{expected_access_cost, hotlink_exact_small, hotlink_greedy, HotlinkSet};

fn main() -> hierkit::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/hotlink_sample.json");
    let text = std::fs::read_to_string(path)?;
    let Instance::Hotlink(payload) = parse_instance(&text, Some("hotlink"))? else {
        unreachable!("kind was checked by the parser");
    };
    let instance = payload.to_instance()?;

    let base = expected_access_cost(&instance.tree, &instance.weights, &HotlinkSet::default());
    println!("expected access cost without hotlinks: {base}");

    let exact = hotlink_exact_small(&instance)?;
    let exact_cost = expected_access_cost(&instance.tree, &instance.weights, &exact);
    println!("exact  (k={}): {:?} -> cost {exact_cost}", instance.k, exact.links);

    let greedy = hotlink_greedy(&instance)?;
    let greedy_cost = expected_access_cost(&instance.tree, &instance.weights, &greedy);
    println!("greedy (k={}): {:?} -> cost {greedy_cost}", instance.k, greedy.links);

    assert!(exact_cost <= greedy_cost && greedy_cost <= base);
    Ok(())
}
