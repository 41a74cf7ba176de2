//! Morphological design: enumerate the feasible compositions of a
//! car-repair plan (one alternative per leaf subsystem, compatibility
//! respected) and keep the Pareto-efficient ones.
//!
//! Run with: cargo run --example morpho_compositions

use hierkit::instance::{parse_instance, Instance};
use hierkit::morpho::{enumerate_compositions, pareto_filter};

fn main() -> hierkit::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/car_repair.json");
    let text = std::fs::read_to_string(path)?;
    let Instance::Morpho(payload) = parse_instance(&text, Some("morpho"))? else {
        unreachable!("kind was checked by the parser");
    };
    let hierarchy = payload.to_hierarchy();

    println!("composition space: {}", hierarchy.composition_space());
    let feasible = enumerate_compositions(&hierarchy, payload.limit.map(u128::from))?;
    println!("feasible compositions: {}", feasible.len());

    let pareto = pareto_filter(&feasible);
    println!("Pareto-efficient: {}", pareto.len());
    for comp in pareto.iter().take(5) {
        let picks: Vec<&str> = comp.choice.values().map(String::as_str).collect();
        println!(
            "  {:?}  level counts {:?}, min compatibility {}",
            picks, comp.level_counts, comp.min_compatibility
        );
    }
    if pareto.len() > 5 {
        println!("  ... and {} more", pareto.len() - 5);
    }
    Ok(())
}
