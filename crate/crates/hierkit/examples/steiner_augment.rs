//! Turning a tree into a Steiner tree: candidate Steiner points per
//! region, selected by the multiple choice model under a resource
//! budget, then spliced into the structure.
//!
//! Run with: cargo run --example steiner_augment

use hierkit::instance::{parse_instance, Instance};
use hierkit::modify::steiner_augment;
use hierkit::Rat;

fn main() -> hierkit::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/table9_augment.json");
    let text = std::fs::read_to_string(path)?;
    let Instance::Augment(base) = parse_instance(&text, Some("augment"))? else {
        unreachable!("kind was checked by the parser");
    };

    for budget in ["2.9", "4.2", "5.4"] {
        let mut instance = base.clone();
        instance.budget = Rat::parse(budget)?;
        let (selection, tree) = steiner_augment(&instance)?;
        let points: Vec<&String> = selection
            .chosen
            .iter()
            .filter(|id| id.as_str() != "none")
            .collect();
        println!(
            "budget {budget}: points {points:?}, profit {}, resource {}, tree now {} nodes",
            selection.total_profit,
            selection.total_weight,
            tree.node_count()
        );
    }
    Ok(())
}
