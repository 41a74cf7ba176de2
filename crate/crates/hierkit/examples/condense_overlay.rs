//! Overlay-tree condensing: merge module vertices to save loading
//! frequency while the heaviest root-to-leaf RAM chain stays in budget.
//!
//! Run with: cargo run --example condense_overlay

use hierkit::condense::{
    apply_plan, cascade_bottom_up, solve, tree_weight, CondensePlan, SolveMode,
};
use hierkit::instance::{parse_instance, Instance};
use hierkit::Rat;

fn main() -> hierkit::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/fig28_overlay.json");
    let text = std::fs::read_to_string(path)?;
    let Instance::Condense(payload) = parse_instance(&text, Some("condense"))? else {
        unreachable!("kind was checked by the parser");
    };
    let overlay = payload.to_overlay()?;
    println!(
        "original: {} vertices, tree weight {}",
        overlay.tree.node_count(),
        tree_weight(&overlay)
    );

    // hand-picked plan: merge 1 and 2 into the root, 7 into 3, 10 into 5
    let plan = CondensePlan {
        condensed: [1, 2, 7, 10].into(),
    };
    let merged = apply_plan(&overlay, &plan)?;
    println!(
        "hand plan {:?}: {} vertices, weight {}",
        plan.condensed,
        merged.tree.node_count(),
        tree_weight(&merged)
    );

    let exact = solve(&overlay, payload.constraint, SolveMode::ExactSmall)?;
    println!(
        "exact optimum: condense {:?}, saved frequency {}, chain {}, tail {}",
        exact.plan.condensed, exact.saved_frequency, exact.chain_weight, exact.tail_weight
    );

    let eps = Rat::parse("0.2")?;
    let approx = cascade_bottom_up(&overlay, Rat::parse("9")?, Rat::parse("7")?, eps, eps)?;
    println!(
        "cascade (b-=9, b+=7, eps=delta=0.2): saved {}, chain {}, tail {}",
        approx.saved_frequency, approx.chain_weight, approx.tail_weight
    );
    Ok(())
}
