//! The shared selection solvers: exact knapsack, the profit-scaling
//! FPTAS, and the multiple choice problem at several budgets.
//!
//! Run with: cargo run --example knapsack_family

use hierkit::instance::{parse_instance, Instance};
use hierkit::knapsack::{
    knapsack_exact, knapsack_fptas, multiple_choice_exact, multiple_choice_fptas,
};
use hierkit::Rat;

fn main() -> hierkit::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/knapsack_sample.json");
    let text = std::fs::read_to_string(path)?;
    let Instance::Knapsack(payload) = parse_instance(&text, Some("knapsack"))? else {
        unreachable!("kind was checked by the parser");
    };
    let exact = knapsack_exact(&payload.items, payload.budget)?;
    println!(
        "knapsack exact:  {:?} profit {} weight {}",
        exact.chosen, exact.total_profit, exact.total_weight
    );
    for eps in ["0.1", "0.3"] {
        let approx = knapsack_fptas(&payload.items, payload.budget, Rat::parse(eps)?)?;
        println!(
            "knapsack fptas eps={eps}: {:?} profit {}",
            approx.chosen, approx.total_profit
        );
    }

    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/table9_regions.json");
    let text = std::fs::read_to_string(path)?;
    let Instance::Mchoice(payload) = parse_instance(&text, Some("mchoice"))? else {
        unreachable!("kind was checked by the parser");
    };
    println!("\nmultiple choice, one pick per region:");
    for budget in ["2.9", "4.2", "5.4"] {
        let instance = payload.to_choice_instance(Some(Rat::parse(budget)?));
        let sel = multiple_choice_exact(&instance)?;
        println!(
            "  budget {budget}: {:?} profit {} weight {}",
            sel.chosen, sel.total_profit, sel.total_weight
        );
        let approx = multiple_choice_fptas(&instance, Rat::parse("0.1")?)?;
        println!("    fptas eps=0.1 profit {}", approx.total_profit);
    }
    Ok(())
}
