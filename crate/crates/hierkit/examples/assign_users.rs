//! Greedy assignment of 25 users to 6 access points under distance,
//! bandwidth and user-count constraints; pairs are ranked by Pareto
//! layers over (reliability, bandwidth, priority).
//!
//! Run with: cargo run --example assign_users

use hierkit::instance::{parse_instance, Instance};
use hierkit::multilayer::{assign_users_greedy, feasible_access_points};

fn main() -> hierkit::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/tables34_wireless.json");
    let text = std::fs::read_to_string(path)?;
    let Instance::Assign(instance) = parse_instance(&text, Some("assign"))? else {
        unreachable!("kind was checked by the parser");
    };
    for warning in instance.validate()? {
        println!("note: {warning}");
    }

    let first = &instance.users[0];
    let feas = feasible_access_points(first, &instance.aps, instance.l_max);
    println!(
        "user {} can reach access points {:?} within {}",
        first.site.id,
        feas.iter().map(|ap| ap.site.id).collect::<Vec<_>>(),
        instance.l_max
    );

    let assignment = assign_users_greedy(&instance)?;
    println!("\nassignment (user -> access point):");
    for (user, ap) in &assignment.assigned {
        println!("  {user} -> {ap}");
    }
    println!("unassigned users: {:?}", assignment.unassigned);
    println!("\nper access point:");
    for (ap, load) in &assignment.loads {
        println!(
            "  ap {ap}: {} users, bandwidth {}",
            load.assigned_users, load.bandwidth
        );
    }
    println!("score: {}", assignment.score);
    Ok(())
}
