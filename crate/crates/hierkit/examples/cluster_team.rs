//! Agglomerative clustering of an eight-person team rated on four
//! ordinal attributes, with both the metric and the ordinal/Pareto pair
//! selection rules.
//!
//! Run with: cargo run --example cluster_team

use hierkit::clustering::{
    agglomerate, agglomerate_ordinal, distance_matrix, ClusterConfig, ElementTable, Metric,
    StopRule,
};
use hierkit::instance::{parse_instance, Instance};

fn main() -> hierkit::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/table1_team.json");
    let text = std::fs::read_to_string(path)?;
    let Instance::Cluster(payload) = parse_instance(&text, Some("cluster"))? else {
        unreachable!("kind was checked by the parser");
    };
    let table = ElementTable::new(payload.elements, payload.attrs)?;

    let matrix = distance_matrix(&table, Metric::Euclidean);
    println!("pairwise distances (squared kept exact, sqrt for display):");
    for i in 0..table.len() {
        let row: Vec<String> = (0..table.len())
            .map(|j| format!("{:5.2}", matrix.distance_f64(i, j)))
            .collect();
        println!("  {} | {}", matrix.ids[i], row.join(" "));
    }

    let dendro = agglomerate(&table, &ClusterConfig::default())?;
    println!("\nmerge log (euclidean distance, average aggregation):");
    for step in &dendro.steps {
        println!(
            "  step {}: {:?} + {:?}  at distance {:.4}",
            step.index,
            step.cluster_a,
            step.cluster_b,
            step.distance_sq.unwrap().to_f64().sqrt()
        );
    }

    let config = ClusterConfig {
        stop: Some(StopRule::Clusters(3)),
        ..ClusterConfig::default()
    };
    let ordinal = agglomerate_ordinal(&table, &config)?;
    println!("\nordinal variant, stopped at 3 clusters:");
    for cluster in &ordinal.final_clusters {
        println!("  {cluster:?}");
    }
    Ok(())
}
