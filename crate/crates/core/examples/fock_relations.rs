//! Sweeps the Heisenberg, Virasoro and boundary relations on a catalog model.
//!
//! cargo run --release --example fock_relations -- toy-plane 4

use std::time::Instant;

use hilbfrob::fock::{CheckConfig, FockSpace, Relation};
use hilbfrob::models::model;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().collect();
    let name = args.get(1).map(String::as_str).unwrap_or("toy-plane");
    let max_weight: i64 = args.get(2).map(|s| s.parse()).transpose()?.unwrap_or(4);
    let m = model(name)?;
    let fock = FockSpace::standard(&m.presentation)?;
    let cfg = CheckConfig { max_weight, max_level: 3, canonical_class: m.canonical_class.clone() };
    for rel in Relation::ALL {
        let t = Instant::now();
        let report = fock.commutator_check(rel, &cfg)?;
        println!("{}   [{:.2?}]", report, t.elapsed());
    }
    Ok(())
}
