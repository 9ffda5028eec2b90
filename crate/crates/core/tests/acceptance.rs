//! One PASS/FAIL line per acceptance criterion. All checks are exact
//! (tolerance 0); the random ring-axiom triples use a fixed seed.

use hilbfrob::acceptance::{run, CRITERIA, RING_SAMPLES, RING_SEED, TOLERANCE};

fn main() {
    println!("acceptance: tolerance {}, ring triples {} with seed {}", TOLERANCE, RING_SAMPLES, RING_SEED);
    let mut failed = Vec::new();
    for (id, _) in CRITERIA {
        let outcome = run(id);
        println!("{}", outcome);
        if !outcome.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", CRITERIA.len());
    } else {
        println!("acceptance: failed criteria {:?}", failed);
        std::process::exit(1);
    }
}
