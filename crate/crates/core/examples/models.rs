//! Validate every built-in surface model, then round-trip each one through
//! the JSON file format.
//!
//!     cargo run --release --example models

use hilbfrob::format::{from_json, to_json};
use hilbfrob::models::{model, MODEL_NAMES};
use hilbfrob::validate::validate;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in MODEL_NAMES {
        let m = model(name)?;
        let report = validate(&m.presentation);
        let text = to_json(&m.presentation);
        let back = from_json(&text)?;
        println!(
            "{:<12} dim {:>2}  axioms {}  json {} bytes, round trip {}",
            name,
            m.presentation.dim(),
            if report.passed() { "ok" } else { "FAILED" },
            text.len(),
            if to_json(&back) == text { "ok" } else { "MISMATCH" }
        );
        if let Some(c) = report.first_failure() {
            println!("    {}: {}", c.axiom, c.witness.as_deref().unwrap_or(""));
        }
    }
    Ok(())
}
