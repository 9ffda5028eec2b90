//! Hodge generating series of Hilbert-scheme dimensions: Betti numbers of
//! the K3 Hilbert schemes, and the Enriques double-cover family.
//!
//!     cargo run --release --example series -- 4

use hilbfrob::models::model;
use hilbfrob::series::{cover_series_for, hilbert_series_for};
use hilbfrob::Weight;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let order: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(4);

    let k3 = model("k3")?.presentation;
    let s = hilbert_series_for(&k3, Weight::ZERO, order)?.unshifted();
    println!("K3^[n] Betti numbers:");
    for n in 1..=order {
        let betti: Vec<String> = s.coeff(n).by_total_degree().values().map(|b| b.to_string()).collect();
        println!("  n = {}: {}", n, betti.join(" "));
    }

    let enriques = model("enriques-z2")?.presentation;
    let cover = cover_series_for(&enriques, order)?;
    println!("Enriques cover family, Hodge polynomials (shifted):");
    for n in 0..=order {
        println!("  n = {}: {}", n, cover.coeff(n));
    }
    Ok(())
}
