//! Builds H^[n] for a model and checks the ring axioms on its invariant basis.
//!
//!     cargo run --release --example hilbert_ring -- enriques-z2 2 all
//!     cargo run --release --example hilbert_ring -- k3 2 200

use std::time::Instant;

use hilbfrob::hilbert::{HilbertAlgebra, Triples};
use hilbfrob::models::model;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let name = args.first().map(String::as_str).unwrap_or("toy-sphere");
    let n: usize = args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(3);
    let triples = match args.get(2).map(String::as_str) {
        None | Some("all") => Triples::All,
        Some(k) => Triples::Random { count: k.parse()?, seed: 2024 },
    };

    let t = Instant::now();
    let h = model(name)?.presentation;
    let alg = HilbertAlgebra::build(&h, n)?;
    println!("{} n={}: dim H_n = {}, dim H^[n] = {} [{:.2?}]", name, n, alg.dim_hn(), alg.dim(), t.elapsed());
    for ((w, deg), k) in alg.dims() {
        println!("  weight {} degree {:>3}: {}", h.group().display(w), deg, k);
    }
    let t = Instant::now();
    let report = alg.check_ring_axioms(triples);
    println!("{} [{:.2?}]", report, t.elapsed());
    Ok(())
}
