//! Generalised Kummer algebra of the abelian-surface model with (ℤ/n)^4
//! weights: graded dimensions and the Leray identity.
//!
//!     cargo run --release --example kummer -- 3

use std::time::Instant;

use hilbfrob::kummer::KummerAlgebra;
use hilbfrob::models::abelian_with_torsion;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(2);
    let t = Instant::now();
    let h = abelian_with_torsion(n as u32)?;
    let k = KummerAlgebra::build(&h, n)?;
    println!(
        "H^[{}]: {} invariants; ideal rank {}; K^[{}]: {} [{:.2?}]",
        n,
        k.hilbert().dim(),
        k.ideal_rank(),
        n,
        k.dim(),
        t.elapsed()
    );
    for (deg, dim) in k.dims_by_degree() {
        println!("  degree {:>3}: {}", deg, dim);
    }
    println!("Leray (degree, Σ_L Fock_L, H ⊗ K):");
    for (deg, lhs, rhs) in k.leray_rows()? {
        println!("  {:>3}: {:>6} {:>6} {}", deg, lhs, rhs, if lhs == rhs { "ok" } else { "MISMATCH" });
    }
    Ok(())
}
