//! Symmetric-group combinatorics behind the Hilbert product: orbits, joint
//! orbits and the graph defect of a pair of permutations.
//!
//!     cargo run --example permutations -- "(1 2 3)" "(3 4)" 4

use hilbfrob::perm::{cycle_type, enumerate_sn, graph_defect, joint_orbits, orbits, Permutation};

fn one_based(blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
    blocks.iter().map(|b| b.iter().map(|i| i + 1).collect()).collect()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.get(2).map(|s| s.parse()).transpose()?.unwrap_or(4);
    let sigma = Permutation::parse(args.first().map_or("(1 2 3)", |s| s), Some(n))?;
    let tau = Permutation::parse(args.get(1).map_or("(3 4)", |s| s), Some(n))?;
    let st = sigma.compose(&tau)?;

    println!("σ = {}, τ = {}, στ = {}", sigma, tau, st);
    println!("orbits: σ {:?}, τ {:?}, στ {:?}", one_based(orbits(&sigma).blocks()), one_based(orbits(&tau).blocks()), one_based(orbits(&st).blocks()));
    println!("joint orbits ⟨σ,τ⟩: {:?}", one_based(joint_orbits(&sigma, &tau)?.blocks()));
    println!("graph defect per joint orbit: {:?}", graph_defect(&sigma, &tau)?);

    let mut classes = std::collections::BTreeMap::<Vec<usize>, usize>::new();
    for p in enumerate_sn(n)? {
        *classes.entry(cycle_type(&p)).or_default() += 1;
    }
    println!("conjugacy classes of S_{}:", n);
    for (ty, size) in classes {
        println!("  {:?}: {}", ty, size);
    }
    Ok(())
}
