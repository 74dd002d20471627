// Densest covering cell and the double-counting identities.

use setdiff::covering::{double_counting, proof_chain, scan_for_dense_cell};
use setdiff::rational::ratio;
use setdiff::{Family, UniverseShape};

pub fn run_example() -> anyhow::Result<()> {
    let shape = UniverseShape::single(1, 6)?;
    // Sets with an odd number of elements among {1, 2, 3}.
    let fam = Family::from_predicate(&shape, 24, |a| (0..3).filter(|&i| a.contains(i)).count() % 2 == 1)?;
    let a_m = Family::full(&UniverseShape::single(1, 2)?, 24)?;
    let rep = scan_for_dense_cell(&fam, 2, &a_m, Some(&ratio(1, 4)))?;
    println!("{}", serde_json::to_string_pretty(&rep.to_json())?);
    assert!(rep.max_density >= rep.average_density);

    let dc = double_counting(&fam, 2, &a_m, 24)?;
    println!("Σ N(A) = {} = Σ|D(I_r)| = {}", dc.sum_hits_all, dc.sum_window_totals);
    println!("Σ_fam N(A) = {} = Σ|fam ∩ D(I_r)| = {}", dc.sum_hits_family, dc.sum_window_family);
    assert!(dc.holds());

    let chain = proof_chain(&fam, 2, &a_m, &ratio(1, 4), 24)?;
    println!("proof chain holds: {} (premise {})", chain.chain_ok(), chain.premise_holds);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
