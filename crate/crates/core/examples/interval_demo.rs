// The cyclic-interval demo: cells, average density and framework counts.

use setdiff::covering::{interval_demo_average_density, interval_demo_cells, verify_interval_demo};
use setdiff::{Family, UniverseShape};

pub fn run_example() -> anyhow::Result<()> {
    let n = 4;
    let cells = interval_demo_cells(n)?;
    let first = &cells[5];
    println!("cell (C={:#06b}, y={}): {:?}", first.base, first.start, first.members);

    let shape = UniverseShape::single(1, n)?;
    let fam = Family::from_predicate(&shape, 24, |a| a.len() == 2)?;
    let avg = interval_demo_average_density(n, &fam)?;
    println!("two-element sets: density {} = average cell density {}", fam.density(), avg);
    assert_eq!(avg, fam.density());

    let rep = verify_interval_demo(n)?;
    println!("K={:?} L={:?} |Ω|={} |W|={} identity {}", rep.k, rep.l, rep.omega, rep.cells, rep.identity_holds);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
