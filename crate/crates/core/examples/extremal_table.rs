// Exact maxima of pattern-free families.

use setdiff::extremal::{density_threshold_table, max_avoiding_family, regression_table, spec_by_name};
use setdiff::patterns::PatternSpec;
use setdiff::UniverseShape;

pub fn run_example() -> anyhow::Result<()> {
    let table = density_threshold_table(&[1], [1, 2, 3, 4], |shape| PatternSpec::PowerDifference { d: shape.degree(0) })?;
    for row in &table.rows {
        println!("n={} max={} density={}", row.n, row.max_size, row.max_density);
    }

    let shape = UniverseShape::single(2, 2)?;
    let rec = max_avoiding_family(&shape, &spec_by_name("clique", &shape).expect("known"))?;
    println!("clique-free on [2]^2: {} sets, optimal {}, {} nodes", rec.max_size, rec.optimal, rec.nodes);

    for entry in regression_table() {
        println!("{:?} n={} {}: {}", entry.degrees, entry.n, entry.pattern, entry.max_size);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
