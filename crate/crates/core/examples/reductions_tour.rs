// Symmetric sets, β, multiplexing and the clique/square correspondence.

use setdiff::reductions::{
    beta_bijection, beta_inverse, catalog_table, clique_square_correspondence, graph_cells, graph_density, multiplex,
    multiplex_density, square_to_clique, IntervalPartitionCatalog, LoopMode, SymmetricRegion,
};
use setdiff::{Family, SubsetMask, UniverseShape};

pub fn run_example() -> anyhow::Result<()> {
    let catalog = IntervalPartitionCatalog::new(3)?;
    print!("{}", catalog_table(&catalog));
    let region = SymmetricRegion::new(3, 3)?;
    let a = region.extend(&SubsetMask::from_coords(region.shape(), &[&[1, 1, 2], &[1, 2, 3]])?)?;
    let bundle = beta_bijection(&a, &catalog)?;
    print!("β(A):\n{}", bundle.to_text());
    assert_eq!(beta_inverse(&bundle, &catalog)?, a);

    let line = UniverseShape::single(1, 3)?;
    let fam = Family::from_predicate(&line, 24, |s| s.len() >= 2)?;
    let mux = multiplex(&fam, 2)?;
    println!("multiplexed density {} = original {}", multiplex_density(&mux), fam.density());

    let sq = UniverseShape::single(2, 3)?;
    let upper = graph_cells(&sq, LoopMode::Loopless);
    let graphs = Family::new(&sq, [SubsetMask::empty(&sq), upper.clone()])?;
    let image = clique_square_correspondence(&graphs, LoopMode::Loopless, 24)?;
    println!("graph density {} = image density {}", graph_density(&graphs, LoopMode::Loopless), image.density());

    let b = sq.power_mask(&[1, 3]);
    if let Some((ga, gb, s)) = square_to_clique(&SubsetMask::empty(&sq), &b)? {
        println!("square pair over S = {s:?} becomes the clique pair {} → {}", ga.to_hex(), gb.to_hex());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
