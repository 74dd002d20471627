// Cells, masks, windows and the family file format.

use setdiff::universe::{plant, restrict_and_relabel, DegreeEmbedding};
use setdiff::{Family, OrderedWindow, Point, SubsetMask, UniverseShape};

pub fn run_example() -> anyhow::Result<()> {
    // [3]^1 ∪ [3]^2: 3 + 9 cells, part 0 first.
    let shape = UniverseShape::new(vec![1, 2], 3)?;
    let pt = Point::new(1, vec![2, 3]);
    let idx = shape.index_of(&pt)?;
    println!("{pt:?} sits at cell {idx} of {}", shape.cell_count());
    assert_eq!(shape.point_of(idx)?, pt);

    let square = shape.power_mask(&[1, 3]);
    println!("{{1,3}}^1 ∪ {{1,3}}^2 = {} (hex, low nibble first)", square.to_hex());
    assert_eq!(SubsetMask::from_hex(&shape, &square.to_hex())?, square);

    // Cut out the window {2, 3} and relabel it to [2].
    let w = OrderedWindow::interval(2, 2)?;
    let piece = restrict_and_relabel(&square, &w)?;
    println!("restricted to {:?}: {} cells set", w.elements(), piece.len());
    let back = plant(&piece, &w, &shape)?;
    assert!(back.is_subset(&square));

    let emb = DegreeEmbedding::new(&UniverseShape::single(1, 3)?, &[2])?;
    let diag = emb.embed(&SubsetMask::full(emb.source()))?;
    println!("[3]^1 embeds onto the diagonal: {} cells", diag.len());

    let fam = Family::from_predicate(&UniverseShape::single(1, 3)?, 24, |a| a.len() == 1)?;
    print!("{}", fam.to_text());
    assert_eq!(Family::from_text(&fam.to_text())?, fam);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
