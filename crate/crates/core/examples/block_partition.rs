// Block partitions on which the induced form is cell-constant.

use setdiff::fpforms::{build_block_partition, cell_form_value, cell_value_gap, LinearForm};
use setdiff::{SubsetMask, UniverseShape};

pub fn run_example() -> anyhow::Result<()> {
    for phi in [LinearForm::new(2, [1, 0, 0, 0, 0, 0, 0, 0])?, LinearForm::new(3, [1, 1, 1, 2, 2, 2, 1, 2, 1, 1, 2, 2])?] {
        let part = build_block_partition(&phi, 2)?;
        println!("φ = {:?}: {:?}, σ = {}, t = {}", phi.coeffs(), part.case, part.sigma, part.t());
        for i in 0..part.t() {
            println!("  row {}: {:?}", i + 1, part.blocks[i]);
        }
        println!("  remainder {:?}", part.remainder);

        let induced = phi.induced(2);
        let shape = UniverseShape::single(2, phi.n())?;
        let small = UniverseShape::single(2, 2)?;
        let u = shape.power_mask(&part.remainder);
        let value = cell_form_value(&induced, &part, 0, &u)?;
        for b in 0..16 {
            let member = part.cell_member(0, &u, &SubsetMask::from_u64(&small, b))?;
            assert_eq!(induced.eval(&member)?, value);
        }
        println!("  Φ ≡ {value} on the 16 members of C(X_1, U)");
        println!("  max cell/global gap {}", cell_value_gap(&induced, &part)?.max_gap);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
