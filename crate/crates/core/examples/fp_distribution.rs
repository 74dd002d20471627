// Distribution of a linear form over F_p and its uniformity bound.

use setdiff::fpforms::{distribution, power_of_value, sampled, DistributionMode, LinearForm};
use setdiff::UniverseShape;

pub fn run_example() -> anyhow::Result<()> {
    let phi = LinearForm::new(3, [1, 2, 0, 1, 1, 2])?;
    let exact = distribution(&phi, DistributionMode::Convolution)?;
    println!("φ = {:?} over F_3: masses {:?}", phi.coeffs(), exact.masses.iter().map(|m| m.to_string()).collect::<Vec<_>>());
    println!("max deviation {} ≤ bound {}: {}", exact.max_deviation, exact.bound, exact.within_bound);

    let big = phi.induced(2);
    let table = distribution(&big, DistributionMode::Convolution)?;
    println!("induced Φ on [6]^2 (|Z| = {}): within bound {}", table.support_size, table.within_bound);
    let est = distribution(&big, sampled(2000))?;
    println!("sampled: {:?}", est.masses.iter().map(|m| m.to_string()).collect::<Vec<_>>());

    // Φ(B) − Φ(A) = φ(S)^2 on a power pair.
    let shape = UniverseShape::single(2, 6)?;
    let a = shape.power_mask(&[5]);
    let b = a.union(&shape.power_mask(&[1, 2]));
    let diff = (big.eval(&b)? + 3 - big.eval(&a)?) % 3;
    assert_eq!(diff, power_of_value(&phi, &[1, 2], 2));
    println!("Φ(B) − Φ(A) = {diff} = φ({{1,2}})²");
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
