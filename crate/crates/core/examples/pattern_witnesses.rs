// Every pattern kind, with certificates re-checked from scratch.

use setdiff::patterns::{distance2_witness, find_pattern_pair, PatternSpec, WindowMode};
use setdiff::{Family, SubsetMask, UniverseShape};

pub fn run_example() -> anyhow::Result<()> {
    let sq = UniverseShape::single(2, 3)?;
    let a = SubsetMask::from_coords(&sq, &[&[3, 3]])?;
    let b = a.union(&sq.power_mask(&[1, 2]));
    let power = PatternSpec::PowerDifference { d: 2 };
    let w = power.witness(&a, &b)?.expect("B ∖ A = {1,2}^2");
    println!("power: {}", w.to_json());
    assert!(w.verify(&a, &b, Some(&power)));

    let c = sq.power_mask(&[2]);
    if let Some(w) = distance2_witness(&b, &c)? {
        println!("distance 2: {}", w.to_json());
    }

    let line = UniverseShape::single(1, 5)?;
    let x = SubsetMask::from_coords(&line, &[&[5]])?;
    let y = SubsetMask::from_coords(&line, &[&[1], &[5]])?;
    let w = PatternSpec::IntervalModN.witness(&SubsetMask::from_coords(&line, &[&[4]])?, &y)?;
    println!("interval {{4}} vs {{1,5}}: {:?}", w.map(|w| w.to_json()));
    assert!(PatternSpec::IntervalModN.witness(&x, &y)?.is_some());

    // A family over [2] planted into windows of [4].
    let small = UniverseShape::single(1, 2)?;
    let f = Family::new(&small, [SubsetMask::from_u64(&small, 0b01), SubsetMask::from_u64(&small, 0b11)])?;
    let spec = PatternSpec::FamilyDifference { family: f, mode: WindowMode::Nested };
    let big = UniverseShape::single(1, 4)?;
    let (a, b) = (SubsetMask::from_u64(&big, 0b1110), SubsetMask::from_u64(&big, 0b1010));
    println!("nested family difference: {:?}", spec.witness(&a, &b)?.map(|w| w.to_json()));

    // {S^2 : S ≠ ∅} has no power pair at all.
    let powers = Family::new(&sq, (1u64..8).map(|s| sq.power_mask(&(1..=3).filter(|x| s >> (x - 1) & 1 == 1).collect::<Vec<_>>())))?;
    assert!(find_pattern_pair(&powers, &power)?.is_none());
    println!("the 7 pure squares over [3] avoid power differences");
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
