// Closed-form moments of the hit count N and the variance bound.

use setdiff::covering::{count_hits, exact_moments, WindowSystem};
use setdiff::rational::{int, ratio};
use setdiff::{SubsetMask, UniverseShape};

pub fn run_example() -> anyhow::Result<()> {
    let ws = WindowSystem::canonical(8, 2)?;
    // P: the window piece contains its first cell.
    let pred = |s: &SubsetMask| s.contains(0);
    for eps in [ratio(1, 4), ratio(1, 8)] {
        let rep = exact_moments(&ws, &[2], pred, Some(&eps))?;
        println!(
            "t={} p={} E={} Var={} threshold met: {} Var ≤ εE²: {}",
            rep.t, rep.p_p, rep.expectation, rep.variance, rep.threshold_met, rep.bound_holds
        );
    }

    // Brute force agrees on [4]^1 with two windows.
    let ws = WindowSystem::canonical(4, 2)?;
    let shape = UniverseShape::single(1, 4)?;
    let (mut sum, mut sq) = (0usize, 0usize);
    for a in shape.all_subsets(24)? {
        let n = count_hits(&a, &ws, pred)?;
        sum += n;
        sq += n * n;
    }
    let mean = ratio(sum, 16);
    let var = ratio(sq, 16) - &mean * &mean;
    let rep = exact_moments(&ws, &[1], pred, None)?;
    assert_eq!((mean.clone(), var.clone()), (rep.expectation.clone(), rep.variance));
    println!("exhaustive on [4]: E={mean} Var={var} (= t·p = {})", int(2u32) * ratio(1, 2));
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
