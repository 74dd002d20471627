// One increment step and the full quasirandomization loop.

use setdiff::increment::{find_distinguishing_form, increment_step, quasirandomize, FormSearch, LoopConfig, MSchedule};
use setdiff::patterns::PatternSpec;
use setdiff::rational::ratio;
use setdiff::{Family, UniverseShape};

pub fn run_example() -> anyhow::Result<()> {
    let shape = UniverseShape::single(1, 6)?;
    let e1 = Family::from_predicate(&shape, 24, |a| a.contains(0))?;
    let eta = ratio(1, 2);
    let rep = find_distinguishing_form(&e1, 2, &ratio(1, 4), &FormSearch::default())?.expect("e_1 is biased");
    println!("{}", rep.to_json());
    let step = increment_step(&e1, &rep, 2, Some(&eta))?;
    println!("density {} → {} (guarantee met: {})", step.density_before, step.density_after, step.guarantee_met);

    let fam = Family::from_predicate(&shape, 24, |a| a.contains(0) && !a.contains(1) || a.len() == 3)?;
    let spec = PatternSpec::PowerDifference { d: 1 };
    let cfg = LoopConfig { p: 2, eta, schedule: MSchedule::Fixed(2), search: FormSearch::default(), max_steps: 8, pattern: Some(&spec) };
    let out = quasirandomize(&fam, &cfg)?;
    println!(
        "loop: {} iterations, status {:?}, cap {}, final density {}",
        out.trace.iterations(),
        out.trace.status,
        out.trace.cap,
        out.family.density()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
