//! Density increment and the iterated quasirandomization loop.
//!
//! A family that is not `(η, p)`-quasirandom has some linear form whose
//! induced distribution on the family deviates from the global one. Building
//! a block partition for that form and scanning the block-constant cells
//! `C(X_i, U)` finds a cell in which the family is denser; pulling the cell
//! back through `h` gives a family over the smaller universe `[m]^d`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::fpforms::{self, build_block_partition, BlockPartition, FormError, LinearForm, PartitionCase};
use crate::patterns::{find_pattern_pair, PatternError, PatternSpec, Witness};
use crate::rational::{self, Rational};
use crate::universe::{Family, SubsetMask, UniverseError, UniverseShape};

#[derive(Debug, Error)]
pub enum IncrementError {
    #[error(transparent)]
    Universe(#[from] UniverseError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("family must be nonempty")]
    EmptyFamily,
    #[error("increment needs a single-part universe, got {0}")]
    MultiPart(String),
    #[error("contract violation: {0}")]
    ContractViolation(String),
}

pub type Result<T, E = IncrementError> = std::result::Result<T, E>;

/// `p^n` at or below this uses the exhaustive form pool by default.
pub const EXHAUSTIVE_POOL_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PoolKind {
    /// Exhaustive when `p^n ≤ limit`, otherwise small.
    Auto,
    Exhaustive,
    /// All forms with one or two nonzero coefficients.
    Small,
    /// Only user-supplied forms.
    File,
}

#[derive(Debug, Clone)]
pub struct FormSearch {
    pub kind: PoolKind,
    pub extra: Vec<LinearForm>,
    pub limit: u64,
}

impl Default for FormSearch {
    fn default() -> Self {
        Self { kind: PoolKind::Auto, extra: Vec::new(), limit: EXHAUSTIVE_POOL_LIMIT }
    }
}

impl FormSearch {
    fn exhaustive(&self, p: u32, n: u32) -> bool {
        match self.kind {
            PoolKind::Exhaustive => true,
            PoolKind::Auto => (p as u64).checked_pow(n).is_some_and(|v| v <= self.limit),
            PoolKind::Small | PoolKind::File => false,
        }
    }

    /// `"uniform"` when every form was searched, else `"pool-uniform"`.
    pub fn label(&self, p: u32, n: u32) -> &'static str {
        if self.exhaustive(p, n) {
            "uniform"
        } else {
            "pool-uniform"
        }
    }

    /// Nonzero forms to try, in a fixed order; user forms of the right
    /// length and modulus come last.
    pub fn pool(&self, p: u32, n: u32) -> Result<Vec<LinearForm>> {
        let mut forms = Vec::new();
        if self.exhaustive(p, n) {
            let total = (p as u64).pow(n);
            for code in 1..total {
                let mut c = code;
                let coeffs: Vec<u64> = (0..n)
                    .map(|_| {
                        let a = c % p as u64;
                        c /= p as u64;
                        a
                    })
                    .collect();
                forms.push(LinearForm::new(p, coeffs)?);
            }
        } else if self.kind != PoolKind::File {
            let mut coeffs = vec![0u64; n as usize];
            for z in 0..n as usize {
                for a in 1..p as u64 {
                    coeffs[z] = a;
                    forms.push(LinearForm::new(p, coeffs.clone())?);
                    for w in z + 1..n as usize {
                        for b in 1..p as u64 {
                            coeffs[w] = b;
                            forms.push(LinearForm::new(p, coeffs.clone())?);
                        }
                        coeffs[w] = 0;
                    }
                }
                coeffs[z] = 0;
            }
        }
        forms.extend(self.extra.iter().filter(|f| f.p() == p && f.n() == n && !f.is_zero()).cloned());
        Ok(forms)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinguishingReport {
    pub form: LinearForm,
    pub d: u32,
    pub y: u32,
    /// `|P_{A∈fam}(Φ(A) = y) − P_A(Φ(A) = y)|`.
    pub gap: Rational,
    pub family_mass: Rational,
    pub global_mass: Rational,
}

impl DistinguishingReport {
    pub fn to_json(&self) -> Value {
        json!({
            "p": self.form.p(),
            "coeffs": self.form.coeffs(),
            "y": self.y,
            "gap": self.gap.to_string(),
            "family_mass": self.family_mass.to_string(),
            "global_mass": self.global_mass.to_string(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// The maximal-gap form (first in pool order, then smallest `y`).
    pub best: Option<DistinguishingReport>,
    pub forms_checked: usize,
    pub label: &'static str,
}

fn single_degree(shape: &UniverseShape) -> Result<u32> {
    if shape.parts() != 1 {
        return Err(IncrementError::MultiPart(shape.header()));
    }
    Ok(shape.degree(0))
}

/// Gap of every pooled form on `fam`.
pub fn search_forms(fam: &Family, p: u32, search: &FormSearch) -> Result<SearchOutcome> {
    if fam.is_empty() {
        return Err(IncrementError::EmptyFamily);
    }
    let d = single_degree(fam.shape())?;
    let n = fam.shape().n();
    let pool = search.pool(p, n)?;
    // Forms are scored in parallel; the reduction keeps pool order so the
    // first maximal gap wins, as in a sequential scan.
    let scored = pool
        .par_iter()
        .map(|form| -> Result<Option<DistinguishingReport>> {
            let induced = form.induced(d);
            let global = fpforms::distribution(&induced, fpforms::DistributionMode::Convolution)?.masses;
            let local = fpforms::family_distribution(&induced, fam)?;
            let mut best: Option<DistinguishingReport> = None;
            for (y, (f, g)) in local.iter().zip(&global).enumerate() {
                let gap = rational::abs_diff(f, g);
                if best.as_ref().is_none_or(|b| gap > b.gap) {
                    best = Some(DistinguishingReport {
                        form: form.clone(),
                        d,
                        y: y as u32,
                        gap,
                        family_mass: f.clone(),
                        global_mass: g.clone(),
                    });
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best: Option<DistinguishingReport> = None;
    for candidate in scored.into_iter().flatten() {
        if best.as_ref().is_none_or(|b| candidate.gap > b.gap) {
            best = Some(candidate);
        }
    }
    Ok(SearchOutcome { best, forms_checked: pool.len(), label: search.label(p, n) })
}

/// The maximal-gap form if its gap reaches `threshold`.
pub fn find_distinguishing_form(
    fam: &Family,
    p: u32,
    threshold: &Rational,
    search: &FormSearch,
) -> Result<Option<DistinguishingReport>> {
    let outcome = search_forms(fam, p, search)?;
    Ok(outcome.best.filter(|b| b.gap >= *threshold && !b.gap.is_zero()))
}

#[derive(Debug, Clone)]
pub struct IncrementStep {
    pub partition: BlockPartition,
    pub row: usize,
    pub background: SubsetMask,
    pub members_in_cell: usize,
    pub cell_size: u64,
    pub density_before: Rational,
    pub density_after: Rational,
    /// `δ (1 + η/(3p))`, when `η` was given.
    pub target: Option<Rational>,
    pub guarantee_met: bool,
    pub lifted: Family,
}

impl IncrementStep {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.partition.n,
            "m": self.partition.m,
            "sigma": self.partition.sigma,
            "case": self.partition.case,
            "row": self.row + 1,
            "blocks": self.partition.blocks[self.row],
            "U_hex": self.background.to_hex(),
            "members_in_cell": self.members_in_cell,
            "cell_size": self.cell_size,
            "density_before": self.density_before.to_string(),
            "density_after": self.density_after.to_string(),
            "target": self.target.as_ref().map(|t| t.to_string()),
            "guarantee_met": self.guarantee_met,
        })
    }
}

/// One density-increment step for the form in `report`. The densest cell
/// `C(X_i, U)` wins, ties to the smallest `i` then the smallest `U`.
pub fn increment_step(fam: &Family, report: &DistinguishingReport, m: usize, eta: Option<&Rational>) -> Result<IncrementStep> {
    if fam.is_empty() {
        return Err(IncrementError::EmptyFamily);
    }
    let d = single_degree(fam.shape())?;
    let partition = build_block_partition(&report.form, m)?;
    if partition.t() == 0 {
        return Err(FormError::UniverseTooSmall(format!("no row of {m} blocks fits in n = {}", partition.n)).into());
    }
    let small = UniverseShape::single(d, m as u32)?;
    let mut best: Option<(usize, usize, SubsetMask, Vec<SubsetMask>)> = None;
    for i in 0..partition.t() {
        let mut cells: BTreeMap<SubsetMask, Vec<SubsetMask>> = BTreeMap::new();
        for a in fam {
            if let Some((u, b)) = partition.cell_of(i, a, &small)? {
                cells.entry(u).or_default().push(b);
            }
        }
        for (u, bs) in cells {
            if best.as_ref().is_none_or(|(c, ..)| bs.len() > *c) {
                best = Some((bs.len(), i, u, bs));
            }
        }
    }
    let (count, row, background, members) =
        best.unwrap_or_else(|| (0, 0, SubsetMask::empty(fam.shape()), Vec::new()));
    let cells = small.cell_count();
    let density_before = fam.density();
    let density_after = rational::dyadic(count, cells);
    let p = report.form.p();
    if partition.case == PartitionCase::SmallSupport && !report.gap.is_zero() && density_after <= density_before {
        return Err(IncrementError::ContractViolation(format!(
            "gap {} but no cell beats density {}",
            report.gap, density_before
        )));
    }
    let target = eta.map(|e| &density_before * (Rational::one() + e / rational::int(3 * p)));
    let guarantee_met = match (eta, &target) {
        (Some(e), Some(t)) => report.gap >= e / rational::int(p) && density_after >= *t,
        _ => false,
    };
    Ok(IncrementStep {
        lifted: Family::new(&small, members)?,
        partition,
        row,
        background,
        members_in_cell: count,
        cell_size: 1u64 << cells,
        density_before,
        density_after,
        target,
        guarantee_met,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MSchedule {
    Fixed(usize),
    /// `⌊√(n/p)⌋` at every step.
    SqrtRule,
}

impl MSchedule {
    pub fn m_for(&self, n: u32, p: u32) -> usize {
        match *self {
            MSchedule::Fixed(m) => m,
            MSchedule::SqrtRule => ((n / p) as f64).sqrt().floor() as usize,
        }
    }
}

/// `⌈log(δ^{-1}) / log(1 + η/(3p))⌉`.
pub fn iteration_cap(delta: &Rational, eta: &Rational, p: u32) -> u64 {
    let growth = Rational::one() + eta / rational::int(3 * p);
    let cap = rational::ln(&delta.recip()) / rational::ln(&growth);
    // Guard against ulp noise on exact integers.
    let rounded = cap.round();
    if (cap - rounded).abs() < 1e-9 {
        rounded as u64
    } else {
        cap.ceil() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoopStatus {
    /// No pooled form distinguishes the family at threshold `η/p`.
    Uniform,
    PatternFound,
    /// Stopped before uniformity: the universe became too small, the family
    /// emptied, or the step limit was reached.
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct IncrementTrace {
    pub p: u32,
    pub eta: Rational,
    pub initial_density: Rational,
    pub steps: Vec<IncrementStep>,
    pub reports: Vec<DistinguishingReport>,
    pub cap: u64,
    pub status: LoopStatus,
    pub label: &'static str,
    pub note: Option<String>,
}

impl IncrementTrace {
    pub fn iterations(&self) -> usize {
        self.steps.len()
    }

    pub fn all_guarantees(&self) -> bool {
        self.steps.iter().all(|s| s.guarantee_met)
    }

    pub fn within_cap(&self) -> bool {
        self.iterations() as u64 <= self.cap
    }

    /// Densities never decrease along the trace.
    pub fn monotone(&self) -> bool {
        self.steps.iter().all(|s| s.density_after >= s.density_before)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "eta": self.eta.to_string(),
            "initial_density": self.initial_density.to_string(),
            "iterations": self.iterations(),
            "cap": self.cap,
            "within_cap": self.within_cap(),
            "all_guarantees": self.all_guarantees(),
            "status": self.status,
            "label": self.label,
            "note": self.note,
            "steps": self.steps.iter().zip(&self.reports).map(|(s, r)| {
                let mut v = s.to_json();
                v["form"] = r.to_json();
                v
            }).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct QuasirandomOutcome {
    pub family: Family,
    pub trace: IncrementTrace,
    pub pattern_pair: Option<(SubsetMask, SubsetMask, Witness)>,
}

pub struct LoopConfig<'a> {
    pub p: u32,
    pub eta: Rational,
    pub schedule: MSchedule,
    pub search: FormSearch,
    pub max_steps: usize,
    pub pattern: Option<&'a PatternSpec>,
}

/// Iterates search and increment until no form reaches gap `η/p`.
pub fn quasirandomize(fam: &Family, cfg: &LoopConfig) -> Result<QuasirandomOutcome> {
    if fam.is_empty() {
        return Err(IncrementError::EmptyFamily);
    }
    single_degree(fam.shape())?;
    let threshold = &cfg.eta / rational::int(cfg.p);
    let initial_density = fam.density();
    let mut trace = IncrementTrace {
        p: cfg.p,
        eta: cfg.eta.clone(),
        cap: iteration_cap(&initial_density, &cfg.eta, cfg.p),
        initial_density,
        steps: Vec::new(),
        reports: Vec::new(),
        status: LoopStatus::Inconclusive,
        label: cfg.search.label(cfg.p, fam.shape().n()),
        note: None,
    };
    let mut current = fam.clone();
    let mut pattern_pair = None;
    loop {
        let n = current.shape().n();
        trace.label = cfg.search.label(cfg.p, n);
        let Some(report) = find_distinguishing_form(&current, cfg.p, &threshold, &cfg.search)? else {
            trace.status = LoopStatus::Uniform;
            break;
        };
        if trace.steps.len() >= cfg.max_steps {
            trace.note = Some(format!("step limit {} reached", cfg.max_steps));
            break;
        }
        let m = cfg.schedule.m_for(n, cfg.p);
        if m == 0 {
            trace.note = Some(format!("universe n = {n} below the m schedule minimum"));
            break;
        }
        let step = match increment_step(&current, &report, m, Some(&cfg.eta)) {
            Ok(step) => step,
            Err(IncrementError::Form(FormError::UniverseTooSmall(msg))) => {
                trace.note = Some(msg);
                break;
            }
            Err(e) => return Err(e),
        };
        let next = step.lifted.clone();
        trace.steps.push(step);
        trace.reports.push(report);
        if next.is_empty() {
            trace.note = Some("densest cell holds no member".into());
            break;
        }
        current = next;
        if let Some(spec) = cfg.pattern {
            if spec.check_shape(current.shape()).is_ok() {
                if let Some(found) = find_pattern_pair(&current, spec)? {
                    pattern_pair = Some(found);
                    trace.status = LoopStatus::PatternFound;
                    break;
                }
            }
        }
    }
    Ok(QuasirandomOutcome { family: current, trace, pattern_pair })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn e1_family(n: u32) -> Family {
        let s = UniverseShape::single(1, n).unwrap();
        Family::from_predicate(&s, 24, |a| a.contains(0)).unwrap()
    }

    #[test]
    fn e1_is_distinguished() {
        let fam = e1_family(6);
        let rep = find_distinguishing_form(&fam, 2, &ratio(1, 4), &FormSearch::default()).unwrap().unwrap();
        assert_eq!(rep.form, LinearForm::unit(2, 6, 1).unwrap());
        assert_eq!(rep.gap, ratio(1, 2));
    }

    #[test]
    fn full_family_is_uniform() {
        let s = UniverseShape::single(2, 2).unwrap();
        let fam = Family::full(&s, 24).unwrap();
        assert!(find_distinguishing_form(&fam, 2, &ratio(0, 1), &FormSearch::default()).unwrap().is_none());
    }

    #[test]
    fn complement_closed_family_has_zero_gap_for_all_ones() {
        let s = UniverseShape::single(1, 5).unwrap();
        let fam = Family::from_predicate(&s, 24, |a| a.contains(0) != a.contains(1)).unwrap();
        let search = FormSearch { kind: PoolKind::File, extra: vec![LinearForm::new(2, [1; 5]).unwrap()], ..Default::default() };
        let out = search_forms(&fam, 2, &search).unwrap();
        assert_eq!(out.best.unwrap().gap, ratio(0, 1));
        assert_eq!(out.label, "pool-uniform");
    }

    #[test]
    fn e1_step_reaches_density_one() {
        let fam = e1_family(6);
        let rep = find_distinguishing_form(&fam, 2, &ratio(1, 4), &FormSearch::default()).unwrap().unwrap();
        let step = increment_step(&fam, &rep, 2, Some(&ratio(1, 2))).unwrap();
        assert_eq!(step.partition.remainder, vec![1, 6]);
        assert!(step.background.contains(0));
        assert_eq!(step.density_after, ratio(1, 1));
        assert!(step.guarantee_met);
    }

    #[test]
    fn full_family_step_has_no_guarantee() {
        let s = UniverseShape::single(1, 6).unwrap();
        let fam = Family::full(&s, 24).unwrap();
        let rep = DistinguishingReport {
            form: LinearForm::unit(2, 6, 1).unwrap(),
            d: 1,
            y: 0,
            gap: ratio(0, 1),
            family_mass: ratio(1, 2),
            global_mass: ratio(1, 2),
        };
        let step = increment_step(&fam, &rep, 2, Some(&ratio(1, 2))).unwrap();
        assert_eq!(step.density_after, ratio(1, 1));
        assert!(!step.guarantee_met);
    }

    #[test]
    fn cap_formula() {
        assert_eq!(iteration_cap(&ratio(1, 2), &ratio(1, 2), 2), 9);
    }

    #[test]
    fn loop_on_e1() {
        let cfg = LoopConfig {
            p: 2,
            eta: ratio(1, 2),
            schedule: MSchedule::Fixed(2),
            search: FormSearch::default(),
            max_steps: 8,
            pattern: None,
        };
        let out = quasirandomize(&e1_family(6), &cfg).unwrap();
        assert_eq!(out.trace.iterations(), 1);
        assert_eq!(out.trace.status, LoopStatus::Uniform);
        assert_eq!(out.family.density(), ratio(1, 1));
        assert!(out.trace.within_cap() && out.trace.monotone());
    }

    #[test]
    fn uniform_family_is_untouched() {
        let s = UniverseShape::single(1, 4).unwrap();
        let fam = Family::full(&s, 24).unwrap();
        let cfg = LoopConfig {
            p: 2,
            eta: ratio(1, 2),
            schedule: MSchedule::SqrtRule,
            search: FormSearch::default(),
            max_steps: 8,
            pattern: None,
        };
        let out = quasirandomize(&fam, &cfg).unwrap();
        assert_eq!(out.trace.iterations(), 0);
        assert_eq!(out.family, fam);
    }

    #[test]
    fn small_pool_size() {
        let search = FormSearch { kind: PoolKind::Small, ..Default::default() };
        // n(p−1) + C(n,2)(p−1)² at n = 4, p = 3.
        assert_eq!(search.pool(3, 4).unwrap().len(), 8 + 6 * 4);
    }
}
