//! Windows, hit counts and the covering/double-counting machinery.
//!
//! A [`WindowSystem`] fixes `t` pairwise disjoint ordered windows of size
//! `m`. For a predicate `P` on subsets of the `[m]`-shape universe, `N(A)`
//! counts the windows whose relabeled restriction of `A` satisfies `P`.
//! Because the window blocks are disjoint the events are independent, which
//! gives the closed forms `E N = t p(P)` and `Var N = t p(P)(1 − p(P))`.
//!
//! [`scan_for_dense_cell`] partitions each `D(I_r)` into cells `C(I_r, U)`
//! keyed by the background `U` and returns the densest one. Only cells that
//! meet the family are materialized; all other cells have density zero.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::patterns::cyclic_interval;
use crate::rational::{self, Rational};
use crate::universe::{restrict_and_relabel, Family, OrderedWindow, SubsetMask, UniverseError, UniverseShape};

#[derive(Debug, Error)]
pub enum CoveringError {
    #[error(transparent)]
    Universe(#[from] UniverseError),
    #[error("invalid window system: {0}")]
    InvalidWindows(String),
    #[error("predicate is unsatisfiable on the window universe (p(P) = 0)")]
    Unsatisfiable,
    #[error("density undefined: {0}")]
    UndefinedDensity(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

pub type Result<T, E = CoveringError> = std::result::Result<T, E>;

/// `t` pairwise disjoint ordered windows of a common size `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowSystem {
    windows: Vec<OrderedWindow>,
}

impl WindowSystem {
    pub fn new(windows: Vec<OrderedWindow>) -> Result<Self> {
        let first = windows
            .first()
            .ok_or_else(|| CoveringError::InvalidWindows("at least one window required".into()))?;
        let m = first.len();
        if windows.iter().any(|w| w.len() != m) {
            return Err(CoveringError::InvalidWindows("windows must share a common size".into()));
        }
        for (i, a) in windows.iter().enumerate() {
            for b in &windows[i + 1..] {
                if a.intersects(b) {
                    return Err(CoveringError::InvalidWindows(format!(
                        "windows {:?} and {:?} overlap",
                        a.elements(),
                        b.elements()
                    )));
                }
            }
        }
        Ok(Self { windows })
    }

    /// `I_1 = [m], I_2 = [2m] ∖ [m], …, I_t` with `t = ⌊n/m⌋`.
    pub fn canonical(n: u32, m: u32) -> Result<Self> {
        if m == 0 || m > n {
            return Err(CoveringError::Parameter(format!("need 1 ≤ m ≤ n, got m = {m}, n = {n}")));
        }
        let t = n / m;
        let windows = (0..t)
            .map(|r| OrderedWindow::interval(r * m + 1, m))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(windows)
    }

    pub fn windows(&self) -> &[OrderedWindow] {
        &self.windows
    }

    pub fn t(&self) -> usize {
        self.windows.len()
    }

    pub fn m(&self) -> usize {
        self.windows[0].len()
    }

    fn check_fits(&self, shape: &UniverseShape) -> Result<()> {
        for w in &self.windows {
            w.check_fits(shape.n())?;
        }
        Ok(())
    }
}

/// `N(A) = #{r : P(h_{(X_r,<)}(A ∩ (X_r^{d_1} ∪ …)))}`.
pub fn count_hits(a: &SubsetMask, ws: &WindowSystem, pred: impl Fn(&SubsetMask) -> bool) -> Result<usize> {
    ws.check_fits(a.shape())?;
    let mut hits = 0;
    for w in ws.windows() {
        if pred(&restrict_and_relabel(a, w)?) {
            hits += 1;
        }
    }
    Ok(hits)
}

/// Number of subsets of the `[m]`-shape universe satisfying `pred`.
pub fn satisfaction_count(window_shape: &UniverseShape, pred: impl Fn(&SubsetMask) -> bool) -> Result<u64> {
    Ok(window_shape
        .all_subsets(crate::universe::ENUMERATION_BUDGET)?
        .filter(|s| pred(s))
        .count() as u64)
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    pub t: usize,
    #[serde(with = "rational::as_string")]
    pub p_p: Rational,
    #[serde(with = "rational::as_string")]
    pub expectation: Rational,
    #[serde(with = "rational::as_string")]
    pub variance: Rational,
    /// `Var / E² = (1 − p) / (t p)`.
    #[serde(with = "rational::as_string")]
    pub variance_ratio: Rational,
    #[serde(with = "rational::option_as_string")]
    pub epsilon: Option<Rational>,
    /// `t ≥ ε^{-1} p(P)^{-1}`.
    pub threshold_met: bool,
    /// `Var ≤ ε E²`.
    pub bound_holds: bool,
    /// The variance bound holds whenever its threshold does.
    pub epsilon_bound_ok: bool,
}

/// Closed-form moments of `N` for a satisfiable predicate; `p(P)` is found
/// by enumerating the `[m]`-shape universe of `degrees`.
pub fn exact_moments(
    ws: &WindowSystem,
    degrees: &[u32],
    pred: impl Fn(&SubsetMask) -> bool,
    epsilon: Option<&Rational>,
) -> Result<MomentReport> {
    let window_shape = UniverseShape::new(degrees.to_vec(), ws.m() as u32)?;
    let sat = satisfaction_count(&window_shape, pred)?;
    let p = rational::dyadic(sat, window_shape.cell_count());
    moments_from_proportion(ws.t(), p, epsilon)
}

pub fn moments_from_proportion(t: usize, p: Rational, epsilon: Option<&Rational>) -> Result<MomentReport> {
    if p.is_zero() {
        return Err(CoveringError::Unsatisfiable);
    }
    let t_q = rational::int(t);
    let expectation = &t_q * &p;
    let variance = &expectation * (Rational::one() - &p);
    let variance_ratio = (Rational::one() - &p) / (&t_q * &p);
    let (threshold_met, bound_holds) = match epsilon {
        Some(eps) => {
            let threshold = (eps * &p).recip();
            (t_q >= threshold, variance <= eps * &expectation * &expectation)
        }
        None => (false, true),
    };
    Ok(MomentReport {
        t,
        p_p: p,
        expectation,
        variance,
        variance_ratio,
        epsilon: epsilon.cloned(),
        threshold_met,
        bound_holds,
        epsilon_bound_ok: !threshold_met || bound_holds,
    })
}

/// `2^{m^{d_1} + … + m^{d_s}} ε^{-3} m`, the side length from which the
/// dense-cell guarantee is proved.
pub fn guarantee_threshold(degrees: &[u32], m: u32, epsilon: &Rational) -> Rational {
    let cells: usize = degrees.iter().map(|&d| (m as usize).pow(d)).sum();
    let eps3 = epsilon * epsilon * epsilon;
    Rational::from_integer(rational::pow2(cells) * BigInt::from(m)) / eps3
}

/// A covering cell `C(I, U)`: background `U` off the window blocks, window
/// restriction ranging over the pattern family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringCell {
    pub window_index: usize,
    pub window: OrderedWindow,
    pub background: SubsetMask,
}

#[derive(Debug, Clone)]
pub struct WindowCount {
    /// `|fam ∩ D(I_r)|`.
    pub family_hits: u64,
    /// `|D(I_r)| = |A_m| · 2^{cells − Σ m^{d_i}}`.
    pub window_total: BigInt,
}

#[derive(Debug, Clone)]
pub struct ScanReport {
    pub cell: CoveringCell,
    pub members_in_cell: u64,
    pub cell_size: u64,
    pub max_density: Rational,
    pub average_density: Rational,
    pub family_density: Rational,
    pub per_window: Vec<WindowCount>,
    pub epsilon: Option<Rational>,
    pub guarantee_threshold: Option<Rational>,
    /// `n` reaches the proof threshold and `δ > ε`; the scan then certifies
    /// `max_density ≥ δ − ε`.
    pub guarantee_met: bool,
}

impl ScanReport {
    pub fn contains_two_members(&self) -> bool {
        self.members_in_cell >= 2
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "cell": {
                "window": self.cell.window.elements(),
                "window_index": self.cell.window_index + 1,
                "U_hex": self.cell.background.to_hex(),
            },
            "members_in_cell": self.members_in_cell,
            "cell_size": self.cell_size,
            "max_density": self.max_density.to_string(),
            "average_density": self.average_density.to_string(),
            "family_density": self.family_density.to_string(),
            "epsilon": self.epsilon.as_ref().map(|e| e.to_string()),
            "guarantee_threshold": self.guarantee_threshold.as_ref().map(|e| e.to_string()),
            "guarantee_met": self.guarantee_met,
        })
    }
}

fn check_pattern_family(fam: &Family, m: u32, a_m: &Family) -> Result<UniverseShape> {
    let shape = fam.shape();
    if m == 0 || m > shape.n() {
        return Err(CoveringError::Parameter(format!("need 1 ≤ m ≤ n, got m = {m}, n = {}", shape.n())));
    }
    let window_shape = shape.with_n(m)?;
    if a_m.shape() != &window_shape {
        return Err(CoveringError::Universe(UniverseError::ShapeMismatch {
            expected: window_shape.header(),
            found: a_m.shape().header(),
        }));
    }
    if a_m.is_empty() {
        return Err(CoveringError::Parameter("pattern family A_m must be nonempty".into()));
    }
    Ok(window_shape)
}

/// Densest cell `C(I_r, U)` over the canonical intervals. Ties go to the
/// smallest `r`, then the smallest `U` in mask order.
pub fn scan_for_dense_cell(fam: &Family, m: u32, a_m: &Family, epsilon: Option<&Rational>) -> Result<ScanReport> {
    if fam.is_empty() {
        return Err(CoveringError::UndefinedDensity("empty family".into()));
    }
    let window_shape = check_pattern_family(fam, m, a_m)?;
    let shape = fam.shape();
    let ws = WindowSystem::canonical(shape.n(), m)?;
    let outside_cells = shape.cell_count() - window_shape.cell_count();
    let cell_size = a_m.len() as u64;
    let window_total = BigInt::from(cell_size) * rational::pow2(outside_cells);

    let mut best: Option<(u64, usize, SubsetMask)> = None;
    let mut per_window = Vec::with_capacity(ws.t());
    for (r, w) in ws.windows().iter().enumerate() {
        let blocks = shape.window_mask(w);
        let mut counters: BTreeMap<SubsetMask, u64> = BTreeMap::new();
        let mut hits = 0u64;
        for a in fam {
            if a_m.contains(&restrict_and_relabel(a, w)?) {
                *counters.entry(a.difference(&blocks)).or_default() += 1;
                hits += 1;
            }
        }
        for (u, count) in counters {
            if best.as_ref().is_none_or(|(c, _, _)| count > *c) {
                best = Some((count, r, u));
            }
        }
        per_window.push(WindowCount { family_hits: hits, window_total: window_total.clone() });
    }
    let (members_in_cell, r, background) = best.unwrap_or_else(|| (0, 0, SubsetMask::empty(shape)));
    let total_hits: u64 = per_window.iter().map(|w| w.family_hits).sum();
    let average_density = Rational::new(BigInt::from(total_hits), &window_total * BigInt::from(ws.t()));
    let family_density = fam.density();
    let threshold = epsilon.map(|e| guarantee_threshold(shape.degrees(), m, e));
    let guarantee_met = match (epsilon, &threshold) {
        (Some(e), Some(th)) => &family_density > e && rational::int(shape.n()) >= *th,
        _ => false,
    };
    Ok(ScanReport {
        cell: CoveringCell { window_index: r, window: ws.windows()[r].clone(), background },
        members_in_cell,
        cell_size,
        max_density: rational::ratio(members_in_cell, cell_size),
        average_density,
        family_density,
        per_window,
        epsilon: epsilon.cloned(),
        guarantee_threshold: threshold,
        guarantee_met,
    })
}

/// Both sides of the two double-counting identities
/// `Σ_A N(A) = Σ_r |D(I_r)|` and `Σ_A 1_{A∈fam} N(A) = Σ_r |fam ∩ D(I_r)|`.
/// The left sides enumerate every subset of the universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleCounting {
    pub sum_hits_all: BigInt,
    pub sum_window_totals: BigInt,
    pub sum_hits_family: BigInt,
    pub sum_window_family: BigInt,
}

impl DoubleCounting {
    pub fn holds(&self) -> bool {
        self.sum_hits_all == self.sum_window_totals && self.sum_hits_family == self.sum_window_family
    }
}

pub fn double_counting(fam: &Family, m: u32, a_m: &Family, budget: usize) -> Result<DoubleCounting> {
    let report = scan_for_dense_cell(fam, m, a_m, None)?;
    let shape = fam.shape();
    let ws = WindowSystem::canonical(shape.n(), m)?;
    let pred = |s: &SubsetMask| a_m.contains(s);
    let mut sum_hits_all = BigInt::zero();
    let mut sum_hits_family = BigInt::zero();
    for a in shape.all_subsets(budget)? {
        let hits = count_hits(&a, &ws, pred)?;
        sum_hits_all += hits;
        if fam.contains(&a) {
            sum_hits_family += hits;
        }
    }
    Ok(DoubleCounting {
        sum_hits_all,
        sum_window_totals: report.per_window.iter().map(|w| &w.window_total).sum(),
        sum_hits_family,
        sum_window_family: report.per_window.iter().map(|w| BigInt::from(w.family_hits)).sum(),
    })
}

/// The inequality chain behind the dense-cell bound, evaluated exactly
/// on one instance by enumerating every subset.
#[derive(Debug, Clone)]
pub struct ProofChain {
    pub epsilon: Rational,
    pub family_density: Rational,
    pub mean_hits: Rational,
    pub variance_hits: Rational,
    /// `P(N ≤ (1 − ε) E N)`.
    pub low_tail: Rational,
    /// Chebyshev: `low_tail ≤ Var / (ε² E²)`.
    pub chebyshev_ok: bool,
    /// Density of `fam ∩ {N ≥ (1 − ε) E N}`.
    pub high_family_density: Rational,
    /// `high_family_density ≥ δ − ε`.
    pub premise_holds: bool,
    /// `E 1_fam N ≥ E 1_fam 1_high N`.
    pub first_ok: bool,
    /// `E 1_fam 1_high N ≥ high_density (1 − ε) E N`.
    pub second_ok: bool,
    /// `mean_r |fam ∩ D(I_r)| ≥ high_density (1 − ε) mean_r |D(I_r)|`.
    pub third_ok: bool,
    /// `mean_r |fam ∩ D(I_r)| ≥ (δ − ε)(1 − ε) mean_r |D(I_r)|`; implied by
    /// the three steps whenever the premise holds.
    pub conclusion_ok: bool,
}

impl ProofChain {
    pub fn chain_ok(&self) -> bool {
        self.first_ok && self.second_ok && self.third_ok && (!self.premise_holds || self.conclusion_ok)
    }
}

pub fn proof_chain(fam: &Family, m: u32, a_m: &Family, epsilon: &Rational, budget: usize) -> Result<ProofChain> {
    check_pattern_family(fam, m, a_m)?;
    let shape = fam.shape();
    let ws = WindowSystem::canonical(shape.n(), m)?;
    let pred = |s: &SubsetMask| a_m.contains(s);
    let cells = shape.cell_count();
    let hits: Vec<(bool, usize)> = shape
        .all_subsets(budget)?
        .map(|a| Ok((fam.contains(&a), count_hits(&a, &ws, pred)?)))
        .collect::<Result<_>>()?;
    let total = rational::int(rational::pow2(cells));
    let sum: usize = hits.iter().map(|h| h.1).sum();
    let sum_sq: usize = hits.iter().map(|h| h.1 * h.1).sum();
    let mean = rational::int(sum) / &total;
    let variance = rational::int(sum_sq) / &total - &mean * &mean;
    let one = Rational::one();
    let cut = (&one - epsilon) * &mean;
    let low = hits.iter().filter(|h| rational::int(h.1) <= cut).count();
    let low_tail = rational::int(low) / &total;
    let chebyshev_ok = mean.is_zero() || low_tail <= &variance / (epsilon * epsilon * &mean * &mean);

    let high = |h: &&(bool, usize)| rational::int(h.1) >= cut;
    let fam_sum: usize = hits.iter().filter(|h| h.0).map(|h| h.1).sum();
    let fam_high: Vec<&(bool, usize)> = hits.iter().filter(|h| h.0).filter(high).collect();
    let fam_high_sum: usize = fam_high.iter().map(|h| h.1).sum();
    let high_density = rational::int(fam_high.len()) / &total;
    let delta = fam.density();

    let e_fam = rational::int(fam_sum) / &total;
    let e_fam_high = rational::int(fam_high_sum) / &total;
    let first_ok = e_fam >= e_fam_high;
    let second_ok = e_fam_high >= &high_density * (&one - epsilon) * &mean;

    let report = scan_for_dense_cell(fam, m, a_m, None)?;
    let t = rational::int(ws.t());
    let mean_fam_d = rational::int(report.per_window.iter().map(|w| w.family_hits).sum::<u64>()) / &t;
    let mean_d = rational::int(report.per_window.iter().map(|w| &w.window_total).sum::<BigInt>()) / &t;
    let third_ok = mean_fam_d >= &high_density * (&one - epsilon) * &mean_d;
    let conclusion_ok = mean_fam_d >= (&delta - epsilon) * (&one - epsilon) * &mean_d;
    Ok(ProofChain {
        epsilon: epsilon.clone(),
        premise_holds: high_density >= &delta - epsilon,
        family_density: delta,
        mean_hits: mean,
        variance_hits: variance,
        low_tail,
        chebyshev_ok,
        high_family_density: high_density,
        first_ok,
        second_ok,
        third_ok,
        conclusion_ok,
    })
}

/// Cell `C(C, y) = {C + 1_{[y, y+ℓ)} : ℓ = 0, …, n−1}` of the cyclic interval
/// demo on `Z_2^{Z_n}`. Subsets are bit masks with element `k ∈ [n]` at bit
/// `k − 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemoCell {
    pub base: u64,
    pub start: u32,
    pub members: Vec<u64>,
}

pub const DEMO_MAX_N: u32 = 20;

pub fn cyclic_interval_bits(start: u32, length: u32, n: u32) -> u64 {
    (0..length).fold(0u64, |acc, k| acc | 1 << ((start - 1 + k) % n))
}

/// Every cell, ordered by base `C` then start `y`.
pub fn interval_demo_cells(n: u32) -> Result<Vec<DemoCell>> {
    if n == 0 || n > DEMO_MAX_N {
        return Err(CoveringError::Parameter(format!("demo needs 1 ≤ n ≤ {DEMO_MAX_N}, got {n}")));
    }
    let mut cells = Vec::with_capacity((1usize << n) * n as usize);
    for base in 0..(1u64 << n) {
        for start in 1..=n {
            let members = (0..n).map(|len| base ^ cyclic_interval_bits(start, len, n)).collect();
            cells.push(DemoCell { base, start, members });
        }
    }
    Ok(cells)
}

/// `E_{C ∈ W} |fam ∩ C| / |C|` over all demo cells.
pub fn interval_demo_average_density(n: u32, fam: &Family) -> Result<Rational> {
    let shape = UniverseShape::single(1, n)?;
    if fam.shape() != &shape {
        return Err(CoveringError::Universe(UniverseError::ShapeMismatch {
            expected: shape.header(),
            found: fam.shape().header(),
        }));
    }
    let cells = interval_demo_cells(n)?;
    let mut in_family = vec![false; 1usize << n];
    for a in fam {
        in_family[a.as_u64().expect("n ≤ 20") as usize] = true;
    }
    let mut total = Rational::zero();
    for cell in &cells {
        let hits = cell.members.iter().filter(|&&x| in_family[x as usize]).count();
        total += rational::ratio(hits, cell.members.len());
    }
    Ok(total / rational::int(cells.len()))
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameworkReport {
    /// (i): every pair of distinct members of a cell satisfies the pattern.
    pub pattern_ok: bool,
    /// (ii): all cells have the same size `K > 0`.
    pub equal_size: bool,
    pub k: Option<usize>,
    /// (iii): every element lies in the same number `L > 0` of cells.
    pub equal_membership: bool,
    pub l: Option<usize>,
    pub omega: usize,
    pub cells: usize,
    pub incidences: usize,
    /// `|Ω| L = |W| K`, checked only when `K` and `L` exist.
    pub identity_holds: bool,
    pub first_bad_pair: Option<(usize, usize)>,
}

/// Checks conditions (i)–(iii) of the covering framework over a universe
/// `{0, …, omega−1}` and reports the incidence identity.
pub fn verify_framework_conditions(
    omega: usize,
    cells: &[Vec<usize>],
    pattern: impl Fn(usize, usize) -> bool,
) -> FrameworkReport {
    let mut first_bad_pair = None;
    'outer: for cell in cells {
        for &a in cell {
            for &b in cell {
                if a != b && !pattern(a, b) {
                    first_bad_pair = Some((a, b));
                    break 'outer;
                }
            }
        }
    }
    let sizes: Vec<usize> = cells.iter().map(Vec::len).collect();
    let k = sizes.first().copied().filter(|&k| k > 0 && sizes.iter().all(|&s| s == k));
    let mut membership = vec![0usize; omega];
    for cell in cells {
        for &a in cell {
            if a < omega {
                membership[a] += 1;
            }
        }
    }
    let l = membership.first().copied().filter(|&l| l > 0 && membership.iter().all(|&x| x == l));
    let incidences = sizes.iter().sum();
    let identity_holds = match (k, l) {
        (Some(k), Some(l)) => omega * l == cells.len() * k,
        _ => false,
    };
    FrameworkReport {
        pattern_ok: first_bad_pair.is_none(),
        equal_size: k.is_some(),
        k,
        equal_membership: l.is_some(),
        l,
        omega,
        cells: cells.len(),
        incidences,
        identity_holds,
        first_bad_pair,
    }
}

/// Framework report for the cyclic interval demo.
pub fn verify_interval_demo(n: u32) -> Result<FrameworkReport> {
    let cells = interval_demo_cells(n)?;
    let ids: Vec<Vec<usize>> = cells.iter().map(|c| c.members.iter().map(|&x| x as usize).collect()).collect();
    Ok(verify_framework_conditions(1usize << n, &ids, |a, b| {
        cyclic_interval((a ^ b) as u64, n).is_some()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn line(n: u32) -> UniverseShape {
        UniverseShape::single(1, n).unwrap()
    }

    #[test]
    fn window_system_validation() {
        let w = |v: Vec<u32>| OrderedWindow::new(v).unwrap();
        assert!(WindowSystem::new(vec![]).is_err());
        assert!(WindowSystem::new(vec![w(vec![1, 2]), w(vec![2, 3])]).is_err());
        assert!(WindowSystem::new(vec![w(vec![1, 2]), w(vec![3])]).is_err());
        let ws = WindowSystem::canonical(7, 2).unwrap();
        assert_eq!(ws.t(), 3);
        assert_eq!(ws.windows()[2].elements(), &[5, 6]);
    }

    #[test]
    fn count_hits_examples() {
        let s = line(4);
        let ws = WindowSystem::canonical(4, 1).unwrap();
        let present = |r: &SubsetMask| r.len() == 1;
        let a = SubsetMask::from_coords(&s, &[&[1], &[3]]).unwrap();
        assert_eq!(count_hits(&a, &ws, present).unwrap(), 2);
        assert_eq!(count_hits(&SubsetMask::empty(&s), &ws, present).unwrap(), 0);

        let ws2 = WindowSystem::canonical(4, 2).unwrap();
        let a = SubsetMask::from_coords(&s, &[&[1], &[4]]).unwrap();
        assert_eq!(count_hits(&a, &ws2, |r: &SubsetMask| r.len() == 1).unwrap(), 2);
    }

    #[test]
    fn moments_closed_forms() {
        let ws = WindowSystem::canonical(4, 1).unwrap();
        let rep = exact_moments(&ws, &[1], |r| r.len() == 1, None).unwrap();
        assert_eq!(rep.p_p, ratio(1, 2));
        assert_eq!(rep.expectation, ratio(2, 1));
        assert_eq!(rep.variance, ratio(1, 1));

        let rep = moments_from_proportion(8, ratio(1, 2), Some(&ratio(1, 4))).unwrap();
        assert!(rep.threshold_met);
        assert_eq!(rep.variance_ratio, ratio(1, 8));
        assert!(rep.bound_holds && rep.epsilon_bound_ok);

        assert!(matches!(exact_moments(&ws, &[1], |_| false, None), Err(CoveringError::Unsatisfiable)));
    }

    #[test]
    fn moments_match_enumeration_small() {
        // n = 4, m = 1, t = 4: enumerate all 16 subsets.
        let s = line(4);
        let ws = WindowSystem::canonical(4, 1).unwrap();
        let pred = |r: &SubsetMask| r.len() == 1;
        let ns: Vec<usize> = s.all_subsets(24).unwrap().map(|a| count_hits(&a, &ws, pred).unwrap()).collect();
        let mean = ratio(ns.iter().sum::<usize>(), 16);
        let second = ratio(ns.iter().map(|x| x * x).sum::<usize>(), 16);
        assert_eq!(mean, ratio(2, 1));
        assert_eq!(second - &mean * &mean, ratio(1, 1));
    }

    #[test]
    fn scan_example_reaches_density_one() {
        let s = line(4);
        let fam = Family::from_predicate(&s, 24, |a| a.contains(0)).unwrap();
        let a_m = Family::full(&line(2), 24).unwrap();
        let rep = scan_for_dense_cell(&fam, 2, &a_m, None).unwrap();
        assert_eq!(rep.max_density, ratio(1, 1));
        assert_eq!(rep.cell.window.elements(), &[3, 4]);
        assert!(rep.cell.background.contains(0));
        assert!(rep.max_density >= rep.average_density);
    }

    #[test]
    fn scan_full_family() {
        let s = line(4);
        let fam = Family::full(&s, 24).unwrap();
        let small = line(2);
        let a_m = Family::new(&small, [SubsetMask::empty(&small), SubsetMask::full(&small)]).unwrap();
        let rep = scan_for_dense_cell(&fam, 2, &a_m, None).unwrap();
        assert_eq!(rep.max_density, ratio(1, 1));
        assert_eq!(rep.average_density, ratio(1, 1));
        assert!(matches!(
            scan_for_dense_cell(&Family::empty(&s), 2, &a_m, None),
            Err(CoveringError::UndefinedDensity(_))
        ));
    }

    #[test]
    fn double_counting_n4_m2() {
        let s = line(4);
        let fam = Family::from_predicate(&s, 24, |a| a.len() % 2 == 0).unwrap();
        let small = line(2);
        let a_m = Family::from_predicate(&small, 24, |a| a.len() == 1).unwrap();
        let dc = double_counting(&fam, 2, &a_m, 24).unwrap();
        assert!(dc.holds(), "{dc:?}");
    }

    #[test]
    fn proof_chain_holds_on_small_instance() {
        let s = line(6);
        let fam = Family::from_predicate(&s, 24, |a| a.contains(1) || a.len() > 4).unwrap();
        let a_m = Family::full(&line(2), 24).unwrap();
        let chain = proof_chain(&fam, 2, &a_m, &ratio(1, 4), 24).unwrap();
        assert!(chain.chain_ok(), "{chain:?}");
        assert!(chain.chebyshev_ok);
    }

    #[test]
    fn guarantee_threshold_formula() {
        assert_eq!(guarantee_threshold(&[1], 2, &ratio(1, 2)), ratio(64, 1));
    }

    #[test]
    fn demo_cell_contents() {
        let cells = interval_demo_cells(3).unwrap();
        assert_eq!(cells.len(), 24);
        let c = cells.iter().find(|c| c.base == 0 && c.start == 1).unwrap();
        assert_eq!(c.members, vec![0b000, 0b001, 0b011]);
    }

    #[test]
    fn demo_accounting_n3() {
        let rep = verify_interval_demo(3).unwrap();
        assert!(rep.pattern_ok && rep.equal_size && rep.equal_membership && rep.identity_holds);
        assert_eq!((rep.k, rep.l, rep.omega, rep.cells), (Some(3), Some(9), 8, 24));
    }

    #[test]
    fn demo_average_of_singleton_family() {
        let s = line(3);
        let fam = Family::new(&s, [SubsetMask::empty(&s)]).unwrap();
        assert_eq!(interval_demo_average_density(3, &fam).unwrap(), ratio(1, 8));
    }

    #[test]
    fn framework_flags_unequal_cells() {
        let rep = verify_framework_conditions(3, &[vec![0, 1], vec![2]], |_, _| true);
        assert!(!rep.equal_size);
        assert!(!rep.identity_holds);
        let rep = verify_framework_conditions(4, &[vec![0, 1, 2, 3]], |_, _| true);
        assert_eq!((rep.k, rep.l), (Some(4), Some(1)));
        assert!(rep.identity_holds);
        let rep = verify_framework_conditions(2, &[vec![0, 1]], |_, _| false);
        assert!(!rep.pattern_ok);
    }
}
