//! Difference patterns between pairs of subsets and the certificates that
//! realize them.
//!
//! Every search here is exhaustive and deterministic: candidates are tried
//! in increasing order (windows by start, subsets in mask order, family
//! members in family order) and the first success is returned.

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::universe::{plant, restrict_and_relabel, Family, OrderedWindow, SubsetMask, UniverseError, UniverseShape};

#[derive(Debug, Error)]
pub enum PatternError {
    #[error(transparent)]
    Universe(#[from] UniverseError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("pattern parameters inconsistent with the universe: {0}")]
    Inconsistent(String),
    #[error("pattern family is not nested (not a chain under inclusion)")]
    NotNested,
}

pub type Result<T, E = PatternError> = std::result::Result<T, E>;

/// How the two members of a family-difference witness sit in their windows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowMode {
    /// `F_1, F_2 ∈ F_I` for a single interval `I`.
    SameWindow,
    /// `F_1 ∈ F_{I_1}`, `F_2 ∈ F_{I_2}` with disjoint intervals; `A Δ B = F_1 ∪ F_2`.
    DisjointWindows,
    /// Same window with `F_2 ⊊ F_1`; `A Δ B = F_1 ∖ F_2`.
    Nested,
}

impl std::str::FromStr for WindowMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "same-window" | "same" => Ok(Self::SameWindow),
            "disjoint-windows" | "disjoint" => Ok(Self::DisjointWindows),
            "nested" => Ok(Self::Nested),
            other => Err(format!("unknown window mode {other:?}")),
        }
    }
}

#[derive(Debug, Clone)]
pub enum PatternSpec {
    /// `B ∖ A = S^d` on the single-part universe `[n]^d`.
    PowerDifference { d: u32 },
    /// `B ∖ A = S^{d_1} ∪ … ∪ S^{d_s}`.
    PolynomialDifference { degrees: Vec<u32> },
    /// `U ⊂ A ∩ B` with `A ∖ U`, `B ∖ U` planted members of a family over `[m]`.
    FamilyDifference { family: Family, mode: WindowMode },
    /// `A Δ B` is a cyclic interval of `Z_n` (universe `[n]^1`).
    IntervalModN,
    /// `B ∖ A = K(S,d_1) ∪ … ∪ K(S,d_s)`, hyperedges stored on strictly
    /// increasing coordinate tuples.
    CliqueDifference { degrees: Vec<u32> },
}

impl PatternSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::PowerDifference { .. } => "power-difference",
            Self::PolynomialDifference { .. } => "polynomial-difference",
            Self::FamilyDifference { .. } => "family-difference",
            Self::IntervalModN => "interval-mod-n",
            Self::CliqueDifference { .. } => "clique-difference",
        }
    }

    pub fn check_shape(&self, shape: &UniverseShape) -> Result<()> {
        let fail = |msg: String| Err(PatternError::Inconsistent(msg));
        match self {
            Self::PowerDifference { d } => {
                if shape.degrees() != [*d] {
                    return fail(format!("power difference of degree {d} on {shape:?}"));
                }
            }
            Self::PolynomialDifference { degrees } | Self::CliqueDifference { degrees } => {
                if shape.degrees() != degrees.as_slice() {
                    return fail(format!("degrees {degrees:?} on {shape:?}"));
                }
            }
            Self::FamilyDifference { family, .. } => {
                let fs = family.shape();
                if fs.degrees() != shape.degrees() || fs.n() > shape.n() {
                    return fail(format!("pattern family over {fs:?} on {shape:?}"));
                }
            }
            Self::IntervalModN => {
                if shape.degrees() != [1] || shape.n() > 64 {
                    return fail(format!("interval pattern needs [n]^1 with n ≤ 64, got {shape:?}"));
                }
            }
        }
        Ok(())
    }

    /// Witness for the ordered pair `(a, b)`, if any.
    pub fn witness(&self, a: &SubsetMask, b: &SubsetMask) -> Result<Option<Witness>> {
        a.check_shape(b)?;
        self.check_shape(a.shape())?;
        match self {
            Self::PowerDifference { .. } | Self::PolynomialDifference { .. } => power_difference_witness(a, b),
            Self::FamilyDifference { family, mode } => {
                if a == b {
                    return Ok(None);
                }
                family_difference_witness(a, b, family, *mode)
            }
            Self::IntervalModN => {
                if a == b {
                    return Ok(None);
                }
                interval_mod_n_witness(a, b)
            }
            Self::CliqueDifference { .. } => clique_difference_witness(a, b),
        }
    }

    /// Whether the pattern relates the pair in either order.
    pub fn related(&self, a: &SubsetMask, b: &SubsetMask) -> Result<bool> {
        Ok(self.witness(a, b)?.is_some() || self.witness(b, a)?.is_some())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `B ∖ A = S^{d_1} ∪ … ∪ S^{d_s}`.
    Power { set: Vec<u32> },
    /// `A ∖ U = S_1^{…}`, `B ∖ U = S_2^{…}`.
    Distance2 { common: SubsetMask, first: Vec<u32>, second: Vec<u32> },
    /// `A ∖ U = h_{I_1}^{-1}(F_1)`, `B ∖ U = h_{I_2}^{-1}(F_2)`; `I_2 = I_1`
    /// except in disjoint-windows mode.
    FamilyDifference {
        mode: WindowMode,
        first_window: OrderedWindow,
        second_window: OrderedWindow,
        common: SubsetMask,
        first: SubsetMask,
        second: SubsetMask,
    },
    /// `A Δ B = {start, …, start+length-1} mod n`.
    Interval { start: u32, length: u32 },
    /// `B ∖ A = K(S,d_1) ∪ … ∪ K(S,d_s)`.
    Clique { set: Vec<u32> },
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Power { .. } => "power",
            Self::Distance2 { .. } => "distance2",
            Self::FamilyDifference { .. } => "family-difference",
            Self::Interval { .. } => "interval",
            Self::Clique { .. } => "clique",
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Self::Power { set } => json!({ "kind": self.kind(), "S": set }),
            Self::Distance2 { common, first, second } => json!({
                "kind": self.kind(), "U": common.to_hex(), "S1": first, "S2": second,
            }),
            Self::FamilyDifference { mode, first_window, second_window, common, first, second } => json!({
                "kind": self.kind(),
                "mode": mode,
                "I1": first_window.elements(),
                "I2": second_window.elements(),
                "U": common.to_hex(),
                "F1": first.to_hex(),
                "F2": second.to_hex(),
            }),
            Self::Interval { start, length } => json!({ "kind": self.kind(), "start": start, "length": length }),
            Self::Clique { set } => json!({ "kind": self.kind(), "S": set }),
        }
    }

    /// Re-derives the pattern from the certificate alone.
    pub fn verify(&self, a: &SubsetMask, b: &SubsetMask, spec: Option<&PatternSpec>) -> bool {
        if a.shape() != b.shape() || a == b {
            return false;
        }
        let shape = a.shape();
        match self {
            Self::Power { set } => {
                !set.is_empty() && a.is_subset(b) && b.difference(a) == shape.power_mask(set)
            }
            Self::Distance2 { common, first, second } => {
                common.is_subset(a)
                    && common.is_subset(b)
                    && a.difference(common) == shape.power_mask(first)
                    && b.difference(common) == shape.power_mask(second)
            }
            Self::FamilyDifference { mode, first_window, second_window, common, first, second } => {
                let family = match spec {
                    Some(PatternSpec::FamilyDifference { family, .. }) => family,
                    _ => return false,
                };
                let windows_ok = match mode {
                    WindowMode::DisjointWindows => !first_window.intersects(second_window),
                    _ => first_window == second_window,
                };
                let nested_ok = *mode != WindowMode::Nested || (second.is_subset(first) && second != first);
                let (Ok(f1), Ok(f2)) = (plant(first, first_window, shape), plant(second, second_window, shape)) else {
                    return false;
                };
                windows_ok
                    && nested_ok
                    && family.contains(first)
                    && family.contains(second)
                    && common.is_subset(a)
                    && common.is_subset(b)
                    && a.difference(common) == f1
                    && b.difference(common) == f2
            }
            Self::Interval { start, length } => {
                let n = shape.n();
                if shape.degrees() != [1] || *length == 0 || *length > n || *start == 0 || *start > n {
                    return false;
                }
                let d = a.symmetric_difference(b);
                let want: Vec<usize> = (0..*length).map(|k| ((start - 1 + k) % n) as usize).collect();
                d.len() == want.len() && want.iter().all(|&i| d.contains(i))
            }
            Self::Clique { set } => {
                let diff = b.difference(a);
                a.is_subset(b) && !diff.is_empty() && diff == clique_mask(shape, set)
            }
        }
    }
}

/// Sorted list of the 1-based elements encoded by the low `n` bits of `bits`.
pub(crate) fn elements_of(bits: u64, n: u32) -> Vec<u32> {
    (0..n).filter(|&k| bits >> k & 1 == 1).map(|k| k + 1).collect()
}

/// `B ∖ A = S^{d_1} ∪ … ∪ S^{d_s}` with `A ⊊ B`. `S` is read off the diagonal
/// of part 0 and then verified, so at most one candidate is checked.
pub fn power_difference_witness(a: &SubsetMask, b: &SubsetMask) -> Result<Option<Witness>> {
    a.check_shape(b)?;
    if a == b || !a.is_subset(b) {
        return Ok(None);
    }
    let shape = a.shape();
    let diff = b.difference(a);
    let set: Vec<u32> = (1..=shape.n()).filter(|&x| diff.contains(shape.diagonal_index(0, x))).collect();
    if set.is_empty() || shape.power_mask(&set) != diff {
        return Ok(None);
    }
    Ok(Some(Witness::Power { set }))
}

/// Common lower set `U ⊂ A ∩ B` with `A ∖ U = S_1^{…}` and `B ∖ U = S_2^{…}`.
/// Scans `S_1` in mask order with `U = A ∖ S_1^{…}` and reads `S_2` off the
/// diagonal of `B ∖ U`.
pub fn distance2_witness(a: &SubsetMask, b: &SubsetMask) -> Result<Option<Witness>> {
    a.check_shape(b)?;
    if a == b {
        return Err(PatternError::Precondition("distance-2 witness needs A ≠ B".into()));
    }
    let shape = a.shape();
    let n = shape.n();
    if n > 24 {
        return Err(PatternError::Precondition(format!("exhaustive S_1 scan needs n ≤ 24, got {n}")));
    }
    for s1 in 0..(1u64 << n) {
        let first = elements_of(s1, n);
        let p1 = shape.power_mask(&first);
        if !p1.is_subset(a) {
            continue;
        }
        let common = a.difference(&p1);
        if !common.is_subset(b) {
            continue;
        }
        let rest = b.difference(&common);
        let second: Vec<u32> = (1..=n).filter(|&x| rest.contains(shape.diagonal_index(0, x))).collect();
        if shape.power_mask(&second) == rest {
            return Ok(Some(Witness::Distance2 { common, first, second }));
        }
    }
    Ok(None)
}

fn family_is_chain(family: &Family) -> bool {
    let mut members: Vec<&SubsetMask> = family.iter().collect();
    members.sort_by_key(|m| m.len());
    members.windows(2).all(|w| w[0].is_subset(w[1]))
}

/// Family-difference certificate: `U ⊂ A ∩ B`, `A ∖ U ∈ F_{I_1}`, `B ∖ U ∈ F_{I_2}`.
pub fn family_difference_witness(
    a: &SubsetMask,
    b: &SubsetMask,
    family: &Family,
    mode: WindowMode,
) -> Result<Option<Witness>> {
    a.check_shape(b)?;
    let shape = a.shape();
    let fs = family.shape();
    if fs.degrees() != shape.degrees() {
        return Err(PatternError::Inconsistent(format!("family over {fs:?} on {shape:?}")));
    }
    let m = fs.n();
    if m > shape.n() {
        return Err(PatternError::Precondition(format!("window size {m} exceeds n = {}", shape.n())));
    }
    if mode == WindowMode::Nested && !family_is_chain(family) {
        return Err(PatternError::NotNested);
    }
    let windows: Vec<OrderedWindow> = (1..=shape.n() - m + 1)
        .map(|start| OrderedWindow::interval(start, m))
        .collect::<std::result::Result<_, _>>()?;
    let pairs: Vec<(&OrderedWindow, &OrderedWindow)> = match mode {
        WindowMode::SameWindow | WindowMode::Nested => windows.iter().map(|w| (w, w)).collect(),
        WindowMode::DisjointWindows => windows
            .iter()
            .flat_map(|w1| windows.iter().filter(move |w2| !w1.intersects(w2)).map(move |w2| (w1, w2)))
            .collect(),
    };
    for (w1, w2) in pairs {
        let cells2 = shape.window_mask(w2);
        for f1 in family {
            let planted = plant(f1, w1, shape)?;
            if !planted.is_subset(a) {
                continue;
            }
            let common = a.difference(&planted);
            if !common.is_subset(b) {
                continue;
            }
            let rest = b.difference(&common);
            if !rest.is_subset(&cells2) {
                continue;
            }
            let f2 = restrict_and_relabel(&rest, w2)?;
            if !family.contains(&f2) {
                continue;
            }
            if mode == WindowMode::Nested && !(f2.is_subset(f1) && &f2 != f1) {
                continue;
            }
            return Ok(Some(Witness::FamilyDifference {
                mode,
                first_window: w1.clone(),
                second_window: w2.clone(),
                common,
                first: f1.clone(),
                second: f2,
            }));
        }
    }
    Ok(None)
}

/// `(start, length)` with `bits = {start, …, start+length-1} mod n`; the
/// smallest start wins, so the full set reports start 1.
pub fn cyclic_interval(bits: u64, n: u32) -> Option<(u32, u32)> {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let bits = bits & full;
    if bits == 0 {
        return None;
    }
    let length = bits.count_ones();
    (1..=n).find_map(|start| {
        let covers = (0..length).all(|k| bits >> ((start - 1 + k) % n) & 1 == 1);
        covers.then_some((start, length))
    })
}

pub fn interval_mod_n_witness(a: &SubsetMask, b: &SubsetMask) -> Result<Option<Witness>> {
    a.check_shape(b)?;
    PatternSpec::IntervalModN.check_shape(a.shape())?;
    if a == b {
        return Err(PatternError::Precondition("interval witness needs A ≠ B".into()));
    }
    let d = a.symmetric_difference(b).as_u64().expect("n ≤ 64");
    Ok(cyclic_interval(d, a.shape().n()).map(|(start, length)| Witness::Interval { start, length }))
}

/// `K(S,d_1) ∪ … ∪ K(S,d_s)` laid out on the strictly increasing tuples.
pub fn clique_mask(shape: &UniverseShape, set: &[u32]) -> SubsetMask {
    let mut mask = SubsetMask::empty(shape);
    for p in shape.points() {
        let increasing = p.coords.windows(2).all(|w| w[0] < w[1]);
        if increasing && p.coords.iter().all(|c| set.contains(c)) {
            mask.insert(shape.index_of(&p).expect("valid point"));
        }
    }
    mask
}

pub fn clique_difference_witness(a: &SubsetMask, b: &SubsetMask) -> Result<Option<Witness>> {
    a.check_shape(b)?;
    if a == b || !a.is_subset(b) {
        return Ok(None);
    }
    let diff = b.difference(a);
    let mut set: Vec<u32> = diff.points().flat_map(|p| p.coords).collect();
    set.sort_unstable();
    set.dedup();
    if clique_mask(a.shape(), &set) == diff {
        Ok(Some(Witness::Clique { set }))
    } else {
        Ok(None)
    }
}

/// First ordered pair of distinct members (outer index ascending, then inner
/// ascending, both in mask order) that admits a witness.
pub fn find_pattern_pair(family: &Family, spec: &PatternSpec) -> Result<Option<(SubsetMask, SubsetMask, Witness)>> {
    spec.check_shape(family.shape())?;
    for a in family {
        for b in family {
            if a == b {
                continue;
            }
            if let Some(w) = spec.witness(a, b)? {
                return Ok(Some((a.clone(), b.clone(), w)));
            }
        }
    }
    Ok(None)
}
