//! Constructive reductions between the pattern problems.
//!
//! * symmetric sets ↔ their trace on `R = {x_1 ≤ … ≤ x_d}`;
//! * multiplexing a family into `s` equal copies;
//! * `β`: symmetric subsets of `[n]^d` ↔ bundles of uniform hypergraphs, one
//!   part per partition of `[d]` into intervals;
//! * graphs ↔ subsets of `[n]^2` through the strict upper triangle;
//! * diagonal blocks, which plant the members of a family in consecutive
//!   disjoint windows.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::patterns::{power_difference_witness, Witness};
use crate::rational::{self, Rational};
use crate::universe::{plant, Family, OrderedWindow, Point, SubsetMask, UniverseError, UniverseShape};

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Universe(#[from] UniverseError),
    #[error("set is not symmetric under coordinate permutations")]
    NotSymmetric,
    #[error("set is not contained in the region")]
    OutsideRegion,
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("bundle file line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = ReductionError> = std::result::Result<T, E>;

fn single(shape: &UniverseShape) -> Result<u32> {
    if shape.parts() != 1 {
        return Err(ReductionError::Argument(format!("expected a single-part universe, got {}", shape.header())));
    }
    Ok(shape.degree(0))
}

/// `R = {(x_1, …, x_d) ∈ [n]^d : x_1 ≤ … ≤ x_d}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricRegion {
    shape: UniverseShape,
    mask: SubsetMask,
}

impl SymmetricRegion {
    pub fn new(d: u32, n: u32) -> Result<Self> {
        let shape = UniverseShape::single(d, n)?;
        let mut mask = SubsetMask::empty(&shape);
        for (i, pt) in shape.points().enumerate() {
            if pt.coords.windows(2).all(|w| w[0] <= w[1]) {
                mask.insert(i);
            }
        }
        Ok(Self { shape, mask })
    }

    pub fn shape(&self) -> &UniverseShape {
        &self.shape
    }

    pub fn mask(&self) -> &SubsetMask {
        &self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_empty()
    }

    fn representative(&self, index: usize) -> Result<usize> {
        let mut pt = self.shape.point_of(index)?;
        pt.coords.sort_unstable();
        Ok(self.shape.index_of(&pt)?)
    }

    pub fn is_symmetric(&self, a: &SubsetMask) -> Result<bool> {
        self.mask.check_shape(a)?;
        for i in 0..self.shape.cell_count() {
            if a.contains(i) != a.contains(self.representative(i)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `A ↦ A ∩ R` for symmetric `A`.
    pub fn lift(&self, a: &SubsetMask) -> Result<SubsetMask> {
        if !self.is_symmetric(a)? {
            return Err(ReductionError::NotSymmetric);
        }
        Ok(a.intersection(&self.mask))
    }

    /// Symmetric closure of `B ⊂ R`.
    pub fn extend(&self, b: &SubsetMask) -> Result<SubsetMask> {
        self.mask.check_shape(b)?;
        if !b.is_subset(&self.mask) {
            return Err(ReductionError::OutsideRegion);
        }
        let mut out = SubsetMask::empty(&self.shape);
        for i in 0..self.shape.cell_count() {
            if b.contains(self.representative(i)?) {
                out.insert(i);
            }
        }
        Ok(out)
    }

    /// Every symmetric subset of `[n]^d`, as extensions of the subsets of
    /// `R` in mask order of their traces.
    pub fn symmetric_sets(&self, budget: usize) -> Result<Vec<SubsetMask>> {
        if self.len() > budget {
            return Err(UniverseError::Budget { cells: self.len(), budget }.into());
        }
        let cells: Vec<usize> = self.mask.iter().collect();
        (0..1u64 << cells.len())
            .map(|bits| {
                let b = SubsetMask::from_indices(&self.shape, cells.iter().enumerate().filter(|(k, _)| bits >> k & 1 == 1).map(|(_, &c)| c))?;
                self.extend(&b)
            })
            .collect()
    }

    /// `{A′ ⊂ [n]^d : A′ ∩ R ∈ fam}` for traces `fam ⊂ P(R)`.
    pub fn region_preimage(&self, traces: &Family, budget: usize) -> Result<Family> {
        if traces.shape() != &self.shape {
            return Err(UniverseError::ShapeMismatch { expected: self.shape.header(), found: traces.shape().header() }.into());
        }
        if traces.iter().any(|t| !t.is_subset(&self.mask)) {
            return Err(ReductionError::OutsideRegion);
        }
        Ok(Family::from_predicate(&self.shape, budget, |a| traces.contains(&a.intersection(&self.mask)))?)
    }

    /// Density of a family of traces inside `P(R)`.
    pub fn trace_density(&self, traces: &Family) -> Rational {
        rational::dyadic(traces.len(), self.len())
    }

    /// `S` with `B₀ ∖ A₀ = S^d ∩ R`, if the traces form a power pair inside
    /// the region.
    pub fn trace_power_witness(&self, a0: &SubsetMask, b0: &SubsetMask) -> Result<Option<Vec<u32>>> {
        if a0 == b0 || !a0.is_subset(b0) {
            return Ok(None);
        }
        let diff = b0.difference(a0);
        let set: Vec<u32> = (1..=self.shape.n()).filter(|&x| diff.contains(self.shape.diagonal_index(0, x))).collect();
        let expected = self.shape.power_mask(&set).intersection(&self.mask);
        Ok((!set.is_empty() && expected == diff).then_some(set))
    }
}

/// Density of symmetric sets: `|fam| / |P([n]^d)_Sym| = |fam| / 2^{|R|}`.
pub fn symmetric_density(region: &SymmetricRegion, fam_sym: &[SubsetMask]) -> Rational {
    rational::dyadic(fam_sym.len(), region.len())
}

/// `A ↦ A ∪ … ∪ A` (`s` copies) into the universe with degrees `(d, …, d)`.
pub fn multiplex_set(a: &SubsetMask, s: usize) -> Result<SubsetMask> {
    let d = single(a.shape())?;
    if s == 0 {
        return Err(ReductionError::Argument("s must be at least 1".into()));
    }
    let target = UniverseShape::new(vec![d; s], a.shape().n())?;
    let part_len = a.shape().cell_count();
    let mut out = SubsetMask::empty(&target);
    for i in a.iter() {
        for part in 0..s {
            out.insert(part * part_len + i);
        }
    }
    Ok(out)
}

pub fn multiplex(fam: &Family, s: usize) -> Result<Family> {
    let d = single(fam.shape())?;
    if s == 0 {
        return Err(ReductionError::Argument("s must be at least 1".into()));
    }
    let target = UniverseShape::new(vec![d; s], fam.shape().n())?;
    let members = fam.iter().map(|a| multiplex_set(a, s)).collect::<Result<Vec<_>>>()?;
    Ok(Family::new(&target, members)?)
}

/// Inverse of [`multiplex_set`] on the diagonal `A_1 = … = A_s`.
pub fn demultiplex_set(a: &SubsetMask) -> Result<Option<SubsetMask>> {
    let shape = a.shape();
    let d = shape.degree(0);
    if shape.degrees().iter().any(|&x| x != d) {
        return Err(ReductionError::Argument("multiplexed universe must repeat one degree".into()));
    }
    let base = UniverseShape::single(d, shape.n())?;
    let len = base.cell_count();
    let first = SubsetMask::from_indices(&base, a.iter().filter(|&i| i < len))?;
    let again = multiplex_set(&first, shape.parts())?;
    Ok((again == *a).then_some(first))
}

/// `|multiplex(fam)| / |A_m|` where `A_m` is the diagonal family, of size
/// `2^{n^d}`.
pub fn multiplex_density(fam: &Family) -> Rational {
    rational::dyadic(fam.len(), fam.shape().part_len(0))
}

/// Partitions of `[d]` into `k` intervals, `k = 1..d`, each stored as its
/// composition of part sizes; `k` ascending, then lexicographic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalPartitionCatalog {
    d: u32,
    by_k: Vec<Vec<Vec<u32>>>,
}

fn compositions(d: u32, k: u32) -> Vec<Vec<u32>> {
    if k == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in 1..=d.saturating_sub(k - 1) {
        for mut rest in compositions(d - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl IntervalPartitionCatalog {
    pub fn new(d: u32) -> Result<Self> {
        if d == 0 {
            return Err(ReductionError::Argument("d must be at least 1".into()));
        }
        Ok(Self { d, by_k: (1..=d).map(|k| compositions(d, k)).collect() })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// `I_k` as compositions.
    pub fn partitions(&self, k: u32) -> &[Vec<u32>] {
        &self.by_k[k as usize - 1]
    }

    /// `m(k) = |I_k|`.
    pub fn m(&self, k: u32) -> usize {
        self.partitions(k).len()
    }

    /// `s = Σ_k m(k)`.
    pub fn s(&self) -> usize {
        self.by_k.iter().map(Vec::len).sum()
    }

    /// All `(k, composition)` in part order.
    pub fn entries(&self) -> impl Iterator<Item = (u32, &[u32])> {
        self.by_k.iter().enumerate().flat_map(|(k, list)| list.iter().map(move |c| (k as u32 + 1, c.as_slice())))
    }

    /// Part degrees `(d_1, …, d_s)`: `m(k)` copies of `k`, ascending.
    pub fn degrees(&self) -> Vec<u32> {
        self.entries().map(|(k, _)| k).collect()
    }

    /// The unique point of `R` with distinct values `vertices` repeated per
    /// the composition.
    pub fn region_point(composition: &[u32], vertices: &[u32]) -> Vec<u32> {
        composition.iter().zip(vertices).flat_map(|(&c, &v)| std::iter::repeat_n(v, c as usize)).collect()
    }
}

/// A disjoint union `G_1 ∪ … ∪ G_s` of uniform hypergraphs on `[n]`, part
/// `j` being `d_j`-uniform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypergraphBundle {
    pub n: u32,
    pub degrees: Vec<u32>,
    pub parts: Vec<BTreeSet<Vec<u32>>>,
}

impl HypergraphBundle {
    pub fn empty(n: u32, degrees: Vec<u32>) -> Self {
        let parts = vec![BTreeSet::new(); degrees.len()];
        Self { n, degrees, parts }
    }

    /// All `K([n], d_j)`.
    pub fn complete(n: u32, degrees: Vec<u32>) -> Self {
        let all: Vec<u32> = (1..=n).collect();
        let parts = degrees.iter().map(|&d| k_subsets(&all, d as usize).into_iter().collect()).collect();
        Self { n, degrees, parts }
    }

    pub fn validate(&self) -> Result<()> {
        if self.parts.len() != self.degrees.len() {
            return Err(ReductionError::Argument("one hyperedge set per degree required".into()));
        }
        for (edges, &d) in self.parts.iter().zip(&self.degrees) {
            for e in edges {
                let ok = e.len() == d as usize && e.windows(2).all(|w| w[0] < w[1]) && e.iter().all(|&v| v >= 1 && v <= self.n);
                if !ok {
                    return Err(ReductionError::Argument(format!("bad {d}-edge {e:?}")));
                }
            }
        }
        Ok(())
    }

    pub fn shape(&self) -> Result<UniverseShape> {
        Ok(UniverseShape::new(self.degrees.clone(), self.n)?)
    }

    /// Hyperedges as strictly increasing points of the multi-part universe,
    /// the representation the clique pattern works on.
    pub fn to_mask(&self) -> Result<SubsetMask> {
        self.validate()?;
        let shape = self.shape()?;
        let mut out = SubsetMask::empty(&shape);
        for (part, edges) in self.parts.iter().enumerate() {
            for e in edges {
                out.insert(shape.index_of(&Point::new(part, e.clone()))?);
            }
        }
        Ok(out)
    }

    pub fn from_mask(a: &SubsetMask) -> Result<Self> {
        let shape = a.shape();
        let mut bundle = Self::empty(shape.n(), shape.degrees().to_vec());
        for pt in a.points() {
            if !pt.coords.windows(2).all(|w| w[0] < w[1]) {
                return Err(ReductionError::Argument(format!("{:?} is not a hyperedge", pt.coords)));
            }
            bundle.parts[pt.part].insert(pt.coords);
        }
        Ok(bundle)
    }

    pub fn edge_count(&self) -> usize {
        self.parts.iter().map(BTreeSet::len).sum()
    }

    /// Header `n=<n> degrees=<d_1,…>`, then one line per part with edges as
    /// comma-joined vertices separated by spaces (`-` for an empty part).
    pub fn to_text(&self) -> String {
        let degrees: Vec<String> = self.degrees.iter().map(u32::to_string).collect();
        let mut out = format!("n={} degrees={}\n", self.n, degrees.join(","));
        for edges in &self.parts {
            if edges.is_empty() {
                out.push('-');
            } else {
                let items: Vec<String> = edges.iter().map(|e| e.iter().map(u32::to_string).collect::<Vec<_>>().join(",")).collect();
                out.push_str(&items.join(" "));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let parse_err = |line: usize, msg: String| ReductionError::Parse { line: line + 1, msg };
        let (idx, header) = lines.next().ok_or_else(|| parse_err(0, "missing header".into()))?;
        let mut n = None;
        let mut degrees = None;
        for tok in header.split_whitespace() {
            if let Some(v) = tok.strip_prefix("n=") {
                n = v.parse::<u32>().ok();
            } else if let Some(v) = tok.strip_prefix("degrees=") {
                degrees = v.split(',').map(|x| x.parse::<u32>().ok()).collect::<Option<Vec<_>>>();
            }
        }
        let (n, degrees) = n.zip(degrees).ok_or_else(|| parse_err(idx, format!("bad header {header:?}")))?;
        let mut bundle = Self::empty(n, degrees);
        let mut part = 0;
        for (idx, line) in lines {
            if part >= bundle.parts.len() {
                return Err(parse_err(idx, "more part lines than degrees".into()));
            }
            if line.trim() != "-" {
                for tok in line.split_whitespace() {
                    let e = tok.split(',').map(|x| x.parse::<u32>().ok()).collect::<Option<Vec<_>>>().ok_or_else(|| parse_err(idx, format!("bad edge {tok:?}")))?;
                    bundle.parts[part].insert(e);
                }
            }
            part += 1;
        }
        if part != bundle.parts.len() {
            return Err(parse_err(part, format!("expected {} part lines, found {part}", bundle.parts.len())));
        }
        bundle.validate()?;
        Ok(bundle)
    }
}

fn k_subsets(items: &[u32], k: usize) -> Vec<Vec<u32>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in k_subsets(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// `β`: part `(k, P_t)` gets edge `{a_1 < … < a_k}` iff the `R`-point with
/// `a_j` repeated per `P_t` lies in `A`.
pub fn beta_bijection(a: &SubsetMask, catalog: &IntervalPartitionCatalog) -> Result<HypergraphBundle> {
    let region = SymmetricRegion::new(catalog.d(), a.shape().n())?;
    if single(a.shape())? != catalog.d() {
        return Err(UniverseError::Degree(format!("set has degree {}, catalog {}", a.shape().degree(0), catalog.d())).into());
    }
    if !region.is_symmetric(a)? {
        return Err(ReductionError::NotSymmetric);
    }
    let n = a.shape().n();
    let all: Vec<u32> = (1..=n).collect();
    let mut bundle = HypergraphBundle::empty(n, catalog.degrees());
    for (part, (k, comp)) in catalog.entries().enumerate() {
        for vertices in k_subsets(&all, k as usize) {
            let pt = Point::new(0, IntervalPartitionCatalog::region_point(comp, &vertices));
            if a.contains(a.shape().index_of(&pt)?) {
                bundle.parts[part].insert(vertices);
            }
        }
    }
    Ok(bundle)
}

pub fn beta_inverse(bundle: &HypergraphBundle, catalog: &IntervalPartitionCatalog) -> Result<SubsetMask> {
    bundle.validate()?;
    if bundle.degrees != catalog.degrees() {
        return Err(ReductionError::Argument(format!("bundle degrees {:?} do not match the catalog", bundle.degrees)));
    }
    let region = SymmetricRegion::new(catalog.d(), bundle.n)?;
    let mut trace = SubsetMask::empty(region.shape());
    for ((_, comp), edges) in catalog.entries().zip(&bundle.parts) {
        for e in edges {
            let pt = Point::new(0, IntervalPartitionCatalog::region_point(comp, e));
            trace.insert(region.shape().index_of(&pt)?);
        }
    }
    region.extend(&trace)
}

/// Checks that every point of `R` arises from exactly one `(part, edge)`.
pub fn beta_representatives_unique(catalog: &IntervalPartitionCatalog, n: u32) -> Result<bool> {
    let region = SymmetricRegion::new(catalog.d(), n)?;
    let all: Vec<u32> = (1..=n).collect();
    let mut hits = vec![0usize; region.shape().cell_count()];
    for (k, comp) in catalog.entries() {
        for vertices in k_subsets(&all, k as usize) {
            let pt = Point::new(0, IntervalPartitionCatalog::region_point(comp, &vertices));
            hits[region.shape().index_of(&pt)?] += 1;
        }
    }
    Ok(region.mask().iter().all(|i| hits[i] == 1) && hits.iter().sum::<usize>() == region.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LoopMode {
    /// Loopless graphs; diagonal and lower triangle are free bits.
    #[default]
    Loopless,
    /// Loops `(x, x)` are part of the graph; only the lower triangle is free.
    Loopful,
}

/// Cells of `[n]^2` fixed by a graph: `x < y`, plus `x = y` when loopful.
pub fn graph_cells(shape: &UniverseShape, mode: LoopMode) -> SubsetMask {
    let mut mask = SubsetMask::empty(shape);
    for (i, pt) in shape.points().enumerate() {
        let (x, y) = (pt.coords[0], pt.coords[1]);
        if x < y || (mode == LoopMode::Loopful && x == y) {
            mask.insert(i);
        }
    }
    mask
}

/// Graph families are subsets of `graph_cells`; the image is every `A ⊂ [n]^2`
/// whose trace on those cells is a graph of the family.
pub fn clique_square_correspondence(graphs: &Family, mode: LoopMode, budget: usize) -> Result<Family> {
    let shape = graphs.shape();
    if single(shape)? != 2 {
        return Err(UniverseError::Degree("graphs live on the [n]^2 universe".into()).into());
    }
    let cells = graph_cells(shape, mode);
    if graphs.iter().any(|g| !g.is_subset(&cells)) {
        return Err(ReductionError::OutsideRegion);
    }
    Ok(Family::from_predicate(shape, budget, |a| graphs.contains(&a.intersection(&cells)))?)
}

/// Graph density `|fam| / 2^{#graph cells}`.
pub fn graph_density(graphs: &Family, mode: LoopMode) -> Rational {
    rational::dyadic(graphs.len(), graph_cells(graphs.shape(), mode).len())
}

/// Restriction of a square pair `B ∖ A = S^2` to `{x < y}`: a clique pair
/// with the same `S` when `|S| ≥ 2`; identical graphs when `|S| = 1`.
pub fn square_to_clique(a: &SubsetMask, b: &SubsetMask) -> Result<Option<(SubsetMask, SubsetMask, Vec<u32>)>> {
    let Some(Witness::Power { set }) = power_difference_witness(a, b).map_err(|e| ReductionError::Argument(e.to_string()))? else {
        return Ok(None);
    };
    let cells = graph_cells(a.shape(), LoopMode::Loopless);
    Ok(Some((a.intersection(&cells), b.intersection(&cells), set)))
}

/// `F′ = {h^{-1}_{[tm]∖[(t−1)m]}(F_t) : t ∈ [l]}` with `F_t` the members of
/// `F` in mask order.
pub fn diagonal_block_family(f: &Family) -> Result<Family> {
    if f.is_empty() {
        return Err(ReductionError::Argument("family must be nonempty".into()));
    }
    let m = f.shape().n();
    let l = f.len() as u32;
    let target = f.shape().with_n(m * l)?;
    let members = f
        .iter()
        .enumerate()
        .map(|(t, member)| {
            let w = OrderedWindow::interval(t as u32 * m + 1, m)?;
            plant(member, &w, &target)
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(Family::new(&target, members)?)
}

/// Power sets `S^d` of the `k`-subsets of `[n]`, as a family.
pub fn power_family(shape: &UniverseShape, k: usize) -> Result<Family> {
    let all: Vec<u32> = (1..=shape.n()).collect();
    Ok(Family::new(shape, k_subsets(&all, k).iter().map(|s| shape.power_mask(s)))?)
}

/// Human-readable summary of the catalog, one part per line.
pub fn catalog_table(catalog: &IntervalPartitionCatalog) -> String {
    let mut out = String::new();
    for (idx, (k, comp)) in catalog.entries().enumerate() {
        let _ = writeln!(out, "part {}: k={} sizes={:?}", idx + 1, k, comp);
    }
    out
}
