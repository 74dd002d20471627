//! Exact extremal numbers at tiny scale.
//!
//! Vertices are all subsets of the universe, edges join pairs related by a
//! pattern, and a largest pattern-free family is a maximum independent set.
//! Branch-and-bound with a greedy clique-cover bound is plenty here: the
//! vertex count is capped at `2^16` and the graphs are sparse.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::patterns::{clique_mask, cyclic_interval, find_pattern_pair, PatternError, PatternSpec};
use crate::rational::{self, Rational};
use crate::universe::{Family, SubsetMask, UniverseError, UniverseShape};

#[derive(Debug, Error)]
pub enum ExtremalError {
    #[error(transparent)]
    Universe(#[from] UniverseError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("graph would have 2^{cells} vertices, above the cap 2^{cap}")]
    Cap { cells: usize, cap: usize },
    #[error("witness family failed re-verification")]
    Unverified,
}

pub type Result<T, E = ExtremalError> = std::result::Result<T, E>;

/// Vertex cap as a cell count: at most `2^16` vertices.
pub const DEFAULT_CELL_CAP: usize = 16;
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn and_not(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & !b).collect())
    }
    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                (w != 0).then(|| {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    k * 64 + b
                })
            })
        })
    }
}

/// Undirected graph on all subsets; vertex `v` is the mask with integer
/// value `v`.
#[derive(Clone)]
pub struct ForbiddenPairGraph {
    shape: UniverseShape,
    spec_name: &'static str,
    adj: Vec<Bits>,
}

impl std::fmt::Debug for ForbiddenPairGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ForbiddenPairGraph({}, {}, {} vertices, {} edges)", self.shape, self.spec_name, self.vertex_count(), self.edge_count())
    }
}

impl ForbiddenPairGraph {
    pub fn shape(&self) -> &UniverseShape {
        &self.shape
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Bits::count).sum::<usize>() / 2
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].get(v)
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.adj[v].iter().collect()
    }

    /// Sorted edge list `(u, v)` with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.vertex_count()).flat_map(|u| self.adj[u].iter().filter(move |&v| v > u).map(move |v| (u, v))).collect()
    }

    /// Pairs at distance one or two.
    pub fn square(&self) -> ForbiddenPairGraph {
        let n = self.vertex_count();
        let mut adj = self.adj.clone();
        for (v, row) in adj.iter_mut().enumerate() {
            for u in self.adj[v].iter() {
                for w in self.adj[u].iter() {
                    if w != v {
                        row.set(w);
                    }
                }
            }
        }
        debug_assert_eq!(adj.len(), n);
        ForbiddenPairGraph { shape: self.shape.clone(), spec_name: "distance-2", adj }
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.adj[u].set(v);
            self.adj[v].set(u);
        }
    }

    pub fn vertex_mask(&self, v: usize) -> SubsetMask {
        SubsetMask::from_u64(&self.shape, v as u64)
    }
}

fn nonempty_subsets(n: u32) -> impl Iterator<Item = Vec<u32>> {
    (1u64..1 << n).map(move |bits| (1..=n).filter(|&x| bits >> (x - 1) & 1 == 1).collect())
}

pub fn build_forbidden_graph(shape: &UniverseShape, spec: &PatternSpec) -> Result<ForbiddenPairGraph> {
    build_forbidden_graph_capped(shape, spec, DEFAULT_CELL_CAP)
}

pub fn build_forbidden_graph_capped(shape: &UniverseShape, spec: &PatternSpec, cap: usize) -> Result<ForbiddenPairGraph> {
    let cells = shape.cell_count();
    if cells > cap.min(26) {
        return Err(ExtremalError::Cap { cells, cap });
    }
    spec.check_shape(shape)?;
    let vertices = 1usize << cells;
    let mut g = ForbiddenPairGraph { shape: shape.clone(), spec_name: spec.name(), adj: vec![Bits::new(vertices); vertices] };
    // Patterns given by a fixed list of difference masks connect A to A ∪ D
    // for every listed D disjoint from A (or A △ D for the interval pattern).
    let offsets: Option<(Vec<u64>, bool)> = match spec {
        PatternSpec::PowerDifference { .. } | PatternSpec::PolynomialDifference { .. } => {
            Some((nonempty_subsets(shape.n()).map(|s| shape.power_mask(&s).as_u64().unwrap()).collect(), false))
        }
        PatternSpec::CliqueDifference { .. } => Some((
            nonempty_subsets(shape.n())
                .map(|s| clique_mask(shape, &s).as_u64().unwrap())
                .filter(|&m| m != 0)
                .collect(),
            false,
        )),
        PatternSpec::IntervalModN => Some(((1u64..1 << cells).filter(|&b| cyclic_interval(b, shape.n()).is_some()).collect(), true)),
        PatternSpec::FamilyDifference { .. } => None,
    };
    match offsets {
        Some((diffs, xor)) => {
            for a in 0..vertices as u64 {
                for &dm in &diffs {
                    if xor {
                        g.add_edge(a as usize, (a ^ dm) as usize);
                    } else if a & dm == 0 {
                        g.add_edge(a as usize, (a | dm) as usize);
                    }
                }
            }
        }
        None => {
            for a in 0..vertices {
                for b in a + 1..vertices {
                    let (ma, mb) = (g.vertex_mask(a), g.vertex_mask(b));
                    if spec.related(&ma, &mb)? || spec.related(&mb, &ma)? {
                        g.add_edge(a, b);
                    }
                }
            }
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Enumeration of all maximal independent sets.
    Exhaustive,
    BranchAndBound,
}

#[derive(Debug, Clone)]
pub struct ExtremalRecord {
    pub shape: UniverseShape,
    pub pattern: &'static str,
    pub max_size: usize,
    pub witness_family: Family,
    pub method: Method,
    /// False when the node budget ran out; `max_size` is then a lower bound.
    pub optimal: bool,
    pub nodes: u64,
}

impl ExtremalRecord {
    pub fn density(&self) -> Rational {
        rational::dyadic(self.max_size, self.shape.cell_count())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "shape": self.shape.header(),
            "pattern": self.pattern,
            "max_size": self.max_size,
            "max_density": self.density().to_string(),
            "method": self.method,
            "optimal": self.optimal,
            "nodes": self.nodes,
            "witness_family": self.witness_family.iter().map(SubsetMask::to_hex).collect::<Vec<_>>(),
        })
    }
}

struct Solver<'a> {
    adj: &'a [Bits],
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Solver<'_> {
    /// Greedy clique cover of `cand`: an upper bound on its independence
    /// number.
    fn clique_cover(&self, cand: &Bits) -> usize {
        let mut commons: Vec<Bits> = Vec::new();
        for v in cand.iter() {
            match commons.iter_mut().find(|c| c.get(v)) {
                Some(c) => *c = c.and(&self.adj[v]),
                None => commons.push(self.adj[v].and(cand)),
            }
        }
        commons.len()
    }

    fn search(&mut self, mut cand: Bits, chosen: &mut Vec<usize>) {
        self.nodes += 1;
        if self.nodes > self.budget {
            return;
        }
        // Vertices without candidate neighbours always join.
        let base = chosen.len();
        loop {
            let free: Vec<usize> = cand.iter().filter(|&v| self.adj[v].and(&cand).is_empty()).collect();
            if free.is_empty() {
                break;
            }
            for v in free {
                chosen.push(v);
                cand.clear(v);
            }
        }
        if cand.is_empty() {
            if chosen.len() > self.best.len() {
                self.best = chosen.clone();
            }
        } else if chosen.len() + self.clique_cover(&cand) > self.best.len() {
            let v = cand.iter().max_by_key(|&v| (self.adj[v].and(&cand).count(), std::cmp::Reverse(v))).unwrap();
            let mut with = cand.and_not(&self.adj[v]);
            with.clear(v);
            chosen.push(v);
            self.search(with, chosen);
            chosen.pop();
            let mut without = cand;
            without.clear(v);
            self.search(without, chosen);
        }
        chosen.truncate(base);
    }
}

/// Maximum independent set by branch-and-bound; the flag is false when the
/// node budget ran out.
pub fn maximum_independent_set(g: &ForbiddenPairGraph, budget: u64) -> (Vec<usize>, bool, u64) {
    let n = g.vertex_count();
    let mut all = Bits::new(n);
    for v in 0..n {
        all.set(v);
    }
    let mut solver = Solver { adj: &g.adj, best: Vec::new(), nodes: 0, budget };
    solver.search(all, &mut Vec::new());
    let mut best = solver.best;
    best.sort_unstable();
    (best, solver.nodes <= budget, solver.nodes)
}

/// All maximal independent sets via Bron–Kerbosch with pivoting on the
/// complement graph.
pub fn maximal_independent_sets(g: &ForbiddenPairGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let comp: Vec<Bits> = (0..n)
        .map(|v| {
            let mut b = Bits::new(n);
            for u in 0..n {
                if u != v && !g.adjacent(u, v) {
                    b.set(u);
                }
            }
            b
        })
        .collect();
    fn bk(comp: &[Bits], r: &mut Vec<usize>, p: Bits, x: Bits, out: &mut Vec<Vec<usize>>) {
        if p.is_empty() && x.is_empty() {
            out.push(r.clone());
            return;
        }
        let pivot = p.iter().chain(x.iter()).max_by_key(|&u| comp[u].and(&p).count()).unwrap();
        let mut p = p;
        let mut x = x;
        for v in p.and_not(&comp[pivot]).iter().collect::<Vec<_>>() {
            r.push(v);
            bk(comp, r, p.and(&comp[v]), x.and(&comp[v]), out);
            r.pop();
            p.clear(v);
            x.set(v);
        }
    }
    let mut p = Bits::new(n);
    for v in 0..n {
        p.set(v);
    }
    let mut out = Vec::new();
    bk(&comp, &mut Vec::new(), p, Bits::new(n), &mut out);
    out
}

fn record(shape: &UniverseShape, spec: &PatternSpec, g: &ForbiddenPairGraph, set: Vec<usize>, method: Method, optimal: bool, nodes: u64) -> Result<ExtremalRecord> {
    let witness_family = Family::new(shape, set.iter().map(|&v| g.vertex_mask(v)))?;
    if find_pattern_pair(&witness_family, spec)?.is_some() {
        return Err(ExtremalError::Unverified);
    }
    Ok(ExtremalRecord { shape: shape.clone(), pattern: spec.name(), max_size: set.len(), witness_family, method, optimal, nodes })
}

pub fn max_avoiding_family(shape: &UniverseShape, spec: &PatternSpec) -> Result<ExtremalRecord> {
    max_avoiding_family_with_budget(shape, spec, DEFAULT_NODE_BUDGET)
}

pub fn max_avoiding_family_with_budget(shape: &UniverseShape, spec: &PatternSpec, budget: u64) -> Result<ExtremalRecord> {
    let g = build_forbidden_graph(shape, spec)?;
    let (set, optimal, nodes) = maximum_independent_set(&g, budget);
    record(shape, spec, &g, set, Method::BranchAndBound, optimal, nodes)
}

/// Largest maximal independent set over the full enumeration.
pub fn max_avoiding_family_exhaustive(shape: &UniverseShape, spec: &PatternSpec) -> Result<ExtremalRecord> {
    let g = build_forbidden_graph(shape, spec)?;
    let all = maximal_independent_sets(&g);
    let nodes = all.len() as u64;
    let mut best = all.into_iter().max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a))).unwrap_or_default();
    best.sort_unstable();
    record(shape, spec, &g, best, Method::Exhaustive, true, nodes)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ThresholdRow {
    pub n: u32,
    pub max_size: usize,
    pub max_density: String,
    pub optimal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdTable {
    pub degrees: Vec<u32>,
    pub pattern: String,
    pub rows: Vec<ThresholdRow>,
    /// Whether `max_size` is nondecreasing in `n`; observed, not assumed.
    pub monotone: bool,
}

pub fn density_threshold_table(
    degrees: &[u32],
    ns: impl IntoIterator<Item = u32>,
    spec_for: impl Fn(&UniverseShape) -> PatternSpec,
) -> Result<ThresholdTable> {
    let mut rows = Vec::new();
    let mut pattern = String::new();
    for n in ns {
        let shape = UniverseShape::new(degrees.to_vec(), n)?;
        let spec = spec_for(&shape);
        pattern = spec.name().to_string();
        let rec = max_avoiding_family(&shape, &spec)?;
        rows.push(ThresholdRow { n, max_size: rec.max_size, max_density: rec.density().to_string(), optimal: rec.optimal });
    }
    let monotone = rows.windows(2).all(|w| w[0].max_size <= w[1].max_size);
    Ok(ThresholdTable { degrees: degrees.to_vec(), pattern, rows, monotone })
}

/// One frozen extremal value.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RegressionEntry {
    pub degrees: Vec<u32>,
    pub n: u32,
    pub pattern: String,
    pub max_size: usize,
}

/// The checked-in regression table.
pub const REGRESSION_JSON: &str = include_str!("../data/extremal_regression.json");

pub fn regression_table() -> Vec<RegressionEntry> {
    serde_json::from_str(REGRESSION_JSON).expect("checked-in regression table parses")
}

/// Instances covered by the regression table, in table order.
pub fn regression_instances() -> Vec<(Vec<u32>, u32, &'static str)> {
    vec![
        (vec![1], 1, "power-difference"),
        (vec![1], 2, "power-difference"),
        (vec![1], 3, "power-difference"),
        (vec![1], 4, "power-difference"),
        (vec![2], 1, "power-difference"),
        (vec![2], 2, "power-difference"),
        (vec![1, 2], 1, "polynomial-difference"),
        (vec![1], 3, "interval-mod-n"),
        (vec![1], 4, "interval-mod-n"),
        (vec![2], 2, "clique-difference"),
        (vec![2], 3, "clique-difference"),
    ]
}

pub fn spec_by_name(name: &str, shape: &UniverseShape) -> Option<PatternSpec> {
    match name {
        "power-difference" | "power" => Some(PatternSpec::PowerDifference { d: shape.degree(0) }),
        "polynomial-difference" | "polynomial" => Some(PatternSpec::PolynomialDifference { degrees: shape.degrees().to_vec() }),
        "interval-mod-n" | "interval" => Some(PatternSpec::IntervalModN),
        "clique-difference" | "clique" => Some(PatternSpec::CliqueDifference { degrees: shape.degrees().to_vec() }),
        _ => None,
    }
}

/// Recomputes every regression instance.
pub fn compute_regression_table() -> Result<Vec<RegressionEntry>> {
    regression_instances()
        .into_iter()
        .map(|(degrees, n, pattern)| {
            let shape = UniverseShape::new(degrees.clone(), n)?;
            let spec = spec_by_name(pattern, &shape).expect("known pattern");
            let rec = max_avoiding_family(&shape, &spec)?;
            Ok(RegressionEntry { degrees, n, pattern: pattern.to_string(), max_size: rec.max_size })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power(d: u32, n: u32) -> (UniverseShape, PatternSpec) {
        (UniverseShape::single(d, n).unwrap(), PatternSpec::PowerDifference { d })
    }

    #[test]
    fn containment_graph_d1_n2() {
        let (s, spec) = power(1, 2);
        let g = build_forbidden_graph(&s, &spec).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edges(), vec![(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)]);
    }

    #[test]
    fn tiny_graphs() {
        let (s, spec) = power(2, 1);
        let g = build_forbidden_graph(&s, &spec).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
        assert_eq!(max_avoiding_family(&s, &spec).unwrap().max_size, 1);
    }

    #[test]
    fn generic_edges_match_offsets() {
        let (s, spec) = power(1, 3);
        let fast = build_forbidden_graph(&s, &spec).unwrap();
        let fam_spec = PatternSpec::FamilyDifference {
            family: Family::full(&UniverseShape::single(1, 1).unwrap(), 24).unwrap(),
            mode: crate::patterns::WindowMode::SameWindow,
        };
        assert!(build_forbidden_graph(&s, &fam_spec).is_ok());
        for (u, v) in fast.edges() {
            let (a, b) = (fast.vertex_mask(u), fast.vertex_mask(v));
            assert!(spec.related(&a, &b).unwrap() || spec.related(&b, &a).unwrap());
        }
    }

    #[test]
    fn sperner_values() {
        for (n, want) in [(1, 1), (2, 2), (3, 3), (4, 6)] {
            let (s, spec) = power(1, n);
            let rec = max_avoiding_family(&s, &spec).unwrap();
            assert_eq!(rec.max_size, want, "n = {n}");
            assert!(rec.optimal);
            assert_eq!(max_avoiding_family_exhaustive(&s, &spec).unwrap().max_size, want);
        }
        let (s, spec) = power(1, 2);
        let rec = max_avoiding_family(&s, &spec).unwrap();
        assert_eq!(rec.witness_family.members(), &[SubsetMask::from_u64(&s, 1), SubsetMask::from_u64(&s, 2)]);
    }

    #[test]
    fn square_closes_distance_two() {
        let (s, spec) = power(1, 2);
        let g = build_forbidden_graph(&s, &spec).unwrap().square();
        assert!(g.adjacent(1, 2));
    }

    #[test]
    fn table_and_cap() {
        let t = density_threshold_table(&[1], 1..=4, |s| PatternSpec::PowerDifference { d: s.degree(0) }).unwrap();
        assert_eq!(t.rows.iter().map(|r| r.max_size).collect::<Vec<_>>(), vec![1, 2, 3, 6]);
        assert!(t.monotone);
        assert!(density_threshold_table(&[1], 1..1, |_| PatternSpec::IntervalModN).unwrap().rows.is_empty());
        let big = UniverseShape::single(1, 17).unwrap();
        assert!(matches!(build_forbidden_graph(&big, &PatternSpec::PowerDifference { d: 1 }), Err(ExtremalError::Cap { .. })));
    }

    #[test]
    fn regression_table_matches() {
        assert_eq!(compute_regression_table().unwrap(), regression_table());
    }
}
