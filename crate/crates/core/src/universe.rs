//! Ground sets `[n]^{d_1} ∪ … ∪ [n]^{d_s}` (disjoint union), their points,
//! bitmask subsets, explicit families of subsets and the window relabeling
//! maps.
//!
//! Cells are indexed row-major inside each part, parts concatenated in
//! declaration order. Coordinates are 1-based elements of `[n]`; part
//! indices are 0-based positions in the degree list.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::rational::{self, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UniverseError {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("coordinate out of range: {0}")]
    Range(String),
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },
    #[error("duplicate family member {0}")]
    DuplicateMember(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("degree condition violated: {0}")]
    Degree(String),
    #[error("enumeration budget exceeded: {cells} cells > {budget}")]
    Budget { cells: usize, budget: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = UniverseError> = std::result::Result<T, E>;

/// Default cap on the number of cells for operations that enumerate all
/// subsets of a universe.
pub const ENUMERATION_BUDGET: usize = 24;

/// The ground set `[n]^{d_1} ∪ … ∪ [n]^{d_s}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniverseShape {
    degrees: Arc<[u32]>,
    n: u32,
}

impl UniverseShape {
    pub fn new(degrees: impl Into<Vec<u32>>, n: u32) -> Result<Self> {
        let degrees = degrees.into();
        if degrees.is_empty() {
            return Err(UniverseError::InvalidShape("at least one part required".into()));
        }
        if degrees.contains(&0) {
            return Err(UniverseError::InvalidShape("degrees must be positive".into()));
        }
        if n == 0 {
            return Err(UniverseError::InvalidShape("n must be positive".into()));
        }
        let shape = Self { degrees: degrees.into(), n };
        shape
            .degrees
            .iter()
            .try_fold(0usize, |acc, &d| {
                (n as usize)
                    .checked_pow(d)
                    .and_then(|c| acc.checked_add(c))
            })
            .ok_or_else(|| UniverseError::InvalidShape("cell count overflows".into()))?;
        Ok(shape)
    }

    /// Single part `[n]^d`.
    pub fn single(d: u32, n: u32) -> Result<Self> {
        Self::new(vec![d], n)
    }

    pub fn parts(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn degree(&self, part: usize) -> u32 {
        self.degrees[part]
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Same degrees over a different side length.
    pub fn with_n(&self, n: u32) -> Result<Self> {
        Self::new(self.degrees.to_vec(), n)
    }

    pub fn part_len(&self, part: usize) -> usize {
        (self.n as usize).pow(self.degrees[part])
    }

    pub fn part_offset(&self, part: usize) -> usize {
        (0..part).map(|i| self.part_len(i)).sum()
    }

    /// `Σ_i n^{d_i}`.
    pub fn cell_count(&self) -> usize {
        (0..self.parts()).map(|i| self.part_len(i)).sum()
    }

    pub fn index_of(&self, pt: &Point) -> Result<usize> {
        if pt.part >= self.parts() {
            return Err(UniverseError::Range(format!(
                "part {} of a {}-part shape",
                pt.part,
                self.parts()
            )));
        }
        let d = self.degrees[pt.part] as usize;
        if pt.coords.len() != d {
            return Err(UniverseError::Range(format!(
                "{} coordinates for degree {d}",
                pt.coords.len()
            )));
        }
        let n = self.n as usize;
        let mut idx = 0usize;
        for &c in &pt.coords {
            if c == 0 || c > self.n {
                return Err(UniverseError::Range(format!("coordinate {c} not in [{}]", self.n)));
            }
            idx = idx * n + (c as usize - 1);
        }
        Ok(self.part_offset(pt.part) + idx)
    }

    pub fn point_of(&self, index: usize) -> Result<Point> {
        let mut rest = index;
        for part in 0..self.parts() {
            let len = self.part_len(part);
            if rest < len {
                return Ok(Point { part, coords: self.unrank(part, rest) });
            }
            rest -= len;
        }
        Err(UniverseError::Range(format!(
            "cell {index} outside {} cells",
            self.cell_count()
        )))
    }

    fn unrank(&self, part: usize, mut local: usize) -> Vec<u32> {
        let d = self.degrees[part] as usize;
        let n = self.n as usize;
        let mut coords = vec![0u32; d];
        for k in (0..d).rev() {
            coords[k] = (local % n) as u32 + 1;
            local /= n;
        }
        coords
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.parts()).flat_map(move |part| {
            (0..self.part_len(part)).map(move |local| Point { part, coords: self.unrank(part, local) })
        })
    }

    /// Index of the diagonal point `(x, …, x)` of a part.
    pub fn diagonal_index(&self, part: usize, x: u32) -> usize {
        let d = self.degrees[part];
        let n = self.n as usize;
        let step: usize = (0..d).map(|k| n.pow(k)).sum();
        self.part_offset(part) + (x as usize - 1) * step
    }

    /// The set `S^{d_1} ∪ … ∪ S^{d_s}` for `S ⊂ [n]` given as 1-based elements.
    pub fn power_mask(&self, set: &[u32]) -> SubsetMask {
        let mut mask = SubsetMask::empty(self);
        let n = self.n as usize;
        for part in 0..self.parts() {
            let d = self.degrees[part] as usize;
            let offset = self.part_offset(part);
            for tuple in tuples(set, d) {
                let local = tuple.iter().fold(0usize, |acc, &c| acc * n + (c as usize - 1));
                mask.insert(offset + local);
            }
        }
        mask
    }

    /// The cells of `X^{d_1} ∪ … ∪ X^{d_s}` for a window `X`.
    pub fn window_mask(&self, window: &OrderedWindow) -> SubsetMask {
        self.power_mask(window.elements())
    }

    /// Number of subsets of this universe, `2^{cells}`.
    pub fn subset_count(&self) -> BigInt {
        rational::pow2(self.cell_count())
    }

    /// Every subset of the universe in mask order; errors above the budget.
    pub fn all_subsets(&self, budget: usize) -> Result<impl Iterator<Item = SubsetMask> + '_> {
        let cells = self.cell_count();
        if cells > budget || cells >= 64 {
            return Err(UniverseError::Budget { cells, budget });
        }
        Ok((0..(1u64 << cells)).map(move |v| SubsetMask::from_u64(self, v)))
    }

    pub fn header(&self) -> String {
        let d: Vec<String> = self.degrees.iter().map(u32::to_string).collect();
        format!("shape s={} d={} n={}", self.parts(), d.join(","), self.n)
    }

    pub fn parse_header(line: &str) -> Result<Self> {
        let bad = |msg: &str| UniverseError::Parse { line: 1, msg: msg.to_string() };
        let mut tokens = line.split_whitespace();
        if tokens.next() != Some("shape") {
            return Err(bad("expected `shape s=<s> d=<d_1,…> n=<n>`"));
        }
        let (mut s, mut d, mut n) = (None, None, None);
        for tok in tokens {
            let (key, value) = tok.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            match key {
                "s" => s = Some(value.parse::<usize>().map_err(|_| bad("bad s"))?),
                "d" => {
                    d = Some(
                        value
                            .split(',')
                            .map(|x| x.trim().parse::<u32>())
                            .collect::<std::result::Result<Vec<_>, _>>()
                            .map_err(|_| bad("bad d"))?,
                    )
                }
                "n" => n = Some(value.parse::<u32>().map_err(|_| bad("bad n"))?),
                _ => return Err(bad("unknown key")),
            }
        }
        let (s, d, n) = (s.ok_or_else(|| bad("missing s"))?, d.ok_or_else(|| bad("missing d"))?, n.ok_or_else(|| bad("missing n"))?);
        if d.len() != s {
            return Err(bad("s does not match the number of degrees"));
        }
        Self::new(d, n)
    }
}

impl fmt::Debug for UniverseShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]^{:?}", self.n, &*self.degrees)
    }
}

impl fmt::Display for UniverseShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.header())
    }
}

/// All `d`-tuples over `set`, in lexicographic order of positions.
pub(crate) fn tuples(set: &[u32], d: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(d)];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                set.iter().map(move |&x| {
                    let mut t = prefix.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub part: usize,
    pub coords: Vec<u32>,
}

impl Point {
    pub fn new(part: usize, coords: impl Into<Vec<u32>>) -> Self {
        Self { part, coords: coords.into() }
    }
}

/// A subset of a universe as a bit array; cell `i` is bit `i`.
///
/// Masks are ordered as integers with cell 0 least significant, which is
/// the "mask order" used for every deterministic tie-break.
#[derive(Clone)]
pub struct SubsetMask {
    shape: UniverseShape,
    words: Vec<u64>,
}

impl SubsetMask {
    pub fn empty(shape: &UniverseShape) -> Self {
        let words = vec![0u64; shape.cell_count().div_ceil(64)];
        Self { shape: shape.clone(), words }
    }

    pub fn full(shape: &UniverseShape) -> Self {
        let mut mask = Self::empty(shape);
        for i in 0..shape.cell_count() {
            mask.insert(i);
        }
        mask
    }

    /// Mask from the low bits of `value`; higher bits are ignored.
    pub fn from_u64(shape: &UniverseShape, value: u64) -> Self {
        let mut mask = Self::empty(shape);
        let cells = shape.cell_count();
        if let Some(w) = mask.words.first_mut() {
            *w = if cells >= 64 { value } else { value & ((1u64 << cells) - 1) };
        }
        mask
    }

    pub fn from_indices(shape: &UniverseShape, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut mask = Self::empty(shape);
        let cells = shape.cell_count();
        for i in indices {
            if i >= cells {
                return Err(UniverseError::Range(format!("cell {i} outside {cells} cells")));
            }
            mask.insert(i);
        }
        Ok(mask)
    }

    pub fn from_points<'a>(shape: &UniverseShape, points: impl IntoIterator<Item = &'a Point>) -> Result<Self> {
        let mut mask = Self::empty(shape);
        for p in points {
            mask.insert(shape.index_of(p)?);
        }
        Ok(mask)
    }

    /// Convenience for single-part shapes: points given as coordinate tuples.
    pub fn from_coords(shape: &UniverseShape, coords: &[&[u32]]) -> Result<Self> {
        let pts: Vec<Point> = coords.iter().map(|c| Point::new(0, c.to_vec())).collect();
        Self::from_points(shape, &pts)
    }

    pub fn shape(&self) -> &UniverseShape {
        &self.shape
    }

    pub fn cell_count(&self) -> usize {
        self.shape.cell_count()
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.cell_count() && (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        self.shape.index_of(p).map(|i| self.contains(i)).unwrap_or(false)
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.cell_count());
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn set(&mut self, i: usize, on: bool) {
        if on {
            self.insert(i)
        } else {
            self.remove(i)
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// The mask as an integer when it fits in 64 cells.
    pub fn as_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn check_shape(&self, other: &Self) -> Result<()> {
        if self.shape != other.shape {
            return Err(UniverseError::ShapeMismatch {
                expected: self.shape.header(),
                found: other.shape.header(),
            });
        }
        Ok(())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        debug_assert_eq!(self.shape, other.shape);
        let words = self.words.iter().zip(&other.words).map(|(&a, &b)| op(a, b)).collect();
        Self { shape: self.shape.clone(), words }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a ^ b)
    }

    pub fn complement(&self) -> Self {
        SubsetMask::full(&self.shape).difference(self)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.iter().map(|i| self.shape.point_of(i).expect("index in range"))
    }

    /// Hex text form: nibble `k` holds cells `4k..4k+3` (cell `4k` in its
    /// low bit) and nibbles are written in increasing `k`, so the
    /// most-significant cell comes last.
    pub fn to_hex(&self) -> String {
        let cells = self.cell_count();
        let digits = cells.div_ceil(4).max(1);
        (0..digits)
            .map(|k| {
                let nibble = (0..4)
                    .filter(|&j| self.contains(4 * k + j))
                    .fold(0u32, |acc, j| acc | 1 << j);
                char::from_digit(nibble, 16).expect("nibble")
            })
            .collect()
    }

    pub fn from_hex(shape: &UniverseShape, text: &str) -> Result<Self> {
        let bad = |msg: String| UniverseError::Parse { line: 0, msg };
        let text = text.trim();
        let cells = shape.cell_count();
        if text.len() != cells.div_ceil(4).max(1) {
            return Err(bad(format!(
                "expected {} hex digits for {cells} cells, got {}",
                cells.div_ceil(4).max(1),
                text.len()
            )));
        }
        let mut mask = Self::empty(shape);
        for (k, ch) in text.chars().enumerate() {
            if ch.is_ascii_uppercase() {
                return Err(bad(format!("hex must be lowercase: {ch:?}")));
            }
            let nibble = ch.to_digit(16).ok_or_else(|| bad(format!("not a hex digit: {ch:?}")))?;
            for j in 0..4 {
                if nibble >> j & 1 == 1 {
                    let cell = 4 * k + j;
                    if cell >= cells {
                        return Err(bad(format!("bit set beyond cell {cells}")));
                    }
                    mask.insert(cell);
                }
            }
        }
        Ok(mask)
    }
}

impl PartialEq for SubsetMask {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape && self.words == other.words
    }
}

impl Eq for SubsetMask {}

impl Hash for SubsetMask {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.words.hash(state);
    }
}

impl Ord for SubsetMask {
    fn cmp(&self, other: &Self) -> Ordering {
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for SubsetMask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, p) in self.points().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            if self.shape.parts() > 1 {
                write!(f, "{}:", p.part)?;
            }
            let c: Vec<String> = p.coords.iter().map(u32::to_string).collect();
            write!(f, "({})", c.join(","))?;
        }
        f.write_str("}")
    }
}

/// An explicit family of distinct subsets of one universe, kept sorted in
/// mask order.
#[derive(Clone, PartialEq, Eq)]
pub struct Family {
    shape: UniverseShape,
    members: Vec<SubsetMask>,
}

impl Family {
    pub fn new(shape: &UniverseShape, members: impl IntoIterator<Item = SubsetMask>) -> Result<Self> {
        let mut members: Vec<SubsetMask> = members.into_iter().collect();
        for m in &members {
            if m.shape() != shape {
                return Err(UniverseError::ShapeMismatch {
                    expected: shape.header(),
                    found: m.shape().header(),
                });
            }
        }
        members.sort();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(UniverseError::DuplicateMember(w[0].to_hex()));
        }
        Ok(Self { shape: shape.clone(), members })
    }

    /// Like [`Family::new`] but silently drops duplicates.
    pub fn from_iter_dedup(shape: &UniverseShape, members: impl IntoIterator<Item = SubsetMask>) -> Result<Self> {
        let mut members: Vec<SubsetMask> = members.into_iter().collect();
        members.sort();
        members.dedup();
        Self::new(shape, members)
    }

    pub fn empty(shape: &UniverseShape) -> Self {
        Self { shape: shape.clone(), members: Vec::new() }
    }

    /// The whole power set; bounded by `budget` cells.
    pub fn full(shape: &UniverseShape, budget: usize) -> Result<Self> {
        let members: Vec<SubsetMask> = shape.all_subsets(budget)?.collect();
        Ok(Self { shape: shape.clone(), members })
    }

    pub fn from_predicate(shape: &UniverseShape, budget: usize, pred: impl Fn(&SubsetMask) -> bool) -> Result<Self> {
        let members: Vec<SubsetMask> = shape.all_subsets(budget)?.filter(|m| pred(m)).collect();
        Ok(Self { shape: shape.clone(), members })
    }

    pub fn shape(&self) -> &UniverseShape {
        &self.shape
    }

    pub fn members(&self) -> &[SubsetMask] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, mask: &SubsetMask) -> bool {
        self.members.binary_search(mask).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SubsetMask> {
        self.members.iter()
    }

    /// `|members| / 2^{cells}`.
    pub fn density(&self) -> Rational {
        rational::dyadic(self.members.len(), self.shape.cell_count())
    }

    pub fn to_text(&self) -> String {
        let mut out = self.shape.header();
        out.push('\n');
        for m in &self.members {
            out.push_str(&m.to_hex());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or(UniverseError::Parse { line: 1, msg: "missing header".into() })?;
        let shape = UniverseShape::parse_header(header.trim())?;
        let mut members = Vec::new();
        for (i, line) in lines {
            let mask = SubsetMask::from_hex(&shape, line).map_err(|e| match e {
                UniverseError::Parse { msg, .. } => UniverseError::Parse { line: i + 1, msg },
                other => other,
            })?;
            members.push(mask);
        }
        Self::new(&shape, members)
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Family")
            .field("shape", &self.shape)
            .field("members", &self.members)
            .finish()
    }
}

impl<'a> IntoIterator for &'a Family {
    type Item = &'a SubsetMask;
    type IntoIter = std::slice::Iter<'a, SubsetMask>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// An ordered `m`-subset `(X, <)` of `[n]`; position `k` (0-based) is the
/// element relabeled to `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedWindow {
    elements: Vec<u32>,
}

impl OrderedWindow {
    pub fn new(elements: impl Into<Vec<u32>>) -> Result<Self> {
        let elements = elements.into();
        if elements.is_empty() {
            return Err(UniverseError::InvalidWindow("window must be nonempty".into()));
        }
        if elements.contains(&0) {
            return Err(UniverseError::InvalidWindow("elements are 1-based".into()));
        }
        let mut sorted = elements.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(UniverseError::InvalidWindow(format!("repeated element in {elements:?}")));
        }
        Ok(Self { elements })
    }

    /// The interval `{start, …, start+len-1}` in increasing order.
    pub fn interval(start: u32, len: u32) -> Result<Self> {
        Self::new((start..start + len).collect::<Vec<_>>())
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn max_element(&self) -> u32 {
        *self.elements.iter().max().expect("nonempty")
    }

    /// 1-based rank of `x` under the window's ordering.
    pub fn rank_of(&self, x: u32) -> Option<u32> {
        self.elements.iter().position(|&e| e == x).map(|p| p as u32 + 1)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.elements.iter().any(|x| other.elements.contains(x))
    }

    pub fn check_fits(&self, n: u32) -> Result<()> {
        if self.max_element() > n {
            return Err(UniverseError::InvalidWindow(format!(
                "element {} outside [{n}]",
                self.max_element()
            )));
        }
        Ok(())
    }
}

/// `h_{(X,<)}(A ∩ (X^{d_1} ∪ … ∪ X^{d_s}))`: keep the points with every
/// coordinate in the window and relabel the `k`-th window element to `k`.
pub fn restrict_and_relabel(a: &SubsetMask, window: &OrderedWindow) -> Result<SubsetMask> {
    let shape = a.shape();
    window.check_fits(shape.n())?;
    let target = shape.with_n(window.len() as u32)?;
    let mut out = SubsetMask::empty(&target);
    for p in a.points() {
        let coords: Option<Vec<u32>> = p.coords.iter().map(|&c| window.rank_of(c)).collect();
        if let Some(coords) = coords {
            out.insert(target.index_of(&Point { part: p.part, coords })?);
        }
    }
    Ok(out)
}

/// Inverse of [`restrict_and_relabel`] on the window cells: plants a subset
/// of `[m]`-shape into the window of an `[n]`-shape universe.
pub fn plant(b: &SubsetMask, window: &OrderedWindow, shape: &UniverseShape) -> Result<SubsetMask> {
    window.check_fits(shape.n())?;
    if b.shape().n() as usize != window.len() || b.shape().degrees() != shape.degrees() {
        return Err(UniverseError::ShapeMismatch {
            expected: shape.with_n(window.len() as u32)?.header(),
            found: b.shape().header(),
        });
    }
    let mut out = SubsetMask::empty(shape);
    for p in b.points() {
        let coords: Vec<u32> = p.coords.iter().map(|&k| window.elements()[k as usize - 1]).collect();
        out.insert(shape.index_of(&Point { part: p.part, coords })?);
    }
    Ok(out)
}

/// The map `i` built from `i_{d',d}(x_1,…,x_{d'}) = (x_1,…,x_1,x_2,…,x_{d'})`
/// (first coordinate repeated `d − d' + 1` times) part by part.
#[derive(Debug, Clone)]
pub struct DegreeEmbedding {
    source: UniverseShape,
    target: UniverseShape,
}

impl DegreeEmbedding {
    pub fn new(source: &UniverseShape, target_degrees: &[u32]) -> Result<Self> {
        if source.parts() != target_degrees.len() {
            return Err(UniverseError::Degree(format!(
                "{} source parts vs {} target parts",
                source.parts(),
                target_degrees.len()
            )));
        }
        if let Some((j, (a, b))) = source
            .degrees()
            .iter()
            .zip(target_degrees)
            .enumerate()
            .find(|(_, (a, b))| a > b)
        {
            return Err(UniverseError::Degree(format!("part {j}: d' = {a} > d = {b}")));
        }
        let target = UniverseShape::new(target_degrees.to_vec(), source.n())?;
        Ok(Self { source: source.clone(), target })
    }

    pub fn source(&self) -> &UniverseShape {
        &self.source
    }

    pub fn target(&self) -> &UniverseShape {
        &self.target
    }

    pub fn embed_point(&self, p: &Point) -> Point {
        let d = self.target.degree(p.part) as usize;
        let dp = p.coords.len();
        let mut coords = vec![p.coords[0]; d - dp + 1];
        coords.extend_from_slice(&p.coords[1..]);
        Point { part: p.part, coords }
    }

    pub fn embed(&self, a: &SubsetMask) -> Result<SubsetMask> {
        if a.shape() != &self.source {
            return Err(UniverseError::ShapeMismatch {
                expected: self.source.header(),
                found: a.shape().header(),
            });
        }
        let mut out = SubsetMask::empty(&self.target);
        for p in a.points() {
            out.insert(self.target.index_of(&self.embed_point(&p))?);
        }
        Ok(out)
    }

    /// `E = i([n]^{d'_1} ∪ … ∪ [n]^{d'_s})`.
    pub fn region(&self) -> SubsetMask {
        self.embed(&SubsetMask::full(&self.source)).expect("source shape")
    }

    /// `i^{-1}(A ∩ E)`.
    pub fn pullback(&self, a: &SubsetMask) -> Result<SubsetMask> {
        if a.shape() != &self.target {
            return Err(UniverseError::ShapeMismatch {
                expected: self.target.header(),
                found: a.shape().header(),
            });
        }
        let mut out = SubsetMask::empty(&self.source);
        for p in self.source.points() {
            let idx = self.target.index_of(&self.embed_point(&p))?;
            if a.contains(idx) {
                out.insert(self.source.index_of(&p)?);
            }
        }
        Ok(out)
    }
}

/// Convenience wrapper over [`DegreeEmbedding::embed`].
pub fn embed_lower_degree(a: &SubsetMask, target_degrees: &[u32]) -> Result<SubsetMask> {
    DegreeEmbedding::new(a.shape(), target_degrees)?.embed(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(n: u32) -> UniverseShape {
        UniverseShape::single(2, n).unwrap()
    }

    #[test]
    fn index_of_examples() {
        let s = sq(3);
        assert_eq!(s.index_of(&Point::new(0, [1, 1])).unwrap(), 0);
        assert_eq!(s.index_of(&Point::new(0, [2, 3])).unwrap(), 5);
        let two = UniverseShape::new(vec![1, 2], 2).unwrap();
        assert_eq!(two.index_of(&Point::new(1, [1, 1])).unwrap(), 2);
        assert!(matches!(s.index_of(&Point::new(0, [4, 1])), Err(UniverseError::Range(_))));
        assert!(matches!(s.index_of(&Point::new(0, [0, 1])), Err(UniverseError::Range(_))));
        assert!(s.index_of(&Point::new(1, [1, 1])).is_err());
    }

    #[test]
    fn index_point_bijection_exhaustive() {
        for n in 1..=4 {
            for degrees in [vec![1], vec![2], vec![3], vec![1, 2], vec![2, 1, 3]] {
                let s = UniverseShape::new(degrees, n).unwrap();
                for i in 0..s.cell_count() {
                    let p = s.point_of(i).unwrap();
                    assert_eq!(s.index_of(&p).unwrap(), i);
                }
                assert!(s.point_of(s.cell_count()).is_err());
                assert_eq!(s.points().count(), s.cell_count());
            }
        }
    }

    #[test]
    fn invalid_shapes_rejected() {
        assert!(UniverseShape::new(Vec::<u32>::new(), 2).is_err());
        assert!(UniverseShape::new(vec![0], 2).is_err());
        assert!(UniverseShape::new(vec![1], 0).is_err());
    }

    #[test]
    fn relabel_identity_window() {
        let s = sq(3);
        let a = SubsetMask::from_coords(&s, &[&[1, 2], &[3, 3]]).unwrap();
        let w = OrderedWindow::interval(1, 3).unwrap();
        assert_eq!(restrict_and_relabel(&a, &w).unwrap(), a);
    }

    #[test]
    fn relabel_drops_outside_points() {
        let s = sq(3);
        let a = SubsetMask::from_coords(&s, &[&[2, 2], &[3, 2], &[1, 1]]).unwrap();
        let w = OrderedWindow::new(vec![2, 3]).unwrap();
        let got = restrict_and_relabel(&a, &w).unwrap();
        let want = SubsetMask::from_coords(&sq(2), &[&[1, 1], &[2, 1]]).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn relabel_respects_custom_order() {
        let s = UniverseShape::single(1, 4).unwrap();
        let a = SubsetMask::from_coords(&s, &[&[2], &[4]]).unwrap();
        let w = OrderedWindow::new(vec![4, 2]).unwrap();
        let got = restrict_and_relabel(&a, &w).unwrap();
        assert_eq!(got, SubsetMask::full(&UniverseShape::single(1, 2).unwrap()));
        // 4 ↦ 1 only
        let b = SubsetMask::from_coords(&s, &[&[4]]).unwrap();
        let got = restrict_and_relabel(&b, &w).unwrap();
        assert_eq!(got.points().collect::<Vec<_>>(), vec![Point::new(0, [1])]);
    }

    #[test]
    fn window_validation() {
        assert!(OrderedWindow::new(Vec::<u32>::new()).is_err());
        assert!(OrderedWindow::new(vec![1, 1]).is_err());
        let a = SubsetMask::empty(&sq(2));
        assert!(restrict_and_relabel(&a, &OrderedWindow::new(vec![3]).unwrap()).is_err());
    }

    #[test]
    fn relabel_fibers_are_uniform() {
        // n=3, m=2, d=1 and d=2 (the latter with 9 cells, 512 subsets)
        for d in [1u32, 2] {
            let s = UniverseShape::single(d, 3).unwrap();
            let w = OrderedWindow::new(vec![3, 1]).unwrap();
            let m_cells = 2usize.pow(d);
            let mut counts = vec![0usize; 1 << m_cells];
            for a in s.all_subsets(ENUMERATION_BUDGET).unwrap() {
                let r = restrict_and_relabel(&a, &w).unwrap();
                counts[r.as_u64().unwrap() as usize] += 1;
            }
            let expected = 1usize << (s.cell_count() - m_cells);
            assert!(counts.iter().all(|&c| c == expected), "{counts:?}");
        }
    }

    #[test]
    fn plant_inverts_relabel_on_window() {
        let s = sq(4);
        let w = OrderedWindow::new(vec![3, 1]).unwrap();
        let small = sq(2);
        for b in small.all_subsets(16).unwrap() {
            let planted = plant(&b, &w, &s).unwrap();
            assert!(planted.is_subset(&s.window_mask(&w)));
            assert_eq!(restrict_and_relabel(&planted, &w).unwrap(), b);
        }
    }

    #[test]
    fn embedding_examples() {
        let line = UniverseShape::single(1, 2).unwrap();
        let a = SubsetMask::from_coords(&line, &[&[2]]).unwrap();
        let e = embed_lower_degree(&a, &[3]).unwrap();
        assert_eq!(e.points().collect::<Vec<_>>(), vec![Point::new(0, [2, 2, 2])]);

        let s2 = sq(2);
        let b = SubsetMask::from_coords(&s2, &[&[1, 2]]).unwrap();
        assert_eq!(embed_lower_degree(&b, &[2]).unwrap(), b);
        let e = embed_lower_degree(&b, &[3]).unwrap();
        assert_eq!(e.points().collect::<Vec<_>>(), vec![Point::new(0, [1, 1, 2])]);

        assert!(matches!(embed_lower_degree(&b, &[1]), Err(UniverseError::Degree(_))));
    }

    #[test]
    fn embedding_is_injective_and_inverse_consistent() {
        let src = UniverseShape::new(vec![1, 2], 2).unwrap();
        let emb = DegreeEmbedding::new(&src, &[2, 3]).unwrap();
        let region = emb.region();
        assert_eq!(region.len(), src.cell_count());
        let mut seen = std::collections::HashSet::new();
        for a in src.all_subsets(16).unwrap() {
            let img = emb.embed(&a).unwrap();
            assert!(img.is_subset(&region));
            assert_eq!(emb.pullback(&img).unwrap(), a);
            assert!(seen.insert(img));
        }
    }

    #[test]
    fn hex_layout_puts_high_cells_last() {
        let s = UniverseShape::single(1, 6).unwrap();
        let a = SubsetMask::from_indices(&s, [0, 5]).unwrap();
        assert_eq!(a.to_hex(), "12");
        assert_eq!(SubsetMask::from_hex(&s, "12").unwrap(), a);
        assert!(SubsetMask::from_hex(&s, "1").is_err());
        assert!(SubsetMask::from_hex(&s, "1A").is_err());
        assert!(SubsetMask::from_hex(&s, "1c").is_err());
    }

    #[test]
    fn family_text_roundtrip_and_errors() {
        let s = UniverseShape::new(vec![1, 2], 2).unwrap();
        let fam = Family::new(
            &s,
            [SubsetMask::from_indices(&s, [0]).unwrap(), SubsetMask::from_indices(&s, [5, 2]).unwrap()],
        )
        .unwrap();
        let text = fam.to_text();
        assert!(text.starts_with("shape s=2 d=1,2 n=2\n"));
        assert_eq!(Family::from_text(&text).unwrap(), fam);
        assert!(Family::from_text("shape s=2 d=1 n=2\n").is_err());
        assert!(Family::from_text("shape s=1 d=1 n=2\n1\n1\n").is_err());
        assert!(Family::from_text("").is_err());
    }

    #[test]
    fn density_is_exact() {
        let s = UniverseShape::single(1, 3).unwrap();
        let fam = Family::from_predicate(&s, 24, |a| a.contains(0)).unwrap();
        assert_eq!(fam.density(), crate::rational::ratio(1, 2));
    }

    #[test]
    fn mask_order_is_integer_order() {
        let s = UniverseShape::single(1, 70).unwrap();
        let lo = SubsetMask::from_indices(&s, [63]).unwrap();
        let hi = SubsetMask::from_indices(&s, [64]).unwrap();
        assert!(lo < hi);
        assert!(SubsetMask::empty(&s) < lo);
    }
}
