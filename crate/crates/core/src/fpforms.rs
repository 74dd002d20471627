//! Linear forms over `F_p`, their degree-`d` lifts and block partitions.
//!
//! `φ(x) = a_1 x_1 + … + a_n x_n` is evaluated on indicator vectors of
//! subsets of `[n]`; the induced form `Φ` gives the cell `(i_1, …, i_d)` the
//! weight `a_{i_1} ⋯ a_{i_d}`. Both are sums of independent per-cell
//! contributions under a uniform random subset, so exact distributions come
//! from an `F_p` convolution over the cells rather than enumeration.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::rational::{self, Rational};
use crate::universe::{Family, SubsetMask, UniverseError, UniverseShape, ENUMERATION_BUDGET};

#[derive(Debug, Error)]
pub enum FormError {
    #[error(transparent)]
    Universe(#[from] UniverseError),
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("form has {found} coefficients but the universe has n = {expected}")]
    Length { expected: usize, found: usize },
    #[error("exact enumeration over {cells} cells exceeds budget {budget}")]
    Budget { cells: usize, budget: usize },
    #[error("universe too small: {0}")]
    UniverseTooSmall(String),
    #[error("background meets the window blocks")]
    NotDisjoint,
    #[error("invalid block partition: {0}")]
    InvalidPartition(String),
    #[error("form file line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = FormError> = std::result::Result<T, E>;

pub const DEFAULT_SEED: u64 = 0x5e7d_1ff0;

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| !p.is_multiple_of(k))
}

fn pow_mod(base: u32, exp: u32, p: u32) -> u32 {
    (0..exp).fold(1u64, |acc, _| acc * base as u64 % p as u64) as u32
}

/// `φ(x) = a_1 x_1 + … + a_n x_n` over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    p: u32,
    coeffs: Vec<u32>,
}

impl LinearForm {
    /// Coefficients are reduced mod `p`.
    pub fn new(p: u32, coeffs: impl IntoIterator<Item = u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(FormError::NotPrime(p));
        }
        Ok(Self { p, coeffs: coeffs.into_iter().map(|a| (a % p as u64) as u32).collect() })
    }

    pub fn zero(p: u32, n: u32) -> Result<Self> {
        Self::new(p, std::iter::repeat_n(0, n as usize))
    }

    /// `e_z`: coefficient 1 at `z ∈ [n]`.
    pub fn unit(p: u32, n: u32, z: u32) -> Result<Self> {
        Self::new(p, (1..=n).map(|i| u64::from(i == z)))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.coeffs.len() as u32
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// `a_z` for `z ∈ [n]`.
    pub fn coeff(&self, z: u32) -> u32 {
        self.coeffs[z as usize - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&a| a == 0)
    }

    /// `Z(φ) = {z : a_z ≠ 0}`, ascending.
    pub fn support(&self) -> Vec<u32> {
        (1..=self.n()).filter(|&z| self.coeff(z) != 0).collect()
    }

    /// `φ(1_S)` for `S ⊂ [n]` given by its elements.
    pub fn eval(&self, set: &[u32]) -> u32 {
        (set.iter().map(|&z| self.coeff(z) as u64).sum::<u64>() % self.p as u64) as u32
    }

    pub fn induced(&self, d: u32) -> InducedForm {
        InducedForm { base: self.clone(), d }
    }

    pub fn to_text(&self) -> String {
        let coeffs: Vec<String> = self.coeffs.iter().map(u32::to_string).collect();
        format!("p={}\n{}\n", self.p, coeffs.join(" "))
    }

    /// `p=<p>` header, then whitespace-separated coefficients.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (_, header) = lines.next().ok_or(FormError::Parse { line: 1, msg: "missing p=<p> header".into() })?;
        let p: u32 = header
            .trim()
            .strip_prefix("p=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or(FormError::Parse { line: 1, msg: format!("bad header {header:?}") })?;
        let mut coeffs = Vec::new();
        for (idx, line) in lines {
            for tok in line.split_whitespace() {
                coeffs.push(tok.parse::<u64>().map_err(|_| FormError::Parse {
                    line: idx + 1,
                    msg: format!("bad coefficient {tok:?}"),
                })?);
            }
        }
        Self::new(p, coeffs)
    }
}

pub fn phi_eval(form: &LinearForm, set: &[u32]) -> u32 {
    form.eval(set)
}

/// `Φ(x) = Σ a_{i_1} ⋯ a_{i_d} x_{(i_1, …, i_d)}`; carries no coefficients of
/// its own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedForm {
    base: LinearForm,
    d: u32,
}

impl InducedForm {
    pub fn base(&self) -> &LinearForm {
        &self.base
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn shape(&self) -> Result<UniverseShape> {
        Ok(UniverseShape::single(self.d, self.base.n())?)
    }

    /// Row-major weights `a_{i_1} ⋯ a_{i_d}` of all cells of `[n]^d`.
    pub fn cell_weights(&self) -> Result<Vec<u32>> {
        let shape = self.shape()?;
        Ok(shape
            .points()
            .map(|pt| pt.coords.iter().fold(1u64, |acc, &i| acc * self.base.coeff(i) as u64 % self.base.p as u64) as u32)
            .collect())
    }

    pub fn eval(&self, a: &SubsetMask) -> Result<u32> {
        let shape = self.shape()?;
        if a.shape() != &shape {
            return Err(UniverseError::ShapeMismatch { expected: shape.header(), found: a.shape().header() }.into());
        }
        let p = self.base.p as u64;
        let mut acc = 0u64;
        for pt in a.points() {
            acc = (acc + pt.coords.iter().fold(1u64, |w, &i| w * self.base.coeff(i) as u64 % p)) % p;
        }
        Ok(acc as u32)
    }

    /// `|Z(Φ)| = |Z(φ)|^d`.
    pub fn support_size(&self) -> usize {
        self.base.support().len().pow(self.d)
    }
}

pub fn induced_eval(form: &InducedForm, a: &SubsetMask) -> Result<u32> {
    form.eval(a)
}

/// Anything whose value on a uniform random subset is a sum of independent
/// per-cell contributions.
pub trait CellForm {
    fn modulus(&self) -> u32;
    fn weights(&self) -> Result<Vec<u32>>;
    fn support_size(&self) -> usize;
}

impl CellForm for LinearForm {
    fn modulus(&self) -> u32 {
        self.p
    }
    fn weights(&self) -> Result<Vec<u32>> {
        Ok(self.coeffs.clone())
    }
    fn support_size(&self) -> usize {
        self.support().len()
    }
}

impl CellForm for InducedForm {
    fn modulus(&self) -> u32 {
        self.base.p
    }
    fn weights(&self) -> Result<Vec<u32>> {
        self.cell_weights()
    }
    fn support_size(&self) -> usize {
        InducedForm::support_size(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistributionMode {
    /// Exact, by convolving per-cell pushforwards.
    Convolution,
    /// Exact, by enumerating every subset (bounded by a cell budget).
    Enumeration { budget: usize },
    /// Empirical frequencies of seeded uniform draws.
    Sampled { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct DistributionTable {
    pub p: u32,
    pub mode: DistributionMode,
    /// `masses[y] = P(form(A) = y)`.
    #[serde(with = "rational::vec_as_string")]
    pub masses: Vec<Rational>,
    pub support_size: usize,
    /// `p (1 − p^{-2})^{|Z|}`.
    #[serde(with = "rational::as_string")]
    pub bound: Rational,
    /// `max_y |masses[y] − 1/p|`.
    #[serde(with = "rational::as_string")]
    pub max_deviation: Rational,
    pub within_bound: bool,
}

pub fn uniformity_bound(p: u32, support_size: usize) -> Rational {
    let p_q = rational::int(p);
    let base = Rational::one() - (&p_q * &p_q).recip();
    let mut acc = p_q;
    for _ in 0..support_size {
        acc *= &base;
    }
    acc
}

/// Exact `F_p` counts of `Σ_{cells ∈ A} w(cell)` over all subsets; the
/// denominator is `2^{weights.len()}`.
pub fn convolve_counts(p: u32, weights: &[u32]) -> Vec<BigInt> {
    let p = p as usize;
    let mut counts = vec![BigInt::zero(); p];
    counts[0] = BigInt::one();
    for &w in weights {
        let w = w as usize % p;
        let prev = counts.clone();
        for y in 0..p {
            counts[y] += &prev[(y + p - w) % p];
        }
    }
    counts
}

fn masses_from_counts(counts: &[BigInt], total: &BigInt) -> Vec<Rational> {
    counts.iter().map(|c| Rational::new(c.clone(), total.clone())).collect()
}

pub fn distribution(form: &impl CellForm, mode: DistributionMode) -> Result<DistributionTable> {
    let p = form.modulus();
    let weights = form.weights()?;
    let masses = match mode {
        DistributionMode::Convolution => masses_from_counts(&convolve_counts(p, &weights), &rational::pow2(weights.len())),
        DistributionMode::Enumeration { budget } => {
            if weights.len() > budget.min(63) {
                return Err(FormError::Budget { cells: weights.len(), budget });
            }
            let mut counts = vec![0u64; p as usize];
            for bits in 0..(1u64 << weights.len()) {
                let y = (0..weights.len())
                    .filter(|i| bits >> i & 1 == 1)
                    .fold(0u64, |acc, i| (acc + weights[i] as u64) % p as u64);
                counts[y as usize] += 1;
            }
            let counts: Vec<BigInt> = counts.into_iter().map(BigInt::from).collect();
            masses_from_counts(&counts, &rational::pow2(weights.len()))
        }
        DistributionMode::Sampled { samples, seed } => {
            if samples == 0 {
                return Err(FormError::UniverseTooSmall("sampled mode needs at least one draw".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut counts = vec![0u64; p as usize];
            for _ in 0..samples {
                let y = weights.iter().fold(0u64, |acc, &w| if rng.gen::<bool>() { (acc + w as u64) % p as u64 } else { acc });
                counts[y as usize] += 1;
            }
            counts.into_iter().map(|c| rational::ratio(c, samples)).collect()
        }
    };
    let support_size = form.support_size();
    let bound = uniformity_bound(p, support_size);
    let uniform = rational::ratio(1, p);
    let max_deviation = masses.iter().map(|m| rational::abs_diff(m, &uniform)).max().unwrap_or_default();
    Ok(DistributionTable { p, mode, within_bound: max_deviation <= bound, masses, support_size, bound, max_deviation })
}

/// Exact `P_{A ∈ fam}(Φ(A) = y)` for every `y`.
pub fn family_distribution(form: &InducedForm, fam: &Family) -> Result<Vec<Rational>> {
    if fam.is_empty() {
        return Err(FormError::UniverseTooSmall("empty family has no distribution".into()));
    }
    let mut counts = vec![0usize; form.base.p as usize];
    for a in fam {
        counts[form.eval(a)? as usize] += 1;
    }
    Ok(counts.into_iter().map(|c| rational::ratio(c, fam.len())).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionCase {
    /// `|Z(φ)| ≤ n/2`: singleton blocks outside the support.
    SmallSupport,
    /// Size-`p` blocks on which `φ` sums to zero.
    LargeSupport,
}

/// Blocks `X_{i,j}` (`i ∈ [t]`, `j ∈ [m]`) of common size `σ` and remainder
/// `R`; all elements are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockPartition {
    pub n: u32,
    pub p: u32,
    pub m: usize,
    pub sigma: usize,
    pub case: PartitionCase,
    pub blocks: Vec<Vec<Vec<u32>>>,
    pub remainder: Vec<u32>,
}

/// `⌈n/(pm)⌉ − 2`, the guaranteed number of rows (may be ≤ 0).
pub fn row_target(n: u32, p: u32, m: usize) -> i64 {
    let pm = p as i64 * m as i64;
    (n as i64 + pm - 1) / pm - 2
}

impl BlockPartition {
    pub fn t(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, i: usize, j: usize) -> &[u32] {
        &self.blocks[i][j]
    }

    /// `X_i = X_{i,1} ∪ … ∪ X_{i,m}`, ascending.
    pub fn row(&self, i: usize) -> Vec<u32> {
        let mut xs: Vec<u32> = self.blocks[i].iter().flatten().copied().collect();
        xs.sort_unstable();
        xs
    }

    /// Mask of `X_i^d` in `shape`.
    pub fn row_power_mask(&self, i: usize, shape: &UniverseShape) -> SubsetMask {
        shape.power_mask(&self.row(i))
    }

    /// Checks the partition contract against `form`.
    pub fn verify(&self, form: &LinearForm) -> Result<()> {
        let bad = |msg: String| Err(FormError::InvalidPartition(msg));
        let mut seen = vec![false; self.n as usize + 1];
        let all = self.blocks.iter().flatten().flatten().chain(&self.remainder);
        for &z in all {
            if z == 0 || z > self.n || seen[z as usize] {
                return bad(format!("element {z} out of range or repeated"));
            }
            seen[z as usize] = true;
        }
        if seen[1..].iter().any(|s| !s) {
            return bad("blocks and remainder do not cover [n]".into());
        }
        for (i, row) in self.blocks.iter().enumerate() {
            if row.len() != self.m {
                return bad(format!("row {} has {} blocks", i + 1, row.len()));
            }
            for (j, b) in row.iter().enumerate() {
                if b.len() != self.sigma {
                    return bad(format!("block ({}, {}) has size {}", i + 1, j + 1, b.len()));
                }
                if form.eval(b) != 0 {
                    return bad(format!("φ does not vanish on block ({}, {})", i + 1, j + 1));
                }
            }
        }
        if (self.t() as i64) < row_target(self.n, self.p, self.m) {
            return bad(format!("t = {} below ⌈n/(pm)⌉ − 2", self.t()));
        }
        Ok(())
    }

    /// `h(B) = U ∪ ⋃_{(j_1, …, j_d) ∈ B} X_{i,j_1} × ⋯ × X_{i,j_d}` for `B`
    /// over the `[m]^d` universe.
    pub fn cell_member(&self, i: usize, u: &SubsetMask, b: &SubsetMask) -> Result<SubsetMask> {
        let mut out = u.clone();
        let shape = u.shape().clone();
        for pt in b.points() {
            let sets: Vec<&[u32]> = pt.coords.iter().map(|&j| self.block(i, j as usize - 1)).collect();
            for cell in product(&sets) {
                out.insert(shape.index_of(&crate::universe::Point::new(0, cell))?);
            }
        }
        Ok(out)
    }

    /// Inverse of [`cell_member`](Self::cell_member): `Some((U, B))` when `A`
    /// is block-constant on `X_i^d`.
    pub fn cell_of(&self, i: usize, a: &SubsetMask, small: &UniverseShape) -> Result<Option<(SubsetMask, SubsetMask)>> {
        let shape = a.shape().clone();
        let u = a.difference(&self.row_power_mask(i, &shape));
        let mut b = SubsetMask::empty(small);
        for pt in small.points() {
            let sets: Vec<&[u32]> = pt.coords.iter().map(|&j| self.block(i, j as usize - 1)).collect();
            let mut inside = 0usize;
            let mut total = 0usize;
            for cell in product(&sets) {
                total += 1;
                if a.contains(shape.index_of(&crate::universe::Point::new(0, cell))?) {
                    inside += 1;
                }
            }
            if inside == total {
                b.insert(small.index_of(&pt)?);
            } else if inside != 0 {
                return Ok(None);
            }
        }
        Ok(Some((u, b)))
    }
}

fn product(sets: &[&[u32]]) -> Vec<Vec<u32>> {
    sets.iter().fold(vec![Vec::new()], |acc, set| {
        acc.iter()
            .flat_map(|prefix| {
                set.iter().map(move |&x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect()
    })
}

/// Lexicographically first `k`-subset (by position) of `pool` on which
/// `form` vanishes.
fn first_zero_sum(form: &LinearForm, pool: &[u32], k: usize) -> Option<Vec<usize>> {
    fn go(form: &LinearForm, pool: &[u32], k: usize, start: usize, acc: u32, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == k {
            return acc == 0;
        }
        for i in start..pool.len() {
            if pool.len() - i < k - chosen.len() {
                break;
            }
            chosen.push(i);
            if go(form, pool, k, i + 1, (acc + form.coeff(pool[i])) % form.p, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::with_capacity(k);
    go(form, pool, k, 0, 0, &mut chosen).then_some(chosen)
}

/// Builds the block partition used to make `Φ` constant on block-constant
/// cells.
///
/// Small support: singletons from `[n] ∖ Z(φ)` in ascending order, `m` per
/// row, everything else in `R`. Large support: size-`p` blocks drawn from
/// equal-coefficient classes (ascending coefficient, zero first; ascending
/// elements), then from lexicographically first zero-sum `p`-subsets of the
/// leftovers; extraction stops once `max(1, ⌈n/(pm)⌉ − 2)` rows exist so the
/// remaining support stays in `R`.
pub fn build_block_partition(form: &LinearForm, m: usize) -> Result<BlockPartition> {
    let n = form.n();
    let p = form.p;
    if m == 0 {
        return Err(FormError::UniverseTooSmall("m must be positive".into()));
    }
    let support = form.support();
    let (case, sigma, blocks, used): (_, _, Vec<Vec<u32>>, _) = if 2 * support.len() <= n as usize {
        let free: Vec<u32> = (1..=n).filter(|&z| form.coeff(z) == 0).collect();
        let rows = free.len() / m;
        let blocks = free[..rows * m].iter().map(|&z| vec![z]).collect();
        (PartitionCase::SmallSupport, 1, blocks, rows)
    } else {
        let target = row_target(n, p, m).max(1) as usize;
        let wanted = target * m;
        let mut blocks = Vec::new();
        let mut leftovers = Vec::new();
        for c in 0..p {
            let class: Vec<u32> = (1..=n).filter(|&z| form.coeff(z) == c).collect();
            let mut chunks = class.chunks_exact(p as usize);
            for chunk in chunks.by_ref() {
                if blocks.len() < wanted {
                    blocks.push(chunk.to_vec());
                } else {
                    leftovers.extend_from_slice(chunk);
                }
            }
            leftovers.extend_from_slice(chunks.remainder());
        }
        leftovers.sort_unstable();
        while blocks.len() < wanted {
            let Some(pick) = first_zero_sum(form, &leftovers, p as usize) else { break };
            blocks.push(pick.iter().map(|&i| leftovers[i]).collect());
            for &i in pick.iter().rev() {
                leftovers.remove(i);
            }
        }
        let rows = blocks.len() / m;
        (PartitionCase::LargeSupport, p as usize, blocks, rows)
    };
    // With a nonpositive row target an empty partition still meets the
    // contract; it is only an error when rows were owed.
    if used == 0 && row_target(n, p, m) > 0 {
        return Err(FormError::UniverseTooSmall(format!("no row of {m} blocks fits in n = {n}")));
    }
    let blocks: Vec<Vec<Vec<u32>>> = blocks.chunks_exact(m).take(used).map(|row| row.to_vec()).collect();
    let mut in_block = vec![false; n as usize + 1];
    for &z in blocks.iter().flatten().flatten() {
        in_block[z as usize] = true;
    }
    let remainder = (1..=n).filter(|&z| !in_block[z as usize]).collect();
    let partition = BlockPartition { n, p, m, sigma, case, blocks, remainder };
    partition.verify(form)?;
    Ok(partition)
}

/// `Φ(X_i, U)`, the common value of `Φ` on every member of `C(X_i, U)`.
pub fn cell_form_value(form: &InducedForm, partition: &BlockPartition, i: usize, u: &SubsetMask) -> Result<u32> {
    let shape = form.shape()?;
    if !u.is_disjoint(&partition.row_power_mask(i, &shape)) {
        return Err(FormError::NotDisjoint);
    }
    form.eval(u)
}

/// Per-`y` gaps between `P_{(i,U)}(Φ(X_i,U) = y)` over uniform `i` and
/// uniform background `U`, and the global `P_A(Φ(A) = y)`.
#[derive(Debug, Clone, Serialize)]
pub struct CellGapReport {
    #[serde(with = "rational::vec_as_string")]
    pub cell_masses: Vec<Rational>,
    #[serde(with = "rational::vec_as_string")]
    pub global_masses: Vec<Rational>,
    #[serde(with = "rational::vec_as_string")]
    pub gaps: Vec<Rational>,
    #[serde(with = "rational::as_string")]
    pub max_gap: Rational,
}

pub fn cell_value_gap(form: &InducedForm, partition: &BlockPartition) -> Result<CellGapReport> {
    let p = form.base.p;
    let shape = form.shape()?;
    let weights = form.cell_weights()?;
    let global = masses_from_counts(&convolve_counts(p, &weights), &rational::pow2(weights.len()));
    let mut cell = vec![Rational::zero(); p as usize];
    for i in 0..partition.t() {
        let blocked = partition.row_power_mask(i, &shape);
        let outside: Vec<u32> = (0..weights.len()).filter(|&c| !blocked.contains(c)).map(|c| weights[c]).collect();
        let masses = masses_from_counts(&convolve_counts(p, &outside), &rational::pow2(outside.len()));
        for (acc, m) in cell.iter_mut().zip(masses) {
            *acc += m;
        }
    }
    let t = rational::int(partition.t());
    let cell: Vec<Rational> = cell.into_iter().map(|m| m / &t).collect();
    let gaps: Vec<Rational> = cell.iter().zip(&global).map(|(a, b)| rational::abs_diff(a, b)).collect();
    let max_gap = gaps.iter().max().cloned().unwrap_or_default();
    Ok(CellGapReport { cell_masses: cell, global_masses: global, gaps, max_gap })
}

/// `φ(S)^d mod p`.
pub fn power_of_value(form: &LinearForm, set: &[u32], d: u32) -> u32 {
    pow_mod(form.eval(set), d, form.p)
}

/// The set of `d`-th powers in `F_p`.
pub fn dth_powers(p: u32, d: u32) -> Vec<u32> {
    let mut v: Vec<u32> = (0..p).map(|x| pow_mod(x, d, p)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Default sampled mode.
pub fn sampled(samples: u64) -> DistributionMode {
    DistributionMode::Sampled { samples, seed: DEFAULT_SEED }
}

pub fn enumeration() -> DistributionMode {
    DistributionMode::Enumeration { budget: ENUMERATION_BUDGET }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn form(p: u32, c: &[u64]) -> LinearForm {
        LinearForm::new(p, c.iter().copied()).unwrap()
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_eval(&form(2, &[1, 1, 1]), &[1, 3]), 0);
        assert_eq!(phi_eval(&form(2, &[1, 1, 1]), &[]), 0);
        assert_eq!(phi_eval(&form(3, &[2, 1]), &[1, 2]), 0);
        assert!(matches!(LinearForm::new(4, [1]), Err(FormError::NotPrime(4))));
    }

    #[test]
    fn induced_examples() {
        let big = form(2, &[1, 1]).induced(2);
        let shape = big.shape().unwrap();
        let a = SubsetMask::from_coords(&shape, &[&[1, 2]]).unwrap();
        assert_eq!(big.eval(&a).unwrap(), 1);
        assert_eq!(big.eval(&SubsetMask::empty(&shape)).unwrap(), 0);
        let phi = form(3, &[1, 0]);
        let s2 = phi.induced(2).shape().unwrap().power_mask(&[1]);
        assert_eq!(phi.induced(2).eval(&s2).unwrap(), power_of_value(&phi, &[1], 2));
        assert_eq!(power_of_value(&phi, &[1], 2), 1);
    }

    #[test]
    fn support_examples() {
        assert_eq!(form(3, &[1, 0, 2]).support(), vec![1, 3]);
        assert!(LinearForm::zero(3, 4).unwrap().support().is_empty());
        assert_eq!(form(2, &[1; 5]).support(), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn distribution_examples() {
        let t = distribution(&form(2, &[1, 1, 1, 0]), DistributionMode::Convolution).unwrap();
        assert_eq!(t.masses, vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(t.bound, ratio(27, 32));
        assert!(t.within_bound);

        let z = distribution(&LinearForm::zero(3, 3).unwrap(), DistributionMode::Convolution).unwrap();
        assert_eq!(z.masses[0], ratio(1, 1));
        assert_eq!(z.max_deviation, ratio(2, 3));
        assert_eq!(z.bound, ratio(3, 1));

        let big = form(2, &[1, 1]).induced(2);
        let e = distribution(&big, enumeration()).unwrap();
        let c = distribution(&big, DistributionMode::Convolution).unwrap();
        assert_eq!(e.masses, c.masses);
        assert_eq!(e.bound, ratio(2, 1) * ratio(81, 256));
        assert!(e.within_bound);
    }

    #[test]
    fn sampled_is_reproducible() {
        let f = form(3, &[1, 2, 0, 1]);
        let a = distribution(&f, sampled(500)).unwrap();
        let b = distribution(&f, sampled(500)).unwrap();
        assert_eq!(a.masses, b.masses);
        assert_eq!(a.masses.iter().sum::<Rational>(), ratio(1, 1));
    }

    #[test]
    fn small_support_partition() {
        let f = form(2, &[1, 1, 0, 0, 0, 0, 0, 0, 0, 0]);
        let bp = build_block_partition(&f, 2).unwrap();
        assert_eq!(bp.sigma, 1);
        assert_eq!(bp.t(), 4);
        assert_eq!(bp.blocks[0], vec![vec![3], vec![4]]);
        assert_eq!(bp.blocks[3], vec![vec![9], vec![10]]);
        assert_eq!(bp.remainder, vec![1, 2]);
    }

    #[test]
    fn large_support_partition() {
        let f = form(2, &[1; 16]);
        let bp = build_block_partition(&f, 2).unwrap();
        assert_eq!(bp.case, PartitionCase::LargeSupport);
        assert_eq!(bp.sigma, 2);
        assert!(bp.t() as i64 >= row_target(16, 2, 2));
        for b in bp.blocks.iter().flatten() {
            assert_eq!(f.eval(b), 0);
        }
    }

    #[test]
    fn zero_sum_fallback_is_used() {
        // Coefficient classes {1}, {2}, {3}, {4} of size 1 at p = 5 force the
        // zero-sum search.
        let f = form(5, &[1, 2, 3, 4, 1, 2, 3, 4, 1, 4]);
        let bp = build_block_partition(&f, 1).unwrap();
        bp.verify(&f).unwrap();
    }

    #[test]
    fn too_small_universe_gives_no_rows() {
        let bp = build_block_partition(&form(2, &[1, 1]), 2).unwrap();
        assert_eq!(bp.t(), 0);
        assert_eq!(bp.remainder, vec![1, 2]);
        assert!(matches!(build_block_partition(&form(2, &[1, 1]), 0), Err(FormError::UniverseTooSmall(_))));
    }

    #[test]
    fn cell_value_is_constant() {
        let f = form(2, &[1, 0, 0, 0, 0, 1]);
        let bp = build_block_partition(&f, 2).unwrap();
        let big = f.induced(2);
        let shape = big.shape().unwrap();
        let small = UniverseShape::single(2, 2).unwrap();
        let u = SubsetMask::from_coords(&shape, &[&[1, 1], &[6, 2]]).unwrap();
        let expected = cell_form_value(&big, &bp, 0, &u).unwrap();
        assert_eq!(expected, big.eval(&u).unwrap());
        for b in small.all_subsets(24).unwrap() {
            let a = bp.cell_member(0, &u, &b).unwrap();
            assert_eq!(big.eval(&a).unwrap(), expected);
            assert_eq!(bp.cell_of(0, &a, &small).unwrap(), Some((u.clone(), b)));
        }
        assert_eq!(cell_form_value(&big, &bp, 0, &SubsetMask::empty(&shape)).unwrap(), 0);
        let bad = SubsetMask::from_coords(&shape, &[&[2, 3]]).unwrap();
        assert!(matches!(cell_form_value(&big, &bp, 0, &bad), Err(FormError::NotDisjoint)));
    }

    #[test]
    fn cell_gap_is_reported() {
        let f = form(2, &[1, 0, 0, 0, 0, 1]);
        let bp = build_block_partition(&f, 2).unwrap();
        let rep = cell_value_gap(&f.induced(2), &bp).unwrap();
        assert_eq!(rep.cell_masses.iter().sum::<Rational>(), ratio(1, 1));
        assert!(rep.max_gap <= ratio(1, 1));
    }

    #[test]
    fn form_file_roundtrip() {
        let f = form(3, &[1, 0, 2]);
        assert_eq!(LinearForm::from_text(&f.to_text()).unwrap(), f);
        assert!(LinearForm::from_text("q=3\n1").is_err());
    }

    #[test]
    fn powers_in_f3() {
        assert_eq!(dth_powers(3, 2), vec![0, 1]);
        assert_eq!(dth_powers(2, 2), vec![0, 1]);
    }
}
