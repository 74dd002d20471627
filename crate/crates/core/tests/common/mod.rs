//! Brute-force oracles shared by the integration tests.
//!
//! Everything here works on raw `u64` cell masks with its own index
//! arithmetic (row-major, first coordinate most significant, parts
//! concatenated) so that it does not lean on the library's maps.

#![allow(dead_code)]

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use setdiff::{Family, SubsetMask, UniverseShape};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone)]
pub struct Grid {
    pub degrees: Vec<u32>,
    pub n: u32,
}

impl Grid {
    pub fn new(degrees: &[u32], n: u32) -> Self {
        Self { degrees: degrees.to_vec(), n }
    }

    pub fn part_len(&self, part: usize) -> usize {
        (self.n as usize).pow(self.degrees[part])
    }

    pub fn cells(&self) -> usize {
        (0..self.degrees.len()).map(|j| self.part_len(j)).sum()
    }

    pub fn index(&self, part: usize, coords: &[u32]) -> usize {
        let offset: usize = (0..part).map(|j| self.part_len(j)).sum();
        offset + coords.iter().fold(0usize, |acc, &c| acc * self.n as usize + (c as usize - 1))
    }

    /// Every `(part, coords)` in index order.
    pub fn points(&self) -> Vec<(usize, Vec<u32>)> {
        let mut out = Vec::new();
        for (part, &d) in self.degrees.iter().enumerate() {
            let mut coords = vec![1u32; d as usize];
            loop {
                out.push((part, coords.clone()));
                let mut k = d as usize;
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    if coords[k] < self.n {
                        coords[k] += 1;
                        for c in coords.iter_mut().skip(k + 1) {
                            *c = 1;
                        }
                        break;
                    }
                    if k == 0 {
                        coords.clear();
                        break;
                    }
                }
                if coords.is_empty() || d == 0 {
                    break;
                }
            }
        }
        out
    }

    fn bits_where(&self, keep: impl Fn(&[u32]) -> bool) -> u64 {
        self.points()
            .iter()
            .filter(|(_, c)| keep(c))
            .fold(0u64, |acc, (part, c)| acc | 1 << self.index(*part, c))
    }

    /// `S^{d_1} ∪ … ∪ S^{d_s}` for `S` given as a bit set over `[n]`.
    pub fn power(&self, s: u64) -> u64 {
        self.bits_where(|c| c.iter().all(|&x| s >> (x - 1) & 1 == 1))
    }

    /// `K(S, d_1) ∪ …` on strictly increasing tuples.
    pub fn clique(&self, s: u64) -> u64 {
        self.bits_where(|c| c.windows(2).all(|w| w[0] < w[1]) && c.iter().all(|&x| s >> (x - 1) & 1 == 1))
    }

    /// Cells of the window `X^{d_1} ∪ …` paired with their relabeled index in
    /// the `[|X|]`-shape grid.
    pub fn window_map(&self, window: &[u32]) -> Vec<(usize, usize)> {
        let small = Grid::new(&self.degrees, window.len() as u32);
        let rank = |x: u32| window.iter().position(|&w| w == x).map(|r| r as u32 + 1);
        self.points()
            .into_iter()
            .filter_map(|(part, c)| {
                let relabeled: Option<Vec<u32>> = c.iter().map(|&x| rank(x)).collect();
                relabeled.map(|r| (self.index(part, &c), small.index(part, &r)))
            })
            .collect()
    }

    pub fn restrict(&self, a: u64, window: &[u32]) -> u64 {
        self.window_map(window).into_iter().fold(0u64, |acc, (big, small)| acc | ((a >> big) & 1) << small)
    }

    pub fn plant(&self, b: u64, window: &[u32]) -> u64 {
        self.window_map(window).into_iter().fold(0u64, |acc, (big, small)| acc | ((b >> small) & 1) << big)
    }

    pub fn shape(&self) -> UniverseShape {
        UniverseShape::new(self.degrees.clone(), self.n).unwrap()
    }

    pub fn all_sets(&self) -> std::ops::Range<u64> {
        0..1u64 << self.cells()
    }
}

pub fn submasks(mask: u64) -> Vec<u64> {
    let mut out = vec![0u64];
    let mut sub = mask;
    while sub != 0 {
        out.push(sub);
        sub = (sub - 1) & mask;
    }
    out
}

pub fn elements(bits: u64, n: u32) -> Vec<u32> {
    (1..=n).filter(|&x| bits >> (x - 1) & 1 == 1).collect()
}

pub fn bits_of(set: &[u32]) -> u64 {
    set.iter().fold(0u64, |acc, &x| acc | 1 << (x - 1))
}

/// Some nonempty `S` with `A ⊊ B`, `B ∖ A = S^{d_1} ∪ …`.
pub fn power_oracle(g: &Grid, a: u64, b: u64) -> Option<u64> {
    if a == b || a & !b != 0 {
        return None;
    }
    (1u64..1 << g.n).find(|&s| b & !a == g.power(s))
}

/// `U ⊂ A ∩ B` and `S_1, S_2` with `A ∖ U = S_1^…`, `B ∖ U = S_2^…`.
pub fn distance2_oracle(g: &Grid, a: u64, b: u64) -> bool {
    submasks(a & b).into_iter().any(|u| {
        (0u64..1 << g.n).any(|s1| a & !u == g.power(s1)) && (0u64..1 << g.n).any(|s2| b & !u == g.power(s2))
    })
}

pub fn interval_bits(start: u32, len: u32, n: u32) -> u64 {
    (0..len).fold(0u64, |acc, k| acc | 1 << ((start - 1 + k) % n))
}

pub fn interval_oracle(n: u32, a: u64, b: u64) -> bool {
    (1..=n).any(|start| (1..=n).any(|len| a ^ b == interval_bits(start, len, n)))
}

pub fn clique_oracle(g: &Grid, a: u64, b: u64) -> bool {
    if a == b || a & !b != 0 {
        return false;
    }
    (1u64..1 << g.n).any(|s| g.clique(s) != 0 && b & !a == g.clique(s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Same,
    Disjoint,
    Nested,
}

/// Family-difference oracle: every `U ⊂ A ∩ B`, every admissible window
/// pair, and a lookup of which member (if any) plants to `A ∖ U`, `B ∖ U`.
pub fn family_oracle(g: &Grid, a: u64, b: u64, fam: &[u64], m: u32, mode: Mode) -> bool {
    if a == b {
        return false;
    }
    let windows: Vec<Vec<u32>> = (1..=g.n + 1 - m).map(|s| (s..s + m).collect()).collect();
    let planted: Vec<HashMap<u64, u64>> =
        windows.iter().map(|w| fam.iter().map(|&f| (g.plant(f, w), f)).collect()).collect();
    let disjoint = |x: &[u32], y: &[u32]| x.iter().all(|e| !y.contains(e));
    for u in submasks(a & b) {
        let (x, y) = (a & !u, b & !u);
        for (i, w1) in windows.iter().enumerate() {
            let Some(&f1) = planted[i].get(&x) else { continue };
            for (j, w2) in windows.iter().enumerate() {
                let ok = match mode {
                    Mode::Same | Mode::Nested => i == j,
                    Mode::Disjoint => disjoint(w1, w2),
                };
                let Some(&f2) = planted[j].get(&y) else { continue };
                if ok && (mode != Mode::Nested || (f2 & !f1 == 0 && f2 != f1)) {
                    return true;
                }
            }
        }
    }
    false
}

pub fn is_chain(fam: &[u64]) -> bool {
    fam.iter().all(|&x| fam.iter().all(|&y| x & !y == 0 || y & !x == 0))
}

/// Random family with each subset kept with probability `keep`; never empty.
pub fn random_family(shape: &UniverseShape, rng: &mut ChaCha8Rng, keep: f64) -> Family {
    let cells = shape.cell_count();
    let mut members: Vec<SubsetMask> =
        (0..1u64 << cells).filter(|_| rng.gen_bool(keep)).map(|v| SubsetMask::from_u64(shape, v)).collect();
    if members.is_empty() {
        members.push(SubsetMask::from_u64(shape, rng.gen_range(0..1u64 << cells)));
    }
    Family::new(shape, members).unwrap()
}

pub fn mask_of(shape: &UniverseShape, bits: u64) -> SubsetMask {
    SubsetMask::from_u64(shape, bits)
}

pub fn bits(m: &SubsetMask) -> u64 {
    m.as_u64().unwrap()
}

/// Exact first and second moments of `N` over uniform `A`, marginalized to
/// the window cells: statistics `c1[x] = Σ_A #{r : piece_r(A) = x}` and
/// `c2[x][y] = Σ_A #{(r, r') : piece_r = x, piece_r' = y}` over the
/// `2^{cells}` window assignments.
pub struct MomentStats {
    pub assignments: u64,
    pub pieces: usize,
    pub c1: Vec<u64>,
    pub c2: Vec<Vec<u64>>,
}

pub fn moment_stats(g: &Grid, windows: &[Vec<u32>]) -> MomentStats {
    let maps: Vec<Vec<(usize, usize)>> = windows.iter().map(|w| g.window_map(w)).collect();
    let mut union: Vec<usize> = maps.iter().flatten().map(|&(big, _)| big).collect();
    union.sort_unstable();
    union.dedup();
    let pieces = 1usize << Grid::new(&g.degrees, windows[0].len() as u32).cells();
    let mut c1 = vec![0u64; pieces];
    let mut c2 = vec![vec![0u64; pieces]; pieces];
    let assignments = 1u64 << union.len();
    let mut vals = Vec::with_capacity(windows.len());
    for assign in 0..assignments {
        let a = union.iter().enumerate().fold(0u64, |acc, (k, &cell)| acc | ((assign >> k) & 1) << cell);
        vals.clear();
        for map in &maps {
            vals.push(map.iter().fold(0usize, |acc, &(big, small)| acc | (((a >> big) & 1) as usize) << small));
        }
        for &x in &vals {
            c1[x] += 1;
            for &y in &vals {
                c2[x][y] += 1;
            }
        }
    }
    MomentStats { assignments, pieces, c1, c2 }
}

pub fn form_from_code(p: u32, n: u32, mut code: u64) -> Vec<u64> {
    (0..n)
        .map(|_| {
            let c = code % p as u64;
            code /= p as u64;
            c
        })
        .collect()
}

/// `Φ(A) = Σ_{x ∈ A} Π a_{x_i}` with the oracle's own cell decoding.
pub fn oracle_phi(coeffs: &[u64], p: u64, d: u32, a: u64) -> u64 {
    let n = coeffs.len() as u64;
    let mut acc = 0;
    for idx in 0..n.pow(d) {
        if a >> idx & 1 == 0 {
            continue;
        }
        let mut rest = idx;
        let mut w = 1;
        for _ in 0..d {
            w = w * coeffs[(rest % n) as usize] % p;
            rest /= n;
        }
        acc = (acc + w) % p;
    }
    acc
}
