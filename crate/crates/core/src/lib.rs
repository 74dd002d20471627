//! Exact desk-scale laboratory for covering and double-counting arguments
//! on set-difference density problems.
//!
//! The crate is organized around the objects the arguments manipulate:
//!
//! - [`universe`]: ground sets `[n]^{d_1} ∪ … ∪ [n]^{d_s}`, bitmask subsets,
//!   explicit families and the window relabeling maps.
//! - [`patterns`]: power/polynomial/family/interval/clique difference
//!   witnesses and pair search.
//! - [`covering`]: windows, hit counts `N(A)`, exact moments, the
//!   dense-cell scan and the cyclic-interval demo.
//! - [`fpforms`]: linear forms over `F_p`, their induced forms, exact
//!   distributions and zero-sum block partitions.
//! - [`increment`]: the density-increment step and its iteration.
//! - [`reductions`]: symmetric lifts, multiplexing, the interval-partition
//!   bijection to hypergraph bundles and the clique–square map.
//! - [`extremal`]: brute-force maximum pattern-free families.
//! - [`report`] and [`cli`]: JSON report envelopes and the command line
//!   front end.
//!
//! Every identity the arguments state as an equality is checked with exact
//! rationals ([`rational::Rational`]).

pub mod cli;
pub mod covering;
pub mod extremal;
pub mod fpforms;
pub mod increment;
pub mod patterns;
pub mod rational;
pub mod reductions;
pub mod report;
pub mod universe;

pub use rational::Rational;
pub use universe::{Family, OrderedWindow, Point, SubsetMask, UniverseShape};
