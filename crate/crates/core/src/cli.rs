//! Command line interface: argument definitions and dispatch.
//!
//! The binary only parses arguments, configures the thread pool and prints
//! what [`run`] returns, so everything here is callable from tests.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::covering::{interval_demo_average_density, interval_demo_cells, scan_for_dense_cell, verify_interval_demo};
use crate::extremal::{self, density_threshold_table, spec_by_name};
use crate::fpforms::{self, DistributionMode, LinearForm};
use crate::increment::{quasirandomize, FormSearch, LoopConfig, MSchedule, PoolKind};
use crate::rational::{self, Rational};
use crate::reductions::{self, HypergraphBundle, IntervalPartitionCatalog, LoopMode, SymmetricRegion};
use crate::report::{envelope, Failure};
use crate::universe::{embed_lower_degree, DegreeEmbedding, Family, UniverseShape, ENUMERATION_BUDGET};

#[derive(Debug, Parser)]
#[command(name = "setdiff", version, about = "Exact experiments on set-difference density problems")]
pub struct Cli {
    /// Worker threads (falls back to SETDIFF_THREADS, then all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Densest covering cell of a family over the canonical windows.
    Scan(ScanArgs),
    /// Distribution of a linear form (or its degree-d lift) over F_p.
    Phidist(PhidistArgs),
    /// Iterate the density increment until no form distinguishes the family.
    Quasirandomize(QuasiArgs),
    /// Largest pattern-free family by exact search.
    Extremal(ExtremalArgs),
    /// Check the covering-framework conditions on the cyclic interval demo.
    VerifyFramework(FrameworkArgs),
    /// Average cell density of a family in the cyclic interval demo.
    DemoInterval(DemoArgs),
    /// Apply one of the reductions to a family.
    #[command(subcommand)]
    Reduce(ReduceCommand),
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long)]
    pub m: u32,
    /// Allowed window restrictions; defaults to every subset of the [m]-shape.
    #[arg(long)]
    pub pattern_family: Option<PathBuf>,
    /// Requests the guarantee check; must be below the family density.
    #[arg(long)]
    pub epsilon: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Convolution,
    Enumeration,
    Sampled,
}

#[derive(Debug, Args)]
pub struct PhidistArgs {
    #[arg(long)]
    pub form: PathBuf,
    /// Degree of the induced form; 1 is the linear form itself.
    #[arg(long, default_value_t = 1)]
    pub d: u32,
    #[arg(long, value_enum, default_value = "convolution")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = fpforms::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = ENUMERATION_BUDGET)]
    pub budget: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PoolArg {
    Auto,
    Small,
    Exhaustive,
    File,
}

#[derive(Debug, Args)]
pub struct QuasiArgs {
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub eta: String,
    #[arg(long, value_enum, default_value = "auto")]
    pub pool: PoolArg,
    /// Extra forms for the pool (repeatable).
    #[arg(long)]
    pub forms: Vec<PathBuf>,
    #[arg(long, default_value_t = 16)]
    pub max_steps: usize,
    /// Fixed window count m; default is ⌊√(n/p)⌋ at every step.
    #[arg(long)]
    pub m: Option<usize>,
    /// Stop early once the family contains a pair of this pattern.
    #[arg(long)]
    pub pattern: Option<String>,
}

#[derive(Debug, Args)]
pub struct ExtremalArgs {
    /// Part degrees, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub d: Vec<u32>,
    #[arg(long)]
    pub n: u32,
    /// power | polynomial | interval | clique
    #[arg(long, default_value = "power")]
    pub pattern: String,
    /// Enumerate all maximal pattern-free families instead of branch-and-bound.
    #[arg(long)]
    pub exhaustive: bool,
    /// Tabulate n = 1..=N instead of a single record.
    #[arg(long)]
    pub table: bool,
    #[arg(long, default_value_t = extremal::DEFAULT_NODE_BUDGET)]
    pub node_budget: u64,
}

#[derive(Debug, Args)]
pub struct FrameworkArgs {
    #[arg(long)]
    pub n: u32,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(long)]
    pub n: u32,
    /// Family over [n]^1; omitted means the empty set alone.
    #[arg(long)]
    pub family: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ReduceCommand {
    /// Symmetric sets ↔ hypergraph bundles.
    Beta {
        /// Family of symmetric sets over [n]^d.
        #[arg(long, conflicts_with = "bundle", required_unless_present = "bundle")]
        family: Option<PathBuf>,
        /// Bundle file to map back.
        #[arg(long)]
        bundle: Option<PathBuf>,
    },
    /// s equal copies of every member.
    Multiplex {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        s: usize,
    },
    /// Lower-degree parts embedded along the repeated-first-coordinate map.
    Embed {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<u32>,
    },
    /// Graph family ↦ family over [n]^2 through the upper triangle.
    Clique {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        loopful: bool,
    },
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn read_family(path: &Path) -> Result<Family, Failure> {
    Family::from_text(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn read_form(path: &Path) -> Result<LinearForm, Failure> {
    LinearForm::from_text(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn parse_rational(name: &str, text: &str) -> Result<Rational, Failure> {
    rational::parse(text).ok_or_else(|| Failure::input(format!("--{name}: not a rational: {text:?}")))
}

fn hexes(f: &Family) -> Vec<String> {
    f.iter().map(|m| m.to_hex()).collect()
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

/// Runs one subcommand and returns the full report.
pub fn run(cli: &Cli) -> Result<Value, Failure> {
    match &cli.command {
        Command::Scan(a) => scan(a),
        Command::Phidist(a) => phidist(a),
        Command::Quasirandomize(a) => quasi(a),
        Command::Extremal(a) => extremal_cmd(a),
        Command::VerifyFramework(a) => {
            let rep = verify_interval_demo(a.n)?;
            Ok(envelope("verify-framework", json!({ "n": a.n }), &[], serde_json::to_value(rep).expect("serializable")))
        }
        Command::DemoInterval(a) => demo(a),
        Command::Reduce(r) => reduce(r),
    }
}

fn scan(a: &ScanArgs) -> Result<Value, Failure> {
    let fam = read_family(&a.family)?;
    let window_shape = fam.shape().with_n(a.m)?;
    let a_m = match &a.pattern_family {
        Some(p) => read_family(p)?,
        None => Family::full(&window_shape, ENUMERATION_BUDGET)?,
    };
    let epsilon = a.epsilon.as_deref().map(|e| parse_rational("epsilon", e)).transpose()?;
    if let Some(eps) = &epsilon {
        if *eps <= Rational::default() || *eps >= fam.density() {
            return Err(Failure::input(format!("need 0 < ε < δ, got ε = {eps}, δ = {}", fam.density())));
        }
    }
    let rep = scan_for_dense_cell(&fam, a.m, &a_m, epsilon.as_ref())?;
    let config = json!({
        "family": path_str(&a.family),
        "shape": fam.shape().header(),
        "m": a.m,
        "pattern_family": a.pattern_family.as_deref().map(path_str),
        "epsilon": epsilon.map(|e| e.to_string()),
    });
    Ok(envelope("scan", config, &[], rep.to_json()))
}

fn phidist(a: &PhidistArgs) -> Result<Value, Failure> {
    let form = read_form(&a.form)?;
    let mode = match a.mode {
        ModeArg::Convolution => DistributionMode::Convolution,
        ModeArg::Enumeration => DistributionMode::Enumeration { budget: a.budget },
        ModeArg::Sampled => DistributionMode::Sampled { samples: a.samples, seed: a.seed },
    };
    let table = if a.d == 1 { fpforms::distribution(&form, mode)? } else { fpforms::distribution(&form.induced(a.d), mode)? };
    let seeds: Vec<u64> = matches!(a.mode, ModeArg::Sampled).then_some(a.seed).into_iter().collect();
    let config = json!({
        "form": path_str(&a.form),
        "p": form.p(),
        "n": form.n(),
        "d": a.d,
        "mode": mode,
    });
    Ok(envelope("phidist", config, &seeds, serde_json::to_value(table).expect("serializable")))
}

fn quasi(a: &QuasiArgs) -> Result<Value, Failure> {
    let fam = read_family(&a.family)?;
    let eta = parse_rational("eta", &a.eta)?;
    if eta <= Rational::default() {
        return Err(Failure::input("--eta must be positive"));
    }
    let extra = a.forms.iter().map(|p| read_form(p)).collect::<Result<Vec<_>, _>>()?;
    let kind = match a.pool {
        PoolArg::Auto => PoolKind::Auto,
        PoolArg::Small => PoolKind::Small,
        PoolArg::Exhaustive => PoolKind::Exhaustive,
        PoolArg::File => PoolKind::File,
    };
    let pattern = match &a.pattern {
        Some(name) => Some(spec_by_name(name, fam.shape()).ok_or_else(|| Failure::input(format!("unknown pattern {name:?}")))?),
        None => None,
    };
    let cfg = LoopConfig {
        p: a.p,
        eta: eta.clone(),
        schedule: a.m.map_or(MSchedule::SqrtRule, MSchedule::Fixed),
        search: FormSearch { kind, extra, ..Default::default() },
        max_steps: a.max_steps,
        pattern: pattern.as_ref(),
    };
    let out = quasirandomize(&fam, &cfg)?;
    let config = json!({
        "family": path_str(&a.family),
        "shape": fam.shape().header(),
        "p": a.p,
        "eta": eta.to_string(),
        "pool": cfg.search.kind,
        "forms": a.forms.iter().map(|p| path_str(p)).collect::<Vec<_>>(),
        "max_steps": a.max_steps,
        "m_schedule": cfg.schedule,
        "pattern": a.pattern,
    });
    let result = json!({
        "trace": out.trace.to_json(),
        "final_shape": out.family.shape().header(),
        "final_density": out.family.density().to_string(),
        "final_family": hexes(&out.family),
        "pattern_pair": out.pattern_pair.map(|(x, y, w)| json!({ "A": x.to_hex(), "B": y.to_hex(), "witness": w.to_json() })),
    });
    Ok(envelope("quasirandomize", config, &[], result))
}

fn extremal_cmd(a: &ExtremalArgs) -> Result<Value, Failure> {
    let config = json!({
        "degrees": a.d,
        "n": a.n,
        "pattern": a.pattern,
        "exhaustive": a.exhaustive,
        "table": a.table,
        "node_budget": a.node_budget,
    });
    let spec_for = |shape: &UniverseShape| spec_by_name(&a.pattern, shape).ok_or_else(|| Failure::input(format!("unknown pattern {:?}", a.pattern)));
    if a.table {
        let probe = UniverseShape::new(a.d.clone(), 1)?;
        spec_for(&probe)?;
        let table = density_threshold_table(&a.d, 1..=a.n, |s| spec_by_name(&a.pattern, s).expect("checked above"))?;
        return Ok(envelope("extremal", config, &[], serde_json::to_value(table).expect("serializable")));
    }
    let shape = UniverseShape::new(a.d.clone(), a.n)?;
    let spec = spec_for(&shape)?;
    let rec = if a.exhaustive {
        extremal::max_avoiding_family_exhaustive(&shape, &spec)?
    } else {
        extremal::max_avoiding_family_with_budget(&shape, &spec, a.node_budget)?
    };
    Ok(envelope("extremal", config, &[], rec.to_json()))
}

fn demo(a: &DemoArgs) -> Result<Value, Failure> {
    let shape = UniverseShape::single(1, a.n)?;
    let fam = match &a.family {
        Some(p) => read_family(p)?,
        None => Family::new(&shape, [crate::SubsetMask::empty(&shape)])?,
    };
    let cells = interval_demo_cells(a.n)?;
    let average = interval_demo_average_density(a.n, &fam)?;
    let density = fam.density();
    let result = json!({
        "cells": cells.len(),
        "cell_size": a.n,
        "average_density": average.to_string(),
        "family_density": density.to_string(),
        "identity_holds": average == density,
    });
    let config = json!({ "n": a.n, "family": a.family.as_deref().map(path_str) });
    Ok(envelope("demo-interval", config, &[], result))
}

fn reduce(r: &ReduceCommand) -> Result<Value, Failure> {
    match r {
        ReduceCommand::Beta { family, bundle } => {
            if let Some(path) = bundle {
                let b = HypergraphBundle::from_text(&read(path)?)?;
                let d = b.degrees.iter().copied().max().unwrap_or(1);
                let catalog = IntervalPartitionCatalog::new(d)?;
                let set = reductions::beta_inverse(&b, &catalog)?;
                let back = reductions::beta_bijection(&set, &catalog)?;
                let result = json!({
                    "shape": set.shape().header(),
                    "symmetric_set": set.to_hex(),
                    "roundtrip": back == b,
                });
                return Ok(envelope("reduce-beta", json!({ "bundle": path_str(path) }), &[], result));
            }
            let path = family.as_ref().expect("clap requires --family or --bundle");
            let fam = read_family(path)?;
            let d = fam.shape().degree(0);
            let catalog = IntervalPartitionCatalog::new(d)?;
            let mut bundles = Vec::new();
            let mut roundtrip = true;
            for a in &fam {
                let b = reductions::beta_bijection(a, &catalog)?;
                roundtrip &= reductions::beta_inverse(&b, &catalog)? == *a;
                bundles.push(b.to_text());
            }
            let region = SymmetricRegion::new(d, fam.shape().n())?;
            let result = json!({
                "degrees": catalog.degrees(),
                "bundles": bundles,
                "roundtrip": roundtrip,
                "symmetric_density": reductions::symmetric_density(&region, fam.members()).to_string(),
            });
            Ok(envelope("reduce-beta", json!({ "family": path_str(path) }), &[], result))
        }
        ReduceCommand::Multiplex { family, s } => {
            let fam = read_family(family)?;
            let out = reductions::multiplex(&fam, *s)?;
            let result = json!({
                "family_text": out.to_text(),
                "density_in_diagonal": reductions::multiplex_density(&fam).to_string(),
                "source_density": fam.density().to_string(),
            });
            Ok(envelope("reduce-multiplex", json!({ "family": path_str(family), "s": s }), &[], result))
        }
        ReduceCommand::Embed { family, degrees } => {
            let fam = read_family(family)?;
            let emb = DegreeEmbedding::new(fam.shape(), degrees)?;
            let members = fam.iter().map(|a| embed_lower_degree(a, degrees)).collect::<Result<Vec<_>, _>>()?;
            let roundtrip = members.iter().zip(&fam).all(|(e, a)| emb.pullback(e).map(|b| b == *a).unwrap_or(false));
            let out = Family::new(emb.target(), members)?;
            let result = json!({ "family_text": out.to_text(), "roundtrip": roundtrip });
            Ok(envelope("reduce-embed", json!({ "family": path_str(family), "degrees": degrees }), &[], result))
        }
        ReduceCommand::Clique { family, loopful } => {
            let fam = read_family(family)?;
            let mode = if *loopful { LoopMode::Loopful } else { LoopMode::Loopless };
            let image = reductions::clique_square_correspondence(&fam, mode, ENUMERATION_BUDGET)?;
            let graph_density = reductions::graph_density(&fam, mode);
            let result = json!({
                "image_size": image.len(),
                "image_density": image.density().to_string(),
                "graph_density": graph_density.to_string(),
                "density_preserved": image.density() == graph_density,
            });
            Ok(envelope("reduce-clique", json!({ "family": path_str(family), "loopful": loopful }), &[], result))
        }
    }
}

/// `--threads`, else `SETDIFF_THREADS`, else rayon's default.
pub fn thread_count(flag: Option<usize>) -> Option<usize> {
    flag.or_else(|| std::env::var("SETDIFF_THREADS").ok()?.trim().parse().ok()).filter(|&n| n > 0)
}
