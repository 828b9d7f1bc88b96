//! The `compute`, `compose` and `stats` subcommands.

use crate::graphfile::{self, GraphFileData};
use crate::report::RunReport;
use crate::CliError;
use clap::{Args, ValueEnum};
use interlace_core::composition;
use interlace_core::expansion;
use interlace_core::poly::{Poly, VarName};
use interlace_core::recursion::{self, RecursionOptions, Strategy};
use interlace_core::trees::{self, OrderedRootedTree};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolyKind {
    /// The two-variable weighted interlace polynomial.
    Q,
    /// Vertex-nullity specialization (x = 2).
    Qn,
    /// Vertex-rank specialization (y = 2).
    Qr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Direct subset expansion (the oracle; capped at 20 vertices).
    Expand,
    /// Vertex-eliminating recursion.
    Recurse,
    /// Pendant-twin reductions, recursion on any irreducible core.
    Reduce,
    /// Earlier-sibling-cover closed form (requires a root directive).
    Tree,
    /// Alias for the reduction pipeline; the default.
    Auto,
}

impl MethodArg {
    fn name(self) -> &'static str {
        match self {
            MethodArg::Expand => "expand",
            MethodArg::Recurse => "recurse",
            MethodArg::Reduce => "reduce",
            MethodArg::Tree => "tree",
            MethodArg::Auto => "auto",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    /// Lowest-index looped vertex, else the least edge.
    First,
    /// The rooted-tree order (requires a root directive).
    Tree,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// Graph file to read.
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = PolyKind::Q)]
    pub poly: PolyKind,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    /// Vertex selection for --method recurse.
    #[arg(long, value_enum, default_value_t = StrategyArg::First)]
    pub strategy: StrategyArg,
    /// Use the classical three-branch pivot instead of the binary form.
    #[arg(long)]
    pub ternary: bool,
    /// Write the computation tree trace to this path (recurse/reduce/auto).
    #[arg(long, value_name = "PATH")]
    pub record_tree: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ComposeArgs {
    /// Graph file for the left operand H.
    pub file_h: PathBuf,
    /// Graph file for the right operand K.
    pub file_k: PathBuf,
    /// The marker vertex shared by both files.
    #[arg(long)]
    pub shared: String,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    pub file: PathBuf,
}

pub fn load(path: &Path) -> Result<GraphFileData, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    graphfile::parse_graph_file(&text).map_err(|e| CliError::File {
        path: path.to_path_buf(),
        inner: e,
    })
}

fn build_tree(data: &GraphFileData) -> Result<OrderedRootedTree, CliError> {
    let Some(root) = &data.root else {
        return Err(CliError::Semantic(
            "this method needs a `root` directive in the graph file".to_string(),
        ));
    };
    OrderedRootedTree::new(data.graph.clone(), root, &data.orders)
        .map_err(|e| CliError::Semantic(e.to_string()))
}

fn specialize(q: Poly, kind: PolyKind) -> Poly {
    let mut bind = BTreeMap::new();
    match kind {
        PolyKind::Q => return q,
        PolyKind::Qn => bind.insert(VarName::x(), Poly::constant(2)),
        PolyKind::Qr => bind.insert(VarName::y(), Poly::constant(2)),
    };
    q.substitute(&bind)
}

pub fn compute(args: &ComputeArgs) -> Result<(), CliError> {
    if args.record_tree.is_some()
        && !matches!(
            args.method,
            MethodArg::Recurse | MethodArg::Reduce | MethodArg::Auto
        )
    {
        return Err(CliError::Usage(
            "--record-tree needs --method recurse, reduce or auto".to_string(),
        ));
    }
    let data = load(&args.file)?;
    let started = Instant::now();
    let mut report = RunReport {
        method: args.method.name(),
        ..Default::default()
    };

    let record = args.record_tree.is_some();
    let q = match args.method {
        MethodArg::Expand => expansion::q_expand(&data.graph)
            .map_err(|e| CliError::Semantic(e.to_string()))?,
        MethodArg::Tree => {
            let tree = build_tree(&data)?;
            trees::q_tree(&tree).map_err(|e| CliError::Semantic(e.to_string()))?
        }
        MethodArg::Recurse | MethodArg::Reduce | MethodArg::Auto => {
            let strategy = match (args.method, args.strategy) {
                (MethodArg::Recurse, StrategyArg::First) => Strategy::FirstVertex,
                (MethodArg::Recurse, StrategyArg::Tree) => {
                    Strategy::Tree(build_tree(&data)?.tree_order())
                }
                _ => Strategy::ReduceFirst,
            };
            let options = RecursionOptions {
                ternary: args.ternary,
                record_tree: record,
                ..Default::default()
            };
            let out = recursion::q_recursive(&data.graph, &strategy, &options)
                .map_err(|e| CliError::Semantic(e.to_string()))?;
            if let (Some(path), Some(tree)) = (&args.record_tree, &out.tree) {
                std::fs::write(path, tree.trace_string())
                    .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
            }
            report.tree_stats = Some(out.stats.clone());
            out.poly
        }
    };

    report.elapsed = Some(started.elapsed());
    report
        .stdout_lines
        .push(specialize(q, args.poly).canonical_string());
    report.emit();
    Ok(())
}

pub fn compose(args: &ComposeArgs) -> Result<(), CliError> {
    let h = load(&args.file_h)?.graph;
    let k = load(&args.file_k)?.graph;
    let a = &args.shared;
    let started = Instant::now();

    let weights =
        composition::composition_weights(&h, a).map_err(|e| CliError::Semantic(e.to_string()))?;
    let via_weights =
        composition::q_composed(&h, a, &k).map_err(|e| CliError::Semantic(e.to_string()))?;
    let composed =
        composition::compose(&h, &k, a).map_err(|e| CliError::Semantic(e.to_string()))?;
    let direct =
        expansion::q_expand(&composed).map_err(|e| CliError::Semantic(e.to_string()))?;
    if via_weights != direct {
        return Err(CliError::Invariant(format!(
            "composition methods disagree:\n  re-weighting: {}\n  expansion:    {}",
            via_weights.canonical_string(),
            direct.canonical_string()
        )));
    }

    let report = RunReport {
        stdout_lines: vec![
            via_weights.canonical_string(),
            format!("alpha({a}) = {}", weights.alpha_a),
            format!("beta({a}) = {}", weights.beta_a),
            format!("beta({a}_c) = {}", weights.beta_ac),
        ],
        method: "compose",
        elapsed: Some(started.elapsed()),
        tree_stats: None,
    };
    report.emit();
    Ok(())
}

pub fn stats(args: &StatsArgs) -> Result<(), CliError> {
    let data = load(&args.file)?;
    let started = Instant::now();
    let gamma =
        expansion::gamma(&data.graph).map_err(|e| CliError::Semantic(e.to_string()))?;
    let epsilon =
        expansion::epsilon(&data.graph).map_err(|e| CliError::Semantic(e.to_string()))?;
    let bounds = recursion::check_leaf_bounds(&data.graph)
        .map_err(|e| CliError::Semantic(e.to_string()))?;

    let mut lines = vec![format!("gamma = {gamma}"), format!("epsilon = {epsilon}")];
    for s in &bounds.per_strategy {
        lines.push(format!(
            "strategy={} leaves={} active={} connected_portion_leaves={} bound={}",
            s.strategy,
            s.leaves,
            s.active_nodes,
            s.connected_portion_leaves,
            if s.bound_satisfied { "ok" } else { "violated" }
        ));
    }
    let report = RunReport {
        stdout_lines: lines,
        method: "stats",
        elapsed: Some(started.elapsed()),
        tree_stats: None,
    };
    report.emit();
    Ok(())
}
