//! Recursive computation of `q` with computation-tree recording.
//!
//! The recursion eliminates vertices one at a time:
//!
//! * a looped vertex splits into deletion and local complementation,
//! * an edge with unlooped endpoints splits into two branches via the
//!   reweighted pivot (the binary form), or three via the classical
//!   three-term formula when `ternary` is selected,
//! * isolated vertices and reductions contribute single-child nodes,
//! * the empty graph closes a leaf with value 1.
//!
//! Nodes with exactly one child are the *active* nodes; leaves of the
//! recorded tree drive the activity statistics and the lower-bound checks
//! on leaf counts against `epsilon` and `gamma`.

use crate::expansion::{self, ExpansionError};
use crate::graph::{GraphError, WeightedGraph};
use crate::poly::Poly;
use crate::reduction::{self, ReductionKind};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecursionError {
    #[error("tree strategy needs a rooted tree: {0}")]
    NotATree(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    /// Looped-vertex branch: `beta(a) q(G-a) + alpha(a)(x-1) q(G^a - a)`.
    LoopBranch,
    /// Binary pivot: `beta(a) q(G-a) + alpha(a) q((G^{ab}-b)')`.
    BinaryPivot,
    /// Classical three-term pivot branch.
    TernaryPivot,
    /// Isolated looped vertex: coefficient `alpha(a)(x-1) + beta(a)`.
    IsolatedLooped,
    /// Isolated unlooped vertex: coefficient `alpha(a)(y-1) + beta(a)`.
    IsolatedUnlooped,
    /// Closed product over a graph with no non-loop edges.
    EdgelessClosure,
    /// A pendant or twin reduction step; preserves `q`.
    Reduction(ReductionKind),
    /// The empty graph; value 1.
    EmptyLeaf,
}

impl NodeKind {
    pub fn name(self) -> &'static str {
        match self {
            NodeKind::LoopBranch => "loop-branch",
            NodeKind::BinaryPivot => "binary-pivot",
            NodeKind::TernaryPivot => "ternary-pivot",
            NodeKind::IsolatedLooped => "isolated-looped",
            NodeKind::IsolatedUnlooped => "isolated-unlooped",
            NodeKind::EdgelessClosure => "edgeless-closure",
            NodeKind::Reduction(ReductionKind::Pendant) => "reduction-pendant",
            NodeKind::Reduction(ReductionKind::IdenticalTwin) => "reduction-identical-twin",
            NodeKind::Reduction(ReductionKind::FraternalTwin) => "reduction-fraternal-twin",
            NodeKind::EmptyLeaf => "empty-leaf",
        }
    }

    pub fn is_leaf(self) -> bool {
        matches!(self, NodeKind::EmptyLeaf | NodeKind::EdgelessClosure)
    }

    /// Active nodes are the ones with precisely one child.
    pub fn is_active(self) -> bool {
        matches!(
            self,
            NodeKind::IsolatedLooped | NodeKind::IsolatedUnlooped | NodeKind::Reduction(_)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub kind: NodeKind,
    pub vertices: Vec<String>,
    pub coeffs: Vec<Poly>,
    pub children: Vec<TreeNode>,
}

impl TreeNode {
    /// Re-evaluates the subtree bottom-up. Leaves are 1, closures are their
    /// stated product, internal nodes are the coefficient-weighted sum of
    /// their children; this must reproduce the returned polynomial exactly.
    pub fn evaluate(&self) -> Poly {
        match self.kind {
            NodeKind::EmptyLeaf => Poly::one(),
            NodeKind::EdgelessClosure => self.coeffs[0].clone(),
            _ => {
                let mut acc = Poly::zero();
                for (c, child) in self.coeffs.iter().zip(&self.children) {
                    acc += &(c * &child.evaluate());
                }
                acc
            }
        }
    }

    fn collect_stats(&self, stats: &mut TreeStats) {
        stats.record(self.kind);
        for child in &self.children {
            child.collect_stats(stats);
        }
    }

    fn write_trace(&self, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(self.kind.name());
        if !self.vertices.is_empty() {
            out.push(' ');
            out.push_str(&self.vertices.join(","));
        }
        for c in &self.coeffs {
            out.push_str(" | ");
            out.push_str(&c.canonical_string());
        }
        out.push('\n');
        for child in &self.children {
            child.write_trace(depth + 1, out);
        }
    }
}

/// Recorded trace of a recursive `q` computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComputationTree {
    pub root: TreeNode,
}

impl ComputationTree {
    pub fn evaluate(&self) -> Poly {
        self.root.evaluate()
    }

    pub fn stats(&self) -> TreeStats {
        let mut stats = TreeStats::default();
        self.root.collect_stats(&mut stats);
        stats
    }

    /// Indented text form, one node per line: kind, vertices, coefficients.
    pub fn trace_string(&self) -> String {
        let mut out = String::new();
        self.root.write_trace(0, &mut out);
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TreeStats {
    pub leaves: usize,
    pub active_nodes: usize,
    pub total_nodes: usize,
    pub by_kind: BTreeMap<&'static str, usize>,
}

impl TreeStats {
    fn record(&mut self, kind: NodeKind) {
        self.total_nodes += 1;
        if kind.is_leaf() {
            self.leaves += 1;
        }
        if kind.is_active() {
            self.active_nodes += 1;
        }
        *self.by_kind.entry(kind.name()).or_insert(0) += 1;
    }
}

pub fn tree_stats(tree: &ComputationTree) -> TreeStats {
    tree.stats()
}

/// Sibling structure of a rooted ordered tree, consulted by the tree
/// strategy. Build one with `OrderedRootedTree::tree_order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeOrder {
    pub root: String,
    pub children: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    /// Lowest-index looped vertex first, else the lexicographically least
    /// edge; isolated vertices are consumed as they appear.
    FirstVertex,
    /// Apply pendant-twin reductions whenever one is available, then fall
    /// back to `FirstVertex`; a fully reduced remainder closes with the
    /// edgeless product.
    ReduceFirst,
    /// The rooted-tree order whose leaves biject with earlier sibling
    /// covers. Only valid on trees.
    Tree(TreeOrder),
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::FirstVertex => "first",
            Strategy::ReduceFirst => "reduce-first",
            Strategy::Tree(_) => "tree",
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RecursionOptions {
    /// Use the three-term pivot branch instead of the binary form.
    pub ternary: bool,
    /// Restricted counting regime backing the leaf-count lower bounds:
    /// the closed product is never taken over a looped graph, fraternal
    /// reductions are off, and zero-weight branches are not pruned.
    pub leaf_bound_mode: bool,
    /// Record the full computation tree (exponentially large).
    pub record_tree: bool,
    /// Keep branches whose coefficient is the zero polynomial even outside
    /// `leaf_bound_mode`.
    pub keep_zero_branches: bool,
    /// Track how many leaves lie in the connected portion of the tree.
    pub track_connected: bool,
}

#[derive(Debug, Clone)]
pub struct RecursionOutcome {
    pub poly: Poly,
    pub tree: Option<ComputationTree>,
    pub stats: TreeStats,
    /// Leaves of the maximal subtree of nodes whose graphs are connected,
    /// when `track_connected` was requested.
    pub connected_portion_leaves: Option<usize>,
}

struct Sub {
    poly: Poly,
    node: Option<TreeNode>,
    portion: usize,
    connected: bool,
}

struct Rec<'a> {
    options: &'a RecursionOptions,
    strategy: &'a Strategy,
    stats: TreeStats,
}

enum Move {
    Isolated(usize),
    Loop(usize),
    /// `(a, b)` in role order: `a` is eliminated on the pivot branch.
    Pivot(usize, usize),
    Closure,
}

impl Rec<'_> {
    fn prune_zero(&self) -> bool {
        !self.options.leaf_bound_mode && !self.options.keep_zero_branches
    }

    fn record(&self) -> bool {
        self.options.record_tree
    }

    /// A branch `coeff * q(child)`. Pruned zero-coefficient branches keep
    /// their arity with an `EmptyLeaf` placeholder, which evaluates to 1 and
    /// contributes `0 * 1 = 0`, so tree re-evaluation stays exact.
    fn branch(&mut self, child: &WeightedGraph, coeff: &Poly) -> Result<Sub, RecursionError> {
        if coeff.is_zero() && self.prune_zero() {
            self.stats.record(NodeKind::EmptyLeaf);
            return Ok(Sub {
                poly: Poly::zero(),
                node: self.record().then(|| TreeNode {
                    kind: NodeKind::EmptyLeaf,
                    vertices: vec![],
                    coeffs: vec![],
                    children: vec![],
                }),
                portion: 0,
                connected: false,
            });
        }
        let sub = self.run(child)?;
        Ok(Sub {
            poly: coeff * &sub.poly,
            ..sub
        })
    }

    fn node(
        &mut self,
        kind: NodeKind,
        vertices: Vec<String>,
        coeffs: Vec<Poly>,
        subs: Vec<Sub>,
        connected: bool,
    ) -> Sub {
        self.stats.record(kind);
        let mut poly = Poly::zero();
        for sub in &subs {
            poly += &sub.poly;
        }
        match kind {
            NodeKind::EmptyLeaf => poly = Poly::one(),
            NodeKind::EdgelessClosure => poly = coeffs[0].clone(),
            _ => {}
        }
        let portion = if !connected {
            0
        } else if kind.is_leaf() {
            1
        } else if subs.iter().any(|s| s.connected) {
            subs.iter().filter(|s| s.connected).map(|s| s.portion).sum()
        } else {
            1
        };
        let node = self.record().then(|| TreeNode {
            kind,
            vertices,
            coeffs,
            children: subs.into_iter().filter_map(|s| s.node).collect(),
        });
        Sub {
            poly,
            node,
            portion,
            connected,
        }
    }

    fn run(&mut self, g: &WeightedGraph) -> Result<Sub, RecursionError> {
        let connected = self.options.track_connected && g.is_connected();

        if matches!(self.strategy, Strategy::ReduceFirst) {
            let step = if self.options.leaf_bound_mode {
                reduction::find_reduction_no_fraternal(g)
            } else {
                reduction::find_reduction(g)
            };
            if let Some(step) = step {
                let reduced = reduction::apply_step(g, &step).expect("scanned step applies");
                let sub = self.branch(&reduced, &Poly::one())?;
                let mut vertices = vec![step.survivor.clone()];
                vertices.extend(step.removed.iter().cloned());
                return Ok(self.node(
                    NodeKind::Reduction(step.kind),
                    vertices,
                    vec![Poly::one()],
                    vec![sub],
                    connected,
                ));
            }
        }

        if g.is_empty() {
            return Ok(self.node(NodeKind::EmptyLeaf, vec![], vec![], vec![], connected));
        }

        match self.choose(g) {
            Move::Isolated(i) => {
                let a = g.label(i).to_string();
                let looped = g.is_looped_at(i);
                let base = if looped {
                    Poly::x_minus_one()
                } else {
                    Poly::y_minus_one()
                };
                let coeff = &(g.alpha_at(i) * &base) + g.beta_at(i);
                let kind = if looped {
                    NodeKind::IsolatedLooped
                } else {
                    NodeKind::IsolatedUnlooped
                };
                let sub = self.branch(&g.delete_vertex(&a)?, &coeff)?;
                Ok(self.node(kind, vec![a], vec![coeff], vec![sub], connected))
            }
            Move::Loop(i) => {
                let a = g.label(i).to_string();
                let c1 = g.alpha_at(i).clone();
                let minus_a = g.delete_vertex(&a)?;
                let lc_minus_a = g.local_complement(&a)?.delete_vertex(&a)?;
                let coeff1 = g.beta_at(i).clone();
                let coeff2 = &c1 * &Poly::x_minus_one();
                let s1 = self.branch(&minus_a, &coeff1)?;
                let s2 = self.branch(&lc_minus_a, &coeff2)?;
                Ok(self.node(
                    NodeKind::LoopBranch,
                    vec![a],
                    vec![coeff1, coeff2],
                    vec![s1, s2],
                    connected,
                ))
            }
            Move::Pivot(ia, ib) => {
                let a = g.label(ia).to_string();
                let b = g.label(ib).to_string();
                let (alpha_a, beta_a) = (g.alpha_at(ia).clone(), g.beta_at(ia).clone());
                let (alpha_b, beta_b) = (g.alpha_at(ib).clone(), g.beta_at(ib).clone());
                let xm1sq = Poly::x_minus_one().pow(2);
                let pivoted = g.pivot(&a, &b)?;
                let minus_a = g.delete_vertex(&a)?;
                let ternary = self.options.ternary && !matches!(self.strategy, Strategy::Tree(_));
                if ternary {
                    let pivot_minus_b = pivoted.delete_vertex(&b)?;
                    let pivot_minus_ab = pivot_minus_b.delete_vertex(&a)?;
                    let c3 = &(&(&alpha_a * &alpha_b) * &xm1sq) - &(&beta_a * &beta_b);
                    let s1 = self.branch(&minus_a, &beta_a)?;
                    let s2 = self.branch(&pivot_minus_b, &beta_b)?;
                    let s3 = self.branch(&pivot_minus_ab, &c3)?;
                    Ok(self.node(
                        NodeKind::TernaryPivot,
                        vec![a, b],
                        vec![beta_a, beta_b, c3],
                        vec![s1, s2, s3],
                        connected,
                    ))
                } else {
                    let reweighted = pivoted
                        .delete_vertex(&b)?
                        .with_weights(&a, beta_b, &alpha_b * &xm1sq)?;
                    let s1 = self.branch(&minus_a, &beta_a)?;
                    let s2 = self.branch(&reweighted, &alpha_a)?;
                    Ok(self.node(
                        NodeKind::BinaryPivot,
                        vec![a, b],
                        vec![beta_a, alpha_a],
                        vec![s1, s2],
                        connected,
                    ))
                }
            }
            Move::Closure => {
                let product = reduction::edgeless_closed_form(g)
                    .expect("closure is only chosen for graphs with no non-loop edges");
                let vertices = g.labels().to_vec();
                Ok(self.node(
                    NodeKind::EdgelessClosure,
                    vertices,
                    vec![product],
                    vec![],
                    connected,
                ))
            }
        }
    }

    fn choose(&self, g: &WeightedGraph) -> Move {
        if let Strategy::Tree(order) = self.strategy {
            return self.choose_tree(g, order);
        }
        if self.options.leaf_bound_mode {
            // The closed product stays off looped graphs: loops branch via
            // local complementation so the epsilon accounting goes through.
            let iso_unlooped = g.isolated_mask() & !g.looped_mask();
            if iso_unlooped != 0 {
                Move::Isolated(iso_unlooped.trailing_zeros() as usize)
            } else if g.looped_mask() != 0 {
                Move::Loop(g.looped_mask().trailing_zeros() as usize)
            } else {
                let (a, b) = least_edge(g).expect("nonempty loopless graph without isolated vertices has an edge");
                Move::Pivot(a, b)
            }
        } else if !g.has_nonloop_edges() {
            if matches!(self.strategy, Strategy::ReduceFirst) {
                Move::Closure
            } else {
                Move::Isolated(0)
            }
        } else {
            let iso = g.isolated_mask();
            if iso != 0 {
                Move::Isolated(iso.trailing_zeros() as usize)
            } else if g.looped_mask() != 0 {
                Move::Loop(g.looped_mask().trailing_zeros() as usize)
            } else {
                let (a, b) = least_edge(g).expect("graph has non-loop edges");
                Move::Pivot(a, b)
            }
        }
    }

    fn choose_tree(&self, g: &WeightedGraph, order: &TreeOrder) -> Move {
        let iso = g.isolated_mask();
        if iso != 0 {
            return Move::Isolated(iso.trailing_zeros() as usize);
        }
        let surviving_children = |label: &str| -> Vec<usize> {
            order
                .children
                .get(label)
                .map(|kids| kids.iter().filter_map(|c| g.index_of(c)).collect())
                .unwrap_or_default()
        };
        // A leaf eligible for the sibling-cover recursion: its parent is not
        // the root and all of the parent's surviving children are leaves.
        for i in 0..g.vertex_count() {
            let v = g.label(i);
            if v == order.root {
                continue;
            }
            let kids = surviving_children(v);
            if kids.is_empty() {
                continue;
            }
            if kids.iter().all(|&k| g.neighbors_mask(k).count_ones() == 1) {
                return Move::Pivot(*kids.last().unwrap(), i);
            }
        }
        // Star at the root: pivot on the last surviving child of the root.
        let ir = g
            .index_of(&order.root)
            .expect("tree recursion keeps the root until it is isolated");
        let kids = surviving_children(&order.root);
        let a = *kids
            .last()
            .expect("non-isolated root in a tree has surviving children");
        Move::Pivot(a, ir)
    }
}

fn least_edge(g: &WeightedGraph) -> Option<(usize, usize)> {
    for i in 0..g.vertex_count() {
        let higher = g.neighbors_mask(i) & !(u64::MAX >> (63 - i as u32));
        if higher != 0 {
            return Some((i, higher.trailing_zeros() as usize));
        }
    }
    None
}

fn validate_tree_input(g: &WeightedGraph, order: &TreeOrder) -> Result<(), RecursionError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(RecursionError::NotATree("empty graph has no root".into()));
    }
    let root = g
        .index_of(&order.root)
        .ok_or_else(|| RecursionError::NotATree(format!("root `{}` is not a vertex", order.root)))?;
    if g.looped_mask() != 0 {
        return Err(RecursionError::NotATree("trees are loopless".into()));
    }
    if g.edges().len() != n - 1 || !g.is_connected() {
        return Err(RecursionError::NotATree(
            "graph is not connected and acyclic".into(),
        ));
    }
    // Breadth-first parents; the declared child lists must match exactly.
    let mut parent = vec![usize::MAX; n];
    let mut seen = 1u64 << root;
    let mut queue = vec![root];
    while let Some(v) = queue.pop() {
        let mut kids = g.neighbors_mask(v) & !seen;
        let declared = order
            .children
            .get(g.label(v))
            .cloned()
            .unwrap_or_default();
        let mut declared_mask = 0u64;
        for c in &declared {
            let ic = g.index_of(c).ok_or_else(|| {
                RecursionError::NotATree(format!("ordered child `{c}` is not a vertex"))
            })?;
            declared_mask |= 1 << ic;
        }
        if declared_mask != kids || declared.len() != kids.count_ones() as usize {
            return Err(RecursionError::NotATree(format!(
                "sibling order for `{}` does not list its children exactly once",
                g.label(v)
            )));
        }
        while kids != 0 {
            let c = kids.trailing_zeros() as usize;
            kids &= kids - 1;
            parent[c] = v;
            seen |= 1 << c;
            queue.push(c);
        }
    }
    Ok(())
}

/// Computes `q(G)` recursively. The returned polynomial always equals the
/// subset expansion; the optional recorded tree re-evaluates to it exactly.
pub fn q_recursive(
    g: &WeightedGraph,
    strategy: &Strategy,
    options: &RecursionOptions,
) -> Result<RecursionOutcome, RecursionError> {
    if let Strategy::Tree(order) = strategy {
        validate_tree_input(g, order)?;
    }
    let mut rec = Rec {
        options,
        strategy,
        stats: TreeStats::default(),
    };
    let sub = rec.run(g)?;
    Ok(RecursionOutcome {
        poly: sub.poly,
        tree: sub.node.map(|root| ComputationTree { root }),
        stats: rec.stats,
        connected_portion_leaves: options.track_connected.then_some(sub.portion),
    })
}

/// Replaces the weights of `a` by `alpha' = r1 alpha(a)` and
/// `beta' = r1 beta(a) + r2`, which turns `q(G)` into
/// `r1 q(G) + r2 q(G - a)`.
pub fn reweight_linear(
    g: &WeightedGraph,
    a: &str,
    r1: &Poly,
    r2: &Poly,
) -> Result<WeightedGraph, GraphError> {
    let alpha = r1 * g.alpha_of(a)?;
    let beta = &(r1 * g.beta_of(a)?) + r2;
    g.with_weights(a, alpha, beta)
}

fn require_unlooped_neighbors(
    g: &WeightedGraph,
    a: &str,
    b: &str,
) -> Result<(), RecursionError> {
    if !g.has_edge(a, b)? {
        return Err(RecursionError::Precondition(format!(
            "`{a}` and `{b}` must be neighbors"
        )));
    }
    if g.is_looped(a)? || g.is_looped(b)? {
        return Err(RecursionError::Precondition(format!(
            "`{a}` and `{b}` must both be unlooped"
        )));
    }
    Ok(())
}

/// The pivot reweighting identity `(x-1)^2 q(G) = q((G^{ab})')`, where the
/// pivoted graph swaps the weight pairs across the edge and picks up
/// `(x-1)^2` factors. Verified against the subset expansion.
pub fn pivot_reweight_identity_check(
    g: &WeightedGraph,
    a: &str,
    b: &str,
) -> Result<bool, RecursionError> {
    require_unlooped_neighbors(g, a, b)?;
    let xm1sq = Poly::x_minus_one().pow(2);
    let (alpha_a, beta_a) = (g.alpha_of(a)?.clone(), g.beta_of(a)?.clone());
    let (alpha_b, beta_b) = (g.alpha_of(b)?.clone(), g.beta_of(b)?.clone());
    let reweighted = g
        .pivot(a, b)?
        .with_weights(a, beta_b, &alpha_b * &xm1sq)?
        .with_weights(b, beta_a, &alpha_a * &xm1sq)?;
    let lhs = &xm1sq * &expansion::q_expand(g)?;
    let rhs = expansion::q_expand(&reweighted)?;
    Ok(lhs == rhs)
}

/// `q(G) - beta(a) q(G-a) = q(G^a) - beta(a) q(G^a - a)` for loopless `a`.
pub fn lc_deletion_identity_holds(g: &WeightedGraph, a: &str) -> Result<bool, RecursionError> {
    if g.is_looped(a)? {
        return Err(RecursionError::Precondition(format!(
            "`{a}` must be unlooped"
        )));
    }
    let beta_a = g.beta_of(a)?.clone();
    let ga = g.local_complement(a)?;
    let lhs = &expansion::q_expand(g)? - &(&beta_a * &expansion::q_expand(&g.delete_vertex(a)?)?);
    let rhs =
        &expansion::q_expand(&ga)? - &(&beta_a * &expansion::q_expand(&ga.delete_vertex(a)?)?);
    Ok(lhs == rhs)
}

/// The pivot-invariance of sums over subsets containing the surviving
/// endpoint: deleting `a`, the `b`-containing part of `q` is unchanged by
/// the pivot, i.e.
/// `q(G-a) - beta(b) q(G-a-b) = q(G^{ab}-a) - beta(b) q(G^{ab}-a-b)`.
pub fn pivot_deletion_identity_holds(
    g: &WeightedGraph,
    a: &str,
    b: &str,
) -> Result<bool, RecursionError> {
    require_unlooped_neighbors(g, a, b)?;
    let beta_b = g.beta_of(b)?.clone();
    let pivoted = g.pivot(a, b)?;
    let value = |h: &WeightedGraph| -> Result<Poly, RecursionError> {
        let minus_a = h.delete_vertex(a)?;
        let minus_ab = minus_a.delete_vertex(b)?;
        Ok(&expansion::q_expand(&minus_a)? - &(&beta_b * &expansion::q_expand(&minus_ab)?))
    };
    Ok(value(g)? == value(&pivoted)?)
}

#[derive(Debug, Clone)]
pub struct LeafBoundStrategyReport {
    pub strategy: &'static str,
    pub leaves: usize,
    pub active_nodes: usize,
    pub connected_portion_leaves: usize,
    pub bound_satisfied: bool,
}

#[derive(Debug, Clone)]
pub struct LeafBoundReport {
    pub epsilon: i64,
    /// Present exactly when the graph is simple; the gamma bound only
    /// applies there.
    pub gamma: Option<i64>,
    pub per_strategy: Vec<LeafBoundStrategyReport>,
    pub satisfied: bool,
}

/// Leaf-count lower bounds: in the restricted counting regime every
/// strategy's tree has at least `epsilon(G)/2` leaves, and at least
/// `gamma(G)/2` when `G` is simple.
pub fn check_leaf_bounds(g: &WeightedGraph) -> Result<LeafBoundReport, RecursionError> {
    let epsilon = expansion::epsilon(g)?;
    let simple = g.looped_mask() == 0;
    let gamma = if simple {
        Some(expansion::gamma(g)?)
    } else {
        None
    };
    let options = RecursionOptions {
        leaf_bound_mode: true,
        track_connected: true,
        ..Default::default()
    };
    let mut per_strategy = Vec::new();
    let mut satisfied = true;
    for strategy in [Strategy::FirstVertex, Strategy::ReduceFirst] {
        let out = q_recursive(g, &strategy, &options)?;
        let leaves = out.stats.leaves;
        let twice = 2 * leaves as i64;
        let bound_satisfied = twice >= epsilon && gamma.is_none_or(|gm| twice >= gm);
        satisfied &= bound_satisfied;
        per_strategy.push(LeafBoundStrategyReport {
            strategy: strategy.name(),
            leaves,
            active_nodes: out.stats.active_nodes,
            connected_portion_leaves: out.connected_portion_leaves.unwrap_or(0),
            bound_satisfied,
        });
    }
    Ok(LeafBoundReport {
        epsilon,
        gamma,
        per_strategy,
        satisfied,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::q_expand;

    fn pp(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    fn k2u() -> WeightedGraph {
        let mut g = WeightedGraph::new();
        g.add_vertex("a", false).unwrap();
        g.add_vertex("b", false).unwrap();
        g.add_edge("a", "b").unwrap();
        g
    }

    fn rec_default(g: &WeightedGraph) -> RecursionOutcome {
        q_recursive(
            g,
            &Strategy::FirstVertex,
            &RecursionOptions {
                record_tree: true,
                ..Default::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn empty_graph() {
        let out = rec_default(&WeightedGraph::new());
        assert_eq!(out.poly, Poly::one());
        let tree = out.tree.unwrap();
        assert_eq!(tree.root.kind, NodeKind::EmptyLeaf);
        let stats = tree.stats();
        assert_eq!(stats.leaves, 1);
        assert_eq!(stats.active_nodes, 0);
    }

    #[test]
    fn single_looped_vertex() {
        let mut g = WeightedGraph::new();
        g.add_vertex("a", true).unwrap();
        let out = rec_default(&g);
        assert_eq!(out.poly, Poly::x());
        let tree = out.tree.unwrap();
        assert_eq!(tree.root.kind, NodeKind::IsolatedLooped);
        assert_eq!(tree.root.children[0].kind, NodeKind::EmptyLeaf);
        assert_eq!(tree.evaluate(), Poly::x());
    }

    #[test]
    fn k2_binary_tree() {
        let out = rec_default(&k2u());
        assert_eq!(out.poly, pp("(x-1)^2 + 2*y - 1"));
        assert_eq!(out.poly, q_expand(&k2u()).unwrap());
        let tree = out.tree.unwrap();
        assert_eq!(tree.root.kind, NodeKind::BinaryPivot);
        assert_eq!(tree.stats().leaves, 2);
        assert_eq!(tree.evaluate(), out.poly);
    }

    #[test]
    fn edgeless_under_leaf_bound_mode_gives_isolated_chain() {
        let mut g = WeightedGraph::new();
        for i in 0..4 {
            g.add_vertex(&format!("v{i}"), false).unwrap();
        }
        let out = q_recursive(
            &g,
            &Strategy::FirstVertex,
            &RecursionOptions {
                leaf_bound_mode: true,
                record_tree: true,
                ..Default::default()
            },
        )
        .unwrap();
        let stats = out.stats.clone();
        assert_eq!(stats.leaves, 1);
        assert_eq!(stats.active_nodes, 4);
        assert_eq!(stats.by_kind.get("isolated-unlooped"), Some(&4));
        assert_eq!(out.poly, pp("y^4"));
        assert_eq!(out.tree.unwrap().stats(), stats);
    }

    #[test]
    fn ternary_matches_binary() {
        let g = k2u();
        let t = q_recursive(
            &g,
            &Strategy::FirstVertex,
            &RecursionOptions {
                ternary: true,
                record_tree: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(t.poly, q_expand(&g).unwrap());
        assert_eq!(t.tree.as_ref().unwrap().root.kind, NodeKind::TernaryPivot);
        assert_eq!(t.tree.unwrap().evaluate(), t.poly);
    }

    #[test]
    fn reduce_first_uses_closure() {
        let mut g = WeightedGraph::new();
        g.add_vertex("a", true).unwrap();
        g.add_vertex("b", false).unwrap();
        // Irreducible two-vertex edgeless mix: one looped, one unlooped.
        let out = q_recursive(
            &g,
            &Strategy::ReduceFirst,
            &RecursionOptions {
                record_tree: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(out.poly, pp("x*y"));
        assert_eq!(out.tree.unwrap().root.kind, NodeKind::EdgelessClosure);
    }

    #[test]
    fn reweight_linear_examples() {
        let g = k2u();
        assert_eq!(
            reweight_linear(&g, "a", &Poly::one(), &Poly::zero()).unwrap(),
            g
        );
        let zeroed = reweight_linear(&g, "a", &Poly::zero(), &Poly::one()).unwrap();
        assert_eq!(
            q_expand(&zeroed).unwrap(),
            q_expand(&g.delete_vertex("a").unwrap()).unwrap()
        );
    }

    #[test]
    fn pivot_reweight_identity_examples() {
        assert!(pivot_reweight_identity_check(&k2u(), "a", "b").unwrap());

        let mut p4 = WeightedGraph::new();
        for v in ["a", "b", "c", "d"] {
            p4.add_vertex(v, false).unwrap();
        }
        p4.add_edge("a", "b").unwrap();
        p4.add_edge("b", "c").unwrap();
        p4.add_edge("c", "d").unwrap();
        assert!(pivot_reweight_identity_check(&p4, "b", "c").unwrap());

        let symbolic = k2u()
            .with_weights("a", pp("a1"), pp("b1"))
            .unwrap()
            .with_weights("b", pp("a2"), pp("b2"))
            .unwrap();
        assert!(pivot_reweight_identity_check(&symbolic, "a", "b").unwrap());

        let mut looped = k2u();
        looped = looped.with_loop("a", true).unwrap();
        assert!(pivot_reweight_identity_check(&looped, "a", "b").is_err());
    }

    #[test]
    fn leaf_bound_examples() {
        // Nonempty simple graph: epsilon = 0, bound trivially satisfied.
        let report = check_leaf_bounds(&k2u()).unwrap();
        assert_eq!(report.epsilon, 0);
        assert!(report.satisfied);

        // Two adjacent looped vertices: epsilon = 2, so at least one leaf.
        let mut loops = WeightedGraph::new();
        loops.add_vertex("a", true).unwrap();
        loops.add_vertex("b", true).unwrap();
        loops.add_edge("a", "b").unwrap();
        let report = check_leaf_bounds(&loops).unwrap();
        assert_eq!(report.epsilon, 2);
        assert!(report.satisfied);
        for s in &report.per_strategy {
            assert!(s.leaves >= 1);
        }
    }

    #[test]
    fn trace_is_indented_lines() {
        let out = rec_default(&k2u());
        let trace = out.tree.unwrap().trace_string();
        assert!(trace.starts_with("binary-pivot a,b | 1 | 1\n"));
        assert!(trace.lines().count() >= 3);
    }
}
