//! Ordered rooted trees: earlier-sibling covers, the closed form for `q`
//! of a weighted tree, the unweighted count formula, and the bijection
//! between covers and the leaves of the rooted-tree recursion strategy.

use crate::graph::{GraphError, WeightedGraph};
use crate::poly::Poly;
use crate::recursion::{self, NodeKind, RecursionError, RecursionOptions, Strategy, TreeNode, TreeOrder};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("root `{0}` is not a vertex")]
    UnknownRoot(String),
    #[error("bad sibling order for `{0}`: {1}")]
    BadOrder(String, String),
    #[error("not an es-cover: {0}")]
    NotEsCover(String),
    #[error("`{0}` is not an eligible leaf for the sibling-cover recursion")]
    IneligibleLeaf(String),
    #[error(transparent)]
    Recursion(#[from] RecursionError),
}

/// A rooted tree with a total order on each sibling set. Sibling order
/// defaults to vertex-list order; explicit orders may override per parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedRootedTree {
    graph: WeightedGraph,
    root: String,
    parent: BTreeMap<String, String>,
    children: BTreeMap<String, Vec<String>>,
}

impl OrderedRootedTree {
    pub fn new(
        graph: WeightedGraph,
        root: &str,
        explicit_orders: &[(String, Vec<String>)],
    ) -> Result<OrderedRootedTree, TreeError> {
        let n = graph.vertex_count();
        if n == 0 {
            return Err(TreeError::NotATree("a tree needs at least one vertex".into()));
        }
        if graph.looped_mask() != 0 {
            return Err(TreeError::NotATree("trees are loopless".into()));
        }
        if graph.edges().len() != n - 1 || !graph.is_connected() {
            return Err(TreeError::NotATree("graph is not connected and acyclic".into()));
        }
        let ir = graph
            .index_of(root)
            .ok_or_else(|| TreeError::UnknownRoot(root.to_string()))?;

        let mut parent = BTreeMap::new();
        let mut children: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for label in graph.labels() {
            children.insert(label.clone(), Vec::new());
        }
        let mut seen = 1u64 << ir;
        let mut queue = vec![ir];
        while let Some(v) = queue.pop() {
            let mut kids = graph.neighbors_mask(v) & !seen;
            while kids != 0 {
                let c = kids.trailing_zeros() as usize;
                kids &= kids - 1;
                parent.insert(graph.label(c).to_string(), graph.label(v).to_string());
                children
                    .get_mut(graph.label(v))
                    .unwrap()
                    .push(graph.label(c).to_string());
                seen |= 1 << c;
                queue.push(c);
            }
        }
        // Default order is vertex-list order.
        for kids in children.values_mut() {
            kids.sort_by_key(|c| graph.index_of(c).unwrap());
        }

        let mut overridden = BTreeSet::new();
        for (p, order) in explicit_orders {
            let actual = children
                .get(p)
                .ok_or_else(|| TreeError::BadOrder(p.clone(), "unknown parent".into()))?;
            if !overridden.insert(p.clone()) {
                return Err(TreeError::BadOrder(p.clone(), "duplicate order directive".into()));
            }
            let declared: BTreeSet<&String> = order.iter().collect();
            if declared.len() != order.len() || declared != actual.iter().collect() {
                return Err(TreeError::BadOrder(
                    p.clone(),
                    "order must list the parent's children exactly once".into(),
                ));
            }
            children.insert(p.clone(), order.clone());
        }

        Ok(OrderedRootedTree {
            graph,
            root: root.to_string(),
            parent,
            children,
        })
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn root(&self) -> &str {
        &self.root
    }

    pub fn parent_of(&self, v: &str) -> Option<&str> {
        self.parent.get(v).map(String::as_str)
    }

    pub fn children_of(&self, v: &str) -> &[String] {
        self.children.get(v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_leaf(&self, v: &str) -> bool {
        self.children_of(v).is_empty()
    }

    /// Strategy payload for the recursion module.
    pub fn tree_order(&self) -> TreeOrder {
        TreeOrder {
            root: self.root.clone(),
            children: self.children.clone(),
        }
    }

    /// The subtree induced by `keep`; orders restrict, the root must stay.
    fn restricted_to(&self, keep: &BTreeSet<&str>) -> Result<OrderedRootedTree, TreeError> {
        let labels: Vec<&str> = self
            .graph
            .labels()
            .iter()
            .map(String::as_str)
            .filter(|l| keep.contains(l))
            .collect();
        let sub = self.graph.induced_subgraph(&labels)?;
        let orders: Vec<(String, Vec<String>)> = self
            .children
            .iter()
            .filter(|(p, _)| keep.contains(p.as_str()))
            .map(|(p, kids)| {
                (
                    p.clone(),
                    kids.iter()
                        .filter(|c| keep.contains(c.as_str()))
                        .cloned()
                        .collect(),
                )
            })
            .collect();
        OrderedRootedTree::new(sub, &self.root, &orders)
    }

    fn mask_dominates(&self, mask: u64, v: usize) -> bool {
        mask >> v & 1 == 1 || self.graph.neighbors_mask(v) & mask != 0
    }

    fn is_es_cover_mask(&self, mask: u64) -> bool {
        let g = &self.graph;
        let ir = g.index_of(&self.root).unwrap();
        // Independent.
        let mut bits = mask;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if g.neighbors_mask(i) & mask != 0 {
                return false;
            }
        }
        // Dominates the root.
        if !self.mask_dominates(mask, ir) {
            return false;
        }
        // Every earlier sibling of a non-root member is dominated.
        let mut bits = mask;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let label = g.label(i);
            let Some(p) = self.parent_of(label) else { continue };
            for sibling in self.children_of(p) {
                if sibling == label {
                    break;
                }
                let is = g.index_of(sibling).unwrap();
                if !self.mask_dominates(mask, is) {
                    return false;
                }
            }
        }
        true
    }

    fn cover_from_mask(&self, mask: u64) -> EsCover {
        let g = &self.graph;
        let in_cover = |label: &str| mask >> g.index_of(label).unwrap() & 1 == 1;
        let mut vertices = Vec::new();
        let mut i_r = Vec::new();
        let mut i_l = Vec::new();
        let mut i_c_prime = Vec::new();
        for label in g.labels() {
            if in_cover(label) {
                vertices.push(label.clone());
                let later_in_cover = self.parent_of(label).is_some_and(|p| {
                    let kids = self.children_of(p);
                    let at = kids.iter().position(|c| c == label).unwrap();
                    kids[at + 1..].iter().any(|c| in_cover(c))
                });
                if label == &self.root || later_in_cover {
                    i_r.push(label.clone());
                } else {
                    i_l.push(label.clone());
                }
            } else if self.children_of(label).iter().any(|c| in_cover(c)) {
                i_c_prime.push(label.clone());
            }
        }
        EsCover {
            vertices,
            i_r,
            i_l,
            i_c_prime,
        }
    }
}

/// An earlier-sibling cover: an independent set that dominates the root,
/// every earlier sibling of a member being dominated too. The partition
/// drives the per-vertex weights of the closed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EsCover {
    /// Members in vertex-list order.
    pub vertices: Vec<String>,
    /// Members that are the root or have a later sibling in the cover.
    pub i_r: Vec<String>,
    /// Non-root members without a later sibling in the cover.
    pub i_l: Vec<String>,
    /// Non-members with a child in the cover.
    pub i_c_prime: Vec<String>,
}

/// All es-covers, by brute force over vertex subsets, in ascending subset
/// order over vertex-list indices.
pub fn es_covers(t: &OrderedRootedTree) -> Vec<EsCover> {
    let n = t.graph.vertex_count();
    (0u64..(1 << n))
        .filter(|&mask| t.is_es_cover_mask(mask))
        .map(|mask| t.cover_from_mask(mask))
        .collect()
}

/// Counts `c_{s,t}`: the number of `s`-element es-covers whose non-root
/// members have `t` distinct parents.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EsNumbers {
    pub counts: BTreeMap<(usize, usize), u64>,
}

impl EsNumbers {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

pub fn es_numbers(t: &OrderedRootedTree) -> EsNumbers {
    let mut counts = BTreeMap::new();
    for cover in es_covers(t) {
        let s = cover.vertices.len();
        let parents: BTreeSet<&str> = cover
            .vertices
            .iter()
            .filter(|v| *v != &t.root)
            .map(|v| t.parent_of(v).expect("non-root member has a parent"))
            .collect();
        *counts.entry((s, parents.len())).or_insert(0) += 1;
    }
    EsNumbers { counts }
}

/// The total weight of a cover: the product over all vertices of the
/// cover weight determined by the partition.
pub fn cover_weight(t: &OrderedRootedTree, cover: &EsCover) -> Result<Poly, TreeError> {
    let g = t.graph();
    let labels: Vec<&str> = cover.vertices.iter().map(String::as_str).collect();
    let mask = g.mask_of(&labels)?;
    if !t.is_es_cover_mask(mask) {
        return Err(TreeError::NotEsCover(cover.vertices.join(",")));
    }
    let recomputed = t.cover_from_mask(mask);
    let ym1 = Poly::y_minus_one();
    let xm1sq = Poly::x_minus_one().pow(2);
    let in_list = |list: &[String], label: &str| list.iter().any(|l| l == label);
    let mut weight = Poly::one();
    for label in g.labels() {
        let factor = if in_list(&recomputed.i_r, label) {
            g.beta_of(label)? + &(g.alpha_of(label)? * &ym1)
        } else if in_list(&recomputed.i_l, label) {
            let p = t.parent_of(label).expect("i_l members are non-root");
            let parental = &(g.beta_of(p)? * &ym1) + &(g.alpha_of(p)? * &xm1sq);
            g.alpha_of(label)? * &parental
        } else if in_list(&recomputed.i_c_prime, label) {
            Poly::one()
        } else {
            g.beta_of(label)?.clone()
        };
        weight = &weight * &factor;
    }
    Ok(weight)
}

/// `q` of a weighted ordered tree: the sum of the total weights of its
/// es-covers. Always equals the subset expansion.
pub fn q_tree(t: &OrderedRootedTree) -> Result<Poly, TreeError> {
    let mut q = Poly::zero();
    for cover in es_covers(t) {
        q += &cover_weight(t, &cover)?;
    }
    Ok(q)
}

/// The unweighted closed form
/// `sum c_{s,t} y^{s-t} (y - 1 + (x-1)^2)^t`.
pub fn q_tree_unweighted(t: &OrderedRootedTree) -> Poly {
    let mixed = &Poly::y_minus_one() + &Poly::x_minus_one().pow(2);
    let y = Poly::y();
    let mut q = Poly::zero();
    for (&(s, tp), &count) in &es_numbers(t).counts {
        let term = &y.pow((s - tp) as u32) * &mixed.pow(tp as u32);
        q += &term.mul_term(&crate::poly::Monomial::unit(), &count.into());
    }
    q
}

/// Leaves eligible for the cover recursion: non-root leaves whose parent is
/// not the root, all of whose siblings are leaves, with no later siblings.
pub fn eligible_lemma_leaves(t: &OrderedRootedTree) -> Vec<String> {
    t.graph
        .labels()
        .iter()
        .filter(|l| {
            if !t.is_leaf(l) || *l == &t.root {
                return false;
            }
            let Some(p) = t.parent_of(l) else { return false };
            if p == t.root {
                return false;
            }
            let kids = t.children_of(p);
            kids.iter().all(|c| t.is_leaf(c)) && kids.last().map(String::as_str) == Some(l)
        })
        .cloned()
        .collect()
}

fn cover_sets(t: &OrderedRootedTree) -> BTreeSet<BTreeSet<String>> {
    es_covers(t)
        .into_iter()
        .map(|c| c.vertices.into_iter().collect())
        .collect()
}

/// The recursion underlying the closed form, stated as two set equalities:
/// covers avoiding an eligible leaf are covers of the tree without it, and
/// covers containing it are covers of the tree without its parent's whole
/// child set, each completed by that child set.
pub fn lemma_recur_holds(t: &OrderedRootedTree, leaf: &str) -> Result<bool, TreeError> {
    if !eligible_lemma_leaves(t).iter().any(|l| l == leaf) {
        return Err(TreeError::IneligibleLeaf(leaf.to_string()));
    }
    let p = t.parent_of(leaf).unwrap().to_string();
    let all: BTreeSet<&str> = t.graph.labels().iter().map(String::as_str).collect();

    let covers: Vec<BTreeSet<String>> = es_covers(t)
        .into_iter()
        .map(|c| c.vertices.into_iter().collect())
        .collect();
    let (with_leaf, without_leaf): (Vec<_>, Vec<_>) =
        covers.into_iter().partition(|c| c.contains(leaf));

    let mut keep = all.clone();
    keep.remove(leaf);
    let minus_leaf = t.restricted_to(&keep)?;
    let eq1: bool =
        without_leaf.into_iter().collect::<BTreeSet<_>>() == cover_sets(&minus_leaf);

    let family: Vec<String> = t.children_of(&p).to_vec();
    let mut keep = all;
    keep.remove(p.as_str());
    for c in &family {
        keep.remove(c.as_str());
    }
    let minus_family = t.restricted_to(&keep)?;
    let expected: BTreeSet<BTreeSet<String>> = cover_sets(&minus_family)
        .into_iter()
        .map(|mut c| {
            c.extend(family.iter().cloned());
            c
        })
        .collect();
    let eq2 = with_leaf.into_iter().collect::<BTreeSet<_>>() == expected;
    Ok(eq1 && eq2)
}

fn collect_leaf_sets(
    node: &TreeNode,
    mut current: BTreeSet<String>,
    out: &mut Vec<BTreeSet<String>>,
) {
    match node.kind {
        NodeKind::EmptyLeaf | NodeKind::EdgelessClosure => out.push(current),
        NodeKind::IsolatedUnlooped => {
            current.insert(node.vertices[0].clone());
            collect_leaf_sets(&node.children[0], current, out);
        }
        NodeKind::BinaryPivot => {
            collect_leaf_sets(&node.children[0], current.clone(), out);
            current.insert(node.vertices[0].clone());
            collect_leaf_sets(&node.children[1], current, out);
        }
        other => unreachable!("tree-strategy recursion never emits {:?}", other),
    }
}

/// Runs the rooted-tree recursion strategy, reconstructs one vertex set per
/// leaf (isolated-vertex steps and pivot branches contribute their vertex),
/// and checks these sets are exactly the es-covers, one leaf each.
pub fn verify_tree_strategy_bijection(t: &OrderedRootedTree) -> Result<bool, TreeError> {
    let outcome = recursion::q_recursive(
        t.graph(),
        &Strategy::Tree(t.tree_order()),
        &RecursionOptions {
            record_tree: true,
            keep_zero_branches: true,
            ..Default::default()
        },
    )?;
    let tree = outcome.tree.expect("tree recording was requested");
    let mut leaf_sets = Vec::new();
    collect_leaf_sets(&tree.root, BTreeSet::new(), &mut leaf_sets);

    let covers = cover_sets(t);
    if leaf_sets.len() != covers.len() {
        return Ok(false);
    }
    let distinct: BTreeSet<&BTreeSet<String>> = leaf_sets.iter().collect();
    if distinct.len() != leaf_sets.len() {
        return Ok(false);
    }
    Ok(leaf_sets.into_iter().collect::<BTreeSet<_>>() == covers)
}
