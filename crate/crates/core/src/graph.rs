//! Vertex-weighted looped graphs with GF(2) linear algebra and the local
//! complementation / pivot / complement / join constructions.
//!
//! Adjacency is stored as `u64` bit-rows indexed by vertex-list order, so
//! rank computations (the inner loop of subset expansion) stay cheap. Loops
//! live in a separate flag set; the rank routine injects them as the matrix
//! diagonal. Vertex identity is the text label and survives deletions.

use crate::gf2;
use crate::poly::Poly;
use std::collections::BTreeMap;
use thiserror::Error;

/// Hard cap imposed by the bit-row representation.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex label `{0}`")]
    DuplicateLabel(String),
    #[error("self-edge on `{0}` (use the loop flag instead)")]
    SelfEdge(String),
    #[error("graphs here are limited to {MAX_VERTICES} vertices")]
    TooManyVertices,
    #[error("pivot endpoints must be distinct (got `{0}` twice)")]
    PivotSameVertex(String),
    #[error("label `{0}` appears in both operands")]
    LabelCollision(String),
}

/// GF(2) rank and nullity of an induced subgraph's adjacency matrix.
/// Always satisfies `rank + nullity == |S|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankNullity {
    pub rank: usize,
    pub nullity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightedGraph {
    labels: Vec<String>,
    adj: Vec<u64>,
    loops: u64,
    alpha: Vec<Poly>,
    beta: Vec<Poly>,
}

impl WeightedGraph {
    pub fn new() -> WeightedGraph {
        WeightedGraph::default()
    }

    /// Adds an unweighted vertex (weights default to 1).
    pub fn add_vertex(&mut self, label: &str, looped: bool) -> Result<(), GraphError> {
        self.add_vertex_weighted(label, looped, Poly::one(), Poly::one())
    }

    pub fn add_vertex_weighted(
        &mut self,
        label: &str,
        looped: bool,
        alpha: Poly,
        beta: Poly,
    ) -> Result<(), GraphError> {
        if self.labels.len() >= MAX_VERTICES {
            return Err(GraphError::TooManyVertices);
        }
        if self.index_of(label).is_some() {
            return Err(GraphError::DuplicateLabel(label.to_string()));
        }
        if looped {
            self.loops |= 1 << self.labels.len();
        }
        self.labels.push(label.to_string());
        self.adj.push(0);
        self.alpha.push(alpha);
        self.beta.push(beta);
        Ok(())
    }

    pub fn add_edge(&mut self, a: &str, b: &str) -> Result<(), GraphError> {
        let ia = self.require(a)?;
        let ib = self.require(b)?;
        if ia == ib {
            return Err(GraphError::SelfEdge(a.to_string()));
        }
        self.adj[ia] |= 1 << ib;
        self.adj[ib] |= 1 << ia;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    fn require(&self, label: &str) -> Result<usize, GraphError> {
        self.index_of(label)
            .ok_or_else(|| GraphError::UnknownVertex(label.to_string()))
    }

    pub fn full_mask(&self) -> u64 {
        if self.labels.is_empty() {
            0
        } else {
            u64::MAX >> (64 - self.labels.len())
        }
    }

    pub fn is_looped(&self, label: &str) -> Result<bool, GraphError> {
        Ok(self.loops >> self.require(label)? & 1 == 1)
    }

    pub fn is_looped_at(&self, i: usize) -> bool {
        self.loops >> i & 1 == 1
    }

    pub fn has_edge(&self, a: &str, b: &str) -> Result<bool, GraphError> {
        let ia = self.require(a)?;
        let ib = self.require(b)?;
        Ok(self.adj[ia] >> ib & 1 == 1)
    }

    /// Neighbor bitset of vertex `i`; never contains `i` itself.
    pub fn neighbors_mask(&self, i: usize) -> u64 {
        self.adj[i]
    }

    pub fn neighbors(&self, label: &str) -> Result<Vec<&str>, GraphError> {
        let i = self.require(label)?;
        Ok(self.indices_of(self.adj[i]))
    }

    pub fn degree(&self, label: &str) -> Result<usize, GraphError> {
        Ok(self.adj[self.require(label)?].count_ones() as usize)
    }

    pub fn alpha_of(&self, label: &str) -> Result<&Poly, GraphError> {
        Ok(&self.alpha[self.require(label)?])
    }

    pub fn beta_of(&self, label: &str) -> Result<&Poly, GraphError> {
        Ok(&self.beta[self.require(label)?])
    }

    pub fn alpha_at(&self, i: usize) -> &Poly {
        &self.alpha[i]
    }

    pub fn beta_at(&self, i: usize) -> &Poly {
        &self.beta[i]
    }

    fn indices_of(&self, mask: u64) -> Vec<&str> {
        (0..self.labels.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| self.labels[i].as_str())
            .collect()
    }

    /// Edges with endpoints in vertex-list order, sorted by index pair.
    pub fn edges(&self) -> Vec<(&str, &str)> {
        let mut out = Vec::new();
        for i in 0..self.labels.len() {
            for j in (i + 1)..self.labels.len() {
                if self.adj[i] >> j & 1 == 1 {
                    out.push((self.labels[i].as_str(), self.labels[j].as_str()));
                }
            }
        }
        out
    }

    pub fn has_nonloop_edges(&self) -> bool {
        self.adj.iter().any(|&row| row != 0)
    }

    /// Bitset of degree-0 vertices (loops do not count toward degree).
    pub fn isolated_mask(&self) -> u64 {
        (0..self.labels.len())
            .filter(|&i| self.adj[i] == 0)
            .fold(0, |m, i| m | 1 << i)
    }

    pub fn looped_mask(&self) -> u64 {
        self.loops
    }

    /// New graph with the weights of one vertex replaced.
    pub fn with_weights(&self, label: &str, alpha: Poly, beta: Poly) -> Result<Self, GraphError> {
        let i = self.require(label)?;
        let mut g = self.clone();
        g.alpha[i] = alpha;
        g.beta[i] = beta;
        Ok(g)
    }

    pub fn with_loop(&self, label: &str, looped: bool) -> Result<Self, GraphError> {
        let i = self.require(label)?;
        let mut g = self.clone();
        if looped {
            g.loops |= 1 << i;
        } else {
            g.loops &= !(1 << i);
        }
        Ok(g)
    }

    /// Same underlying graph with the trivial weights `alpha = beta = 1`.
    pub fn unweighted(&self) -> Self {
        let mut g = self.clone();
        g.alpha = vec![Poly::one(); g.labels.len()];
        g.beta = vec![Poly::one(); g.labels.len()];
        g
    }

    pub fn rename_vertex(&self, old: &str, new: &str) -> Result<Self, GraphError> {
        let i = self.require(old)?;
        if old != new && self.index_of(new).is_some() {
            return Err(GraphError::DuplicateLabel(new.to_string()));
        }
        let mut g = self.clone();
        g.labels[i] = new.to_string();
        Ok(g)
    }

    /// Rank and nullity of the GF(2) adjacency matrix of the subgraph induced
    /// by the subset mask, with loop flags as the diagonal.
    pub fn rank_nullity_mask(&self, subset: u64) -> RankNullity {
        let mut rows = Vec::with_capacity(subset.count_ones() as usize);
        let mut bits = subset;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            rows.push((self.adj[i] & subset) | (self.loops & subset & (1 << i)));
        }
        let rank = gf2::rank_greedy(&rows);
        RankNullity {
            rank,
            nullity: rows.len() - rank,
        }
    }

    pub fn rank_nullity(&self, subset: &[&str]) -> Result<RankNullity, GraphError> {
        Ok(self.rank_nullity_mask(self.mask_of(subset)?))
    }

    pub fn mask_of(&self, subset: &[&str]) -> Result<u64, GraphError> {
        let mut mask = 0u64;
        for label in subset {
            mask |= 1 << self.require(label)?;
        }
        Ok(mask)
    }

    /// Local complementation `G^a`: toggle every adjacency (including loops)
    /// among the neighbors of `a` distinct from `a`. Weights unchanged.
    pub fn local_complement(&self, a: &str) -> Result<Self, GraphError> {
        let ia = self.require(a)?;
        let nbrs = self.adj[ia];
        let mut g = self.clone();
        let mut bits = nbrs;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            g.adj[i] ^= nbrs & !(1 << i);
        }
        g.loops ^= nbrs;
        Ok(g)
    }

    /// Pivot `G^{ab}`: toggle non-loop pairs `{x, y}` with `x, y` outside
    /// `{a, b}` such that, for some labeling of the pair, `x` neighbors `a`,
    /// `y` neighbors `b`, and `x` misses `b` or `y` misses `a`. Loops are
    /// not toggled.
    pub fn pivot(&self, a: &str, b: &str) -> Result<Self, GraphError> {
        let ia = self.require(a)?;
        let ib = self.require(b)?;
        if ia == ib {
            return Err(GraphError::PivotSameVertex(a.to_string()));
        }
        let na = self.adj[ia];
        let nb = self.adj[ib];
        let excluded = (1u64 << ia) | (1 << ib);
        let eligible = |x: usize, y: usize| -> bool {
            let in_na = |v: usize| na >> v & 1 == 1;
            let in_nb = |v: usize| nb >> v & 1 == 1;
            (in_na(x) && in_nb(y) && (!in_nb(x) || !in_na(y)))
                || (in_na(y) && in_nb(x) && (!in_nb(y) || !in_na(x)))
        };
        let mut g = self.clone();
        for x in 0..self.labels.len() {
            if excluded >> x & 1 == 1 {
                continue;
            }
            for y in (x + 1)..self.labels.len() {
                if excluded >> y & 1 == 1 {
                    continue;
                }
                if eligible(x, y) {
                    g.adj[x] ^= 1 << y;
                    g.adj[y] ^= 1 << x;
                }
            }
        }
        Ok(g)
    }

    /// Complement including loops: every adjacency and every loop flag is
    /// toggled; weights preserved.
    pub fn complement(&self) -> Self {
        let full = self.full_mask();
        let mut g = self.clone();
        for i in 0..g.labels.len() {
            g.adj[i] = !g.adj[i] & full & !(1 << i);
        }
        g.loops = !g.loops & full;
        g
    }

    pub fn disjoint_union(&self, other: &WeightedGraph) -> Result<Self, GraphError> {
        if self.labels.len() + other.labels.len() > MAX_VERTICES {
            return Err(GraphError::TooManyVertices);
        }
        let mut g = self.clone();
        for (i, label) in other.labels.iter().enumerate() {
            g.add_vertex_weighted(
                label,
                other.is_looped_at(i),
                other.alpha[i].clone(),
                other.beta[i].clone(),
            )
            .map_err(|e| match e {
                GraphError::DuplicateLabel(l) => GraphError::LabelCollision(l),
                other => other,
            })?;
        }
        let shift = self.labels.len();
        for (i, &row) in other.adj.iter().enumerate() {
            g.adj[shift + i] |= row << shift;
        }
        Ok(g)
    }

    /// Disjoint union plus all edges between the two vertex sets.
    pub fn join(&self, other: &WeightedGraph) -> Result<Self, GraphError> {
        let mut g = self.disjoint_union(other)?;
        let left = self.full_mask();
        let right = g.full_mask() & !left;
        for i in 0..self.labels.len() {
            g.adj[i] |= right;
        }
        for i in self.labels.len()..g.labels.len() {
            g.adj[i] |= left;
        }
        Ok(g)
    }

    /// New graph on the vertices selected by `keep`, same order, same
    /// labels, weights carried over.
    fn restrict(&self, keep: u64) -> Self {
        let kept: Vec<usize> = (0..self.labels.len()).filter(|&i| keep >> i & 1 == 1).collect();
        let mut g = WeightedGraph::new();
        for &i in &kept {
            g.labels.push(self.labels[i].clone());
            g.alpha.push(self.alpha[i].clone());
            g.beta.push(self.beta[i].clone());
            g.adj.push(0);
        }
        for (new_i, &old_i) in kept.iter().enumerate() {
            if self.is_looped_at(old_i) {
                g.loops |= 1 << new_i;
            }
            for (new_j, &old_j) in kept.iter().enumerate() {
                if self.adj[old_i] >> old_j & 1 == 1 {
                    g.adj[new_i] |= 1 << new_j;
                }
            }
        }
        g
    }

    pub fn delete_vertex(&self, label: &str) -> Result<Self, GraphError> {
        let i = self.require(label)?;
        Ok(self.restrict(self.full_mask() & !(1 << i)))
    }

    pub fn delete_vertices(&self, labels: &[&str]) -> Result<Self, GraphError> {
        Ok(self.restrict(self.full_mask() & !self.mask_of(labels)?))
    }

    pub fn induced_subgraph(&self, subset: &[&str]) -> Result<Self, GraphError> {
        Ok(self.restrict(self.mask_of(subset)?))
    }

    pub fn induced_subgraph_mask(&self, subset: u64) -> Self {
        self.restrict(subset & self.full_mask())
    }

    pub fn component_masks(&self) -> Vec<u64> {
        let mut seen = 0u64;
        let mut out = Vec::new();
        for i in 0..self.labels.len() {
            if seen >> i & 1 == 1 {
                continue;
            }
            let mut comp = 1u64 << i;
            loop {
                let mut grown = comp;
                let mut bits = comp;
                while bits != 0 {
                    let v = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    grown |= self.adj[v];
                }
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.component_masks().len()
    }

    /// The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// True when every vertex is unlooped and unweighted.
    pub fn is_simple(&self) -> bool {
        self.loops == 0
    }

    /// Sorted weight map, handy for traces and error reporting.
    pub fn weights(&self) -> BTreeMap<&str, (&Poly, &Poly)> {
        (0..self.labels.len())
            .map(|i| (self.labels[i].as_str(), (&self.alpha[i], &self.beta[i])))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(labels: &[&str]) -> WeightedGraph {
        let mut g = WeightedGraph::new();
        for l in labels {
            g.add_vertex(l, false).unwrap();
        }
        for w in labels.windows(2) {
            g.add_edge(w[0], w[1]).unwrap();
        }
        g
    }

    #[test]
    fn rank_nullity_examples() {
        let mut g = WeightedGraph::new();
        g.add_vertex("a", true).unwrap();
        g.add_vertex("b", true).unwrap();
        g.add_vertex("c", false).unwrap();
        g.add_edge("a", "b").unwrap();
        g.add_edge("b", "c").unwrap();

        assert_eq!(g.rank_nullity(&[]).unwrap(), RankNullity { rank: 0, nullity: 0 });
        assert_eq!(g.rank_nullity(&["a"]).unwrap(), RankNullity { rank: 1, nullity: 0 });
        // Two adjacent looped vertices: rank 1, nullity 1.
        assert_eq!(g.rank_nullity(&["a", "b"]).unwrap(), RankNullity { rank: 1, nullity: 1 });
        // Two adjacent vertices, at least one unlooped: rank 2.
        assert_eq!(g.rank_nullity(&["b", "c"]).unwrap(), RankNullity { rank: 2, nullity: 0 });
        assert!(g.rank_nullity(&["zz"]).is_err());
    }

    #[test]
    fn local_complement_path() {
        // Path a-b-c complemented at b: edge {a,c} and both loops toggle.
        let g = path(&["a", "b", "c"]);
        let gc = g.local_complement("b").unwrap();
        assert!(gc.has_edge("a", "c").unwrap());
        assert!(gc.is_looped("a").unwrap());
        assert!(gc.is_looped("c").unwrap());
        assert!(!gc.is_looped("b").unwrap());
        assert!(gc.has_edge("a", "b").unwrap());
        assert_eq!(gc.local_complement("b").unwrap(), g);
    }

    #[test]
    fn local_complement_isolated_is_identity() {
        let mut g = path(&["a", "b"]);
        g.add_vertex("z", true).unwrap();
        assert_eq!(g.local_complement("z").unwrap(), g);
    }

    #[test]
    fn pivot_examples() {
        // Path a-b-c pivoted on {a,b}: no eligible pair, unchanged.
        let g = path(&["a", "b", "c"]);
        assert_eq!(g.pivot("a", "b").unwrap(), g);

        // Path a-b-c-d pivoted on {b,c}: toggles {a,d} only, giving a 4-cycle.
        let g = path(&["a", "b", "c", "d"]);
        let gp = g.pivot("b", "c").unwrap();
        assert!(gp.has_edge("a", "d").unwrap());
        assert!(gp.has_edge("a", "b").unwrap());
        assert!(gp.has_edge("b", "c").unwrap());
        assert!(gp.has_edge("c", "d").unwrap());
        assert_eq!(gp.edges().len(), 4);
        assert_eq!(gp.pivot("b", "c").unwrap(), g);

        assert!(g.pivot("a", "a").is_err());
    }

    #[test]
    fn complement_examples() {
        let mut e2 = WeightedGraph::new();
        e2.add_vertex("a", false).unwrap();
        e2.add_vertex("b", false).unwrap();
        let c = e2.complement();
        assert!(c.has_edge("a", "b").unwrap());
        assert!(c.is_looped("a").unwrap() && c.is_looped("b").unwrap());
        assert_eq!(c.complement(), e2);

        let mut v = WeightedGraph::new();
        v.add_vertex("a", false).unwrap();
        assert!(v.complement().is_looped("a").unwrap());
    }

    #[test]
    fn join_and_union() {
        let mut a = WeightedGraph::new();
        a.add_vertex("a", false).unwrap();
        let mut b = WeightedGraph::new();
        b.add_vertex("b", false).unwrap();
        let k2 = a.join(&b).unwrap();
        assert!(k2.has_edge("a", "b").unwrap());
        assert_eq!(a.join(&WeightedGraph::new()).unwrap(), a);
        assert!(a.disjoint_union(&a).is_err());
    }

    #[test]
    fn deletion_preserves_rest() {
        let g = path(&["a", "b", "c"]);
        let d = g.delete_vertex("c").unwrap();
        assert_eq!(d.labels(), &["a".to_string(), "b".to_string()]);
        assert!(d.has_edge("a", "b").unwrap());
        assert_eq!(g.induced_subgraph(&["a", "b", "c"]).unwrap(), g);
    }

    #[test]
    fn components() {
        let mut g = path(&["a", "b"]);
        g.add_vertex("z", true).unwrap();
        assert_eq!(g.component_count(), 2);
        assert!(!g.is_connected());
        assert!(WeightedGraph::new().is_connected());
        assert!(path(&["a", "b", "c"]).is_connected());
    }
}
