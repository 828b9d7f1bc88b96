//! Pendant-twin reduction engine.
//!
//! Identical twins, fraternal twins and unlooped pendant vertices can be
//! removed while reweighting a surviving vertex so that `q` is unchanged.
//! Graphs that reduce all the way to edgeless graphs (distance-hereditary
//! style inputs) then get their polynomial from the closed product over
//! isolated vertices, with no branching at all.

use crate::graph::{GraphError, WeightedGraph};
use crate::poly::Poly;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ReductionKind {
    Pendant,
    IdenticalTwin,
    FraternalTwin,
}

impl ReductionKind {
    pub fn name(self) -> &'static str {
        match self {
            ReductionKind::Pendant => "pendant",
            ReductionKind::IdenticalTwin => "identical-twin",
            ReductionKind::FraternalTwin => "fraternal-twin",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("`{0}` and `{1}` are not identical twins: {2}")]
    NotIdenticalTwins(String, String, String),
    #[error("`{0}` and `{1}` are not fraternal twins: {2}")]
    NotFraternalTwins(String, String, String),
    #[error("`{1}` is not an unlooped pendant on `{0}`: {2}")]
    NotPendant(String, String, String),
    #[error("twin reduction needs at least two vertices")]
    TooFewTwins,
}

/// One recorded reduction: the surviving vertex keeps the graph position,
/// the removed vertices disappear, and the survivor gets the new weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub kind: ReductionKind,
    pub survivor: String,
    pub removed: Vec<String>,
    pub new_alpha: Poly,
    pub new_beta: Poly,
}

impl ReductionStep {
    pub fn trace_line(&self) -> String {
        format!(
            "{} keep={} remove={} alpha={} beta={}",
            self.kind.name(),
            self.survivor,
            self.removed.join(","),
            self.new_alpha.canonical_string(),
            self.new_beta.canonical_string()
        )
    }
}

/// A maximal run of reductions and the graph nothing more applies to.
#[derive(Debug, Clone)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub terminal: WeightedGraph,
}

impl ReductionTrace {
    pub fn trace_string(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            out.push_str(&step.trace_line());
            out.push('\n');
        }
        out
    }

    /// The closed-form `q` when the terminal graph has no non-loop edges.
    pub fn closed_form_q(&self) -> Option<Poly> {
        edgeless_closed_form(&self.terminal)
    }
}

/// Product form of `q` over a graph with no non-loop edges:
/// `alpha(v)(y-1) + beta(v)` per unlooped vertex and
/// `alpha(v)(x-1) + beta(v)` per looped vertex.
pub fn edgeless_closed_form(g: &WeightedGraph) -> Option<Poly> {
    if g.has_nonloop_edges() {
        return None;
    }
    let xm1 = Poly::x_minus_one();
    let ym1 = Poly::y_minus_one();
    let mut q = Poly::one();
    for i in 0..g.vertex_count() {
        let base = if g.is_looped_at(i) { &xm1 } else { &ym1 };
        q = &q * &(&(g.alpha_at(i) * base) + g.beta_at(i));
    }
    Some(q)
}

fn mask_bit(g: &WeightedGraph, label: &str) -> Result<(usize, u64), GraphError> {
    let i = g
        .index_of(label)
        .ok_or_else(|| GraphError::UnknownVertex(label.to_string()))?;
    Ok((i, 1u64 << i))
}

/// Reason string when `a`, `b` violate a twin condition; `None` when they
/// really are twins of the requested flavor.
fn twin_violation(g: &WeightedGraph, a: &str, b: &str, identical: bool) -> Option<String> {
    let (ia, ba) = mask_bit(g, a).ok()?;
    let (ib, bb) = mask_bit(g, b).ok()?;
    if ia == ib {
        return Some("a vertex is not a twin of itself".to_string());
    }
    let la = g.is_looped_at(ia);
    let lb = g.is_looped_at(ib);
    let adjacent = g.neighbors_mask(ia) & bb != 0;
    let pattern_ok = if identical {
        (la && lb && adjacent) || (!la && !lb && !adjacent)
    } else {
        (la && lb && !adjacent) || (!la && !lb && adjacent)
    };
    if !pattern_ok {
        return Some(format!(
            "loop/adjacency pattern is wrong (loops {}, {}; {})",
            la,
            lb,
            if adjacent { "adjacent" } else { "not adjacent" }
        ));
    }
    let outside = !(ba | bb);
    if g.neighbors_mask(ia) & outside != g.neighbors_mask(ib) & outside {
        return Some("outside neighborhoods differ".to_string());
    }
    None
}

pub fn are_identical_twins(g: &WeightedGraph, a: &str, b: &str) -> bool {
    g.index_of(a).is_some() && g.index_of(b).is_some() && twin_violation(g, a, b, true).is_none()
}

pub fn are_fraternal_twins(g: &WeightedGraph, a: &str, b: &str) -> bool {
    g.index_of(a).is_some() && g.index_of(b).is_some() && twin_violation(g, a, b, false).is_none()
}

fn check_group(g: &WeightedGraph, twins: &[&str], identical: bool) -> Result<(), ReductionError> {
    if twins.len() < 2 {
        return Err(ReductionError::TooFewTwins);
    }
    for lab in twins {
        mask_bit(g, lab)?;
    }
    for i in 0..twins.len() {
        for j in (i + 1)..twins.len() {
            if let Some(reason) = twin_violation(g, twins[i], twins[j], identical) {
                let (a, b) = (twins[i].to_string(), twins[j].to_string());
                return Err(if identical {
                    ReductionError::NotIdenticalTwins(a, b, reason)
                } else {
                    ReductionError::NotFraternalTwins(a, b, reason)
                });
            }
        }
    }
    Ok(())
}

/// New weights for a k-fold identical twin merge, straight from the
/// closed sums: inclusion demands one survivor drawn from the group with a
/// `(y-1)` per extra member, exclusion demands excluding everyone.
fn identical_weights(g: &WeightedGraph, twins: &[&str]) -> (Poly, Poly) {
    let idx: Vec<usize> = twins.iter().map(|l| g.index_of(l).unwrap()).collect();
    let ym1 = Poly::y_minus_one();
    let mut alpha = Poly::zero();
    for mask in 1u64..(1 << idx.len()) {
        let mut term = Poly::one();
        for (pos, &i) in idx.iter().enumerate() {
            let w = if mask >> pos & 1 == 1 {
                g.alpha_at(i)
            } else {
                g.beta_at(i)
            };
            term = &term * w;
        }
        alpha += &(&term * &ym1.pow(mask.count_ones() - 1));
    }
    let mut beta = Poly::one();
    for &i in &idx {
        beta = &beta * g.beta_at(i);
    }
    (alpha, beta)
}

/// New weights for a k-fold fraternal twin merge: odd subsets feed alpha
/// with `(x-1)^{|S|-1}`, even subsets feed beta with `(x-1)^{|S|}`.
fn fraternal_weights(g: &WeightedGraph, twins: &[&str]) -> (Poly, Poly) {
    let idx: Vec<usize> = twins.iter().map(|l| g.index_of(l).unwrap()).collect();
    let xm1 = Poly::x_minus_one();
    let mut alpha = Poly::zero();
    let mut beta = Poly::zero();
    for mask in 0u64..(1 << idx.len()) {
        let mut term = Poly::one();
        for (pos, &i) in idx.iter().enumerate() {
            let w = if mask >> pos & 1 == 1 {
                g.alpha_at(i)
            } else {
                g.beta_at(i)
            };
            term = &term * w;
        }
        let size = mask.count_ones();
        if size % 2 == 1 {
            alpha += &(&term * &xm1.pow(size - 1));
        } else {
            beta += &(&term * &xm1.pow(size));
        }
    }
    (alpha, beta)
}

fn merge_group(
    g: &WeightedGraph,
    twins: &[&str],
    weights: (Poly, Poly),
) -> Result<WeightedGraph, ReductionError> {
    let survivor = twins[0];
    let removed: Vec<&str> = twins[1..].to_vec();
    let g = g.delete_vertices(&removed)?;
    Ok(g.with_weights(survivor, weights.0, weights.1)?)
}

/// Merges a group of pairwise identical twins into `twins[0]`.
pub fn identical_twin_reduce(
    g: &WeightedGraph,
    twins: &[&str],
) -> Result<WeightedGraph, ReductionError> {
    check_group(g, twins, true)?;
    merge_group(g, twins, identical_weights(g, twins))
}

/// Merges a group of pairwise fraternal twins into `twins[0]`.
pub fn fraternal_twin_reduce(
    g: &WeightedGraph,
    twins: &[&str],
) -> Result<WeightedGraph, ReductionError> {
    check_group(g, twins, false)?;
    merge_group(g, twins, fraternal_weights(g, twins))
}

fn pendant_violation(g: &WeightedGraph, a: &str, b: &str) -> Option<String> {
    if a == b {
        return Some("pendant and support coincide".to_string());
    }
    if g.is_looped(b).ok()? {
        return Some(format!("`{b}` is looped"));
    }
    let deg = g.degree(b).ok()?;
    if deg != 1 {
        return Some(format!("`{b}` has degree {deg}"));
    }
    if !g.has_edge(a, b).ok()? {
        return Some(format!("`{b}` does not neighbor `{a}`"));
    }
    None
}

fn pendant_weights(g: &WeightedGraph, a: &str, b: &str) -> (Poly, Poly) {
    let (aa, ba) = (g.alpha_of(a).unwrap(), g.beta_of(a).unwrap());
    let (ab, bb) = (g.alpha_of(b).unwrap(), g.beta_of(b).unwrap());
    let xm1sq = Poly::x_minus_one().pow(2);
    let ym1 = Poly::y_minus_one();
    let alpha = aa * bb;
    let beta = &(&(&(aa * ab) * &xm1sq) + &(&(ba * ab) * &ym1)) + &(ba * bb);
    (alpha, beta)
}

/// Removes the unlooped degree-one vertex `b` pendant on `a`.
pub fn pendant_reduce(g: &WeightedGraph, a: &str, b: &str) -> Result<WeightedGraph, ReductionError> {
    g.index_of(a)
        .ok_or_else(|| GraphError::UnknownVertex(a.to_string()))?;
    g.index_of(b)
        .ok_or_else(|| GraphError::UnknownVertex(b.to_string()))?;
    if let Some(reason) = pendant_violation(g, a, b) {
        return Err(ReductionError::NotPendant(
            a.to_string(),
            b.to_string(),
            reason,
        ));
    }
    let (alpha, beta) = pendant_weights(g, a, b);
    Ok(g.delete_vertex(b)?.with_weights(a, alpha, beta)?)
}

/// Every applicable single step, in the deterministic scan order: pendants
/// first, then identical twin pairs, then fraternal twin pairs, each in
/// vertex-list order.
pub fn all_reductions(g: &WeightedGraph, allow_fraternal: bool) -> Vec<ReductionStep> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    for ib in 0..n {
        let b = g.label(ib);
        if !g.is_looped_at(ib) && g.neighbors_mask(ib).count_ones() == 1 {
            let ia = g.neighbors_mask(ib).trailing_zeros() as usize;
            let a = g.label(ia);
            let (alpha, beta) = pendant_weights(g, a, b);
            out.push(ReductionStep {
                kind: ReductionKind::Pendant,
                survivor: a.to_string(),
                removed: vec![b.to_string()],
                new_alpha: alpha,
                new_beta: beta,
            });
        }
    }
    let pairs = |identical: bool, kind: ReductionKind, out: &mut Vec<ReductionStep>| {
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (g.label(i), g.label(j));
                if twin_violation(g, a, b, identical).is_none() {
                    let (alpha, beta) = if identical {
                        identical_weights(g, &[a, b])
                    } else {
                        fraternal_weights(g, &[a, b])
                    };
                    out.push(ReductionStep {
                        kind,
                        survivor: a.to_string(),
                        removed: vec![b.to_string()],
                        new_alpha: alpha,
                        new_beta: beta,
                    });
                }
            }
        }
    };
    pairs(true, ReductionKind::IdenticalTwin, &mut out);
    if allow_fraternal {
        pairs(false, ReductionKind::FraternalTwin, &mut out);
    }
    out
}

/// First applicable step under the scan order, or `None`.
pub fn find_reduction(g: &WeightedGraph) -> Option<ReductionStep> {
    all_reductions(g, true).into_iter().next()
}

/// As `find_reduction` but without fraternal twin steps (the leaf-bound
/// counting regime).
pub fn find_reduction_no_fraternal(g: &WeightedGraph) -> Option<ReductionStep> {
    all_reductions(g, false).into_iter().next()
}

/// Applies a recorded step, re-validating its preconditions.
pub fn apply_step(g: &WeightedGraph, step: &ReductionStep) -> Result<WeightedGraph, ReductionError> {
    let mut group: Vec<&str> = vec![step.survivor.as_str()];
    group.extend(step.removed.iter().map(String::as_str));
    match step.kind {
        ReductionKind::Pendant => pendant_reduce(g, &step.survivor, &step.removed[0]),
        ReductionKind::IdenticalTwin => identical_twin_reduce(g, &group),
        ReductionKind::FraternalTwin => fraternal_twin_reduce(g, &group),
    }
}

/// Applies `find_reduction` until nothing applies. Polynomial time: each
/// step removes a vertex and a scan is quadratic.
pub fn reduce_fully(g: &WeightedGraph) -> ReductionTrace {
    let mut steps = Vec::new();
    let mut current = g.clone();
    while let Some(step) = find_reduction(&current) {
        current = apply_step(&current, &step).expect("scanned step applies");
        steps.push(step);
    }
    ReductionTrace {
        steps,
        terminal: current,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::q_expand;
    use crate::poly::Poly;

    fn pp(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    fn e2u() -> WeightedGraph {
        let mut g = WeightedGraph::new();
        g.add_vertex("a", false).unwrap();
        g.add_vertex("b", false).unwrap();
        g
    }

    #[test]
    fn identical_twin_examples() {
        // Two isolated unweighted vertices merge to alpha = y+1, beta = 1,
        // and the single-vertex q is y^2 = q(E2).
        let g = identical_twin_reduce(&e2u(), &["a", "b"]).unwrap();
        assert_eq!(g.alpha_of("a").unwrap(), &pp("y+1"));
        assert_eq!(g.beta_of("a").unwrap(), &Poly::one());
        assert_eq!(q_expand(&g).unwrap(), pp("y^2"));
        assert_eq!(q_expand(&g).unwrap(), q_expand(&e2u()).unwrap());

        // A twin with alpha=0, beta=1 contributes nothing: weights unchanged.
        let h = e2u().with_weights("b", Poly::zero(), Poly::one()).unwrap();
        let r = identical_twin_reduce(&h, &["a", "b"]).unwrap();
        assert_eq!(r.alpha_of("a").unwrap(), h.alpha_of("a").unwrap());
        assert_eq!(r.beta_of("a").unwrap(), h.beta_of("a").unwrap());

        // Two adjacent looped unweighted vertices: alpha = y+1, beta = 1.
        let mut loops = WeightedGraph::new();
        loops.add_vertex("a", true).unwrap();
        loops.add_vertex("b", true).unwrap();
        loops.add_edge("a", "b").unwrap();
        let r = identical_twin_reduce(&loops, &["a", "b"]).unwrap();
        assert_eq!(r.alpha_of("a").unwrap(), &pp("y+1"));
        assert_eq!(q_expand(&r).unwrap(), pp("(y+1)*(x-1)+1"));
        assert_eq!(q_expand(&r).unwrap(), q_expand(&loops).unwrap());
    }

    #[test]
    fn pendant_examples() {
        // K2 with b pendant on a.
        let mut k2 = e2u();
        k2.add_edge("a", "b").unwrap();
        let r = pendant_reduce(&k2, "a", "b").unwrap();
        assert_eq!(r.alpha_of("a").unwrap(), &Poly::one());
        assert_eq!(r.beta_of("a").unwrap(), &pp("(x-1)^2 + (y-1) + 1"));
        assert_eq!(q_expand(&r).unwrap(), q_expand(&k2).unwrap());

        // Pendant with alpha=0, beta=1 vanishes without touching a.
        let h = k2.with_weights("b", Poly::zero(), Poly::one()).unwrap();
        let r = pendant_reduce(&h, "a", "b").unwrap();
        assert_eq!(r.alpha_of("a").unwrap(), h.alpha_of("a").unwrap());
        assert_eq!(r.beta_of("a").unwrap(), h.beta_of("a").unwrap());

        // P3: reduce the leaf, then the remaining edge, down to one vertex.
        let mut p3 = WeightedGraph::new();
        for v in ["a", "b", "c"] {
            p3.add_vertex(v, false).unwrap();
        }
        p3.add_edge("a", "b").unwrap();
        p3.add_edge("b", "c").unwrap();
        let q = q_expand(&p3).unwrap();
        let step1 = pendant_reduce(&p3, "b", "a").unwrap();
        let step2 = pendant_reduce(&step1, "c", "b").unwrap();
        assert_eq!(q_expand(&step2).unwrap(), q);
    }

    #[test]
    fn fraternal_examples() {
        // K2 as a fraternal pair: alpha = 2, beta = 1 + (x-1)^2.
        let mut k2 = e2u();
        k2.add_edge("a", "b").unwrap();
        let r = fraternal_twin_reduce(&k2, &["a", "b"]).unwrap();
        assert_eq!(r.alpha_of("a").unwrap(), &pp("2"));
        assert_eq!(r.beta_of("a").unwrap(), &pp("1+(x-1)^2"));
        assert_eq!(q_expand(&r).unwrap(), q_expand(&k2).unwrap());

        // At x=2 the unweighted pair gives alpha = beta = 2.
        let mut at2 = std::collections::BTreeMap::new();
        at2.insert(crate::poly::VarName::x(), Poly::constant(2));
        assert_eq!(r.alpha_of("a").unwrap().substitute(&at2), pp("2"));
        assert_eq!(r.beta_of("a").unwrap().substitute(&at2), pp("2"));

        // Inert twin leaves the weights alone.
        let h = k2.with_weights("b", Poly::zero(), Poly::one()).unwrap();
        let r = fraternal_twin_reduce(&h, &["a", "b"]).unwrap();
        assert_eq!(r.alpha_of("a").unwrap(), h.alpha_of("a").unwrap());
        assert_eq!(r.beta_of("a").unwrap(), h.beta_of("a").unwrap());
    }

    #[test]
    fn find_reduction_examples() {
        // Isolated vertices are identical twins.
        let step = find_reduction(&e2u()).unwrap();
        assert_eq!(step.kind, ReductionKind::IdenticalTwin);
        assert_eq!(step.survivor, "a");
        assert_eq!(step.removed, vec!["b".to_string()]);

        // A 5-cycle admits nothing.
        let mut c5 = WeightedGraph::new();
        for i in 0..5 {
            c5.add_vertex(&format!("v{i}"), false).unwrap();
        }
        for i in 0..5 {
            c5.add_edge(&format!("v{i}"), &format!("v{}", (i + 1) % 5))
                .unwrap();
        }
        assert!(find_reduction(&c5).is_none());
        let trace = reduce_fully(&c5);
        assert!(trace.steps.is_empty());
        assert_eq!(trace.terminal, c5);

        // P3 starts with a pendant step.
        let mut p3 = WeightedGraph::new();
        for v in ["a", "b", "c"] {
            p3.add_vertex(v, false).unwrap();
        }
        p3.add_edge("a", "b").unwrap();
        p3.add_edge("b", "c").unwrap();
        assert_eq!(find_reduction(&p3).unwrap().kind, ReductionKind::Pendant);
    }

    #[test]
    fn p4_reduces_to_oracle_value() {
        let mut p4 = WeightedGraph::new();
        for v in ["a", "b", "c", "d"] {
            p4.add_vertex(v, false).unwrap();
        }
        p4.add_edge("a", "b").unwrap();
        p4.add_edge("b", "c").unwrap();
        p4.add_edge("c", "d").unwrap();
        let trace = reduce_fully(&p4);
        assert!(!trace.terminal.has_nonloop_edges());
        assert_eq!(trace.closed_form_q().unwrap(), q_expand(&p4).unwrap());
    }

    #[test]
    fn rejects_mixed_groups() {
        let mut g = e2u();
        g.add_vertex("c", true).unwrap();
        let err = identical_twin_reduce(&g, &["a", "b", "c"]).unwrap_err();
        assert!(matches!(err, ReductionError::NotIdenticalTwins(..)));
        assert!(matches!(
            identical_twin_reduce(&g, &["a"]),
            Err(ReductionError::TooFewTwins)
        ));
        let mut k2 = e2u();
        k2.add_edge("a", "b").unwrap();
        assert!(matches!(
            pendant_reduce(&k2, "a", "zz"),
            Err(ReductionError::Graph(GraphError::UnknownVertex(_)))
        ));
    }
}
