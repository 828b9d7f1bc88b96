//! Graph composition along a shared marker vertex, and the closed-form
//! re-weighting that reduces `q(H * K)` to interlace polynomials of
//! re-weighted copies of `K`.
//!
//! The weights come from classifying every subset of `V(H - a)` into one of
//! three types by the ranks of the bordered matrices
//! `(M k; r 0)` and `(M k; r 1)`, then summing the usual subset terms per
//! type. The type-2 sum carries an explicit `(y-1)` factor in every summand
//! (type 2 forces the border column outside the column space of `M`, so `M`
//! is singular), which is dropped termwise instead of divided out.

use crate::expansion::{self, ExpansionError};
use crate::gf2;
use crate::graph::{GraphError, WeightedGraph};
use crate::poly::Poly;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompositionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
    #[error("shared vertex `{0}` must appear in both graphs")]
    SharedMissing(String),
    #[error("operands must intersect only in `{0}`, but `{1}` appears in both")]
    ExtraSharedVertex(String, String),
    #[error("shared vertex `{0}` must be unlooped")]
    SharedLooped(String),
    #[error("shared vertex `{0}` must be unweighted (alpha = beta = 1)")]
    SharedWeighted(String),
    #[error("subset must avoid the marker vertex `{0}`")]
    SubsetContainsMarker(String),
}

/// The three-way classification of a subset of `V(H - a)` with respect to
/// the marker vertex `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetType {
    Type1,
    Type2,
    Type3,
}

/// The weights determined by `H` and `a`: every composition `H * K`
/// satisfies `q(H * K) = q(K') + q((K^a)')` with these weights installed.
/// `beta_ac` vanishes whenever `a` has no looped neighbor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionWeights {
    pub alpha_a: Poly,
    pub beta_a: Poly,
    pub beta_ac: Poly,
}

fn require_marker(g: &WeightedGraph, a: &str) -> Result<usize, CompositionError> {
    let ia = g
        .index_of(a)
        .ok_or_else(|| CompositionError::SharedMissing(a.to_string()))?;
    if g.is_looped_at(ia) {
        return Err(CompositionError::SharedLooped(a.to_string()));
    }
    if !g.alpha_at(ia).is_one() || !g.beta_at(ia).is_one() {
        return Err(CompositionError::SharedWeighted(a.to_string()));
    }
    Ok(ia)
}

/// Composition `H * K`: vertices of both operands minus the shared unlooped
/// unweighted marker `a`, all original edges, and the complete bipartite
/// wiring between the `H`-neighbors and `K`-neighbors of `a`.
pub fn compose(
    h: &WeightedGraph,
    k: &WeightedGraph,
    a: &str,
) -> Result<WeightedGraph, CompositionError> {
    require_marker(h, a)?;
    require_marker(k, a)?;
    for label in h.labels() {
        if label != a && k.index_of(label).is_some() {
            return Err(CompositionError::ExtraSharedVertex(
                a.to_string(),
                label.clone(),
            ));
        }
    }
    let hm = h.delete_vertex(a)?;
    let km = k.delete_vertex(a)?;
    let mut g = hm.disjoint_union(&km)?;
    for hn in h.neighbors(a)? {
        for kn in k.neighbors(a)? {
            g.add_edge(hn, kn)?;
        }
    }
    Ok(g)
}

struct TypeContext {
    marker: usize,
    marker_neighbors: u64,
    extra_col: u64,
}

impl TypeContext {
    fn new(h: &WeightedGraph, a: &str) -> Result<TypeContext, CompositionError> {
        let marker = require_marker(h, a)?;
        debug_assert!(h.vertex_count() < 64, "bordered matrices need a spare column");
        Ok(TypeContext {
            marker,
            marker_neighbors: h.neighbors_mask(marker),
            extra_col: 1u64 << h.vertex_count(),
        })
    }

    /// Classifies the subset via the bordered-matrix ranks, then re-derives
    /// the type from the `r(M)` vs `r(M^a)` relation and insists they agree.
    fn classify(&self, h: &WeightedGraph, subset: u64) -> (SubsetType, usize, usize) {
        let mut rows = Vec::with_capacity(subset.count_ones() as usize + 1);
        let mut bits = subset;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let mut row = (h.neighbors_mask(i) & subset)
                | (h.looped_mask() & subset & (1 << i));
            if self.marker_neighbors >> i & 1 == 1 {
                row |= self.extra_col;
            }
            rows.push(row);
        }
        let rank_m = {
            let no_border: Vec<u64> = rows.iter().map(|r| r & !self.extra_col).collect();
            gf2::rank_greedy(&no_border)
        };
        let border = self.marker_neighbors & subset;
        let rank_corner0 = {
            let mut m = rows.clone();
            m.push(border);
            gf2::rank_greedy(&m)
        };
        let rank_corner1 = {
            let mut m = rows.clone();
            m.push(border | self.extra_col);
            gf2::rank_greedy(&m)
        };
        let ty = if rank_corner0 == rank_m && rank_corner1 == rank_m + 1 {
            SubsetType::Type1
        } else if rank_corner0 == rank_m + 2 && rank_corner1 == rank_m + 2 {
            SubsetType::Type2
        } else if rank_corner1 == rank_m && rank_corner0 == rank_m + 1 {
            SubsetType::Type3
        } else {
            unreachable!(
                "every subset has a type: r(M)={rank_m}, corner0={rank_corner0}, corner1={rank_corner1}"
            );
        };

        // Independent route: toggle the neighbor block of `a` (diagonal
        // included) and compare ranks.
        let toggled: Vec<u64> = {
            let mut bits = subset;
            let mut out = Vec::with_capacity(rows.len());
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let mut row = (h.neighbors_mask(i) & subset)
                    | (h.looped_mask() & subset & (1 << i));
                if self.marker_neighbors >> i & 1 == 1 {
                    row ^= self.marker_neighbors & subset;
                }
                out.push(row);
            }
            out
        };
        let rank_ma = gf2::rank_greedy(&toggled);
        let agrees = match ty {
            SubsetType::Type1 => rank_m == rank_ma,
            SubsetType::Type2 => rank_m + 1 == rank_ma,
            SubsetType::Type3 => rank_m == rank_ma + 1,
        };
        assert!(
            agrees,
            "bordered-matrix and local-complement type routes disagree: \
             type {ty:?}, r(M)={rank_m}, r(M^a)={rank_ma}"
        );

        let nullity = subset.count_ones() as usize - rank_m;
        (ty, rank_m, nullity)
    }
}

/// Type of `S` with respect to `a`, computed by both rank routes.
pub fn subset_type(
    h: &WeightedGraph,
    a: &str,
    subset: &[&str],
) -> Result<SubsetType, CompositionError> {
    let ctx = TypeContext::new(h, a)?;
    let mask = h.mask_of(subset)?;
    if mask >> ctx.marker & 1 == 1 {
        return Err(CompositionError::SubsetContainsMarker(a.to_string()));
    }
    Ok(ctx.classify(h, mask).0)
}

struct ClassifiedSums {
    q1: Poly,
    q2: Poly,
    q3: Poly,
    /// The type-2 sum with one `(y-1)` factor dropped from every summand.
    q2_over_ym1: Poly,
}

fn classified_sums(h: &WeightedGraph, a: &str) -> Result<ClassifiedSums, CompositionError> {
    let ctx = TypeContext::new(h, a)?;
    let n = h.vertex_count();
    let xm1: Vec<Poly> = {
        let mut t = vec![Poly::one()];
        for i in 0..n {
            t.push(&t[i] * &Poly::x_minus_one());
        }
        t
    };
    let ym1: Vec<Poly> = {
        let mut t = vec![Poly::one()];
        for i in 0..n {
            t.push(&t[i] * &Poly::y_minus_one());
        }
        t
    };
    let domain = h.full_mask() & !(1u64 << ctx.marker);
    let mut sums = ClassifiedSums {
        q1: Poly::zero(),
        q2: Poly::zero(),
        q3: Poly::zero(),
        q2_over_ym1: Poly::zero(),
    };
    let mut subset = domain;
    loop {
        let mut weight = Poly::one();
        for i in 0..n {
            if i == ctx.marker {
                continue;
            }
            let w = if subset >> i & 1 == 1 {
                h.alpha_at(i)
            } else {
                h.beta_at(i)
            };
            weight = &weight * w;
            if weight.is_zero() {
                break;
            }
        }
        if !weight.is_zero() {
            let (ty, rank, nullity) = ctx.classify(h, subset);
            let term = &(&weight * &xm1[rank]) * &ym1[nullity];
            match ty {
                SubsetType::Type1 => sums.q1 += &term,
                SubsetType::Type2 => {
                    sums.q2 += &term;
                    assert!(
                        nullity >= 1,
                        "type-2 subset with nullity 0 would falsify the weight derivation"
                    );
                    sums.q2_over_ym1 += &(&(&weight * &xm1[rank]) * &ym1[nullity - 1]);
                }
                SubsetType::Type3 => sums.q3 += &term,
            }
        } else {
            // Still classify so the route cross-check and the nullity guard
            // run on every subset.
            let (ty, _, nullity) = ctx.classify(h, subset);
            if ty == SubsetType::Type2 {
                assert!(nullity >= 1, "type-2 subset with nullity 0");
            }
        }
        if subset == 0 {
            break;
        }
        subset = (subset - 1) & domain;
    }
    Ok(sums)
}

/// The per-type subset sums `q_1, q_2, q_3` over `V(H - a)`; they add up
/// to `q(H - a)`.
pub fn type_sums(h: &WeightedGraph, a: &str) -> Result<(Poly, Poly, Poly), CompositionError> {
    let s = classified_sums(h, a)?;
    Ok((s.q1, s.q2, s.q3))
}

/// `beta(a) = q_1`, `alpha(a) = q_2 / (y-1)` (termwise), `beta(a_c) = q_3`.
pub fn composition_weights(
    h: &WeightedGraph,
    a: &str,
) -> Result<CompositionWeights, CompositionError> {
    let s = classified_sums(h, a)?;
    Ok(CompositionWeights {
        alpha_a: s.q2_over_ym1,
        beta_a: s.q1,
        beta_ac: s.q3,
    })
}

/// Collision-free label for the copy of `a` carried by `K^a`.
pub fn companion_label(k: &WeightedGraph, a: &str) -> String {
    let mut label = format!("{a}_c");
    while k.index_of(&label).is_some() {
        label.push('_');
    }
    label
}

/// `q(H * K)` via the derived weights: `q(K') + q((K^a)')` where `K'`
/// puts the composition weights on `a` and `(K^a)'` is the local complement
/// at `a` with weights `(0, beta(a_c))` on the renamed copy. When
/// `beta(a_c) = 0` the second term vanishes and the simple-graph single-term
/// form remains.
pub fn q_composed(
    h: &WeightedGraph,
    a: &str,
    k: &WeightedGraph,
) -> Result<Poly, CompositionError> {
    require_marker(k, a)?;
    let w = composition_weights(h, a)?;
    let k_prime = k.with_weights(a, w.alpha_a.clone(), w.beta_a.clone())?;
    let ac = companion_label(k, a);
    let ka_prime = k
        .local_complement(a)?
        .rename_vertex(a, &ac)?
        .with_weights(&ac, Poly::zero(), w.beta_ac.clone())?;
    Ok(&expansion::q_expand(&k_prime)? + &expansion::q_expand(&ka_prime)?)
}

/// The four denominator-cleared equations tying the type sums to `q(H)`,
/// `q(H - a)`, `q(H^loop)` and `q(H^a - a)`.
pub fn type_sum_identities_hold(h: &WeightedGraph, a: &str) -> Result<bool, CompositionError> {
    let (q1, q2, q3) = type_sums(h, a)?;
    let q_h = expansion::q_expand(h)?;
    let q_minus = expansion::q_expand(&h.delete_vertex(a)?)?;
    let q_loop = expansion::q_expand(&h.with_loop(a, true)?)?;
    let q_lc = expansion::q_expand(&h.local_complement(a)?.delete_vertex(a)?)?;

    let x = Poly::x();
    let y = Poly::y();
    let xm1 = Poly::x_minus_one();
    let ym1 = Poly::y_minus_one();
    let mixed = &ym1 + &xm1.pow(2);

    let eq0 = q_minus == &(&q1 + &q2) + &q3;
    let eq1 = &ym1 * &q_h == &(&(&(&y * &ym1) * &q1) + &(&mixed * &q2)) + &(&(&x * &ym1) * &q3);
    let eq2 = &ym1 * &q_loop == &(&(&(&x * &ym1) * &q1) + &(&mixed * &q2)) + &(&(&y * &ym1) * &q3);
    let eq3 = &(&xm1 * &ym1) * &q_lc
        == &(&(&(&xm1 * &ym1) * &q1) + &(&xm1.pow(2) * &q2)) + &(&ym1.pow(2) * &q3);
    Ok(eq0 && eq1 && eq2 && eq3)
}

/// The three degenerate compositions that pin the weights:
/// compositions with a bare marker, a pendant edge, and a looped pendant.
pub fn weight_instance_identities_hold(
    h: &WeightedGraph,
    a: &str,
) -> Result<bool, CompositionError> {
    let w = composition_weights(h, a)?;
    let q_h = expansion::q_expand(h)?;
    let q_minus = expansion::q_expand(&h.delete_vertex(a)?)?;
    let q_loop = expansion::q_expand(&h.with_loop(a, true)?)?;

    let x = Poly::x();
    let y = Poly::y();
    let ym1 = Poly::y_minus_one();
    let mixed = &ym1 + &Poly::x_minus_one().pow(2);

    let eq1 = q_minus == &(&(&ym1 * &w.alpha_a) + &w.beta_a) + &w.beta_ac;
    let eq2 = q_h == &(&(&mixed * &w.alpha_a) + &(&y * &w.beta_a)) + &(&x * &w.beta_ac);
    let eq3 = q_loop == &(&(&mixed * &w.alpha_a) + &(&x * &w.beta_a)) + &(&y * &w.beta_ac);
    Ok(eq1 && eq2 && eq3)
}

/// For simple `H`, the division formulas in cleared form:
/// `((x-1)^2 - (y-1)^2) alpha(a) = q(H) - y q(H-a)` and
/// `((x-1)^2 - (y-1)^2) beta(a) = ((x-1)^2 + y - 1) q(H-a) - (y-1) q(H)`.
pub fn simple_graph_cleared_weights_hold(
    h: &WeightedGraph,
    a: &str,
) -> Result<bool, CompositionError> {
    let w = composition_weights(h, a)?;
    let q_h = expansion::q_expand(h)?;
    let q_minus = expansion::q_expand(&h.delete_vertex(a)?)?;
    let denom = &Poly::x_minus_one().pow(2) - &Poly::y_minus_one().pow(2);
    let mixed = &Poly::y_minus_one() + &Poly::x_minus_one().pow(2);

    let eq_alpha = &denom * &w.alpha_a == &q_h - &(&Poly::y() * &q_minus);
    let eq_beta =
        &denom * &w.beta_a == &(&mixed * &q_minus) - &(&Poly::y_minus_one() * &q_h);
    Ok(eq_alpha && eq_beta)
}

/// Weight additivity at a single vertex: summing the weight pairs of two
/// otherwise identical graphs sums their polynomials.
pub fn weight_additivity_holds(
    g: &WeightedGraph,
    a: &str,
    first: (&Poly, &Poly),
    second: (&Poly, &Poly),
) -> Result<bool, CompositionError> {
    let g1 = g.with_weights(a, first.0.clone(), first.1.clone())?;
    let g2 = g.with_weights(a, second.0.clone(), second.1.clone())?;
    let sum = g.with_weights(a, first.0 + second.0, first.1 + second.1)?;
    Ok(&expansion::q_expand(&g1)? + &expansion::q_expand(&g2)? == expansion::q_expand(&sum)?)
}
