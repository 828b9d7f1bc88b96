//! Deterministic seeded instance generators shared by the test suites, the
//! selftest harness and the benchmarks.
//!
//! Weights are drawn from `{0, 1, 2, x, y, x-1, y-1, symbolic}` — zero
//! weights included on purpose, since the two-weight design must tolerate
//! them everywhere.

use crate::graph::WeightedGraph;
use crate::poly::{Poly, VarName};
use crate::trees::OrderedRootedTree;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

pub fn edgeless(n: usize) -> WeightedGraph {
    let mut g = WeightedGraph::new();
    for label in labels(n) {
        g.add_vertex(&label, false).unwrap();
    }
    g
}

pub fn path(n: usize) -> WeightedGraph {
    let mut g = edgeless(n);
    for i in 1..n {
        g.add_edge(&format!("v{}", i - 1), &format!("v{i}")).unwrap();
    }
    g
}

pub fn cycle(n: usize) -> WeightedGraph {
    let mut g = path(n);
    if n >= 3 {
        g.add_edge(&format!("v{}", n - 1), "v0").unwrap();
    }
    g
}

/// Every unweighted graph on `n` labeled vertices: all `2^(n(n+1)/2)`
/// combinations of loop flags and edges. Keep `n` small.
pub fn all_graphs(n: usize) -> Vec<WeightedGraph> {
    let names = labels(n);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::with_capacity(1usize << (n + pairs.len()));
    for loop_mask in 0u64..(1 << n) {
        for edge_mask in 0u64..(1 << pairs.len()) {
            let mut g = WeightedGraph::new();
            for (i, label) in names.iter().enumerate() {
                g.add_vertex(label, loop_mask >> i & 1 == 1).unwrap();
            }
            for (k, &(i, j)) in pairs.iter().enumerate() {
                if edge_mask >> k & 1 == 1 {
                    g.add_edge(&names[i], &names[j]).unwrap();
                }
            }
            out.push(g);
        }
    }
    out
}

pub fn random_weight(rng: &mut impl Rng, symbol: &str) -> Poly {
    match rng.gen_range(0..8u32) {
        0 => Poly::zero(),
        1 => Poly::one(),
        2 => Poly::constant(2),
        3 => Poly::x(),
        4 => Poly::y(),
        5 => Poly::x_minus_one(),
        6 => Poly::y_minus_one(),
        _ => Poly::from_var(VarName::new(symbol).unwrap()),
    }
}

fn randomize_weights(g: WeightedGraph, rng: &mut impl Rng) -> WeightedGraph {
    let mut out = g;
    for i in 0..out.vertex_count() {
        let label = out.label(i).to_string();
        let alpha = random_weight(rng, &format!("a{i}"));
        let beta = random_weight(rng, &format!("b{i}"));
        out = out.with_weights(&label, alpha, beta).unwrap();
    }
    out
}

/// Erdos-Renyi: edge probability 1/2, loop probability 3/10.
pub fn random_graph(rng: &mut impl Rng, n: usize, weighted: bool) -> WeightedGraph {
    let names = labels(n);
    let mut g = WeightedGraph::new();
    for label in &names {
        g.add_vertex(label, rng.gen_bool(0.3)).unwrap();
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(0.5) {
                g.add_edge(&names[i], &names[j]).unwrap();
            }
        }
    }
    if weighted {
        g = randomize_weights(g, rng);
    }
    g
}

/// Connected, with at least one loop: a random spanning tree plus extra
/// edges and loops. Unweighted.
pub fn random_connected_loopy_graph(rng: &mut impl Rng, n: usize) -> WeightedGraph {
    assert!(n >= 1);
    let names = labels(n);
    let mut g = WeightedGraph::new();
    let mut loops = vec![false; n];
    let mut any = false;
    for l in &mut loops {
        *l = rng.gen_bool(0.3);
        any |= *l;
    }
    if !any {
        loops[rng.gen_range(0..n)] = true;
    }
    for (label, &looped) in names.iter().zip(&loops) {
        g.add_vertex(label, looped).unwrap();
    }
    for i in 1..n {
        let p = rng.gen_range(0..i);
        g.add_edge(&names[p], &names[i]).unwrap();
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(0.25) {
                g.add_edge(&names[i], &names[j]).unwrap();
            }
        }
    }
    g
}

/// Random ordered tree rooted at `v0`: each vertex attaches to a random
/// earlier one, sibling orders shuffled.
pub fn random_tree(rng: &mut impl Rng, n: usize, weighted: bool) -> OrderedRootedTree {
    assert!(n >= 1);
    let names = labels(n);
    let mut g = WeightedGraph::new();
    for label in &names {
        g.add_vertex(label, false).unwrap();
    }
    let mut children: Vec<Vec<String>> = vec![Vec::new(); n];
    for i in 1..n {
        let p = rng.gen_range(0..i);
        g.add_edge(&names[p], &names[i]).unwrap();
        children[p].push(names[i].clone());
    }
    if weighted {
        g = randomize_weights(g, rng);
    }
    let mut orders = Vec::new();
    for (p, kids) in children.iter_mut().enumerate() {
        if kids.len() > 1 {
            kids.shuffle(rng);
        }
        if !kids.is_empty() {
            orders.push((names[p].clone(), kids.clone()));
        }
    }
    OrderedRootedTree::new(g, "v0", &orders).unwrap()
}

/// Distance-hereditary-style: grown from a seed vertex by pendant,
/// identical-twin and fraternal-twin additions, so the whole thing reduces
/// back to a single vertex.
pub fn random_dh_graph(rng: &mut impl Rng, n: usize, weighted: bool) -> WeightedGraph {
    assert!(n >= 1);
    let names = labels(n);
    let mut g = WeightedGraph::new();
    g.add_vertex(&names[0], rng.gen_bool(0.3)).unwrap();
    for i in 1..n {
        let target = names[rng.gen_range(0..i)].clone();
        let new = &names[i];
        match rng.gen_range(0..3u32) {
            // Unlooped pendant on the target.
            0 => {
                g.add_vertex(new, false).unwrap();
                g.add_edge(new, &target).unwrap();
            }
            // Identical twin: same loop flag, same outside neighbors,
            // adjacent exactly when looped.
            1 => {
                let looped = g.is_looped(&target).unwrap();
                let outside: Vec<String> =
                    g.neighbors(&target).unwrap().iter().map(|s| s.to_string()).collect();
                g.add_vertex(new, looped).unwrap();
                for nb in outside {
                    g.add_edge(new, &nb).unwrap();
                }
                if looped {
                    g.add_edge(new, &target).unwrap();
                }
            }
            // Fraternal twin: same loop flag, same outside neighbors,
            // adjacent exactly when unlooped.
            _ => {
                let looped = g.is_looped(&target).unwrap();
                let outside: Vec<String> =
                    g.neighbors(&target).unwrap().iter().map(|s| s.to_string()).collect();
                g.add_vertex(new, looped).unwrap();
                for nb in outside {
                    g.add_edge(new, &nb).unwrap();
                }
                if !looped {
                    g.add_edge(new, &target).unwrap();
                }
            }
        }
    }
    if weighted {
        g = randomize_weights(g, rng);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exhaustive_count() {
        assert_eq!(all_graphs(0).len(), 1);
        assert_eq!(all_graphs(2).len(), 8);
        assert_eq!(all_graphs(4).len(), 1024);
    }

    #[test]
    fn generators_are_deterministic() {
        let g1 = random_graph(&mut ChaCha8Rng::seed_from_u64(5), 7, true);
        let g2 = random_graph(&mut ChaCha8Rng::seed_from_u64(5), 7, true);
        assert_eq!(g1, g2);
    }

    #[test]
    fn dh_graphs_have_twin_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let g = random_dh_graph(&mut rng, 10, false);
            assert!(reduction::find_reduction(&g).is_some());
        }
    }

    #[test]
    fn random_trees_are_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=9 {
            let t = random_tree(&mut rng, n, true);
            assert_eq!(t.graph().vertex_count(), n);
            assert_eq!(t.root(), "v0");
        }
    }
}
