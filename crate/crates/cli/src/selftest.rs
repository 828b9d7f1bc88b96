//! The selftest harness: runs every module's invariant suite exhaustively
//! on small graphs and on seeded random instances, printing one summary
//! line per suite. Any violation prints a reproducer graph file and makes
//! the process exit with code 4.

use crate::graphfile;
use crate::CliError;
use clap::Args;
use interlace_core::composition;
use interlace_core::expansion::{self, q_expand};
use interlace_core::gf2;
use interlace_core::instances;
use interlace_core::poly::{Monomial, Poly, VarName};
use interlace_core::recursion::{self, RecursionOptions, Strategy};
use interlace_core::reduction::{self, ReductionKind};
use interlace_core::trees;
use interlace_core::WeightedGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Largest random instance size (exhaustive sweeps stop at 4).
    #[arg(long, default_value_t = 7)]
    pub max_n: usize,
    /// Number of random instances per suite.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Seed for the deterministic generators.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Deliberately corrupt an operation to exercise the failure path.
    #[arg(long, hide = true)]
    pub inject_fault: Option<String>,
}

struct Failure {
    message: String,
    reproducer: Option<String>,
}

type SuiteOutcome = Result<usize, Failure>;

fn fail_graph(message: impl Into<String>, g: &WeightedGraph) -> Failure {
    Failure {
        message: message.into(),
        reproducer: Some(graphfile::serialize_graph(g, None, &[])),
    }
}

fn fail_text(message: impl Into<String>) -> Failure {
    Failure {
        message: message.into(),
        reproducer: None,
    }
}

pub fn run(args: &SelftestArgs) -> Result<(), CliError> {
    let fault_pivot = match args.inject_fault.as_deref() {
        None => false,
        Some("pivot") => true,
        Some(other) => {
            return Err(CliError::Usage(format!(
                "unknown fault injection target `{other}` (supported: pivot)"
            )))
        }
    };
    let rng = |salt: u64| ChaCha8Rng::seed_from_u64(args.seed.wrapping_mul(0x9e37).wrapping_add(salt));
    let exhaustive_n = args.max_n.min(4);

    let finish = |name: &str, outcome: SuiteOutcome| -> Result<(), CliError> {
        match outcome {
            Ok(checks) => {
                println!("suite {name}: ok ({checks} checks)");
                Ok(())
            }
            Err(f) => {
                println!("suite {name}: FAILED");
                eprintln!("suite {name}: {}", f.message);
                if let Some(repro) = &f.reproducer {
                    eprintln!("reproducer (graph file):\n{repro}");
                }
                Err(CliError::Invariant(format!("suite {name}: {}", f.message)))
            }
        }
    };

    finish("poly-ring", suite_poly_ring(&mut rng(1), args.samples))?;
    finish("gf2-rank", suite_gf2(&mut rng(2), args.samples))?;
    finish(
        "graph-ops",
        suite_graph_ops(&mut rng(3), exhaustive_n, args.max_n, args.samples, fault_pivot),
    )?;
    finish(
        "expansion",
        suite_expansion(&mut rng(4), exhaustive_n, args.max_n, args.samples),
    )?;
    finish(
        "recursion-oracle",
        suite_recursion(&mut rng(5), exhaustive_n, args.max_n, args.samples),
    )?;
    finish("identities", suite_identities(&mut rng(6), args.max_n, args.samples))?;
    finish("reductions", suite_reductions(&mut rng(7), args.max_n, args.samples))?;
    finish("composition", suite_composition(&mut rng(8), args.samples))?;
    finish("trees", suite_trees(&mut rng(9), args.samples))?;
    finish(
        "leaf-bounds",
        suite_leaf_bounds(&mut rng(10), exhaustive_n, args.max_n, args.samples),
    )?;
    finish(
        "characterizations",
        suite_characterizations(&mut rng(11), exhaustive_n, args.max_n, args.samples),
    )?;
    Ok(())
}

fn random_poly(rng: &mut ChaCha8Rng) -> Poly {
    let vars = ["x", "y", "a", "b"];
    let terms = rng.gen_range(0..=4usize);
    Poly::from_terms((0..terms).map(|_| {
        let mut m = Monomial::unit();
        for v in vars {
            if rng.gen_bool(0.4) {
                m = m.mul(&Monomial::var(VarName::new(v).unwrap(), rng.gen_range(1..=3)));
            }
        }
        (m, rng.gen_range(-9i64..=9).into())
    }))
}

fn suite_poly_ring(rng: &mut ChaCha8Rng, samples: usize) -> SuiteOutcome {
    let mut checks = 0;
    for _ in 0..samples.max(20) {
        let p = random_poly(rng);
        let q = random_poly(rng);
        let r = random_poly(rng);
        let ok = (&p + &q == &q + &p)
            && (&p * &q == &q * &p)
            && (&(&p + &q) + &r == &p + &(&q + &r))
            && (&(&p * &q) * &r == &p * &(&q * &r))
            && (&p * &(&q + &r) == &(&p * &q) + &(&p * &r))
            && (&p + &Poly::zero() == p)
            && (&p * &Poly::one() == p);
        if !ok {
            return Err(fail_text(format!(
                "ring axiom violated for p={p}, q={q}, r={r}"
            )));
        }
        if Poly::parse(&p.canonical_string()).ok() != Some(p.clone()) {
            return Err(fail_text(format!("canonical round-trip failed for {p}")));
        }
        if !q.is_zero() {
            let prod = &p * &q;
            if prod.exact_div(&q).ok() != Some(p.clone()) {
                return Err(fail_text(format!("exact division failed for ({p}) * ({q})")));
            }
        }
        checks += 1;
    }
    Ok(checks)
}

fn suite_gf2(rng: &mut ChaCha8Rng, samples: usize) -> SuiteOutcome {
    let mut checks = 0;
    for _ in 0..samples.max(100) {
        let n = rng.gen_range(0..=12usize);
        let mut rows = vec![0u64; n];
        for i in 0..n {
            for j in i..n {
                if rng.gen_bool(0.5) {
                    rows[i] |= 1 << j;
                    rows[j] |= 1 << i;
                }
            }
        }
        if gf2::rank_greedy(&rows) != gf2::rank_row_reduce(&rows) {
            return Err(fail_text(format!("rank routines disagree on rows {rows:?}")));
        }
        checks += 1;
    }
    Ok(checks)
}

fn pivot_for_test(
    g: &WeightedGraph,
    a: &str,
    b: &str,
    fault: bool,
) -> Result<WeightedGraph, interlace_core::GraphError> {
    let p = g.pivot(a, b)?;
    if fault {
        // Deliberate corruption used to exercise the failure reporting.
        p.with_loop(a, true)
    } else {
        Ok(p)
    }
}

fn suite_graph_ops(
    rng: &mut ChaCha8Rng,
    exhaustive_n: usize,
    max_n: usize,
    samples: usize,
    fault_pivot: bool,
) -> SuiteOutcome {
    let mut checks = 0;
    let mut graphs = Vec::new();
    for n in 0..=exhaustive_n.min(3) {
        graphs.extend(instances::all_graphs(n));
    }
    for _ in 0..samples {
        let n = rng.gen_range(1..=max_n.clamp(1, 8));
        graphs.push(instances::random_graph(rng, n, true));
    }
    for g in &graphs {
        if &g.complement().complement() != g {
            return Err(fail_graph("complement is not an involution", g));
        }
        for v in g.labels() {
            let twice = g.local_complement(v).unwrap().local_complement(v).unwrap();
            if &twice != g {
                return Err(fail_graph(
                    format!("local complementation at `{v}` is not an involution"),
                    g,
                ));
            }
        }
        for i in 0..g.vertex_count() {
            for j in (i + 1)..g.vertex_count() {
                let (a, b) = (g.label(i).to_string(), g.label(j).to_string());
                let once = pivot_for_test(g, &a, &b, fault_pivot).unwrap();
                let twice = pivot_for_test(&once, &a, &b, fault_pivot).unwrap();
                if &twice != g {
                    return Err(fail_graph(
                        format!("pivot on `{a}`,`{b}` is not an involution"),
                        g,
                    ));
                }
            }
        }
        if g.vertex_count() > 0 {
            let mask = rng.gen_range(0..(1u64 << g.vertex_count()));
            let rn = g.rank_nullity_mask(mask);
            if rn.rank + rn.nullity != mask.count_ones() as usize {
                return Err(fail_graph("rank + nullity != |S|", g));
            }
            let rows: Vec<u64> = (0..g.vertex_count())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| (g.neighbors_mask(i) & mask) | (g.looped_mask() & mask & (1 << i)))
                .collect();
            if rn.rank != gf2::rank_row_reduce(&rows) {
                return Err(fail_graph("rank disagrees with row reduction", g));
            }
        }
        checks += 1;
    }
    Ok(checks)
}

fn suite_expansion(
    rng: &mut ChaCha8Rng,
    exhaustive_n: usize,
    max_n: usize,
    samples: usize,
) -> SuiteOutcome {
    let mut checks = 0;
    for n in 0..=exhaustive_n.min(3) {
        for g in instances::all_graphs(n) {
            if !expansion::specialization_holds(&g).unwrap() {
                return Err(fail_graph("specialization x=2 / y=2 failed", &g));
            }
            if !expansion::qn_unweighted_nonnegative(&g).unwrap() {
                return Err(fail_graph("negative coefficient in unweighted q_N", &g));
            }
            checks += 1;
        }
    }
    for _ in 0..samples {
        let n = rng.gen_range(1..=max_n.clamp(1, 6));
        let g = instances::random_graph(rng, n, true);
        if !expansion::specialization_holds(&g).unwrap() {
            return Err(fail_graph("specialization failed", &g));
        }
        let a = g.label(rng.gen_range(0..n)).to_string();
        let r1 = instances::random_weight(rng, "r1");
        let r2 = instances::random_weight(rng, "r2");
        if !expansion::linear_reweight_holds(&g, &a, &r1, &r2).unwrap() {
            return Err(fail_graph(
                format!("linear reweighting failed at `{a}` with r1={r1}, r2={r2}"),
                &g,
            ));
        }
        if n <= 5 && !expansion::qn_substitution_equivalence_holds(&g).unwrap() {
            return Err(fail_graph("q <-> q_N substitution equivalence failed", &g));
        }
        let m = rng.gen_range(1..=3);
        let mut other = instances::random_graph(rng, m, true);
        for i in 0..m {
            let old = other.label(i).to_string();
            other = other.rename_vertex(&old, &format!("w{i}")).unwrap();
        }
        if !expansion::multiplicativity_holds(&g, &other).unwrap() {
            return Err(fail_graph("disjoint-union multiplicativity failed", &g));
        }
        checks += 1;
    }
    Ok(checks)
}

fn recursion_options_grid() -> Vec<RecursionOptions> {
    let mut out = Vec::new();
    for ternary in [false, true] {
        for leaf_bound in [false, true] {
            out.push(RecursionOptions {
                ternary,
                leaf_bound_mode: leaf_bound,
                record_tree: true,
                ..Default::default()
            });
        }
    }
    out
}

fn check_recursion_routes(g: &WeightedGraph) -> Result<(), Failure> {
    let oracle = q_expand(g).unwrap();
    for strategy in [Strategy::FirstVertex, Strategy::ReduceFirst] {
        for options in recursion_options_grid() {
            let out = recursion::q_recursive(g, &strategy, &options).unwrap();
            if out.poly != oracle {
                return Err(fail_graph(
                    format!(
                        "recursion ({}, ternary={}, leaf-bound-mode={}) disagrees with expansion:\n  recursion: {}\n  expansion: {}",
                        strategy.name(),
                        options.ternary,
                        options.leaf_bound_mode,
                        out.poly.canonical_string(),
                        oracle.canonical_string()
                    ),
                    g,
                ));
            }
            let tree = out.tree.unwrap();
            if tree.evaluate() != oracle {
                return Err(fail_graph("computation tree re-evaluation mismatch", g));
            }
        }
    }
    Ok(())
}

fn suite_recursion(
    rng: &mut ChaCha8Rng,
    exhaustive_n: usize,
    max_n: usize,
    samples: usize,
) -> SuiteOutcome {
    let mut checks = 0;
    for n in 0..=exhaustive_n {
        for g in instances::all_graphs(n) {
            check_recursion_routes(&g)?;
            checks += 1;
        }
    }
    if max_n >= 5 {
        for _ in 0..samples {
            let n = rng.gen_range(5..=max_n.min(9));
            let g = instances::random_graph(rng, n, true);
            check_recursion_routes(&g)?;
            checks += 1;
        }
    }
    Ok(checks)
}

fn suite_identities(rng: &mut ChaCha8Rng, max_n: usize, samples: usize) -> SuiteOutcome {
    let mut checks = 0;
    let mut attempts = 0;
    while checks < samples && attempts < samples * 20 {
        attempts += 1;
        let n = rng.gen_range(2..=max_n.clamp(2, 6));
        let g = instances::random_graph(rng, n, true);
        let a = g.label(rng.gen_range(0..n)).to_string();
        if !g.is_looped(&a).unwrap() && !recursion::lc_deletion_identity_holds(&g, &a).unwrap() {
            return Err(fail_graph(
                format!("local-complement deletion identity failed at `{a}`"),
                &g,
            ));
        }
        let mut pair = None;
        for (u, v) in g.edges() {
            if !g.is_looped(u).unwrap() && !g.is_looped(v).unwrap() {
                pair = Some((u.to_string(), v.to_string()));
                break;
            }
        }
        if let Some((u, v)) = pair {
            if !recursion::pivot_deletion_identity_holds(&g, &u, &v).unwrap() {
                return Err(fail_graph(
                    format!("pivot deletion identity failed at `{u}`,`{v}`"),
                    &g,
                ));
            }
            if !recursion::pivot_reweight_identity_check(&g, &u, &v).unwrap() {
                return Err(fail_graph(
                    format!("pivot reweighting identity failed at `{u}`,`{v}`"),
                    &g,
                ));
            }
        }
        checks += 1;
    }
    Ok(checks)
}

fn plant_twins(
    rng: &mut ChaCha8Rng,
    kind: ReductionKind,
    extra: usize,
) -> (WeightedGraph, Vec<String>) {
    let base = rng.gen_range(2..=4);
    let mut g = instances::random_graph(rng, base, true);
    let target = g.label(rng.gen_range(0..base)).to_string();
    let mut group = vec![target.clone()];
    for t in 0..extra {
        let new = format!("t{t}");
        let looped = g.is_looped(&target).unwrap();
        let outside: Vec<String> = g
            .neighbors(&target)
            .unwrap()
            .iter()
            .filter(|s| !group.contains(&s.to_string()))
            .map(|s| s.to_string())
            .collect();
        match kind {
            ReductionKind::Pendant => {
                g.add_vertex(&new, false).unwrap();
                g.add_edge(&new, &target).unwrap();
            }
            ReductionKind::IdenticalTwin => {
                g.add_vertex(&new, looped).unwrap();
                for nb in &outside {
                    g.add_edge(&new, nb).unwrap();
                }
                if looped {
                    for member in &group {
                        g.add_edge(&new, member).unwrap();
                    }
                }
            }
            ReductionKind::FraternalTwin => {
                g.add_vertex(&new, looped).unwrap();
                for nb in &outside {
                    g.add_edge(&new, nb).unwrap();
                }
                if !looped {
                    for member in &group {
                        g.add_edge(&new, member).unwrap();
                    }
                }
            }
        }
        let alpha = instances::random_weight(rng, &format!("ta{t}"));
        let beta = instances::random_weight(rng, &format!("tb{t}"));
        g = g.with_weights(&new, alpha, beta).unwrap();
        group.push(new);
    }
    (g, group)
}

fn suite_reductions(rng: &mut ChaCha8Rng, max_n: usize, samples: usize) -> SuiteOutcome {
    let mut checks = 0;
    let per_kind = (samples / 3).max(10);
    for kind in [
        ReductionKind::Pendant,
        ReductionKind::IdenticalTwin,
        ReductionKind::FraternalTwin,
    ] {
        for _ in 0..per_kind {
            let extra = if kind == ReductionKind::Pendant {
                1
            } else {
                rng.gen_range(1..=3)
            };
            let (g, group) = plant_twins(rng, kind, extra);
            let refs: Vec<&str> = group.iter().map(String::as_str).collect();
            let reduced = match kind {
                ReductionKind::Pendant => reduction::pendant_reduce(&g, &group[0], &group[1]),
                ReductionKind::IdenticalTwin => reduction::identical_twin_reduce(&g, &refs),
                ReductionKind::FraternalTwin => reduction::fraternal_twin_reduce(&g, &refs),
            }
            .unwrap();
            if q_expand(&reduced).unwrap() != q_expand(&g).unwrap() {
                return Err(fail_graph(
                    format!("{} reduction changed q (group {})", kind.name(), group.join(",")),
                    &g,
                ));
            }
            checks += 1;
        }
    }
    // Value confluence under randomized scan order.
    for _ in 0..(samples / 8).max(5) {
        let g = instances::random_dh_graph(rng, 8.min(max_n.max(2)), true);
        let oracle = q_expand(&g).unwrap();
        let mut current = g.clone();
        loop {
            let steps = reduction::all_reductions(&current, true);
            if steps.is_empty() {
                break;
            }
            let step = &steps[rng.gen_range(0..steps.len())];
            current = reduction::apply_step(&current, step).unwrap();
        }
        if q_expand(&current).unwrap() != oracle {
            return Err(fail_graph("randomized reduction order changed q", &g));
        }
        checks += 1;
    }
    // Full reduction of pendant-twin-grown graphs and trees.
    for _ in 0..(samples / 8).max(5) {
        let n = rng.gen_range(2..=25);
        let g = instances::random_dh_graph(rng, n, n <= 10);
        let trace = reduction::reduce_fully(&g);
        if trace.terminal.has_nonloop_edges() {
            return Err(fail_graph("pendant-twin-grown graph did not fully reduce", &g));
        }
        if n <= 10 && trace.closed_form_q().unwrap() != q_expand(&g).unwrap() {
            return Err(fail_graph("closed form disagrees with expansion", &g));
        }
        let tn = rng.gen_range(1..=10);
        let t = instances::random_tree(rng, tn, true);
        let trace = reduction::reduce_fully(t.graph());
        if trace.terminal.has_nonloop_edges() {
            return Err(fail_graph("tree did not fully reduce", t.graph()));
        }
        if trace.closed_form_q().unwrap() != q_expand(t.graph()).unwrap() {
            return Err(fail_graph("tree closed form disagrees with expansion", t.graph()));
        }
        checks += 1;
    }
    Ok(checks)
}

fn suite_composition(rng: &mut ChaCha8Rng, samples: usize) -> SuiteOutcome {
    let mut checks = 0;
    for _ in 0..(samples / 4).max(10) {
        let allow_loops = rng.gen_bool(0.5);
        let body = rng.gen_range(1..=4);
        let mut h = instances::random_graph(rng, body, true);
        if !allow_loops {
            for i in 0..body {
                let label = h.label(i).to_string();
                h = h.with_loop(&label, false).unwrap();
            }
        }
        h.add_vertex("a", false).unwrap();
        let wired = rng.gen_range(1..=body);
        for i in 0..wired {
            h.add_edge("a", &format!("v{i}")).unwrap();
        }
        let kbody = rng.gen_range(0..=3);
        let mut k = WeightedGraph::new();
        k.add_vertex("a", false).unwrap();
        for i in 0..kbody {
            k.add_vertex(&format!("k{i}"), rng.gen_bool(0.3)).unwrap();
            if rng.gen_bool(0.5) {
                k.add_edge("a", &format!("k{i}")).unwrap();
            }
            for j in 0..i {
                if rng.gen_bool(0.5) {
                    k.add_edge(&format!("k{j}"), &format!("k{i}")).unwrap();
                }
            }
        }
        let direct = q_expand(&composition::compose(&h, &k, "a").unwrap()).unwrap();
        let via_weights = composition::q_composed(&h, "a", &k).unwrap();
        if via_weights != direct {
            return Err(fail_graph("composition re-weighting disagrees with expansion", &h));
        }
        if !composition::type_sum_identities_hold(&h, "a").unwrap() {
            return Err(fail_graph("type-sum identities failed", &h));
        }
        if !composition::weight_instance_identities_hold(&h, "a").unwrap() {
            return Err(fail_graph("weight instance identities failed", &h));
        }
        if !allow_loops {
            let w = composition::composition_weights(&h, "a").unwrap();
            if !w.beta_ac.is_zero() {
                return Err(fail_graph("beta(a_c) nonzero without looped neighbors", &h));
            }
            if !composition::simple_graph_cleared_weights_hold(&h, "a").unwrap() {
                return Err(fail_graph("cleared simple-graph weight formulas failed", &h));
            }
        }
        let g = instances::random_graph(rng, 3, true);
        let a = g.label(rng.gen_range(0..3)).to_string();
        let w1 = (instances::random_weight(rng, "p1"), instances::random_weight(rng, "p2"));
        let w2 = (instances::random_weight(rng, "p3"), instances::random_weight(rng, "p4"));
        if !composition::weight_additivity_holds(&g, &a, (&w1.0, &w1.1), (&w2.0, &w2.1)).unwrap() {
            return Err(fail_graph("weight additivity failed", &g));
        }
        checks += 1;
    }
    Ok(checks)
}

fn suite_trees(rng: &mut ChaCha8Rng, samples: usize) -> SuiteOutcome {
    let mut checks = 0;
    for _ in 0..(samples / 2).max(10) {
        let n = rng.gen_range(1..=9);
        let t = instances::random_tree(rng, n, true);
        let oracle = q_expand(t.graph()).unwrap();
        if trees::q_tree(&t).unwrap() != oracle {
            return Err(fail_graph("cover closed form disagrees with expansion", t.graph()));
        }
        let rec = recursion::q_recursive(
            t.graph(),
            &Strategy::Tree(t.tree_order()),
            &RecursionOptions::default(),
        )
        .unwrap();
        if rec.poly != oracle {
            return Err(fail_graph("tree-strategy recursion disagrees", t.graph()));
        }
        let unweighted = trees::OrderedRootedTree::new(
            t.graph().unweighted(),
            t.root(),
            &t.graph()
                .labels()
                .iter()
                .map(|v| (v.clone(), t.children_of(v).to_vec()))
                .filter(|(_, kids)| !kids.is_empty())
                .collect::<Vec<_>>(),
        )
        .unwrap();
        if trees::q_tree_unweighted(&t) != trees::q_tree(&unweighted).unwrap() {
            return Err(fail_graph("unweighted cover formula disagrees", t.graph()));
        }
        for leaf in trees::eligible_lemma_leaves(&t) {
            if !trees::lemma_recur_holds(&t, &leaf).unwrap() {
                return Err(fail_graph(
                    format!("cover recursion set equality failed at `{leaf}`"),
                    t.graph(),
                ));
            }
        }
        if !trees::verify_tree_strategy_bijection(&t).unwrap() {
            return Err(fail_graph("strategy leaves do not biject with covers", t.graph()));
        }
        checks += 1;
    }
    Ok(checks)
}

fn suite_leaf_bounds(
    rng: &mut ChaCha8Rng,
    exhaustive_n: usize,
    max_n: usize,
    samples: usize,
) -> SuiteOutcome {
    let mut checks = 0;
    for n in 0..=exhaustive_n {
        for g in instances::all_graphs(n) {
            let report = recursion::check_leaf_bounds(&g).unwrap();
            if !report.satisfied {
                return Err(fail_graph(
                    format!("leaf-count bound violated: {report:?}"),
                    &g,
                ));
            }
            checks += 1;
        }
    }
    if max_n >= 5 {
        for _ in 0..samples.min(100) {
            let n = rng.gen_range(5..=max_n.min(7));
            let g = instances::random_graph(rng, n, false);
            let report = recursion::check_leaf_bounds(&g).unwrap();
            if !report.satisfied {
                return Err(fail_graph(
                    format!("leaf-count bound violated: {report:?}"),
                    &g,
                ));
            }
            checks += 1;
        }
    }
    Ok(checks)
}

fn suite_characterizations(
    rng: &mut ChaCha8Rng,
    exhaustive_n: usize,
    max_n: usize,
    samples: usize,
) -> SuiteOutcome {
    let mut checks = 0;
    for n in 0..=exhaustive_n {
        for g in instances::all_graphs(n) {
            if !expansion::epsilon_characterization_holds(&g).unwrap() {
                return Err(fail_graph("epsilon > 0 characterization failed", &g));
            }
            if !expansion::epsilon_exceeds_one_on_connected_loopy(&g).unwrap() {
                return Err(fail_graph("epsilon > 1 on connected loopy graph failed", &g));
            }
            if !expansion::simplicity_test(&g).unwrap().verdicts_agree() {
                return Err(fail_graph("simplicity verdicts disagree", &g));
            }
            checks += 1;
        }
    }
    if max_n >= 5 {
        for _ in 0..samples.min(100) {
            let n = rng.gen_range(5..=max_n.min(7));
            let g = instances::random_graph(rng, n, false);
            if !expansion::epsilon_characterization_holds(&g).unwrap() {
                return Err(fail_graph("epsilon > 0 characterization failed", &g));
            }
            if !expansion::simplicity_test(&g).unwrap().verdicts_agree() {
                return Err(fail_graph("simplicity verdicts disagree", &g));
            }
            let c = instances::random_connected_loopy_graph(rng, n);
            if expansion::epsilon(&c).unwrap() <= 1 {
                return Err(fail_graph("epsilon <= 1 on a connected loopy graph", &c));
            }
            checks += 1;
        }
    }
    Ok(checks)
}
