//! Exact computation of the vertex-weighted interlace polynomials `q`,
//! `q_N` and `q_R` of looped graphs, by four independent methods that
//! cross-validate one another:
//!
//! * subset expansion over all induced subgraphs (the ground-truth oracle),
//! * binary recursion with computation-tree recording,
//! * pendant-twin reduction to edgeless graphs where possible,
//! * composition and tree closed forms.
//!
//! All arithmetic is exact, over `Z[x, y, weight indeterminates]`.

mod parser;

pub mod composition;
pub mod expansion;
pub mod gf2;
pub mod graph;
pub mod instances;
pub mod poly;
pub mod recursion;
pub mod reduction;
pub mod trees;

pub use graph::{GraphError, RankNullity, WeightedGraph};
pub use poly::{Monomial, Poly, PolyError, VarName};
pub use recursion::{ComputationTree, NodeKind, RecursionOptions, Strategy};
pub use reduction::{ReductionKind, ReductionStep, ReductionTrace};
pub use trees::OrderedRootedTree;

// Values are immutable and freely shareable across threads.
const _: () = {
    const fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<Poly>();
    assert_send_sync::<WeightedGraph>();
    assert_send_sync::<ComputationTree>();
    assert_send_sync::<OrderedRootedTree>();
};
