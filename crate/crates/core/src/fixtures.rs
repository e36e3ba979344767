//! Small named graphs used throughout the tests and the documentation.

use crate::graph::Digraph;

/// Three vertices and a sink with edges `(1,2)x3, (1,3)x2, (2,3), (2,s),
/// (3,1), (3,2)`; a single strongly connected component.
pub fn g_star() -> Digraph {
    Digraph::new(4, 4, [(1, 2, 3), (1, 3, 2), (2, 3, 1), (2, 4, 1), (3, 1, 1), (3, 2, 1)])
        .expect("valid graph")
}

/// Reduced Laplacian `[[7,-6,0],[-1,4,-3],[0,0,2]]`: components `{1,2}`
/// at level 0 and `{3}` at level 1.
pub fn g1() -> Digraph {
    Digraph::new(4, 4, [(1, 2, 6), (1, 4, 1), (2, 1, 1), (2, 3, 3), (3, 4, 2)]).expect("valid graph")
}

/// One vertex with `k` parallel edges to the sink.
pub fn single(k: u64) -> Digraph {
    Digraph::new(2, 2, [(1, 2, k)]).expect("valid graph")
}
