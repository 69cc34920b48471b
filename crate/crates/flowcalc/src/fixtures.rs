//! Small reference systems shared by the tests, the guide, and the CLI's
//! built-in pipelines.

use std::collections::BTreeMap;

use crate::block_code::SlidingBlockCode;
use crate::flow_code::{substitution_code, WordBlockCode};
use crate::graph::DirectedGraph;
use crate::section::{CrossSection, ReturnSystem};
use crate::shift::EdgeShift;
use crate::word::Word;

/// One vertex, two loops `a`, `b`.
pub fn full_2_shift() -> EdgeShift {
    let mut g = DirectedGraph::new();
    let u = g.add_vertex("u");
    g.add_labeled_edge("a", u, u);
    g.add_labeled_edge("b", u, u);
    EdgeShift::new(g).unwrap()
}

/// One vertex, three loops `a`, `b`, `c`.
pub fn full_3_shift() -> EdgeShift {
    let mut g = DirectedGraph::new();
    let u = g.add_vertex("u");
    for l in ["a", "b", "c"] {
        g.add_labeled_edge(l, u, u);
    }
    EdgeShift::new(g).unwrap()
}

/// The golden-mean shift presented on two vertices: `a: u -> v`,
/// `b: u -> u`, `a': v -> u`, adjacency [[1,1],[1,0]]. The edge order
/// matches what symbol expansion of the 2-shift at `a` produces.
pub fn golden_mean() -> EdgeShift {
    let mut g = DirectedGraph::new();
    let u = g.add_vertex("u");
    let v = g.add_vertex("v");
    g.add_labeled_edge("a", u, v);
    g.add_labeled_edge("b", u, u);
    g.add_labeled_edge("a'", v, u);
    EdgeShift::new(g).unwrap()
}

/// The `a`-run-paired shift: `a1: u -> w`, `a2: w -> u`, `b: u -> u`.
/// Points are exactly the 2-shift points whose a-runs have even length,
/// read through a1a2 pairs.
pub fn paired_run() -> EdgeShift {
    let mut g = DirectedGraph::new();
    let u = g.add_vertex("u");
    let w = g.add_vertex("w");
    g.add_labeled_edge("a1", u, w);
    g.add_labeled_edge("a2", w, u);
    g.add_labeled_edge("b", u, u);
    EdgeShift::new(g).unwrap()
}

/// A reducible two-component shift, adjacency [[1,2],[0,1]].
pub fn reducible() -> EdgeShift {
    let mut g = DirectedGraph::new();
    let u = g.add_vertex("u");
    let v = g.add_vertex("v");
    g.add_labeled_edge("p", u, u);
    g.add_labeled_edge("q", u, v);
    g.add_labeled_edge("r", u, v);
    g.add_labeled_edge("s", v, v);
    EdgeShift::new(g).unwrap()
}

/// The 1-block collapse a1, a2 -> a, b -> b onto the full 2-shift.
pub fn paired_run_collapse() -> (EdgeShift, SlidingBlockCode) {
    let x = paired_run();
    let y = full_2_shift();
    let e = |g: &EdgeShift, l: &str| g.graph().edge_by_label(l).unwrap();
    let map = BTreeMap::from([
        (e(&x, "a1"), e(&y, "a")),
        (e(&x, "a2"), e(&y, "a")),
        (e(&x, "b"), e(&y, "b")),
    ]);
    let code = SlidingBlockCode::one_block(x.clone(), y, &map).unwrap();
    (x, code)
}

/// The collapse presented as a word block code on the section
/// {x0 in {a1, b}}: return words a1a2 -> aa and b -> b.
pub fn paired_run_word_code() -> (EdgeShift, WordBlockCode) {
    let x = paired_run();
    let y = full_2_shift();
    let c = CrossSection::from_symbols(&x, &["a1", "b"]);
    let system = ReturnSystem::build(&x, &c).unwrap();
    let e = |g: &EdgeShift, l: &str| g.graph().edge_by_label(l).unwrap();
    let images = BTreeMap::from([
        (e(&x, "a1"), Word(vec![e(&y, "a")])),
        (e(&x, "a2"), Word(vec![e(&y, "a")])),
        (e(&x, "b"), Word(vec![e(&y, "b")])),
    ]);
    let code = substitution_code(&system, &y, &images).unwrap();
    (x, code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_well_formed() {
        assert!(full_2_shift().is_irreducible());
        assert!(full_3_shift().is_irreducible());
        assert!(golden_mean().is_irreducible());
        assert!(paired_run().is_irreducible());
        assert!(!reducible().is_irreducible());
        assert_eq!(
            golden_mean().adjacency(),
            crate::matrix::IntMatrix::from_rows(&[vec![1, 1], vec![1, 0]])
        );
        assert_eq!(
            reducible().adjacency(),
            crate::matrix::IntMatrix::from_rows(&[vec![1, 2], vec![0, 1]])
        );
    }
}
