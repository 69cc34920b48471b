//! Exact coboundary equations on edge shifts.
//!
//! A function of a bounded window is a coboundary (`f = b of shift - b`)
//! exactly when its sums over all periodic orbits vanish. On a strongly
//! connected weighted graph that reduces to finding a vertex potential
//! `h` with `h(target) - h(source) = weight` on every edge; the shift
//! version runs the same computation on a window graph.

use std::collections::VecDeque;

use num::{BigRational, Zero};

use crate::graph::{DirectedGraph, EdgeId, VertexId};
use crate::shift::{EdgeShift, WindowGraph};
use crate::word::{PeriodicOrbit, Word};

/// A function on a shift that depends only on the centered window of
/// radius `radius`: exact rational values keyed by (2r+1)-words.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowFunction {
    radius: usize,
    table: std::collections::BTreeMap<Word, BigRational>,
}

impl WindowFunction {
    pub fn new(
        radius: usize,
        table: std::collections::BTreeMap<Word, BigRational>,
    ) -> Self {
        for w in table.keys() {
            assert_eq!(w.len(), 2 * radius + 1, "keys must be centered windows");
        }
        Self { radius, table }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn table(&self) -> &std::collections::BTreeMap<Word, BigRational> {
        &self.table
    }

    pub fn value(&self, w: &Word) -> Option<&BigRational> {
        self.table.get(w)
    }

    /// Sum of the function over one period of `o`.
    ///
    /// Panics if the function is not defined on some window of the orbit.
    pub fn orbit_sum(&self, o: &PeriodicOrbit) -> BigRational {
        let mut s = BigRational::zero();
        for i in 0..o.period() {
            let w = o.window(i as isize, self.radius);
            s += self
                .table
                .get(&w)
                .expect("window function must cover the orbit's windows");
        }
        s
    }
}

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum PotentialError {
    #[error("NotIrreducible: {0}")]
    NotIrreducible(String),
    #[error("no potential: a cycle of length {} has weight sum {sum}", cycle.len())]
    CycleObstruction { cycle: Vec<EdgeId>, sum: BigRational },
}

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum CoboundaryError {
    #[error("NotIrreducible: {0}")]
    NotIrreducible(String),
    #[error("not a coboundary: orbit of period {} has sum {sum}", orbit.period())]
    CycleObstruction { orbit: PeriodicOrbit, sum: BigRational },
}

/// Breadth-first potentials, one tree per strongly connected component,
/// rooted at the component's first vertex with value zero.
struct SccPotentials {
    ids: Vec<usize>,
    h: Vec<BigRational>,
    parent: Vec<Option<EdgeId>>,
}

fn scc_potentials(g: &DirectedGraph, weights: &[BigRational]) -> SccPotentials {
    assert_eq!(weights.len(), g.edge_count(), "one weight per edge");
    let n = g.vertex_count();
    let ids = g.scc_ids();
    let components = ids.iter().copied().max().map_or(0, |m| m + 1);
    let mut root = vec![usize::MAX; components];
    for v in 0..n {
        if root[ids[v]] == usize::MAX {
            root[ids[v]] = v;
        }
    }

    let mut h: Vec<Option<BigRational>> = vec![None; n];
    let mut parent: Vec<Option<EdgeId>> = vec![None; n];
    for &r in &root {
        h[r] = Some(BigRational::zero());
        let mut queue = VecDeque::from([r]);
        while let Some(u) = queue.pop_front() {
            for e in g.out_edges(VertexId(u)) {
                let t = g.target(e).0;
                if ids[t] == ids[r] && h[t].is_none() {
                    h[t] = Some(h[u].clone().unwrap() + &weights[e.0]);
                    parent[t] = Some(e);
                    queue.push_back(t);
                }
            }
        }
    }
    SccPotentials {
        ids,
        h: h.into_iter().map(|v| v.expect("SCC breadth-first search reaches every vertex")).collect(),
        parent,
    }
}

/// Tree path from the component root down to `v` (empty at the root).
fn tree_path(g: &DirectedGraph, parent: &[Option<EdgeId>], mut v: usize) -> Vec<EdgeId> {
    let mut rev = Vec::new();
    while let Some(e) = parent[v] {
        rev.push(e);
        v = g.source(e).0;
    }
    rev.reverse();
    rev
}

fn walk_sum(weights: &[BigRational], walk: &[EdgeId]) -> BigRational {
    walk.iter()
        .fold(BigRational::zero(), |s, e| s + &weights[e.0])
}

/// Finds a closed walk with nonzero weight sum, if one exists.
///
/// Edges between distinct strongly connected components lie on no cycle
/// and are ignored. Returns the walk together with its (nonzero) sum.
pub fn find_unbalanced_cycle(
    g: &DirectedGraph,
    weights: &[BigRational],
) -> Option<(Vec<EdgeId>, BigRational)> {
    let pot = scc_potentials(g, weights);
    for (i, e) in g.edges() {
        let (u, v) = (e.source.0, e.target.0);
        let c = pot.ids[u];
        if pot.ids[v] != c {
            continue;
        }
        if pot.h[u].clone() + &weights[i.0] == pot.h[v] {
            continue;
        }
        // The discrepancy lives on one of two closed walks through the
        // violated edge and the component root.
        if u == v {
            return Some((vec![i], weights[i.0].clone()));
        }
        let root = {
            let mut r = u;
            while let Some(p) = pot.parent[r] {
                r = g.source(p).0;
            }
            r
        };
        let back = g
            .shortest_path_with(e.target, VertexId(root), |x| {
                pot.ids[g.source(x).0] == c && pot.ids[g.target(x).0] == c
            })
            .expect("component is strongly connected");
        let mut a = tree_path(g, &pot.parent, u);
        a.push(i);
        a.extend_from_slice(&back);
        let mut b = tree_path(g, &pot.parent, v);
        b.extend_from_slice(&back);
        for walk in [a, b] {
            if walk.is_empty() {
                continue;
            }
            let sum = walk_sum(weights, &walk);
            if !sum.is_zero() {
                return Some((walk, sum));
            }
        }
        unreachable!("the two walks differ by the nonzero discrepancy");
    }
    None
}

/// Solves `h(target) - h(source) = weight` on a strongly connected graph.
///
/// The solution is unique once `h` vanishes at the first vertex, which is
/// the normalization used here.
pub fn graph_potential(
    g: &DirectedGraph,
    weights: &[BigRational],
) -> Result<Vec<BigRational>, PotentialError> {
    if !g.is_strongly_connected() {
        return Err(PotentialError::NotIrreducible(
            "the weighted graph is not strongly connected".to_string(),
        ));
    }
    if let Some((cycle, sum)) = find_unbalanced_cycle(g, weights) {
        return Err(PotentialError::CycleObstruction { cycle, sum });
    }
    let pot = scc_potentials(g, weights);
    for (i, e) in g.edges() {
        assert_eq!(
            pot.h[e.source.0].clone() + &weights[i.0],
            pot.h[e.target.0],
            "balanced cycles make the tree potential global"
        );
    }
    Ok(pot.h)
}

/// Solves `f = b of shift - b` exactly, or exhibits an orbit obstruction.
///
/// The returned `b` has the same radius as `f`. Requires an irreducible
/// shift; on reducible ones orbit sums no longer decide the equation.
pub fn coboundary(x: &EdgeShift, f: &WindowFunction) -> Result<WindowFunction, CoboundaryError> {
    if !x.is_irreducible() {
        return Err(CoboundaryError::NotIrreducible(
            "the shift is not irreducible".to_string(),
        ));
    }
    let wg = WindowGraph::build(x, f.radius());
    let weights: Vec<BigRational> = wg
        .graph
        .edges()
        .map(|(e, _)| {
            f.value(wg.window(e))
                .expect("window function must cover every occurring window")
                .clone()
        })
        .collect();
    match graph_potential(&wg.graph, &weights) {
        Err(PotentialError::CycleObstruction { cycle, .. }) => {
            let orbit = wg.orbit_of_cycle(x.graph(), &cycle);
            let sum = f.orbit_sum(&orbit);
            assert!(!sum.is_zero(), "the unbalanced walk winds around this orbit");
            Err(CoboundaryError::CycleObstruction { orbit, sum })
        }
        Err(PotentialError::NotIrreducible(msg)) => Err(CoboundaryError::NotIrreducible(msg)),
        Ok(h) => {
            let table = wg
                .graph
                .edges()
                .map(|(e, data)| (wg.window(e).clone(), h[data.source.0].clone()))
                .collect();
            let b = WindowFunction::new(f.radius(), table);
            for (e, data) in wg.graph.edges() {
                let lhs = f.value(wg.window(e)).unwrap().clone();
                let step = h[data.target.0].clone() - &h[data.source.0];
                assert_eq!(lhs, step, "potential solves the edge equations");
            }
            for o in x.periodic_orbits(6) {
                assert!(f.orbit_sum(&o).is_zero(), "coboundaries sum to zero on orbits");
            }
            Ok(b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn golden_mean() -> EdgeShift {
        let mut g = DirectedGraph::new();
        let u = g.add_vertex("u");
        let v = g.add_vertex("v");
        g.add_labeled_edge("a", u, v);
        g.add_labeled_edge("a'", v, u);
        g.add_labeled_edge("b", u, u);
        EdgeShift::new(g).unwrap()
    }

    fn symbol_function(x: &EdgeShift, values: &[(&str, BigRational)]) -> WindowFunction {
        let table: BTreeMap<Word, BigRational> = values
            .iter()
            .map(|(label, v)| {
                let e = x.graph().edge_by_label(label).unwrap();
                (Word(vec![e]), v.clone())
            })
            .collect();
        WindowFunction::new(0, table)
    }

    #[test]
    fn potential_on_golden_mean() {
        let x = golden_mean();
        let weights = vec![rat(1, 1), rat(-1, 1), rat(0, 1)];
        let h = graph_potential(x.graph(), &weights).unwrap();
        assert_eq!(h, vec![rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn potential_requires_strong_connectivity() {
        let mut g = DirectedGraph::new();
        let u = g.add_vertex("u");
        let v = g.add_vertex("v");
        g.add_labeled_edge("p", u, u);
        g.add_labeled_edge("q", v, v);
        g.add_labeled_edge("c", u, v);
        let weights = vec![rat(0, 1), rat(0, 1), rat(5, 1)];
        assert!(matches!(
            graph_potential(&g, &weights),
            Err(PotentialError::NotIrreducible(_))
        ));
        // The cycle check itself ignores the bridge: both loops balance.
        assert_eq!(find_unbalanced_cycle(&g, &weights), None);
        let bad = vec![rat(1, 1), rat(0, 1), rat(5, 1)];
        let (cycle, sum) = find_unbalanced_cycle(&g, &bad).unwrap();
        assert_eq!(cycle, vec![EdgeId(0)]);
        assert_eq!(sum, rat(1, 1));
    }

    #[test]
    fn unbalanced_witness_resums_to_its_reported_value() {
        let x = golden_mean();
        // Perturb a single edge of an exact potential difference.
        let weights = vec![rat(1, 1), rat(-1, 1), rat(1, 3)];
        let (cycle, sum) = find_unbalanced_cycle(x.graph(), &weights).unwrap();
        assert_eq!(walk_sum(&weights, &cycle), sum);
        assert!(!sum.is_zero());
        assert!(Word(cycle).is_closed_path(x.graph()));
    }

    #[test]
    fn coboundary_on_golden_mean() {
        let x = golden_mean();
        let f = symbol_function(&x, &[("a", rat(1, 1)), ("a'", rat(-1, 1)), ("b", rat(0, 1))]);
        let b = coboundary(&x, &f).unwrap();
        assert_eq!(b, symbol_function(&x, &[("a", rat(0, 1)), ("a'", rat(1, 1)), ("b", rat(0, 1))]));
    }

    #[test]
    fn obstructed_orbit_carries_its_nonzero_sum() {
        let x = golden_mean();
        let f = symbol_function(&x, &[("a", rat(1, 1)), ("a'", rat(-1, 1)), ("b", rat(1, 3))]);
        match coboundary(&x, &f) {
            Err(CoboundaryError::CycleObstruction { orbit, sum }) => {
                assert_eq!(f.orbit_sum(&orbit), sum);
                assert_eq!(orbit.text(x.graph()), "(b)");
                assert_eq!(sum, rat(1, 3));
            }
            other => panic!("expected an orbit obstruction, got {other:?}"),
        }
    }

    #[test]
    fn radius_one_coboundary_round_trip() {
        // Plant a potential h on window-graph vertices, feed in the induced
        // f(w) = h(target) - h(source), and recover a b agreeing with
        // b0(w) = h(source) up to an additive constant.
        let x = golden_mean();
        let wg = WindowGraph::build(&x, 1);
        let n = wg.graph.vertex_count();
        let h: Vec<BigRational> = (0..n).map(|v| rat((v * v + 1) as i64 % 7, 3)).collect();
        let mut f_table: BTreeMap<Word, BigRational> = BTreeMap::new();
        let mut b_table: BTreeMap<Word, BigRational> = BTreeMap::new();
        for (e, data) in wg.graph.edges() {
            f_table.insert(
                wg.window(e).clone(),
                h[data.target.0].clone() - &h[data.source.0],
            );
            b_table.insert(wg.window(e).clone(), h[data.source.0].clone());
        }
        let f = WindowFunction::new(1, f_table);
        let b = coboundary(&x, &f).unwrap();
        let b0 = WindowFunction::new(1, b_table);
        let keys: Vec<&Word> = b.table().keys().collect();
        assert_eq!(keys, b0.table().keys().collect::<Vec<_>>());
        let shift = b0.value(keys[0]).unwrap() - b.value(keys[0]).unwrap();
        for w in keys {
            assert_eq!(&(b0.value(w).unwrap() - b.value(w).unwrap()), &shift);
        }
    }

    #[test]
    fn coboundary_requires_irreducible_shift() {
        let mut g = DirectedGraph::new();
        let u = g.add_vertex("u");
        let v = g.add_vertex("v");
        g.add_labeled_edge("p", u, u);
        g.add_labeled_edge("q", v, v);
        g.add_labeled_edge("c", u, v);
        let x = EdgeShift::new(g).unwrap();
        let f = symbol_function(&x, &[("p", rat(0, 1)), ("q", rat(0, 1)), ("c", rat(1, 1))]);
        assert!(matches!(
            coboundary(&x, &f),
            Err(CoboundaryError::NotIrreducible(_))
        ));
    }
}
