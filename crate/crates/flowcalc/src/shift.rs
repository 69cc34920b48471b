//! Edge shifts: the symbolic systems presented by finite directed graphs.
//!
//! The shift space of a graph has the edge set as alphabet; its points are
//! bi-infinite composable edge sequences. Points are never materialized:
//! every operation works with finite words, periodic orbits, and graphs
//! derived from them.

use std::collections::BTreeMap;

use crate::graph::{DirectedGraph, EdgeId, VertexId};
use crate::matrix::IntMatrix;
use crate::word::{PeriodicOrbit, Word};

/// Errors from shift construction.
#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum ShiftError {
    #[error("the graph presents the empty shift (nothing survives trimming)")]
    Empty,
    #[error("the graph is not essential: vertex {0} lacks an in- or out-edge")]
    NotEssential(String),
}

/// An edge shift, wrapping an essential nonempty graph.
#[derive(Clone, Debug)]
pub struct EdgeShift {
    graph: DirectedGraph,
}

impl EdgeShift {
    /// Wraps a graph that is already essential and nonempty.
    pub fn new(graph: DirectedGraph) -> Result<Self, ShiftError> {
        if graph.vertex_count() == 0 {
            return Err(ShiftError::Empty);
        }
        for (v, data) in graph.vertices() {
            if graph.out_degree(v) == 0 || graph.in_degree(v) == 0 {
                return Err(ShiftError::NotEssential(data.id.clone()));
            }
        }
        Ok(Self { graph })
    }

    /// Trims the graph to its essential part first; errors if nothing remains.
    pub fn trim_from(graph: &DirectedGraph) -> Result<Self, ShiftError> {
        let t = graph.trim_essential();
        if t.vertex_count() == 0 {
            return Err(ShiftError::Empty);
        }
        Self::new(t)
    }

    pub fn graph(&self) -> &DirectedGraph {
        &self.graph
    }

    pub fn alphabet_size(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn adjacency(&self) -> IntMatrix {
        IntMatrix::adjacency(&self.graph)
    }

    /// True if the presenting graph is strongly connected.
    pub fn is_irreducible(&self) -> bool {
        self.graph.is_strongly_connected()
    }

    /// All composable words of length `n`, in lexicographic edge order.
    pub fn words_of_length(&self, n: usize) -> Vec<Word> {
        assert!(n >= 1, "words of length zero are not enumerated");
        let adj = self.graph.out_adjacency();
        let mut out = Vec::new();
        let mut stack: Vec<EdgeId> = Vec::new();
        // DFS in edge order keeps the output lexicographic; depth is n.
        fn go(
            g: &DirectedGraph,
            adj: &[Vec<EdgeId>],
            stack: &mut Vec<EdgeId>,
            out: &mut Vec<Word>,
            n: usize,
        ) {
            if stack.len() == n {
                out.push(Word(stack.clone()));
                return;
            }
            let next: Vec<EdgeId> = match stack.last() {
                None => (0..g.edge_count()).map(EdgeId).collect(),
                Some(&e) => adj[g.target(e).0].clone(),
            };
            for e in next {
                stack.push(e);
                go(g, adj, stack, out, n);
                stack.pop();
            }
        }
        go(&self.graph, &adj, &mut stack, &mut out, n);
        out
    }

    /// All periodic orbits of least period at most `n_max`, sorted by
    /// (period, word).
    ///
    /// Enumerates closed walks with reachability pruning, then
    /// canonicalizes and deduplicates.
    pub fn periodic_orbits(&self, n_max: usize) -> Vec<PeriodicOrbit> {
        let g = &self.graph;
        let nv = g.vertex_count();
        let adj = g.out_adjacency();

        // reach[k][v][u]: a path of exactly k edges from v to u exists.
        let mut reach: Vec<Vec<Vec<bool>>> = Vec::with_capacity(n_max + 1);
        let mut id = vec![vec![false; nv]; nv];
        for (i, row) in id.iter_mut().enumerate() {
            row[i] = true;
        }
        reach.push(id);
        let mut step = vec![vec![false; nv]; nv];
        for (_, e) in g.edges() {
            step[e.source.0][e.target.0] = true;
        }
        for k in 1..=n_max {
            let prev = &reach[k - 1];
            let mut cur = vec![vec![false; nv]; nv];
            for v in 0..nv {
                for w in 0..nv {
                    if !step[v][w] {
                        continue;
                    }
                    for u in 0..nv {
                        if prev[w][u] {
                            cur[v][u] = true;
                        }
                    }
                }
            }
            reach.push(cur);
        }

        let mut found: std::collections::BTreeSet<PeriodicOrbit> = Default::default();
        let mut walk: Vec<EdgeId> = Vec::new();
        fn go(
            g: &DirectedGraph,
            adj: &[Vec<EdgeId>],
            reach: &[Vec<Vec<bool>>],
            walk: &mut Vec<EdgeId>,
            found: &mut std::collections::BTreeSet<PeriodicOrbit>,
            start: usize,
            n: usize,
        ) {
            if walk.len() == n {
                found.insert(PeriodicOrbit::from_cycle(g, walk.clone()));
                return;
            }
            let here = match walk.last() {
                None => start,
                Some(&e) => g.target(e).0,
            };
            let left = n - walk.len();
            for &e in &adj[here] {
                if reach[left - 1][g.target(e).0][start] {
                    walk.push(e);
                    go(g, adj, reach, walk, found, start, n);
                    walk.pop();
                }
            }
        }
        for n in 1..=n_max {
            for v in 0..nv {
                go(g, &adj, &reach, &mut walk, &mut found, v, n);
            }
        }
        let mut orbits: Vec<PeriodicOrbit> = found.into_iter().collect();
        orbits.sort_by(|a, b| {
            a.period()
                .cmp(&b.period())
                .then_with(|| a.word().cmp(b.word()))
        });
        orbits
    }

    /// Number of points fixed by the n-th shift power, from the orbit list.
    /// Matches the trace of the n-th adjacency power.
    pub fn fixed_point_count_from_orbits(orbits: &[PeriodicOrbit], n: usize) -> usize {
        orbits
            .iter()
            .filter(|o| n % o.period() == 0)
            .map(|o| o.period())
            .sum()
    }

    /// The m-block presentation and its recoding.
    ///
    /// Vertices of the new graph are the composable words of length m-1,
    /// edges the words of length m; the recoding sends a point to its
    /// sequence of m-blocks read off at the same positions.
    pub fn higher_block(&self, m: usize) -> (EdgeShift, BlockRecoding) {
        assert!(m >= 1);
        if m == 1 {
            let recode = BlockRecoding {
                m: 1,
                blocks: self
                    .graph
                    .edges()
                    .map(|(i, _)| (Word(vec![i]), i))
                    .collect(),
            };
            return (self.clone(), recode);
        }
        let mut g = DirectedGraph::new();
        let mut vtx: BTreeMap<Word, VertexId> = BTreeMap::new();
        for w in self.words_of_length(m - 1) {
            let id = w.text(&self.graph);
            vtx.insert(w, g.add_vertex(id));
        }
        let mut blocks: BTreeMap<Word, EdgeId> = BTreeMap::new();
        for w in self.words_of_length(m) {
            let src = vtx[&Word(w.0[..m - 1].to_vec())];
            let tgt = vtx[&Word(w.0[1..].to_vec())];
            let label = w.text(&self.graph);
            let e = g.add_edge(label.clone(), src, tgt, label);
            blocks.insert(w, e);
        }
        let shift = EdgeShift::new(g).expect("block graph of an essential graph is essential");
        (shift, BlockRecoding { m, blocks })
    }
}

/// The recoding attached to a higher-block presentation.
#[derive(Clone, Debug)]
pub struct BlockRecoding {
    m: usize,
    blocks: BTreeMap<Word, EdgeId>,
}

impl BlockRecoding {
    pub fn block_length(&self) -> usize {
        self.m
    }

    /// Block-graph edge presenting the m-word `w`.
    pub fn encode_word(&self, w: &Word) -> Option<EdgeId> {
        self.blocks.get(w).copied()
    }

    /// The m-word a block-graph edge presents.
    pub fn block_of(&self, e: EdgeId) -> &Word {
        self.blocks
            .iter()
            .find(|(_, &b)| b == e)
            .map(|(w, _)| w)
            .expect("block symbols come from this recoding")
    }

    /// Recodes an orbit into the block presentation; the period is preserved.
    pub fn encode_orbit(&self, block_graph: &DirectedGraph, o: &PeriodicOrbit) -> PeriodicOrbit {
        let p = o.period();
        let edges: Vec<EdgeId> = (0..p as isize)
            .map(|i| {
                let w = o.word().cyclic_slice(i, self.m);
                *self.blocks.get(&w).expect("orbit blocks occur in the shift")
            })
            .collect();
        PeriodicOrbit::from_cycle(block_graph, edges)
    }

    /// Inverse recoding: first symbols of consecutive blocks.
    pub fn decode_orbit(
        &self,
        original: &DirectedGraph,
        block_orbit: &PeriodicOrbit,
    ) -> PeriodicOrbit {
        let inverse: BTreeMap<EdgeId, &Word> =
            self.blocks.iter().map(|(w, &e)| (e, w)).collect();
        let edges: Vec<EdgeId> = block_orbit
            .word()
            .0
            .iter()
            .map(|e| inverse[e].0[0])
            .collect();
        PeriodicOrbit::from_cycle(original, edges)
    }
}

/// The sliding-window presentation at a fixed radius.
///
/// For radius 0 this is the original graph. For radius r >= 1 the edges are
/// the occurring (2r+1)-words and the vertices the occurring 2r-words; a
/// point traverses the edge holding its window x[i-r, i+r] at time i, so
/// cycles here correspond exactly to periodic orbits, symbol by symbol
/// through the window centers.
#[derive(Clone, Debug)]
pub struct WindowGraph {
    pub radius: usize,
    pub graph: DirectedGraph,
    windows: Vec<Word>,
    index: BTreeMap<Word, EdgeId>,
}

impl WindowGraph {
    pub fn build(x: &EdgeShift, radius: usize) -> Self {
        if radius == 0 {
            let graph = x.graph().clone();
            let windows: Vec<Word> = graph.edges().map(|(i, _)| Word(vec![i])).collect();
            let index = windows
                .iter()
                .enumerate()
                .map(|(i, w)| (w.clone(), EdgeId(i)))
                .collect();
            return Self {
                radius,
                graph,
                windows,
                index,
            };
        }
        let mut g = DirectedGraph::new();
        let mut vtx: BTreeMap<Word, VertexId> = BTreeMap::new();
        for w in x.words_of_length(2 * radius) {
            let id = w.text(x.graph());
            vtx.insert(w, g.add_vertex(id));
        }
        let mut windows = Vec::new();
        let mut index = BTreeMap::new();
        for w in x.words_of_length(2 * radius + 1) {
            let src = vtx[&Word(w.0[..2 * radius].to_vec())];
            let tgt = vtx[&Word(w.0[1..].to_vec())];
            let label = w.text(x.graph());
            let e = g.add_edge(label.clone(), src, tgt, label);
            windows.push(w.clone());
            index.insert(w, e);
        }
        Self {
            radius,
            graph: g,
            windows,
            index,
        }
    }

    /// The window word carried by an edge.
    pub fn window(&self, e: EdgeId) -> &Word {
        &self.windows[e.0]
    }

    /// The center symbol of an edge's window (an edge of the original graph).
    pub fn center(&self, e: EdgeId) -> EdgeId {
        self.windows[e.0].0[self.radius]
    }

    /// Edge presenting a given occurring window, if any.
    pub fn edge_for(&self, w: &Word) -> Option<EdgeId> {
        self.index.get(w).copied()
    }

    /// The cyclic window path of an orbit: edge at position i presents the
    /// orbit's window centered at i.
    pub fn path_of_orbit(&self, o: &PeriodicOrbit) -> Vec<EdgeId> {
        (0..o.period() as isize)
            .map(|i| {
                let w = o.window(i, self.radius);
                *self
                    .index
                    .get(&w)
                    .expect("orbit windows occur in the shift")
            })
            .collect()
    }

    /// Rebuilds the orbit whose window path is the given cycle.
    pub fn orbit_of_cycle(&self, original: &DirectedGraph, cycle: &[EdgeId]) -> PeriodicOrbit {
        let edges: Vec<EdgeId> = cycle.iter().map(|&e| self.center(e)).collect();
        PeriodicOrbit::from_cycle(original, edges)
    }
}
