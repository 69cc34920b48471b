//! Finite directed multigraphs with labeled edges.
//!
//! A graph here is the presentation of an edge shift: the alphabet is the
//! edge set, so edge labels are required to be pairwise distinct. Vertices
//! and edges are stored in declaration order and every operation iterates
//! in that order, which makes all derived data deterministic.

use std::collections::HashMap;
use std::fmt;

/// Index of a vertex in its graph's declaration order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(pub usize);

/// Index of an edge in its graph's declaration order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeId(pub usize);

/// A named vertex.
#[derive(Clone, Debug)]
pub struct Vertex {
    pub id: String,
}

/// A labeled edge. The label is the alphabet symbol of the edge shift.
#[derive(Clone, Debug)]
pub struct Edge {
    pub id: String,
    pub source: VertexId,
    pub target: VertexId,
    pub label: String,
}

/// A finite directed multigraph with distinct edge labels.
#[derive(Clone, Debug, Default)]
pub struct DirectedGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl DirectedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a vertex. Panics on a duplicate id; parsers must pre-check.
    pub fn add_vertex(&mut self, id: impl Into<String>) -> VertexId {
        let id = id.into();
        assert!(
            self.vertices.iter().all(|v| v.id != id),
            "duplicate vertex id {id:?}"
        );
        self.vertices.push(Vertex { id });
        VertexId(self.vertices.len() - 1)
    }

    /// Adds an edge. Panics on duplicate id or label, or undeclared endpoints.
    pub fn add_edge(
        &mut self,
        id: impl Into<String>,
        source: VertexId,
        target: VertexId,
        label: impl Into<String>,
    ) -> EdgeId {
        let id = id.into();
        let label = label.into();
        assert!(source.0 < self.vertices.len(), "undeclared source vertex");
        assert!(target.0 < self.vertices.len(), "undeclared target vertex");
        assert!(
            self.edges.iter().all(|e| e.id != id),
            "duplicate edge id {id:?}"
        );
        assert!(
            self.edges.iter().all(|e| e.label != label),
            "duplicate edge label {label:?}"
        );
        self.edges.push(Edge {
            id,
            source,
            target,
            label,
        });
        EdgeId(self.edges.len() - 1)
    }

    /// Adds an edge whose id equals its label.
    pub fn add_labeled_edge(
        &mut self,
        label: impl Into<String>,
        source: VertexId,
        target: VertexId,
    ) -> EdgeId {
        let label = label.into();
        self.add_edge(label.clone(), source, target, label)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = (VertexId, &Vertex)> {
        self.vertices.iter().enumerate().map(|(i, v)| (VertexId(i), v))
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &Edge)> {
        self.edges.iter().enumerate().map(|(i, e)| (EdgeId(i), e))
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v.0]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn source(&self, e: EdgeId) -> VertexId {
        self.edges[e.0].source
    }

    pub fn target(&self, e: EdgeId) -> VertexId {
        self.edges[e.0].target
    }

    pub fn label(&self, e: EdgeId) -> &str {
        &self.edges[e.0].label
    }

    pub fn vertex_by_id(&self, id: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v.id == id).map(VertexId)
    }

    pub fn edge_by_label(&self, label: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.label == label).map(EdgeId)
    }

    /// Out-edge lists for every vertex, in declaration order.
    pub fn out_adjacency(&self) -> Vec<Vec<EdgeId>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.source.0].push(EdgeId(i));
        }
        adj
    }

    /// In-edge lists for every vertex, in declaration order.
    pub fn in_adjacency(&self) -> Vec<Vec<EdgeId>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.target.0].push(EdgeId(i));
        }
        adj
    }

    /// Edges leaving `v`, in declaration order.
    pub fn out_edges(&self, v: VertexId) -> Vec<EdgeId> {
        self.edges()
            .filter(|(_, e)| e.source == v)
            .map(|(i, _)| i)
            .collect()
    }

    /// Edges entering `v`, in declaration order.
    pub fn in_edges(&self, v: VertexId) -> Vec<EdgeId> {
        self.edges()
            .filter(|(_, e)| e.target == v)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|e| e.source == v).count()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|e| e.target == v).count()
    }

    /// True if every vertex has at least one incoming and one outgoing edge.
    pub fn is_essential(&self) -> bool {
        let mut out = vec![false; self.vertices.len()];
        let mut inn = vec![false; self.vertices.len()];
        for e in &self.edges {
            out[e.source.0] = true;
            inn[e.target.0] = true;
        }
        out.iter().zip(&inn).all(|(&o, &i)| o && i)
    }

    /// Picks a label equal to `base` or `base` plus the smallest free counter.
    pub fn fresh_label(&self, base: &str) -> String {
        if self.edge_by_label(base).is_none() {
            return base.to_string();
        }
        for k in 2.. {
            let candidate = format!("{base}{k}");
            if self.edge_by_label(&candidate).is_none() {
                return candidate;
            }
        }
        unreachable!()
    }

    /// Picks a vertex id equal to `base` or `base` plus the smallest free counter.
    pub fn fresh_vertex_id(&self, base: &str) -> String {
        if self.vertex_by_id(base).is_none() {
            return base.to_string();
        }
        for k in 2.. {
            let candidate = format!("{base}{k}");
            if self.vertex_by_id(&candidate).is_none() {
                return candidate;
            }
        }
        unreachable!()
    }

    /// Iteratively deletes vertices with no incoming or no outgoing edge,
    /// together with their edges, until the graph is essential.
    ///
    /// Surviving vertices and edges keep their relative order, ids, and labels.
    pub fn trim_essential(&self) -> DirectedGraph {
        let mut alive: Vec<bool> = vec![true; self.vertices.len()];
        loop {
            let mut changed = false;
            for i in 0..self.vertices.len() {
                if !alive[i] {
                    continue;
                }
                let out = self
                    .edges
                    .iter()
                    .any(|e| e.source.0 == i && alive[e.target.0]);
                let inn = self
                    .edges
                    .iter()
                    .any(|e| e.target.0 == i && alive[e.source.0]);
                if !out || !inn {
                    alive[i] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut g = DirectedGraph::new();
        let mut remap: HashMap<usize, VertexId> = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if alive[i] {
                remap.insert(i, g.add_vertex(v.id.clone()));
            }
        }
        for e in &self.edges {
            if alive[e.source.0] && alive[e.target.0] {
                g.add_edge(
                    e.id.clone(),
                    remap[&e.source.0],
                    remap[&e.target.0],
                    e.label.clone(),
                );
            }
        }
        g
    }

    /// Strongly connected components, iterative Tarjan.
    /// Returns one component id per vertex.
    pub fn scc_ids(&self) -> Vec<usize> {
        let n = self.vertices.len();
        let adj: Vec<Vec<usize>> = {
            let mut a = vec![Vec::new(); n];
            for e in &self.edges {
                a[e.source.0].push(e.target.0);
            }
            a
        };

        const UNSET: usize = usize::MAX;
        let mut index = vec![UNSET; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut comp = vec![UNSET; n];
        let mut next_index = 0usize;
        let mut next_comp = 0usize;

        // Explicit DFS frames: (vertex, next child position).
        for root in 0..n {
            if index[root] != UNSET {
                continue;
            }
            let mut frames: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = next_index;
            low[root] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&(v, child)) = frames.last() {
                if child < adj[v].len() {
                    frames.last_mut().unwrap().1 += 1;
                    let w = adj[v][child];
                    if index[w] == UNSET {
                        index[w] = next_index;
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        frames.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    frames.pop();
                    if let Some(&(p, _)) = frames.last() {
                        low[p] = low[p].min(low[v]);
                    }
                    if low[v] == index[v] {
                        // Root of SCC: pop the component.
                        loop {
                            let w = stack.pop().expect("tarjan stack underflow");
                            on_stack[w] = false;
                            comp[w] = next_comp;
                            if w == v {
                                break;
                            }
                        }
                        next_comp += 1;
                    }
                }
            }
        }
        comp
    }

    /// True if the graph is strongly connected and nonempty.
    pub fn is_strongly_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let ids = self.scc_ids();
        ids.iter().all(|&c| c == ids[0])
    }

    /// Finds a cycle that only uses edges allowed by `keep`, if one exists.
    ///
    /// The returned edge sequence is a closed path visiting pairwise
    /// distinct vertices (a simple cycle).
    pub fn find_cycle_with(&self, keep: impl Fn(EdgeId) -> bool) -> Option<Vec<EdgeId>> {
        let n = self.vertices.len();
        let adj = self.out_adjacency();
        // colors: 0 unvisited, 1 on current path, 2 done
        let mut color = vec![0u8; n];
        for start in 0..n {
            if color[start] != 0 {
                continue;
            }
            let mut frames: Vec<(usize, usize)> = vec![(start, 0)];
            let mut path_edges: Vec<EdgeId> = Vec::new();
            let mut path_vertices: Vec<usize> = vec![start];
            color[start] = 1;
            while let Some(&(v, cursor)) = frames.last() {
                if cursor >= adj[v].len() {
                    frames.pop();
                    color[v] = 2;
                    path_vertices.pop();
                    path_edges.pop();
                    continue;
                }
                frames.last_mut().unwrap().1 += 1;
                let e = adj[v][cursor];
                if !keep(e) {
                    continue;
                }
                let w = self.edges[e.0].target.0;
                match color[w] {
                    1 => {
                        let pos = path_vertices.iter().position(|&x| x == w).unwrap();
                        let mut cycle: Vec<EdgeId> = path_edges[pos..].to_vec();
                        cycle.push(e);
                        return Some(cycle);
                    }
                    0 => {
                        color[w] = 1;
                        path_vertices.push(w);
                        path_edges.push(e);
                        frames.push((w, 0));
                    }
                    _ => {}
                }
            }
        }
        None
    }

    /// Length in edges of the longest path using only edges allowed by `keep`.
    ///
    /// Requires the kept subgraph to be acyclic; returns `None` otherwise.
    pub fn longest_path_with(&self, keep: impl Fn(EdgeId) -> bool) -> Option<usize> {
        if self.find_cycle_with(&keep).is_some() {
            return None;
        }
        let n = self.vertices.len();
        let adj = self.out_adjacency();
        let kept: Vec<Vec<(usize, usize)>> = (0..n)
            .map(|v| {
                adj[v]
                    .iter()
                    .filter(|&&e| keep(e))
                    .map(|&e| (v, self.edges[e.0].target.0))
                    .collect()
            })
            .collect();
        // Kahn order on the kept subgraph, then longest-path DP backwards.
        let mut indeg = vec![0usize; n];
        for row in &kept {
            for &(_, w) in row {
                indeg[w] += 1;
            }
        }
        let mut order: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &(_, w) in &kept[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    order.push(w);
                }
            }
        }
        debug_assert_eq!(order.len(), n, "kept subgraph checked acyclic");
        let mut best = vec![0usize; n];
        for &v in order.iter().rev() {
            for &(_, w) in &kept[v] {
                best[v] = best[v].max(1 + best[w]);
            }
        }
        Some(best.into_iter().max().unwrap_or(0))
    }

    /// Shortest path from `from` to `to` through allowed edges (BFS).
    /// The empty path is returned when `from == to`.
    pub fn shortest_path_with(
        &self,
        from: VertexId,
        to: VertexId,
        keep: impl Fn(EdgeId) -> bool,
    ) -> Option<Vec<EdgeId>> {
        if from == to {
            return Some(Vec::new());
        }
        let n = self.vertices.len();
        let adj = self.out_adjacency();
        let mut prev: Vec<Option<(usize, EdgeId)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[from.0] = true;
        let mut queue = std::collections::VecDeque::from([from.0]);
        while let Some(v) = queue.pop_front() {
            for &e in &adj[v] {
                if !keep(e) {
                    continue;
                }
                let w = self.edges[e.0].target.0;
                if !seen[w] {
                    seen[w] = true;
                    prev[w] = Some((v, e));
                    if w == to.0 {
                        let mut path = Vec::new();
                        let mut cur = w;
                        while let Some((p, pe)) = prev[cur] {
                            path.push(pe);
                            cur = p;
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

impl fmt::Display for DirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vertices {
            writeln!(f, "vertex {}", v.id)?;
        }
        for e in &self.edges {
            writeln!(
                f,
                "edge {} {} {} {}",
                e.id,
                self.vertices[e.source.0].id,
                self.vertices[e.target.0].id,
                e.label
            )?;
        }
        Ok(())
    }
}
