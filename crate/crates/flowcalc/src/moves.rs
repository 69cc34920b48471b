//! Elementary moves on edge shifts: symbol expansion and out-splitting.
//!
//! Symbol expansion stretches one symbol s into the two-symbol run s s',
//! changing the shift but not its flow invariants. Out-splitting produces
//! a conjugate presentation; the conjugacy comes back as an explicit
//! sliding block code.

use std::collections::BTreeMap;

use crate::block_code::SlidingBlockCode;
use crate::graph::{DirectedGraph, EdgeId, VertexId};
use crate::shift::EdgeShift;
use crate::word::{PeriodicOrbit, Word};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("UnknownSymbol: no edge labeled {0}")]
    UnknownSymbol(String),
    #[error("BadPartition: {0}")]
    BadPartition(String),
}

/// Record of a symbol expansion: the substitution s -> s s' on words,
/// applied to a copy of the original graph with the edge s split in two.
#[derive(Clone, Debug)]
pub struct ExpansionRecord {
    pub symbol: String,
    pub fresh_symbol: String,
    source: EdgeShift,
    result: EdgeShift,
}

impl ExpansionRecord {
    pub fn source(&self) -> &EdgeShift {
        &self.source
    }

    pub fn result(&self) -> &EdgeShift {
        &self.result
    }

    /// Rewrites an orbit of the source by the substitution s -> s s'.
    /// Orbits through s gain one symbol per crossing; others are unchanged.
    pub fn expand_orbit(&self, o: &PeriodicOrbit) -> PeriodicOrbit {
        let src = self.source.graph();
        let dst = self.result.graph();
        let fresh = dst.edge_by_label(&self.fresh_symbol).expect("fresh edge");
        let mut edges = Vec::new();
        for &e in &o.word().0 {
            let label = src.label(e);
            let img = dst.edge_by_label(label).expect("labels are preserved");
            edges.push(img);
            if label == self.symbol {
                edges.push(fresh);
            }
        }
        PeriodicOrbit::from_cycle(dst, edges)
    }

    /// Rewrites a result orbit back: every s is followed by s', which is
    /// dropped. Panics if the word is not in the substitution's image.
    pub fn collapse_orbit(&self, o: &PeriodicOrbit) -> PeriodicOrbit {
        let src = self.source.graph();
        let dst = self.result.graph();
        let mut edges = Vec::new();
        let p = o.period();
        for i in 0..p {
            let label = dst.label(o.word().0[i]);
            if label == self.fresh_symbol {
                assert_eq!(
                    dst.label(o.symbol_at(i as isize - 1)),
                    self.symbol,
                    "fresh symbol only follows the expanded symbol"
                );
                continue;
            }
            edges.push(src.edge_by_label(label).expect("labels are preserved"));
        }
        PeriodicOrbit::from_cycle(src, edges)
    }
}

/// Replaces edge s: u -> v by s: u -> w, s': w -> v through a fresh vertex.
pub fn symbol_expansion(
    x: &EdgeShift,
    symbol: &str,
) -> Result<(EdgeShift, ExpansionRecord), MoveError> {
    let g = x.graph();
    let s = g
        .edge_by_label(symbol)
        .ok_or_else(|| MoveError::UnknownSymbol(symbol.to_string()))?;
    let fresh_symbol = g.fresh_label(&format!("{symbol}'"));

    let mut h = DirectedGraph::new();
    for (_, v) in g.vertices() {
        h.add_vertex(v.id.clone());
    }
    // Vertex namespace is separate from labels; reuse the fresh symbol text.
    let mid_name = h.fresh_vertex_id(&fresh_symbol);
    let mid = h.add_vertex(mid_name);
    for (i, e) in g.edges() {
        if i == s {
            h.add_edge(e.id.clone(), e.source, mid, e.label.clone());
        } else {
            h.add_edge(e.id.clone(), e.source, e.target, e.label.clone());
        }
    }
    h.add_labeled_edge(fresh_symbol.clone(), mid, g.target(s));

    let result = EdgeShift::new(h).expect("expansion preserves essentiality");
    let record = ExpansionRecord {
        symbol: symbol.to_string(),
        fresh_symbol,
        source: x.clone(),
        result: result.clone(),
    };
    Ok((result, record))
}

/// Out-splits vertex `v` along a partition of its out-edges (classes given
/// by edge labels). Returns the split shift and the conjugacy onto it.
pub fn out_split(
    x: &EdgeShift,
    v: &str,
    partition: &[Vec<String>],
) -> Result<(EdgeShift, SlidingBlockCode), MoveError> {
    let g = x.graph();
    let vid = g
        .vertex_by_id(v)
        .ok_or_else(|| MoveError::BadPartition(format!("no vertex {v}")))?;

    // The classes must partition the out-edges of v exactly.
    let out: Vec<EdgeId> = g.out_edges(vid);
    let mut class_of: BTreeMap<EdgeId, usize> = BTreeMap::new();
    for (k, class) in partition.iter().enumerate() {
        if class.is_empty() {
            return Err(MoveError::BadPartition(format!("class {} is empty", k + 1)));
        }
        for label in class {
            let e = g
                .edge_by_label(label)
                .ok_or_else(|| MoveError::BadPartition(format!("no edge labeled {label}")))?;
            if g.source(e) != vid {
                return Err(MoveError::BadPartition(format!(
                    "edge {label} does not leave {v}"
                )));
            }
            if class_of.insert(e, k).is_some() {
                return Err(MoveError::BadPartition(format!(
                    "edge {label} listed twice"
                )));
            }
        }
    }
    for &e in &out {
        if !class_of.contains_key(&e) {
            return Err(MoveError::BadPartition(format!(
                "out-edge {} not covered",
                g.label(e)
            )));
        }
    }
    let m = partition.len();

    // Names for the split pieces stay readable ("u^2", "a^1") but must not
    // collide with anything the input already uses.
    let mut used_vertices: std::collections::BTreeSet<String> =
        g.vertices().map(|(_, data)| data.id.clone()).collect();
    let mut used_edges: std::collections::BTreeSet<String> = g
        .edges()
        .flat_map(|(_, e)| [e.id.clone(), e.label.clone()])
        .collect();
    let fresh = |used: &mut std::collections::BTreeSet<String>, base: String| -> String {
        let mut name = base.clone();
        let mut k = 2;
        while !used.insert(name.clone()) {
            name = format!("{base}_{k}");
            k += 1;
        }
        name
    };

    // Vertices: v becomes one copy per class, in place; others unchanged.
    let mut h = DirectedGraph::new();
    let mut copies: Vec<VertexId> = Vec::new();
    let mut plain: BTreeMap<usize, VertexId> = BTreeMap::new();
    for (w, data) in g.vertices() {
        if w == vid {
            for k in 0..m {
                let name = fresh(&mut used_vertices, format!("{}^{}", data.id, k + 1));
                copies.push(h.add_vertex(name));
            }
        } else {
            plain.insert(w.0, h.add_vertex(data.id.clone()));
        }
    }
    let place = |w: VertexId, class: usize| -> VertexId {
        if w == vid {
            copies[class]
        } else {
            plain[&w.0]
        }
    };

    // Edges into v are duplicated, one copy per class; the copy's class
    // also fixes the source copy when the edge leaves v itself.
    let mut image_label: BTreeMap<(EdgeId, usize), String> = BTreeMap::new();
    for (i, e) in g.edges() {
        let src_class = class_of.get(&i).copied().unwrap_or(0);
        if e.target == vid && m > 1 {
            for k in 0..m {
                let label = fresh(&mut used_edges, format!("{}^{}", e.label, k + 1));
                h.add_edge(label.clone(), place(e.source, src_class), copies[k], label.clone());
                image_label.insert((i, k), label);
            }
        } else {
            let target = if e.target == vid {
                copies[0]
            } else {
                plain[&e.target.0]
            };
            h.add_edge(e.id.clone(), place(e.source, src_class), target, e.label.clone());
            image_label.insert((i, 0), e.label.clone());
        }
    }

    let split = EdgeShift::new(h).expect("out-splitting preserves essentiality");

    // The conjugacy reads one symbol ahead: the copy of the current edge is
    // the class of the next edge whenever the current edge enters v.
    let mut table: BTreeMap<Word, EdgeId> = BTreeMap::new();
    for w in x.words_of_length(3) {
        let cur = w.0[1];
        let next = w.0[2];
        let key = if g.target(cur) == vid {
            (cur, class_of[&next])
        } else {
            (cur, 0)
        };
        let img = split
            .graph()
            .edge_by_label(&image_label[&key])
            .expect("image edge exists");
        table.insert(w, img);
    }
    let code = SlidingBlockCode::new(x.clone(), split.clone(), 1, table)
        .expect("the splitting code is total and composable by construction");
    Ok((split, code))
}
