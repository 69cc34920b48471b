//! Sliding block codes between edge shifts.
//!
//! A code of radius r maps every occurring (2r+1)-window of the source
//! shift to a symbol of the target shift; images of a point's successive
//! windows must compose. Construction checks both properties exhaustively
//! (the window language is finite), so a constructed code is always a
//! total shift-commuting map.

use std::collections::BTreeMap;

use crate::graph::EdgeId;
use crate::shift::EdgeShift;
use crate::word::{PeriodicOrbit, Word};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum BlockCodeError {
    #[error("no image symbol for the occurring window {0}")]
    MissingWindow(String),
    #[error("image symbol out of range for the target graph: {0}")]
    UnknownSymbol(String),
    #[error("images of the overlapping windows in {0} do not compose")]
    NonComposable(String),
}

/// A total sliding block code between two edge shifts.
#[derive(Clone, Debug)]
pub struct SlidingBlockCode {
    source: EdgeShift,
    target: EdgeShift,
    radius: usize,
    table: BTreeMap<Word, EdgeId>,
}

impl SlidingBlockCode {
    /// Builds and fully validates a code from its window table.
    ///
    /// Entries keyed by non-occurring windows are allowed and ignored.
    pub fn new(
        source: EdgeShift,
        target: EdgeShift,
        radius: usize,
        table: BTreeMap<Word, EdgeId>,
    ) -> Result<Self, BlockCodeError> {
        for (w, e) in &table {
            assert_eq!(w.len(), 2 * radius + 1, "window length fixed by radius");
            if e.0 >= target.graph().edge_count() {
                return Err(BlockCodeError::UnknownSymbol(format!(
                    "window {} maps to edge index {}",
                    w.text(source.graph()),
                    e.0
                )));
            }
        }
        for w in source.words_of_length(2 * radius + 1) {
            if !table.contains_key(&w) {
                return Err(BlockCodeError::MissingWindow(w.text(source.graph())));
            }
        }
        for w in source.words_of_length(2 * radius + 2) {
            let first = table[&Word(w.0[..2 * radius + 1].to_vec())];
            let second = table[&Word(w.0[1..].to_vec())];
            if target.graph().target(first) != target.graph().source(second) {
                return Err(BlockCodeError::NonComposable(w.text(source.graph())));
            }
        }
        Ok(Self {
            source,
            target,
            radius,
            table,
        })
    }

    /// The radius-0 code given by a symbol-to-symbol map.
    pub fn one_block(
        source: EdgeShift,
        target: EdgeShift,
        map: &BTreeMap<EdgeId, EdgeId>,
    ) -> Result<Self, BlockCodeError> {
        let table = map.iter().map(|(&k, &v)| (Word(vec![k]), v)).collect();
        Self::new(source, target, 0, table)
    }

    /// The identity code on a shift.
    pub fn identity(x: &EdgeShift) -> Self {
        let map: BTreeMap<EdgeId, EdgeId> =
            x.graph().edges().map(|(i, _)| (i, i)).collect();
        Self::one_block(x.clone(), x.clone(), &map).expect("identity is a valid code")
    }

    pub fn source(&self) -> &EdgeShift {
        &self.source
    }

    pub fn target(&self) -> &EdgeShift {
        &self.target
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn table(&self) -> &BTreeMap<Word, EdgeId> {
        &self.table
    }

    /// Image symbol of one window.
    pub fn image_symbol(&self, w: &Word) -> Option<EdgeId> {
        self.table.get(w).copied()
    }

    /// Image of the interior of a word: position i of the result is the
    /// image of the window centered at position radius+i of `w`.
    pub fn apply_word_interior(&self, w: &Word) -> Word {
        assert!(w.len() >= 2 * self.radius + 1, "word shorter than a window");
        let out = (self.radius..w.len() - self.radius)
            .map(|i| {
                let win = Word(w.0[i - self.radius..=i + self.radius].to_vec());
                *self
                    .table
                    .get(&win)
                    .expect("validated codes are total on occurring windows")
            })
            .collect();
        Word(out)
    }

    /// Image of a periodic orbit. The least period of the image divides the
    /// period of the input.
    pub fn apply_orbit(&self, o: &PeriodicOrbit) -> PeriodicOrbit {
        let edges: Vec<EdgeId> = (0..o.period() as isize)
            .map(|i| {
                let win = o.window(i, self.radius);
                *self
                    .table
                    .get(&win)
                    .expect("validated codes are total on occurring windows")
            })
            .collect();
        PeriodicOrbit::from_cycle(self.target.graph(), edges)
    }

    /// Composition: the returned code maps like `then` applied after `self`.
    /// Fails if `then` is not total on the image language of `self`.
    pub fn compose(&self, then: &SlidingBlockCode) -> Result<SlidingBlockCode, BlockCodeError> {
        let radius = self.radius + then.radius;
        let mut table = BTreeMap::new();
        for w in self.source.words_of_length(2 * radius + 1) {
            let mid = self.apply_word_interior(&w);
            debug_assert_eq!(mid.len(), 2 * then.radius + 1);
            let Some(e) = then.table.get(&mid) else {
                return Err(BlockCodeError::MissingWindow(mid.text(then.source.graph())));
            };
            table.insert(w, *e);
        }
        SlidingBlockCode::new(self.source.clone(), then.target.clone(), radius, table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DirectedGraph;

    fn paired_run() -> EdgeShift {
        // u -a1-> w, w -a2-> u, u -b-> u: every a1 is followed by a2.
        let mut g = DirectedGraph::new();
        let u = g.add_vertex("u");
        let w = g.add_vertex("w");
        g.add_labeled_edge("a1", u, w);
        g.add_labeled_edge("a2", w, u);
        g.add_labeled_edge("b", u, u);
        EdgeShift::new(g).unwrap()
    }

    fn full_2_shift() -> EdgeShift {
        let mut g = DirectedGraph::new();
        let u = g.add_vertex("u");
        g.add_labeled_edge("a", u, u);
        g.add_labeled_edge("b", u, u);
        EdgeShift::new(g).unwrap()
    }

    fn collapse_code() -> SlidingBlockCode {
        // a1, a2 -> a and b -> b, from the paired-run shift onto the 2-shift.
        let x = paired_run();
        let y = full_2_shift();
        let a = y.graph().edge_by_label("a").unwrap();
        let b = y.graph().edge_by_label("b").unwrap();
        let map: BTreeMap<EdgeId, EdgeId> = x
            .graph()
            .edges()
            .map(|(i, e)| (i, if e.label.starts_with('a') { a } else { b }))
            .collect();
        SlidingBlockCode::one_block(x, y, &map).unwrap()
    }

    #[test]
    fn collapse_code_maps_orbits() {
        let phi = collapse_code();
        let x = phi.source().clone();
        for o in x.periodic_orbits(6) {
            let img = phi.apply_orbit(&o);
            assert_eq!(o.period() % img.period(), 0, "image period divides");
        }
        // The paired orbit lands on the fixed point.
        let pair = x
            .periodic_orbits(2)
            .into_iter()
            .find(|o| o.period() == 2 && o.text(x.graph()).contains("a1"))
            .unwrap();
        let img = phi.apply_orbit(&pair);
        assert_eq!(img.period(), 1);
        assert_eq!(img.text(phi.target().graph()), "(a)");
    }

    #[test]
    fn identity_and_composition() {
        let phi = collapse_code();
        let idy = SlidingBlockCode::identity(phi.target());
        let composed = phi.compose(&idy).unwrap();
        assert_eq!(composed.radius(), phi.radius());
        assert_eq!(composed.table(), phi.table());

        let idx = SlidingBlockCode::identity(phi.source());
        let composed = idx.compose(&phi).unwrap();
        assert_eq!(composed.table(), phi.table());
    }

    #[test]
    fn totality_is_enforced() {
        let x = full_2_shift();
        let a = x.graph().edge_by_label("a").unwrap();
        let table: BTreeMap<Word, EdgeId> = [(Word(vec![a]), a)].into_iter().collect();
        let err = SlidingBlockCode::new(x.clone(), x.clone(), 0, table).unwrap_err();
        assert_eq!(err, BlockCodeError::MissingWindow("b".to_string()));
    }

    #[test]
    fn composability_is_enforced() {
        // Golden-mean shift: sending a' to b breaks composability after a.
        let mut g = DirectedGraph::new();
        let u = g.add_vertex("u");
        let v = g.add_vertex("v");
        g.add_labeled_edge("a", u, v);
        g.add_labeled_edge("a'", v, u);
        g.add_labeled_edge("b", u, u);
        let x = EdgeShift::new(g).unwrap();
        let a = x.graph().edge_by_label("a").unwrap();
        let ap = x.graph().edge_by_label("a'").unwrap();
        let b = x.graph().edge_by_label("b").unwrap();
        let map: BTreeMap<EdgeId, EdgeId> =
            [(a, a), (ap, b), (b, b)].into_iter().collect();
        let err = SlidingBlockCode::one_block(x.clone(), x, &map).unwrap_err();
        assert!(matches!(err, BlockCodeError::NonComposable(_)), "{err:?}");
    }

    #[test]
    fn interior_application() {
        let phi = collapse_code();
        let x = phi.source().clone();
        let w = Word::parse(x.graph(), "b,a1,a2,b").unwrap();
        let img = phi.apply_word_interior(&w);
        assert_eq!(img.text(phi.target().graph()), "b,a,a,b");
    }
}
