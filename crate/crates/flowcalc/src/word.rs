//! Finite words and periodic orbits over an edge alphabet.
//!
//! A word is a sequence of edges of one fixed graph; it is composable when
//! consecutive edges share a vertex. A periodic orbit is stored as the
//! primitive word of one period, rotated to its lexicographically least
//! form under the declared edge order, so equal orbits compare equal.

use crate::graph::{DirectedGraph, EdgeId};

/// A finite sequence of edges. Ordering is lexicographic in declaration order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Word(pub Vec<EdgeId>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True if consecutive edges are composable in `g`.
    pub fn is_composable(&self, g: &DirectedGraph) -> bool {
        self.0
            .windows(2)
            .all(|p| g.target(p[0]) == g.source(p[1]))
    }

    /// True if the word is a closed composable path in `g`.
    pub fn is_closed_path(&self, g: &DirectedGraph) -> bool {
        !self.is_empty()
            && self.is_composable(g)
            && g.target(*self.0.last().unwrap()) == g.source(self.0[0])
    }

    /// Edge labels joined with commas.
    pub fn text(&self, g: &DirectedGraph) -> String {
        self.0
            .iter()
            .map(|&e| g.label(e).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses comma- or whitespace-separated edge labels.
    pub fn parse(g: &DirectedGraph, s: &str) -> Option<Word> {
        let parts: Vec<&str> = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .collect();
        let mut edges = Vec::with_capacity(parts.len());
        for p in parts {
            edges.push(g.edge_by_label(p)?);
        }
        Some(Word(edges))
    }

    /// Cyclic read of `len` edges starting at signed position `start`.
    pub fn cyclic_slice(&self, start: isize, len: usize) -> Word {
        let n = self.0.len() as isize;
        assert!(n > 0);
        Word(
            (0..len as isize)
                .map(|k| self.0[(((start + k) % n + n) % n) as usize])
                .collect(),
        )
    }
}

/// Lexicographically least rotation (simple quadratic scan; words are short).
fn least_rotation(w: &[EdgeId]) -> Vec<EdgeId> {
    let n = w.len();
    let mut best = 0;
    for c in 1..n {
        for k in 0..n {
            let a = w[(best + k) % n];
            let b = w[(c + k) % n];
            if b < a {
                best = c;
                break;
            }
            if a < b {
                break;
            }
        }
    }
    (0..n).map(|k| w[(best + k) % n]).collect()
}

/// Shortest word whose cyclic repetition equals `w`.
fn primitive_root(w: &[EdgeId]) -> Vec<EdgeId> {
    let n = w.len();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        if (0..n).all(|i| w[i] == w[i % d]) {
            return w[..d].to_vec();
        }
    }
    unreachable!()
}

/// A periodic orbit of an edge shift, canonicalized.
///
/// Stored as the primitive word of one period in its least rotation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PeriodicOrbit {
    word: Word,
}

impl PeriodicOrbit {
    /// Canonicalizes a closed composable path into an orbit.
    ///
    /// The path may wind around the orbit several times; the stored word is
    /// its primitive root. Panics if the path is not closed in `g`.
    pub fn from_cycle(g: &DirectedGraph, edges: Vec<EdgeId>) -> Self {
        let w = Word(edges);
        assert!(w.is_closed_path(g), "orbit word must be a closed path");
        let root = primitive_root(&w.0);
        Self {
            word: Word(least_rotation(&root)),
        }
    }

    /// The canonical primitive word of one period.
    pub fn word(&self) -> &Word {
        &self.word
    }

    /// Least period of the orbit.
    pub fn period(&self) -> usize {
        self.word.len()
    }

    /// Edge at signed position `i` of the canonical bi-infinite point.
    pub fn symbol_at(&self, i: isize) -> EdgeId {
        let n = self.word.len() as isize;
        self.word.0[(((i % n) + n) % n) as usize]
    }

    /// Window of radius `r` centered at position `i` (length 2r+1).
    pub fn window(&self, i: isize, r: usize) -> Word {
        self.word.cyclic_slice(i - r as isize, 2 * r + 1)
    }

    /// All rotations of the canonical word, each an anchored representative.
    pub fn rotations(&self) -> Vec<Word> {
        let n = self.word.len();
        (0..n)
            .map(|s| self.word.cyclic_slice(s as isize, n))
            .collect()
    }

    pub fn text(&self, g: &DirectedGraph) -> String {
        format!("({})", self.word.text(g))
    }
}
