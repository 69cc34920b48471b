//! Discrete cross sections of edge shifts and their first-return systems.
//!
//! A cross section is a cylinder set — a radius and a set of center words —
//! every orbit must visit with bounded gaps, plus an exact rational height
//! placing it inside the unit-ceiling suspension. Validity and return data
//! are decided on the window graph, where the section marks edges and the
//! forbidden configurations are precisely the unmarked cycles.

use std::collections::{BTreeMap, BTreeSet};

use num::{BigRational, Zero};

use crate::block_code::SlidingBlockCode;
use crate::graph::{DirectedGraph, EdgeId, VertexId};
use crate::shift::{EdgeShift, WindowGraph};
use crate::word::{PeriodicOrbit, Word};

/// A clopen cylinder section: the points whose centered window of radius
/// `radius` lies in `centers`, placed at `height` in the suspension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossSection {
    radius: usize,
    centers: BTreeSet<Word>,
    height: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SectionVerdict {
    Valid { max_return: usize },
    Invalid { witness: PeriodicOrbit },
}

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum SectionError {
    #[error("InvalidSection: an orbit of period {} misses the section", witness.period())]
    InvalidSection { witness: PeriodicOrbit },
    #[error("NotDisjoint: the sections share an occurring window at equal height")]
    NotDisjoint { witness: Word },
}

impl CrossSection {
    /// A section at height 0. Center words must have length 2·radius + 1.
    pub fn new(radius: usize, centers: BTreeSet<Word>) -> Self {
        for w in &centers {
            assert_eq!(w.len(), 2 * radius + 1, "centers must match the radius");
        }
        Self {
            radius,
            centers,
            height: BigRational::zero(),
        }
    }

    pub fn with_height(mut self, height: BigRational) -> Self {
        self.height = height;
        self
    }

    /// The radius-0 section marking the given symbols.
    pub fn from_symbols(x: &EdgeShift, labels: &[&str]) -> Self {
        let centers = labels
            .iter()
            .map(|l| {
                let e = x
                    .graph()
                    .edge_by_label(l)
                    .unwrap_or_else(|| panic!("no edge labeled {l}"));
                Word(vec![e])
            })
            .collect();
        Self::new(0, centers)
    }

    /// The everything-section: radius 0, every symbol marked.
    pub fn full(x: &EdgeShift) -> Self {
        let centers = x.graph().edges().map(|(e, _)| Word(vec![e])).collect();
        Self::new(0, centers)
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn centers(&self) -> &BTreeSet<Word> {
        &self.centers
    }

    pub fn height(&self) -> &BigRational {
        &self.height
    }

    /// Whether a window of exactly length 2·radius + 1 is a center.
    pub fn is_center(&self, w: &Word) -> bool {
        debug_assert_eq!(w.len(), 2 * self.radius + 1);
        self.centers.contains(w)
    }

    /// Whether the centered subword of a wider odd window is a center.
    pub fn marks(&self, w: &Word) -> bool {
        self.marks_at(w, 0)
    }

    /// Whether the subword at signed offset `k` from the wider window's
    /// center is a center. The needed positions must lie inside `w`.
    pub fn marks_at(&self, w: &Word, k: isize) -> bool {
        assert_eq!(w.len() % 2, 1, "windows have odd length");
        let c = (w.len() / 2) as isize + k;
        let lo = c - self.radius as isize;
        let hi = c + self.radius as isize;
        assert!(lo >= 0 && (hi as usize) < w.len(), "offset out of window");
        self.centers
            .contains(&Word(w.0[lo as usize..=hi as usize].to_vec()))
    }

    /// Anchor positions of an orbit: the i with window(i) in the section.
    pub fn anchors(&self, o: &PeriodicOrbit) -> Vec<usize> {
        (0..o.period())
            .filter(|&i| self.centers.contains(&o.window(i as isize, self.radius)))
            .collect()
    }

    /// Decides the cross-section property on the window graph: valid iff
    /// no cycle avoids the marked edges; then the largest first-return gap
    /// is the longest unmarked path plus one.
    pub fn validate(&self, x: &EdgeShift) -> SectionVerdict {
        let wg = WindowGraph::build(x, self.radius);
        let unmarked = |e: EdgeId| !self.centers.contains(wg.window(e));
        if let Some(cycle) = wg.graph.find_cycle_with(&unmarked) {
            return SectionVerdict::Invalid {
                witness: wg.orbit_of_cycle(x.graph(), &cycle),
            };
        }
        let longest = wg
            .graph
            .longest_path_with(&unmarked)
            .expect("no unmarked cycle exists");
        SectionVerdict::Valid {
            max_return: longest + 1,
        }
    }
}

/// Whether two sections of `x` are disjoint as subsets of the suspension:
/// either their heights differ, or no occurring window lies in both.
pub fn are_disjoint(x: &EdgeShift, a: &CrossSection, b: &CrossSection) -> bool {
    if a.height() != b.height() {
        return true;
    }
    let k = a.radius().max(b.radius());
    !x.words_of_length(2 * k + 1)
        .iter()
        .any(|w| a.marks(w) && b.marks(w))
}

/// Reassigns heights so the sections become pairwise disjoint, processing
/// in order and keeping each height unless it collides with an earlier
/// one; a colliding section moves to 1/2^k for the smallest k that works.
pub fn disjointify(x: &EdgeShift, sections: &[CrossSection]) -> Vec<CrossSection> {
    let mut out: Vec<CrossSection> = Vec::new();
    for s in sections {
        let mut cur = s.clone();
        if out.iter().any(|t| !are_disjoint(x, t, &cur)) {
            let mut k = 1u32;
            loop {
                let h = BigRational::new(1.into(), num::BigInt::from(2).pow(k));
                let candidate = cur.clone().with_height(h);
                if out.iter().all(|t| are_disjoint(x, t, &candidate)) {
                    cur = candidate;
                    break;
                }
                k += 1;
            }
        }
        out.push(cur);
    }
    out
}

/// Pulls a section back through a sliding block code: the cylinder of all
/// source windows whose image window is centered in `c_prime`.
///
/// This is a pure preimage of cylinder data; neither section is validated
/// (validity transfers exactly when `c_prime` is valid on the image).
pub fn pullback(code: &SlidingBlockCode, c_prime: &CrossSection) -> CrossSection {
    let kappa = c_prime.radius() + code.radius();
    let centers = code
        .source()
        .words_of_length(2 * kappa + 1)
        .into_iter()
        .filter(|w| c_prime.centers().contains(&code.apply_word_interior(w)))
        .collect();
    CrossSection::new(kappa, centers).with_height(c_prime.height().clone())
}

/// The first-return system of a valid section.
///
/// Return edges are the window-graph paths from one crossing to the next:
/// a marked edge followed by unmarked edges, ending where a marked edge
/// can leave again. Vertices are the window-graph states that source a
/// marked edge; every return edge reads off a word over the base shift.
#[derive(Clone, Debug)]
pub struct ReturnSystem {
    base: EdgeShift,
    section: CrossSection,
    window_graph: WindowGraph,
    shift: EdgeShift,
    max_return: usize,
    paths: Vec<Vec<EdgeId>>,
    words: Vec<Word>,
    by_path: BTreeMap<Vec<EdgeId>, EdgeId>,
}

impl ReturnSystem {
    pub fn build(x: &EdgeShift, section: &CrossSection) -> Result<Self, SectionError> {
        let max_return = match section.validate(x) {
            SectionVerdict::Invalid { witness } => {
                return Err(SectionError::InvalidSection { witness })
            }
            SectionVerdict::Valid { max_return } => max_return,
        };
        let wg = WindowGraph::build(x, section.radius());
        let marked: Vec<bool> = wg
            .graph
            .edges()
            .map(|(e, _)| section.is_center(wg.window(e)))
            .collect();
        let mut crossing_source = vec![false; wg.graph.vertex_count()];
        for (e, data) in wg.graph.edges() {
            if marked[e.0] {
                crossing_source[data.source.0] = true;
            }
        }

        let mut rg = DirectedGraph::new();
        let mut rv: BTreeMap<usize, VertexId> = BTreeMap::new();
        for (v, data) in wg.graph.vertices() {
            if crossing_source[v.0] {
                rv.insert(v.0, rg.add_vertex(data.id.clone()));
            }
        }

        // Depth-first over unmarked continuations of each marked edge; a
        // path is a return edge whenever its end can cross again. The
        // unmarked subgraph is acyclic, so this terminates.
        fn extend(
            g: &DirectedGraph,
            marked: &[bool],
            crossing_source: &[bool],
            path: &mut Vec<EdgeId>,
            out: &mut Vec<Vec<EdgeId>>,
        ) {
            let end = g.target(*path.last().unwrap());
            if crossing_source[end.0] {
                out.push(path.clone());
            }
            for e in g.out_edges(end) {
                if !marked[e.0] {
                    path.push(e);
                    extend(g, marked, crossing_source, path, out);
                    path.pop();
                }
            }
        }
        let mut paths: Vec<Vec<EdgeId>> = Vec::new();
        for (e, _) in wg.graph.edges() {
            if marked[e.0] {
                let mut path = vec![e];
                extend(&wg.graph, &marked, &crossing_source, &mut path, &mut paths);
            }
        }

        let mut words = Vec::new();
        let mut used: BTreeSet<String> = BTreeSet::new();
        for path in &paths {
            let word = Word(path.iter().map(|&e| wg.center(e)).collect());
            let text = word.text(x.graph());
            let mut label = text.clone();
            let mut k = 2;
            while !used.insert(label.clone()) {
                label = format!("{text}#{k}");
                k += 1;
            }
            let src = rv[&wg.graph.source(path[0]).0];
            let tgt = rv[&wg.graph.target(*path.last().unwrap()).0];
            rg.add_edge(label.clone(), src, tgt, label);
            words.push(word);
        }
        let shift = EdgeShift::new(rg).expect("return graphs are essential");
        let by_path = paths
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, EdgeId(i)))
            .collect();
        Ok(Self {
            base: x.clone(),
            section: section.clone(),
            window_graph: wg,
            shift,
            max_return,
            paths,
            words,
            by_path,
        })
    }

    pub fn base(&self) -> &EdgeShift {
        &self.base
    }

    pub fn section(&self) -> &CrossSection {
        &self.section
    }

    /// The shift on return-word symbols.
    pub fn shift(&self) -> &EdgeShift {
        &self.shift
    }

    pub fn graph(&self) -> &DirectedGraph {
        self.shift.graph()
    }

    pub fn max_return(&self) -> usize {
        self.max_return
    }

    /// The base-shift word read along a return edge.
    pub fn word(&self, e: EdgeId) -> &Word {
        &self.words[e.0]
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// The window-graph path underlying a return edge.
    pub fn path(&self, e: EdgeId) -> &[EdgeId] {
        &self.paths[e.0]
    }

    /// Factorization of an orbit meeting the section: anchor positions on
    /// the canonical word, and the return edge leaving each anchor.
    pub fn return_sequence(&self, o: &PeriodicOrbit) -> Option<(Vec<usize>, Vec<EdgeId>)> {
        let anchors = self.section.anchors(o);
        if anchors.is_empty() {
            return None;
        }
        let p = o.period();
        let wg_path = self.window_graph.path_of_orbit(o);
        let edges = (0..anchors.len())
            .map(|i| {
                let from = anchors[i];
                let to = if i + 1 < anchors.len() {
                    anchors[i + 1]
                } else {
                    anchors[0] + p
                };
                let path: Vec<EdgeId> = (from..to).map(|t| wg_path[t % p]).collect();
                *self
                    .by_path
                    .get(&path)
                    .expect("anchor-to-anchor segments are return paths")
            })
            .collect();
        Some((anchors, edges))
    }

    /// Recodes an orbit meeting the section into the return shift.
    pub fn recode_orbit(&self, o: &PeriodicOrbit) -> Option<PeriodicOrbit> {
        let (_, edges) = self.return_sequence(o)?;
        Some(PeriodicOrbit::from_cycle(self.shift.graph(), edges))
    }

    /// Expands a return-shift orbit back to the base shift.
    pub fn decode_orbit(&self, o: &PeriodicOrbit) -> PeriodicOrbit {
        let mut edges = Vec::new();
        for &r in &o.word().0 {
            edges.extend_from_slice(&self.words[r.0].0);
        }
        PeriodicOrbit::from_cycle(self.base.graph(), edges)
    }
}

/// A word-valued morphism on return symbols: each (2m+1)-tuple of return
/// edges around a crossing maps to a word over the base alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReturnMorphism {
    pub m: usize,
    pub table: BTreeMap<Vec<EdgeId>, Word>,
}

/// Output of the two-section first-hit construction: the return system of
/// the carved-out section D inside the first section, the pushed-forward
/// section D'' inside the second, the word morphism realizing the shear
/// between them, and the per-window hit step k2.
pub struct CaseOne {
    pub system: ReturnSystem,
    pub d_second: CrossSection,
    pub psi: ReturnMorphism,
    pub hit_steps: BTreeMap<Word, usize>,
}

impl CaseOne {
    pub fn d(&self) -> &CrossSection {
        self.system.section()
    }
}

/// Given two disjoint valid sections, carves out of the first the set D of
/// crossings whose next crossing among both sections lands on the second,
/// and pushes D forward to that hit as D''. The flow time from a D-point
/// to its hit is k2 + h2 - h1 with k2 recorded per window; the returned
/// morphism psi rewrites D-return words into D''-return words.
pub fn ps_case1(
    x: &EdgeShift,
    c1: &CrossSection,
    c2: &CrossSection,
) -> Result<CaseOne, SectionError> {
    let r1 = match c1.validate(x) {
        SectionVerdict::Invalid { witness } => {
            return Err(SectionError::InvalidSection { witness })
        }
        SectionVerdict::Valid { max_return } => max_return,
    };
    if let SectionVerdict::Invalid { witness } = c2.validate(x) {
        return Err(SectionError::InvalidSection { witness });
    }
    if c1.height() == c2.height() {
        let k = c1.radius().max(c2.radius());
        if let Some(w) = x
            .words_of_length(2 * k + 1)
            .into_iter()
            .find(|w| c1.marks(w) && c2.marks(w))
        {
            return Err(SectionError::NotDisjoint { witness: w });
        }
    }

    // A crossing of the second section at the same symbol position comes
    // strictly later in flow time iff its height is larger, so step 0
    // counts as a hit exactly when h2 > h1.
    let k_min: usize = if c2.height() > c1.height() { 0 } else { 1 };
    let kd = r1 + c1.radius().max(c2.radius());

    let mut d_centers: BTreeSet<Word> = BTreeSet::new();
    let mut hit_steps: BTreeMap<Word, usize> = BTreeMap::new();
    for w in x.words_of_length(2 * kd + 1) {
        if !c1.marks(&w) {
            continue;
        }
        let k1 = (1..=r1)
            .find(|&k| c1.marks_at(&w, k as isize))
            .expect("first-return gaps are bounded by max_return");
        let k2 = (k_min..=k1).find(|&k| c2.marks_at(&w, k as isize));
        if let Some(k2) = k2 {
            let tau1 = BigRational::from_integer(k1.into());
            let tau2 = BigRational::from_integer(k2.into()) + c2.height() - c1.height();
            assert_ne!(tau1, tau2, "disjoint sections cannot cross simultaneously");
            if tau2 < tau1 {
                hit_steps.insert(w.clone(), k2);
                d_centers.insert(w);
            }
        }
    }
    let d = CrossSection::new(kd, d_centers).with_height(c1.height().clone());
    debug_assert!(matches!(d.validate(x), SectionVerdict::Valid { .. }));

    // D'' marks y at height h2 iff y is the k2-step shift of a D-point.
    let kdd = r1 + kd;
    let mut dd_centers: BTreeSet<Word> = BTreeSet::new();
    for w in x.words_of_length(2 * kdd + 1) {
        let hit = (k_min..=r1).any(|k| {
            let c = kdd - k;
            let sub = Word(w.0[c - kd..=c + kd].to_vec());
            hit_steps.get(&sub) == Some(&k)
        });
        if hit {
            dd_centers.insert(w);
        }
    }
    let d_second = CrossSection::new(kdd, dd_centers).with_height(c2.height().clone());
    debug_assert!(matches!(d_second.validate(x), SectionVerdict::Valid { .. }));

    // psi on a (2m+1)-tuple of D-return edges: unfold to a base word, read
    // the hit steps at the center anchor and the next, and slice between
    // the two hit positions.  The radius-kd window at the *next* anchor
    // reaches kd symbols past it, so the tuple must supply kd+1 return
    // words on that side.
    let system = ReturnSystem::build(x, &d)?;
    let m = kd + 1;
    let mut table: BTreeMap<Vec<EdgeId>, Word> = BTreeMap::new();
    for t in system.shift().words_of_length(2 * m + 1) {
        let words: Vec<&Word> = t.0.iter().map(|&b| system.word(b)).collect();
        let f: Vec<EdgeId> = words.iter().flat_map(|w| w.0.iter().copied()).collect();
        let a: usize = words[..m].iter().map(|w| w.len()).sum();
        let a2 = a + words[m].len();
        let ka = *hit_steps
            .get(&Word(f[a - kd..=a + kd].to_vec()))
            .expect("unfolded anchors are D-centers");
        let kb = *hit_steps
            .get(&Word(f[a2 - kd..=a2 + kd].to_vec()))
            .expect("unfolded anchors are D-centers");
        let image = Word(f[a + ka..a2 + kb].to_vec());
        assert!(!image.is_empty(), "hit positions advance with the anchor");
        table.insert(t.0.clone(), image);
    }
    let psi = ReturnMorphism { m, table };

    Ok(CaseOne {
        system,
        d_second,
        psi,
        hit_steps,
    })
}

/// Checks on every orbit of period at most `p_max` that the first-hit data
/// cohere: the shifted anchors land exactly on D'', they stay in cyclic
/// order, and psi rewrites each return word to the word between hits.
pub fn verify_case_one(x: &EdgeShift, case: &CaseOne, p_max: usize) -> Result<(), String> {
    let d = case.d();
    let kd = d.radius();
    let m = case.psi.m;
    for o in x.periodic_orbits(p_max) {
        let Some((anchors, redges)) = case.system.return_sequence(&o) else {
            continue;
        };
        let p = o.period();
        let n = anchors.len();
        let gammas: Vec<usize> = anchors
            .iter()
            .map(|&a| {
                let w = o.window(a as isize, kd);
                a + case.hit_steps[&w]
            })
            .collect();
        for i in 0..n {
            let next = if i + 1 < n { gammas[i + 1] } else { gammas[0] + p };
            if gammas[i] >= next {
                return Err(format!(
                    "hit positions out of order on {}: {} !< {}",
                    o.text(x.graph()),
                    gammas[i],
                    next
                ));
            }
        }
        let got: BTreeSet<usize> = gammas.iter().map(|&g| g % p).collect();
        let want: BTreeSet<usize> = case.d_second.anchors(&o).into_iter().collect();
        if got != want {
            return Err(format!(
                "shifted anchors of {} are {:?}, second section marks {:?}",
                o.text(x.graph()),
                got,
                want
            ));
        }
        for i in 0..n {
            let tuple: Vec<EdgeId> = (i as isize - m as isize..=i as isize + m as isize)
                .map(|j| redges[j.rem_euclid(n as isize) as usize])
                .collect();
            let image = case
                .psi
                .table
                .get(&tuple)
                .ok_or_else(|| format!("missing psi entry on {}", o.text(x.graph())))?;
            let next = if i + 1 < n { gammas[i + 1] } else { gammas[0] + p };
            let expected = o.word().cyclic_slice(gammas[i] as isize, next - gammas[i]);
            if *image != expected {
                return Err(format!(
                    "psi image mismatch on {} at anchor {}",
                    o.text(x.graph()),
                    anchors[i]
                ));
            }
        }
    }
    Ok(())
}
