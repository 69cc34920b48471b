//! Word block codes: context-dependent rewriting of return words.
//!
//! A word block code sends each (2M+1)-block of return symbols of a
//! sectioned shift to a word over a target alphabet. Applying one to a
//! periodic orbit concatenates the images of its return factorization,
//! which linearly reparametrizes circles in the suspension. Everything a
//! desk check can decide about such a code — section preservation,
//! openness of the image, length-preservation certificates — is bounded
//! and exact here.

use std::collections::{BTreeMap, BTreeSet};

use num::{BigInt, BigRational, Zero};

use crate::graph::{DirectedGraph, EdgeId, VertexId};
use crate::livsic::{self, WindowFunction};
use crate::section::{CrossSection, ReturnMorphism, ReturnSystem};
use crate::shift::EdgeShift;
use crate::word::{PeriodicOrbit, Word};

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum CodeError {
    #[error("MissingBlock: no image for occurring block {0}")]
    MissingBlock(String),
    #[error("EmptyImageWord: block {0} maps to the empty word")]
    EmptyImageWord(String),
    #[error("NonComposableImage: {0}")]
    NonComposableImage(String),
    #[error("NotIntertwining: {0}")]
    NotIntertwining(String),
    #[error("OrbitMissesSection: {0}")]
    OrbitMissesSection(String),
    #[error("NotIrreducible: {0}")]
    NotIrreducible(String),
    #[error("ResolutionMismatch: no value for occurring window {0}")]
    ResolutionMismatch(String),
}

/// A total map from occurring (2m+1)-blocks of return symbols to nonempty
/// composable words over the target shift, with composable concatenation
/// across consecutive blocks.
#[derive(Clone, Debug)]
pub struct WordBlockCode {
    system: ReturnSystem,
    target: EdgeShift,
    m: usize,
    table: BTreeMap<Vec<EdgeId>, Word>,
}

/// Per-block linear time change: image length over domain length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimeChange {
    pub ratios: BTreeMap<Vec<EdgeId>, BigRational>,
}

/// The image of one periodic orbit with its length bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Application {
    pub image: PeriodicOrbit,
    /// Least period of the domain orbit.
    pub domain_length: usize,
    /// Length of the concatenated image of one domain period (the least
    /// period of `image` divides this).
    pub image_length: usize,
    /// Number of section crossings in one domain period.
    pub hits: usize,
    /// Positions on the canonical image word where crossing images land.
    pub anchor_phases: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SectionConditionVerdict {
    HoldsUpTo(usize),
    Violated {
        orbit: PeriodicOrbit,
        image: PeriodicOrbit,
        position: usize,
    },
}

/// A vertex potential on the block-offset graph witnessing that every
/// cycle keeps its length under the code.
#[derive(Clone, Debug)]
pub struct ConjugacyCertificate {
    pub graph: DirectedGraph,
    pub potential: Vec<BigRational>,
}

#[derive(Clone, Debug)]
pub enum ConjugacyVerdict {
    Certificate(ConjugacyCertificate),
    Refused {
        orbit: PeriodicOrbit,
        g_sum: BigRational,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum IsotopyVerdict {
    Valid,
    Violated {
        cylinder: Word,
        anchor: usize,
        lhs: BigRational,
        rhs: BigRational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpennessWitness {
    pub window: Word,
    pub member: PeriodicOrbit,
    pub member_phase: usize,
    pub non_member: PeriodicOrbit,
    pub phase: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpennessVerdict {
    OpenWithRadius(usize),
    NotOpenUpTo {
        k_max: usize,
        witnesses: Vec<OpennessWitness>,
    },
}

fn block_text(system: &ReturnSystem, block: &[EdgeId]) -> String {
    block
        .iter()
        .map(|&e| system.graph().edge(e).label.clone())
        .collect::<Vec<_>>()
        .join("|")
}

/// Validates a block table against every occurring block and block pair,
/// producing a code. Totality, nonemptiness, per-word composability, and
/// composability of consecutive images are all checked exhaustively.
pub fn build_code(
    system: ReturnSystem,
    target: EdgeShift,
    m: usize,
    table: BTreeMap<Vec<EdgeId>, Word>,
) -> Result<WordBlockCode, CodeError> {
    for t in system.shift().words_of_length(2 * m + 1) {
        let text = || block_text(&system, &t.0);
        let image = table.get(&t.0).ok_or_else(|| CodeError::MissingBlock(text()))?;
        if image.is_empty() {
            return Err(CodeError::EmptyImageWord(text()));
        }
        if !image.is_composable(target.graph()) {
            return Err(CodeError::NonComposableImage(format!(
                "image of block {} is not a path",
                text()
            )));
        }
    }
    for t in system.shift().words_of_length(2 * m + 2) {
        let first = &table[&t.0[..2 * m + 1]];
        let second = &table[&t.0[1..]];
        let last = *first.0.last().unwrap();
        let head = second.0[0];
        if target.graph().target(last) != target.graph().source(head) {
            return Err(CodeError::NonComposableImage(format!(
                "images of consecutive blocks {} and {} do not concatenate",
                block_text(&system, &t.0[..2 * m + 1]),
                block_text(&system, &t.0[1..]),
            )));
        }
    }
    Ok(WordBlockCode {
        system,
        target,
        m,
        table,
    })
}

/// The radius-0 code substituting a target word for each symbol of the
/// base shift: each return word maps to the concatenation of its symbol
/// images.
pub fn substitution_code(
    system: &ReturnSystem,
    target: &EdgeShift,
    images: &BTreeMap<EdgeId, Word>,
) -> Result<WordBlockCode, CodeError> {
    let mut table = BTreeMap::new();
    for (i, word) in system.words().iter().enumerate() {
        let mut image = Vec::new();
        for &sym in &word.0 {
            let w = images.get(&sym).ok_or_else(|| {
                CodeError::MissingBlock(format!(
                    "no image for symbol {}",
                    system.base().graph().edge(sym).label
                ))
            })?;
            image.extend_from_slice(&w.0);
        }
        table.insert(vec![EdgeId(i)], Word(image));
    }
    build_code(system.clone(), target.clone(), 0, table)
}

/// Checks a return morphism against all return cycles of period at most
/// 6, then packages it as a code with the morphism's images.
pub fn induced_code(
    system: &ReturnSystem,
    target: &EdgeShift,
    psi: &ReturnMorphism,
) -> Result<WordBlockCode, CodeError> {
    let rshift = system.shift();
    for o in rshift.periodic_orbits(6) {
        let n = o.period();
        let mut image: Vec<EdgeId> = Vec::new();
        for i in 0..n {
            let tuple: Vec<EdgeId> = (i as isize - psi.m as isize..=i as isize + psi.m as isize)
                .map(|j| o.word().0[j.rem_euclid(n as isize) as usize])
                .collect();
            let w = psi.table.get(&tuple).ok_or_else(|| {
                CodeError::NotIntertwining(format!(
                    "no image over return cycle {}",
                    o.text(rshift.graph())
                ))
            })?;
            image.extend_from_slice(&w.0);
        }
        let word = Word(image);
        if word.is_empty() || !word.is_closed_path(target.graph()) {
            return Err(CodeError::NotIntertwining(format!(
                "image of return cycle {} does not close up",
                o.text(rshift.graph())
            )));
        }
    }
    build_code(
        system.clone(),
        target.clone(),
        psi.m,
        psi.table.clone(),
    )
}

impl WordBlockCode {
    /// The identity code: every return word maps to itself.
    pub fn identity(system: ReturnSystem) -> Self {
        let target = system.base().clone();
        let table = system
            .words()
            .iter()
            .enumerate()
            .map(|(i, w)| (vec![EdgeId(i)], w.clone()))
            .collect();
        build_code(system, target, 0, table).expect("return words compose")
    }

    pub fn system(&self) -> &ReturnSystem {
        &self.system
    }

    pub fn target(&self) -> &EdgeShift {
        &self.target
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn table(&self) -> &BTreeMap<Vec<EdgeId>, Word> {
        &self.table
    }

    /// The image word of an occurring block.
    pub fn image(&self, block: &[EdgeId]) -> &Word {
        &self.table[block]
    }

    /// Image length over domain length for one block.
    pub fn ratio(&self, block: &[EdgeId]) -> BigRational {
        let domain = self.system.word(block[self.m]).len();
        BigRational::new(self.table[block].len().into(), domain.into())
    }

    /// All per-block time-change ratios.
    pub fn time_change(&self) -> TimeChange {
        let ratios = self
            .system
            .shift()
            .words_of_length(2 * self.m + 1)
            .into_iter()
            .map(|t| {
                let c = self.ratio(&t.0);
                assert!(c > BigRational::zero());
                (t.0, c)
            })
            .collect();
        TimeChange { ratios }
    }

    /// Applies the code to a periodic orbit: factor one period into
    /// return words starting at the least anchor position, map each block
    /// through its cyclic context, and concatenate.
    pub fn apply_periodic(&self, o: &PeriodicOrbit) -> Result<Application, CodeError> {
        let Some((_, redges)) = self.system.return_sequence(o) else {
            return Err(CodeError::OrbitMissesSection(format!(
                "orbit {} never enters the section",
                o.text(self.system.base().graph())
            )));
        };
        let n = redges.len();
        let mut raw: Vec<EdgeId> = Vec::new();
        let mut starts: Vec<usize> = Vec::new();
        for i in 0..n {
            let block: Vec<EdgeId> = (i as isize - self.m as isize..=i as isize + self.m as isize)
                .map(|j| redges[j.rem_euclid(n as isize) as usize])
                .collect();
            starts.push(raw.len());
            raw.extend_from_slice(&self.table[&block].0);
        }
        let image = PeriodicOrbit::from_cycle(self.target.graph(), raw.clone());
        let p2 = image.period();
        let w2 = image.word();
        let s = (0..p2)
            .find(|&s| (0..raw.len()).all(|t| raw[t] == w2.0[(t + s) % p2]))
            .expect("the raw image is a rotation of its canonical word");
        let anchor_phases = starts.iter().map(|&q| (q + s) % p2).collect();
        Ok(Application {
            image,
            domain_length: o.period(),
            image_length: raw.len(),
            hits: n,
            anchor_phases,
        })
    }
}

/// Bounded check that the code carries its section exactly onto
/// `c_prime`: on every orbit of period at most `p_max` meeting the
/// section, image positions lie in `c_prime` exactly at crossing images.
pub fn verify_section_condition(
    code: &WordBlockCode,
    c_prime: &CrossSection,
    p_max: usize,
) -> SectionConditionVerdict {
    for o in code.system().base().periodic_orbits(p_max) {
        let Ok(app) = code.apply_periodic(&o) else {
            continue;
        };
        let p2 = app.image.period();
        for q in 0..p2 {
            let window = app.image.window(q as isize, c_prime.radius());
            let marked = c_prime.centers().contains(&window);
            if marked != app.anchor_phases.contains(&q) {
                return SectionConditionVerdict::Violated {
                    orbit: o,
                    image: app.image,
                    position: q,
                };
            }
        }
    }
    SectionConditionVerdict::HoldsUpTo(p_max)
}

/// Decides whether the code preserves every circle length, by searching
/// the block-offset graph for a cycle on which the per-symbol length
/// distortion does not cancel. No cycle: a vertex potential certifies the
/// code is length-preserving on all of X. Some cycle: the orbit it spells
/// is returned with its (nonzero, integral) total distortion.
pub fn conjugacy_certificate(code: &WordBlockCode) -> Result<ConjugacyVerdict, CodeError> {
    let x = code.system().base();
    if !x.is_irreducible() {
        return Err(CodeError::NotIrreducible(
            "the certificate search requires an irreducible base shift".into(),
        ));
    }
    let m = code.m();
    let rg = code.system().graph();
    let blocks = code.system().shift().words_of_length(2 * m + 1);

    // One vertex per (block, offset into its center return word); edges
    // advance the offset and carry weight ratio - 1, so cycle sums are
    // exactly image length minus domain length.
    let mut g = DirectedGraph::new();
    let mut vids: Vec<Vec<VertexId>> = Vec::new();
    for b in &blocks {
        let w0 = code.system().word(b.0[m]);
        let text = block_text(code.system(), &b.0);
        vids.push(
            (0..w0.len())
                .map(|j| g.add_vertex(format!("{text}@{j}")))
                .collect(),
        );
    }
    let mut weights: Vec<BigRational> = Vec::new();
    let mut symbols: Vec<EdgeId> = Vec::new();
    let one = BigRational::from_integer(1.into());
    for (bi, b) in blocks.iter().enumerate() {
        let w0 = code.system().word(b.0[m]);
        let text = block_text(code.system(), &b.0);
        let weight = code.ratio(&b.0) - &one;
        for j in 0..w0.len() - 1 {
            g.add_edge(format!("{text}@{j}"), vids[bi][j], vids[bi][j + 1], format!("{text}@{j}"));
            weights.push(weight.clone());
            symbols.push(w0.0[j]);
        }
        let last = w0.len() - 1;
        for (bj, b2) in blocks.iter().enumerate() {
            if b.0[1..] == b2.0[..2 * m]
                && rg.target(*b.0.last().unwrap()) == rg.source(b2.0[2 * m])
            {
                let label = format!("{text}@{last}>{}", block_text(code.system(), &b2.0));
                g.add_edge(label.clone(), vids[bi][last], vids[bj][0], label);
                weights.push(weight.clone());
                symbols.push(w0.0[last]);
            }
        }
    }
    assert!(
        g.is_strongly_connected(),
        "block-offset graph of an irreducible shift is strongly connected"
    );

    match livsic::find_unbalanced_cycle(&g, &weights) {
        Some((cycle, _)) => {
            let word: Vec<EdgeId> = cycle.iter().map(|&e| symbols[e.0]).collect();
            let orbit = PeriodicOrbit::from_cycle(x.graph(), word);
            let app = code
                .apply_periodic(&orbit)
                .expect("block-graph cycles spell section-crossing orbits");
            let g_sum = BigRational::from_integer(
                BigInt::from(app.image_length) - BigInt::from(app.domain_length),
            );
            assert!(!g_sum.is_zero(), "the witness cycle sum is nonzero");
            Ok(ConjugacyVerdict::Refused { orbit, g_sum })
        }
        None => {
            let potential =
                livsic::graph_potential(&g, &weights).expect("no unbalanced cycle exists");
            Ok(ConjugacyVerdict::Certificate(ConjugacyCertificate {
                graph: g,
                potential,
            }))
        }
    }
}

/// Exact check of the isotopy transfer identity: for every occurring
/// context, beta at the next crossing minus beta at this one must equal
/// the image length minus the return length (heights cancel on both
/// sides because domain and image crossings share their sections).
pub fn verify_isotopy_certificate(
    code: &WordBlockCode,
    beta: &WindowFunction,
) -> Result<IsotopyVerdict, CodeError> {
    let system = code.system();
    let m = code.m();
    let r = beta.radius();
    // Wide enough that both crossing windows sit inside the unfolding.
    let mp = m.max(r + 1);
    for t in system.shift().words_of_length(2 * mp + 1) {
        let words: Vec<&Word> = t.0.iter().map(|&b| system.word(b)).collect();
        let f: Vec<EdgeId> = words.iter().flat_map(|w| w.0.iter().copied()).collect();
        let a: usize = words[..mp].iter().map(|w| w.len()).sum();
        let a2 = a + words[mp].len();
        let wa = Word(f[a - r..=a + r].to_vec());
        let wb = Word(f[a2 - r..=a2 + r].to_vec());
        let ba = beta
            .value(&wa)
            .ok_or_else(|| CodeError::ResolutionMismatch(wa.text(system.base().graph())))?;
        let bb = beta
            .value(&wb)
            .ok_or_else(|| CodeError::ResolutionMismatch(wb.text(system.base().graph())))?;
        let lhs = bb - ba;
        let center = &t.0[mp - m..=mp + m];
        let rhs = BigRational::from_integer(
            BigInt::from(code.image(center).len()) - BigInt::from(words[mp].len()),
        );
        if lhs != rhs {
            return Ok(IsotopyVerdict::Violated {
                cylinder: Word(f),
                anchor: a,
                lhs,
                rhs,
            });
        }
    }
    Ok(IsotopyVerdict::Valid)
}

/// Bounded openness of the image of the section.
///
/// Members are the (image orbit, phase) pairs produced by section points
/// of period at most `p_max`. For each radius k up to `k_max`, every
/// period-bounded point of the target shift whose k-window matches a
/// member's window must itself be a member; the first counterexample —
/// smallest window, then smallest (period, word, phase) candidate — is
/// the radius-k witness.
pub fn openness_check(code: &WordBlockCode, k_max: usize, p_max: usize) -> OpennessVerdict {
    let x = code.system().base();
    let mut members_ordered: Vec<(PeriodicOrbit, usize)> = Vec::new();
    let mut members: BTreeSet<(PeriodicOrbit, usize)> = BTreeSet::new();
    for o in x.periodic_orbits(p_max) {
        let Ok(app) = code.apply_periodic(&o) else {
            continue;
        };
        for &q in &app.anchor_phases {
            if members.insert((app.image.clone(), q)) {
                members_ordered.push((app.image.clone(), q));
            }
        }
    }
    let candidates: Vec<(PeriodicOrbit, usize)> = code
        .target()
        .periodic_orbits(p_max)
        .into_iter()
        .flat_map(|o| {
            let p = o.period();
            (0..p).map(move |q| (o.clone(), q))
        })
        .collect();

    let mut witnesses = Vec::new();
    for k in 0..=k_max {
        let mut rk: BTreeMap<Word, (PeriodicOrbit, usize)> = BTreeMap::new();
        for (o, q) in &members_ordered {
            rk.entry(o.window(*q as isize, k))
                .or_insert_with(|| (o.clone(), *q));
        }
        // Smallest offending window; candidates are scanned in sorted
        // (period, word, phase) order, so the first hit per window wins.
        let mut best: Option<(Word, usize)> = None;
        for (i, (o, q)) in candidates.iter().enumerate() {
            if members.contains(&(o.clone(), *q)) {
                continue;
            }
            let w = o.window(*q as isize, k);
            if !rk.contains_key(&w) {
                continue;
            }
            if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
                best = Some((w, i));
            }
        }
        match best {
            None => return OpennessVerdict::OpenWithRadius(k),
            Some((w, i)) => {
                let (member, member_phase) = rk[&w].clone();
                let (non_member, phase) = candidates[i].clone();
                witnesses.push(OpennessWitness {
                    window: w,
                    member,
                    member_phase,
                    non_member,
                    phase,
                });
            }
        }
    }
    OpennessVerdict::NotOpenUpTo { k_max, witnesses }
}
