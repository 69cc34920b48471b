//! Seeded pseudo-random generators shared by the integration suites.
//!
//! Every suite draws from a ChaCha stream derived from one base seed and a
//! per-suite salt, so runs replay byte for byte. Set `FLOWCALC_SEED` to
//! replay a particular run.

use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flowcalc::graph::DirectedGraph;
use flowcalc::matrix::IntMatrix;
use flowcalc::section::{CrossSection, SectionVerdict};
use flowcalc::shift::EdgeShift;

pub fn rng(salt: u64) -> ChaCha8Rng {
    let base = match std::env::var("FLOWCALC_SEED") {
        Ok(s) => s
            .trim()
            .parse::<u64>()
            .expect("FLOWCALC_SEED must be an unsigned integer"),
        Err(_) => 1729,
    };
    ChaCha8Rng::seed_from_u64(base ^ salt)
}

/// A random essential shift with at most `max_vertices` vertices and
/// adjacency entries at most `max_entry`, built by trimming a random
/// nonnegative matrix.
pub fn essential_shift(rng: &mut ChaCha8Rng, max_vertices: usize, max_entry: u32) -> EdgeShift {
    loop {
        let n = rng.gen_range(1..=max_vertices);
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        if rng.gen_bool(0.5) {
                            0
                        } else {
                            i64::from(rng.gen_range(1..=max_entry))
                        }
                    })
                    .collect()
            })
            .collect();
        if let Ok(x) = EdgeShift::trim_from(&IntMatrix::from_rows(&rows).to_graph()) {
            return x;
        }
    }
}

/// Like `essential_shift`, but resamples until tr(A^n) stays under `bound`
/// so exhaustive orbit enumeration stays cheap.
pub fn bounded_essential_shift(
    rng: &mut ChaCha8Rng,
    max_vertices: usize,
    max_entry: u32,
    n: usize,
    bound: u64,
) -> EdgeShift {
    loop {
        let x = essential_shift(rng, max_vertices, max_entry);
        if x.adjacency().pow(n).trace() <= BigInt::from(bound) {
            return x;
        }
    }
}

/// A random irreducible shift: one cycle through every vertex plus up to
/// `max_extra` random edges, so strong connectivity holds by construction.
pub fn irreducible_shift(rng: &mut ChaCha8Rng, max_vertices: usize, max_extra: usize) -> EdgeShift {
    let n = rng.gen_range(1..=max_vertices);
    let mut g = DirectedGraph::new();
    let vs: Vec<_> = (0..n).map(|i| g.add_vertex(format!("v{i}"))).collect();
    let mut next = 0;
    for i in 0..n {
        g.add_labeled_edge(format!("e{next}"), vs[i], vs[(i + 1) % n]);
        next += 1;
    }
    for _ in 0..rng.gen_range(0..=max_extra) {
        let s = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        g.add_labeled_edge(format!("e{next}"), vs[s], vs[t]);
        next += 1;
    }
    EdgeShift::new(g).expect("the spanning cycle keeps every vertex essential")
}

/// Like `irreducible_shift`, with the same trace bound as above.
pub fn bounded_irreducible_shift(
    rng: &mut ChaCha8Rng,
    max_vertices: usize,
    max_extra: usize,
    n: usize,
    bound: u64,
) -> EdgeShift {
    loop {
        let x = irreducible_shift(rng, max_vertices, max_extra);
        if x.adjacency().pow(n).trace() <= BigInt::from(bound) {
            return x;
        }
    }
}

/// A random rational with denominator at most `max_den`.
pub fn rational(rng: &mut ChaCha8Rng, max_den: u32) -> BigRational {
    let den = i64::from(rng.gen_range(1..=max_den));
    let num = rng.gen_range(-2 * den..=2 * den);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A random radius-0 section: a nonempty subset of the symbols at height 0.
pub fn symbol_section(rng: &mut ChaCha8Rng, x: &EdgeShift) -> CrossSection {
    let labels: Vec<String> = x.graph().edges().map(|(_, e)| e.label.clone()).collect();
    loop {
        let chosen: Vec<&str> = labels
            .iter()
            .filter(|_| rng.gen_bool(0.5))
            .map(String::as_str)
            .collect();
        if !chosen.is_empty() {
            return CrossSection::from_symbols(x, &chosen);
        }
    }
}

/// A random valid radius-0 section, falling back to the full section when
/// the draws keep landing on invalid subsets.
pub fn valid_symbol_section(rng: &mut ChaCha8Rng, x: &EdgeShift, attempts: usize) -> CrossSection {
    for _ in 0..attempts {
        let c = symbol_section(rng, x);
        if matches!(c.validate(x), SectionVerdict::Valid { .. }) {
            return c;
        }
    }
    CrossSection::full(x)
}
