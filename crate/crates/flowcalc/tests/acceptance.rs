//! The nine acceptance gates: worked-example pipelines plus seeded property
//! suites. One test per gate, so the harness prints one pass/fail line for
//! each; the wall-clock budget is asserted inside the test.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use num::{BigInt, BigRational, One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use flowcalc::fixtures;
use flowcalc::flow_code::{
    conjugacy_certificate, openness_check, substitution_code, ConjugacyVerdict, OpennessVerdict,
    WordBlockCode,
};
use flowcalc::invariants::{
    flow_invariants, franks_equivalent, smith_normal_form, FranksDecision, FranksError,
};
use flowcalc::livsic::{self, CoboundaryError, PotentialError, WindowFunction};
use flowcalc::matrix::IntMatrix;
use flowcalc::moves;
use flowcalc::section::{self, CrossSection, ReturnSystem, SectionVerdict};
use flowcalc::shift::EdgeShift;
use flowcalc::word::Word;

fn within(budget: Duration, f: impl FnOnce()) {
    let start = Instant::now();
    f();
    let took = start.elapsed();
    assert!(took < budget, "budget {budget:?} exceeded: {took:?}");
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn gate_1_invariant_table() {
    within(Duration::from_secs(1), || {
        let cases: [(Vec<Vec<i64>>, i64, &str); 4] = [
            (vec![vec![2]], -1, "0"),
            (vec![vec![1, 1], vec![1, 0]], -1, "0"),
            (vec![vec![3]], -2, "Z/2"),
            (vec![vec![1, 3], vec![3, 1]], -9, "Z/3 (+) Z/3"),
        ];
        for (rows, ps, bf) in cases {
            let inv = flow_invariants(&IntMatrix::from_rows(&rows));
            assert_eq!(inv.ps, BigInt::from(ps), "{rows:?}");
            assert_eq!(inv.bf.to_string(), bf, "{rows:?}");
        }
    });
}

/// The expansion presented as a word block code on the full section:
/// a -> aa', b -> b.
fn expansion_word_code() -> (EdgeShift, WordBlockCode) {
    let x = fixtures::full_2_shift();
    let (y, _) = moves::symbol_expansion(&x, "a").unwrap();
    let system = ReturnSystem::build(&x, &CrossSection::full(&x)).unwrap();
    let e = |s: &EdgeShift, l: &str| s.graph().edge_by_label(l).unwrap();
    let images = BTreeMap::from([
        (e(&x, "a"), Word(vec![e(&y, "a"), e(&y, "a'")])),
        (e(&x, "b"), Word(vec![e(&y, "b")])),
    ]);
    let code = substitution_code(&system, &y, &images).unwrap();
    (x, code)
}

#[test]
fn gate_2_expansion_pipeline() {
    within(Duration::from_secs(1), || {
        let x = fixtures::full_2_shift();
        let (y, _) = moves::symbol_expansion(&x, "a").unwrap();
        let gm = fixtures::golden_mean();

        // The expansion result is the golden-mean fixture up to vertex
        // names: same adjacency, same labeled shape, same language.
        assert_eq!(y.adjacency(), gm.adjacency());
        let shape = |s: &EdgeShift| -> Vec<(String, usize, usize)> {
            let mut v: Vec<_> = s
                .graph()
                .edges()
                .map(|(_, d)| (d.label.clone(), d.source.0, d.target.0))
                .collect();
            v.sort();
            v
        };
        assert_eq!(shape(&y), shape(&gm));
        for n in 1..=6 {
            let texts = |s: &EdgeShift| -> BTreeSet<String> {
                s.words_of_length(n)
                    .iter()
                    .map(|w| w.text(s.graph()))
                    .collect()
            };
            assert_eq!(texts(&y), texts(&gm), "length {n}");
        }

        assert_eq!(
            franks_equivalent(&x.adjacency(), &y.adjacency()).unwrap(),
            FranksDecision::Equivalent
        );

        // The move stretches the a-loop, so the conjugacy check must refuse
        // and pin the length change on that orbit.
        let (base, code) = expansion_word_code();
        match conjugacy_certificate(&code).unwrap() {
            ConjugacyVerdict::Refused { orbit, g_sum } => {
                assert_eq!(orbit.text(base.graph()), "(a)");
                assert_eq!(g_sum, rat(1, 1));
            }
            ConjugacyVerdict::Certificate(_) => panic!("a length-changing code certified"),
        }
    });
}

#[test]
fn gate_3_section_pipeline() {
    within(Duration::from_secs(5), || {
        let x = fixtures::paired_run();
        let c = CrossSection::from_symbols(&x, &["a1", "b"]);
        match c.validate(&x) {
            SectionVerdict::Valid { max_return } => assert_eq!(max_return, 2),
            SectionVerdict::Invalid { witness } => {
                panic!("invalid: {}", witness.text(x.graph()))
            }
        }

        let system = ReturnSystem::build(&x, &c).unwrap();
        let words: BTreeSet<String> = system.words().iter().map(|w| w.text(x.graph())).collect();
        assert_eq!(words, BTreeSet::from(["a1,a2".to_string(), "b".to_string()]));
        assert_eq!(system.shift().graph().vertex_count(), 1);
        assert_eq!(system.shift().adjacency(), IntMatrix::from_rows(&[vec![2]]));

        let (_, code) = fixtures::paired_run_word_code();
        let a = code.target().graph().edge_by_label("a").unwrap();
        let b = code.target().graph().edge_by_label("b").unwrap();
        match openness_check(&code, 3, 12) {
            OpennessVerdict::NotOpenUpTo { k_max, witnesses } => {
                assert_eq!(k_max, 3);
                assert_eq!(witnesses.len(), 4);
                for (k, w) in witnesses.iter().enumerate() {
                    assert_eq!(w.window, Word(vec![a; 2 * k + 1]), "radius {k}");
                    assert_eq!(w.member.word(), &Word(vec![a]), "radius {k}");
                    let mut run = vec![a; 2 * k + 1];
                    run.push(b);
                    assert_eq!(w.non_member.word(), &Word(run), "radius {k}");
                    assert_eq!(w.phase, k, "radius {k}");
                }
            }
            open => panic!("expected a non-open image, got {open:?}"),
        }
    });
}

#[test]
fn gate_4_reducible_guard() {
    within(Duration::from_secs(1), || {
        let a = IntMatrix::from_rows(&[vec![1, 2], vec![0, 1]]);
        let x = EdgeShift::new(a.to_graph()).unwrap();
        assert!(!x.is_irreducible());
        match franks_equivalent(&a, &IntMatrix::from_rows(&[vec![2]])) {
            Err(FranksError::NotIrreducible(which)) => assert_eq!(which, "A"),
            other => panic!("expected a refusal, got {other:?}"),
        }
    });
}

#[test]
fn gate_5_move_invariance() {
    within(Duration::from_secs(30), || {
        let mut rng = common::rng(0x05);
        for round in 0..200 {
            let x = common::essential_shift(&mut rng, 5, 3);
            let before = flow_invariants(&x.adjacency());

            let labels: Vec<String> = x.graph().edges().map(|(_, d)| d.label.clone()).collect();
            let symbol = labels[rng.gen_range(0..labels.len())].clone();
            let (expanded, _) = moves::symbol_expansion(&x, &symbol).unwrap();
            assert_eq!(
                flow_invariants(&expanded.adjacency()),
                before,
                "round {round}: expansion moved the invariants"
            );
            assert_eq!(expanded.graph().vertex_count(), x.graph().vertex_count() + 1);
            assert_eq!(expanded.graph().edge_count(), x.graph().edge_count() + 1);

            let pick = rng.gen_range(0..x.graph().vertex_count());
            let (v, data) = x.graph().vertices().nth(pick).unwrap();
            let vertex = data.id.clone();
            let mut out: Vec<String> = x
                .graph()
                .out_edges(v)
                .iter()
                .map(|&e| x.graph().label(e).to_string())
                .collect();
            out.shuffle(&mut rng);
            let k = rng.gen_range(1..=out.len());
            let mut classes: Vec<Vec<String>> = vec![Vec::new(); k];
            for (i, label) in out.into_iter().enumerate() {
                let slot = if i < k { i } else { rng.gen_range(0..k) };
                classes[slot].push(label);
            }
            let (split, _) = moves::out_split(&x, &vertex, &classes).unwrap();
            assert_eq!(
                flow_invariants(&split.adjacency()),
                before,
                "round {round}: splitting moved the invariants"
            );
            let a = x.adjacency();
            let s = split.adjacency();
            for n in 1..=6 {
                assert_eq!(a.pow(n).trace(), s.pow(n).trace(), "round {round}, n {n}");
            }
        }
    });
}

#[test]
fn gate_6_livsic_round_trip() {
    within(Duration::from_secs(30), || {
        let mut rng = common::rng(0x06);
        for round in 0..300 {
            let x = common::irreducible_shift(&mut rng, 6, 6);
            let g = x.graph();

            // Plant a vertex potential, induce edge weights, recover it.
            let planted: Vec<BigRational> = (0..g.vertex_count())
                .map(|_| common::rational(&mut rng, 16))
                .collect();
            let weights: Vec<BigRational> = g
                .edges()
                .map(|(_, d)| planted[d.target.0].clone() - &planted[d.source.0])
                .collect();
            let h = livsic::graph_potential(g, &weights).unwrap();
            let want: Vec<BigRational> = planted.iter().map(|v| v - &planted[0]).collect();
            assert_eq!(h, want, "round {round}");

            // The same data as a radius-0 coboundary problem.
            let f = WindowFunction::new(
                0,
                g.edges()
                    .enumerate()
                    .map(|(i, (e, _))| (Word(vec![e]), weights[i].clone()))
                    .collect(),
            );
            let b = livsic::coboundary(&x, &f).unwrap();
            let expected: BTreeMap<Word, BigRational> = g
                .edges()
                .map(|(e, d)| (Word(vec![e]), planted[d.source.0].clone() - &planted[0]))
                .collect();
            assert_eq!(b.table(), &expected, "round {round}");

            // A single-edge perturbation is caught, and the witness re-sums
            // to the reported nonzero value.
            let victim = rng.gen_range(0..g.edge_count());
            let mut delta = common::rational(&mut rng, 16);
            if delta.is_zero() {
                delta = BigRational::one();
            }
            let mut perturbed = weights.clone();
            perturbed[victim] += &delta;
            let (cycle, sum) =
                livsic::find_unbalanced_cycle(g, &perturbed).expect("perturbation detected");
            assert!(Word(cycle.clone()).is_closed_path(g), "round {round}");
            let resummed: BigRational = cycle.iter().map(|e| perturbed[e.0].clone()).sum();
            assert_eq!(resummed, sum, "round {round}");
            assert!(!sum.is_zero(), "round {round}");
            assert!(matches!(
                livsic::graph_potential(g, &perturbed),
                Err(PotentialError::CycleObstruction { .. })
            ));

            let mut table = f.table().clone();
            let key = Word(vec![g.edges().nth(victim).unwrap().0]);
            *table.get_mut(&key).unwrap() += &delta;
            match livsic::coboundary(&x, &WindowFunction::new(0, table)) {
                Err(CoboundaryError::CycleObstruction { orbit, sum }) => {
                    // Re-sum the perturbed weights around the witness orbit.
                    let direct: BigRational = orbit
                        .word()
                        .0
                        .iter()
                        .map(|&e| perturbed[e.0].clone())
                        .sum();
                    assert_eq!(direct, sum, "round {round}");
                    assert!(!sum.is_zero(), "round {round}");
                }
                Err(e) => panic!("round {round}: wrong error {e}"),
                Ok(_) => panic!("round {round}: the perturbed function solved"),
            }
        }
    });
}

#[test]
fn gate_7_smith_normal_form() {
    within(Duration::from_secs(30), || {
        let mut rng = common::rng(0x07);
        for round in 0..500 {
            let n = rng.gen_range(1..=5);
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect())
                .collect();
            let m = IntMatrix::from_rows(&rows);
            let snf = smith_normal_form(&m);
            let mut diag = IntMatrix::zero(n);
            for (i, d) in snf.diagonal.iter().enumerate() {
                diag[(i, i)] = d.clone();
            }
            assert_eq!(snf.left.mul(&m).mul(&snf.right), diag, "round {round}");
            for w in snf.diagonal.windows(2) {
                if w[0].is_zero() {
                    assert!(w[1].is_zero(), "round {round}: zero before nonzero");
                } else {
                    assert!((&w[1] % &w[0]).is_zero(), "round {round}: chain broken");
                }
            }
            for d in &snf.diagonal {
                assert!(*d >= BigInt::zero(), "round {round}: negative factor");
            }
            for t in [&snf.left, &snf.right] {
                let det = t.determinant();
                assert!(
                    det == BigInt::one() || det == -BigInt::one(),
                    "round {round}: transform not unimodular"
                );
            }
        }
    });
}

#[test]
fn gate_8_section_brute_force() {
    within(Duration::from_secs(60), || {
        let mut rng = common::rng(0x08);

        // validate versus direct orbit enumeration on 100 pairs.
        let mut valid_seen = 0;
        let mut invalid_seen = 0;
        for round in 0..100 {
            let x = common::bounded_irreducible_shift(&mut rng, 4, 3, 8, 5_000);
            let c = common::symbol_section(&mut rng, &x);
            let orbits = x.periodic_orbits(8);
            let mut all_meet = true;
            let mut max_gap = 0usize;
            for o in &orbits {
                let anchors = c.anchors(o);
                if anchors.is_empty() {
                    all_meet = false;
                    continue;
                }
                let p = o.period();
                for (i, &at) in anchors.iter().enumerate() {
                    let next = if i + 1 < anchors.len() {
                        anchors[i + 1]
                    } else {
                        anchors[0] + p
                    };
                    max_gap = max_gap.max(next - at);
                }
            }
            match c.validate(&x) {
                SectionVerdict::Valid { max_return } => {
                    assert!(all_meet, "round {round}: an orbit misses a valid section");
                    assert_eq!(max_return, max_gap, "round {round}");
                    valid_seen += 1;
                }
                SectionVerdict::Invalid { witness } => {
                    assert!(!all_meet, "round {round}: invalid but every orbit meets");
                    assert!(c.anchors(&witness).is_empty(), "round {round}");
                    assert!(witness.word().is_closed_path(x.graph()), "round {round}");
                    invalid_seen += 1;
                }
            }
        }
        assert!(
            valid_seen >= 5 && invalid_seen >= 5,
            "both verdicts must occur: {valid_seen} valid, {invalid_seen} invalid"
        );

        // The two-section decomposition intertwines on the worked pair and
        // on 25 random pairs.
        let x = fixtures::golden_mean();
        let c1 = CrossSection::from_symbols(&x, &["a", "b"]);
        let c2 = CrossSection::from_symbols(&x, &["a'", "b"]).with_height(rat(1, 2));
        let case = section::ps_case1(&x, &c1, &c2).unwrap();
        section::verify_case_one(&x, &case, 6).unwrap();

        let mut checked = 0;
        let mut draws = 0;
        while checked < 25 {
            draws += 1;
            assert!(draws < 10_000, "generator starved");
            let x = common::bounded_irreducible_shift(&mut rng, 3, 2, 6, 2_000);
            let c1 = common::valid_symbol_section(&mut rng, &x, 8);
            let SectionVerdict::Valid { max_return } = c1.validate(&x) else {
                unreachable!("valid_symbol_section returns valid sections");
            };
            if max_return > 2 {
                continue;
            }
            let c2 = common::valid_symbol_section(&mut rng, &x, 8).with_height(rat(1, 2));
            let case = section::ps_case1(&x, &c1, &c2).unwrap();
            section::verify_case_one(&x, &case, 6).unwrap();
            checked += 1;
        }
    });
}

#[test]
fn gate_9_trace_formula() {
    within(Duration::from_secs(10), || {
        let mut rng = common::rng(0x09);
        for round in 0..100 {
            let x = common::bounded_essential_shift(&mut rng, 5, 3, 6, 10_000);
            let orbits = x.periodic_orbits(6);
            let a = x.adjacency();
            for n in 1..=6 {
                let fixed = EdgeShift::fixed_point_count_from_orbits(&orbits, n);
                assert_eq!(
                    BigInt::from(fixed),
                    a.pow(n).trace(),
                    "round {round}, n {n}"
                );
            }
        }
    });
}
