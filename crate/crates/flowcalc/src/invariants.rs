//! Flow-equivalence invariants and the complete-invariant decision.
//!
//! The two invariants are det(I−A) and the cokernel of I−A presented by
//! invariant factors. Together they decide flow equivalence for nontrivial
//! irreducible shifts; the decision procedure refuses anything outside that
//! hypothesis instead of guessing.

use std::fmt;

use num::bigint::Sign;
use num::{BigInt, One, Signed, Zero};

use crate::matrix::IntMatrix;
use crate::shift::EdgeShift;

/// Diagonalization U·M·V = diag(d₁,…,dₙ) with unimodular U, V and
/// d₁ | d₂ | … | dₙ, all dᵢ ≥ 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

fn row_swap(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.size() {
        let t = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = t;
    }
}

fn col_swap(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.size() {
        let t = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = t;
    }
}

/// row_i -= q · row_t
fn row_sub(m: &mut IntMatrix, i: usize, t: usize, q: &BigInt) {
    for j in 0..m.size() {
        let d = &m[(t, j)] * q;
        m[(i, j)] = &m[(i, j)] - d;
    }
}

/// col_j -= q · col_t
fn col_sub(m: &mut IntMatrix, j: usize, t: usize, q: &BigInt) {
    for i in 0..m.size() {
        let d = &m[(i, t)] * q;
        m[(i, j)] = &m[(i, j)] - d;
    }
}

/// row_t += row_i
fn row_add(m: &mut IntMatrix, t: usize, i: usize) {
    for j in 0..m.size() {
        m[(t, j)] = &m[(t, j)] + &m[(i, j)];
    }
}

fn row_neg(m: &mut IntMatrix, t: usize) {
    for j in 0..m.size() {
        m[(t, j)] = -m[(t, j)].clone();
    }
}

/// Nonzero entry of minimal |value| in the submatrix from (t,t);
/// ties break to the smallest row, then column.
fn pick_pivot(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let n = s.size();
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in t..n {
        for j in t..n {
            let val = s[(i, j)].abs();
            if val.is_zero() {
                continue;
            }
            let better = match &best {
                None => true,
                Some((b, _, _)) => val < *b,
            };
            if better {
                best = Some((val, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Smith normal form of a square integer matrix with transform tracking.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let n = m.size();
    let mut s = m.clone();
    let mut u = IntMatrix::identity(n);
    let mut v = IntMatrix::identity(n);

    for t in 0..n {
        loop {
            let Some((pi, pj)) = pick_pivot(&s, t) else {
                break; // remaining submatrix is zero
            };
            row_swap(&mut s, pi, t);
            row_swap(&mut u, pi, t);
            col_swap(&mut s, pj, t);
            col_swap(&mut v, pj, t);

            // Clear column t, then row t. A nonzero remainder means the
            // pivot was not a divisor; it becomes the next, smaller pivot.
            let mut dirty = false;
            for i in t + 1..n {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = &s[(i, t)] / &s[(t, t)];
                row_sub(&mut s, i, t, &q);
                row_sub(&mut u, i, t, &q);
                if !s[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = &s[(t, j)] / &s[(t, t)];
                col_sub(&mut s, j, t, &q);
                col_sub(&mut v, j, t, &q);
                if !s[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }

            // Pivot divides its row and column; enforce divisibility of the
            // remaining block by folding an offending row into row t.
            let mut offender = None;
            'scan: for i in t + 1..n {
                for j in t + 1..n {
                    if !(&s[(i, j)] % &s[(t, t)]).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    row_add(&mut s, t, i);
                    row_add(&mut u, t, i);
                }
                None => break,
            }
        }
        if s[(t, t)].sign() == Sign::Minus {
            row_neg(&mut s, t);
            row_neg(&mut u, t);
        }
    }

    let diagonal = (0..n).map(|i| s[(i, i)].clone()).collect();
    SmithForm {
        diagonal,
        left: u,
        right: v,
    }
}

/// The cokernel of an integer matrix in canonical form: invariant factors
/// greater than one, plus the number of free summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BowenFranks {
    pub factors: Vec<BigInt>,
    pub free_rank: usize,
}

impl BowenFranks {
    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty() && self.free_rank == 0
    }
}

impl fmt::Display for BowenFranks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" (+) "))
    }
}

/// The flow-equivalence invariant pair of a nonnegative integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowInvariants {
    pub ps: BigInt,
    pub bf: BowenFranks,
}

/// det(I−A) and coker(I−A) for a nonnegative square matrix A.
pub fn flow_invariants(a: &IntMatrix) -> FlowInvariants {
    assert!(a.is_nonnegative(), "adjacency matrices are nonnegative");
    let m = a.identity_minus();
    let ps = m.determinant();
    let snf = smith_normal_form(&m);
    let factors = snf
        .diagonal
        .iter()
        .filter(|d| **d > BigInt::one())
        .cloned()
        .collect();
    let free_rank = snf.diagonal.iter().filter(|d| d.is_zero()).count();
    FlowInvariants {
        ps,
        bf: BowenFranks { factors, free_rank },
    }
}

/// True when the shift is a single finite orbit: the graph is one simple cycle.
pub fn is_trivial_sft(x: &EdgeShift) -> bool {
    let g = x.graph();
    g.vertices()
        .all(|(v, _)| g.out_degree(v) == 1 && g.in_degree(v) == 1)
        && g.is_strongly_connected()
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum FranksError {
    #[error("NotIrreducible: input {0} is not irreducible after trimming")]
    NotIrreducible(String),
    #[error("TrivialSFT: input {0} is a single finite orbit")]
    TrivialSft(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FranksDecision {
    Equivalent,
    NotEquivalent { reason: String },
}

fn hypothesis_shift(a: &IntMatrix, name: &str) -> Result<EdgeShift, FranksError> {
    assert!(a.is_nonnegative(), "adjacency matrices are nonnegative");
    let x = EdgeShift::trim_from(&a.to_graph())
        .map_err(|_| FranksError::NotIrreducible(format!("{name} (empty after trimming)")))?;
    if !x.is_irreducible() {
        return Err(FranksError::NotIrreducible(name.to_string()));
    }
    if is_trivial_sft(&x) {
        return Err(FranksError::TrivialSft(name.to_string()));
    }
    Ok(x)
}

/// Complete-invariant decision for flow equivalence of nontrivial
/// irreducible shifts: equal (det(I−A), coker(I−A)) iff flow equivalent.
/// Inputs outside the hypothesis are refused.
pub fn franks_equivalent(a: &IntMatrix, b: &IntMatrix) -> Result<FranksDecision, FranksError> {
    let xa = hypothesis_shift(a, "A")?;
    let xb = hypothesis_shift(b, "B")?;
    let ia = flow_invariants(&xa.adjacency());
    let ib = flow_invariants(&xb.adjacency());
    if ia.ps != ib.ps {
        return Ok(FranksDecision::NotEquivalent {
            reason: format!("Parry-Sullivan numbers differ: {} vs {}", ia.ps, ib.ps),
        });
    }
    if ia.bf != ib.bf {
        return Ok(FranksDecision::NotEquivalent {
            reason: format!("Bowen-Franks groups differ: {} vs {}", ia.bf, ib.bf),
        });
    }
    Ok(FranksDecision::Equivalent)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf_assert(rows: &[Vec<i64>], expect: &[i64]) {
        let m = IntMatrix::from_rows(rows);
        let snf = smith_normal_form(&m);
        let want: Vec<BigInt> = expect.iter().map(|&d| BigInt::from(d)).collect();
        assert_eq!(snf.diagonal, want);
        // U·M·V equals the diagonal and the transforms are unimodular.
        let n = m.size();
        let mut diag = IntMatrix::zero(n);
        for (i, d) in snf.diagonal.iter().enumerate() {
            diag[(i, i)] = d.clone();
        }
        assert_eq!(snf.left.mul(&m).mul(&snf.right), diag);
        assert_eq!(snf.left.determinant().abs(), BigInt::one());
        assert_eq!(snf.right.determinant().abs(), BigInt::one());
        for w in snf.diagonal.windows(2) {
            if !w[0].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "divisibility chain");
            } else {
                assert!(w[1].is_zero(), "zeros close the chain");
            }
        }
    }

    #[test]
    fn smith_form_worked_cases() {
        snf_assert(&[vec![0]], &[0]);
        snf_assert(&[vec![0, -1], vec![-1, 1]], &[1, 1]);
        snf_assert(&[vec![2, 4], vec![4, 2]], &[2, 6]);
        snf_assert(&[vec![2, 0], vec![0, 3]], &[1, 6]);
        snf_assert(&[vec![0, 0], vec![0, 0]], &[0, 0]);
    }

    #[test]
    fn invariant_table() {
        let cases: Vec<(Vec<Vec<i64>>, i64, &str)> = vec![
            (vec![vec![2]], -1, "0"),
            (vec![vec![1, 1], vec![1, 0]], -1, "0"),
            (vec![vec![3]], -2, "Z/2"),
            (vec![vec![1, 3], vec![3, 1]], -9, "Z/3 (+) Z/3"),
        ];
        for (rows, ps, bf) in cases {
            let inv = flow_invariants(&IntMatrix::from_rows(&rows));
            assert_eq!(inv.ps, BigInt::from(ps), "ps for {rows:?}");
            assert_eq!(inv.bf.to_string(), bf, "bf for {rows:?}");
        }
    }

    #[test]
    fn product_of_factors_matches_determinant() {
        for rows in [
            vec![vec![3, 1], vec![2, 2]],
            vec![vec![1, 3], vec![3, 1]],
            vec![vec![5]],
        ] {
            let inv = flow_invariants(&IntMatrix::from_rows(&rows));
            if inv.bf.free_rank == 0 {
                let prod: BigInt = inv.bf.factors.iter().cloned().product();
                assert_eq!(inv.ps.abs(), prod);
            } else {
                assert!(inv.ps.is_zero());
            }
        }
    }

    #[test]
    fn trivial_sft_detection() {
        let one_loop = EdgeShift::trim_from(&IntMatrix::from_rows(&[vec![1]]).to_graph()).unwrap();
        assert!(is_trivial_sft(&one_loop));
        let full2 = EdgeShift::trim_from(&IntMatrix::from_rows(&[vec![2]]).to_graph()).unwrap();
        assert!(!is_trivial_sft(&full2));
        // A 3-cycle is one orbit; adding a chord breaks it.
        let c3 = IntMatrix::from_rows(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]);
        assert!(is_trivial_sft(&EdgeShift::trim_from(&c3.to_graph()).unwrap()));
    }

    #[test]
    fn franks_decision_cases() {
        let two = IntMatrix::from_rows(&[vec![2]]);
        let gm = IntMatrix::from_rows(&[vec![1, 1], vec![1, 0]]);
        let three = IntMatrix::from_rows(&[vec![3]]);
        assert_eq!(
            franks_equivalent(&two, &gm).unwrap(),
            FranksDecision::Equivalent
        );
        match franks_equivalent(&two, &three).unwrap() {
            FranksDecision::NotEquivalent { reason } => {
                assert!(reason.contains("-1") && reason.contains("-2"), "{reason}");
            }
            other => panic!("expected mismatch, got {other:?}"),
        }
        // Same determinant, different torsion: refuse to call them equal.
        let a = IntMatrix::from_rows(&[vec![1, 3], vec![3, 1]]);
        let b = IntMatrix::from_rows(&[vec![10]]);
        assert_eq!(flow_invariants(&a).ps, flow_invariants(&b).ps);
        match franks_equivalent(&a, &b).unwrap() {
            FranksDecision::NotEquivalent { reason } => {
                assert!(reason.contains("Bowen-Franks"), "{reason}");
            }
            other => panic!("expected mismatch, got {other:?}"),
        }
    }

    #[test]
    fn franks_refusals() {
        let reducible = IntMatrix::from_rows(&[vec![1, 2], vec![0, 1]]);
        let two = IntMatrix::from_rows(&[vec![2]]);
        assert!(matches!(
            franks_equivalent(&reducible, &two),
            Err(FranksError::NotIrreducible(_))
        ));
        assert!(matches!(
            franks_equivalent(&two, &reducible),
            Err(FranksError::NotIrreducible(_))
        ));
        let cycle = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert!(matches!(
            franks_equivalent(&cycle, &two),
            Err(FranksError::TrivialSft(_))
        ));
    }

    #[test]
    fn franks_symmetric_and_reflexive() {
        let mats = [
            IntMatrix::from_rows(&[vec![2]]),
            IntMatrix::from_rows(&[vec![3]]),
            IntMatrix::from_rows(&[vec![1, 1], vec![1, 0]]),
        ];
        for a in &mats {
            assert_eq!(
                franks_equivalent(a, a).unwrap(),
                FranksDecision::Equivalent
            );
            for b in &mats {
                let ab = matches!(franks_equivalent(a, b).unwrap(), FranksDecision::Equivalent);
                let ba = matches!(franks_equivalent(b, a).unwrap(), FranksDecision::Equivalent);
                assert_eq!(ab, ba);
            }
        }
    }
}
