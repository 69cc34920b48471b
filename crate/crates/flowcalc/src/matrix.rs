//! Square matrices over arbitrary-precision integers.
//!
//! Adjacency matrices of edge shifts live here, together with the exact
//! linear algebra the invariants need: powers, traces, and fraction-free
//! determinants. No floating point is used anywhere.

use crate::graph::{DirectedGraph, VertexId};
use num::{BigInt, One, Signed, Zero};

/// A square matrix of exact integers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    /// The zero n-by-n matrix.
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            entries: vec![BigInt::zero(); n * n],
        }
    }

    /// The n-by-n identity.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of integers. Panics unless square.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().cloned().map(Into::into))
            .collect();
        Self { n, entries }
    }

    /// Adjacency matrix of a graph: entry (u, v) counts edges u to v.
    pub fn adjacency(g: &DirectedGraph) -> Self {
        let mut m = Self::zero(g.vertex_count());
        for (_, e) in g.edges() {
            m[(e.source.0, e.target.0)] += 1;
        }
        m
    }

    /// Builds the graph presented by a nonnegative matrix: one vertex per
    /// row, entry (u, v) many edges from u to v, labeled `e{u}_{v}_{k}`.
    /// Panics on negative entries.
    pub fn to_graph(&self) -> DirectedGraph {
        let mut g = DirectedGraph::new();
        let vs: Vec<VertexId> = (0..self.n).map(|i| g.add_vertex(i.to_string())).collect();
        for u in 0..self.n {
            for v in 0..self.n {
                let c = &self[(u, v)];
                assert!(!c.is_negative(), "adjacency entries must be nonnegative");
                let mut k = BigInt::zero();
                while &k < c {
                    g.add_labeled_edge(format!("e{u}_{v}_{k}"), vs[u], vs[v]);
                    k += 1;
                }
            }
        }
        g
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|x| !x.is_negative())
    }

    /// I - self.
    pub fn identity_minus(&self) -> IntMatrix {
        let mut m = Self::identity(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let d = &m[(i, j)] - &self[(i, j)];
                m[(i, j)] = d;
            }
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        let mut m = Self::zero(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..self.n {
                    let add = &self[(i, k)] * &other[(k, j)];
                    m[(i, j)] += add;
                }
            }
        }
        m
    }

    /// Exact matrix power by repeated multiplication.
    pub fn pow(&self, k: usize) -> IntMatrix {
        let mut acc = Self::identity(self.n);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| self[(i, i)].clone()).sum()
    }

    /// Exact determinant by Bareiss fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.entries.clone();
        let at = |m: &Vec<BigInt>, i: usize, j: usize| m[i * n + j].clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if at(&m, k, k).is_zero() {
                // Pivot by row swap; a fully zero column means det 0.
                match (k + 1..n).find(|&i| !at(&m, i, k).is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            m.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &at(&m, i, j) * &at(&m, k, k) - &at(&m, i, k) * &at(&m, k, j);
                    let (q, r) = num::Integer::div_rem(&num, &prev);
                    debug_assert!(r.is_zero(), "bareiss division must be exact");
                    m[i * n + j] = q;
                }
            }
            prev = at(&m, k, k);
        }
        sign * at(&m, n - 1, n - 1)
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)].clone()).collect())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.n + j]
    }
}

impl std::fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}
