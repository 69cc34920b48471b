//! Exact flow-equivalence invariants, cross sections, and flow codes for
//! shifts of finite type.
//!
//! A shift of finite type is presented here as the edge shift of a finite
//! labeled directed multigraph. Two such shifts are flow equivalent when
//! their suspension flows match up to reparametrized time, and for
//! irreducible nontrivial shifts that relation is completely decided by
//! two computable invariants of the adjacency matrix A: the sign of
//! det(I - A) and the cokernel of I - A. Everything in this crate is
//! exact — arbitrary-precision integers and rationals, no floating
//! point — and every bounded verdict either proves itself (a certificate,
//! a potential) or carries a finite witness (an orbit, a window, a
//! cycle).
//!
//! The pieces:
//!
//! - [`graph`], [`matrix`], [`word`], [`shift`]: presentations — labeled
//!   multigraphs, integer matrices, words and periodic orbits, edge
//!   shifts and their window graphs.
//! - [`invariants`]: Smith normal form, the determinant sign, the
//!   cokernel classification, and the flow-equivalence decision for
//!   irreducible nontrivial shifts.
//! - [`moves`]: symbol expansion and out-splitting, the elementary moves
//!   that generate flow equivalence and conjugacy respectively.
//! - [`section`]: discrete cross sections, their validity and return
//!   systems, disjointification, pullbacks, and the two-section
//!   first-hit construction.
//! - [`flow_code`]: word block codes, their action on periodic orbits,
//!   bounded section and openness checks, and exact length-preservation
//!   certificates.
//! - [`livsic`]: locally constant cocycles, coboundary solving over the
//!   window graph, and cycle-sum obstructions.
//! - [`block_code`], [`io`], [`fixtures`]: sliding block codes, file
//!   formats, and the small reference systems used throughout.
//!
//! ```
//! use flowcalc::{fixtures, invariants};
//!
//! let x = fixtures::full_2_shift();
//! let inv = invariants::flow_invariants(&x.adjacency());
//! assert_eq!(inv.ps.to_string(), "-1");
//! assert!(inv.bf.is_trivial());
//! ```

pub mod block_code;
pub mod fixtures;
pub mod flow_code;
pub mod graph;
pub mod guide;
pub mod invariants;
pub mod io;
pub mod livsic;
pub mod matrix;
pub mod moves;
pub mod section;
pub mod shift;
pub mod word;

pub use block_code::SlidingBlockCode;
pub use flow_code::WordBlockCode;
pub use graph::DirectedGraph;
pub use invariants::{flow_invariants, franks_equivalent, FlowInvariants};
pub use matrix::IntMatrix;
pub use section::{CrossSection, ReturnSystem};
pub use shift::EdgeShift;
pub use word::{PeriodicOrbit, Word};
