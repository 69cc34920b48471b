//! The guide, compiled as doc-tests.
//!
//! Each chapter of the book (`book/src`) is attached below as a module's
//! documentation, so every code block in the book runs under
//! `cargo test` and cannot drift from the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/shifts.md")]
pub mod shifts {}

#[doc = include_str!("../../../book/src/invariants.md")]
pub mod invariants {}

#[doc = include_str!("../../../book/src/moves.md")]
pub mod moves {}

#[doc = include_str!("../../../book/src/sections.md")]
pub mod sections {}

#[doc = include_str!("../../../book/src/flow-codes.md")]
pub mod flow_codes {}

#[doc = include_str!("../../../book/src/coboundaries.md")]
pub mod coboundaries {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
