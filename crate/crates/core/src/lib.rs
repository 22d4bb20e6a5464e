//! Executable model of metastability-containing computation.
//!
//! * [`kleene`]: ternary values, resolution, superposition and the
//!   brute-force metastable closure.
//! * [`circuit`]: combinational circuits with Boolean and Kleene evaluation,
//!   naturalness and hazard checks, multiplexer generators.
//! * [`machine`]: Turing machines over `{0, 1, u, ⊥}`, budgeted simulation,
//!   natural machines driven by Kleene circuits, an obliviousness probe.
//! * [`universal`]: the tape-level CMUX selection routine and the universal
//!   machine that computes closures of arbitrary machines.
//! * [`problems`]: deciders and instance-level reductions between the
//!   bounded halting and `u`-detection problems, and tautology.
//! * [`corpus`]: bundled machines, circuits, tables and formulas.

pub mod circuit;
pub mod corpus;
pub mod error;
pub mod kleene;
pub mod machine;
pub mod problems;
pub mod universal;

pub use error::{Error, Result};
pub use kleene::{Trit, TritWord};

// The guide's code listings run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/kleene.md")]
    mod kleene {}
    #[doc = include_str!("../../../book/src/circuits.md")]
    mod circuits {}
    #[doc = include_str!("../../../book/src/machines.md")]
    mod machines {}
    #[doc = include_str!("../../../book/src/universal.md")]
    mod universal {}
    #[doc = include_str!("../../../book/src/reductions.md")]
    mod reductions {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
