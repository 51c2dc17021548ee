//! Maximization of products of nonnegative-weighted Boolean constraints.
//!
//! The crate covers the constraint algebra ([`constraint`]), deciders with
//! certificates for the structural constraint classes ([`classes`]), the
//! three-way complexity classifier for constraint sets ([`trichotomy`]),
//! exact and certificate-driven solvers ([`solve`]), and executable
//! reductions between the product-measured problems ([`reductions`]).

pub mod check;
pub mod classes;
pub mod constraint;
pub mod error;
pub mod format;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod library;
pub mod rational;
pub mod reductions;
pub mod script;
pub mod solve;
pub mod trichotomy;

pub use constraint::{builtin, Assignment, ConstraintTable, Support};
pub use error::{Error, Result};
pub use library::Library;
pub use rational::Weight;
pub use script::{ConstructionScript, Step};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/constraints.md")]
    mod constraints {}
    #[doc = include_str!("../../../book/src/classes.md")]
    mod classes {}
    #[doc = include_str!("../../../book/src/trichotomy.md")]
    mod trichotomy {}
    #[doc = include_str!("../../../book/src/solving.md")]
    mod solving {}
    #[doc = include_str!("../../../book/src/reductions.md")]
    mod reductions {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/conventions.md")]
    mod conventions {}
}
