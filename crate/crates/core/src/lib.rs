//! Random bipartite Euclidean minimum spanning trees.
//!
//! Solvers for the MST of the complete bipartite graph on red and blue
//! points, verifiers for structural properties of such trees, a Monte Carlo
//! evaluator for the series form of the limit constant, and experiment
//! drivers that measure growth rates empirically.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beta;
pub mod checks;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod io;
pub mod mst;
pub mod rng;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/solvers.md")]
    mod solvers {}
    #[doc = include_str!("../../../book/src/profiles.md")]
    mod profiles {}
    #[doc = include_str!("../../../book/src/checks.md")]
    mod checks {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/reproducibility.md")]
    mod reproducibility {}
    #[doc = include_str!("../../../book/src/acceptance.md")]
    mod acceptance {}
}
