//! Verification toolkit for the identity `f(m, c)^m = f(1, c)`, where
//!
//! ```text
//! f(m, c) = sum_{k>=0} (k m + 1)^(k-1) c^k / (m^k k!) * exp(-c (k m + 1) / m)
//! ```
//!
//! is the probability that a vertex lies outside the giant component of a
//! random `(m+1)`-uniform hypergraph with average degree parameter `c`, or
//! equivalently the extinction probability of a Galton-Watson process with
//! m-fold Poisson offspring of mean `c`.
//!
//! The identity is checked from several independent directions:
//!
//! * [`series`]: floating evaluation of `f` with certified truncation error.
//! * [`fixed_point`]: roots of the extinction equations.
//! * [`exact`]: exact rational coefficient identities, composition sums and
//!   a symbolic Lagrange inversion.
//! * [`forest`]: brute-force enumeration of the trees and forests the
//!   composition sums count.
//! * [`branching`]: Monte Carlo Galton-Watson processes.
//! * [`graph`]: random hypergraphs and union-find components.
//!
//! [`checks`] wraps each of these as a [`report::ReportRecord`], and
//! [`cli`] exposes them as the `foldpower` command.
//!
//! ```
//! use foldpower::{fixed_point, series};
//!
//! let lhs = series::eval_f(2.0, 2.0, 1e-12)?.powi(2);
//! let rhs = series::eval_f(1.0, 2.0, 1e-12)?;
//! assert!((lhs - rhs).abs() < 1e-11);
//!
//! let z = fixed_point::solve_eq1(2.0, 1e-12)?;
//! assert!((z.value - rhs).abs() < 1e-11);
//! # Ok::<(), foldpower::Error>(())
//! ```

pub mod branching;
pub mod checks;
pub mod cli;
pub mod error;
pub mod exact;
pub mod fixed_point;
pub mod forest;
pub mod graph;
pub mod report;
pub mod rng;
pub mod series;

pub use error::{Error, Result};

// The guide's chapters are compiled as doctests so the snippets stay in
// sync with the code.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/series.md")]
    pub mod series {}
    #[doc = include_str!("../../../book/src/fixed-points.md")]
    pub mod fixed_points {}
    #[doc = include_str!("../../../book/src/exact.md")]
    pub mod exact {}
    #[doc = include_str!("../../../book/src/forests.md")]
    pub mod forests {}
    #[doc = include_str!("../../../book/src/branching.md")]
    pub mod branching {}
    #[doc = include_str!("../../../book/src/hypergraphs.md")]
    pub mod hypergraphs {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
