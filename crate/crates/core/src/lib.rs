//! Exact computations on the tree of valuations of `Q[x]` extending a
//! `p`-adic valuation of `Q`.
//!
//! Valuations are finite augmentation chains `[μ₀; φ₁, γ₁; …; φ_r, γ_r]`
//! over a monomial root, with values in `Q^n` ordered lexicographically
//! (plus `∞`). On top of exact evaluation the crate provides the tree order
//! and meets, quasi-cuts of `Q` and suprema of increasing families, and
//! finite witnesses for the topologies on the tree and on the space of
//! valuations.
//!
//! ```
//! use valtree::{Poly, ValuationChain};
//!
//! let mu = ValuationChain::parse("val { p: 2, root: (0), steps: [(x, (1/2)), (x^2 + 2, (3/2))] }").unwrap();
//! let f = Poly::parse("x^3 + 2*x").unwrap();
//! assert_eq!(mu.evaluate(&f).to_string(), "(2)");
//! ```

pub mod error;
pub mod gen;
pub mod limits;
pub mod poly;
pub mod quasicut;
pub mod suites;
pub mod text;
pub mod topology;
pub mod tree;
pub mod valuation;
pub mod value;

pub use error::{Error, ParseError, Result};
pub use limits::{IncreasingFamily, LimitValuation};
pub use poly::Poly;
pub use quasicut::QuasiCut;
pub use topology::{Certificate, Table};
pub use tree::{compare, meet, strict_between, Verdict};
pub use valuation::{Classification, Evaluable, ValuationChain};
pub use value::{GroupValue, Interval, LexValue, Rational};
