//! Continuous analogues of lattice-path counts.
//!
//! The crate evaluates continuous binomial coefficients `⟨x s⟩` and
//! continuous Catalan numbers `C(x, y)` through their modified-Bessel closed
//! forms, provides the continuous binomial distribution built on `⟨x s⟩`,
//! simulates the Goldstein-Kac telegraph process whose law reduces to
//! `⟨x s⟩`, and ships a registry of numerical identity checks tying all of
//! these together.
//!
//! ```
//! use contlattice::cbinom::{cbinom, BinomParams};
//!
//! // ⟨x 0⟩ = x + 2
//! let v = cbinom(BinomParams::new(1.0, 0.0).unwrap());
//! assert!((v - 3.0).abs() < 1e-15);
//! ```

// `!(x > 0.0)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Reference constants keep every digit they were published or computed with.
#![allow(clippy::excessive_precision)]

pub mod bridge;
pub mod catalan;
pub mod cbinom;
pub mod cli;
pub mod distribution;
mod error;
pub mod quadrature;
pub mod special;
pub mod telegraph;

pub use error::{Error, Result};
