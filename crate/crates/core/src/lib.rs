//! Norm bounds in Grand Lebesgue Spaces.
//!
//! A generating function `ψ(p)` ([`psi::PsiFunction`]) describes how the
//! `L^p` norms of a function may grow. The [`calculus`] module pushes such
//! functions through operations (products, convolutions, infimal
//! convolutions, maximal operators, ...) by minimizing the operation's norm
//! constant over the layer of admissible input exponents. [`fenchel`] turns
//! a `ψ` into exponential tail bounds, and [`oracle`] checks every bound
//! against brute-force computations on grids.

// `!(x >= y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod cli;
pub mod error;
pub mod extended;
pub mod fenchel;
pub mod optimize;
pub mod oracle;
pub mod psi;
pub mod report;

pub use error::{Error, Result};
pub use extended::Extended;
