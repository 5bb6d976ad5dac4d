//! Strategic first-order term rewriting.
//!
//! Three views of a rewriting strategy live side by side here:
//!
//! - [`proof`]: rewriting-logic proof terms, and strategies as sets of them;
//! - [`strategy`]: strategy combinators (`id`, `fail`, `seq`, `first`, `try`,
//!   `not`, `ifTE`, `repeat`, `mu`) with explicit failure;
//! - [`ars`]: intensional strategies over traced objects and the
//!   derivation sets they generate.
//!
//! All of them rewrite first-order terms from [`term`] with the rules of
//! [`rewrite`]. [`theory`] reads the text format that bundles signatures,
//! rules and named strategies.

pub mod ars;
pub mod error;
pub mod proof;
pub mod rewrite;
pub mod strategy;
mod syntax;
pub mod term;
pub mod theory;

pub use error::{Error, Result};
pub use syntax::is_identifier;
