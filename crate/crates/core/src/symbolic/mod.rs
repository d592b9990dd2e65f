//! Graded enveloping algebra of Heisenberg model operators.
//!
//! Elements are normal ordered (`Z` block, then `Zbar` block, then powers of `T`)
//! using the bracket `[Z_j, Zbar_k] = 2i δ_jk T` with `T` central. This is the
//! normalization under which the Bargmann-Fock assignments `Z ↦ iz`,
//! `Zbar ↦ −i∂`, `T ↦ i/2` define a representation.

mod element;
mod expr;

pub use element::{EnvElement, Generator, Monomial};
pub use expr::{parse_operator, Declarations, OperatorExpr, Shape};

