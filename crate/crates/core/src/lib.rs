//! Topological K¹ cocycles for hypoelliptic operators in the Heisenberg calculus.
//!
//! The crate is organised bottom-up:
//!
//! * [`symbolic`] holds the graded enveloping algebra in which model operators of
//!   differential operators live, together with the operator expression language.
//! * [`fock`] quantizes model operators in the Bargmann-Fock representation on the
//!   graded basis of `V^N`, checks the Rockland condition and builds the
//!   automorphism `a(P) = π(P)·π(P^op)⁻¹`.
//! * [`weyl`] implements the polynomial Weyl-symbol calculus (sharp product,
//!   principal symbols) used as an algebraic cross-check.
//! * [`mesh`] discretizes the flat 3-torus and the round 3-sphere and provides
//!   matrix-valued differential forms with a finite-difference exterior derivative.
//! * [`index`] assembles the cocycle over a mesh, forms the odd Chern character and
//!   evaluates the index integral.
//! * [`cli`] is the JSON-config driven front end used by the `contact-index` binary.

pub mod cli;
pub mod error;
pub mod fock;
pub mod index;
pub mod mesh;
pub mod symbolic;
pub mod weyl;

pub use error::{Error, Result};

pub use num_complex::Complex64;

/// Dense complex matrix used for coefficients and operator blocks.
pub type CMatrix = nalgebra::DMatrix<Complex64>;

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest absolute entry of a matrix (0 for empty matrices).
pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Smallest and largest singular values of a square matrix.
pub(crate) fn singular_extremes(m: &CMatrix) -> (f64, f64) {
    if m.nrows() == 0 || m.ncols() == 0 {
        return (f64::INFINITY, 0.0);
    }
    let sv = m.clone().singular_values();
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = sv.iter().cloned().fold(0.0_f64, f64::max);
    (min, max)
}
