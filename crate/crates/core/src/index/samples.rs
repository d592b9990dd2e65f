//! Reference coefficient fields with known topology.

use num_complex::Complex64;

use crate::CMatrix;

/// `[[z1, −z̄2], [z2, z̄1]]`, the SU(2) matrix of a unit vector in `ℂ²`.
pub fn su2(z1: Complex64, z2: Complex64) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[z1, -z2.conj(), z2, z1.conj()])
}

/// Identity map `S³ → SU(2)` in Hopf coordinates `(η, φ1, φ2)`.
pub fn su2_hopf(x: [f64; 3]) -> CMatrix {
    let [eta, p1, p2] = x;
    su2(Complex64::from_polar(eta.cos(), p1), Complex64::from_polar(eta.sin(), p2))
}

/// `T³ → S³ ≅ SU(2)` through `F = (sin φ1, sin φ2, sin φ3, m − Σ cos φi)/|F|`.
///
/// Unit degree in absolute value for `1 < m < 3`, degree zero for `m > 3`.
pub fn torus_map(m: f64, x: [f64; 3]) -> CMatrix {
    let f = [x[0].sin(), x[1].sin(), x[2].sin(), m - x[0].cos() - x[1].cos() - x[2].cos()];
    let norm = f.iter().map(|v| v * v).sum::<f64>().sqrt();
    su2(Complex64::new(f[3], f[2]) / norm, Complex64::new(f[0], f[1]) / norm)
}

/// `1 + ε·U`, a matrix twisting parameter with positive-definite Hermitian part for `ε < 1`.
pub fn twisting_matrix(eps: f64, u: &CMatrix) -> CMatrix {
    CMatrix::identity(u.nrows(), u.ncols()) + u * Complex64::new(eps, 0.0)
}
