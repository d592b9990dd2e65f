//! Bargmann-Fock image of the sub-Laplacian `Σ Z_j Zbar_j − i n T`: diagonal,
//! eigenvalue `k + n/2` on the degree-`k` block.

use contact_index::fock::{quantize_compressed, FockBasis};
use contact_index::symbolic::{EnvElement, Generator};
use contact_index::{Complex64, Result};

fn sub_laplacian(n: usize) -> Result<EnvElement> {
    let mut p = EnvElement::zero(n, 1);
    for j in 1..=n {
        let z = EnvElement::generator(n, 1, Generator::Z(j))?;
        let zb = EnvElement::generator(n, 1, Generator::Zbar(j))?;
        p = p.add(&z.multiply(&zb)?)?;
    }
    let t = EnvElement::generator(n, 1, Generator::T)?;
    p.add(&t.scale(Complex64::new(0.0, -(n as f64))))
}

fn main() -> Result<()> {
    let degree = 6;
    for n in 1..=3 {
        let delta = sub_laplacian(n)?;
        let basis = FockBasis::new(n, degree)?;
        let pi = quantize_compressed(&delta, &basis);
        println!("n = {n}: Δ = {delta}, block diagonal: {}", pi.is_block_diagonal());
        for k in 0..=degree {
            let block = pi.block(k, k);
            let eig = block[(0, 0)];
            let spread = (0..block.nrows()).map(|i| (block[(i, i)] - eig).norm()).fold(0.0, f64::max);
            println!("  k = {k}: eigenvalue {:.3} (expected {:.3}), multiplicity {}, spread {spread:.1e}", eig.re, k as f64 + 0.5 * n as f64, block.nrows());
        }
    }
    Ok(())
}
