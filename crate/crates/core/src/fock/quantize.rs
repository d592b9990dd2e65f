use std::sync::Arc;

use num_complex::Complex64;

use super::{BlockMatrix, FockBasis};
use crate::symbolic::{EnvElement, Monomial};
use crate::{CMatrix, Error, Result, I};

/// Bargmann-Fock image `π(P)` from `domain` into `codomain`.
///
/// On `e_α = z^α/√(α!)`: `π(Z_j)e_α = i√(α_j+1) e_{α+δ_j}`,
/// `π(Zbar_j)e_α = −i√α_j e_{α−δ_j}`, `π(T) = i/2`. The codomain must reach
/// degree `N + order(P)` so nothing is truncated.
pub fn quantize(p: &EnvElement, domain: &Arc<FockBasis>, codomain: &Arc<FockBasis>) -> Result<BlockMatrix> {
    if domain.n() != p.n() || codomain.n() != p.n() {
        return Err(Error::DimensionMismatch(format!(
            "operator has n = {}, bases have n = {} and {}",
            p.n(),
            domain.n(),
            codomain.n()
        )));
    }
    let need = domain.degree() + p.heisenberg_order() as usize;
    if codomain.degree() < need {
        return Err(Error::Truncation { need, have: codomain.degree() });
    }
    Ok(quantize_unchecked(p, domain, codomain))
}

/// Square compression `e_N π(P) e_N`; components leaving `V^N` are dropped.
pub fn quantize_compressed(p: &EnvElement, basis: &Arc<FockBasis>) -> BlockMatrix {
    quantize_unchecked(p, basis, basis)
}

fn quantize_unchecked(p: &EnvElement, domain: &Arc<FockBasis>, codomain: &Arc<FockBasis>) -> BlockMatrix {
    let r = p.r();
    let mut data = CMatrix::zeros(codomain.dim() * r, domain.dim() * r);
    let max_degree = codomain.degree() as i64;
    for (mono, coeff) in p.terms() {
        let t_factor = (I * 0.5).powu(mono.t_power());
        for col in 0..domain.dim() {
            let beta = domain.multi_index(col);
            let Some((target, amp)) = apply_word(mono, beta, max_degree) else {
                continue;
            };
            let row = codomain
                .index_of(&target)
                .expect("target multi-index within codomain degree");
            let scale = amp * t_factor;
            for a in 0..r {
                for b in 0..r {
                    data[(row * r + a, col * r + b)] += coeff[(a, b)] * scale;
                }
            }
        }
    }
    BlockMatrix::from_dense(domain.clone(), codomain.clone(), r, data)
        .expect("dimensions fixed by construction")
}

/// Applies `Z^α Zbar^γ` to `e_β`: annihilators first, then creators.
fn apply_word(mono: &Monomial, beta: &[u32], max_degree: i64) -> Option<(Vec<u32>, Complex64)> {
    let target_degree = beta.iter().sum::<u32>() as i64 + mono.degree_shift();
    if target_degree > max_degree {
        return None;
    }
    let mut amp = 1.0_f64;
    let mut target = beta.to_vec();
    for (j, &g) in mono.zbar().iter().enumerate() {
        if target[j] < g {
            return None;
        }
        for t in 0..g {
            amp *= ((target[j] - t) as f64).sqrt();
        }
        target[j] -= g;
    }
    for (j, &a) in mono.z().iter().enumerate() {
        for t in 1..=a {
            amp *= ((target[j] + t) as f64).sqrt();
        }
        target[j] += a;
    }
    let zbar_total: u32 = mono.zbar().iter().sum();
    let z_total: u32 = mono.z().iter().sum();
    let phase = (-I).powu(zbar_total) * I.powu(z_total);
    Some((target, phase * amp))
}
