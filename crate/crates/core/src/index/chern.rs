use std::f64::consts::PI;

use num_complex::Complex64;

use super::{BlockComponent, CocycleField};
use crate::mesh::FormField;
use crate::{Error, Result};

/// Odd Chern character `ch₁ + ch₃` of a cocycle, scalar forms of degree 1 and 3.
#[derive(Debug, Clone)]
pub struct OddChern {
    pub ch1: FormField,
    pub ch3: FormField,
}

/// `ch₁ = (1/2πi) tr(a⁻¹da)`, `ch₃ = (1/24π²) tr((a⁻¹da)³)` for a matrix 0-form.
pub fn odd_chern_of(a: &FormField) -> Result<OddChern> {
    if a.degree() != 0 {
        return Err(Error::Degree("odd Chern character needs a matrix-valued 0-form".into()));
    }
    let theta = a.inverse_pointwise()?.wedge(&a.exterior_d()?)?;
    let ch1 = theta.trace_pointwise().scale(Complex64::new(0.0, -1.0 / (2.0 * PI)));
    let ch3 = theta
        .wedge(&theta)?
        .wedge(&theta)?
        .trace_pointwise()
        .scale(Complex64::new(1.0 / (24.0 * PI * PI), 0.0));
    Ok(OddChern { ch1, ch3 })
}

/// Odd Chern character of each non-identity degree component of `a(P)`.
pub fn odd_chern_components(c: &CocycleField) -> Result<Vec<(BlockComponent, OddChern)>> {
    c.components()
        .iter()
        .filter(|comp| !comp.identity)
        .map(|comp| Ok((comp.clone(), odd_chern_of(&c.component_field(comp)?)?)))
        .collect()
}

/// Odd Chern character of `a(P)`, summed over its coupled degree components.
/// Components equal to the identity everywhere contribute nothing and are skipped.
pub fn odd_chern(c: &CocycleField) -> Result<OddChern> {
    let mesh = c.mesh().clone();
    let mut total = OddChern { ch1: FormField::zeros(mesh.clone(), 1, 1)?, ch3: FormField::zeros(mesh, 3, 1)? };
    for (_, part) in odd_chern_components(c)? {
        total.ch1 = total.ch1.add(&part.ch1)?;
        total.ch3 = total.ch3.add(&part.ch3)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Mesh;
    use crate::CMatrix;

    #[test]
    fn scalar_phase_has_integer_ch1_period() {
        let mesh = Mesh::torus3(16).unwrap();
        let a = FormField::scalar_function(mesh.clone(), |x| Complex64::from_polar(1.0, 3.0 * x[2]));
        let ch = odd_chern_of(&a).unwrap();
        // ∮ ch₁ along phi3 ≈ 3 up to the sin(3h)/(3h) consistency factor
        let h = mesh.spacing()[2];
        let line: Complex64 = (0..16).map(|k| ch.ch1.value(mesh.node([0, 0, k]), 2) * h).sum();
        assert!((line.re - 3.0 * (3.0 * h).sin() / (3.0 * h)).abs() < 1e-10);
        assert!(ch.ch3.max_abs() < 1e-14);
    }

    #[test]
    fn constant_cocycle_has_no_character() {
        let mesh = Mesh::sphere3(8).unwrap();
        let m = CMatrix::from_row_slice(2, 2, &[Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 1.0)]);
        let a = FormField::from_matrices(mesh.clone(), 2, &vec![m; mesh.len()]).unwrap();
        let ch = odd_chern_of(&a).unwrap();
        assert_eq!(ch.ch1.max_abs(), 0.0);
        assert_eq!(ch.ch3.max_abs(), 0.0);
    }
}
