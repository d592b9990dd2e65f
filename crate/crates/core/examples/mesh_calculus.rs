//! Exterior calculus on the torus and sphere meshes: volume quadrature, d∘d,
//! Stokes convergence and winding numbers.

use contact_index::mesh::{FormField, Mesh};
use contact_index::{Complex64, Result};

fn stokes_residual(res: usize) -> Result<f64> {
    // ω = sin²η·g(φ) dφ1∧dφ2, so ∫dω is the boundary term 4π²
    let mesh = Mesh::sphere3(res)?;
    let omega = FormField::scalar_form(mesh, 2, |x| {
        let f = x[0].sin().powi(2) * (1.0 + 0.5 * x[1].cos() * x[2].sin());
        vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(f, 0.0)]
    })?;
    let exact = 4.0 * std::f64::consts::PI.powi(2);
    Ok((omega.exterior_d()?.integrate()? - exact).norm())
}

fn main() -> Result<()> {
    for mesh in [Mesh::torus3(16)?, Mesh::sphere3(16)?] {
        let vol = mesh.volume_form().integrate()?.re;
        println!("{:?}: quadrature volume {vol:.12}, exact {:.12}", mesh.kind(), mesh.kind().exact_volume());
        let f = FormField::scalar_function(mesh.clone(), |x| Complex64::new((2.0 * x[1]).sin() * x[0].cos(), x[2].cos()));
        println!("  max |d d f| = {:.1e}", f.exterior_d()?.exterior_d()?.max_abs());
    }

    let mut prev: Option<(f64, f64)> = None;
    for res in [16, 24, 32] {
        let r = stokes_residual(res)?;
        let h = std::f64::consts::FRAC_PI_2 / res as f64;
        match prev {
            Some((h0, r0)) => println!("res {res}: |∫dω − 4π²| = {r:.3e}, observed order {:.2}", (r0 / r).ln() / (h0 / h).ln()),
            None => println!("res {res}: |∫dω − 4π²| = {r:.3e}"),
        }
        prev = Some((h, r));
    }

    let torus = Mesh::torus3(24)?;
    for k in [-2, 1, 3] {
        let u = FormField::scalar_function(torus.clone(), move |x| Complex64::from_polar(1.0, k as f64 * x[2]));
        println!("winding of e^(i·{k}·phi3): {:.12}", u.loop_winding(0, 2)?);
    }
    Ok(())
}
