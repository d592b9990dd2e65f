//! `a(P) = π(P)·π(P^op)⁻¹` for the twisted sub-Laplacian, its scalar action per
//! degree and the decay of `a − 1`.

use contact_index::fock::{block_decay_profile, build_a, default_margin, ModelOperator, DEFAULT_EPS, DEFAULT_TOL};
use contact_index::index::freeze_at;
use contact_index::index::CoeffValue;
use contact_index::symbolic::{parse_operator, Declarations, Shape};
use contact_index::{Complex64, Result};

fn main() -> Result<()> {
    let decls = Declarations::new(1, 1).declare("beta", Shape::Scalar);
    let expr = parse_operator("Z1*Zb1 - i*(1 - beta)*T", &decls)?;
    let degree = 40;
    for beta in [Complex64::new(0.3, 0.0), Complex64::new(0.5, 0.4), Complex64::new(-2.7, 0.0)] {
        let value = CoeffValue::Scalar(beta);
        let model: ModelOperator = freeze_at(&expr, &decls, |_| Some(&value), 2)?;
        let a = build_a(&model, degree, default_margin(2), DEFAULT_EPS, DEFAULT_TOL)?;
        let worst = (0..=degree)
            .map(|k| {
                let nk = Complex64::new(1.0 + 2.0 * k as f64, 0.0);
                (a.matrix.block(k, k)[(0, 0)] - (nk - beta) / (nk + beta)).norm()
            })
            .fold(0.0, f64::max);
        let decay = block_decay_profile(&a.matrix)?;
        println!("β = {beta}: residual {:.1e}, max deviation from (n+2k−β)/(n+2k+β) = {worst:.1e}", a.residual);
        for k in [1, 5, 10, 20, 40] {
            println!("  ‖a_kk − 1‖ at k = {k:>2}: {:.4e}   k·‖a_kk − 1‖ = {:.4}", decay.diagonal[k], k as f64 * decay.diagonal[k]);
        }
    }
    Ok(())
}
