//! Scans the real twist `β` and locates where the twisted sub-Laplacian fails the
//! Rockland condition: the exceptional set `{±(n + 2k)}`.

use contact_index::fock::{rockland_check, Verdict};
use contact_index::index::{freeze_at, CoeffValue};
use contact_index::symbolic::{parse_operator, Declarations, Shape};
use contact_index::{Complex64, Result};

fn main() -> Result<()> {
    let decls = Declarations::new(1, 1).declare("beta", Shape::Scalar);
    let expr = parse_operator("Z1*Zb1 - i*(1 - beta)*T", &decls)?;
    let mut hits = Vec::new();
    for step in -80..=80 {
        let beta = step as f64 * 0.1;
        let v = CoeffValue::Scalar(Complex64::new(beta, 0.0));
        let model = freeze_at(&expr, &decls, |_| Some(&v), 2)?;
        let report = rockland_check(&model, 12, 1e-8)?;
        if let Verdict::Degenerate { side, witness_degree } = report.verdict {
            println!("β = {beta:+.1}: degenerate on {side:?} side, witness degree {witness_degree}");
            hits.push(beta);
        }
    }
    println!("exceptional values found: {hits:?}");
    Ok(())
}
