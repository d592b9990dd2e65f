//! Toeplitz operators on the 3-sphere: the Szegő model of an SU(2)-valued
//! symbol, the sign calibration and additivity of the index.

use std::collections::BTreeMap;

use contact_index::index::{calibrate_sign, freeze_family, run_index, samples, CoefficientField, IndexForms, IndexOptions};
use contact_index::mesh::Mesh;
use contact_index::symbolic::{parse_operator, Declarations, Shape};
use contact_index::{CMatrix, Complex64, Result};

type Symbol = Box<dyn Fn([f64; 3]) -> CMatrix + Sync>;

fn block_sum(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut m = CMatrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    m.view_mut((0, 0), a.shape()).copy_from(a);
    m.view_mut(a.shape(), b.shape()).copy_from(b);
    m
}

fn main() -> Result<()> {
    let cal = calibrate_sign(24)?;
    println!("calibration: raw ∫ch₃ = {:.6}, sign = {:+}", cal.raw, cal.sign);

    let mesh = Mesh::sphere3(24)?;
    let symbols: [(&str, usize, Symbol); 3] = [
        ("u", 2, Box::new(samples::su2_hopf)),
        ("u⁻¹", 2, Box::new(|x| samples::su2_hopf(x).adjoint())),
        ("u ⊕ u⁻¹", 4, Box::new(|x| block_sum(&samples::su2_hopf(x), &samples::su2_hopf(x).adjoint()))),
    ];
    for (label, r, symbol) in symbols {
        let decls = Declarations::new(1, r).declare("a", Shape::Matrix(r));
        let expr = parse_operator("Szego(a)", &decls)?;
        let mut fields = BTreeMap::new();
        fields.insert("a".to_string(), CoefficientField::matrix_fn(&mesh, symbol));
        let models = freeze_family(&expr, &decls, &mesh, &fields, 0)?;
        let report = run_index(&models, &mesh, &[0, 2], &IndexForms::default(), &IndexOptions::default())?;
        let est: Complex64 = report.estimate;
        println!("Szego({label}): estimate {:.6}, index {:?}", est.re, report.index);
    }
    Ok(())
}
