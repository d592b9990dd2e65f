//! Parsing operator expressions, normal ordering, the op involution, the formal
//! adjoint and principal parts.

use contact_index::fock::ModelKind;
use contact_index::index::{evaluate_operator, CoeffValue};
use contact_index::symbolic::{parse_operator, Declarations, Shape};
use contact_index::{CMatrix, Complex64, Result};

fn main() -> Result<()> {
    let decls = Declarations::new(2, 2).declare("A", Shape::Matrix(2)).declare("c", Shape::Scalar);
    let src = "Zb1*Z1 + A*Z2*Zb2 - i*c*T + 3*Z1";
    let expr = parse_operator(src, &decls)?;
    println!("source:    {src}");
    println!("canonical: {expr}");

    let a = CoeffValue::Matrix(CMatrix::from_row_slice(
        2,
        2,
        &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)],
    ));
    let c = CoeffValue::Scalar(Complex64::new(0.5, 0.0));
    let model = evaluate_operator(&expr, &decls, |name| match name {
        "A" => Some(&a),
        "c" => Some(&c),
        _ => None,
    })?;
    let ModelKind::Enveloping { element, op } = model.kind() else { unreachable!() };
    println!("normal ordered:  {element}");
    println!("Heisenberg order: {}", element.heisenberg_order());
    println!("op:              {op}");
    println!("formal adjoint:  {}", element.formal_adjoint());
    println!("principal part:  {}", element.principal_part(2)?);

    for bad in ["Z1 +", "Z3*Zb1", "B*T", "Szego(Z1)"] {
        match parse_operator(bad, &decls) {
            Ok(e) => println!("{bad:>10} -> parsed as {e}"),
            Err(e) => println!("{bad:>10} -> {e}"),
        }
    }
    Ok(())
}
