//! The polynomial Weyl calculus: sharp product, associativity and
//! multiplicativity of principal symbols.

use contact_index::weyl::{principal_weyl, sharp, Symplectic, SphereGrid, WeylPoly};
use contact_index::{Complex64, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let omega = Symplectic::standard(1);
    let x = WeylPoly::coordinate(1, 0)?;
    let xi = WeylPoly::coordinate(1, 1)?;
    let commutator = sharp(&x, &xi, &omega)?.sub(&sharp(&xi, &x, &omega)?);
    println!("x # ξ − ξ # x = {:?}", commutator.terms().collect::<Vec<_>>());

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let omega2 = Symplectic::standard(2);
    let f = WeylPoly::random(2, 3, &mut rng);
    let g = WeylPoly::random(2, 3, &mut rng);
    let h = WeylPoly::random(2, 3, &mut rng);
    let left = sharp(&sharp(&f, &g, &omega2)?, &h, &omega2)?;
    let right = sharp(&f, &sharp(&g, &h, &omega2)?, &omega2)?;
    println!("associativity defect on random cubics: {:.2e}", left.max_abs_diff(&right));

    let grid = SphereGrid::new(4, 6)?;
    let fg = principal_weyl(&sharp(&f, &g, &omega2)?, &grid);
    let (pf, pg) = (principal_weyl(&f, &grid), principal_weyl(&g, &grid));
    let defect = fg
        .iter()
        .zip(pf.iter().zip(&pg))
        .map(|(a, (b, c))| (a - b * c).norm())
        .fold(0.0, f64::max);
    println!("σ(f # g) − σ(f)σ(g) on {} sphere points: {defect:.2e}", grid.points().len());
    let one = WeylPoly::constant(2, Complex64::new(1.0, 0.0));
    println!("unit law defect: {:.2e}", sharp(&one, &f, &omega2)?.max_abs_diff(&f));
    Ok(())
}
