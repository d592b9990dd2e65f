use std::collections::BTreeMap;

use serde::Serialize;

use super::{freeze_family, odd_chern, samples, build_cocycle, CocycleOptions, CoefficientField};
use crate::mesh::Mesh;
use crate::symbolic::{parse_operator, Declarations, Shape};
use crate::{Error, Result};

/// Orientation constant relating `∫ch₃` to the analytic index.
///
/// Obtained from [`calibrate_sign`]: the Toeplitz operator with symbol the
/// identity map `S³ → SU(2)` has index `−1`.
pub const CALIBRATED_SIGN: f64 = 1.0;

#[derive(Debug, Clone, Serialize)]
pub struct Calibration {
    pub res: usize,
    pub raw: f64,
    pub sign: f64,
}

/// Computes the sign from the Szegő-type operator with symbol `su2_hopf` on `S³`.
pub fn calibrate_sign(res: usize) -> Result<Calibration> {
    let mesh = Mesh::sphere3(res)?;
    let decls = Declarations::new(1, 2).declare("u", Shape::Matrix(2));
    let expr = parse_operator("Szego(u)", &decls)?;
    let mut fields = BTreeMap::new();
    fields.insert("u".to_string(), CoefficientField::matrix_fn(&mesh, samples::su2_hopf));
    let models = freeze_family(&expr, &decls, &mesh, &fields, 0)?;
    let field = build_cocycle(&models, &mesh, 0, &CocycleOptions::default())?;
    let raw = odd_chern(&field)?.ch3.integrate()?.re;
    if (raw.abs() - 1.0).abs() > 0.05 {
        return Err(Error::Calibration(raw));
    }
    Ok(Calibration { res, raw, sign: -raw.signum() })
}
