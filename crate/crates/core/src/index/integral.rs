use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{build_cocycle, odd_chern_components, CocycleField, CocycleOptions, OddChern};
use crate::fock::ModelOperator;
use crate::mesh::{FormField, Mesh};
use crate::{Error, Result};

/// Inhomogeneous scalar form of even degree `f₀ + f₂` (enough in dimension 3).
#[derive(Debug, Clone)]
pub struct EvenForm {
    pub deg0: FormField,
    pub deg2: Option<FormField>,
}

impl EvenForm {
    pub fn one(mesh: &Arc<Mesh>) -> Self {
        EvenForm {
            deg0: FormField::scalar_function(mesh.clone(), |_| Complex64::new(1.0, 0.0)),
            deg2: None,
        }
    }

    fn check(&self) -> Result<()> {
        if self.deg0.degree() != 0 || self.deg0.r() != 1 {
            return Err(Error::Degree("even form: degree-0 part must be a scalar 0-form".into()));
        }
        if let Some(f) = &self.deg2 {
            if f.degree() != 2 || f.r() != 1 {
                return Err(Error::Degree("even form: degree-2 part must be a scalar 2-form".into()));
            }
        }
        Ok(())
    }

    /// `max |d·|` over both parts.
    pub fn closedness(&self) -> Result<f64> {
        let mut worst = self.deg0.exterior_d()?.max_abs();
        if let Some(f) = &self.deg2 {
            worst = worst.max(f.exterior_d()?.max_abs());
        }
        Ok(worst)
    }

    pub fn wedge(&self, other: &EvenForm) -> Result<EvenForm> {
        let deg0 = self.deg0.wedge(&other.deg0)?;
        let deg2 = match (&self.deg2, &other.deg2) {
            (None, None) => None,
            (Some(a), None) => Some(a.wedge(&other.deg0)?),
            (None, Some(b)) => Some(self.deg0.wedge(b)?),
            (Some(a), Some(b)) => Some(a.wedge(&other.deg0)?.add(&self.deg0.wedge(b)?)?),
        };
        Ok(EvenForm { deg0, deg2 })
    }
}

/// Optional characteristic-form factors of the integrand.
#[derive(Debug, Clone, Default)]
pub struct IndexForms {
    pub td: Option<EvenForm>,
    pub ch_sym: Vec<EvenForm>,
    /// Closedness tolerance for the supplied forms.
    pub closed_tol: Option<f64>,
}

/// `sign·∫ (ch₁ + ch₃) ∧ Td ∧ ch_sym`, the top-degree part of the product.
pub fn index_integral(chern: &OddChern, forms: &IndexForms, sign: f64) -> Result<Complex64> {
    let mesh = chern.ch3.mesh().clone();
    let mut even = EvenForm::one(&mesh);
    for f in forms.td.iter().chain(&forms.ch_sym) {
        f.check()?;
        if let Some(tol) = forms.closed_tol {
            let res = f.closedness()?;
            if res > tol {
                return Err(Error::NotClosed(res));
            }
        }
        even = even.wedge(f)?;
    }
    let mut top = chern.ch3.wedge(&even.deg0)?;
    if let Some(e2) = &even.deg2 {
        top = top.add(&chern.ch1.wedge(e2)?)?;
    }
    Ok(top.integrate()? * sign)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IndexOptions {
    #[serde(flatten)]
    pub cocycle: CocycleOptions,
    /// Allowed distance from the nearest integer.
    pub integrality_tol: f64,
    /// Allowed change between the last two truncation degrees.
    pub stability_tol: f64,
    pub sign: f64,
}

impl Default for IndexOptions {
    fn default() -> Self {
        IndexOptions {
            cocycle: CocycleOptions::default(),
            integrality_tol: 0.05,
            stability_tol: 1e-6,
            sign: super::CALIBRATED_SIGN,
        }
    }
}

/// Wall-clock seconds per stage; the only run-dependent part of a report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageTimings {
    pub degree: usize,
    pub cocycle_s: f64,
    pub chern_s: f64,
    pub integral_s: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Timings {
    pub stages: Vec<StageTimings>,
    pub total_s: f64,
}

/// Contribution of one coupled group of Fock degrees.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComponentContribution {
    pub degrees: Vec<usize>,
    pub value: Complex64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndexEstimate {
    pub degree: usize,
    pub value: Complex64,
    pub min_sigma: f64,
    pub max_residual: f64,
    pub continuity: f64,
    pub components: Vec<ComponentContribution>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndexReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<serde_json::Value>,
    pub mesh: String,
    pub res: usize,
    pub sign: f64,
    pub estimates: Vec<IndexEstimate>,
    /// `|I(N_last) − I(N_prev)|` (0 for a single-degree schedule).
    pub stabilization_delta: f64,
    pub stabilized: bool,
    pub estimate: Complex64,
    pub nearest_integer: i64,
    pub integrality_residual: f64,
    pub index: Option<i64>,
    pub timings: Timings,
}

/// One point of the schedule: cocycle, odd character and integral on `V^degree`.
pub fn index_estimate(
    models: &[ModelOperator],
    mesh: &Arc<Mesh>,
    degree: usize,
    forms: &IndexForms,
    opts: &IndexOptions,
) -> Result<(IndexEstimate, StageTimings, CocycleField)> {
    let t0 = Instant::now();
    let field = build_cocycle(models, mesh, degree, &opts.cocycle)?;
    let t1 = Instant::now();
    let parts = odd_chern_components(&field)?;
    let t2 = Instant::now();
    let mut components = Vec::with_capacity(parts.len());
    let mut value = Complex64::new(0.0, 0.0);
    for (comp, chern) in &parts {
        let v = index_integral(chern, forms, opts.sign)?;
        value += v;
        components.push(ComponentContribution { degrees: comp.degrees.clone(), value: v });
    }
    let t3 = Instant::now();
    let est = IndexEstimate {
        degree,
        value,
        min_sigma: field.min_sigma(),
        max_residual: field.max_residual(),
        continuity: field.continuity(),
        components,
    };
    let timing = StageTimings {
        degree,
        cocycle_s: (t1 - t0).as_secs_f64(),
        chern_s: (t2 - t1).as_secs_f64(),
        integral_s: (t3 - t2).as_secs_f64(),
    };
    Ok((est, timing, field))
}

/// Runs the truncation schedule and decides stabilization and integrality.
pub fn run_index(
    models: &[ModelOperator],
    mesh: &Arc<Mesh>,
    schedule: &[usize],
    forms: &IndexForms,
    opts: &IndexOptions,
) -> Result<IndexReport> {
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("schedule must be a non-empty increasing list of degrees".into()));
    }
    let start = Instant::now();
    let mut estimates = Vec::with_capacity(schedule.len());
    let mut stages = Vec::with_capacity(schedule.len());
    for &degree in schedule {
        let (est, timing, _) = index_estimate(models, mesh, degree, forms, opts)?;
        estimates.push(est);
        stages.push(timing);
    }
    let last = estimates.last().expect("non-empty").value;
    let delta = match estimates.len() {
        1 => 0.0,
        k => (last - estimates[k - 2].value).norm(),
    };
    let stabilized = estimates.len() > 1 && delta <= opts.stability_tol;
    let nearest = last.re.round();
    let integrality_residual = (last - Complex64::new(nearest, 0.0)).norm();
    let index = (stabilized && integrality_residual <= opts.integrality_tol).then_some(nearest as i64);
    Ok(IndexReport {
        config: None,
        mesh: format!("{:?}", mesh.kind()).to_lowercase(),
        res: mesh.res(),
        sign: opts.sign,
        estimates,
        stabilization_delta: delta,
        stabilized,
        estimate: last,
        nearest_integer: nearest as i64,
        integrality_residual,
        index,
        timings: Timings { stages, total_s: start.elapsed().as_secs_f64() },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_form_products() {
        let mesh = Mesh::torus3(8).unwrap();
        let two = EvenForm {
            deg0: FormField::scalar_function(mesh.clone(), |_| Complex64::new(2.0, 0.0)),
            deg2: Some(FormField::scalar_form(mesh.clone(), 2, |_| vec![Complex64::new(1.0, 0.0); 3]).unwrap()),
        };
        let sq = two.wedge(&two).unwrap();
        assert_eq!(sq.deg0.value(0, 0), Complex64::new(4.0, 0.0));
        assert_eq!(sq.deg2.as_ref().unwrap().value(0, 1), Complex64::new(4.0, 0.0));
        assert!(two.closedness().unwrap() < 1e-14);
    }

    #[test]
    fn non_closed_forms_rejected() {
        let mesh = Mesh::torus3(8).unwrap();
        let chern = OddChern {
            ch1: FormField::zeros(mesh.clone(), 1, 1).unwrap(),
            ch3: FormField::zeros(mesh.clone(), 3, 1).unwrap(),
        };
        let bad = EvenForm {
            deg0: FormField::scalar_function(mesh.clone(), |x| Complex64::new(x[0].sin(), 0.0)),
            deg2: None,
        };
        let forms = IndexForms { td: Some(bad), ch_sym: vec![], closed_tol: Some(1e-6) };
        assert!(matches!(index_integral(&chern, &forms, 1.0), Err(Error::NotClosed(_))));
    }

    #[test]
    fn degree_two_part_pairs_with_ch1() {
        let mesh = Mesh::torus3(8).unwrap();
        let chern = OddChern {
            ch1: FormField::scalar_form(mesh.clone(), 1, |_| vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap(),
            ch3: FormField::zeros(mesh.clone(), 3, 1).unwrap(),
        };
        let td = EvenForm {
            deg0: FormField::scalar_function(mesh.clone(), |_| Complex64::new(1.0, 0.0)),
            deg2: Some(FormField::scalar_form(mesh.clone(), 2, |_| vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap()),
        };
        let forms = IndexForms { td: Some(td), ch_sym: vec![], closed_tol: None };
        let v = index_integral(&chern, &forms, 1.0).unwrap();
        let vol = mesh.kind().exact_volume();
        assert!((v.re - vol).abs() < 1e-9);
    }

    #[test]
    fn schedule_must_increase() {
        let mesh = Mesh::torus3(8).unwrap();
        assert!(run_index(&[], &mesh, &[4, 4], &IndexForms::default(), &IndexOptions::default()).is_err());
    }
}
