use std::fs::File;
use std::io::BufWriter;
use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use super::config::{Prepared, RunConfig};
use crate::fock::{rockland_check, FockBasis, ModelOperator, RocklandReport, Verdict};
use crate::index::{build_cocycle, freeze_at, freeze_family, odd_chern, run_index, IndexForms, IndexReport};
use crate::mesh::Mesh;
use crate::weyl::{sharp, Symplectic, WeylPoly};
use crate::{Error, Result};

const DEFAULT_MAX_DEGREE: usize = 10;

/// A finished command: its JSON report and the process exit code it implies.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub exit_code: i32,
    pub message: Option<String>,
}

impl Outcome {
    fn ok<T: Serialize>(report: &T) -> Self {
        Outcome { report: serde_json::to_value(report).expect("report serializes"), exit_code: 0, message: None }
    }
}

fn constant_model(cfg: &RunConfig, prep: &Prepared) -> Result<ModelOperator> {
    if prep.program.coefficients().any(|(_, e)| e.uses_coordinates()) {
        return Err(Error::Config("this command needs constant coefficients".into()));
    }
    let values = prep.program.evaluate([0.0; 3]);
    freeze_at(&prep.expr, &prep.decls, |name| values.get(name), cfg.order)
}

fn mesh_of(cfg: &RunConfig) -> Result<Arc<Mesh>> {
    let spec = cfg.manifold.ok_or_else(|| Error::Config("this command needs a `manifold`".into()))?;
    Mesh::new(spec.kind, spec.res)
}

fn family(cfg: &RunConfig, prep: &Prepared, mesh: &Mesh) -> Result<Vec<ModelOperator>> {
    freeze_family(&prep.expr, &prep.decls, mesh, &prep.program.fields(mesh), cfg.order)
}

#[derive(Debug, Serialize)]
struct SpectrumBlock {
    degree: usize,
    multiplicity: usize,
    eigenvalues: Vec<Complex64>,
}

#[derive(Debug, Serialize)]
struct SpectrumReport {
    config: Value,
    max_degree: usize,
    block_diagonal: bool,
    blocks: Vec<SpectrumBlock>,
}

/// Eigenvalues of the diagonal degree blocks of `π(P)` on `V^N`, sorted.
pub fn cmd_spectrum(cfg: &RunConfig) -> Result<Outcome> {
    let prep = cfg.prepare()?;
    let model = constant_model(cfg, &prep)?;
    let degree = cfg.max_degree.unwrap_or(DEFAULT_MAX_DEGREE);
    let basis = FockBasis::new(cfg.n, degree)?;
    let pi = model.pi(&basis)?;
    let blocks = (0..=degree)
        .map(|k| {
            let b = pi.block(k, k);
            let mut eigenvalues: Vec<Complex64> = b
                .clone()
                .schur()
                .eigenvalues()
                .ok_or_else(|| Error::Degenerate(format!("Schur decomposition of block {k} failed")))?
                .iter()
                .copied()
                .collect();
            eigenvalues.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
            Ok(SpectrumBlock { degree: k, multiplicity: b.nrows(), eigenvalues })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome::ok(&SpectrumReport { config: cfg.to_value(), max_degree: degree, block_diagonal: pi.is_block_diagonal(), blocks }))
}

#[derive(Debug, Serialize)]
struct RocklandRun {
    config: Value,
    nodes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<RocklandReport>,
    degenerate_nodes: Vec<usize>,
    inconclusive_nodes: Vec<usize>,
    min_sigma_pi: f64,
    min_sigma_op: f64,
}

/// Rockland check of the model operator, per node when coefficients vary.
pub fn cmd_rockland(cfg: &RunConfig) -> Result<Outcome> {
    let prep = cfg.prepare()?;
    let n_max = cfg.max_degree.unwrap_or(DEFAULT_MAX_DEGREE.max(2 * cfg.order));
    let eps = cfg.tolerances.rockland;
    let varying = prep.program.coefficients().any(|(_, e)| e.uses_coordinates());
    let reports: Vec<RocklandReport> = if varying {
        let mesh = mesh_of(cfg)?;
        let models = family(cfg, &prep, &mesh)?;
        models.par_iter().map(|m| rockland_check(m, n_max, eps)).collect::<Result<_>>()?
    } else {
        vec![rockland_check(&constant_model(cfg, &prep)?, n_max, eps)?]
    };
    let min = |v: &[f64]| v.iter().cloned().fold(f64::INFINITY, f64::min);
    let pick = |f: fn(&Verdict) -> bool| -> Vec<usize> {
        reports.iter().enumerate().filter(|(_, r)| f(&r.verdict)).map(|(i, _)| i).collect()
    };
    let degenerate_nodes = pick(|v| matches!(v, Verdict::Degenerate { .. }));
    let inconclusive_nodes = pick(|v| matches!(v, Verdict::Inconclusive { .. }));
    let run = RocklandRun {
        config: cfg.to_value(),
        nodes: reports.len(),
        min_sigma_pi: reports.iter().map(|r| min(&r.sigma_min_pi)).fold(f64::INFINITY, f64::min),
        min_sigma_op: reports.iter().map(|r| min(&r.sigma_min_op)).fold(f64::INFINITY, f64::min),
        report: (!varying).then(|| reports[0].clone()),
        degenerate_nodes,
        inconclusive_nodes,
    };
    let mut out = Outcome::ok(&run);
    if !run.degenerate_nodes.is_empty() {
        out.exit_code = 3;
        out.message = Some(Error::DegenerateNodes { nodes: run.degenerate_nodes.clone() }.to_string());
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct ComponentSummary {
    degrees: Vec<usize>,
    rank: usize,
    identity: bool,
}

#[derive(Debug, Serialize)]
struct CocycleReport {
    config: Value,
    degree: usize,
    nodes: usize,
    matrix_size: usize,
    min_sigma: f64,
    max_residual: f64,
    continuity: f64,
    components: Vec<ComponentSummary>,
    ch3_integral: Complex64,
}

fn write_csv(path: &std::path::Path, f: &crate::mesh::FormField) -> Result<()> {
    f.write_csv(BufWriter::new(File::create(path)?))
}

/// Builds `a(P)` over the mesh at the final truncation degree.
pub fn cmd_cocycle(cfg: &RunConfig) -> Result<Outcome> {
    let prep = cfg.prepare()?;
    let mesh = mesh_of(cfg)?;
    let models = family(cfg, &prep, &mesh)?;
    let degree = cfg.max_degree.or(cfg.schedule.map(|s| s.end)).unwrap_or(6);
    let field = build_cocycle(&models, &mesh, degree, &cfg.index_options().cocycle)?;
    let chern = odd_chern(&field)?;
    if let Some(p) = &cfg.outputs.ch1_csv {
        write_csv(p, &chern.ch1)?;
    }
    if let Some(p) = &cfg.outputs.ch3_csv {
        write_csv(p, &chern.ch3)?;
    }
    let report = CocycleReport {
        config: cfg.to_value(),
        degree,
        nodes: mesh.len(),
        matrix_size: field.dim(),
        min_sigma: field.min_sigma(),
        max_residual: field.max_residual(),
        continuity: field.continuity(),
        components: field
            .components()
            .iter()
            .map(|c| ComponentSummary { degrees: c.degrees.clone(), rank: c.rank, identity: c.identity })
            .collect(),
        ch3_integral: chern.ch3.integrate()?,
    };
    Ok(Outcome::ok(&report))
}

/// Runs the truncation schedule and reports the index.
pub fn cmd_index(cfg: &RunConfig) -> Result<Outcome> {
    let prep = cfg.prepare()?;
    let mesh = mesh_of(cfg)?;
    let models = family(cfg, &prep, &mesh)?;
    let schedule = cfg
        .schedule
        .ok_or_else(|| Error::Config("index needs a `schedule`".into()))?
        .degrees();
    let opts = cfg.index_options();
    let mut report: IndexReport = run_index(&models, &mesh, &schedule, &IndexForms::default(), &opts)?;
    report.config = Some(cfg.to_value());
    if cfg.outputs.ch1_csv.is_some() || cfg.outputs.ch3_csv.is_some() {
        let last = *schedule.last().expect("non-empty schedule");
        let chern = odd_chern(&build_cocycle(&models, &mesh, last, &opts.cocycle)?)?;
        if let Some(p) = &cfg.outputs.ch1_csv {
            write_csv(p, &chern.ch1)?;
        }
        if let Some(p) = &cfg.outputs.ch3_csv {
            write_csv(p, &chern.ch3)?;
        }
    }
    let mut out = Outcome::ok(&report);
    if !report.stabilized {
        out.exit_code = 4;
        out.message = Some(
            Error::ScheduleNotStabilized(format!(
                "|I(N_last) − I(N_prev)| = {:.3e} exceeds {:.1e}",
                report.stabilization_delta, opts.stability_tol
            ))
            .to_string(),
        );
    } else if report.index.is_none() {
        out.exit_code = 4;
        out.message = Some(format!(
            "estimate {:.6} is {:.3e} away from the nearest integer (tolerance {})",
            report.estimate, report.integrality_residual, opts.integrality_tol
        ));
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct WeylReport {
    seed: u64,
    n: usize,
    samples: usize,
    associativity_max: f64,
    unit_max: f64,
    top_degree_max: f64,
    tolerance: f64,
    pass: bool,
}

/// Associativity, unit law and top-degree multiplicativity of `#` on random cubics.
pub fn cmd_weyl_check(n: usize, seed: u64, samples: usize) -> Result<Outcome> {
    const TOL: f64 = 1e-10;
    let omega = Symplectic::standard(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = WeylPoly::constant(n, Complex64::new(1.0, 0.0));
    let (mut assoc, mut unit, mut top): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..samples {
        let f = WeylPoly::random(n, 3, &mut rng);
        let g = WeylPoly::random(n, 3, &mut rng);
        let h = WeylPoly::random(n, 3, &mut rng);
        let fg = sharp(&f, &g, &omega)?;
        let left = sharp(&fg, &h, &omega)?;
        let right = sharp(&f, &sharp(&g, &h, &omega)?, &omega)?;
        assoc = assoc.max(left.max_abs_diff(&right));
        unit = unit.max(sharp(&one, &f, &omega)?.max_abs_diff(&f)).max(sharp(&f, &one, &omega)?.max_abs_diff(&f));
        top = top.max(fg.top_part().max_abs_diff(&f.top_part().mul(&g.top_part())));
    }
    let report = WeylReport {
        seed,
        n,
        samples,
        associativity_max: assoc,
        unit_max: unit,
        top_degree_max: top,
        tolerance: TOL,
        pass: assoc <= TOL && unit <= TOL && top == 0.0,
    };
    let mut out = Outcome::ok(&report);
    if !report.pass {
        out.exit_code = 1;
        out.message = Some("Weyl calculus identities violated".into());
    }
    Ok(out)
}
