use serde::Serialize;

use super::{BlockMatrix, FockBasis, ModelOperator};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Pi,
    Op,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Rockland,
    Degenerate { side: Side, witness_degree: usize },
    Inconclusive { reason: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct RocklandReport {
    pub degrees: Vec<usize>,
    pub sigma_min_pi: Vec<f64>,
    pub sigma_min_op: Vec<f64>,
    pub eps: f64,
    #[serde(flatten)]
    pub verdict: Verdict,
}

impl RocklandReport {
    pub fn is_rockland(&self) -> bool {
        self.verdict == Verdict::Rockland
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self.verdict, Verdict::Degenerate { .. })
    }
}

struct Probe {
    sigma: f64,
    witness_degree: usize,
}

/// Smallest singular value and the degree block carrying most of its right
/// singular vector.
fn probe(m: &BlockMatrix) -> Probe {
    let basis = m.domain().clone();
    if m.is_block_diagonal() {
        let mut best = Probe { sigma: f64::INFINITY, witness_degree: 0 };
        for k in 0..=basis.degree() {
            let (s, _) = crate::singular_extremes(&m.block(k, k));
            if s < best.sigma {
                best = Probe { sigma: s, witness_degree: k };
            }
        }
        return best;
    }
    let svd = m.dense().clone().svd(false, true);
    let (idx, sigma) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    let v_t = svd.v_t.expect("requested right singular vectors");
    let row = v_t.row(idx);
    let r = m.r();
    let mut weights = vec![0.0; basis.degree() + 1];
    for (pos, z) in row.iter().enumerate() {
        weights[basis.degree_of(pos / r)] += z.norm_sqr();
    }
    let witness_degree = weights
        .iter()
        .enumerate()
        .fold((0, -1.0), |acc, (k, &w)| if w > acc.1 { (k, w) } else { acc })
        .0;
    Probe { sigma, witness_degree }
}

/// Checks invertibility of `π(P)` and `π(P^op)` on the truncation ladder
/// `N = order, order+2, …, n_max`.
///
/// A small singular value whose witness sits in the top `order` degrees can be a
/// truncation artifact and yields `Inconclusive`.
pub fn rockland_check(model: &ModelOperator, n_max: usize, eps: f64) -> Result<RocklandReport> {
    let order = model.order();
    if n_max < 2 * order {
        return Err(Error::InvalidArgument(format!(
            "n_max = {n_max} must be at least twice the order ({order})"
        )));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let mut ladder: Vec<usize> = (order..=n_max).step_by(2).collect();
    if ladder.last() != Some(&n_max) {
        ladder.push(n_max);
    }

    let mut report = RocklandReport {
        degrees: Vec::with_capacity(ladder.len()),
        sigma_min_pi: Vec::with_capacity(ladder.len()),
        sigma_min_op: Vec::with_capacity(ladder.len()),
        eps,
        verdict: Verdict::Rockland,
    };
    let mut degenerate: Option<Verdict> = None;
    let mut suspicious: Option<String> = None;
    for &big_n in &ladder {
        let basis = FockBasis::new(model.n(), big_n)?;
        let sides = [(Side::Pi, model.pi(&basis)?), (Side::Op, model.pi_op(&basis)?)];
        for (side, m) in &sides {
            let p = probe(m);
            match side {
                Side::Pi => report.sigma_min_pi.push(p.sigma),
                Side::Op => report.sigma_min_op.push(p.sigma),
            }
            if p.sigma < eps {
                let genuine = p.witness_degree + order <= big_n;
                if genuine && degenerate.is_none() {
                    degenerate = Some(Verdict::Degenerate { side: *side, witness_degree: p.witness_degree });
                } else if !genuine && suspicious.is_none() {
                    suspicious = Some(format!(
                        "σ_min = {:.3e} on the {:?} side at N = {big_n} is carried by truncated degree {}",
                        p.sigma, side, p.witness_degree
                    ));
                }
            }
        }
        report.degrees.push(big_n);
    }
    report.verdict = match (degenerate, suspicious) {
        (Some(v), _) => v,
        (None, Some(reason)) => Verdict::Inconclusive { reason },
        (None, None) => Verdict::Rockland,
    };
    Ok(report)
}
