//! Desk-scale closed contact 3-manifolds and matrix-valued differential forms on them.
//!
//! * `torus3(res)`: `(ℝ/2πℤ)³` with coordinates `phi1, phi2, phi3`, uniform periodic grid.
//! * `sphere3(res)`: unit `S³ ⊂ ℂ²` in Hopf coordinates
//!   `(z1, z2) = (cos η e^{iφ1}, sin η e^{iφ2})`, `η ∈ (0, π/2)` on a half-cell
//!   offset grid, `φ1, φ2` periodic. Orientation is `dη∧dφ1∧dφ2`.

mod form;

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use form::{component_sets, FormField};

pub const MIN_RES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeshKind {
    Torus3,
    Sphere3,
}

impl MeshKind {
    pub fn coordinate_names(self) -> [&'static str; 3] {
        match self {
            MeshKind::Torus3 => ["phi1", "phi2", "phi3"],
            MeshKind::Sphere3 => ["eta", "phi1", "phi2"],
        }
    }

    /// Exact Riemannian volume: `(2π)³` for the torus, `2π²` for the unit sphere.
    pub fn exact_volume(self) -> f64 {
        match self {
            MeshKind::Torus3 => (2.0 * PI).powi(3),
            MeshKind::Sphere3 => 2.0 * PI * PI,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Mesh {
    kind: MeshKind,
    res: usize,
    spacing: [f64; 3],
    origin: [f64; 3],
    periodic: [bool; 3],
    weights: Vec<f64>,
}

impl Mesh {
    pub fn torus3(res: usize) -> Result<Arc<Mesh>> {
        check_res(res)?;
        let h = 2.0 * PI / res as f64;
        let cell = h * h * h;
        Ok(Arc::new(Mesh {
            kind: MeshKind::Torus3,
            res,
            spacing: [h; 3],
            origin: [0.0; 3],
            periodic: [true; 3],
            weights: vec![cell; res * res * res],
        }))
    }

    pub fn sphere3(res: usize) -> Result<Arc<Mesh>> {
        check_res(res)?;
        let h_eta = 0.5 * PI / res as f64;
        let h_phi = 2.0 * PI / res as f64;
        // exact cell integrals of sin η cos η: (sin²b − sin²a)/2, telescoping to 1/2
        let eta_weights: Vec<f64> = (0..res)
            .map(|i| {
                let a = i as f64 * h_eta;
                let b = (i + 1) as f64 * h_eta;
                0.5 * (b.sin().powi(2) - a.sin().powi(2))
            })
            .collect();
        let mut weights = Vec::with_capacity(res * res * res);
        for w in &eta_weights {
            for _ in 0..res * res {
                weights.push(w * h_phi * h_phi);
            }
        }
        Ok(Arc::new(Mesh {
            kind: MeshKind::Sphere3,
            res,
            spacing: [h_eta, h_phi, h_phi],
            origin: [0.5 * h_eta, 0.0, 0.0],
            periodic: [false, true, true],
            weights,
        }))
    }

    pub fn new(kind: MeshKind, res: usize) -> Result<Arc<Mesh>> {
        match kind {
            MeshKind::Torus3 => Self::torus3(res),
            MeshKind::Sphere3 => Self::sphere3(res),
        }
    }

    pub fn kind(&self) -> MeshKind {
        self.kind
    }

    pub fn res(&self) -> usize {
        self.res
    }

    pub fn len(&self) -> usize {
        self.res * self.res * self.res
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.spacing
    }

    pub fn periodic(&self) -> [bool; 3] {
        self.periodic
    }

    pub fn coordinate_names(&self) -> [&'static str; 3] {
        self.kind.coordinate_names()
    }

    /// Per-node quadrature weight of the volume element.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Coordinate cell measure `h₀h₁h₂` used to integrate top-degree coordinate
    /// coefficients.
    pub fn cell_measure(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn node(&self, idx: [usize; 3]) -> usize {
        (idx[0] * self.res + idx[1]) * self.res + idx[2]
    }

    pub fn indices(&self, node: usize) -> [usize; 3] {
        let r = self.res;
        [node / (r * r), (node / r) % r, node % r]
    }

    pub fn coords(&self, node: usize) -> [f64; 3] {
        let idx = self.indices(node);
        std::array::from_fn(|a| self.origin[a] + idx[a] as f64 * self.spacing[a])
    }

    /// Neighbour along `axis` at offset `±1`; `None` past a non-periodic edge.
    pub fn neighbor(&self, node: usize, axis: usize, forward: bool) -> Option<usize> {
        let mut idx = self.indices(node);
        let r = self.res;
        if forward {
            if idx[axis] + 1 == r {
                if !self.periodic[axis] {
                    return None;
                }
                idx[axis] = 0;
            } else {
                idx[axis] += 1;
            }
        } else if idx[axis] == 0 {
            if !self.periodic[axis] {
                return None;
            }
            idx[axis] = r - 1;
        } else {
            idx[axis] -= 1;
        }
        Some(self.node(idx))
    }

    /// The Riemannian volume form as a coordinate 3-form whose integral is the
    /// quadrature volume.
    pub fn volume_form(self: &Arc<Self>) -> FormField {
        let cell = self.cell_measure();
        let data = self.weights.iter().map(|w| num_complex::Complex64::new(w / cell, 0.0)).collect();
        FormField::from_data(self.clone(), 3, 1, data).expect("volume form layout")
    }

    /// Nodes along the closed coordinate loop through `base` in direction `axis`.
    pub fn loop_nodes(&self, base: usize, axis: usize) -> Result<Vec<usize>> {
        if axis > 2 {
            return Err(Error::InvalidArgument(format!("axis {axis} out of range")));
        }
        if !self.periodic[axis] {
            return Err(Error::InvalidArgument(format!(
                "coordinate `{}` is not periodic",
                self.coordinate_names()[axis]
            )));
        }
        let mut idx = self.indices(base);
        Ok((0..self.res)
            .map(|k| {
                idx[axis] = k;
                self.node(idx)
            })
            .collect())
    }
}

fn check_res(res: usize) -> Result<()> {
    if res < MIN_RES {
        return Err(Error::InvalidArgument(format!("mesh resolution {res} is below the minimum {MIN_RES}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_construction() {
        let m = Mesh::torus3(16).unwrap();
        assert_eq!(m.len(), 4096);
        let v = MeshKind::Torus3.exact_volume();
        assert!((m.total_weight() - v).abs() / v < 1e-10);
    }

    #[test]
    fn sphere_volume_is_exact() {
        for res in [8, 16, 24, 32, 13] {
            let m = Mesh::sphere3(res).unwrap();
            let v = MeshKind::Sphere3.exact_volume();
            assert!((m.total_weight() - v).abs() / v < 1e-10, "res {res}");
        }
    }

    #[test]
    fn small_resolution_rejected() {
        assert!(Mesh::sphere3(4).is_err());
        assert!(Mesh::torus3(7).is_err());
    }

    #[test]
    fn sphere_grid_avoids_chart_edges() {
        let m = Mesh::sphere3(8).unwrap();
        for node in 0..m.len() {
            let eta = m.coords(node)[0];
            assert!(eta > 0.0 && eta < 0.5 * PI);
        }
    }

    #[test]
    fn neighbours_wrap_only_on_periodic_axes() {
        let m = Mesh::sphere3(8).unwrap();
        let top = m.node([7, 0, 0]);
        assert_eq!(m.neighbor(top, 0, true), None);
        assert_eq!(m.neighbor(top, 1, false), Some(m.node([7, 7, 0])));
        let t = Mesh::torus3(8).unwrap();
        assert_eq!(t.neighbor(t.node([7, 3, 2]), 0, true), Some(t.node([0, 3, 2])));
    }

    #[test]
    fn index_roundtrip() {
        let m = Mesh::torus3(9).unwrap();
        for node in [0, 1, 80, 500, 728] {
            assert_eq!(m.node(m.indices(node)), node);
        }
    }
}
