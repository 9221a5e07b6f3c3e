use std::collections::BTreeMap;
use std::fmt;

use super::{FaceSide, Mesh};
use crate::geom::{signed_measure, Vec3};

#[derive(Debug, Clone)]
pub struct MeshReport {
    pub dim: usize,
    pub n_vertices: usize,
    pub n_cells: usize,
    pub n_faces: usize,
    pub min_measure: f64,
    pub max_measure: f64,
    pub total_measure: f64,
    /// Smallest interior angle (2-D) or dihedral angle (3-D), degrees.
    pub min_angle_deg: f64,
    /// Per-cell diameter: largest vertex-to-centroid distance.
    pub diameters: Vec<f64>,
    pub boundary_counts: BTreeMap<String, usize>,
    pub n_periodic_faces: usize,
    /// Cells whose input orientation was negative and got flipped.
    pub reoriented: Vec<usize>,
    /// Cells whose stored vertex order still has non-positive signed measure.
    pub inverted: Vec<usize>,
    /// Largest relative norm of the summed outward normals of a cell.
    pub max_closure_residual: f64,
}

impl MeshReport {
    pub fn h_min(&self) -> f64 {
        self.diameters.iter().copied().fold(f64::INFINITY, f64::min)
    }
    pub fn h_max(&self) -> f64 {
        self.diameters.iter().copied().fold(0.0, f64::max)
    }
    pub fn flagged_cells(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.reoriented.iter().chain(&self.inverted).copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn angle_between(a: Vec3, b: Vec3) -> f64 {
    (a.dot(&b) / (a.norm() * b.norm())).clamp(-1.0, 1.0).acos()
}

pub fn validate_mesh(mesh: &Mesh) -> MeshReport {
    let d = mesh.dim();
    let mut min_angle = f64::INFINITY;
    let mut inverted = Vec::new();
    let mut max_closure: f64 = 0.0;
    for (ci, cell) in mesh.cells().iter().enumerate() {
        let pts: Vec<Vec3> = cell.vertex_ids(d).iter().map(|&v| mesh.vertices()[v]).collect();
        if !(signed_measure(d, &pts) > 0.0) {
            inverted.push(ci);
        }
        if d == 2 {
            for k in 0..3 {
                let a = pts[(k + 1) % 3] - pts[k];
                let b = pts[(k + 2) % 3] - pts[k];
                min_angle = min_angle.min(angle_between(a, b));
            }
        } else {
            let normals: Vec<Vec3> = mesh.cell_faces(ci).iter().map(|cf| mesh.outward_normal(*cf)).collect();
            for i in 0..normals.len() {
                for j in i + 1..normals.len() {
                    min_angle = min_angle.min(std::f64::consts::PI - angle_between(normals[i], normals[j]));
                }
            }
        }
        let cfs = mesh.cell_faces(ci);
        let sum: Vec3 = cfs.iter().map(|cf| mesh.outward_normal(*cf)).sum();
        let surface: f64 = cfs.iter().map(|cf| mesh.faces()[cf.face].area()).sum();
        max_closure = max_closure.max(sum.norm() / surface);
    }
    let mut boundary_counts = BTreeMap::new();
    for t in mesh.boundary_tags() {
        boundary_counts.insert(t.clone(), 0);
    }
    let mut n_periodic = 0;
    for f in mesh.faces() {
        if let FaceSide::Boundary(t) = f.right {
            *boundary_counts.get_mut(mesh.tag_name(t)).unwrap() += 1;
        }
        if f.periodic_shift.is_some() {
            n_periodic += 1;
        }
    }
    let measures = mesh.cells().iter().map(|c| c.measure);
    MeshReport {
        dim: d,
        n_vertices: mesh.n_vertices(),
        n_cells: mesh.n_cells(),
        n_faces: mesh.faces().len(),
        min_measure: measures.clone().fold(f64::INFINITY, f64::min),
        max_measure: measures.fold(0.0, f64::max),
        total_measure: mesh.total_measure(),
        min_angle_deg: min_angle.to_degrees(),
        diameters: mesh.cells().iter().map(|c| c.diameter).collect(),
        boundary_counts,
        n_periodic_faces: n_periodic,
        reoriented: mesh.reoriented_cells().to_vec(),
        inverted,
        max_closure_residual: max_closure,
    }
}

impl fmt::Display for MeshReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dimension        {}", self.dim)?;
        writeln!(f, "vertices         {}", self.n_vertices)?;
        writeln!(f, "cells            {}", self.n_cells)?;
        writeln!(f, "faces            {}", self.n_faces)?;
        writeln!(f, "measure min/max  {:.6e} / {:.6e}", self.min_measure, self.max_measure)?;
        writeln!(f, "total measure    {:.12e}", self.total_measure)?;
        writeln!(f, "h min/max        {:.6e} / {:.6e}", self.h_min(), self.h_max())?;
        writeln!(f, "min angle (deg)  {:.3}", self.min_angle_deg)?;
        writeln!(f, "closure residual {:.3e}", self.max_closure_residual)?;
        writeln!(f, "periodic faces   {}", self.n_periodic_faces)?;
        for (tag, n) in &self.boundary_counts {
            writeln!(f, "boundary {tag:<8} {n}")?;
        }
        let flagged = self.flagged_cells();
        if flagged.is_empty() {
            writeln!(f, "flagged cells    none")
        } else {
            writeln!(f, "flagged cells    {} (reoriented/inverted): {:?}", flagged.len(), flagged)
        }
    }
}
