//! Vertex values from cell-centre values.
//!
//! Four schemes are available. Volume and inverse-distance averaging are
//! convex but only exact for constants. Pseudo-Laplacian averaging and the
//! consistent Shepard scheme choose weights as close to one as possible
//! subject to linear exactness; the latter works with unit directions to the
//! cell centres, so its moment matrix does not depend on the mesh scale.
//!
//! Negative weights are kept as computed. When the moment matrix is
//! numerically singular the stencil falls back to inverse-distance weights
//! and records that it did.

use std::fmt;

use rayon::prelude::*;

use crate::geom::Vec3;
use crate::mesh::Mesh;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InterpScheme {
    Volume,
    InverseDistance,
    PseudoLaplacian,
    ConsistentShepard,
}

impl InterpScheme {
    pub const ALL: [InterpScheme; 4] = [
        InterpScheme::Volume,
        InterpScheme::InverseDistance,
        InterpScheme::PseudoLaplacian,
        InterpScheme::ConsistentShepard,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            InterpScheme::Volume => "volume",
            InterpScheme::InverseDistance => "inverse-distance",
            InterpScheme::PseudoLaplacian => "pseudo-laplacian",
            InterpScheme::ConsistentShepard => "consistent-shepard",
        }
    }

    pub fn is_linear_exact(&self) -> bool {
        matches!(self, InterpScheme::PseudoLaplacian | InterpScheme::ConsistentShepard)
    }
}

impl fmt::Display for InterpScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for InterpScheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        InterpScheme::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            format!("unknown interpolation '{s}' (expected volume, inverse-distance, pseudo-laplacian, consistent-shepard)")
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum InterpError {
    #[error("vertex {vertex} has no incident cells")]
    EmptyStencil { vertex: usize },
    #[error("interpolation weights of vertex {vertex} sum to zero")]
    ZeroWeightSum { vertex: usize },
    #[error("expected {expected} cell values, got {got}")]
    Length { expected: usize, got: usize },
}

/// Absolute determinant threshold for the dimensionless consistent Shepard matrix.
pub const SHEPARD_SINGULAR_TOL: f64 = 1e-12;
/// Relative threshold for the pseudo-Laplacian matrix, multiplied by `scale^(2d)`.
pub const LAPLACIAN_SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct VertexStencil {
    pub vertex: usize,
    pub cell_ids: Vec<usize>,
    /// Cell centroid minus vertex position.
    pub offsets: Vec<Vec3>,
    pub distances: Vec<f64>,
    /// Raw weights `w_j`. For consistent Shepard the applied weight is `w_j / r_j`.
    pub weights: Vec<f64>,
    pub lagrange: Vec3,
    /// Determinant of the moment matrix (zero for the simple schemes).
    pub determinant: f64,
    pub scheme: InterpScheme,
    pub fallback_applied: bool,
    /// The incident cells alone could not reproduce linear fields, so their
    /// face neighbours were added.
    pub extended: bool,
}

impl VertexStencil {
    /// Weights as applied in `V = sum(e_j U_j) / sum(e_j)`.
    pub fn effective_weights(&self) -> Vec<f64> {
        match self.scheme {
            InterpScheme::ConsistentShepard => {
                self.weights.iter().zip(&self.distances).map(|(w, r)| w / r).collect()
            }
            _ => self.weights.clone(),
        }
    }

    pub fn weight_sum(&self) -> f64 {
        self.effective_weights().iter().sum()
    }

    /// Effective weights divided by their sum.
    pub fn normalized_weights(&self) -> Vec<f64> {
        let e = self.effective_weights();
        let s: f64 = e.iter().sum();
        e.into_iter().map(|w| w / s).collect()
    }

    pub fn has_negative_weight(&self) -> bool {
        self.effective_weights().iter().any(|&w| w < 0.0)
    }

    /// Interpolated value from per-cell values indexed by global cell id.
    pub fn interpolate(&self, cell_values: &[f64]) -> Result<f64, InterpError> {
        let e = self.effective_weights();
        let s: f64 = e.iter().sum();
        if s == 0.0 || !s.is_finite() {
            return Err(InterpError::ZeroWeightSum { vertex: self.vertex });
        }
        Ok(e.iter().zip(&self.cell_ids).map(|(w, &c)| w * cell_values[c]).sum::<f64>() / s)
    }

    /// Residual of the linear-exactness conditions relative to their scale.
    pub fn consistency_residual(&self) -> f64 {
        let dirs: Vec<Vec3> = match self.scheme {
            InterpScheme::ConsistentShepard => {
                self.offsets.iter().zip(&self.distances).map(|(o, r)| *o / *r).collect()
            }
            _ => self.offsets.clone(),
        };
        let mut sum = Vec3::ZERO;
        let mut scale = 0.0;
        for (w, d) in self.weights.iter().zip(&dirs) {
            sum += *w * *d;
            scale += (w * d.norm()).abs();
        }
        sum.norm() / scale.max(f64::MIN_POSITIVE)
    }
}

/// Weights, Lagrange multipliers and determinant computed for one stencil.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSolution {
    pub weights: Vec<f64>,
    pub lagrange: Vec3,
    pub determinant: f64,
    pub fallback_applied: bool,
}

/// Solves `M x = b` for the leading `dim x dim` block by cofactor expansion.
/// Returns the determinant and the solution.
pub fn cramer_solve(dim: usize, m: &[[f64; 3]; 3], b: Vec3) -> (f64, Vec3) {
    match dim {
        2 => {
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            let x = (b[0] * m[1][1] - m[0][1] * b[1]) / det;
            let y = (m[0][0] * b[1] - b[0] * m[1][0]) / det;
            (det, Vec3::new(x, y, 0.0))
        }
        3 => {
            let det3 = |a: &[[f64; 3]; 3]| {
                a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                    - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                    + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
            };
            let det = det3(m);
            let mut x = Vec3::ZERO;
            for k in 0..3 {
                let mut mk = *m;
                for r in 0..3 {
                    mk[r][k] = b[r];
                }
                x[k] = det3(&mk) / det;
            }
            (det, x)
        }
        _ => unreachable!("dimension must be 2 or 3"),
    }
}

/// Linear exactness can force every weight to zero, e.g. a 2-D vertex with
/// two cells whose centroids are not collinear with it.
/// `reference` is the sum the weights would have without the constraints.
fn vanishing_sum(w: &[f64], reference: f64) -> bool {
    !(w.iter().sum::<f64>().abs() > 1e-10 * reference)
}

fn moment_solve(dim: usize, dirs: &[Vec3]) -> (f64, Vec3) {
    let mut m = [[0.0; 3]; 3];
    let mut rhs = Vec3::ZERO;
    for d in dirs {
        for a in 0..dim {
            for b in 0..dim {
                m[a][b] += d[a] * d[b];
            }
        }
        rhs -= *d;
    }
    cramer_solve(dim, &m, rhs)
}

/// Computes weights for a stencil given offsets (centroid minus vertex) and
/// the cell measures.
pub fn compute_weights(scheme: InterpScheme, dim: usize, offsets: &[Vec3], measures: &[f64]) -> WeightSolution {
    let distances: Vec<f64> = offsets.iter().map(|o| o.norm()).collect();
    let inverse_distance = || distances.iter().map(|r| 1.0 / r).collect::<Vec<_>>();
    let simple = |weights| WeightSolution { weights, lagrange: Vec3::ZERO, determinant: 0.0, fallback_applied: false };
    match scheme {
        InterpScheme::Volume => simple(measures.to_vec()),
        InterpScheme::InverseDistance => simple(inverse_distance()),
        InterpScheme::PseudoLaplacian => {
            let (det, lambda) = moment_solve(dim, offsets);
            let scale = distances.iter().sum::<f64>() / distances.len() as f64;
            if !(det.abs() >= LAPLACIAN_SINGULAR_TOL * scale.powi(2 * dim as i32)) {
                return WeightSolution {
                    weights: inverse_distance(),
                    lagrange: Vec3::ZERO,
                    determinant: det,
                    fallback_applied: true,
                };
            }
            let weights: Vec<f64> = offsets.iter().map(|o| 1.0 + lambda.dot(o)).collect();
            if vanishing_sum(&weights, weights.len() as f64) {
                return WeightSolution { weights: inverse_distance(), lagrange: Vec3::ZERO, determinant: det, fallback_applied: true };
            }
            WeightSolution { weights, lagrange: lambda, determinant: det, fallback_applied: false }
        }
        InterpScheme::ConsistentShepard => {
            let dirs: Vec<Vec3> = offsets.iter().zip(&distances).map(|(o, r)| *o / *r).collect();
            let (det, lambda) = moment_solve(dim, &dirs);
            if !(det.abs() >= SHEPARD_SINGULAR_TOL) {
                return WeightSolution {
                    weights: vec![1.0; offsets.len()],
                    lagrange: Vec3::ZERO,
                    determinant: det,
                    fallback_applied: true,
                };
            }
            let weights: Vec<f64> = dirs.iter().map(|e| 1.0 + lambda.dot(e)).collect();
            let effective: Vec<f64> = weights.iter().zip(&distances).map(|(w, r)| w / r).collect();
            if vanishing_sum(&effective, distances.iter().map(|r| 1.0 / r).sum()) {
                return WeightSolution { weights: vec![1.0; offsets.len()], lagrange: Vec3::ZERO, determinant: det, fallback_applied: true };
            }
            WeightSolution { weights, lagrange: lambda, determinant: det, fallback_applied: false }
        }
    }
}

fn incident_cells(mesh: &Mesh, vertex: usize) -> (Vec<usize>, Vec<Vec3>) {
    let mut cell_ids = Vec::new();
    let mut offsets = Vec::new();
    for &img in mesh.vertex_images(vertex) {
        let p = mesh.vertices()[img];
        for &c in mesh.vertex_cells(img) {
            cell_ids.push(c);
            offsets.push(mesh.cells()[c].centroid - p);
        }
    }
    (cell_ids, offsets)
}

/// Adds the face neighbours of every stencil cell, with centroids moved
/// into the stencil's frame across periodic faces.
fn add_face_neighbours(mesh: &Mesh, cell_ids: &mut Vec<usize>, offsets: &mut Vec<Vec3>) {
    let n0 = cell_ids.len();
    for k in 0..n0 {
        let c = cell_ids[k];
        // vertex position in the frame of cell c
        let p = mesh.cells()[c].centroid - offsets[k];
        for cf in mesh.cell_faces(c) {
            let face = &mesh.faces()[cf.face];
            let Some(right) = face.right_cell() else { continue };
            let (j, shift) = if cf.is_left {
                (right, face.periodic_shift.map_or(Vec3::ZERO, |s| -s))
            } else {
                (face.left, face.periodic_shift.unwrap_or(Vec3::ZERO))
            };
            let off = mesh.cells()[j].centroid + shift - p;
            let seen = cell_ids.iter().zip(offsets.iter()).any(|(&q, o)| q == j && (*o - off).norm() <= 1e-9 * off.norm());
            if !seen {
                cell_ids.push(j);
                offsets.push(off);
            }
        }
    }
}

/// Face-neighbour rings tried before giving up on linear exactness.
pub const MAX_WIDENING: usize = 3;

/// Smallest normalized weight a widened stencil may carry. Widened corner
/// stencils beyond this amplify round-off enough to destabilise runs.
pub const MIN_WIDENED_WEIGHT: f64 = -1.0;

fn min_normalized_weight(scheme: InterpScheme, weights: &[f64], offsets: &[Vec3]) -> f64 {
    let e: Vec<f64> = match scheme {
        InterpScheme::ConsistentShepard => weights.iter().zip(offsets).map(|(w, o)| w / o.norm()).collect(),
        _ => weights.to_vec(),
    };
    let sum: f64 = e.iter().sum();
    e.iter().map(|w| w / sum).fold(f64::INFINITY, f64::min)
}

/// Stencil of `vertex`: every cell containing it or one of its periodic
/// images. For the linear-exact schemes, a vertex whose incident cells
/// cannot reproduce linear fields (mesh corners, typically) takes up to
/// [`MAX_WIDENING`] rings of face neighbours, keeping the first ring whose
/// weights stay above [`MIN_WIDENED_WEIGHT`], before falling back to
/// inverse distance.
pub fn build_stencil(mesh: &Mesh, vertex: usize, scheme: InterpScheme) -> Result<VertexStencil, InterpError> {
    let (mut cell_ids, mut offsets) = incident_cells(mesh, vertex);
    if cell_ids.is_empty() {
        return Err(InterpError::EmptyStencil { vertex });
    }
    let measures = |ids: &[usize]| ids.iter().map(|&c| mesh.cells()[c].measure).collect::<Vec<f64>>();
    let mut sol = compute_weights(scheme, mesh.dim(), &offsets, &measures(&cell_ids));
    let mut extended = false;
    if sol.fallback_applied && scheme.is_linear_exact() {
        let (mut ids2, mut off2) = (cell_ids.clone(), offsets.clone());
        for _ in 0..MAX_WIDENING {
            add_face_neighbours(mesh, &mut ids2, &mut off2);
            let wider = compute_weights(scheme, mesh.dim(), &off2, &measures(&ids2));
            if !wider.fallback_applied && min_normalized_weight(scheme, &wider.weights, &off2) >= MIN_WIDENED_WEIGHT {
                (cell_ids, offsets, sol, extended) = (ids2, off2, wider, true);
                break;
            }
        }
    }
    Ok(VertexStencil {
        vertex,
        distances: offsets.iter().map(|o| o.norm()).collect(),
        cell_ids,
        offsets,
        weights: sol.weights,
        lagrange: sol.lagrange,
        determinant: sol.determinant,
        scheme,
        fallback_applied: sol.fallback_applied,
        extended,
    })
}

/// Volume or inverse-distance stencil.
pub fn simple_weights(mesh: &Mesh, vertex: usize, scheme: InterpScheme) -> Result<VertexStencil, InterpError> {
    assert!(!scheme.is_linear_exact(), "simple_weights takes volume or inverse-distance");
    build_stencil(mesh, vertex, scheme)
}

pub fn pseudo_laplacian_weights(mesh: &Mesh, vertex: usize) -> Result<VertexStencil, InterpError> {
    build_stencil(mesh, vertex, InterpScheme::PseudoLaplacian)
}

pub fn consistent_shepard_weights(mesh: &Mesh, vertex: usize) -> Result<VertexStencil, InterpError> {
    build_stencil(mesh, vertex, InterpScheme::ConsistentShepard)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterpDiagnostics {
    pub scheme: InterpScheme,
    pub n_vertices: usize,
    pub n_vertices_with_negative_weight: usize,
    /// Smallest normalized effective weight over all stencils.
    pub min_weight: f64,
    /// Smallest |determinant| (linear-exact schemes only; NaN otherwise).
    pub min_determinant: f64,
    pub n_fallbacks: usize,
    /// Stencils widened by face neighbours.
    pub n_extended: usize,
}

impl InterpDiagnostics {
    pub const CSV_HEADER: &'static str = "scheme,n_negative,min_weight,min_det,n_fallback";

    pub fn from_stencils(scheme: InterpScheme, stencils: &[VertexStencil]) -> Self {
        let mut d = InterpDiagnostics {
            scheme,
            n_vertices: stencils.len(),
            n_vertices_with_negative_weight: 0,
            min_weight: f64::INFINITY,
            min_determinant: if scheme.is_linear_exact() { f64::INFINITY } else { f64::NAN },
            n_fallbacks: 0,
            n_extended: 0,
        };
        for s in stencils {
            if s.has_negative_weight() {
                d.n_vertices_with_negative_weight += 1;
            }
            for w in s.normalized_weights() {
                d.min_weight = d.min_weight.min(w);
            }
            if scheme.is_linear_exact() {
                d.min_determinant = d.min_determinant.min(s.determinant.abs());
            }
            if s.fallback_applied {
                d.n_fallbacks += 1;
            }
            if s.extended {
                d.n_extended += 1;
            }
        }
        d
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:e},{:e},{}",
            self.scheme, self.n_vertices_with_negative_weight, self.min_weight, self.min_determinant, self.n_fallbacks
        )
    }
}

impl fmt::Display for InterpDiagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<20} vertices {:>8}  negative-weight vertices {:>6}  min weight {:>11.3e}  min |det| {:>10.3e}  fallbacks {}  widened {}",
            self.scheme.name(),
            self.n_vertices,
            self.n_vertices_with_negative_weight,
            self.min_weight,
            self.min_determinant,
            self.n_fallbacks,
            self.n_extended
        )
    }
}

/// One stencil per vertex plus aggregate diagnostics.
pub fn build_all_stencils(
    mesh: &Mesh,
    scheme: InterpScheme,
) -> Result<(Vec<VertexStencil>, InterpDiagnostics), InterpError> {
    let stencils = (0..mesh.n_vertices())
        .into_par_iter()
        .map(|v| build_stencil(mesh, v, scheme))
        .collect::<Result<Vec<_>, _>>()?;
    let diag = InterpDiagnostics::from_stencils(scheme, &stencils);
    Ok((stencils, diag))
}

/// Interpolates one scalar per cell to one scalar per vertex.
pub fn interpolate_field(stencils: &[VertexStencil], cell_values: &[f64]) -> Result<Vec<f64>, InterpError> {
    stencils.iter().map(|s| s.interpolate(cell_values)).collect()
}

/// Flattened, pre-normalized stencils for repeated interpolation of
/// multi-component fields.
#[derive(Debug, Clone)]
pub struct VertexInterpolator {
    n_cells: usize,
    row_start: Vec<usize>,
    cells: Vec<usize>,
    weights: Vec<f64>,
}

impl VertexInterpolator {
    pub fn new(stencils: &[VertexStencil], n_cells: usize) -> Result<Self, InterpError> {
        let mut row_start = Vec::with_capacity(stencils.len() + 1);
        let mut cells = Vec::new();
        let mut weights = Vec::new();
        row_start.push(0);
        for s in stencils {
            let e = s.effective_weights();
            let sum: f64 = e.iter().sum();
            if sum == 0.0 || !sum.is_finite() {
                return Err(InterpError::ZeroWeightSum { vertex: s.vertex });
            }
            cells.extend_from_slice(&s.cell_ids);
            weights.extend(e.iter().map(|w| w / sum));
            row_start.push(cells.len());
        }
        Ok(VertexInterpolator { n_cells, row_start, cells, weights })
    }

    pub fn n_vertices(&self) -> usize {
        self.row_start.len() - 1
    }

    /// `cell_values` holds `nvar` interleaved components per cell.
    pub fn interpolate_into(&self, cell_values: &[f64], nvar: usize, out: &mut [f64]) -> Result<(), InterpError> {
        if cell_values.len() != self.n_cells * nvar {
            return Err(InterpError::Length { expected: self.n_cells * nvar, got: cell_values.len() });
        }
        out.par_chunks_mut(nvar).enumerate().for_each(|(v, dst)| {
            dst.iter_mut().for_each(|x| *x = 0.0);
            for k in self.row_start[v]..self.row_start[v + 1] {
                let w = self.weights[k];
                let src = &cell_values[self.cells[k] * nvar..(self.cells[k] + 1) * nvar];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += w * s;
                }
            }
        });
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_box, BoxSpec, Diagonal};

    #[test]
    fn single_cell_stencil_returns_cell_value() {
        let m = generate_box(&BoxSpec::new(2, &[1.0, 1.0], &[1, 1])).unwrap();
        // vertex 1 = (1,0) belongs to one triangle only
        for scheme in InterpScheme::ALL {
            let s = build_stencil(&m, 1, scheme).unwrap();
            assert_eq!(s.cell_ids.len(), 1);
            let vals: Vec<f64> = (0..m.n_cells()).map(|c| 3.0 + c as f64).collect();
            assert_eq!(s.interpolate(&vals).unwrap(), vals[s.cell_ids[0]]);
            assert_eq!(s.normalized_weights(), vec![1.0]);
        }
    }

    #[test]
    fn equal_volumes_give_mean() {
        let m = generate_box(&BoxSpec::new(2, &[1.0, 1.0], &[1, 1])).unwrap();
        // vertex 0 = (0,0) is shared by both triangles
        let s = simple_weights(&m, 0, InterpScheme::Volume).unwrap();
        assert_eq!(s.cell_ids.len(), 2);
        assert_eq!(s.interpolate(&[1.0, 4.0]).unwrap(), 2.5);
    }

    #[test]
    fn symmetric_stencil_has_unit_weights() {
        let a = 0.7;
        let offs = [Vec3::new(a, 0.0, 0.0), Vec3::new(-a, 0.0, 0.0), Vec3::new(0.0, a, 0.0), Vec3::new(0.0, -a, 0.0)];
        for scheme in [InterpScheme::PseudoLaplacian, InterpScheme::ConsistentShepard] {
            let sol = compute_weights(scheme, 2, &offs, &[1.0; 4]);
            assert!(!sol.fallback_applied);
            assert_eq!(sol.lagrange, Vec3::ZERO);
            assert_eq!(sol.weights, vec![1.0; 4]);
        }
    }

    #[test]
    fn singular_moment_matrix_falls_back() {
        let offs = [Vec3::new(1.0, 1.0, 0.0), Vec3::new(2.0, 2.0, 0.0)];
        for scheme in [InterpScheme::PseudoLaplacian, InterpScheme::ConsistentShepard] {
            let sol = compute_weights(scheme, 2, &offs, &[1.0; 2]);
            assert!(sol.fallback_applied);
        }
    }

    #[test]
    fn volume_scheme_never_negative() {
        let m = generate_box(&BoxSpec::new(3, &[1.0, 1.0, 1.0], &[3, 3, 3]).with_perturbation(0.3, 5)).unwrap();
        let (_, d) = build_all_stencils(&m, InterpScheme::Volume).unwrap();
        assert_eq!(d.n_vertices_with_negative_weight, 0);
        assert!(d.min_weight > 0.0);
    }

    #[test]
    fn consistent_schemes_reproduce_linear_field_on_box() {
        let mut m = generate_box(
            &BoxSpec::new(2, &[1.0, 1.0], &[6, 6]).with_split(Diagonal::Alternating).with_perturbation(0.2, 1),
        )
        .unwrap();
        m.make_periodic("xmin", "xmax", Vec3::new(1.0, 0.0, 0.0), 1e-9).unwrap();
        let f = |p: Vec3| 2.0 + 3.0 * p.x() - p.y();
        for scheme in [InterpScheme::PseudoLaplacian, InterpScheme::ConsistentShepard] {
            let (st, _) = build_all_stencils(&m, scheme).unwrap();
            for s in st.iter().filter(|s| !s.fallback_applied) {
                let p = m.vertices()[s.vertex];
                // periodic images see the field shifted, so evaluate on offsets directly
                let vals: Vec<f64> = (0..m.n_cells()).map(|c| f(m.cells()[c].centroid)).collect();
                let e = s.effective_weights();
                let num: f64 = e.iter().zip(&s.offsets).map(|(w, o)| w * f(p + *o)).sum();
                let v = num / e.iter().sum::<f64>();
                assert!((v - f(p)).abs() <= 1e-10 * f(p).abs().max(1.0), "{scheme} vertex {}", s.vertex);
                let unshifted = s.cell_ids.iter().zip(&s.offsets).all(|(&c, o)| (p + *o - m.cells()[c].centroid).norm() < 1e-12);
                if unshifted {
                    assert!((s.interpolate(&vals).unwrap() - f(p)).abs() <= 1e-10 * f(p).abs().max(1.0));
                }
                assert!(s.consistency_residual() < 1e-10);
            }
        }
    }

    #[test]
    fn corner_stencil_is_widened() {
        let m = generate_box(&BoxSpec::new(2, &[1.0, 1.0], &[4, 4])).unwrap();
        let f = |p: Vec3| 1.0 - 2.0 * p.x() + 0.5 * p.y();
        let vals: Vec<f64> = m.cells().iter().map(|c| f(c.centroid)).collect();
        let mut fallbacks = 0;
        for v in 0..m.n_vertices() {
            let p = m.vertices()[v];
            let s = build_stencil(&m, v, InterpScheme::ConsistentShepard).unwrap();
            let incident = m.cells().iter().filter(|c| c.vertices.contains(&v)).count();
            assert_eq!(s.extended, s.cell_ids.len() > incident);
            if s.fallback_applied {
                fallbacks += 1;
                continue;
            }
            assert!((s.interpolate(&vals).unwrap() - f(p)).abs() < 1e-12);
            if s.extended {
                assert!(s.normalized_weights().iter().all(|&w| w >= MIN_WIDENED_WEIGHT));
            }
        }
        // the two corners cut by a single triangle only widen to strongly negative weights
        assert_eq!(fallbacks, 2);
    }

    #[test]
    fn interpolator_matches_stencils() {
        let m = generate_box(&BoxSpec::new(3, &[1.0, 1.0, 1.0], &[2, 2, 2]).with_perturbation(0.2, 9)).unwrap();
        let (st, _) = build_all_stencils(&m, InterpScheme::ConsistentShepard).unwrap();
        let vals: Vec<f64> = (0..m.n_cells()).map(|c| (c as f64 * 0.37).sin()).collect();
        let direct = interpolate_field(&st, &vals).unwrap();
        let ip = VertexInterpolator::new(&st, m.n_cells()).unwrap();
        let mut out = vec![0.0; m.n_vertices()];
        ip.interpolate_into(&vals, 1, &mut out).unwrap();
        for (a, b) in direct.iter().zip(&out) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_sum_is_an_error() {
        let s = VertexStencil {
            vertex: 7,
            cell_ids: vec![0, 1],
            offsets: vec![Vec3::new(1.0, 0.0, 0.0); 2],
            distances: vec![1.0; 2],
            weights: vec![1.0, -1.0],
            lagrange: Vec3::ZERO,
            determinant: 1.0,
            scheme: InterpScheme::PseudoLaplacian,
            fallback_applied: false,
            extended: false,
        };
        assert!(matches!(s.interpolate(&[1.0, 2.0]), Err(InterpError::ZeroWeightSum { vertex: 7 })));
        assert!(VertexInterpolator::new(&[s], 2).is_err());
    }
}
