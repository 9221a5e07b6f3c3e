use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Mesh, MeshError};
use crate::geom::Vec3;

/// How each quadrilateral of a 2-D box is cut into two triangles.
/// 3-D boxes always use the six-tetrahedron Kuhn subdivision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Diagonal {
    /// Diagonal from lower-left to upper-right.
    #[default]
    Right,
    /// Diagonal from lower-right to upper-left.
    Left,
    /// Checkerboard of the two.
    Alternating,
}

impl std::str::FromStr for Diagonal {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "right" => Ok(Diagonal::Right),
            "left" => Ok(Diagonal::Left),
            "alternating" => Ok(Diagonal::Alternating),
            _ => Err(format!("unknown split '{s}' (expected right, left, alternating)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxSpec {
    pub dim: usize,
    pub origin: Vec3,
    pub extents: Vec3,
    pub cells: [usize; 3],
    pub split: Diagonal,
    /// Interior vertices are moved by up to `perturb` times the local
    /// spacing along each axis. Boundary vertices stay on their sides.
    pub perturb: f64,
    pub seed: u64,
}

impl BoxSpec {
    pub fn new(dim: usize, extents: &[f64], cells: &[usize]) -> BoxSpec {
        let mut n = [1; 3];
        n[..cells.len()].copy_from_slice(cells);
        BoxSpec {
            dim,
            origin: Vec3::ZERO,
            extents: Vec3::from_slice(extents),
            cells: n,
            split: Diagonal::Right,
            perturb: 0.0,
            seed: 0,
        }
    }

    pub fn with_origin(mut self, origin: Vec3) -> Self {
        self.origin = origin;
        self
    }

    pub fn with_split(mut self, split: Diagonal) -> Self {
        self.split = split;
        self
    }

    pub fn with_perturbation(mut self, perturb: f64, seed: u64) -> Self {
        self.perturb = perturb;
        self.seed = seed;
        self
    }
}

const SIDES: [[&str; 2]; 3] = [["xmin", "xmax"], ["ymin", "ymax"], ["zmin", "zmax"]];

/// Structured box cut into simplices, boundary faces tagged `xmin`, `xmax`, ...
pub fn generate_box(spec: &BoxSpec) -> Result<Mesh, MeshError> {
    let d = spec.dim;
    if d != 2 && d != 3 {
        return Err(MeshError::Format(format!("box dimension {d} not supported")));
    }
    for k in 0..d {
        if spec.cells[k] == 0 || !(spec.extents[k] > 0.0) {
            return Err(MeshError::Geometry(format!(
                "box axis {k} needs at least one cell and a positive extent"
            )));
        }
    }
    let n = spec.cells;
    let np = [n[0] + 1, n[1] + 1, if d == 3 { n[2] + 1 } else { 1 }];
    let idx = |i: usize, j: usize, k: usize| (k * np[1] + j) * np[0] + i;
    let spacing = Vec3::new(
        spec.extents[0] / n[0] as f64,
        spec.extents[1] / n[1] as f64,
        if d == 3 { spec.extents[2] / n[2] as f64 } else { 0.0 },
    );

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut vertices = Vec::with_capacity(np[0] * np[1] * np[2]);
    let mut grid_index = Vec::with_capacity(vertices.capacity());
    for k in 0..np[2] {
        for j in 0..np[1] {
            for i in 0..np[0] {
                let ijk = [i, j, k];
                let mut p = spec.origin;
                for a in 0..d {
                    p[a] += ijk[a] as f64 * spacing[a];
                }
                let interior = (0..d).all(|a| ijk[a] > 0 && ijk[a] < n[a]);
                if spec.perturb > 0.0 && interior {
                    for a in 0..d {
                        p[a] += spec.perturb * spacing[a] * rng.gen_range(-1.0..1.0);
                    }
                }
                vertices.push(p);
                grid_index.push(ijk);
            }
        }
    }

    let mut cells = Vec::new();
    if d == 2 {
        for j in 0..n[1] {
            for i in 0..n[0] {
                let (a, b, c, e) = (idx(i, j, 0), idx(i + 1, j, 0), idx(i + 1, j + 1, 0), idx(i, j + 1, 0));
                let right = match spec.split {
                    Diagonal::Right => true,
                    Diagonal::Left => false,
                    Diagonal::Alternating => (i + j) % 2 == 0,
                };
                if right {
                    cells.push(vec![a, b, c]);
                    cells.push(vec![a, c, e]);
                } else {
                    cells.push(vec![a, b, e]);
                    cells.push(vec![b, c, e]);
                }
            }
        }
    } else {
        const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        for k in 0..n[2] {
            for j in 0..n[1] {
                for i in 0..n[0] {
                    for perm in PERMS {
                        let mut ijk = [i, j, k];
                        let mut tet = vec![idx(i, j, k)];
                        for axis in perm {
                            ijk[axis] += 1;
                            tet.push(idx(ijk[0], ijk[1], ijk[2]));
                        }
                        // odd permutations come out negatively oriented
                        if matches!(perm, [0, 2, 1] | [1, 0, 2] | [2, 1, 0]) {
                            tet.swap(1, 2);
                        }
                        cells.push(tet);
                    }
                }
            }
        }
    }

    let mut facets = Vec::new();
    for cell in &cells {
        for skip in 0..=d {
            let fv: Vec<usize> =
                cell.iter().enumerate().filter(|(l, _)| *l != skip).map(|(_, v)| *v).collect();
            for a in 0..d {
                for (s, bound) in [0, n[a]].into_iter().enumerate() {
                    if fv.iter().all(|&v| grid_index[v][a] == bound) {
                        facets.push((fv.clone(), SIDES[a][s].to_string()));
                    }
                }
            }
        }
    }

    Mesh::from_cells(d, vertices, &cells, &facets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::FaceSide;

    #[test]
    fn unit_square_two_triangles() {
        let m = generate_box(&BoxSpec::new(2, &[1.0, 1.0], &[1, 1])).unwrap();
        assert_eq!(m.n_cells(), 2);
        assert!((m.total_measure() - 1.0).abs() < 1e-15);
        assert_eq!(m.boundary_tags().len(), 4);
    }

    #[test]
    fn unit_cube_six_tets() {
        let m = generate_box(&BoxSpec::new(3, &[1.0, 1.0, 1.0], &[1, 1, 1])).unwrap();
        assert_eq!(m.n_cells(), 6);
        assert!((m.total_measure() - 1.0).abs() < 1e-15);
        for c in m.cells() {
            assert!((c.measure - 1.0 / 6.0).abs() < 1e-15);
        }
        assert_eq!(m.boundary_tags().len(), 6);
        assert!(m.reoriented_cells().is_empty());
        assert_eq!(m.faces().iter().filter(|f| f.is_boundary()).count(), 12);
    }

    #[test]
    fn channel_mesh_has_hundred_axial_cells() {
        let m = generate_box(&BoxSpec::new(3, &[1.0, 0.1, 0.1], &[100, 4, 4])).unwrap();
        assert_eq!(m.n_cells(), 100 * 16 * 6);
        assert!((m.total_measure() - 0.01).abs() < 1e-14);
        let xmin = m.boundary_tags().iter().position(|t| t == "xmin").unwrap();
        let n = m.faces().iter().filter(|f| f.right == FaceSide::Boundary(xmin)).count();
        assert_eq!(n, 32);
    }

    #[test]
    fn perturbed_box_keeps_volume() {
        let spec = BoxSpec::new(3, &[2.0, 1.0, 1.0], &[4, 3, 3]).with_perturbation(0.25, 11);
        let m = generate_box(&spec).unwrap();
        assert!((m.total_measure() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn periodic_square_has_no_boundary() {
        let mut m = generate_box(&BoxSpec::new(2, &[1.0, 1.0], &[3, 3]).with_split(Diagonal::Alternating)).unwrap();
        m.make_periodic("xmin", "xmax", Vec3::new(1.0, 0.0, 0.0), 1e-9).unwrap();
        m.make_periodic("ymin", "ymax", Vec3::new(0.0, 1.0, 0.0), 1e-9).unwrap();
        assert!(m.faces().iter().all(|f| !f.is_boundary()));
        assert!(m.boundary_tags().is_empty());
        // corner vertex is identified with the other three corners
        assert_eq!(m.vertex_images(0).len(), 4);
        for c in 0..m.n_cells() {
            assert_eq!(m.cell_faces(c).len(), 3);
            let s: Vec3 = m.cell_faces(c).iter().map(|cf| m.outward_normal(*cf)).sum();
            assert!(s.norm() < 1e-14);
        }
    }
}
