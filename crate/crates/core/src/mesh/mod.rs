//! Simplicial meshes (triangles in 2-D, tetrahedra in 3-D) and the geometry
//! the vertex-centroid scheme needs: centroids, measures, area-weighted face
//! normals, face midpoints and the cell vertex opposite each face.
//!
//! A [`Mesh`] is immutable once built. Periodic pairing is the one mutation
//! allowed after construction and happens before any solver touches it.

mod boxgen;
mod gmsh;
mod report;

pub use boxgen::{generate_box, BoxSpec, Diagonal};
pub use gmsh::{load_gmsh, parse_gmsh, write_gmsh};
pub use report::{validate_mesh, MeshReport};

use std::collections::{HashMap, HashSet};

use crate::geom::{facet_normal, signed_measure, Vec3};

#[derive(Debug, thiserror::Error)]
pub enum MeshError {
    #[error("msh parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unsupported mesh format: {0}")]
    Format(String),
    #[error("degenerate element {element}: measure {measure:e}")]
    Degenerate { element: usize, measure: f64 },
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("topology error: {0}")]
    Topology(String),
    #[error("periodic pairing failed: {0}")]
    Periodic(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Marker used to pad unused vertex slots of triangles and edges.
pub const NO_VERTEX: usize = usize::MAX;

#[derive(Debug, Clone)]
pub struct Cell {
    /// `dim + 1` vertex indices; the last slot is [`NO_VERTEX`] for triangles.
    pub vertices: [usize; 4],
    pub centroid: Vec3,
    pub measure: f64,
    /// Largest vertex-to-centroid distance.
    pub diameter: f64,
}

impl Cell {
    pub fn vertex_ids(&self, dim: usize) -> &[usize] {
        &self.vertices[..dim + 1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceSide {
    Cell(usize),
    /// Index into [`Mesh::boundary_tags`].
    Boundary(usize),
}

#[derive(Debug, Clone)]
pub struct Face {
    /// `dim` vertex indices as seen from the left cell.
    pub vertices: [usize; 3],
    pub left: usize,
    pub right: FaceSide,
    /// Points out of `left`; its length is the face measure.
    pub normal: Vec3,
    pub midpoint: Vec3,
    /// Vertex of the left cell not on this face.
    pub opp_left: usize,
    /// Vertex of the right cell not on this face (interior faces only).
    pub opp_right: Option<usize>,
    /// For periodic faces, the translation taking the left-side face onto
    /// its image on the right cell.
    pub periodic_shift: Option<Vec3>,
}

impl Face {
    pub fn area(&self) -> f64 {
        self.normal.norm()
    }

    pub fn right_cell(&self) -> Option<usize> {
        match self.right {
            FaceSide::Cell(c) => Some(c),
            FaceSide::Boundary(_) => None,
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self.right, FaceSide::Boundary(_))
    }

    pub fn vertex_ids(&self, dim: usize) -> &[usize] {
        &self.vertices[..dim]
    }
}

/// Where a cell sits relative to one of its faces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellFace {
    pub face: usize,
    /// `true` when the cell is the face's left cell (normal points outward).
    pub is_left: bool,
}

#[derive(Debug, Clone)]
pub struct Mesh {
    dim: usize,
    vertices: Vec<Vec3>,
    cells: Vec<Cell>,
    faces: Vec<Face>,
    cell_faces: Vec<Vec<CellFace>>,
    cell_neighbors: Vec<Vec<usize>>,
    vertex_cells: Vec<Vec<usize>>,
    boundary_tags: Vec<String>,
    /// Vertices identified with each vertex through periodic pairing,
    /// the vertex itself first.
    vertex_images: Vec<Vec<usize>>,
    reoriented: Vec<usize>,
}

fn facet_key(mut vs: [usize; 3]) -> [usize; 3] {
    vs.sort_unstable();
    vs
}

impl Mesh {
    /// Builds connectivity and geometry from raw simplices.
    ///
    /// `boundary_facets` assigns tag names to boundary facets (identified by
    /// vertex set); boundary facets without an entry get the tag `"boundary"`.
    /// Negatively oriented cells are fixed by swapping two vertices.
    pub fn from_cells(
        dim: usize,
        vertices: Vec<Vec3>,
        cells: &[Vec<usize>],
        boundary_facets: &[(Vec<usize>, String)],
    ) -> Result<Mesh, MeshError> {
        if dim != 2 && dim != 3 {
            return Err(MeshError::Format(format!("dimension {dim} not supported")));
        }
        if let Some(i) = vertices.iter().position(|v| !v.is_finite()) {
            return Err(MeshError::Geometry(format!("vertex {i} has non-finite coordinates")));
        }
        if cells.is_empty() {
            return Err(MeshError::Topology("mesh has no cells".into()));
        }
        let nv = vertices.len();
        let mut raw_cells = Vec::with_capacity(cells.len());
        let mut reoriented = Vec::new();
        for (ci, c) in cells.iter().enumerate() {
            if c.len() != dim + 1 {
                return Err(MeshError::Topology(format!(
                    "cell {ci} has {} vertices, expected {}",
                    c.len(),
                    dim + 1
                )));
            }
            let mut vs = [NO_VERTEX; 4];
            for (k, &v) in c.iter().enumerate() {
                if v >= nv {
                    return Err(MeshError::Topology(format!("cell {ci} references missing vertex {v}")));
                }
                vs[k] = v;
            }
            let pts: Vec<Vec3> = c.iter().map(|&v| vertices[v]).collect();
            let m = signed_measure(dim, &pts);
            let scale = pts.iter().skip(1).map(|p| (*p - pts[0]).norm()).fold(0.0, f64::max);
            if !(m.abs() > 1e-14 * scale.powi(dim as i32)) {
                return Err(MeshError::Degenerate { element: ci, measure: m });
            }
            if m < 0.0 {
                vs.swap(1, 2);
                reoriented.push(ci);
            }
            raw_cells.push(vs);
        }

        let tag_lookup: HashMap<[usize; 3], &str> = boundary_facets
            .iter()
            .map(|(vs, name)| {
                let mut k = [NO_VERTEX; 3];
                for (d, s) in k.iter_mut().zip(vs) {
                    *d = *s;
                }
                (facet_key(k), name.as_str())
            })
            .collect();

        // facet key -> (cell, local index of the opposite vertex)
        let mut seen: HashMap<[usize; 3], (usize, usize)> = HashMap::new();
        let mut matched: HashSet<[usize; 3]> = HashSet::new();
        let mut faces = Vec::new();
        let mut cell_faces: Vec<Vec<CellFace>> = vec![Vec::with_capacity(dim + 1); raw_cells.len()];
        for (ci, vs) in raw_cells.iter().enumerate() {
            for k in 0..=dim {
                let mut fv = [NO_VERTEX; 3];
                let mut n = 0;
                for (l, &v) in vs[..=dim].iter().enumerate() {
                    if l != k {
                        fv[n] = v;
                        n += 1;
                    }
                }
                let key = facet_key(fv);
                if matched.contains(&key) {
                    return Err(MeshError::Topology(format!(
                        "facet {:?} is shared by more than two cells",
                        &key[..dim]
                    )));
                }
                match seen.remove(&key) {
                    None => {
                        seen.insert(key, (ci, k));
                    }
                    Some((left, lk)) => {
                        matched.insert(key);
                        let fid = faces.len();
                        let lv = raw_cells[left];
                        faces.push(Face {
                            vertices: face_vertices(&lv, lk, dim),
                            left,
                            right: FaceSide::Cell(ci),
                            normal: Vec3::ZERO,
                            midpoint: Vec3::ZERO,
                            opp_left: lv[lk],
                            opp_right: Some(vs[k]),
                            periodic_shift: None,
                        });
                        cell_faces[left].push(CellFace { face: fid, is_left: true });
                        cell_faces[ci].push(CellFace { face: fid, is_left: false });
                    }
                }
            }
        }
        // Anything still unmatched is a boundary facet. Sort for determinism.
        let mut remaining: Vec<([usize; 3], (usize, usize))> = seen.into_iter().collect();
        remaining.sort_unstable_by_key(|(_, (c, k))| (*c, *k));
        let mut boundary_tags: Vec<String> = Vec::new();
        let mut tag_index: HashMap<String, usize> = HashMap::new();
        for (key, (left, lk)) in remaining {
            let name = tag_lookup.get(&key).copied().unwrap_or("boundary");
            let tid = *tag_index.entry(name.to_string()).or_insert_with(|| {
                boundary_tags.push(name.to_string());
                boundary_tags.len() - 1
            });
            let lv = raw_cells[left];
            let fid = faces.len();
            faces.push(Face {
                vertices: face_vertices(&lv, lk, dim),
                left,
                right: FaceSide::Boundary(tid),
                normal: Vec3::ZERO,
                midpoint: Vec3::ZERO,
                opp_left: lv[lk],
                opp_right: None,
                periodic_shift: None,
            });
            cell_faces[left].push(CellFace { face: fid, is_left: true });
        }
        for (ci, cf) in cell_faces.iter().enumerate() {
            if cf.len() != dim + 1 {
                return Err(MeshError::Topology(format!(
                    "cell {ci} has {} faces; a facet is shared by more than two cells",
                    cf.len()
                )));
            }
        }

        let mut vertex_cells = vec![Vec::new(); nv];
        for (ci, vs) in raw_cells.iter().enumerate() {
            for &v in &vs[..=dim] {
                vertex_cells[v].push(ci);
            }
        }

        let cells = raw_cells
            .into_iter()
            .map(|vertices| Cell { vertices, centroid: Vec3::ZERO, measure: 0.0, diameter: 0.0 })
            .collect();
        let mut mesh = Mesh {
            dim,
            vertex_images: (0..nv).map(|v| vec![v]).collect(),
            vertices,
            cells,
            faces,
            cell_faces,
            cell_neighbors: Vec::new(),
            vertex_cells,
            boundary_tags,
            reoriented,
        };
        mesh.rebuild_neighbors();
        mesh.compute_geometry()?;
        Ok(mesh)
    }

    /// Recomputes centroids, measures, diameters, face normals and midpoints.
    pub fn compute_geometry(&mut self) -> Result<(), MeshError> {
        let dim = self.dim;
        for (ci, cell) in self.cells.iter_mut().enumerate() {
            let pts: Vec<Vec3> = cell.vertex_ids(dim).iter().map(|&v| self.vertices[v]).collect();
            let m = signed_measure(dim, &pts);
            if !(m > 0.0) {
                return Err(MeshError::Geometry(format!("cell {ci} has non-positive measure {m:e}")));
            }
            let c = pts.iter().copied().sum::<Vec3>() / (dim + 1) as f64;
            cell.centroid = c;
            cell.measure = m;
            cell.diameter = pts.iter().map(|p| (*p - c).norm()).fold(0.0, f64::max);
        }
        for face in &mut self.faces {
            let pts: Vec<Vec3> = face.vertex_ids(dim).iter().map(|&v| self.vertices[v]).collect();
            let mid = pts.iter().copied().sum::<Vec3>() / dim as f64;
            let mut n = facet_normal(dim, &pts);
            if n.dot(&(mid - self.cells[face.left].centroid)) < 0.0 {
                n = -n;
            }
            face.normal = n;
            face.midpoint = mid;
        }
        Ok(())
    }

    fn rebuild_neighbors(&mut self) {
        self.cell_neighbors = self
            .cell_faces
            .iter()
            .map(|cfs| {
                cfs.iter()
                    .filter_map(|cf| {
                        let f = &self.faces[cf.face];
                        match (cf.is_left, f.right) {
                            (true, FaceSide::Cell(r)) => Some(r),
                            (false, _) => Some(f.left),
                            _ => None,
                        }
                    })
                    .collect()
            })
            .collect();
    }

    /// Identifies the boundary faces tagged `from` with those tagged `to`,
    /// where every point of `to` equals a point of `from` plus `shift`.
    ///
    /// Paired faces become interior faces between the two adjacent cells and
    /// the matching vertices become images of each other, so vertex stencils
    /// gather cells across the periodic boundary. Both tags disappear.
    pub fn make_periodic(&mut self, from: &str, to: &str, shift: Vec3, tol: f64) -> Result<(), MeshError> {
        let tag_of = |name: &str| {
            self.boundary_tags
                .iter()
                .position(|t| t == name)
                .ok_or_else(|| MeshError::Periodic(format!("no boundary tag named '{name}'")))
        };
        let ta = tag_of(from)?;
        let tb = tag_of(to)?;
        let side_a: Vec<usize> =
            (0..self.faces.len()).filter(|&f| self.faces[f].right == FaceSide::Boundary(ta)).collect();
        let side_b: Vec<usize> =
            (0..self.faces.len()).filter(|&f| self.faces[f].right == FaceSide::Boundary(tb)).collect();
        if side_a.len() != side_b.len() {
            return Err(MeshError::Periodic(format!(
                "'{from}' has {} faces but '{to}' has {}",
                side_a.len(),
                side_b.len()
            )));
        }

        // Bucket the target faces on a coarse grid for lookup.
        let cell = side_b
            .iter()
            .map(|&f| self.faces[f].area())
            .fold(0.0, f64::max)
            .powf(1.0 / (self.dim - 1) as f64)
            .max(tol);
        let bucket = |p: Vec3| -> [i64; 3] {
            [
                (p.x() / cell).floor() as i64,
                (p.y() / cell).floor() as i64,
                (p.z() / cell).floor() as i64,
            ]
        };
        let mut grid: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
        for &f in &side_b {
            grid.entry(bucket(self.faces[f].midpoint)).or_default().push(f);
        }

        let mut pairs = Vec::with_capacity(side_a.len());
        let mut used = vec![false; self.faces.len()];
        for &fa in &side_a {
            let target = self.faces[fa].midpoint + shift;
            let b0 = bucket(target);
            let mut found = None;
            'search: for dx in -1..=1 {
                for dy in -1..=1 {
                    for dz in -1..=1 {
                        if let Some(list) = grid.get(&[b0[0] + dx, b0[1] + dy, b0[2] + dz]) {
                            for &fb in list {
                                if !used[fb] && (self.faces[fb].midpoint - target).norm() <= tol {
                                    found = Some(fb);
                                    break 'search;
                                }
                            }
                        }
                    }
                }
            }
            let fb = found.ok_or_else(|| {
                MeshError::Periodic(format!("face {fa} of '{from}' has no partner on '{to}'"))
            })?;
            used[fb] = true;
            pairs.push((fa, fb));
        }

        // Vertex identification through union-find over image classes.
        let nv = self.vertices.len();
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for images in &self.vertex_images {
            for &v in &images[1..] {
                let (a, b) = (find(&mut parent, images[0]), find(&mut parent, v));
                parent[a.max(b)] = a.min(b);
            }
        }
        for &(fa, fb) in &pairs {
            for &va in self.faces[fa].vertex_ids(self.dim) {
                let target = self.vertices[va] + shift;
                let vb = self.faces[fb]
                    .vertex_ids(self.dim)
                    .iter()
                    .copied()
                    .find(|&vb| (self.vertices[vb] - target).norm() <= tol)
                    .ok_or_else(|| MeshError::Periodic(format!("vertex {va} has no periodic image")))?;
                let (a, b) = (find(&mut parent, va), find(&mut parent, vb));
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut classes: HashMap<usize, Vec<usize>> = HashMap::new();
        for v in 0..nv {
            let r = find(&mut parent, v);
            classes.entry(r).or_default().push(v);
        }
        for v in 0..nv {
            let r = find(&mut parent, v);
            let mut images = classes[&r].clone();
            images.retain(|&x| x != v);
            images.insert(0, v);
            self.vertex_images[v] = images;
        }

        // Merge face pairs: fa keeps the left side, fb disappears.
        let mut remove = vec![false; self.faces.len()];
        for &(fa, fb) in &pairs {
            let (b_left, b_opp) = (self.faces[fb].left, self.faces[fb].opp_left);
            let f = &mut self.faces[fa];
            f.right = FaceSide::Cell(b_left);
            f.opp_right = Some(b_opp);
            f.periodic_shift = Some(shift);
            remove[fb] = true;
        }
        let partner: HashMap<usize, usize> = pairs.iter().map(|&(a, b)| (b, a)).collect();
        let mut new_id = vec![usize::MAX; self.faces.len()];
        let mut next = 0;
        for (f, r) in remove.iter().enumerate() {
            if !r {
                new_id[f] = next;
                next += 1;
            }
        }
        for cfs in &mut self.cell_faces {
            for cf in cfs.iter_mut() {
                if remove[cf.face] {
                    cf.face = new_id[partner[&cf.face]];
                    cf.is_left = false;
                } else {
                    cf.face = new_id[cf.face];
                }
            }
        }
        let faces = std::mem::take(&mut self.faces);
        self.faces = faces.into_iter().zip(remove).filter(|(_, r)| !r).map(|(f, _)| f).collect();

        // Drop the two tags and renumber the rest.
        let mut tag_map = vec![None; self.boundary_tags.len()];
        let mut kept = Vec::new();
        for (i, t) in self.boundary_tags.iter().enumerate() {
            if i != ta && i != tb {
                tag_map[i] = Some(kept.len());
                kept.push(t.clone());
            }
        }
        for f in &mut self.faces {
            if let FaceSide::Boundary(t) = f.right {
                f.right = FaceSide::Boundary(tag_map[t].expect("paired tags have no faces left"));
            }
        }
        self.boundary_tags = kept;
        self.rebuild_neighbors();
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }
    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }
    /// Faces of each cell in a fixed order.
    pub fn cell_faces(&self, cell: usize) -> &[CellFace] {
        &self.cell_faces[cell]
    }
    /// Cells sharing a face with `cell` (periodic partners included).
    pub fn cell_neighbors(&self, cell: usize) -> &[usize] {
        &self.cell_neighbors[cell]
    }
    /// Cells containing `vertex` (this vertex only, not its periodic images).
    pub fn vertex_cells(&self, vertex: usize) -> &[usize] {
        &self.vertex_cells[vertex]
    }
    /// `vertex` followed by the vertices it is identified with periodically.
    pub fn vertex_images(&self, vertex: usize) -> &[usize] {
        &self.vertex_images[vertex]
    }
    pub fn boundary_tags(&self) -> &[String] {
        &self.boundary_tags
    }
    pub fn tag_name(&self, tag: usize) -> &str {
        &self.boundary_tags[tag]
    }
    /// Cells whose input vertex order was flipped to make them positive.
    pub fn reoriented_cells(&self) -> &[usize] {
        &self.reoriented
    }
    pub fn is_periodic(&self) -> bool {
        self.faces.iter().any(|f| f.periodic_shift.is_some())
    }

    pub fn total_measure(&self) -> f64 {
        self.cells.iter().map(|c| c.measure).sum()
    }

    /// Outward normal of `face` seen from `cell`.
    pub fn outward_normal(&self, cf: CellFace) -> Vec3 {
        let n = self.faces[cf.face].normal;
        if cf.is_left {
            n
        } else {
            -n
        }
    }

    /// Midpoint of `face` in the coordinate frame of the given side.
    pub fn face_midpoint_for(&self, cf: CellFace) -> Vec3 {
        let f = &self.faces[cf.face];
        match (cf.is_left, f.periodic_shift) {
            (false, Some(s)) => f.midpoint + s,
            _ => f.midpoint,
        }
    }

    /// Vertex of `cell` opposite the given face.
    pub fn opposite_vertex(&self, cf: CellFace) -> usize {
        let f = &self.faces[cf.face];
        if cf.is_left {
            f.opp_left
        } else {
            f.opp_right.expect("right side of an interior face")
        }
    }

    /// Index of the cell nearest to `p` (by centroid distance, lowest index on ties).
    pub fn nearest_cell(&self, p: Vec3) -> usize {
        let mut best = (f64::INFINITY, 0);
        for (i, c) in self.cells.iter().enumerate() {
            let d = (c.centroid - p).norm_sq();
            if d < best.0 {
                best = (d, i);
            }
        }
        best.1
    }

    /// Axis-aligned bounding box of the vertices.
    pub fn bounding_box(&self) -> (Vec3, Vec3) {
        let mut lo = Vec3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
        let mut hi = -lo;
        for v in &self.vertices {
            for k in 0..3 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        (lo, hi)
    }
}

fn face_vertices(cell: &[usize; 4], opp: usize, dim: usize) -> [usize; 3] {
    let mut fv = [NO_VERTEX; 3];
    let mut n = 0;
    for (l, &v) in cell[..=dim].iter().enumerate() {
        if l != opp {
            fv[n] = v;
            n += 1;
        }
    }
    fv
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn reference_triangle() -> Mesh {
        let v = vec![Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0)];
        Mesh::from_cells(2, v, &[vec![0, 1, 2]], &[]).unwrap()
    }

    pub(crate) fn reference_tet() -> Mesh {
        let v = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
        ];
        Mesh::from_cells(3, v, &[vec![0, 1, 2, 3]], &[]).unwrap()
    }

    #[test]
    fn reference_triangle_geometry() {
        let m = reference_triangle();
        let c = &m.cells()[0];
        assert_eq!(c.measure, 0.5);
        assert!((c.centroid - Vec3::new(1.0 / 3.0, 1.0 / 3.0, 0.0)).norm() < 1e-15);
        let cf = m.cell_faces(0).iter().copied().find(|cf| m.opposite_vertex(*cf) == 0).unwrap();
        let mid = m.face_midpoint_for(cf);
        assert!((mid - Vec3::new(0.5, 0.5, 0.0)).norm() < 1e-15);
        let r1 = m.vertices()[0] - c.centroid;
        assert!((mid - c.centroid - (-0.5) * r1).norm() < 1e-15);
    }

    #[test]
    fn reference_tet_geometry() {
        let m = reference_tet();
        let c = &m.cells()[0];
        assert!((c.measure - 1.0 / 6.0).abs() < 1e-15);
        let cf = m.cell_faces(0).iter().copied().find(|cf| m.opposite_vertex(*cf) == 0).unwrap();
        let mid = m.face_midpoint_for(cf);
        assert!((mid - Vec3::new(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)).norm() < 1e-15);
        let r1 = m.vertices()[0] - c.centroid;
        assert!((mid - c.centroid - (-1.0 / 3.0) * r1).norm() < 1e-15);
    }

    #[test]
    fn normals_of_closed_cell_sum_to_zero() {
        for m in [reference_triangle(), reference_tet()] {
            let s: Vec3 = m.cell_faces(0).iter().map(|cf| m.outward_normal(*cf)).sum();
            assert!(s.norm() < 1e-15);
            for cf in m.cell_faces(0) {
                let f = &m.faces()[cf.face];
                assert!(f.normal.dot(&(f.midpoint - m.cells()[0].centroid)) > 0.0);
            }
        }
    }

    #[test]
    fn negative_orientation_is_fixed() {
        let v = vec![Vec3::new(0.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0), Vec3::new(1.0, 0.0, 0.0)];
        let m = Mesh::from_cells(2, v, &[vec![0, 1, 2]], &[]).unwrap();
        assert_eq!(m.reoriented_cells(), &[0]);
        assert_eq!(m.cells()[0].measure, 0.5);
    }

    #[test]
    fn degenerate_cell_is_rejected() {
        let v = vec![Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0), Vec3::new(2.0, 0.0, 0.0)];
        let err = Mesh::from_cells(2, v, &[vec![0, 1, 2]], &[]).unwrap_err();
        assert!(matches!(err, MeshError::Degenerate { element: 0, .. }));
    }

    #[test]
    fn overfull_facet_is_rejected() {
        let v = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, -1.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
        ];
        let err = Mesh::from_cells(2, v, &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 1, 4]], &[]).unwrap_err();
        assert!(matches!(err, MeshError::Topology(_)));
    }
}
