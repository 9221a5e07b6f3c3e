//! GMSH MSH 2.2 ASCII reader and writer.
//!
//! Cells are the simplices of the highest dimension present. Elements one
//! dimension lower carry boundary tags through their physical group; lower
//! dimensional elements (points, edges of a 3-D mesh) are ignored.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use super::{facet_key, Mesh, MeshError, NO_VERTEX};
use crate::geom::{signed_measure, Vec3};

pub fn load_gmsh(path: impl AsRef<Path>) -> Result<Mesh, MeshError> {
    let text = std::fs::read_to_string(path)?;
    parse_gmsh(&text)
}

struct Element {
    id: usize,
    dim: usize,
    physical: usize,
    nodes: Vec<usize>,
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next_line(&mut self) -> Result<&'a str, MeshError> {
        for (i, l) in self.inner.by_ref() {
            self.line = i + 1;
            let t = l.trim();
            if !t.is_empty() {
                return Ok(t);
            }
        }
        Err(MeshError::Parse { line: self.line, msg: "unexpected end of file".into() })
    }

    fn err(&self, msg: impl Into<String>) -> MeshError {
        MeshError::Parse { line: self.line, msg: msg.into() }
    }

    fn expect(&mut self, tag: &str) -> Result<(), MeshError> {
        let l = self.next_line()?;
        if l != tag {
            return Err(self.err(format!("expected {tag}, found '{l}'")));
        }
        Ok(())
    }

    fn count(&mut self) -> Result<usize, MeshError> {
        let l = self.next_line()?;
        l.parse().map_err(|_| self.err(format!("expected a count, found '{l}'")))
    }
}

fn parse_num<T: std::str::FromStr>(lines: &Lines, tok: Option<&str>) -> Result<T, MeshError> {
    let tok = tok.ok_or_else(|| lines.err("missing field"))?;
    tok.parse().map_err(|_| lines.err(format!("invalid number '{tok}'")))
}

fn element_dim(ty: usize) -> Option<usize> {
    match ty {
        15 => Some(0),
        1 => Some(1),
        2 => Some(2),
        4 => Some(3),
        _ => None,
    }
}

pub fn parse_gmsh(text: &str) -> Result<Mesh, MeshError> {
    let mut lines = Lines { inner: text.lines().enumerate(), line: 0 };
    let mut version_seen = false;
    let mut names: HashMap<(usize, usize), String> = HashMap::new();
    let mut nodes: Vec<(usize, Vec3)> = Vec::new();
    let mut elements: Vec<Element> = Vec::new();

    loop {
        let header = match lines.next_line() {
            Ok(h) => h,
            Err(_) => break,
        };
        match header {
            "$MeshFormat" => {
                let l = lines.next_line()?;
                let mut it = l.split_whitespace();
                let version = it.next().unwrap_or("");
                let file_type: usize = parse_num(&lines, it.next())?;
                if !version.starts_with("2.") {
                    return Err(MeshError::Format(format!(
                        "MSH version {version} is not supported; export as MSH 2.2 ASCII"
                    )));
                }
                if file_type != 0 {
                    return Err(MeshError::Format("binary MSH files are not supported".into()));
                }
                lines.expect("$EndMeshFormat")?;
                version_seen = true;
            }
            "$PhysicalNames" => {
                let n = lines.count()?;
                for _ in 0..n {
                    let l = lines.next_line()?;
                    let mut it = l.splitn(3, char::is_whitespace);
                    let dim: usize = parse_num(&lines, it.next())?;
                    let tag: usize = parse_num(&lines, it.next())?;
                    let name = it.next().unwrap_or("").trim().trim_matches('"').to_string();
                    names.insert((dim, tag), name);
                }
                lines.expect("$EndPhysicalNames")?;
            }
            "$Nodes" => {
                let n = lines.count()?;
                nodes.reserve(n);
                for _ in 0..n {
                    let l = lines.next_line()?;
                    let mut it = l.split_whitespace();
                    let id: usize = parse_num(&lines, it.next())?;
                    let x: f64 = parse_num(&lines, it.next())?;
                    let y: f64 = parse_num(&lines, it.next())?;
                    let z: f64 = parse_num(&lines, it.next())?;
                    nodes.push((id, Vec3::new(x, y, z)));
                }
                lines.expect("$EndNodes")?;
            }
            "$Elements" => {
                let n = lines.count()?;
                elements.reserve(n);
                for _ in 0..n {
                    let l = lines.next_line()?;
                    let mut it = l.split_whitespace();
                    let id: usize = parse_num(&lines, it.next())?;
                    let ty: usize = parse_num(&lines, it.next())?;
                    let ntags: usize = parse_num(&lines, it.next())?;
                    let mut tags = Vec::with_capacity(ntags);
                    for _ in 0..ntags {
                        tags.push(parse_num::<usize>(&lines, it.next())?);
                    }
                    let dim = element_dim(ty).ok_or_else(|| {
                        MeshError::Format(format!("element {id} has unsupported type {ty} (only simplices)"))
                    })?;
                    let nodes_el: Vec<usize> = it.map(|t| parse_num(&lines, Some(t))).collect::<Result<_, _>>()?;
                    if nodes_el.len() != dim + 1 {
                        return Err(lines.err(format!("element {id} has {} nodes, expected {}", nodes_el.len(), dim + 1)));
                    }
                    elements.push(Element { id, dim, physical: tags.first().copied().unwrap_or(0), nodes: nodes_el });
                }
                lines.expect("$EndElements")?;
            }
            other if other.starts_with('$') => {
                let end = format!("$End{}", &other[1..]);
                while lines.next_line()? != end {}
            }
            other => return Err(lines.err(format!("unexpected content '{other}'"))),
        }
    }
    if !version_seen {
        return Err(MeshError::Format("missing $MeshFormat section".into()));
    }

    let dim = elements.iter().map(|e| e.dim).max().unwrap_or(0);
    if dim < 2 {
        return Err(MeshError::Format("no triangle or tetrahedron elements".into()));
    }

    let node_index: HashMap<usize, usize> = nodes.iter().enumerate().map(|(i, (id, _))| (*id, i)).collect();
    let lookup = |e: &Element, n: usize| {
        node_index
            .get(&n)
            .copied()
            .ok_or_else(|| MeshError::Format(format!("element {} references missing node {n}", e.id)))
    };

    let cell_elems: Vec<&Element> = elements.iter().filter(|e| e.dim == dim).collect();
    let mut used = vec![usize::MAX; nodes.len()];
    let mut vertices = Vec::new();
    let mut cells = Vec::with_capacity(cell_elems.len());
    for e in &cell_elems {
        let mut c = Vec::with_capacity(dim + 1);
        for &n in &e.nodes {
            let i = lookup(e, n)?;
            if used[i] == usize::MAX {
                used[i] = vertices.len();
                vertices.push(nodes[i].1);
            }
            c.push(used[i]);
        }
        cells.push(c);
    }
    if dim == 2 {
        let z0 = vertices[0].z();
        let span = vertices.iter().map(|v| v.max_abs()).fold(1.0, f64::max);
        if vertices.iter().any(|v| (v.z() - z0).abs() > 1e-12 * span) {
            return Err(MeshError::Format("2-D mesh does not lie in a plane z = const".into()));
        }
        for v in &mut vertices {
            v[2] = 0.0;
        }
    }
    for (e, c) in cell_elems.iter().zip(&cells) {
        let pts: Vec<Vec3> = c.iter().map(|&v| vertices[v]).collect();
        let m = signed_measure(dim, &pts);
        let scale = pts.iter().skip(1).map(|p| (*p - pts[0]).norm()).fold(0.0, f64::max);
        if !(m.abs() > 1e-14 * scale.powi(dim as i32)) {
            return Err(MeshError::Degenerate { element: e.id, measure: m });
        }
    }

    let mut cell_facets = HashSet::new();
    for c in &cells {
        for skip in 0..=dim {
            let mut k = [NO_VERTEX; 3];
            for (slot, v) in k.iter_mut().zip(c.iter().enumerate().filter(|(l, _)| *l != skip).map(|(_, v)| *v)) {
                *slot = v;
            }
            cell_facets.insert(facet_key(k));
        }
    }
    let mut facets = Vec::new();
    for e in elements.iter().filter(|e| e.dim == dim - 1) {
        let mut fv = Vec::with_capacity(dim);
        let mut k = [NO_VERTEX; 3];
        for (slot, &n) in k.iter_mut().zip(&e.nodes) {
            let i = lookup(e, n)?;
            *slot = used[i];
            fv.push(used[i]);
        }
        if !cell_facets.contains(&facet_key(k)) {
            return Err(MeshError::Format(format!(
                "mixed element dimensions: element {} is not a facet of any {}-D cell",
                e.id, dim
            )));
        }
        if e.physical != 0 {
            let name = names.get(&(dim - 1, e.physical)).cloned().unwrap_or_else(|| e.physical.to_string());
            facets.push((fv, name));
        }
    }

    Mesh::from_cells(dim, vertices, &cells, &facets).map_err(|err| match err {
        MeshError::Degenerate { element, measure } => MeshError::Degenerate { element: cell_elems[element].id, measure },
        other => other,
    })
}

/// Serializes a mesh as MSH 2.2 ASCII, boundary faces grouped by tag.
pub fn write_gmsh(mesh: &Mesh) -> String {
    let d = mesh.dim();
    let mut s = String::new();
    s.push_str("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n");
    let tags = mesh.boundary_tags();
    let _ = writeln!(s, "$PhysicalNames\n{}", tags.len() + 1);
    for (i, t) in tags.iter().enumerate() {
        let _ = writeln!(s, "{} {} \"{}\"", d - 1, i + 1, t);
    }
    let _ = writeln!(s, "{} {} \"domain\"\n$EndPhysicalNames", d, tags.len() + 1);
    let _ = writeln!(s, "$Nodes\n{}", mesh.n_vertices());
    for (i, v) in mesh.vertices().iter().enumerate() {
        let _ = writeln!(s, "{} {:e} {:e} {:e}", i + 1, v.x(), v.y(), v.z());
    }
    s.push_str("$EndNodes\n");
    let boundary: Vec<_> = mesh.faces().iter().filter(|f| f.is_boundary()).collect();
    let _ = writeln!(s, "$Elements\n{}", boundary.len() + mesh.n_cells());
    let (facet_ty, cell_ty) = if d == 2 { (1, 2) } else { (2, 4) };
    let mut id = 1;
    for f in boundary {
        let tag = match f.right {
            super::FaceSide::Boundary(t) => t + 1,
            super::FaceSide::Cell(_) => unreachable!(),
        };
        let _ = write!(s, "{id} {facet_ty} 2 {tag} {tag}");
        for v in f.vertex_ids(d) {
            let _ = write!(s, " {}", v + 1);
        }
        s.push('\n');
        id += 1;
    }
    let dom = tags.len() + 1;
    for c in mesh.cells() {
        let _ = write!(s, "{id} {cell_ty} 2 {dom} {dom}");
        for v in c.vertex_ids(d) {
            let _ = write!(s, " {}", v + 1);
        }
        s.push('\n');
        id += 1;
    }
    s.push_str("$EndElements\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_box, BoxSpec};

    const TRI: &str = "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n3\n1 0 0 0\n2 1 0 0\n3 0 1 0\n$EndNodes\n\
$Elements\n1\n1 2 2 0 1 1 2 3\n$EndElements\n";

    #[test]
    fn reference_triangle() {
        let m = parse_gmsh(TRI).unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!(m.n_cells(), 1);
        assert_eq!(m.cells()[0].measure, 0.5);
    }

    #[test]
    fn reference_tet_with_physical_faces() {
        let text = "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$PhysicalNames\n1\n2 7 \"wall\"\n$EndPhysicalNames\n\
$Nodes\n4\n1 0 0 0\n2 1 0 0\n3 0 1 0\n4 0 0 1\n$EndNodes\n$Elements\n3\n1 15 2 0 1 1\n2 2 2 7 1 1 2 3\n3 4 2 1 1 1 2 3 4\n$EndElements\n";
        let m = parse_gmsh(text).unwrap();
        assert_eq!(m.dim(), 3);
        assert!((m.cells()[0].measure - 1.0 / 6.0).abs() < 1e-15);
        let mut tags = m.boundary_tags().to_vec();
        tags.sort();
        assert_eq!(tags, vec!["boundary".to_string(), "wall".to_string()]);
    }

    #[test]
    fn zero_area_triangle_names_element() {
        let text = TRI.replace("3 0 1 0", "3 2 0 0").replace("1 2 2 0 1 1 2 3", "42 2 2 0 1 1 2 3");
        match parse_gmsh(&text) {
            Err(MeshError::Degenerate { element, .. }) => assert_eq!(element, 42),
            other => panic!("expected degenerate error, got {other:?}"),
        }
    }

    #[test]
    fn version_four_rejected() {
        let text = TRI.replace("2.2 0 8", "4.1 0 8");
        assert!(matches!(parse_gmsh(&text), Err(MeshError::Format(_))));
        let text = TRI.replace("2.2 0 8", "2.2 1 8");
        assert!(matches!(parse_gmsh(&text), Err(MeshError::Format(_))));
    }

    #[test]
    fn stray_lower_dimension_element_rejected() {
        let text = TRI.replace("$Elements\n1\n", "$Elements\n2\n9 1 2 3 3 1 4\n").replace("$Nodes\n3\n", "$Nodes\n4\n4 5 5 0\n");
        assert!(matches!(parse_gmsh(&text), Err(MeshError::Format(_))));
    }

    #[test]
    fn quad_elements_rejected() {
        let text = TRI.replace("1 2 2 0 1 1 2 3", "1 3 2 0 1 1 2 3 3");
        assert!(matches!(parse_gmsh(&text), Err(MeshError::Format(_))));
    }

    #[test]
    fn round_trip_preserves_geometry() {
        let spec = BoxSpec::new(3, &[1.0, 0.5, 0.3], &[3, 2, 2]).with_perturbation(0.2, 3);
        let m = generate_box(&spec).unwrap();
        let back = parse_gmsh(&write_gmsh(&m)).unwrap();
        assert_eq!(back.n_cells(), m.n_cells());
        assert_eq!(back.boundary_tags(), m.boundary_tags());
        for (a, b) in m.cells().iter().zip(back.cells()) {
            assert!((a.centroid - b.centroid).norm() <= 1e-12);
            assert!((a.measure - b.measure).abs() <= 1e-12 * a.measure);
        }
        for (a, b) in m.faces().iter().zip(back.faces()) {
            assert_eq!(a.right, b.right);
            assert!((a.normal - b.normal).norm() <= 1e-12 * a.area());
        }
    }
}
