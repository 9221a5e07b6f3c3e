//! Snapshot, probe and summary writers.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use vcfv_core::solver::Model;
use vcfv_core::verify::RadialProfile;
use vcfv_core::*;

/// Writes through a temporary file next to `path`, then renames it into place.
pub fn write_atomic(path: &Path, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> io::Result<()> {
    let mut tmp_name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    let result = (|| {
        let mut w = BufWriter::new(File::create(&tmp)?);
        body(&mut w)?;
        w.into_inner().map_err(|e| e.into_error())?.sync_all()
    })();
    match result {
        Ok(()) => fs::rename(&tmp, path),
        Err(e) => {
            let _ = fs::remove_file(&tmp);
            Err(e)
        }
    }
}

/// One named per-cell field.
#[derive(Debug, Clone, PartialEq)]
pub enum CellField {
    Scalar(Vec<f64>),
    Vector(Vec<Vec3>),
}

impl CellField {
    fn columns(&self, name: &str) -> Vec<String> {
        match self {
            CellField::Scalar(_) => vec![name.to_string()],
            CellField::Vector(_) => ["x", "y", "z"].iter().map(|c| format!("{name}_{c}")).collect(),
        }
    }

    fn push_values(&self, cell: usize, out: &mut Vec<f64>) {
        match self {
            CellField::Scalar(v) => out.push(v[cell]),
            CellField::Vector(v) => out.extend_from_slice(&v[cell].0),
        }
    }
}

/// Extracts the named fields from a solution. Names are those accepted by
/// the configuration: density, velocity, pressure, energy for Euler and `u`
/// for scalars.
pub fn cell_fields(fields: &FieldSet, model: &Model, names: &[String]) -> Vec<(String, CellField)> {
    let n = fields.n_cells();
    names
        .iter()
        .filter_map(|name| {
            let f = match (model, name.as_str()) {
                (Model::Euler(_), "density") => CellField::Scalar((0..n).map(|i| fields.primitive(i)[0]).collect()),
                (Model::Euler(_), "velocity") => {
                    CellField::Vector((0..n).map(|i| Vec3::from_slice(&fields.primitive(i)[1..4])).collect())
                }
                (Model::Euler(_), "pressure") => CellField::Scalar((0..n).map(|i| fields.primitive(i)[4]).collect()),
                (Model::Euler(_), "energy") => CellField::Scalar((0..n).map(|i| fields.cell(i)[4]).collect()),
                (Model::Scalar(_), "u") => CellField::Scalar((0..n).map(|i| fields.primitive(i)[0]).collect()),
                _ => return None,
            };
            Some((name.clone(), f))
        })
        .collect()
}

/// Legacy ASCII VTK unstructured grid with per-cell data.
pub fn write_vtk(path: &Path, mesh: &Mesh, fields: &[(String, CellField)], title: &str) -> io::Result<()> {
    let dim = mesh.dim();
    let (nv, cell_type) = if dim == 2 { (3, 5) } else { (4, 10) };
    write_atomic(path, |w| {
        writeln!(w, "# vtk DataFile Version 3.0")?;
        writeln!(w, "{}", title.replace('\n', " "))?;
        writeln!(w, "ASCII\nDATASET UNSTRUCTURED_GRID")?;
        writeln!(w, "POINTS {} double", mesh.n_vertices())?;
        for p in mesh.vertices() {
            writeln!(w, "{:e} {:e} {:e}", p[0], p[1], p[2])?;
        }
        let nc = mesh.n_cells();
        writeln!(w, "CELLS {nc} {}", nc * (nv + 1))?;
        for c in mesh.cells() {
            write!(w, "{nv}")?;
            for v in c.vertex_ids(dim) {
                write!(w, " {v}")?;
            }
            writeln!(w)?;
        }
        writeln!(w, "CELL_TYPES {nc}")?;
        for _ in 0..nc {
            writeln!(w, "{cell_type}")?;
        }
        if !fields.is_empty() {
            writeln!(w, "CELL_DATA {nc}")?;
        }
        for (name, f) in fields {
            match f {
                CellField::Scalar(v) => {
                    writeln!(w, "SCALARS {name} double 1\nLOOKUP_TABLE default")?;
                    for x in v {
                        writeln!(w, "{x:e}")?;
                    }
                }
                CellField::Vector(v) => {
                    writeln!(w, "VECTORS {name} double")?;
                    for x in v {
                        writeln!(w, "{:e} {:e} {:e}", x[0], x[1], x[2])?;
                    }
                }
            }
        }
        Ok(())
    })
}

/// CSV `s,x,y,z,<fields>` along a probe line. Returns the number of rows;
/// zero means the line missed the mesh and only the header was written.
pub fn write_line_probe(path: &Path, mesh: &Mesh, probe: &LineProbe, fields: &[(String, CellField)]) -> io::Result<usize> {
    let samples = probe.sample(mesh);
    write_atomic(path, |w| {
        let mut header = vec!["s".to_string(), "x".into(), "y".into(), "z".into()];
        for (name, f) in fields {
            header.extend(f.columns(name));
        }
        writeln!(w, "{}", header.join(","))?;
        let mut row = Vec::new();
        for s in &samples {
            row.clear();
            row.extend_from_slice(&[s.s, s.point[0], s.point[1], s.point[2]]);
            for (_, f) in fields {
                f.push_values(s.cell, &mut row);
            }
            let text: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
            writeln!(w, "{}", text.join(","))?;
        }
        Ok(())
    })?;
    Ok(samples.len())
}

/// Pressure along a radial probe, for shock-radius tracking.
pub fn radial_profile(mesh: &Mesh, fields: &FieldSet, probe: &LineProbe) -> RadialProfile {
    let samples = probe.sample(mesh);
    RadialProfile {
        time: fields.time,
        radii: samples.iter().map(|s| s.s).collect(),
        pressure: samples.iter().map(|s| fields.primitive(s.cell)[fields.nvar - 1]).collect(),
    }
}

/// JSON run summary.
pub fn summary_json(report: &MonitorReport, interp: &InterpDiagnostics, mesh: &Mesh) -> serde_json::Value {
    let finite = |x: f64| if x.is_finite() { serde_json::json!(x) } else { serde_json::Value::Null };
    serde_json::json!({
        "final_time": report.final_time,
        "steps": report.steps,
        "cells": mesh.n_cells(),
        "vertices": mesh.n_vertices(),
        "min_density": finite(report.min_density),
        "min_pressure": finite(report.min_pressure),
        "max_principle_violations": report.max_principle_violations.len(),
        "conserved_drift": report.conserved_drift,
        "interpolation": {
            "scheme": interp.scheme.name(),
            "negative_weight_vertices": interp.n_vertices_with_negative_weight,
            "min_weight": finite(interp.min_weight),
            "fallbacks": interp.n_fallbacks,
            "widened": interp.n_extended,
        },
    })
}

/// Observer that writes VTK snapshots and probe CSVs during a run and
/// collects radial pressure profiles.
pub struct SnapshotWriter {
    pub directory: PathBuf,
    pub fields: Vec<String>,
    pub interval: usize,
    pub line_probes: Vec<LineProbe>,
    pub radial_probes: Vec<LineProbe>,
    pub radial_profiles: Vec<(String, RadialProfile)>,
    pub written: Vec<PathBuf>,
    pub warnings: Vec<String>,
    last_written: Option<usize>,
}

impl SnapshotWriter {
    pub fn new(directory: PathBuf, fields: Vec<String>, output: &OutputSpec) -> Self {
        SnapshotWriter {
            directory,
            fields,
            interval: output.snapshot_interval,
            line_probes: output.line_probes.clone(),
            radial_probes: output.radial_probes.clone(),
            radial_profiles: Vec::new(),
            written: Vec::new(),
            warnings: Vec::new(),
            last_written: None,
        }
    }

    fn write(&mut self, solver: &Solver, f: &FieldSet) -> io::Result<()> {
        if self.last_written == Some(f.step) {
            return Ok(());
        }
        self.last_written = Some(f.step);
        let mesh = solver.mesh();
        let data = cell_fields(f, &solver.config().model, &self.fields);
        let vtk = self.directory.join(format!("snapshot_{:06}.vtk", f.step));
        write_vtk(&vtk, mesh, &data, &format!("vcfv step {} t = {:e}", f.step, f.time))?;
        self.written.push(vtk);
        for probe in &self.line_probes {
            let path = self.directory.join(format!("probe_{}_{:06}.csv", probe.name, f.step));
            if write_line_probe(&path, mesh, probe, &data)? == 0 {
                self.warnings.push(format!("probe '{}' does not intersect the mesh", probe.name));
            }
            self.written.push(path);
        }
        for probe in &self.radial_probes {
            let profile = radial_profile(mesh, f, probe);
            if profile.radii.is_empty() {
                self.warnings.push(format!("radial probe '{}' does not intersect the mesh", probe.name));
            }
            self.radial_profiles.push((probe.name.clone(), profile));
        }
        Ok(())
    }
}

impl RunObserver for SnapshotWriter {
    fn on_start(&mut self, solver: &Solver, f: &FieldSet) -> Result<(), SolverError> {
        fs::create_dir_all(&self.directory)
            .map_err(|e| SolverError::Output(format!("{}: {e}", self.directory.display())))?;
        self.write(solver, f).map_err(|e| SolverError::Output(e.to_string()))
    }

    fn on_step(&mut self, solver: &Solver, f: &FieldSet) -> Result<(), SolverError> {
        let t = &solver.config().time;
        let last = f.time >= t.t_end || f.step >= t.max_steps;
        if last || (self.interval > 0 && f.step % self.interval == 0) {
            self.write(solver, f).map_err(|e| SolverError::Output(e.to_string()))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use vcfv_core::solver::NoOutput;

    fn small_mesh(dim: usize) -> Mesh {
        let cells = [2, 2, 2];
        generate_box(&BoxSpec::new(dim, &[1.0, 1.0, 1.0], &cells[..dim])).unwrap()
    }

    #[test]
    fn vtk_layout() {
        let dir = tempfile::tempdir().unwrap();
        for (dim, kind) in [(2, "5"), (3, "10")] {
            let mesh = small_mesh(dim);
            let nc = mesh.n_cells();
            let fields = vec![
                ("density".to_string(), CellField::Scalar(vec![1.0; nc])),
                ("velocity".to_string(), CellField::Vector(vec![Vec3::new(1.0, 2.0, 3.0); nc])),
            ];
            let path = dir.path().join(format!("m{dim}.vtk"));
            write_vtk(&path, &mesh, &fields, "test").unwrap();
            let text = fs::read_to_string(&path).unwrap();
            let lines: Vec<&str> = text.lines().collect();
            assert_eq!(lines[0], "# vtk DataFile Version 3.0");
            assert_eq!(lines[3], "DATASET UNSTRUCTURED_GRID");
            assert!(text.contains(&format!("CELLS {nc} {}", nc * (dim + 2))));
            let types = lines.iter().position(|l| l.starts_with("CELL_TYPES")).unwrap();
            assert!(lines[types + 1..types + 1 + nc].iter().all(|l| *l == kind));
            assert!(text.contains(&format!("CELL_DATA {nc}\nSCALARS density double 1\nLOOKUP_TABLE default")));
            assert!(text.contains("VECTORS velocity double\n1e0 2e0 3e0"));
            assert!(!dir.path().join(format!("m{dim}.vtk.tmp")).exists());
        }
    }

    #[test]
    fn probe_csv_columns_and_empty_probe() {
        let dir = tempfile::tempdir().unwrap();
        let mesh = small_mesh(2);
        let nc = mesh.n_cells();
        let fields = vec![
            ("density".to_string(), CellField::Scalar((0..nc).map(|i| i as f64).collect())),
            ("velocity".to_string(), CellField::Vector(vec![Vec3::ZERO; nc])),
        ];
        let probe = LineProbe { name: "p".into(), start: Vec3::new(0.0, 0.5, 0.0), direction: Vec3::new(1.0, 0.0, 0.0), samples: 5 };
        let path = dir.path().join("p.csv");
        assert_eq!(write_line_probe(&path, &mesh, &probe, &fields).unwrap(), 5);
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().next().unwrap(), "s,x,y,z,density,velocity_x,velocity_y,velocity_z");
        assert_eq!(text.lines().count(), 6);
        assert!(text.lines().skip(1).all(|l| l.split(',').count() == 8));

        let away = LineProbe { start: Vec3::new(5.0, 5.0, 0.0), ..probe };
        assert_eq!(write_line_probe(&path, &mesh, &away, &fields).unwrap(), 0);
        assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 1);
    }

    #[test]
    fn failed_write_leaves_no_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.vtk");
        let err = write_atomic(&path, |w| {
            writeln!(w, "partial")?;
            Err(io::Error::other("boom"))
        });
        assert!(err.is_err());
        assert!(!path.exists());
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
    }

    #[test]
    fn scalar_fields_and_summary() {
        let mesh = small_mesh(2);
        let model = Model::Scalar(ScalarModel::Advection { velocity: Vec3::new(1.0, 0.0, 0.0) });
        let scheme = SchemeConfig {
            model,
            interp: InterpScheme::ConsistentShepard,
            recon: ReconConfig::new(ReconScheme::Upwind, true, 2),
            flux: FluxScheme::Upwind,
            boundary: ["xmin", "xmax", "ymin", "ymax"].iter().map(|t| BoundaryCondition::new(t, BcKind::Transmissive)).collect(),
            time: TimeControls::default(),
            monitor_max_principle: false,
        };
        let solver = Solver::new(&mesh, scheme).unwrap();
        let mut f = solver.fields_from_primitive(vec![2.0; mesh.n_cells()]).unwrap();
        let report = solver.run(&mut f, &mut NoOutput).unwrap();
        let data = cell_fields(&f, &model, &["u".to_string(), "density".to_string()]);
        assert_eq!(data.len(), 1);
        assert_eq!(data[0].1, CellField::Scalar(vec![2.0; mesh.n_cells()]));
        let json = summary_json(&report, solver.interp_diagnostics(), &mesh);
        assert_eq!(json["steps"], 0);
        assert_eq!(json["min_density"], serde_json::Value::Null);
        assert_eq!(json["interpolation"]["scheme"], "consistent-shepard");
    }
}
