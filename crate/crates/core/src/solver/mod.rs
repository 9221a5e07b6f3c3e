//! Semi-discrete vertex-centroid scheme, boundary states and explicit
//! time stepping.
//!
//! Euler runs store conserved variables per cell and reconstruct the
//! primitive variables `(rho, u, v, w, p)`; scalar runs store the scalar.

mod monitor;

pub use monitor::{ConservationTracker, MaxPrincipleViolation, MonitorReport};

use std::fmt;

use rayon::prelude::*;

use crate::flux::{euler_numerical_flux, scalar_numerical_flux, FluxScheme};
use crate::geom::Vec3;
use crate::interp::{build_all_stencils, InterpDiagnostics, InterpError, InterpScheme, VertexInterpolator, VertexStencil};
use crate::mesh::{CellFace, Face, FaceSide, Mesh};
use crate::physics::{
    cons_to_prim, max_wave_speed, prim_to_cons, EulerConserved, EulerPrimitive, GasModel, PhysicsError, ScalarModel,
};
use crate::recon::{reconstruct, reconstruct_boundary, FaceInput, ReconConfig};

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    #[error("cell {cell}: {source}")]
    CellState { cell: usize, source: PhysicsError },
    #[error("face {face}: {source}")]
    FaceState { face: usize, source: PhysicsError },
    #[error("configuration: {0}")]
    Config(String),
    #[error("non-finite time step at t = {time}")]
    TimeStep { time: f64 },
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error("step {step} (t = {time:e}): {source}")]
    Step { step: usize, time: f64, source: Box<SolverError> },
    #[error("{0}")]
    Output(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Scalar(ScalarModel),
    Euler(GasModel),
}

impl Model {
    pub fn nvar(&self) -> usize {
        match self {
            Model::Scalar(_) => 1,
            Model::Euler(_) => 5,
        }
    }

    pub fn is_euler(&self) -> bool {
        matches!(self, Model::Euler(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BcKind {
    SlipWall,
    SupersonicInflow,
    Transmissive,
    DirichletScalar,
    /// Resolved by face pairing when the mesh is built.
    Periodic,
}

impl BcKind {
    pub fn name(&self) -> &'static str {
        match self {
            BcKind::SlipWall => "slip_wall",
            BcKind::SupersonicInflow => "supersonic_inflow",
            BcKind::Transmissive => "transmissive",
            BcKind::DirichletScalar => "dirichlet",
            BcKind::Periodic => "periodic",
        }
    }
}

impl fmt::Display for BcKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for BcKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "slip_wall" | "wall" => Ok(BcKind::SlipWall),
            "supersonic_inflow" | "inflow" => Ok(BcKind::SupersonicInflow),
            "transmissive" | "outflow" | "transmissive_outflow" => Ok(BcKind::Transmissive),
            "dirichlet" | "dirichlet_scalar" => Ok(BcKind::DirichletScalar),
            "periodic" => Ok(BcKind::Periodic),
            _ => Err(format!(
                "unknown boundary kind '{s}' (expected slip_wall, supersonic_inflow, transmissive, dirichlet, periodic)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCondition {
    pub tag: String,
    pub kind: BcKind,
    /// Fixed exterior state: primitive `(rho, u, v, w, p)` for Euler, `[u]` for scalars.
    pub data: Vec<f64>,
}

impl BoundaryCondition {
    pub fn new(tag: &str, kind: BcKind) -> Self {
        BoundaryCondition { tag: tag.to_string(), kind, data: Vec::new() }
    }

    pub fn with_data(mut self, data: Vec<f64>) -> Self {
        self.data = data;
        self
    }
}

/// Ghost state for a boundary face, in the variables the flux consumes
/// (primitive for Euler). `n_unit` points out of the domain.
pub fn apply_boundary_state(n_unit: Vec3, interior: &[f64], bc: &BoundaryCondition, out: &mut [f64]) {
    match bc.kind {
        BcKind::SlipWall if interior.len() == 5 => {
            let u = Vec3::new(interior[1], interior[2], interior[3]);
            let m = u - 2.0 * u.dot(&n_unit) * n_unit;
            out.copy_from_slice(&[interior[0], m[0], m[1], m[2], interior[4]]);
        }
        BcKind::SupersonicInflow | BcKind::DirichletScalar => out.copy_from_slice(&bc.data[..out.len()]),
        _ => out.copy_from_slice(interior),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Integrator {
    ForwardEuler,
    Ssprk3,
}

impl std::str::FromStr for Integrator {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "forward_euler" | "euler" => Ok(Integrator::ForwardEuler),
            "ssprk3" | "rk3" => Ok(Integrator::Ssprk3),
            _ => Err(format!("unknown integrator '{s}' (expected forward_euler, ssprk3)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeControls {
    pub cfl: f64,
    pub t_end: f64,
    pub fixed_dt: Option<f64>,
    pub integrator: Integrator,
    pub max_steps: usize,
}

impl Default for TimeControls {
    fn default() -> Self {
        TimeControls { cfl: 0.4, t_end: 0.0, fixed_dt: None, integrator: Integrator::Ssprk3, max_steps: usize::MAX }
    }
}

/// Numerical method and boundary set-up of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    pub model: Model,
    pub interp: InterpScheme,
    pub recon: ReconConfig,
    pub flux: FluxScheme,
    pub boundary: Vec<BoundaryCondition>,
    pub time: TimeControls,
    /// Record maximum-principle violations (scalar runs only).
    pub monitor_max_principle: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldSet {
    pub nvar: usize,
    /// Per-cell state: conserved for Euler, the scalar otherwise.
    pub cell_values: Vec<f64>,
    /// Per-cell primitive mirror (equal to `cell_values` for scalars).
    pub cell_primitive: Vec<f64>,
    /// Per-vertex interpolated primitive values from the last assembly.
    pub vertex_values: Vec<f64>,
    pub time: f64,
    pub step: usize,
}

impl FieldSet {
    pub fn n_cells(&self) -> usize {
        self.cell_values.len() / self.nvar
    }

    pub fn cell(&self, i: usize) -> &[f64] {
        &self.cell_values[i * self.nvar..(i + 1) * self.nvar]
    }

    pub fn primitive(&self, i: usize) -> &[f64] {
        &self.cell_primitive[i * self.nvar..(i + 1) * self.nvar]
    }

    pub fn euler_primitive(&self, i: usize) -> EulerPrimitive {
        EulerPrimitive::from_slice(self.primitive(i))
    }
}

/// Per-cell right-hand side `-sum_j H_ij` and the total flux leaving
/// through boundary faces.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub values: Vec<f64>,
    pub boundary_outflow: Vec<f64>,
}

pub struct Solver<'m> {
    mesh: &'m Mesh,
    cfg: SchemeConfig,
    stencils: Vec<VertexStencil>,
    interp_diag: InterpDiagnostics,
    interpolator: VertexInterpolator,
    /// BC index per boundary tag.
    bc_of_tag: Vec<usize>,
    /// Mean diameter of the cells adjacent to each face.
    face_h: Vec<f64>,
}

impl<'m> Solver<'m> {
    pub fn new(mesh: &'m Mesh, mut cfg: SchemeConfig) -> Result<Self, SolverError> {
        cfg.recon.dim = mesh.dim();
        match (cfg.model, cfg.flux.is_euler()) {
            (Model::Euler(_), false) => {
                return Err(SolverError::Config(format!("flux '{}' is not an Euler flux (use roe or kfvs)", cfg.flux)))
            }
            (Model::Scalar(_), true) => {
                return Err(SolverError::Config(format!(
                    "flux '{}' needs the Euler model (scalar fluxes: upwind, godunov, engquist-osher)",
                    cfg.flux
                )))
            }
            _ => {}
        }
        let t = &cfg.time;
        if !(t.cfl > 0.0) || t.fixed_dt.is_some_and(|dt| !(dt > 0.0)) || !(t.t_end >= 0.0) {
            return Err(SolverError::Config("cfl and fixed_dt must be positive and t_end non-negative".into()));
        }
        let mut bc_of_tag = Vec::with_capacity(mesh.boundary_tags().len());
        for tag in mesh.boundary_tags() {
            let hits: Vec<usize> = (0..cfg.boundary.len()).filter(|&k| &cfg.boundary[k].tag == tag).collect();
            match hits.as_slice() {
                [k] => bc_of_tag.push(*k),
                [] => return Err(SolverError::Config(format!("no boundary condition for tag '{tag}'"))),
                _ => return Err(SolverError::Config(format!("several boundary conditions for tag '{tag}'"))),
            }
        }
        let nvar = cfg.model.nvar();
        for bc in &cfg.boundary {
            let tag_in_mesh = mesh.boundary_tags().iter().any(|t| t == &bc.tag);
            if !tag_in_mesh && bc.kind != BcKind::Periodic {
                return Err(SolverError::Config(format!("boundary tag '{}' does not exist in the mesh", bc.tag)));
            }
            if tag_in_mesh && bc.kind == BcKind::Periodic {
                return Err(SolverError::Config(format!("periodic tag '{}' was not paired", bc.tag)));
            }
            let needs_data = matches!(bc.kind, BcKind::SupersonicInflow | BcKind::DirichletScalar);
            if needs_data && bc.data.len() != nvar {
                return Err(SolverError::Config(format!(
                    "boundary '{}' ({}) needs {nvar} value(s), got {}",
                    bc.tag,
                    bc.kind,
                    bc.data.len()
                )));
            }
            match (bc.kind, cfg.model) {
                (BcKind::SlipWall | BcKind::SupersonicInflow, Model::Scalar(_)) | (BcKind::DirichletScalar, Model::Euler(_)) => {
                    return Err(SolverError::Config(format!("boundary kind {} does not fit the model", bc.kind)))
                }
                (BcKind::SupersonicInflow, Model::Euler(_)) => {
                    EulerPrimitive::from_slice(&bc.data)
                        .check()
                        .map_err(|e| SolverError::Config(format!("inflow state for '{}': {e}", bc.tag)))?;
                }
                _ => {}
            }
        }
        let (stencils, interp_diag) = build_all_stencils(mesh, cfg.interp)?;
        let interpolator = VertexInterpolator::new(&stencils, mesh.n_cells())?;
        let face_h = mesh
            .faces()
            .iter()
            .map(|f| match f.right_cell() {
                Some(r) => 0.5 * (mesh.cells()[f.left].diameter + mesh.cells()[r].diameter),
                None => mesh.cells()[f.left].diameter,
            })
            .collect();
        Ok(Solver { mesh, cfg, stencils, interp_diag, interpolator, bc_of_tag, face_h })
    }

    pub fn mesh(&self) -> &Mesh {
        self.mesh
    }
    pub fn config(&self) -> &SchemeConfig {
        &self.cfg
    }
    pub fn stencils(&self) -> &[VertexStencil] {
        &self.stencils
    }
    pub fn interp_diagnostics(&self) -> &InterpDiagnostics {
        &self.interp_diag
    }
    pub fn nvar(&self) -> usize {
        self.cfg.model.nvar()
    }

    pub fn boundary_condition(&self, face: &Face) -> Option<&BoundaryCondition> {
        match face.right {
            FaceSide::Boundary(tag) => Some(&self.cfg.boundary[self.bc_of_tag[tag]]),
            FaceSide::Cell(_) => None,
        }
    }

    /// Field set from per-cell states given in primitive variables
    /// (the scalar itself for scalar models).
    pub fn fields_from_primitive(&self, prim: Vec<f64>) -> Result<FieldSet, SolverError> {
        let nvar = self.nvar();
        if prim.len() != self.mesh.n_cells() * nvar {
            return Err(SolverError::Config(format!(
                "initial state has {} values, expected {}",
                prim.len(),
                self.mesh.n_cells() * nvar
            )));
        }
        let cell_values = match self.cfg.model {
            Model::Scalar(_) => prim.clone(),
            Model::Euler(gas) => {
                let mut u = vec![0.0; prim.len()];
                for (i, (w, c)) in prim.chunks(5).zip(u.chunks_mut(5)).enumerate() {
                    let cons = prim_to_cons(&EulerPrimitive::from_slice(w), &gas)
                        .map_err(|source| SolverError::CellState { cell: i, source })?;
                    c.copy_from_slice(&cons.to_array());
                }
                u
            }
        };
        let mut f = FieldSet {
            nvar,
            cell_values,
            cell_primitive: prim,
            vertex_values: vec![0.0; self.mesh.n_vertices() * nvar],
            time: 0.0,
            step: 0,
        };
        self.update_vertex_values(&mut f)?;
        Ok(f)
    }

    /// Refreshes the primitive mirror from the conserved values.
    pub fn update_primitive(&self, f: &mut FieldSet) -> Result<(), SolverError> {
        match self.cfg.model {
            Model::Scalar(_) => f.cell_primitive.copy_from_slice(&f.cell_values),
            Model::Euler(gas) => {
                let errors: Vec<Option<PhysicsError>> = f
                    .cell_primitive
                    .par_chunks_mut(5)
                    .zip(f.cell_values.par_chunks(5))
                    .map(|(w, u)| match cons_to_prim(&EulerConserved::from_slice(u), &gas) {
                        Ok(p) => {
                            w.copy_from_slice(&p.to_array());
                            None
                        }
                        Err(e) => Some(e),
                    })
                    .collect();
                if let Some((cell, source)) = errors.into_iter().enumerate().find_map(|(i, e)| e.map(|e| (i, e))) {
                    return Err(SolverError::CellState { cell, source });
                }
            }
        }
        Ok(())
    }

    pub fn update_vertex_values(&self, f: &mut FieldSet) -> Result<(), SolverError> {
        self.interpolator.interpolate_into(&f.cell_primitive, f.nvar, &mut f.vertex_values)?;
        Ok(())
    }

    fn face_flux(&self, fi: usize, f: &FieldSet) -> Result<[f64; 5], SolverError> {
        let face = &self.mesh.faces()[fi];
        let nvar = f.nvar;
        let dim = self.mesh.dim();
        let vert = |v: usize, k: usize| f.vertex_values[v * nvar + k];
        let w_face = |k: usize| face.vertex_ids(dim).iter().map(|&v| vert(v, k)).sum::<f64>() / dim as f64;
        let ui = f.primitive(face.left);
        let mut a = [0.0; 5];
        let mut b = [0.0; 5];
        match face.right {
            FaceSide::Cell(j) => {
                let uj = f.primitive(j);
                let opp_r = face.opp_right.expect("interior face");
                for k in 0..nvar {
                    let inp = FaceInput {
                        u_i: ui[k],
                        u_j: uj[k],
                        v_ij: vert(face.opp_left, k),
                        v_ji: vert(opp_r, k),
                        w_ij: w_face(k),
                        h_face: self.face_h[fi],
                    };
                    let s = reconstruct(&inp, &self.cfg.recon);
                    a[k] = s.u_plus;
                    b[k] = s.u_minus;
                }
            }
            FaceSide::Boundary(_) => {
                for k in 0..nvar {
                    a[k] = reconstruct_boundary(ui[k], vert(face.opp_left, k), w_face(k), &self.cfg.recon);
                }
                let bc = self.boundary_condition(face).expect("boundary face");
                apply_boundary_state(face.normal.normalized(), &a[..nvar], bc, &mut b[..nvar]);
            }
        }
        match self.cfg.model {
            Model::Scalar(m) => {
                let h = scalar_numerical_flux(self.cfg.flux, a[0], b[0], face.normal, &m);
                Ok([h.flux, 0.0, 0.0, 0.0, 0.0])
            }
            Model::Euler(gas) => {
                let (wl, wr) = (EulerPrimitive::from_slice(&a), EulerPrimitive::from_slice(&b));
                euler_numerical_flux(self.cfg.flux, &wl, &wr, face.normal, &gas)
                    .map(|r| r.flux)
                    .map_err(|source| SolverError::FaceState { face: fi, source })
            }
        }
    }

    /// Right-hand side of `|C_i| dU_i/dt = -sum_j H_ij`. Refreshes the
    /// primitive mirror and vertex values of `f` first.
    pub fn assemble_residual(&self, f: &mut FieldSet) -> Result<Residual, SolverError> {
        self.update_primitive(f)?;
        self.update_vertex_values(f)?;
        let nvar = f.nvar;
        let fields: &FieldSet = f;
        // collecting into a Vec keeps the first failing face deterministic
        let fluxes: Vec<Result<[f64; 5], SolverError>> =
            (0..self.mesh.faces().len()).into_par_iter().map(|fi| self.face_flux(fi, fields)).collect();
        let fluxes: Vec<[f64; 5]> = fluxes.into_iter().collect::<Result<_, _>>()?;
        let mut values = vec![0.0; self.mesh.n_cells() * nvar];
        values.par_chunks_mut(nvar).enumerate().for_each(|(i, r)| {
            for cf in self.mesh.cell_faces(i) {
                let h = &fluxes[cf.face];
                let s = if cf.is_left { -1.0 } else { 1.0 };
                for k in 0..nvar {
                    r[k] += s * h[k];
                }
            }
        });
        let mut boundary_outflow = vec![0.0; nvar];
        for (face, h) in self.mesh.faces().iter().zip(&fluxes) {
            if face.is_boundary() {
                for k in 0..nvar {
                    boundary_outflow[k] += h[k];
                }
            }
        }
        Ok(Residual { values, boundary_outflow })
    }

    /// `dt = cfl min_i |C_i| / sum_j lambda_ij |S_ij|`, or the fixed step.
    pub fn compute_time_step(&self, f: &FieldSet) -> Result<f64, SolverError> {
        if let Some(dt) = self.cfg.time.fixed_dt {
            return Ok(dt);
        }
        Ok(self.stable_time_step(f)? * self.cfg.time.cfl)
    }

    /// Largest step at CFL number one, `min_i |C_i| / sum_j lambda_ij |S_ij|`.
    pub fn stable_time_step(&self, f: &FieldSet) -> Result<f64, SolverError> {
        let nvar = f.nvar;
        let speeds: Vec<f64> = self
            .mesh
            .faces()
            .par_iter()
            .map(|face| {
                let nu = face.normal.normalized();
                let ui = f.primitive(face.left);
                let mut ghost = [0.0; 5];
                let uj: &[f64] = match face.right {
                    FaceSide::Cell(j) => f.primitive(j),
                    FaceSide::Boundary(_) => {
                        let bc = self.boundary_condition(face).expect("boundary face");
                        apply_boundary_state(nu, ui, bc, &mut ghost[..nvar]);
                        &ghost[..nvar]
                    }
                };
                let speed = |w: &[f64]| match self.cfg.model {
                    Model::Scalar(m) => m.wave_speed(w[0], nu),
                    Model::Euler(gas) => max_wave_speed(&EulerPrimitive::from_slice(w), nu, &gas),
                };
                speed(ui).max(speed(uj))
            })
            .collect();
        let mut dt = f64::INFINITY;
        for (i, cell) in self.mesh.cells().iter().enumerate() {
            let sum: f64 = self.mesh.cell_faces(i).iter().map(|cf| speeds[cf.face] * self.mesh.faces()[cf.face].area()).sum();
            if sum.is_nan() {
                return Err(SolverError::TimeStep { time: f.time });
            }
            if sum > 0.0 {
                dt = dt.min(cell.measure / sum);
            }
        }
        if dt.is_nan() || dt <= 0.0 {
            return Err(SolverError::TimeStep { time: f.time });
        }
        Ok(dt)
    }

    fn euler_update(&self, u: &mut [f64], r: &Residual, dt: f64) {
        let nvar = self.nvar();
        u.par_chunks_mut(nvar).zip(r.values.par_chunks(nvar)).zip(self.mesh.cells().par_iter()).for_each(
            |((u, r), c)| {
                for k in 0..nvar {
                    u[k] += dt / c.measure * r[k];
                }
            },
        );
    }

    /// `U_i <- U_i + dt / |C_i| R_i`. Returns the boundary outflow used.
    pub fn step_forward_euler(&self, f: &mut FieldSet, dt: f64) -> Result<Vec<f64>, SolverError> {
        let r = self.assemble_residual(f)?;
        self.euler_update(&mut f.cell_values, &r, dt);
        self.update_primitive(f)?;
        f.time += dt;
        f.step += 1;
        Ok(r.boundary_outflow)
    }

    /// Three-stage SSP Runge-Kutta in Shu-Osher form. Returns the
    /// stage-weighted boundary outflow (weights 1/6, 1/6, 2/3).
    pub fn step_ssprk3(&self, f: &mut FieldSet, dt: f64) -> Result<Vec<f64>, SolverError> {
        let u0 = f.cell_values.clone();
        let r0 = self.assemble_residual(f)?;
        self.euler_update(&mut f.cell_values, &r0, dt);

        let r1 = self.assemble_residual(f)?;
        self.euler_update(&mut f.cell_values, &r1, dt);
        f.cell_values.par_iter_mut().zip(u0.par_iter()).for_each(|(u, u0)| *u = 0.75 * u0 + 0.25 * *u);

        let r2 = self.assemble_residual(f)?;
        self.euler_update(&mut f.cell_values, &r2, dt);
        f.cell_values.par_iter_mut().zip(u0.par_iter()).for_each(|(u, u0)| *u = u0 / 3.0 + 2.0 / 3.0 * *u);

        self.update_primitive(f)?;
        f.time += dt;
        f.step += 1;
        let out = (0..f.nvar)
            .map(|k| r0.boundary_outflow[k] / 6.0 + r1.boundary_outflow[k] / 6.0 + 2.0 / 3.0 * r2.boundary_outflow[k])
            .collect();
        Ok(out)
    }

    pub fn step(&self, f: &mut FieldSet, dt: f64) -> Result<Vec<f64>, SolverError> {
        match self.cfg.time.integrator {
            Integrator::ForwardEuler => self.step_forward_euler(f, dt),
            Integrator::Ssprk3 => self.step_ssprk3(f, dt),
        }
    }

    /// Cell-by-cell bounds `[min, max]` of `{U_i, U_j, V_ij, ghost states}`
    /// for the first variable of `f` (vertex values recomputed from `f`).
    pub fn local_bounds(&self, f: &FieldSet) -> Result<Vec<(f64, f64)>, SolverError> {
        let nvar = f.nvar;
        let mut vertex = vec![0.0; self.mesh.n_vertices() * nvar];
        self.interpolator.interpolate_into(&f.cell_primitive, nvar, &mut vertex)?;
        let dim = self.mesh.dim();
        Ok((0..self.mesh.n_cells())
            .into_par_iter()
            .map(|i| {
                let ui = f.primitive(i)[0];
                let (mut lo, mut hi) = (ui, ui);
                let mut take = |v: f64| {
                    lo = lo.min(v);
                    hi = hi.max(v);
                };
                for &v in self.mesh.cells()[i].vertex_ids(dim) {
                    take(vertex[v * nvar]);
                }
                for cf in self.mesh.cell_faces(i) {
                    let face = &self.mesh.faces()[cf.face];
                    match face.right {
                        FaceSide::Cell(_) => {
                            let j = other_cell(face, *cf);
                            take(f.primitive(j)[0]);
                        }
                        FaceSide::Boundary(_) => {
                            let bc = self.boundary_condition(face).expect("boundary face");
                            let mut g = [0.0; 5];
                            apply_boundary_state(face.normal.normalized(), f.primitive(i), bc, &mut g[..nvar]);
                            take(g[0]);
                        }
                    }
                }
                (lo, hi)
            })
            .collect())
    }

    /// Advances to `t_end` (or `max_steps`), calling `observer` after the
    /// initial state and after every step.
    pub fn run(&self, f: &mut FieldSet, observer: &mut dyn RunObserver) -> Result<MonitorReport, SolverError> {
        let t_end = self.cfg.time.t_end;
        let mut report = MonitorReport::default();
        let mut conservation = ConservationTracker::new(self.mesh, f);
        report.observe_positivity(f);
        observer.on_start(self, f)?;
        let watch_bounds = self.cfg.monitor_max_principle && !self.cfg.model.is_euler();
        while f.time < t_end && f.step < self.cfg.time.max_steps {
            let wrap = |e: SolverError, f: &FieldSet| SolverError::Step { step: f.step + 1, time: f.time, source: Box::new(e) };
            let mut dt = self.compute_time_step(f).map_err(|e| wrap(e, f))?;
            if f.time + dt > t_end {
                dt = t_end - f.time;
            }
            let bounds = if watch_bounds { Some(self.local_bounds(f).map_err(|e| wrap(e, f))?) } else { None };
            let outflow = self.step(f, dt).map_err(|e| wrap(e, f))?;
            if t_end - f.time < 1e-14 * t_end.abs() {
                f.time = t_end;
            }
            conservation.record_outflow(&outflow, dt);
            if let Some(b) = bounds {
                report.record_max_principle(f, &b);
            }
            report.observe_positivity(f);
            observer.on_step(self, f)?;
        }
        report.steps = f.step;
        report.final_time = f.time;
        report.conserved_drift = conservation.relative_drift(self.mesh, f);
        Ok(report)
    }
}

fn other_cell(face: &Face, cf: CellFace) -> usize {
    if cf.is_left {
        face.right_cell().expect("interior face")
    } else {
        face.left
    }
}

/// Hooks for snapshot output during [`Solver::run`].
pub trait RunObserver {
    fn on_start(&mut self, _solver: &Solver, _fields: &FieldSet) -> Result<(), SolverError> {
        Ok(())
    }
    fn on_step(&mut self, _solver: &Solver, _fields: &FieldSet) -> Result<(), SolverError> {
        Ok(())
    }
}

/// Observer that does nothing.
pub struct NoOutput;

impl RunObserver for NoOutput {}
