//! Run set-up: mesh source, initial conditions, probes and the driver that
//! ties them to the solver.

use std::path::PathBuf;

use crate::geom::Vec3;
use crate::mesh::{generate_box, load_gmsh, BoxSpec, FaceSide, Mesh, MeshError};
use crate::physics::EulerPrimitive;
use crate::solver::{FieldSet, Model, MonitorReport, RunObserver, SchemeConfig, Solver, SolverError};

/// Gas constant of air used to turn the blast temperatures into pressures.
pub const AIR_GAS_CONSTANT: f64 = 287.0;

#[derive(Debug, Clone, PartialEq)]
pub enum MeshSource {
    Box(BoxSpec),
    Gmsh(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeshSpec {
    pub source: MeshSource,
    /// Boundary tag pairs `(from, to)` glued by translation.
    pub periodic: Vec<(String, String)>,
}

impl MeshSpec {
    pub fn boxed(spec: BoxSpec) -> Self {
        MeshSpec { source: MeshSource::Box(spec), periodic: Vec::new() }
    }

    pub fn gmsh(path: impl Into<PathBuf>) -> Self {
        MeshSpec { source: MeshSource::Gmsh(path.into()), periodic: Vec::new() }
    }

    /// Box periodic along every axis.
    pub fn periodic_box(spec: BoxSpec) -> Self {
        let axes = ["x", "y", "z"];
        let periodic = (0..spec.dim).map(|a| (format!("{}min", axes[a]), format!("{}max", axes[a]))).collect();
        MeshSpec { source: MeshSource::Box(spec), periodic }
    }

    pub fn build(&self) -> Result<Mesh, MeshError> {
        let mut mesh = match &self.source {
            MeshSource::Box(spec) => generate_box(spec)?,
            MeshSource::Gmsh(path) => load_gmsh(path)?,
        };
        for (from, to) in &self.periodic {
            let shift = tag_centre(&mesh, to)? - tag_centre(&mesh, from)?;
            let (lo, hi) = mesh.bounding_box();
            let tol = 1e-9 * (hi - lo).max_abs().max(1.0);
            mesh.make_periodic(from, to, shift, tol)?;
        }
        Ok(mesh)
    }
}

/// Area-weighted centre of the faces carrying `tag`.
fn tag_centre(mesh: &Mesh, tag: &str) -> Result<Vec3, MeshError> {
    let mut sum = Vec3::ZERO;
    let mut area = 0.0;
    for f in mesh.faces() {
        if let FaceSide::Boundary(t) = f.right {
            if mesh.tag_name(t) == tag {
                sum += f.area() * f.midpoint;
                area += f.area();
            }
        }
    }
    if area > 0.0 {
        Ok(sum / area)
    } else {
        Err(MeshError::Periodic(format!("no boundary faces tagged '{tag}'")))
    }
}

/// Scalar profiles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    /// `mean + amplitude sin(2 pi wave . x)`
    Sine { mean: f64, amplitude: f64, wave: Vec3 },
    /// `inside` where `lo <= normal . x < hi`, `outside` elsewhere.
    Band { normal: Vec3, lo: f64, hi: f64, inside: f64, outside: f64 },
    Gaussian { center: Vec3, width: f64, amplitude: f64, background: f64 },
    /// `c + g . x`
    Linear { c: f64, g: Vec3 },
}

impl Profile {
    pub fn eval(&self, x: Vec3) -> f64 {
        match *self {
            Profile::Sine { mean, amplitude, wave } => mean + amplitude * (std::f64::consts::TAU * wave.dot(&x)).sin(),
            Profile::Band { normal, lo, hi, inside, outside } => {
                let s = normal.dot(&x);
                if s >= lo && s < hi {
                    inside
                } else {
                    outside
                }
            }
            Profile::Gaussian { center, width, amplitude, background } => {
                background + amplitude * (-(x - center).norm_sq() / (width * width)).exp()
            }
            Profile::Linear { c, g } => c + g.dot(&x),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    /// `normal . x < offset`
    HalfSpace { normal: Vec3, offset: f64 },
    Ball { center: Vec3, radius: f64 },
}

impl Region {
    pub fn contains(&self, x: Vec3) -> bool {
        match *self {
            Region::HalfSpace { normal, offset } => normal.dot(&x) < offset,
            Region::Ball { center, radius } => (x - center).norm() < radius,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlastSpec {
    pub center: Vec3,
    pub radius: f64,
    pub density: f64,
    pub core_temperature: f64,
    pub ambient_temperature: f64,
    pub gas_constant: f64,
}

impl Default for BlastSpec {
    fn default() -> Self {
        BlastSpec {
            center: Vec3::ZERO,
            radius: 5.0,
            density: 1.228,
            core_temperature: 8.1e7,
            ambient_temperature: 298.0,
            gas_constant: AIR_GAS_CONSTANT,
        }
    }
}

impl BlastSpec {
    pub fn core_pressure(&self) -> f64 {
        self.density * self.gas_constant * self.core_temperature
    }

    pub fn ambient_pressure(&self) -> f64 {
        self.density * self.gas_constant * self.ambient_temperature
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// Two Euler states split by the plane `x[axis] = position`.
    ShockTube { left: EulerPrimitive, right: EulerPrimitive, axis: usize, position: f64 },
    Blast(BlastSpec),
    Scalar(Profile),
    /// Primitive state (or the scalar) everywhere.
    Uniform(Vec<f64>),
    /// Later regions override earlier ones.
    Piecewise { default: Vec<f64>, regions: Vec<(Region, Vec<f64>)> },
}

/// Shock-tube data `(rho, u, p)` for the left and right states.
pub fn shock_tube(left: [f64; 3], right: [f64; 3]) -> InitialCondition {
    let mk = |s: [f64; 3]| EulerPrimitive::new(s[0], Vec3::new(s[1], 0.0, 0.0), s[2]);
    InitialCondition::ShockTube { left: mk(left), right: mk(right), axis: 0, position: 0.5 }
}

pub fn sod() -> InitialCondition {
    shock_tube([1.0, 0.0, 1.0], [0.125, 0.0, 0.1])
}

/// Two rarefactions moving apart, leaving a near-vacuum in the middle.
pub fn test2() -> InitialCondition {
    shock_tube([1.0, -2.0, 0.4], [1.0, 2.0, 0.4])
}

pub fn blast() -> InitialCondition {
    InitialCondition::Blast(BlastSpec::default())
}

/// Cube of side 81 centred on the origin with `n` cells per side.
pub fn blast_domain(n: usize) -> BoxSpec {
    BoxSpec::new(3, &[81.0, 81.0, 81.0], &[n, n, n]).with_origin(Vec3::new(-40.5, -40.5, -40.5))
}

/// Unit-length channel `1 x 0.1 x 0.1` with `n` axial cells.
pub fn channel_domain(n: usize) -> BoxSpec {
    let m = (n / 25).max(1);
    BoxSpec::new(3, &[1.0, 0.1, 0.1], &[n, m, m])
}

impl InitialCondition {
    /// Primitive state (or scalar) at point `x`.
    pub fn state_at(&self, x: Vec3) -> Vec<f64> {
        match self {
            InitialCondition::ShockTube { left, right, axis, position } => {
                if x[*axis] < *position {
                    left.to_array().to_vec()
                } else {
                    right.to_array().to_vec()
                }
            }
            InitialCondition::Blast(b) => {
                let p = if (x - b.center).norm() < b.radius { b.core_pressure() } else { b.ambient_pressure() };
                vec![b.density, 0.0, 0.0, 0.0, p]
            }
            InitialCondition::Scalar(p) => vec![p.eval(x)],
            InitialCondition::Uniform(v) => v.clone(),
            InitialCondition::Piecewise { default, regions } => {
                regions.iter().rev().find(|(r, _)| r.contains(x)).map_or(default, |(_, v)| v).clone()
            }
        }
    }

    pub fn is_euler(&self) -> Option<bool> {
        match self {
            InitialCondition::ShockTube { .. } | InitialCondition::Blast(_) => Some(true),
            InitialCondition::Scalar(_) => Some(false),
            InitialCondition::Uniform(v) => Some(v.len() == 5),
            InitialCondition::Piecewise { default, .. } => Some(default.len() == 5),
        }
    }

    /// Per-cell primitive values sampled at the centroids.
    pub fn sample(&self, mesh: &Mesh, model: &Model) -> Result<Vec<f64>, SolverError> {
        if self.is_euler() != Some(model.is_euler()) {
            return Err(SolverError::Config("initial condition does not match the model".into()));
        }
        let nvar = model.nvar();
        let mut out = Vec::with_capacity(mesh.n_cells() * nvar);
        for c in mesh.cells() {
            let s = self.state_at(c.centroid);
            if s.len() != nvar {
                return Err(SolverError::Config(format!("initial state has {} components, expected {nvar}", s.len())));
            }
            out.extend_from_slice(&s);
        }
        Ok(out)
    }
}

/// Straight sampling line: points `start + s/|direction| direction` for
/// `samples` values of `s` spread evenly over `[0, |direction|]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineProbe {
    pub name: String,
    pub start: Vec3,
    pub direction: Vec3,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSample {
    pub s: f64,
    pub point: Vec3,
    pub cell: usize,
}

impl LineProbe {
    pub fn points(&self) -> Vec<(f64, Vec3)> {
        let len = self.direction.norm();
        (0..self.samples)
            .map(|k| {
                let f = if self.samples > 1 { k as f64 / (self.samples - 1) as f64 } else { 0.0 };
                (f * len, self.start + f * self.direction)
            })
            .collect()
    }

    /// Nearest-cell samples for points inside the mesh bounding box.
    pub fn sample(&self, mesh: &Mesh) -> Vec<ProbeSample> {
        let (lo, hi) = mesh.bounding_box();
        let tol = 1e-12 * (hi - lo).max_abs().max(1.0);
        let dim = mesh.dim();
        self.points()
            .into_iter()
            .filter(|(_, p)| (0..dim).all(|k| p[k] >= lo[k] - tol && p[k] <= hi[k] + tol))
            .map(|(s, point)| ProbeSample { s, point, cell: mesh.nearest_cell(point) })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputSpec {
    pub directory: Option<PathBuf>,
    /// Write a snapshot every this many steps (0: initial and final only).
    pub snapshot_interval: usize,
    pub line_probes: Vec<LineProbe>,
    /// Probes written at every snapshot, for blast-radius tracking.
    pub radial_probes: Vec<LineProbe>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mesh: MeshSpec,
    pub scheme: SchemeConfig,
    pub initial: InitialCondition,
    pub output: OutputSpec,
    /// Seed for randomized mesh perturbation.
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub mesh: Mesh,
    pub fields: FieldSet,
    pub report: MonitorReport,
}

/// Builds the mesh and runs the case to completion.
pub fn run(cfg: &RunConfig, observer: &mut dyn RunObserver) -> Result<RunOutcome, crate::Error> {
    let mesh = cfg.mesh.build()?;
    let (fields, report) = {
        let solver = Solver::new(&mesh, cfg.scheme.clone())?;
        let prim = cfg.initial.sample(&mesh, &cfg.scheme.model)?;
        let mut fields = solver.fields_from_primitive(prim)?;
        let report = solver.run(&mut fields, observer)?;
        (fields, report)
    };
    Ok(RunOutcome { mesh, fields, report })
}
