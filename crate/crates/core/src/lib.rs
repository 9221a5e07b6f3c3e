//! Vertex-centroid finite volume schemes for conservation laws on
//! triangular and tetrahedral grids.
//!
//! Cell values are interpolated to the vertices ([`interp`]), face states
//! are rebuilt from cell, vertex and face-average values ([`recon`]) and
//! fed to a numerical flux ([`flux`]). [`solver`] assembles and advances
//! the scheme; [`verify`] holds the exact solutions used to check it.

pub mod case;
pub mod flux;
pub mod geom;
pub mod interp;
pub mod mesh;
pub mod physics;
pub mod recon;
pub mod solver;
pub mod verify;

pub use case::{run, InitialCondition, LineProbe, MeshSource, MeshSpec, OutputSpec, Profile, RunConfig, RunOutcome};
pub use flux::{FluxResult, FluxScheme};
pub use geom::Vec3;
pub use interp::{InterpDiagnostics, InterpScheme, VertexStencil};
pub use mesh::{generate_box, BoxSpec, Diagonal, Mesh, MeshError, MeshReport};
pub use physics::{EulerConserved, EulerPrimitive, GasModel, PhysicsError, ScalarModel};
pub use recon::{ReconConfig, ReconScheme};
pub use solver::{
    BcKind, BoundaryCondition, FieldSet, Integrator, Model, MonitorReport, RunObserver, SchemeConfig, Solver,
    SolverError, TimeControls,
};
pub use verify::VerifyError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("mesh: {0}")]
    Mesh(#[from] MeshError),
    #[error("interpolation: {0}")]
    Interp(#[from] interp::InterpError),
    #[error("solver: {0}")]
    Solver(#[from] SolverError),
    #[error("physics: {0}")]
    Physics(#[from] PhysicsError),
    #[error("verify: {0}")]
    Verify(#[from] VerifyError),
}
