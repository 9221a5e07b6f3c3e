//! Fixtures shared by the kernel benchmarks.

use vcfv_core::case::{channel_domain, sod};
use vcfv_core::*;

/// Shock tube channel with `cells` axial cells, slip walls on the sides.
pub fn shock_tube(cells: usize, flux: FluxScheme) -> (Mesh, SchemeConfig, InitialCondition) {
    let mesh = generate_box(&channel_domain(cells)).expect("channel mesh");
    let mut boundary = vec![BoundaryCondition::new("xmin", BcKind::Transmissive), BoundaryCondition::new("xmax", BcKind::Transmissive)];
    for t in ["ymin", "ymax", "zmin", "zmax"] {
        boundary.push(BoundaryCondition::new(t, BcKind::SlipWall));
    }
    let scheme = SchemeConfig {
        model: Model::Euler(GasModel::default()),
        interp: InterpScheme::ConsistentShepard,
        recon: ReconConfig::new(ReconScheme::Upwind, true, 3),
        flux,
        boundary,
        time: TimeControls::default(),
        monitor_max_principle: false,
    };
    (mesh, scheme, sod())
}

/// Perturbed unit cube with `n` cells per side.
pub fn cube(n: usize) -> Mesh {
    generate_box(&BoxSpec::new(3, &[1.0, 1.0, 1.0], &[n, n, n]).with_perturbation(0.2, 5)).expect("cube mesh")
}
