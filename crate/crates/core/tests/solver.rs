use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vcfv_core::case::{channel_domain, sod};
use vcfv_core::solver::*;
use vcfv_core::*;

fn gas() -> GasModel {
    GasModel::new(1.4).unwrap()
}

fn euler_scheme(recon: ReconScheme, limited: bool, flux: FluxScheme, boundary: Vec<BoundaryCondition>) -> SchemeConfig {
    SchemeConfig {
        model: Model::Euler(gas()),
        interp: InterpScheme::ConsistentShepard,
        recon: ReconConfig::new(recon, limited, 3),
        flux,
        boundary,
        time: TimeControls { t_end: 1.0, ..TimeControls::default() },
        monitor_max_principle: false,
    }
}

fn advection_scheme(recon: ReconScheme, limited: bool, velocity: Vec3) -> SchemeConfig {
    SchemeConfig {
        model: Model::Scalar(ScalarModel::Advection { velocity }),
        interp: InterpScheme::ConsistentShepard,
        recon: ReconConfig::new(recon, limited, 2),
        flux: FluxScheme::Upwind,
        boundary: vec![],
        time: TimeControls { t_end: 1.0, integrator: Integrator::ForwardEuler, ..TimeControls::default() },
        monitor_max_principle: true,
    }
}

fn channel_bcs() -> Vec<BoundaryCondition> {
    let mut bcs = vec![BoundaryCondition::new("xmin", BcKind::Transmissive), BoundaryCondition::new("xmax", BcKind::Transmissive)];
    for t in ["ymin", "ymax", "zmin", "zmax"] {
        bcs.push(BoundaryCondition::new(t, BcKind::SlipWall));
    }
    bcs
}

fn all_tags(kind: BcKind, dim: usize) -> Vec<BoundaryCondition> {
    let tags = ["xmin", "xmax", "ymin", "ymax", "zmin", "zmax"];
    tags[..2 * dim].iter().map(|t| BoundaryCondition::new(t, kind)).collect()
}

fn periodic_square(n: usize, perturb: f64) -> Mesh {
    let spec = BoxSpec::new(2, &[1.0, 1.0], &[n, n]).with_split(Diagonal::Alternating).with_perturbation(perturb, 11);
    MeshSpec::periodic_box(spec).build().unwrap()
}

fn uniform(n_cells: usize, w: &[f64]) -> Vec<f64> {
    w.iter().copied().cycle().take(n_cells * w.len()).collect()
}

#[test]
fn free_stream_is_preserved_in_channel() {
    let mesh = generate_box(&channel_domain(25)).unwrap();
    for (recon, flux) in [(ReconScheme::Upwind, FluxScheme::Roe), (ReconScheme::Frink, FluxScheme::Kfvs)] {
        let solver = Solver::new(&mesh, euler_scheme(recon, true, flux, channel_bcs())).unwrap();
        let w = [1.2, 0.7, 0.0, 0.0, 0.9];
        let mut f = solver.fields_from_primitive(uniform(mesh.n_cells(), &w)).unwrap();
        let u0 = f.cell_values.clone();
        let dt = solver.compute_time_step(&f).unwrap();
        for _ in 0..100 {
            solver.step(&mut f, dt).unwrap();
        }
        let dev = f.cell_values.iter().zip(&u0).map(|(a, b)| (a - b).abs() / b.abs().max(1.0)).fold(0.0, f64::max);
        assert!(dev <= 1e-11, "{recon}/{flux}: deviation {dev:e}");
    }
}

#[test]
fn free_stream_is_preserved_on_perturbed_box() {
    let mesh = generate_box(&BoxSpec::new(3, &[1.0, 1.0, 1.0], &[4, 4, 4]).with_perturbation(0.25, 5)).unwrap();
    let solver = Solver::new(&mesh, euler_scheme(ReconScheme::Upwind, false, FluxScheme::Roe, all_tags(BcKind::Transmissive, 3))).unwrap();
    let w = [1.0, 0.3, -0.4, 0.2, 1.5];
    let mut f = solver.fields_from_primitive(uniform(mesh.n_cells(), &w)).unwrap();
    let u0 = f.cell_values.clone();
    let dt = solver.compute_time_step(&f).unwrap();
    for _ in 0..100 {
        solver.step(&mut f, dt).unwrap();
    }
    let dev = f.cell_values.iter().zip(&u0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(dev <= 1e-11, "deviation {dev:e}");
}

#[test]
fn residual_telescopes_on_random_fields() {
    let mesh = periodic_square(10, 0.2);
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for (recon, limited) in [(ReconScheme::FirstOrder, false), (ReconScheme::Frink, true), (ReconScheme::Upwind, false)] {
        let solver = Solver::new(&mesh, advection_scheme(recon, limited, Vec3::new(0.8, -0.3, 0.0))).unwrap();
        for _ in 0..5 {
            let u: Vec<f64> = (0..mesh.n_cells()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut f = solver.fields_from_primitive(u).unwrap();
            let r = solver.assemble_residual(&mut f).unwrap();
            let scale: f64 = r.values.iter().map(|v| v.abs()).sum();
            let total: f64 = r.values.iter().sum();
            assert!(total.abs() <= 1e-13 * scale, "{recon}: sum {total:e}");
            assert_eq!(r.boundary_outflow, vec![0.0]);
        }
    }
}

#[test]
fn residual_sum_equals_boundary_outflow() {
    let mesh = generate_box(&channel_domain(25)).unwrap();
    let solver = Solver::new(&mesh, euler_scheme(ReconScheme::Upwind, true, FluxScheme::Roe, channel_bcs())).unwrap();
    let prim = sod().sample(&mesh, &Model::Euler(gas())).unwrap();
    let mut f = solver.fields_from_primitive(prim).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for v in f.cell_values.iter_mut() {
        *v *= 1.0 + 0.01 * rng.gen_range(-1.0..1.0);
    }
    let r = solver.assemble_residual(&mut f).unwrap();
    for k in 0..5 {
        let total: f64 = r.values.iter().skip(k).step_by(5).sum();
        assert!((total + r.boundary_outflow[k]).abs() <= 1e-12, "variable {k}");
    }
}

#[test]
fn time_step_of_single_triangle() {
    let verts = vec![Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0)];
    let mesh = Mesh::from_cells(2, verts, &[vec![0, 1, 2]], &[]).unwrap();
    // rho = gamma, p = 1 at rest: every face sees the sound speed 1
    let mut cfg = euler_scheme(ReconScheme::FirstOrder, false, FluxScheme::Roe, vec![BoundaryCondition::new("boundary", BcKind::Transmissive)]);
    cfg.time.cfl = 1.0;
    let solver = Solver::new(&mesh, cfg.clone()).unwrap();
    let f = solver.fields_from_primitive(vec![1.4, 0.0, 0.0, 0.0, 1.0]).unwrap();
    let dt = solver.compute_time_step(&f).unwrap();
    let expected = 0.5 / (2.0 + 2f64.sqrt());
    assert!((dt - expected).abs() <= 1e-15, "{dt} vs {expected}");

    cfg.time.cfl = 2.0;
    let dt2 = Solver::new(&mesh, cfg.clone()).unwrap().compute_time_step(&f).unwrap();
    assert!((dt2 - 2.0 * dt).abs() <= 1e-15);

    cfg.time.fixed_dt = Some(6e-8);
    assert_eq!(Solver::new(&mesh, cfg).unwrap().compute_time_step(&f).unwrap(), 6e-8);
}

#[test]
fn zero_residual_steps_are_identity() {
    let mesh = periodic_square(6, 0.1);
    for integrator in [Integrator::ForwardEuler, Integrator::Ssprk3] {
        let mut cfg = advection_scheme(ReconScheme::Upwind, true, Vec3::new(1.0, 0.0, 0.0));
        cfg.time.integrator = integrator;
        let solver = Solver::new(&mesh, cfg).unwrap();
        let mut f = solver.fields_from_primitive(vec![0.75; mesh.n_cells()]).unwrap();
        solver.step(&mut f, 0.01).unwrap();
        assert!(f.cell_values.iter().all(|&u| u == 0.75));
    }
}

/// Applies the linear first-order operator `u -> L u` via residual assembly.
fn apply_operator(solver: &Solver, mesh: &Mesh, u: &[f64]) -> Vec<f64> {
    let mut f = solver.fields_from_primitive(u.to_vec()).unwrap();
    let r = solver.assemble_residual(&mut f).unwrap();
    r.values.iter().zip(mesh.cells()).map(|(r, c)| r / c.measure).collect()
}

#[test]
fn ssprk3_matches_third_order_taylor_update() {
    let mesh = periodic_square(6, 0.15);
    let mut cfg = advection_scheme(ReconScheme::FirstOrder, false, Vec3::new(1.0, 0.6, 0.0));
    cfg.time.integrator = Integrator::Ssprk3;
    let solver = Solver::new(&mesh, cfg).unwrap();
    let u0: Vec<f64> = mesh.cells().iter().map(|c| (6.0 * c.centroid.x()).sin() + c.centroid.y()).collect();
    let l1 = apply_operator(&solver, &mesh, &u0);
    let l2 = apply_operator(&solver, &mesh, &l1);
    let l3 = apply_operator(&solver, &mesh, &l2);
    // the SSP-RK3 amplification polynomial is 1 + z + z^2/2 + z^3/6, so a
    // linear operator is matched exactly
    for dt in [0.02, 0.01] {
        let mut f = solver.fields_from_primitive(u0.clone()).unwrap();
        solver.step_ssprk3(&mut f, dt).unwrap();
        for i in 0..u0.len() {
            let taylor = u0[i] + dt * l1[i] + dt * dt / 2.0 * l2[i] + dt.powi(3) / 6.0 * l3[i];
            assert!((f.cell_values[i] - taylor).abs() <= 1e-13, "dt {dt}, cell {i}");
        }
    }
}

#[test]
fn sod_residual_is_local_to_the_jump() {
    let mesh = generate_box(&channel_domain(50)).unwrap();
    let solver = Solver::new(&mesh, euler_scheme(ReconScheme::FirstOrder, false, FluxScheme::Roe, channel_bcs())).unwrap();
    let prim = sod().sample(&mesh, &Model::Euler(gas())).unwrap();
    let left_side: Vec<bool> = mesh.cells().iter().map(|c| c.centroid.x() < 0.5).collect();
    let mut f = solver.fields_from_primitive(prim).unwrap();
    let r = solver.assemble_residual(&mut f).unwrap();
    let mut touched = 0;
    for i in 0..mesh.n_cells() {
        let adjacent = mesh.cell_neighbors(i).iter().any(|&j| left_side[j] != left_side[i]);
        let norm: f64 = r.values[5 * i..5 * i + 5].iter().map(|v| v.abs()).sum();
        if adjacent {
            touched += 1;
        } else {
            assert!(norm <= 1e-13, "cell {i} away from the jump has residual {norm:e}");
        }
    }
    assert!(touched > 0);
}

#[test]
fn closed_slip_box_has_no_mass_outflow() {
    let mesh = generate_box(&BoxSpec::new(3, &[1.0, 1.0, 1.0], &[3, 3, 3]).with_perturbation(0.2, 2)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for flux in [FluxScheme::Roe, FluxScheme::Kfvs] {
        let solver = Solver::new(&mesh, euler_scheme(ReconScheme::Upwind, true, flux, all_tags(BcKind::SlipWall, 3))).unwrap();
        let prim: Vec<f64> = (0..mesh.n_cells())
            .flat_map(|_| [rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.5..2.0)])
            .collect();
        let mut f = solver.fields_from_primitive(prim).unwrap();
        let r = solver.assemble_residual(&mut f).unwrap();
        assert!(r.boundary_outflow[0].abs() <= 1e-12, "{flux}: mass outflow {:e}", r.boundary_outflow[0]);
        assert!(r.boundary_outflow[4].abs() <= 1e-12, "{flux}: energy outflow {:e}", r.boundary_outflow[4]);
    }
}

#[test]
fn transmissive_uniform_state_has_zero_residual() {
    let mesh = generate_box(&BoxSpec::new(2, &[2.0, 1.0], &[8, 4]).with_perturbation(0.2, 4)).unwrap();
    let mut cfg = euler_scheme(ReconScheme::Frink, true, FluxScheme::Kfvs, all_tags(BcKind::Transmissive, 2));
    cfg.recon = ReconConfig::new(ReconScheme::Frink, true, 2);
    let solver = Solver::new(&mesh, cfg).unwrap();
    let mut f = solver.fields_from_primitive(uniform(mesh.n_cells(), &[1.0, 2.0, -1.0, 0.0, 3.0])).unwrap();
    let r = solver.assemble_residual(&mut f).unwrap();
    let worst = r.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-12 * 10.0, "residual {worst:e}");
}

#[test]
fn inflow_ghost_is_the_prescribed_state() {
    let bc = BoundaryCondition::new("xmin", BcKind::SupersonicInflow).with_data(vec![1.0, 0.0, 0.0, 0.0, 1.0]);
    let mut g = [0.0; 5];
    apply_boundary_state(Vec3::new(-1.0, 0.0, 0.0), &[0.125, 0.0, 0.0, 0.0, 0.1], &bc, &mut g);
    assert_eq!(g, [1.0, 0.0, 0.0, 0.0, 1.0]);
}

#[test]
fn missing_boundary_condition_is_a_config_error() {
    let mesh = generate_box(&channel_domain(25)).unwrap();
    let mut bcs = channel_bcs();
    bcs.pop();
    let err = Solver::new(&mesh, euler_scheme(ReconScheme::Upwind, true, FluxScheme::Roe, bcs)).err().unwrap();
    assert!(matches!(err, SolverError::Config(ref m) if m.contains("zmax")), "{err}");
}

fn step_data_run(recon: ReconScheme, limited: bool, integrator: Integrator, steps: usize) -> (MonitorReport, FieldSet) {
    let mesh = periodic_square(16, 0.1);
    let mut cfg = advection_scheme(recon, limited, Vec3::new(1.0, 0.5, 0.0));
    cfg.time = TimeControls { cfl: 0.4, t_end: f64::INFINITY, fixed_dt: None, integrator, max_steps: steps };
    let solver = Solver::new(&mesh, cfg).unwrap();
    let u: Vec<f64> = mesh.cells().iter().map(|c| if (0.25..0.75).contains(&c.centroid.x()) { 1.0 } else { 0.0 }).collect();
    let mut f = solver.fields_from_primitive(u).unwrap();
    let report = solver.run(&mut f, &mut NoOutput).unwrap();
    (report, f)
}

#[test]
fn limited_schemes_obey_the_maximum_principle() {
    for recon in [ReconScheme::FirstOrder, ReconScheme::Upwind, ReconScheme::Frink] {
        let (report, _) = step_data_run(recon, true, Integrator::ForwardEuler, 150);
        assert!(report.max_principle_violations.is_empty(), "{recon}: {report}");
    }
}

#[test]
fn ssprk3_keeps_the_global_bounds() {
    // stages reach past the immediate neighbours, so only the max norm carries over
    for recon in [ReconScheme::FirstOrder, ReconScheme::Upwind, ReconScheme::Frink] {
        let (_, f) = step_data_run(recon, true, Integrator::Ssprk3, 150);
        assert!(f.cell_values.iter().all(|&u| (-1e-12..=1.0 + 1e-12).contains(&u)), "{recon}");
    }
}

#[test]
fn unlimited_frink_violates_the_maximum_principle() {
    let (report, _) = step_data_run(ReconScheme::Frink, false, Integrator::ForwardEuler, 50);
    assert!(!report.max_principle_violations.is_empty());
    let csv = report.violations_csv();
    assert!(csv.starts_with(MonitorReport::CSV_HEADER));
    assert_eq!(csv.lines().count(), report.max_principle_violations.len() + 1);
}

#[test]
fn periodic_advection_conserves_the_total() {
    let (report, _) = step_data_run(ReconScheme::Upwind, true, Integrator::Ssprk3, 300);
    assert!(report.conserved_drift[0] <= 1e-12, "{:e}", report.conserved_drift[0]);
}

#[test]
fn channel_drift_accounts_for_boundary_flux() {
    let mesh = generate_box(&channel_domain(25)).unwrap();
    let mut cfg = euler_scheme(ReconScheme::Upwind, true, FluxScheme::Roe, channel_bcs());
    cfg.time.t_end = 0.3;
    let solver = Solver::new(&mesh, cfg).unwrap();
    // the right state moves out through xmax so the end fluxes matter
    let prim: Vec<f64> = mesh
        .cells()
        .iter()
        .flat_map(|c| if c.centroid.x() < 0.5 { [1.0, 0.5, 0.0, 0.0, 1.0] } else { [0.5, 0.5, 0.0, 0.0, 0.8] })
        .collect();
    let mut f = solver.fields_from_primitive(prim).unwrap();
    let report = solver.run(&mut f, &mut NoOutput).unwrap();
    assert_eq!(report.final_time, 0.3);
    for (k, d) in report.conserved_drift.iter().enumerate() {
        assert!(*d <= 1e-10, "variable {k}: drift {d:e}");
    }
}

#[test]
fn zero_end_time_takes_no_steps() {
    let mesh = periodic_square(4, 0.0);
    let mut cfg = advection_scheme(ReconScheme::Upwind, true, Vec3::new(1.0, 0.0, 0.0));
    cfg.time.t_end = 0.0;
    let solver = Solver::new(&mesh, cfg).unwrap();
    let mut f = solver.fields_from_primitive(vec![1.0; mesh.n_cells()]).unwrap();
    let report = solver.run(&mut f, &mut NoOutput).unwrap();
    assert_eq!((report.steps, report.final_time), (0, 0.0));
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let run_with = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let mesh = generate_box(&channel_domain(25)).unwrap();
            let mut cfg = euler_scheme(ReconScheme::Frink, true, FluxScheme::Roe, channel_bcs());
            cfg.time.max_steps = 20;
            let solver = Solver::new(&mesh, cfg).unwrap();
            let mut f = solver.fields_from_primitive(sod().sample(&mesh, &Model::Euler(gas())).unwrap()).unwrap();
            solver.run(&mut f, &mut NoOutput).unwrap();
            f.cell_values
        })
    };
    let a = run_with(1);
    let b = run_with(4);
    assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
}

#[test]
fn step_errors_carry_context() {
    let mesh = generate_box(&channel_domain(25)).unwrap();
    let mut cfg = euler_scheme(ReconScheme::FirstOrder, false, FluxScheme::Roe, channel_bcs());
    cfg.time.fixed_dt = Some(10.0);
    let solver = Solver::new(&mesh, cfg).unwrap();
    let mut f = solver.fields_from_primitive(sod().sample(&mesh, &Model::Euler(gas())).unwrap()).unwrap();
    let err = solver.run(&mut f, &mut NoOutput).unwrap_err();
    assert!(matches!(err, SolverError::Step { step: 1, .. }), "{err}");
}
