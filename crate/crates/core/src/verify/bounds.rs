//! Audit of the face-value truncation bounds on random simplices with
//! random quadratic fields.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::geom::{signed_measure, Vec3};
use crate::recon::{reconstruct, FaceInput, ReconConfig, ReconScheme};

/// Error constant `C` in `|U+ - U_e| <= C K h^2`.
pub fn bound_constant(scheme: ReconScheme, dim: usize) -> f64 {
    match (scheme, dim) {
        (ReconScheme::Frink, 2) => 11.0 / 24.0,
        (ReconScheme::Upwind, 2) => 3.0 / 8.0,
        (ReconScheme::Frink, 3) => 11.0 / 36.0,
        (ReconScheme::Upwind, 3) => 2.0 / 9.0,
        _ => f64::NAN,
    }
}

/// `U(x) = c + g.x + x^T H x / 2` with a symmetric `H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratic {
    pub c: f64,
    pub g: Vec3,
    pub hessian: [[f64; 3]; 3],
}

impl Quadratic {
    pub fn eval(&self, x: Vec3) -> f64 {
        let mut q = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                q += x[a] * self.hessian[a][b] * x[b];
            }
        }
        self.c + self.g.dot(&x) + 0.5 * q
    }
}

/// Worst error ratio over the faces of one simplex, `|U+ - U_e| / (C K h^2)`.
/// `k` is the Hessian's spectral norm; `k == 0` returns the raw error.
pub fn face_error_ratio(scheme: ReconScheme, dim: usize, pts: &[Vec3], u: &Quadratic, k: f64) -> f64 {
    let nv = dim + 1;
    let centroid = pts[..nv].iter().copied().sum::<Vec3>() / nv as f64;
    let h = pts[..nv].iter().map(|p| (*p - centroid).norm()).fold(0.0, f64::max);
    let cfg = ReconConfig::new(scheme, false, dim);
    let u_i = u.eval(centroid);
    let mut worst: f64 = 0.0;
    for opp in 0..nv {
        let face: Vec<Vec3> = (0..nv).filter(|&l| l != opp).map(|l| pts[l]).collect();
        let mid = face.iter().copied().sum::<Vec3>() / dim as f64;
        let w = face.iter().map(|p| u.eval(*p)).sum::<f64>() / dim as f64;
        let inp = FaceInput { u_i, u_j: u_i, v_ij: u.eval(pts[opp]), v_ji: u_i, w_ij: w, h_face: h };
        let err = (reconstruct(&inp, &cfg).u_plus - u.eval(mid)).abs();
        let ratio = if k > 0.0 { err / (bound_constant(scheme, dim) * k * h * h) } else { err };
        worst = worst.max(ratio);
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeAudit {
    pub scheme: ReconScheme,
    pub constant: f64,
    pub worst_ratio: f64,
    pub worst_trial: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundAudit {
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub schemes: Vec<SchemeAudit>,
}

impl BoundAudit {
    pub fn passes(&self) -> bool {
        self.schemes.iter().all(|s| s.worst_ratio <= 1.0 + 1e-9)
    }
}

fn random_rotation(dim: usize, rng: &mut ChaCha8Rng) -> [Vec3; 3] {
    if dim == 2 {
        let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        return [Vec3::new(t.cos(), t.sin(), 0.0), Vec3::new(-t.sin(), t.cos(), 0.0), Vec3::new(0.0, 0.0, 1.0)];
    }
    loop {
        let mut q = [Vec3::ZERO; 3];
        for v in q.iter_mut() {
            *v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let a = q[0];
        if a.norm() < 0.1 {
            continue;
        }
        let e0 = a.normalized();
        let b = q[1] - q[1].dot(&e0) * e0;
        if b.norm() < 0.1 {
            continue;
        }
        let e1 = b.normalized();
        return [e0, e1, e0.cross(&e1)];
    }
}

/// Random simplex, quadratic and its exact `K` for one trial.
pub fn random_trial(dim: usize, seed: u64, trial: usize) -> (Vec<Vec3>, Quadratic, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let coord = |rng: &mut ChaCha8Rng| if dim == 3 { rng.gen_range(-1.0..1.0) } else { 0.0 };
    let pts = loop {
        let pts: Vec<Vec3> = (0..=dim)
            .map(|_| Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), coord(&mut rng)))
            .collect();
        let longest = pts
            .iter()
            .flat_map(|a| pts.iter().map(move |b| (*a - *b).norm()))
            .fold(0.0, f64::max);
        if signed_measure(dim, &pts).abs() > 1e-4 * longest.powi(dim as i32) {
            break pts;
        }
    };
    let rot = random_rotation(dim, &mut rng);
    let eig: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut hessian = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            hessian[a][b] = (0..dim).map(|l| rot[l][a] * eig[l] * rot[l][b]).sum();
        }
    }
    let k = eig.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let g = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), coord(&mut rng));
    let c = rng.gen_range(-1.0..1.0);
    (pts, Quadratic { c, g, hessian }, k)
}

/// Worst error ratio of the Frink and upwind face values over `trials`
/// random simplices and quadratics.
pub fn quadratic_bound_audit(dim: usize, trials: usize, seed: u64) -> BoundAudit {
    let schemes = [ReconScheme::Frink, ReconScheme::Upwind]
        .into_iter()
        .map(|scheme| {
            let (worst_ratio, worst_trial) = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let (pts, u, k) = random_trial(dim, seed, t);
                    (face_error_ratio(scheme, dim, &pts, &u, k), t)
                })
                .reduce(|| (0.0, 0), |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
            SchemeAudit { scheme, constant: bound_constant(scheme, dim), worst_ratio, worst_trial }
        })
        .collect();
    BoundAudit { dim, trials, seed, schemes }
}
