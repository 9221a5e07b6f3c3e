//! Face-state reconstruction from cell, vertex and face-average values.
//!
//! Every scheme here is a scalar formula; systems are reconstructed one
//! (primitive) component at a time.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReconScheme {
    FirstOrder,
    /// `U+ = U_i + alpha_d (W_ij - V_ij)`
    Frink,
    /// `U+ = U_i + beta_d (U_i - V_ij)`
    Upwind,
    /// Central limited average of the two one-sided slopes.
    Jameson,
}

impl ReconScheme {
    pub fn name(&self) -> &'static str {
        match self {
            ReconScheme::FirstOrder => "first-order",
            ReconScheme::Frink => "frink",
            ReconScheme::Upwind => "upwind",
            ReconScheme::Jameson => "jameson",
        }
    }
}

impl fmt::Display for ReconScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ReconScheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "first-order" => Ok(ReconScheme::FirstOrder),
            "frink" => Ok(ReconScheme::Frink),
            "upwind" => Ok(ReconScheme::Upwind),
            "jameson" => Ok(ReconScheme::Jameson),
            _ => Err(format!("unknown reconstruction '{s}' (expected first-order, frink, upwind, jameson)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconConfig {
    pub scheme: ReconScheme,
    pub limited: bool,
    pub dim: usize,
    pub jameson_q: f64,
    pub jameson_eps: f64,
}

impl ReconConfig {
    pub fn new(scheme: ReconScheme, limited: bool, dim: usize) -> Self {
        ReconConfig { scheme, limited, dim, jameson_q: 2.0, jameson_eps: 0.05 }
    }

    /// Frink coefficient: 1/3 in 2-D, 1/4 in 3-D.
    pub fn alpha(&self) -> f64 {
        1.0 / (self.dim + 1) as f64
    }

    /// Upwind coefficient: 1/2 in 2-D, 1/3 in 3-D.
    pub fn beta(&self) -> f64 {
        1.0 / self.dim as f64
    }
}

/// Scalar data around one interior face `S_ij`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceInput {
    pub u_i: f64,
    pub u_j: f64,
    /// Vertex of cell i opposite the face.
    pub v_ij: f64,
    /// Vertex of cell j opposite the face.
    pub v_ji: f64,
    /// Mean of the face's vertex values (shared by both sides).
    pub w_ij: f64,
    /// Length scale for the Jameson threshold.
    pub h_face: f64,
}

impl FaceInput {
    fn swapped(&self) -> FaceInput {
        FaceInput { u_i: self.u_j, u_j: self.u_i, v_ij: self.v_ji, v_ji: self.v_ij, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceStates {
    pub u_plus: f64,
    pub u_minus: f64,
    pub theta_ij: f64,
    pub theta_ji: f64,
}

/// `max(0, min(1, 2/r))`, zero for `r <= 0`.
pub fn limiter_theta(r: f64) -> f64 {
    if r <= 0.0 {
        0.0
    } else {
        (2.0 / r).min(1.0)
    }
}

/// Limiter factor when `U_j - U_i` is (nearly) zero; `None` when the ratio is usable.
fn flat_guard(u_i: f64, u_j: f64, du: f64) -> Option<f64> {
    let thr = 1e-14 * u_i.abs().max(u_j.abs()).max(1.0);
    if (u_j - u_i).abs() < thr {
        Some(if du.abs() > thr { 0.0 } else { 1.0 })
    } else {
        None
    }
}

/// Increment ratio `r_ij = dU_ij / ((U_j - U_i) / 2)`.
pub fn increment_ratio(u_i: f64, u_j: f64, du: f64) -> f64 {
    du / (0.5 * (u_j - u_i))
}

/// Limiter for the Frink increment `du`, including the extremum gate.
///
/// Besides `theta(r_ij)` the increment is also limited against the vertex
/// difference through `s = du / (beta (U_i - V_ij))`, which is 1 for linear
/// data. This keeps the coefficient of `V_ij - U_i` below `2 beta` so the
/// forward Euler bound holds under the same CFL number as the upwind scheme.
pub fn theta_frink(u_i: f64, u_j: f64, v_ij: f64, du: f64, beta: f64) -> f64 {
    if let Some(t) = flat_guard(u_i, u_j, du) {
        return t;
    }
    let thr = 1e-14 * u_i.abs().max(u_j.abs()).max(v_ij.abs()).max(1.0);
    if (u_j - u_i) * (u_i - v_ij) <= 0.0 || (u_i - v_ij).abs() < thr {
        return 0.0;
    }
    let s = du / (beta * (u_i - v_ij));
    limiter_theta(increment_ratio(u_i, u_j, du)).min(limiter_theta(s))
}

/// Limiter for the upwind increment `du`.
pub fn theta_upwind(u_i: f64, u_j: f64, du: f64) -> f64 {
    if let Some(t) = flat_guard(u_i, u_j, du) {
        return t;
    }
    limiter_theta(increment_ratio(u_i, u_j, du))
}

pub fn reconstruct_frink(inp: &FaceInput, cfg: &ReconConfig) -> FaceStates {
    let a = cfg.alpha();
    FaceStates {
        u_plus: inp.u_i + a * (inp.w_ij - inp.v_ij),
        u_minus: inp.u_j + a * (inp.w_ij - inp.v_ji),
        theta_ij: 1.0,
        theta_ji: 1.0,
    }
}

pub fn reconstruct_upwind(inp: &FaceInput, cfg: &ReconConfig) -> FaceStates {
    let b = cfg.beta();
    FaceStates {
        u_plus: inp.u_i + b * (inp.u_i - inp.v_ij),
        u_minus: inp.u_j + b * (inp.u_j - inp.v_ji),
        theta_ij: 1.0,
        theta_ji: 1.0,
    }
}

/// `L(a, b) = (a + b)/2 [1 - R(a, b)]` together with `R`.
pub fn jameson_average(a: f64, b: f64, q: f64, threshold: f64) -> (f64, f64) {
    let denom = (a.abs() + b.abs()).max(threshold);
    let r = if denom > 0.0 { ((a - b) / denom).abs().powf(q).min(1.0) } else { 0.0 };
    (0.5 * (a + b) * (1.0 - r), r)
}

pub fn reconstruct_jameson(inp: &FaceInput, cfg: &ReconConfig) -> FaceStates {
    let a = inp.u_i - inp.v_ij;
    let b = inp.v_ji - inp.u_j;
    let (l, r) = jameson_average(a, b, cfg.jameson_q, cfg.jameson_eps * inp.h_face.powf(1.5));
    FaceStates { u_plus: inp.u_i + l / 3.0, u_minus: inp.u_j - l / 3.0, theta_ij: 1.0 - r, theta_ji: 1.0 - r }
}

pub fn limited_frink(inp: &FaceInput, cfg: &ReconConfig) -> FaceStates {
    let (a, b) = (cfg.alpha(), cfg.beta());
    let side = |s: &FaceInput| {
        let du = a * (s.w_ij - s.v_ij);
        let t = theta_frink(s.u_i, s.u_j, s.v_ij, du, b);
        (s.u_i + t * du, t)
    };
    let (u_plus, theta_ij) = side(inp);
    let (u_minus, theta_ji) = side(&inp.swapped());
    FaceStates { u_plus, u_minus, theta_ij, theta_ji }
}

pub fn limited_upwind(inp: &FaceInput, cfg: &ReconConfig) -> FaceStates {
    let b = cfg.beta();
    let side = |s: &FaceInput| {
        let du = b * (s.u_i - s.v_ij);
        let t = theta_upwind(s.u_i, s.u_j, du);
        (s.u_i + t * du, t)
    };
    let (u_plus, theta_ij) = side(inp);
    let (u_minus, theta_ji) = side(&inp.swapped());
    FaceStates { u_plus, u_minus, theta_ij, theta_ji }
}

/// Interior-face reconstruction as selected by `cfg`.
pub fn reconstruct(inp: &FaceInput, cfg: &ReconConfig) -> FaceStates {
    match (cfg.scheme, cfg.limited) {
        (ReconScheme::FirstOrder, _) => FaceStates { u_plus: inp.u_i, u_minus: inp.u_j, theta_ij: 0.0, theta_ji: 0.0 },
        (ReconScheme::Frink, false) => reconstruct_frink(inp, cfg),
        (ReconScheme::Frink, true) => limited_frink(inp, cfg),
        (ReconScheme::Upwind, false) => reconstruct_upwind(inp, cfg),
        (ReconScheme::Upwind, true) => limited_upwind(inp, cfg),
        (ReconScheme::Jameson, _) => reconstruct_jameson(inp, cfg),
    }
}

/// Interior-side state on a boundary face. Limited schemes and the Jameson
/// scheme (which needs both sides) drop to first order.
pub fn reconstruct_boundary(u_i: f64, v_ij: f64, w_ij: f64, cfg: &ReconConfig) -> f64 {
    match (cfg.scheme, cfg.limited) {
        (ReconScheme::Frink, false) => u_i + cfg.alpha() * (w_ij - v_ij),
        (ReconScheme::Upwind, false) => u_i + cfg.beta() * (u_i - v_ij),
        _ => u_i,
    }
}
