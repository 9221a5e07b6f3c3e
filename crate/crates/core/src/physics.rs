//! PDE models: scalar conservation laws and the compressible Euler equations
//! with an ideal-gas closure.
//!
//! Euler states always carry three velocity components; 2-D runs keep the
//! third at zero.

use crate::geom::Vec3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PhysicsError {
    #[error("non-positive density {rho:e}")]
    Density { rho: f64 },
    #[error("non-positive pressure {p:e}")]
    Pressure { p: f64 },
    #[error("gamma must exceed 1, got {0}")]
    Gamma(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasModel {
    pub gamma: f64,
}

impl Default for GasModel {
    fn default() -> Self {
        GasModel { gamma: 1.4 }
    }
}

impl GasModel {
    pub fn new(gamma: f64) -> Result<Self, PhysicsError> {
        if !(gamma > 1.0) {
            return Err(PhysicsError::Gamma(gamma));
        }
        Ok(GasModel { gamma })
    }

    pub fn sound_speed(&self, w: &EulerPrimitive) -> f64 {
        (self.gamma * w.p / w.rho).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerConserved {
    pub rho: f64,
    pub momentum: Vec3,
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerPrimitive {
    pub rho: f64,
    pub velocity: Vec3,
    pub p: f64,
}

impl EulerConserved {
    pub fn to_array(&self) -> [f64; 5] {
        [self.rho, self.momentum[0], self.momentum[1], self.momentum[2], self.energy]
    }

    pub fn from_slice(u: &[f64]) -> Self {
        EulerConserved { rho: u[0], momentum: Vec3::new(u[1], u[2], u[3]), energy: u[4] }
    }
}

impl EulerPrimitive {
    pub fn new(rho: f64, velocity: Vec3, p: f64) -> Self {
        EulerPrimitive { rho, velocity, p }
    }

    pub fn to_array(&self) -> [f64; 5] {
        [self.rho, self.velocity[0], self.velocity[1], self.velocity[2], self.p]
    }

    pub fn from_slice(w: &[f64]) -> Self {
        EulerPrimitive { rho: w[0], velocity: Vec3::new(w[1], w[2], w[3]), p: w[4] }
    }

    pub fn check(&self) -> Result<(), PhysicsError> {
        if !(self.rho > 0.0) {
            return Err(PhysicsError::Density { rho: self.rho });
        }
        if !(self.p > 0.0) {
            return Err(PhysicsError::Pressure { p: self.p });
        }
        Ok(())
    }
}

pub fn cons_to_prim(u: &EulerConserved, gas: &GasModel) -> Result<EulerPrimitive, PhysicsError> {
    if !(u.rho > 0.0) {
        return Err(PhysicsError::Density { rho: u.rho });
    }
    let vel = u.momentum / u.rho;
    let p = (gas.gamma - 1.0) * (u.energy - 0.5 * u.rho * vel.norm_sq());
    if !(p > 0.0) {
        return Err(PhysicsError::Pressure { p });
    }
    Ok(EulerPrimitive { rho: u.rho, velocity: vel, p })
}

pub fn prim_to_cons(w: &EulerPrimitive, gas: &GasModel) -> Result<EulerConserved, PhysicsError> {
    w.check()?;
    Ok(EulerConserved {
        rho: w.rho,
        momentum: w.rho * w.velocity,
        energy: w.p / (gas.gamma - 1.0) + 0.5 * w.rho * w.velocity.norm_sq(),
    })
}

/// Physical flux `F(W) . n`; `n` may carry the face measure.
pub fn euler_flux(w: &EulerPrimitive, n: Vec3, gas: &GasModel) -> [f64; 5] {
    let un = w.velocity.dot(&n);
    let e = w.p / (gas.gamma - 1.0) + 0.5 * w.rho * w.velocity.norm_sq();
    let m = w.rho * un;
    [
        m,
        w.p * n[0] + m * w.velocity[0],
        w.p * n[1] + m * w.velocity[1],
        w.p * n[2] + m * w.velocity[2],
        (e + w.p) * un,
    ]
}

/// `|u . n| + a` for a unit normal.
pub fn max_wave_speed(w: &EulerPrimitive, n_unit: Vec3, gas: &GasModel) -> f64 {
    w.velocity.dot(&n_unit).abs() + gas.sound_speed(w)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarModel {
    /// `f(u) = v u`
    Advection { velocity: Vec3 },
    /// `f(u) = (u^2 / 2) e` along a unit direction `e`
    Burgers { direction: Vec3 },
}

impl ScalarModel {
    pub fn flux(&self, u: f64) -> Vec3 {
        scalar_flux(u, self)
    }

    /// Characteristic speed along a unit normal.
    pub fn wave_speed(&self, u: f64, n_unit: Vec3) -> f64 {
        match self {
            ScalarModel::Advection { velocity } => velocity.dot(&n_unit).abs(),
            ScalarModel::Burgers { direction } => (u * direction.dot(&n_unit)).abs(),
        }
    }
}

pub fn scalar_flux(u: f64, model: &ScalarModel) -> Vec3 {
    match model {
        ScalarModel::Advection { velocity } => *velocity * u,
        ScalarModel::Burgers { direction } => *direction * (0.5 * u * u),
    }
}
