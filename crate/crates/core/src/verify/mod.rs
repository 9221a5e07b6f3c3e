//! Reference solutions and study drivers used to check the solver.

mod bounds;
mod convergence;
mod riemann;
mod taylor;

pub use bounds::{bound_constant, face_error_ratio, quadratic_bound_audit, random_trial, BoundAudit, Quadratic, SchemeAudit};
pub use convergence::{convergence_study, observed_order, ConvergenceResult};
pub use riemann::{exact_riemann, pressure_residual, rankine_hugoniot_residual, RiemannSolution, Wave};
pub use taylor::{fit_radius_power_law, shock_radius, taylor_radius_check, PowerLawFit, RadialProfile, TaylorReport};

use crate::case::Profile;
use crate::geom::Vec3;
use crate::physics::{PhysicsError, ScalarModel};

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Physics(#[from] PhysicsError),
    #[error("pressure iteration did not converge in {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("characteristics cross at t = {t}; no smooth solution at x = {x:?}")]
    PostShock { t: f64, x: [f64; 3] },
    #[error("{0}")]
    Fit(String),
    #[error("study set-up: {0}")]
    Setup(String),
    #[error("level n = {level}: {source}")]
    Level { level: usize, source: Box<crate::Error> },
}

/// Exact solution of a scalar law with smooth initial data `profile`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarExact {
    pub model: ScalarModel,
    pub profile: Profile,
    pub t: f64,
    /// `(origin, extents)` of a periodic box the profile is wrapped into.
    pub period: Option<(Vec3, Vec3)>,
}

pub fn scalar_exact(model: &ScalarModel, profile: &Profile, t: f64) -> ScalarExact {
    ScalarExact { model: *model, profile: *profile, t, period: None }
}

impl ScalarExact {
    pub fn with_period(mut self, origin: Vec3, extents: Vec3) -> Self {
        self.period = Some((origin, extents));
        self
    }

    fn initial(&self, x: Vec3) -> f64 {
        let x = match self.period {
            Some((o, l)) => {
                let mut y = x;
                for k in 0..3 {
                    if l[k] > 0.0 {
                        y[k] = o[k] + (x[k] - o[k]).rem_euclid(l[k]);
                    }
                }
                y
            }
            None => x,
        };
        self.profile.eval(x)
    }

    /// Value at `x` and time `t`; Burgers data past the first crossing of
    /// characteristics is an error.
    pub fn eval(&self, x: Vec3) -> Result<f64, VerifyError> {
        match self.model {
            ScalarModel::Advection { velocity } => Ok(self.initial(x - self.t * velocity)),
            ScalarModel::Burgers { direction } => {
                let e = direction.normalized();
                let t = self.t;
                if t == 0.0 {
                    return Ok(self.initial(x));
                }
                // solve s = t u0(x - s e) for the foot of the characteristic
                let slope = |y: Vec3| {
                    let d = 1e-6;
                    (self.initial(y + d * e) - self.initial(y - d * e)) / (2.0 * d)
                };
                let mut s = t * self.initial(x);
                for _ in 0..100 {
                    let foot = x - s * e;
                    let g = s - t * self.initial(foot);
                    let dg = 1.0 + t * slope(foot);
                    if dg <= 0.0 {
                        return Err(VerifyError::PostShock { t, x: x.0 });
                    }
                    let next = s - g / dg;
                    if (next - s).abs() <= 1e-14 * (1.0 + s.abs()) {
                        return Ok(self.initial(x - next * e));
                    }
                    s = next;
                }
                Err(VerifyError::PostShock { t, x: x.0 })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn advected_sine_returns_after_one_period() {
        let m = ScalarModel::Advection { velocity: Vec3::new(1.0, 0.0, 0.0) };
        let p = Profile::Sine { mean: 0.0, amplitude: 1.0, wave: Vec3::new(1.0, 0.0, 0.0) };
        let ex = scalar_exact(&m, &p, 1.0);
        for x in [0.0, 0.13, 0.5, 0.77] {
            let x = Vec3::new(x, 0.2, 0.0);
            assert!((ex.eval(x).unwrap() - p.eval(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn time_zero_is_the_initial_profile() {
        let p = Profile::Gaussian { center: Vec3::new(0.5, 0.5, 0.0), width: 0.1, amplitude: 1.0, background: 0.0 };
        for m in [
            ScalarModel::Advection { velocity: Vec3::new(1.0, 2.0, 0.0) },
            ScalarModel::Burgers { direction: Vec3::new(1.0, 0.0, 0.0) },
        ] {
            let x = Vec3::new(0.45, 0.52, 0.0);
            assert_eq!(scalar_exact(&m, &p, 0.0).eval(x).unwrap(), p.eval(x));
        }
    }

    #[test]
    fn periodic_wrap_brings_band_back() {
        let m = ScalarModel::Advection { velocity: Vec3::new(1.0, 0.0, 0.0) };
        let p = Profile::Band { normal: Vec3::new(1.0, 0.0, 0.0), lo: 0.2, hi: 0.4, inside: 1.0, outside: 0.0 };
        let ex = scalar_exact(&m, &p, 0.7).with_period(Vec3::ZERO, Vec3::new(1.0, 1.0, 0.0));
        assert_eq!(ex.eval(Vec3::new(0.0, 0.5, 0.0)).unwrap(), 1.0);
        assert_eq!(ex.eval(Vec3::new(0.5, 0.5, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn burgers_compression_wave() {
        let m = ScalarModel::Burgers { direction: Vec3::new(1.0, 0.0, 0.0) };
        let p = Profile::Linear { c: 0.0, g: Vec3::new(-1.0, 0.0, 0.0) };
        // u0 = -x gives u = -x / (1 - t)
        let x = Vec3::new(0.3, 0.0, 0.0);
        let v = scalar_exact(&m, &p, 0.5).eval(x).unwrap();
        assert!((v + 0.6).abs() < 1e-12);
        assert!(matches!(scalar_exact(&m, &p, 1.0).eval(x), Err(VerifyError::PostShock { .. })));
        assert!(scalar_exact(&m, &p, 1.5).eval(x).is_err());
    }

    #[test]
    fn burgers_expansion_is_smooth_for_all_time() {
        let m = ScalarModel::Burgers { direction: Vec3::new(1.0, 0.0, 0.0) };
        let p = Profile::Linear { c: 0.0, g: Vec3::new(1.0, 0.0, 0.0) };
        let v = scalar_exact(&m, &p, 3.0).eval(Vec3::new(2.0, 0.0, 0.0)).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
    }
}
