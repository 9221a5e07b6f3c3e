//! Exact solution of the 1-D Euler Riemann problem. The first velocity
//! component is the normal one; the others are carried passively across
//! the contact.

use crate::geom::Vec3;
use crate::physics::{EulerPrimitive, GasModel};

use super::VerifyError;

pub const PRESSURE_TOL: f64 = 1e-13;
pub const MAX_NEWTON_ITERS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Wave {
    Shock { speed: f64 },
    /// Head and tail speeds of the fan.
    Rarefaction { head: f64, tail: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannSolution {
    pub left: EulerPrimitive,
    pub right: EulerPrimitive,
    pub gamma: f64,
    pub p_star: f64,
    pub u_star: f64,
    pub rho_star_left: f64,
    pub rho_star_right: f64,
    pub left_wave: Wave,
    pub right_wave: Wave,
    /// Data too far apart for a star region: two fans separated by vacuum.
    pub vacuum: bool,
    pub iterations: usize,
}

struct Side {
    rho: f64,
    u: f64,
    p: f64,
    a: f64,
}

fn pressure_fn(p: f64, s: &Side, g: f64) -> (f64, f64) {
    if p > s.p {
        let ak = 2.0 / ((g + 1.0) * s.rho);
        let bk = (g - 1.0) / (g + 1.0) * s.p;
        let q = (ak / (p + bk)).sqrt();
        ((p - s.p) * q, q * (1.0 - 0.5 * (p - s.p) / (bk + p)))
    } else {
        let z = (g - 1.0) / (2.0 * g);
        let pr = p / s.p;
        (2.0 * s.a / (g - 1.0) * (pr.powf(z) - 1.0), pr.powf(-(g + 1.0) / (2.0 * g)) / (s.rho * s.a))
    }
}

/// Residual of the two-sided pressure equation `fL(p) + fR(p) + uR - uL`.
pub fn pressure_residual(sol: &RiemannSolution, p: f64) -> f64 {
    let g = sol.gamma;
    let (l, r) = sides(&sol.left, &sol.right, g);
    pressure_fn(p, &l, g).0 + pressure_fn(p, &r, g).0 + r.u - l.u
}

fn sides(left: &EulerPrimitive, right: &EulerPrimitive, g: f64) -> (Side, Side) {
    let mk = |w: &EulerPrimitive| Side { rho: w.rho, u: w.velocity[0], p: w.p, a: (g * w.p / w.rho).sqrt() };
    (mk(left), mk(right))
}

pub fn exact_riemann(left: &EulerPrimitive, right: &EulerPrimitive, gas: &GasModel) -> Result<RiemannSolution, VerifyError> {
    left.check()?;
    right.check()?;
    let g = gas.gamma;
    let (l, r) = sides(left, right, g);
    let du = r.u - l.u;

    if 2.0 * (l.a + r.a) / (g - 1.0) <= du {
        return Ok(RiemannSolution {
            left: *left,
            right: *right,
            gamma: g,
            p_star: 0.0,
            u_star: f64::NAN,
            rho_star_left: 0.0,
            rho_star_right: 0.0,
            left_wave: Wave::Rarefaction { head: l.u - l.a, tail: l.u + 2.0 * l.a / (g - 1.0) },
            right_wave: Wave::Rarefaction { head: r.u + r.a, tail: r.u - 2.0 * r.a / (g - 1.0) },
            vacuum: true,
            iterations: 0,
        });
    }

    let z = (g - 1.0) / (2.0 * g);
    let guess = ((l.a + r.a - 0.5 * (g - 1.0) * du) / (l.a / l.p.powf(z) + r.a / r.p.powf(z))).powf(1.0 / z);
    let mut p = guess.max(1e-12 * l.p.min(r.p));
    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_NEWTON_ITERS {
        iterations += 1;
        let (fl, dl) = pressure_fn(p, &l, g);
        let (fr, dr) = pressure_fn(p, &r, g);
        let mut next = p - (fl + fr + du) / (dl + dr);
        if !(next > 0.0) {
            next = 0.5 * p;
        }
        let change = 2.0 * (next - p).abs() / (next + p);
        p = next;
        if change < PRESSURE_TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(VerifyError::NoConvergence { iterations });
    }
    let (fl, _) = pressure_fn(p, &l, g);
    let (fr, _) = pressure_fn(p, &r, g);
    let u_star = 0.5 * (l.u + r.u) + 0.5 * (fr - fl);

    let gm = (g - 1.0) / (g + 1.0);
    let star = |s: &Side, sign: f64| -> (f64, Wave) {
        let pr = p / s.p;
        if p > s.p {
            let rho = s.rho * (pr + gm) / (gm * pr + 1.0);
            let speed = s.u + sign * s.a * ((g + 1.0) / (2.0 * g) * pr + (g - 1.0) / (2.0 * g)).sqrt();
            (rho, Wave::Shock { speed })
        } else {
            let rho = s.rho * pr.powf(1.0 / g);
            let a_star = s.a * pr.powf(z);
            (rho, Wave::Rarefaction { head: s.u + sign * s.a, tail: u_star + sign * a_star })
        }
    };
    let (rho_star_left, left_wave) = star(&l, -1.0);
    let (rho_star_right, right_wave) = star(&r, 1.0);
    Ok(RiemannSolution {
        left: *left,
        right: *right,
        gamma: g,
        p_star: p,
        u_star,
        rho_star_left,
        rho_star_right,
        left_wave,
        right_wave,
        vacuum: false,
        iterations,
    })
}

impl RiemannSolution {
    /// State at similarity coordinate `xi = x / t`.
    pub fn sample(&self, xi: f64) -> EulerPrimitive {
        let g = self.gamma;
        let (l, r) = sides(&self.left, &self.right, g);
        let tangential = |w: &EulerPrimitive, un: f64| Vec3::new(un, w.velocity[1], w.velocity[2]);
        let fan = |s: &Side, w: &EulerPrimitive, sign: f64| {
            // sign = +1 for a left fan, -1 for a right fan
            let c = 2.0 / (g + 1.0) + sign * (g - 1.0) / ((g + 1.0) * s.a) * (s.u - xi);
            let rho = s.rho * c.powf(2.0 / (g - 1.0));
            let u = 2.0 / (g + 1.0) * (sign * s.a + (g - 1.0) / 2.0 * s.u + xi);
            let p = s.p * c.powf(2.0 * g / (g - 1.0));
            EulerPrimitive::new(rho, tangential(w, u), p)
        };

        if self.vacuum {
            let (Wave::Rarefaction { head: hl, tail: tl }, Wave::Rarefaction { head: hr, tail: tr }) =
                (self.left_wave, self.right_wave)
            else {
                unreachable!()
            };
            return if xi <= hl {
                self.left
            } else if xi < tl {
                fan(&l, &self.left, 1.0)
            } else if xi <= tr {
                EulerPrimitive::new(0.0, Vec3::new(xi, 0.0, 0.0), 0.0)
            } else if xi < hr {
                fan(&r, &self.right, -1.0)
            } else {
                self.right
            };
        }

        if xi <= self.u_star {
            match self.left_wave {
                Wave::Shock { speed } => {
                    if xi < speed {
                        self.left
                    } else {
                        EulerPrimitive::new(self.rho_star_left, tangential(&self.left, self.u_star), self.p_star)
                    }
                }
                Wave::Rarefaction { head, tail } => {
                    if xi <= head {
                        self.left
                    } else if xi < tail {
                        fan(&l, &self.left, 1.0)
                    } else {
                        EulerPrimitive::new(self.rho_star_left, tangential(&self.left, self.u_star), self.p_star)
                    }
                }
            }
        } else {
            match self.right_wave {
                Wave::Shock { speed } => {
                    if xi > speed {
                        self.right
                    } else {
                        EulerPrimitive::new(self.rho_star_right, tangential(&self.right, self.u_star), self.p_star)
                    }
                }
                Wave::Rarefaction { head, tail } => {
                    if xi >= head {
                        self.right
                    } else if xi > tail {
                        fan(&r, &self.right, -1.0)
                    } else {
                        EulerPrimitive::new(self.rho_star_right, tangential(&self.right, self.u_star), self.p_star)
                    }
                }
            }
        }
    }

    /// Density range of the solution (for overshoot checks).
    pub fn density_range(&self) -> (f64, f64) {
        let vals = [self.left.rho, self.right.rho, self.rho_star_left, self.rho_star_right];
        let lo = if self.vacuum { 0.0 } else { vals.iter().copied().fold(f64::INFINITY, f64::min) };
        (lo, vals.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    }
}

/// Largest relative mismatch of the three jump conditions across a wave
/// moving at `speed` between states `a` and `b`.
pub fn rankine_hugoniot_residual(a: &EulerPrimitive, b: &EulerPrimitive, speed: f64, gamma: f64) -> f64 {
    let cons = |w: &EulerPrimitive| {
        let u = w.velocity[0];
        let e = w.p / (gamma - 1.0) + 0.5 * w.rho * u * u;
        ([w.rho, w.rho * u, e], [w.rho * u, w.rho * u * u + w.p, (e + w.p) * u])
    };
    let (ua, fa) = cons(a);
    let (ub, fb) = cons(b);
    (0..3)
        .map(|k| {
            let jump = (fb[k] - fa[k]) - speed * (ub[k] - ua[k]);
            jump.abs() / fa[k].abs().max(fb[k].abs()).max(ua[k].abs()).max(1e-300)
        })
        .fold(0.0, f64::max)
}
