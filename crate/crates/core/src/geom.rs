//! Small fixed-size vector type used for all coordinates.
//!
//! Two-dimensional meshes store `z = 0`; every geometric routine works on
//! three components so the 2-D and 3-D code paths stay shared.

use std::ops::{Add, AddAssign, Div, Index, IndexMut, Mul, Neg, Sub, SubAssign};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    /// Builds a vector from the first `min(3, s.len())` entries of a slice.
    pub fn from_slice(s: &[f64]) -> Self {
        let mut v = [0.0; 3];
        for (dst, src) in v.iter_mut().zip(s) {
            *dst = *src;
        }
        Vec3(v)
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }
    pub fn y(&self) -> f64 {
        self.0[1]
    }
    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn dot(&self, o: &Vec3) -> f64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn cross(&self, o: &Vec3) -> Vec3 {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = o.0;
        Vec3([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Unit vector in the same direction; the zero vector maps to itself.
    pub fn normalized(&self) -> Vec3 {
        let n = self.norm();
        if n > 0.0 {
            *self / n
        } else {
            *self
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl SubAssign for Vec3 {
    fn sub_assign(&mut self, o: Vec3) {
        *self = *self - o;
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3([self.0[0] / s, self.0[1] / s, self.0[2] / s])
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vec3 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl std::iter::Sum for Vec3 {
    fn sum<I: Iterator<Item = Vec3>>(iter: I) -> Vec3 {
        iter.fold(Vec3::ZERO, |a, b| a + b)
    }
}

/// Signed measure of a simplex: area for `dim == 2`, volume for `dim == 3`.
pub fn signed_measure(dim: usize, pts: &[Vec3]) -> f64 {
    match dim {
        2 => {
            let a = pts[1] - pts[0];
            let b = pts[2] - pts[0];
            0.5 * (a.x() * b.y() - a.y() * b.x())
        }
        3 => {
            let a = pts[1] - pts[0];
            let b = pts[2] - pts[0];
            let c = pts[3] - pts[0];
            a.dot(&b.cross(&c)) / 6.0
        }
        _ => unreachable!("dimension must be 2 or 3"),
    }
}

/// Un-oriented area-weighted normal of a facet (edge in 2-D, triangle in 3-D).
pub fn facet_normal(dim: usize, pts: &[Vec3]) -> Vec3 {
    match dim {
        2 => {
            let t = pts[1] - pts[0];
            Vec3::new(t.y(), -t.x(), 0.0)
        }
        3 => 0.5 * (pts[1] - pts[0]).cross(&(pts[2] - pts[0])),
        _ => unreachable!("dimension must be 2 or 3"),
    }
}
