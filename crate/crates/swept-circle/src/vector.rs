//! Fixed-dimension Euclidean vectors.
//!
//! The collision algebra is dimension-generic over `D = 2` or `D = 3`;
//! velocity-obstacle construction is planar and uses [`Vec2`] only.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

/// A `D`-dimensional vector of `f64` components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VecD<const D: usize>(pub [f64; D]);

impl<const D: usize> Default for VecD<D> {
    fn default() -> Self {
        Self::ZERO
    }
}

pub type Vec2 = VecD<2>;
pub type Vec3 = VecD<3>;

/// Shorthand constructor for [`Vec2`].
pub fn vec2(x: f64, y: f64) -> Vec2 {
    VecD([x, y])
}

/// Shorthand constructor for [`Vec3`].
pub fn vec3(x: f64, y: f64, z: f64) -> Vec3 {
    VecD([x, y, z])
}

impl<const D: usize> VecD<D> {
    pub const ZERO: Self = VecD([0.0; D]);

    pub fn zero() -> Self {
        Self::ZERO
    }

    pub fn dot(self, other: Self) -> f64 {
        let mut acc = 0.0;
        for i in 0..D {
            acc += self.0[i] * other.0[i];
        }
        acc
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Squared norm of the wedge product, `|u|²|v|² − (u·v)²`.
    ///
    /// Zero exactly when the two vectors are linearly dependent, which is the
    /// dimension-free parallelism test used by the delay analysis.
    pub fn cross_norm_sq(self, other: Self) -> f64 {
        let uu = self.norm_sq();
        let vv = other.norm_sq();
        let uv = self.dot(other);
        (uu * vv - uv * uv).max(0.0)
    }

    pub fn is_finite(self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn scaled(self, k: f64) -> Self {
        let mut out = self.0;
        for c in &mut out {
            *c *= k;
        }
        VecD(out)
    }

    /// Unit vector in the same direction, or `None` for a (near-)zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        if n <= f64::EPSILON * 4.0 {
            None
        } else {
            Some(self.scaled(1.0 / n))
        }
    }
}

impl Vec2 {
    pub fn x(self) -> f64 {
        self.0[0]
    }

    pub fn y(self) -> f64 {
        self.0[1]
    }

    /// Counterclockwise perpendicular.
    pub fn perp(self) -> Vec2 {
        vec2(-self.0[1], self.0[0])
    }

    /// z-component of the 3D cross product of the two plane vectors.
    pub fn cross_z(self, other: Vec2) -> f64 {
        self.0[0] * other.0[1] - self.0[1] * other.0[0]
    }

    /// Rotation by `angle` radians, counterclockwise.
    pub fn rotated(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        vec2(
            c * self.0[0] - s * self.0[1],
            s * self.0[0] + c * self.0[1],
        )
    }
}

impl<const D: usize> Add for VecD<D> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self.0;
        for (lhs, rhs) in out.iter_mut().zip(rhs.0) {
            *lhs += rhs;
        }
        VecD(out)
    }
}

impl<const D: usize> AddAssign for VecD<D> {
    fn add_assign(&mut self, rhs: Self) {
        for i in 0..D {
            self.0[i] += rhs.0[i];
        }
    }
}

impl<const D: usize> Sub for VecD<D> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self.0;
        for (lhs, rhs) in out.iter_mut().zip(rhs.0) {
            *lhs -= rhs;
        }
        VecD(out)
    }
}

impl<const D: usize> Neg for VecD<D> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scaled(-1.0)
    }
}

impl<const D: usize> Mul<f64> for VecD<D> {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scaled(rhs)
    }
}

impl<const D: usize> Index<usize> for VecD<D> {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl<const D: usize> IndexMut<usize> for VecD<D> {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}
