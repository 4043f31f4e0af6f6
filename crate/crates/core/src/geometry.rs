//! Small 3-vector and flat-spacetime tensor helpers.
//!
//! The metric signature is (−,+,+,+) throughout.

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A 3-vector of f64 components.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Unit vector in the same direction; `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        if n > 0.0 {
            Some(self / n)
        } else {
            None
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
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
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Symmetric rank-2 tensor on flat spacetime, stored as contravariant
/// components `T^{μν}` in a dense 4×4 array.
pub type Tensor4 = [[f64; 4]; 4];

/// Minkowski metric diag(−1, 1, 1, 1). Numerically identical for upper and
/// lower index placement in these coordinates.
pub const MINKOWSKI: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

/// Minkowski inner product of two 4-vectors, η_{μν} a^μ b^ν.
pub fn minkowski_dot(a: [f64; 4], b: [f64; 4]) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

/// Outer product a^μ b^ν.
pub fn outer(a: [f64; 4], b: [f64; 4]) -> Tensor4 {
    let mut t = [[0.0; 4]; 4];
    for (mu, row) in t.iter_mut().enumerate() {
        for (nu, el) in row.iter_mut().enumerate() {
            *el = a[mu] * b[nu];
        }
    }
    t
}

/// Metric trace η_{μν} T^{μν}.
pub fn metric_trace(t: &Tensor4) -> f64 {
    (0..4).map(|mu| MINKOWSKI[mu] * t[mu][mu]).sum()
}

/// Trace reversal: T̄^{μν} = T^{μν} − ½ η^{μν} (η_{αβ} T^{αβ}).
pub fn trace_reverse(t: &Tensor4) -> Tensor4 {
    let trace = metric_trace(t);
    let mut out = *t;
    for (mu, row) in out.iter_mut().enumerate() {
        row[mu] -= 0.5 * MINKOWSKI[mu] * trace;
    }
    out
}

/// Full contraction A^{μν} B_{μν} with both indices of `b` lowered by the
/// metric: Σ η_{μα} η_{νβ} A^{μν} B^{αβ}.
pub fn contract(a: &Tensor4, b: &Tensor4) -> f64 {
    let mut sum = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            sum += MINKOWSKI[mu] * MINKOWSKI[nu] * a[mu][nu] * b[mu][nu];
        }
    }
    sum
}
