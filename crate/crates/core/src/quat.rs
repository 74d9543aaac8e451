//! Real quaternions and the reduced quaternions `x + y i + z j` that stand in
//! for points of 3-space.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `q0 + q1 i + q2 j + q3 k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub q0: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    /// `e0 = 1, e1 = i, e2 = j, e3 = k`.
    pub const BASIS: [Self; 4] = [Self::ONE, Self::I, Self::J, Self::K];

    pub const fn new(q0: f64, q1: f64, q2: f64, q3: f64) -> Self {
        Self { q0, q1, q2, q3 }
    }

    pub const fn scalar(s: f64) -> Self {
        Self::new(s, 0.0, 0.0, 0.0)
    }

    pub const fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub const fn to_array(self) -> [f64; 4] {
        [self.q0, self.q1, self.q2, self.q3]
    }

    pub fn conj(self) -> Self {
        Self::new(self.q0, -self.q1, -self.q2, -self.q3)
    }

    /// Scalar part `Sc(q) = (q + q̄) / 2`.
    pub fn sc(self) -> f64 {
        self.q0
    }

    /// Vector part `Vec(q) = (q - q̄) / 2`.
    pub fn vec(self) -> Self {
        Self::new(0.0, self.q1, self.q2, self.q3)
    }

    pub fn norm_sqr(self) -> f64 {
        self.q0 * self.q0 + self.q1 * self.q1 + self.q2 * self.q2 + self.q3 * self.q3
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Euclidean inner product; equals `Sc(q p̄)`.
    pub fn inner(self, other: Self) -> f64 {
        self.q0 * other.q0 + self.q1 * other.q1 + self.q2 * other.q2 + self.q3 * other.q3
    }

    pub fn is_reduced(self) -> bool {
        self.q3 == 0.0
    }

    pub fn max_abs(self) -> f64 {
        self.q0.abs().max(self.q1.abs()).max(self.q2.abs()).max(self.q3.abs())
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i + {}j + {}k)", self.q0, self.q1, self.q2, self.q3)
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.q0 + o.q0, self.q1 + o.q1, self.q2 + o.q2, self.q3 + o.q3)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.q0 - o.q0, self.q1 - o.q1, self.q2 - o.q2, self.q3 - o.q3)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.q0, -self.q1, -self.q2, -self.q3)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let a = self;
        Self::new(
            a.q0 * b.q0 - a.q1 * b.q1 - a.q2 * b.q2 - a.q3 * b.q3,
            a.q0 * b.q1 + a.q1 * b.q0 + a.q2 * b.q3 - a.q3 * b.q2,
            a.q0 * b.q2 - a.q1 * b.q3 + a.q2 * b.q0 + a.q3 * b.q1,
            a.q0 * b.q3 + a.q1 * b.q2 - a.q2 * b.q1 + a.q3 * b.q0,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.q0 * s, self.q1 * s, self.q2 * s, self.q3 * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        Self::new(self.q0 / s, self.q1 / s, self.q2 / s, self.q3 / s)
    }
}

impl Sum for Quaternion {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

/// A point of 3-space read as the reduced quaternion `x + y i + z j`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReducedPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ReducedPoint {
    pub const ORIGIN: Self = Self::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub const fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub const fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub const fn to_quaternion(self) -> Quaternion {
        Quaternion::new(self.x, self.y, self.z, 0.0)
    }

    /// Drops the k-component.
    pub fn truncate(q: Quaternion) -> Self {
        Self::new(q.q0, q.q1, q.q2)
    }

    pub fn component(self, axis: usize) -> f64 {
        match axis {
            0 => self.x,
            1 => self.y,
            2 => self.z,
            _ => panic!("axis {axis} out of range"),
        }
    }

    pub fn with_component(mut self, axis: usize, value: f64) -> Self {
        match axis {
            0 => self.x = value,
            1 => self.y = value,
            2 => self.z = value,
            _ => panic!("axis {axis} out of range"),
        }
        self
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Cross product in the basis `{1, i, j}`:
    /// `r2 s3 - r3 s2 + (r3 s1 - r1 s3) i + (r1 s2 - r2 s1) j`.
    pub fn cross(self, s: Self) -> Self {
        Self::new(
            self.y * s.z - self.z * s.y,
            self.z * s.x - self.x * s.z,
            self.x * s.y - self.y * s.x,
        )
    }
}

/// Cross product of two quaternions that must both be reduced.
pub fn cross(r: Quaternion, s: Quaternion) -> Result<ReducedPoint> {
    let r = ReducedPoint::try_from(r)?;
    let s = ReducedPoint::try_from(s)?;
    Ok(r.cross(s))
}

impl TryFrom<Quaternion> for ReducedPoint {
    type Error = Error;

    fn try_from(q: Quaternion) -> Result<Self> {
        if q.is_reduced() {
            Ok(Self::truncate(q))
        } else {
            Err(Error::NotReduced(q.q3))
        }
    }
}

impl From<ReducedPoint> for Quaternion {
    fn from(p: ReducedPoint) -> Self {
        p.to_quaternion()
    }
}

impl fmt::Display for ReducedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl Add for ReducedPoint {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for ReducedPoint {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for ReducedPoint {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl AddAssign for ReducedPoint {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Mul<f64> for ReducedPoint {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<ReducedPoint> for f64 {
    type Output = ReducedPoint;
    fn mul(self, p: ReducedPoint) -> ReducedPoint {
        p * self
    }
}

impl Div<f64> for ReducedPoint {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        Self::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Sum for ReducedPoint {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ORIGIN, Add::add)
    }
}
