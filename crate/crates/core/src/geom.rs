//! Positions, velocities and axis-aligned workspace bounds.
//!
//! Convention: `z` is positive up, so underwater positions have `z <= 0` and
//! depth equals `-z`. Horizontal coordinates are metres, velocities m/s.

use serde::{Deserialize, Serialize};

use crate::real::Real;

/// A 3D position in metres. `z` is positive up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Position3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Horizontal projection.
    pub fn horizontal(&self) -> Point2<T> {
        Point2 {
            x: self.x,
            y: self.y,
        }
    }

    pub fn distance(&self, other: &Self) -> T {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn distance_sq(&self, other: &Self) -> T {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        dx * dx + dy * dy + dz * dz
    }
}

/// A point in a horizontal plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Horizontal current velocity. The vertical component is zero by
/// construction and therefore not stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowVector<T> {
    pub u: T,
    pub v: T,
}

impl<T: Real> FlowVector<T> {
    pub fn new(u: T, v: T) -> Self {
        Self { u, v }
    }

    pub fn zero() -> Self {
        Self {
            u: T::zero(),
            v: T::zero(),
        }
    }

    pub fn speed(&self) -> T {
        (self.u * self.u + self.v * self.v).sqrt()
    }
}

impl<T: Real> std::ops::Add for FlowVector<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            u: self.u + rhs.u,
            v: self.v + rhs.v,
        }
    }
}

impl<T: Real> std::ops::Mul<T> for FlowVector<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self {
            u: self.u * s,
            v: self.v * s,
        }
    }
}

/// A glider velocity vector in still water, m/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlVector<T> {
    pub u: T,
    pub v: T,
    pub w: T,
}

impl<T: Real> ControlVector<T> {
    pub fn new(u: T, v: T, w: T) -> Self {
        Self { u, v, w }
    }

    pub fn horizontal_speed(&self) -> T {
        (self.u * self.u + self.v * self.v).sqrt()
    }

    pub fn norm(&self) -> T {
        (self.u * self.u + self.v * self.v + self.w * self.w).sqrt()
    }
}

/// Axis-aligned box, used both as the sampling workspace and as an optional
/// integration stop region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds3<T> {
    pub min: Position3<T>,
    pub max: Position3<T>,
}

impl<T: Real> Bounds3<T> {
    pub fn new(min: Position3<T>, max: Position3<T>) -> Self {
        Self { min, max }
    }

    pub fn contains(&self, p: &Position3<T>) -> bool {
        p.x >= self.min.x
            && p.x <= self.max.x
            && p.y >= self.min.y
            && p.y <= self.max.y
            && p.z >= self.min.z
            && p.z <= self.max.z
    }

    pub fn extent(&self) -> [T; 3] {
        [
            self.max.x - self.min.x,
            self.max.y - self.min.y,
            self.max.z - self.min.z,
        ]
    }
}
