//! Exact flat geometry of genus-3 Prym eigenforms: polygon models, cylinder
//! decompositions, prototype identification, saddle connections and
//! square-tiled surfaces.

mod decompose;
mod dsl;
mod identify;
mod origami;
mod saddle;
mod surface;

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::exactnum::QuadNum;

pub use decompose::{
    decompose, decompose_with_budget, Cylinder, CylinderDecomposition, DecompModel, Orbit, DEFAULT_BUDGET,
};
pub use dsl::{parse_direction, parse_expr};
pub use identify::{butterfly_direction, geometric_butterfly, identify_prototype, Identified};
pub use origami::{to_origami, Origami};
pub use saddle::{find_simple_cylinders, saddle_connections, SimpleCylinder};
pub use surface::{build_surface, EdgeRef, Polygon, SurfaceModel, TranslationSurface};

/// A plane vector with coordinates in Q(√D).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vec2 {
    pub x: QuadNum,
    pub y: QuadNum,
}

impl Vec2 {
    pub fn new(x: QuadNum, y: QuadNum) -> Self {
        Vec2 { x, y }
    }

    pub fn ints(x: i64, y: i64, d: u64) -> Self {
        Vec2::new(QuadNum::int(x, d), QuadNum::int(y, d))
    }

    pub fn zero(d: u64) -> Self {
        Vec2::ints(0, 0, d)
    }

    pub fn cross(&self, o: &Vec2) -> QuadNum {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn dot(&self, o: &Vec2) -> QuadNum {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn scale(&self, k: &QuadNum) -> Vec2 {
        Vec2::new(&self.x * k, &self.y * k)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Same direction and orientation as `o` (both non-zero).
    pub fn parallel_to(&self, o: &Vec2) -> bool {
        self.cross(o).is_zero() && self.dot(o).is_positive()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl Add for &Vec2 {
    type Output = Vec2;
    fn add(self, o: &Vec2) -> Vec2 {
        Vec2::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl Sub for &Vec2 {
    type Output = Vec2;
    fn sub(self, o: &Vec2) -> Vec2 {
        Vec2::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Neg for &Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-&self.x, -&self.y)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Serialize for Vec2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.x.to_string(), self.y.to_string()].serialize(s)
    }
}

pub(crate) fn serialize_quad<S: Serializer>(q: &QuadNum, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}
