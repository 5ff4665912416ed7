//! The plane, the diagonal constraint segments `S_j` and the foot maps
//! between each constraint and the x-axis.
//!
//! `S_j` is the segment `{(x, x + 1/j) : -1/j <= x <= 1}`. The perpendicular
//! from `(x, x + 1/j)` meets the x-axis at the foot `2x + 1/j`, which gives a
//! bijection between `S_j` and `[-1/j, 2 + 1/j]`.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Point `(x, 0)` of the support line.
    pub const fn on_axis(x: f64) -> Self {
        Self { x, y: 0.0 }
    }
}

/// Squared Euclidean distance.
pub fn squared_distance(p: Point, q: Point) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    dx * dx + dy * dy
}

/// Index `j >= 1` of the constraint `S_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ConstraintIndex(u32);

impl ConstraintIndex {
    pub fn new(j: u32) -> Result<Self> {
        if j == 0 {
            return Err(Error::InvalidIndex(j));
        }
        Ok(Self(j))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Vertical offset `1/j` of `S_j` above the diagonal.
    pub fn offset(self) -> f64 {
        1.0 / f64::from(self.0)
    }

    /// Leftmost admissible abscissa `-1/j`.
    pub fn min_abscissa(self) -> f64 {
        -self.offset()
    }
}

impl std::fmt::Display for ConstraintIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A point of `S_j`, stored by its index and abscissa so it can never drift
/// off the constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintPoint {
    j: ConstraintIndex,
    x: f64,
}

impl ConstraintPoint {
    pub fn new(j: ConstraintIndex, x: f64) -> Result<Self> {
        let lo = j.min_abscissa();
        if !x.is_finite() || x < lo || x > 1.0 {
            return Err(Error::OffConstraint { j: j.get(), x, lo });
        }
        Ok(Self { j, x })
    }

    pub fn index(&self) -> ConstraintIndex {
        self.j
    }

    pub fn abscissa(&self) -> f64 {
        self.x
    }

    /// Plane coordinates `(x, x + 1/j)`.
    pub fn embed(&self) -> Point {
        Point::new(self.x, self.x + self.j.offset())
    }

    /// Foot of the perpendicular on the x-axis, `2x + 1/j`.
    pub fn foot(&self) -> f64 {
        forward_map(self)
    }
}

pub fn embed(cp: &ConstraintPoint) -> Point {
    cp.embed()
}

pub fn forward_map(cp: &ConstraintPoint) -> f64 {
    2.0 * cp.x + cp.j.offset()
}

/// Point of `S_j` whose perpendicular foot is `foot`.
pub fn inverse_map(j: ConstraintIndex, foot: f64) -> Result<ConstraintPoint> {
    let x = 0.5 * (foot - j.offset());
    ConstraintPoint::new(j, x).map_err(|_| Error::FootOutOfDomain { j: j.get(), foot })
}

/// Abscissas on `S_j` whose feet land in `[0, 1]`.
pub fn feasible_foot_range(j: ConstraintIndex) -> (f64, f64) {
    let half = 0.5 * j.offset();
    (-half, 0.5 - half)
}

/// Abscissa on the x-axis where `p` and `q` are equidistant.
///
/// Solves `rho(p, (x, 0)) = rho(q, (x, 0))`, which is
/// `x = (a_q^2 + b_q^2 - a_p^2 - b_p^2) / (2 (a_q - a_p))`, evaluated after
/// factoring the differences of squares. With `b = a + c` the quotient
/// `(b_q - b_p) / (a_q - a_p)` becomes `1 + (c_q - c_p) / (a_q - a_p)`, so two
/// points on the same constraint give `a_p + a_q + c` with no cancellation.
pub fn voronoi_breakpoint(p: &ConstraintPoint, q: &ConstraintPoint) -> Result<f64> {
    let da = q.x - p.x;
    if da == 0.0 {
        return Err(Error::DegenerateBoundary(p.x));
    }
    let (cp, cq) = (p.j.offset(), q.j.offset());
    let sum_a = p.x + q.x;
    let sum_b = (p.x + cp) + (q.x + cq);
    let slope = if p.j == q.j {
        1.0
    } else {
        1.0 + (cq - cp) / da
    };
    Ok(0.5 * (sum_a + sum_b * slope))
}
