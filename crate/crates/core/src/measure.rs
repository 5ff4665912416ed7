//! Probability measures carried by the support segment `J = [0, 1] x {0}`.
//!
//! [`UniformSegmentMeasure`] evaluates every quantity from exact
//! antiderivatives. [`DensityMeasure`] accepts an arbitrary density and falls
//! back to adaptive Simpson quadrature.

use crate::error::{Error, Result};
use crate::geometry::{squared_distance, ConstraintIndex, ConstraintPoint, Point};

/// Absolute tolerance of the quadrature fallback.
pub const QUADRATURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportInterval {
    lo: f64,
    hi: f64,
}

impl SupportInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn unit() -> Self {
        Self { lo: 0.0, hi: 1.0 }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }
}

/// A probability measure on `J` described by its density along the x-axis.
///
/// The provided methods integrate the density numerically; implementors with
/// closed forms override them.
pub trait SegmentMeasure {
    /// Density with respect to Lebesgue measure on `[0, 1]`.
    fn density(&self, x: f64) -> f64;

    fn interval_mass(&self, iv: SupportInterval) -> f64 {
        integrate(|x| self.density(x), iv.lo, iv.hi)
    }

    /// `E(X : X in [lo, hi] x {0})`.
    fn conditional_mean(&self, iv: SupportInterval) -> Result<Point> {
        let mass = self.interval_mass(iv);
        if mass <= 0.0 {
            return Err(Error::ZeroMass {
                lo: iv.lo,
                hi: iv.hi,
            });
        }
        let moment = integrate(|x| x * self.density(x), iv.lo, iv.hi);
        Ok(Point::on_axis(moment / mass))
    }

    /// `int_iv rho((x, 0), cp) dP(x)`.
    fn interval_distortion(&self, iv: SupportInterval, cp: &ConstraintPoint) -> f64 {
        let c = cp.embed();
        integrate(
            |x| squared_distance(Point::on_axis(x), c) * self.density(x),
            iv.lo,
            iv.hi,
        )
    }
}

/// Uniform distribution on `J`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UniformSegmentMeasure;

impl SegmentMeasure for UniformSegmentMeasure {
    fn density(&self, x: f64) -> f64 {
        if (0.0..=1.0).contains(&x) {
            1.0
        } else {
            0.0
        }
    }

    fn interval_mass(&self, iv: SupportInterval) -> f64 {
        iv.len()
    }

    fn conditional_mean(&self, iv: SupportInterval) -> Result<Point> {
        if iv.is_empty() {
            return Err(Error::ZeroMass {
                lo: iv.lo,
                hi: iv.hi,
            });
        }
        Ok(Point::on_axis(0.5 * (iv.lo + iv.hi)))
    }

    fn interval_distortion(&self, iv: SupportInterval, cp: &ConstraintPoint) -> f64 {
        let (a, b) = (iv.lo, iv.hi);
        let Point { x: aq, y: bq } = cp.embed();
        (b - a) * (a * a - 3.0 * (a + b) * aq + a * b + 3.0 * aq * aq + b * b + 3.0 * bq * bq) / 3.0
    }
}

/// Measure on `J` with a user supplied density, integrated numerically.
pub struct DensityMeasure<F> {
    density: F,
}

impl<F: Fn(f64) -> f64> DensityMeasure<F> {
    pub fn new(density: F) -> Self {
        Self { density }
    }
}

impl<F: Fn(f64) -> f64> SegmentMeasure for DensityMeasure<F> {
    fn density(&self, x: f64) -> f64 {
        if (0.0..=1.0).contains(&x) {
            (self.density)(x)
        } else {
            0.0
        }
    }
}

/// Abscissa on `S_t` minimising the uniform distortion of `iv`,
/// `(a t + b t - 2) / (4 t)`.
pub fn optimal_abscissa(iv: SupportInterval, t: ConstraintIndex) -> f64 {
    let t = f64::from(t.get());
    (iv.lo * t + iv.hi * t - 2.0) / (4.0 * t)
}

/// Least uniform distortion of `iv` achievable by a single point of `S_t`.
pub fn optimal_interval_distortion(iv: SupportInterval, t: ConstraintIndex) -> f64 {
    let (a, b) = (iv.lo, iv.hi);
    let t = f64::from(t.get());
    (b - a) * (t * t * (5.0 * a * a + 2.0 * a * b + 5.0 * b * b) + 12.0 * t * (a + b) + 12.0)
        / (24.0 * t * t)
}

/// Adaptive Simpson quadrature to [`QUADRATURE_TOL`].
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    adaptive(&f, a, b, fa, fm, fb, whole, QUADRATURE_TOL, 48)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn iv(lo: f64, hi: f64) -> SupportInterval {
        SupportInterval::new(lo, hi).unwrap()
    }

    fn idx(j: u32) -> ConstraintIndex {
        ConstraintIndex::new(j).unwrap()
    }

    fn cp(j: u32, x: f64) -> ConstraintPoint {
        ConstraintPoint::new(idx(j), x).unwrap()
    }

    const U: UniformSegmentMeasure = UniformSegmentMeasure;

    /// Midpoint rule, kept independent of the closed forms above.
    fn midpoint(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|i| f(a + (i as f64 + 0.5) * h))
            .sum::<f64>()
            * h
    }

    #[test]
    fn interval_validation() {
        assert!(SupportInterval::new(-0.1, 0.5).is_err());
        assert!(SupportInterval::new(0.5, 1.1).is_err());
        assert!(SupportInterval::new(0.6, 0.5).is_err());
        assert!(SupportInterval::new(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn mass_examples() {
        assert_eq!(U.interval_mass(iv(0.0, 1.0)), 1.0);
        assert_eq!(U.interval_mass(iv(0.25, 0.75)), 0.5);
        assert_eq!(U.interval_mass(iv(1.0 / 3.0, 1.0 / 3.0)), 0.0);
    }

    #[test]
    fn conditional_mean_examples() {
        assert_eq!(
            U.conditional_mean(iv(0.0, 1.0)).unwrap(),
            Point::on_axis(0.5)
        );
        assert_eq!(
            U.conditional_mean(iv(0.5, 1.0)).unwrap(),
            Point::on_axis(0.75)
        );
        assert!(matches!(
            U.conditional_mean(iv(0.3, 0.3)),
            Err(Error::ZeroMass { .. })
        ));
    }

    #[test]
    fn interval_distortion_examples() {
        assert_abs_diff_eq!(
            U.interval_distortion(iv(0.0, 1.0), &cp(1, -0.25)),
            29.0 / 24.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            U.interval_distortion(iv(0.0, 1.0), &cp(1, 0.0)),
            4.0 / 3.0,
            epsilon = 1e-15
        );
        assert_eq!(U.interval_distortion(iv(0.4, 0.4), &cp(3, 0.2)), 0.0);
    }

    #[test]
    fn optimal_interval_distortion_examples() {
        assert_abs_diff_eq!(
            optimal_interval_distortion(iv(0.0, 1.0), idx(1)),
            29.0 / 24.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            optimal_interval_distortion(iv(0.0, 1.0), idx(2)),
            7.0 / 12.0,
            epsilon = 1e-15
        );
        assert_eq!(optimal_interval_distortion(iv(0.7, 0.7), idx(4)), 0.0);
        assert_eq!(optimal_abscissa(iv(0.0, 1.0), idx(1)), -0.25);
    }

    #[test]
    fn closed_form_matches_midpoint_rule() {
        // The midpoint error for a quadratic with leading coefficient 1 is
        // exactly (b - a)^3 / (12 m^2).
        for (a, b, j, x) in [
            (0.0, 1.0, 1, -0.25),
            (0.2, 0.9, 3, 0.4),
            (0.5, 0.6, 7, -0.1),
        ] {
            let p = cp(j, x);
            let exact = U.interval_distortion(iv(a, b), &p);
            for m in [1_000usize, 10_000] {
                let approx = midpoint(|t| squared_distance(Point::on_axis(t), p.embed()), a, b, m);
                let bound = (b - a).powi(3) / (12.0 * (m * m) as f64);
                assert!(
                    (exact - approx).abs() <= bound * 1.01 + 1e-12,
                    "{a} {b} m={m}"
                );
            }
        }
    }

    #[test]
    fn general_density_path() {
        let linear = DensityMeasure::new(|x| 2.0 * x);
        assert_abs_diff_eq!(
            linear.interval_mass(SupportInterval::unit()),
            1.0,
            epsilon = 1e-12
        );
        let mean = linear.conditional_mean(SupportInterval::unit()).unwrap();
        assert_abs_diff_eq!(mean.x, 2.0 / 3.0, epsilon = 1e-12);
        // A constant density must agree with the exact uniform path.
        let flat = DensityMeasure::new(|_| 1.0);
        let p = cp(2, 0.1);
        for (a, b) in [(0.0, 1.0), (0.25, 0.5), (0.1, 0.95)] {
            assert_abs_diff_eq!(
                flat.interval_distortion(iv(a, b), &p),
                U.interval_distortion(iv(a, b), &p),
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                flat.conditional_mean(iv(a, b)).unwrap().x,
                0.5 * (a + b),
                epsilon = 1e-12
            );
        }
        // Non-polynomial density exercises the adaptive refinement.
        let e = std::f64::consts::E;
        let exp = DensityMeasure::new(|x: f64| x.exp() / (e - 1.0));
        assert_abs_diff_eq!(
            exp.interval_mass(SupportInterval::unit()),
            1.0,
            epsilon = 1e-11
        );
        assert!(matches!(
            DensityMeasure::new(|_| 0.0).conditional_mean(SupportInterval::unit()),
            Err(Error::ZeroMass { .. })
        ));
    }

    #[test]
    fn centroid_minimises_unconstrained_distortion() {
        let cell = iv(0.2, 0.7);
        let c = U.conditional_mean(cell).unwrap();
        let cost = |p: Point| midpoint(|t| squared_distance(Point::on_axis(t), p), 0.2, 0.7, 2000);
        let base = cost(c);
        for (dx, dy) in [(1e-3, 0.0), (-1e-3, 0.0), (0.0, 1e-3), (0.0, -1e-3)] {
            assert!(cost(Point::new(c.x + dx, c.y + dy)) > base);
        }
    }

    fn any_interval() -> impl Strategy<Value = SupportInterval> {
        (0.0f64..1.0, 0.0f64..1.0)
            .prop_filter("positive length", |(u, v)| (u - v).abs() > 1e-6)
            .prop_map(|(u, v)| iv(u.min(v), u.max(v)))
    }

    proptest! {
        #[test]
        fn minimiser_attains_optimum(cell in any_interval(), t in 1u32..=30, eps in 1e-4f64..1e-2) {
            let t = idx(t);
            let x = optimal_abscissa(cell, t);
            let best = optimal_interval_distortion(cell, t);
            let at = U.interval_distortion(cell, &ConstraintPoint::new(t, x).unwrap());
            prop_assert!((at - best).abs() <= 1e-14);
            for dx in [eps, -eps] {
                let moved = U.interval_distortion(cell, &ConstraintPoint::new(t, x + dx).unwrap());
                prop_assert!(moved > best);
            }
        }

        #[test]
        fn optimum_strictly_decreasing_in_t(cell in any_interval(), t in 1u32..30) {
            prop_assert!(
                optimal_interval_distortion(cell, idx(t + 1)) < optimal_interval_distortion(cell, idx(t))
            );
        }
    }
}
