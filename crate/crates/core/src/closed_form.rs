//! Exact optimal quantizers and errors.
//!
//! The optimal `n`-point set lies on `S_n` with abscissas `(2j - 3) / (4n)`,
//! whose feet are the unconstrained optimal `n`-means `(2j - 1) / (2n)`, and
//! `V_n = (4n^2 + 12n + 13) / (24n^2)`. Quantities are formed as exact
//! rationals and rounded to `f64` once.

use num_rational::Ratio;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::geometry::{ConstraintIndex, ConstraintPoint};
use crate::quantizer::Quantizer;

/// Largest supported point count.
pub const MAX_N: u32 = i32::MAX as u32;

pub type Rational = Ratio<i128>;

fn check(n: u32) -> Result<i128> {
    if n == 0 || n > MAX_N {
        return Err(Error::InvalidCount {
            n: u64::from(n),
            max: u64::from(MAX_N),
        });
    }
    Ok(i128::from(n))
}

fn to_f64(r: Rational) -> f64 {
    r.to_f64().expect("bounded rational converts to f64")
}

pub fn vn_exact(n: u32) -> Result<Rational> {
    let n = check(n)?;
    Ok(Rational::new(4 * n * n + 12 * n + 13, 24 * n * n))
}

pub fn vn(n: u32) -> Result<f64> {
    vn_exact(n).map(to_f64)
}

pub fn v_infinity_exact() -> Rational {
    Rational::new(1, 6)
}

pub fn v_infinity() -> f64 {
    1.0 / 6.0
}

/// `V_n - V_inf = (12n + 13) / (24n^2)`.
pub fn excess_exact(n: u32) -> Result<Rational> {
    Ok(vn_exact(n)? - v_infinity_exact())
}

/// `n (V_n - V_inf) = (12n + 13) / (24n)`.
pub fn scaled_excess_exact(n: u32) -> Result<Rational> {
    let m = check(n)?;
    Ok(excess_exact(n)? * Rational::from_integer(m))
}

/// Abscissas `(2j - 3) / (4n)` on `S_n`.
pub fn optimal_abscissas_exact(n: u32) -> Result<Vec<Rational>> {
    let m = check(n)?;
    Ok((1..=m).map(|j| Rational::new(2 * j - 3, 4 * m)).collect())
}

pub fn optimal_points(n: u32) -> Result<Quantizer> {
    let t = ConstraintIndex::new(n)?;
    let points = optimal_abscissas_exact(n)?
        .into_iter()
        .map(|x| ConstraintPoint::new(t, to_f64(x)))
        .collect::<Result<Vec<_>>>()?;
    Quantizer::new(points)
}

pub fn unconstrained_means_exact(n: u32) -> Result<Vec<Rational>> {
    let m = check(n)?;
    Ok((1..=m).map(|j| Rational::new(2 * j - 1, 2 * m)).collect())
}

/// Optimal `n`-means of the uniform distribution on `[0, 1]`.
pub fn unconstrained_means(n: u32) -> Result<Vec<f64>> {
    Ok(unconstrained_means_exact(n)?
        .into_iter()
        .map(to_f64)
        .collect())
}

/// Constrained quantization dimension.
pub fn dimension() -> f64 {
    2.0
}

/// Constrained quantization coefficient at the dimension above.
pub fn coefficient() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormReport {
    pub n: u32,
    pub points: Quantizer,
    pub vn: f64,
    pub v_infinity: f64,
    pub excess: f64,
    pub scaled_excess: f64,
}

impl ClosedFormReport {
    pub fn new(n: u32) -> Result<Self> {
        Ok(Self {
            n,
            points: optimal_points(n)?,
            vn: vn(n)?,
            v_infinity: v_infinity(),
            excess: to_f64(excess_exact(n)?),
            scaled_excess: to_f64(scaled_excess_exact(n)?),
        })
    }
}
