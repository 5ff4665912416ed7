//! Constrained quantizers, their Voronoi partition of the support and the
//! Lloyd-style fixed-point solver on a single constraint.

use crate::error::{Error, Result};
use crate::geometry::{inverse_map, voronoi_breakpoint, ConstraintIndex, ConstraintPoint};
use crate::measure::{
    optimal_interval_distortion, SegmentMeasure, SupportInterval, UniformSegmentMeasure,
};

/// An ordered set of constraint points with strictly increasing feet.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantizer {
    points: Vec<ConstraintPoint>,
}

impl Quantizer {
    pub fn new(points: Vec<ConstraintPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidQuantizer("no points".into()));
        }
        for (i, w) in points.windows(2).enumerate() {
            let (f0, f1) = (w[0].foot(), w[1].foot());
            if f0 >= f1 {
                return Err(Error::InvalidQuantizer(format!(
                    "feet of points {i} and {} are not increasing ({f0} >= {f1})",
                    i + 1
                )));
            }
        }
        Ok(Self { points })
    }

    /// Points of `S_t` with the given feet.
    pub fn from_feet(t: ConstraintIndex, feet: &[f64]) -> Result<Self> {
        let points = feet
            .iter()
            .map(|&f| inverse_map(t, f))
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }

    pub fn points(&self) -> &[ConstraintPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn feet(&self) -> Vec<f64> {
        self.points.iter().map(ConstraintPoint::foot).collect()
    }

    /// The common constraint index, if every point lies on the same `S_j`.
    pub fn common_index(&self) -> Option<ConstraintIndex> {
        let j = self.points[0].index();
        self.points.iter().all(|p| p.index() == j).then_some(j)
    }
}

/// Voronoi breakpoints `0 = c_0 <= c_1 <= ... <= c_n = 1` on the support.
///
/// Cells may be empty when a breakpoint is clamped onto an end of `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    breakpoints: Vec<f64>,
}

impl Partition {
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn cells(&self) -> impl Iterator<Item = SupportInterval> + '_ {
        self.breakpoints
            .windows(2)
            .map(|w| SupportInterval::new(w[0], w[1]).expect("partition breakpoints lie in [0, 1]"))
    }
}

/// Restricts the Voronoi diagram of `q` to the support segment.
///
/// Along the x-axis, `rho((x, 0), (a, b)) = x^2 - 2 a x + a^2 + b^2`, so the
/// cells follow increasing plane abscissa. Every point owns a cell on the
/// line exactly when the consecutive breakpoints increase strictly.
pub fn partition_of(q: &Quantizer) -> Result<Partition> {
    let pts = q.points();
    let mut raw = Vec::with_capacity(pts.len().saturating_sub(1));
    for (i, w) in pts.windows(2).enumerate() {
        if w[0].abscissa() >= w[1].abscissa() {
            return Err(Error::InvalidQuantizer(format!(
                "plane abscissas of points {i} and {} are not increasing",
                i + 1
            )));
        }
        raw.push(voronoi_breakpoint(&w[0], &w[1])?);
    }
    if let Some(i) = raw.windows(2).position(|w| w[0] >= w[1]) {
        return Err(Error::InvalidQuantizer(format!(
            "point {} has no Voronoi cell on the x-axis",
            i + 1
        )));
    }
    let mut breakpoints = Vec::with_capacity(pts.len() + 1);
    breakpoints.push(0.0);
    breakpoints.extend(raw.into_iter().map(|c| c.clamp(0.0, 1.0)));
    breakpoints.push(1.0);
    Ok(Partition { breakpoints })
}

/// Uniform distortion of `q` over its Voronoi partition.
pub fn distortion(q: &Quantizer) -> Result<f64> {
    let partition = partition_of(q)?;
    Ok(distortion_over(q, &partition))
}

fn distortion_over(q: &Quantizer, partition: &Partition) -> f64 {
    partition
        .cells()
        .zip(q.points())
        .map(|(cell, p)| UniformSegmentMeasure.interval_distortion(cell, p))
        .sum()
}

/// Result of one Lloyd sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub quantizer: Quantizer,
    /// Largest foot displacement.
    pub movement: f64,
    /// Points whose centroid preimage fell off `S_t` and were clamped.
    pub clamped: Vec<usize>,
}

/// Moves every point to the preimage on `S_t` of its cell's conditional mean.
pub fn lloyd_sweep(q: &Quantizer, t: ConstraintIndex) -> Result<Sweep> {
    for (index, p) in q.points().iter().enumerate() {
        if p.index() != t {
            return Err(Error::ConstraintMismatch {
                index,
                found: p.index().get(),
                expected: t.get(),
            });
        }
    }
    let partition = partition_of(q)?;
    let mut points = Vec::with_capacity(q.len());
    let mut clamped = Vec::new();
    let mut movement = 0.0f64;
    for (index, (cell, old)) in partition.cells().zip(q.points()).enumerate() {
        let mean = UniformSegmentMeasure
            .conditional_mean(cell)
            .map_err(|_| Error::EmptyCell { index })?;
        let target = 0.5 * (mean.x - t.offset());
        let x = target.clamp(t.min_abscissa(), 1.0);
        if x != target {
            clamped.push(index);
        }
        let p = ConstraintPoint::new(t, x)?;
        movement = movement.max((p.foot() - old.foot()).abs());
        points.push(p);
    }
    Ok(Sweep {
        quantizer: Quantizer::new(points)?,
        movement,
        clamped,
    })
}

pub fn lloyd_step(q: &Quantizer, t: ConstraintIndex) -> Result<Quantizer> {
    lloyd_sweep(q, t).map(|s| s.quantizer)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    /// Midpoints `(2j - 1) / (2n)` shifted right by `0.1 / n` at odd `j`.
    EquispacedFeet,
    /// Explicit feet, one per point.
    Feet(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Stop once no foot moves by more than this in a sweep.
    pub tol: f64,
    pub max_iter: usize,
    pub init: Init,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-14,
            max_iter: 1_000_000,
            init: Init::EquispacedFeet,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOutcome {
    pub quantizer: Quantizer,
    pub distortion: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Sweeps in which at least one point had to be clamped onto `S_t`.
    pub clamp_events: usize,
}

pub fn initial_feet(n: usize, init: &Init) -> Result<Vec<f64>> {
    match init {
        Init::EquispacedFeet => {
            let nf = n as f64;
            Ok((1..=n)
                .map(|j| {
                    let f = (2 * j - 1) as f64 / (2.0 * nf);
                    if j % 2 == 1 {
                        f + 0.1 / nf
                    } else {
                        f
                    }
                })
                .collect())
        }
        Init::Feet(feet) if feet.len() == n => Ok(feet.clone()),
        Init::Feet(feet) => Err(Error::InvalidConfig(format!(
            "{} initial feet given for n = {n}",
            feet.len()
        ))),
    }
}

/// Iterates [`lloyd_sweep`] on `S_t` until the feet settle.
pub fn solve_fixed_constraint(
    n: usize,
    t: ConstraintIndex,
    cfg: &SolverConfig,
) -> Result<SolverOutcome> {
    if n == 0 {
        return Err(Error::InvalidCount {
            n: 0,
            max: u64::MAX,
        });
    }
    cfg.validate()?;
    let mut q = Quantizer::from_feet(t, &initial_feet(n, &cfg.init)?)?;
    let mut iterations = 0;
    let mut converged = false;
    let mut clamp_events = 0;
    while iterations < cfg.max_iter {
        let sweep = lloyd_sweep(&q, t)?;
        iterations += 1;
        if !sweep.clamped.is_empty() {
            clamp_events += 1;
        }
        q = sweep.quantizer;
        if sweep.movement <= cfg.tol {
            converged = true;
            break;
        }
    }
    let distortion = distortion(&q)?;
    Ok(SolverOutcome {
        quantizer: q,
        distortion,
        iterations,
        converged,
        clamp_events,
    })
}

/// The constraint among `S_1 ... S_n` whose best single point serves `iv`
/// with least distortion. Ties go to the lower index.
pub fn best_constraint_index(iv: SupportInterval, n: u32) -> Result<ConstraintIndex> {
    if n == 0 {
        return Err(Error::InvalidCount {
            n: 0,
            max: u64::from(u32::MAX),
        });
    }
    let mut best = ConstraintIndex::new(1)?;
    let mut best_value = optimal_interval_distortion(iv, best);
    for t in 2..=n {
        let t = ConstraintIndex::new(t)?;
        let value = optimal_interval_distortion(iv, t);
        if value < best_value {
            best = t;
            best_value = value;
        }
    }
    Ok(best)
}
