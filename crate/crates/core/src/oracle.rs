//! Brute-force reference solutions.
//!
//! [`brute_force`] searches every assignment of points to `S_1 ... S_n` over
//! a grid of abscissas and polishes the winner by pattern search with a
//! halving step. [`riemann_distortion`] evaluates the distortion integral by
//! the midpoint rule with a pointwise minimum, sharing no partition logic with
//! [`crate::quantizer::distortion`].

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{
    feasible_foot_range, squared_distance, ConstraintIndex, ConstraintPoint, Point,
};
use crate::quantizer::{distortion, Quantizer, SolverOutcome};

/// Largest `n` the exhaustive search accepts.
pub const MAX_EXHAUSTIVE_N: u32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub grid_step: f64,
    /// Search `S_1 ... S_max_index`; must not exceed `n`.
    pub max_index: ConstraintIndex,
    pub refine_rounds: u32,
}

impl OracleConfig {
    /// Grid `1e-2`, three refinement rounds, all of `S_1 ... S_n`.
    pub fn for_n(n: u32) -> Result<Self> {
        Ok(Self {
            grid_step: 1e-2,
            max_index: ConstraintIndex::new(n)?,
            refine_rounds: 3,
        })
    }

    /// Grid resolution after all refinement rounds.
    pub fn final_step(&self) -> f64 {
        self.grid_step / f64::from(1u32 << self.refine_rounds.min(31))
    }
}

/// Abscissas of `S_j` whose feet land in `[0, 1]`, widened by one step on
/// each side and kept on the constraint.
fn grid(j: ConstraintIndex, step: f64) -> Vec<f64> {
    let (lo, hi) = feasible_foot_range(j);
    let start = (lo - step).max(j.min_abscissa());
    let end = (hi + step).min(1.0);
    let count = ((end - start) / step + 1e-9).floor() as usize;
    (0..=count).map(|k| start + k as f64 * step).collect()
}

#[derive(Debug, Clone)]
struct Candidate {
    distortion: f64,
    /// Tie-break key: positions in the (index, abscissa)-ordered candidate list.
    key: Vec<usize>,
    points: Vec<ConstraintPoint>,
}

impl Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.distortion
            .total_cmp(&other.distortion)
            .then_with(|| self.key.cmp(&other.key))
    }

    fn better(a: Option<Self>, b: Option<Self>) -> Option<Self> {
        match (a, b) {
            (Some(a), Some(b)) => Some(if b.cmp(&a) == Ordering::Less { b } else { a }),
            (a, None) => a,
            (None, b) => b,
        }
    }
}

/// Distortion of an unordered point set, or `None` when it does not form a
/// quantizer whose every point owns a cell.
fn evaluate(points: &[ConstraintPoint]) -> Option<(f64, Quantizer)> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.foot().total_cmp(&b.foot()));
    let q = Quantizer::new(sorted).ok()?;
    let d = distortion(&q).ok()?;
    Some((d, q))
}

fn combinations(len: usize, k: usize, first: usize, mut visit: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (first..first + k).collect();
    if first + k > len {
        return;
    }
    loop {
        visit(&idx);
        // Advance positions 1.. only; position 0 stays at `first`.
        let mut i = k;
        loop {
            if i <= 1 {
                return;
            }
            i -= 1;
            if idx[i] < len - (k - i) {
                break;
            }
        }
        idx[i] += 1;
        for m in i + 1..k {
            idx[m] = idx[m - 1] + 1;
        }
    }
}

fn coarse_search(n: usize, candidates: &[ConstraintPoint]) -> Option<Candidate> {
    (0..candidates.len())
        .into_par_iter()
        .map(|first| {
            let mut best: Option<Candidate> = None;
            let mut buf = Vec::with_capacity(n);
            combinations(candidates.len(), n, first, |combo| {
                buf.clear();
                buf.extend(combo.iter().map(|&i| candidates[i]));
                if let Some((d, _)) = evaluate(&buf) {
                    let c = Candidate {
                        distortion: d,
                        key: combo.to_vec(),
                        points: buf.clone(),
                    };
                    best = Candidate::better(best.take(), Some(c));
                }
            });
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(None, Candidate::better)
}

/// Pattern search over `{-step, 0, +step}^n` around the incumbent, keeping
/// each point on its constraint. Returns the number of evaluations.
fn refine(best: &mut Candidate, step: f64) -> usize {
    let n = best.points.len();
    let offsets = 3usize.pow(n as u32);
    let mut evaluations = 0;
    for _ in 0..256 {
        let mut improved: Option<(f64, Vec<ConstraintPoint>)> = None;
        for code in 0..offsets {
            let mut c = code;
            let mut moved = Vec::with_capacity(n);
            let mut valid = true;
            for p in &best.points {
                let shift = (c % 3) as f64 - 1.0;
                c /= 3;
                match ConstraintPoint::new(p.index(), p.abscissa() + shift * step) {
                    Ok(q) => moved.push(q),
                    Err(_) => valid = false,
                }
            }
            if !valid {
                continue;
            }
            evaluations += 1;
            if let Some((d, _)) = evaluate(&moved) {
                let incumbent = improved.as_ref().map_or(best.distortion, |x| x.0);
                if d < incumbent {
                    improved = Some((d, moved));
                }
            }
        }
        match improved {
            Some((d, pts)) => {
                best.distortion = d;
                best.points = pts;
            }
            None => break,
        }
    }
    evaluations
}

/// Exhaustive search for an optimal `n`-point set on `S_1 ... S_n`.
pub fn brute_force(n: u32, cfg: &OracleConfig) -> Result<SolverOutcome> {
    if n == 0 {
        return Err(Error::InvalidCount {
            n: 0,
            max: u64::from(MAX_EXHAUSTIVE_N),
        });
    }
    if n > MAX_EXHAUSTIVE_N {
        return Err(Error::Capability {
            n,
            max: MAX_EXHAUSTIVE_N,
        });
    }
    if !(cfg.grid_step > 0.0) || !cfg.grid_step.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "grid_step must be positive, got {}",
            cfg.grid_step
        )));
    }
    if cfg.max_index.get() > n {
        return Err(Error::InvalidConfig(format!(
            "max_index {} exceeds n = {n}",
            cfg.max_index
        )));
    }
    let candidates: Vec<ConstraintPoint> = (1..=cfg.max_index.get())
        .flat_map(|j| {
            let j = ConstraintIndex::new(j).expect("j >= 1");
            grid(j, cfg.grid_step)
                .into_iter()
                .map(move |x| ConstraintPoint::new(j, x).expect("grid stays on S_j"))
        })
        .collect();
    let n = n as usize;
    let mut best = coarse_search(n, &candidates)
        .ok_or_else(|| Error::InvalidConfig("grid too coarse to place the points".into()))?;
    let mut evaluations = candidates.len();
    let mut step = cfg.grid_step;
    for _ in 0..cfg.refine_rounds {
        step *= 0.5;
        evaluations += refine(&mut best, step);
    }
    let (d, quantizer) = evaluate(&best.points).expect("incumbent is always evaluable");
    Ok(SolverOutcome {
        quantizer,
        distortion: d,
        iterations: evaluations,
        converged: true,
        clamp_events: 0,
    })
}

/// Midpoint rule for `int_0^1 min_a rho((x, 0), a) dx` with `panels` panels.
pub fn riemann_distortion(q: &Quantizer, panels: usize) -> f64 {
    let panels = panels.max(1);
    let h = 1.0 / panels as f64;
    let centers: Vec<Point> = q.points().iter().map(ConstraintPoint::embed).collect();
    (0..panels)
        .map(|i| {
            let e = Point::on_axis((i as f64 + 0.5) * h);
            centers
                .iter()
                .map(|&c| squared_distance(e, c))
                .fold(f64::INFINITY, f64::min)
        })
        .sum::<f64>()
        * h
}
