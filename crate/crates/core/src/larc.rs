//! Lie algebra rank condition on S².
//!
//! Pointwise, the rank of the system's Lie algebra at `s` is the rank of the
//! induced fields of the bracket generators evaluated at `s`. For general
//! pairs the condition is checked on a deterministic sample of the sphere;
//! for skew pairs it is decided exactly by `[A, B] ≠ 0`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::induced_fields::{bracket_closure, induced_field, matrix_bracket, SystemPair};
use crate::linalg3::{
    rank_at_most_2, real_eigen_directions, Matrix3, SkewMatrix3, UnitVector3, Vector3,
};

/// Default number of Fibonacci lattice points used by [`larc_global`].
pub const DEFAULT_SAMPLES: usize = 2000;

/// Two candidate points closer than this are treated as the same point.
const SAME_POINT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// Rank 2 at every sampled point. Not a proof for general pairs.
    SatisfiedSampled,
    /// Some evaluated point has rank below 2.
    Failed,
    /// Skew pair with `[A, B] ≠ 0`.
    SatisfiedAlgebraic,
}

impl Verdict {
    pub fn is_satisfied(self) -> bool {
        !matches!(self, Verdict::Failed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeficientPoint {
    pub point: UnitVector3,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LarcReport {
    pub sample_count: usize,
    pub min_rank: usize,
    pub deficient_points: Vec<DeficientPoint>,
    pub verdict: Verdict,
    pub depth: usize,
}

/// Rank of `{h_M(s) : M ∈ bracket_closure(A, B, depth)}`.
pub fn larc_at_point(sys: &SystemPair, s: &UnitVector3, depth: usize, tol: f64) -> usize {
    let generators = bracket_closure(&sys.a, &sys.b, depth.max(1));
    rank_with(&generators, s, tol)
}

fn rank_with(generators: &[Matrix3], s: &UnitVector3, tol: f64) -> usize {
    let cols: Vec<Vector3> = generators.iter().map(|m| induced_field(m, s)).collect();
    rank_at_most_2(&cols, tol)
}

/// `n` near-uniform points on S² along the golden-angle spiral.
pub fn fibonacci_lattice(n: usize) -> Vec<UnitVector3> {
    let golden_angle = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let (sin, cos) = (golden_angle * i as f64).sin_cos();
            UnitVector3::new_unchecked(Vector3::new(r * cos, r * sin, z))
        })
        .collect()
}

/// `±e1, ±e2, ±e3`.
pub fn axis_poles() -> Vec<UnitVector3> {
    [Vector3::e1(), Vector3::e2(), Vector3::e3()]
        .into_iter()
        .flat_map(|e| [e, -e])
        .map(UnitVector3::new_unchecked)
        .collect()
}

/// The evaluation set of [`larc_global`]: the Fibonacci lattice, the six axis
/// poles, and both signs of every real eigen-direction of the generators
/// (where induced fields vanish).
pub fn sample_points(generators: &[Matrix3], n_samples: usize) -> Vec<UnitVector3> {
    let mut points = fibonacci_lattice(n_samples);
    points.extend(axis_poles());
    let mut extra: Vec<UnitVector3> = Vec::new();
    for m in generators {
        for d in real_eigen_directions(m) {
            for cand in [d, -d] {
                let cand = UnitVector3::new_unchecked(cand);
                let seen = points
                    .iter()
                    .chain(extra.iter())
                    .any(|p| p.distance(&cand) <= SAME_POINT);
                if !seen {
                    extra.push(cand);
                }
            }
        }
    }
    points.extend(extra);
    points
}

/// Sampled rank check over [`sample_points`].
pub fn larc_global(sys: &SystemPair, n_samples: usize, depth: usize, tol: f64) -> LarcReport {
    let depth = depth.max(1);
    let generators = bracket_closure(&sys.a, &sys.b, depth);
    let points = sample_points(&generators, n_samples.max(1));
    let ranks: Vec<usize> = points
        .par_iter()
        .map(|s| rank_with(&generators, s, tol))
        .collect();

    let deficient_points: Vec<DeficientPoint> = points
        .iter()
        .zip(&ranks)
        .filter(|(_, &rank)| rank < 2)
        .map(|(&point, &rank)| DeficientPoint { point, rank })
        .collect();
    let verdict = if deficient_points.is_empty() {
        Verdict::SatisfiedSampled
    } else {
        Verdict::Failed
    };
    LarcReport {
        sample_count: points.len(),
        min_rank: ranks.iter().copied().min().unwrap_or(2),
        deficient_points,
        verdict,
        depth,
    }
}

/// Exact criterion for skew pairs: `max |[A, B]| > tol`.
pub fn larc_skew(a: &SkewMatrix3, b: &SkewMatrix3, tol: f64) -> Result<bool> {
    if !(a.rate() > tol) {
        return Err(Error::ZeroMatrix);
    }
    Ok(matrix_bracket(&a.materialize(), &b.materialize()).max_abs() > tol)
}

/// [`larc_skew`] packaged as a report.
///
/// A failing skew pair has `B ∥ A`; both fields vanish on the rotation axis
/// of `A`, which is reported (with both signs) as the witness.
pub fn larc_skew_report(
    a: &SkewMatrix3,
    b: &SkewMatrix3,
    depth: usize,
    tol: f64,
) -> Result<LarcReport> {
    let depth = depth.max(1);
    if larc_skew(a, b, tol)? {
        return Ok(LarcReport {
            sample_count: 0,
            min_rank: 2,
            deficient_points: Vec::new(),
            verdict: Verdict::SatisfiedAlgebraic,
            depth,
        });
    }
    let sys = SystemPair::new(a.materialize(), b.materialize());
    let generators = bracket_closure(&sys.a, &sys.b, depth);
    let axis = a.angular_velocity() * (1.0 / a.rate());
    let deficient_points: Vec<DeficientPoint> = [axis, -axis]
        .into_iter()
        .map(|v| {
            let point = UnitVector3::new_unchecked(v);
            DeficientPoint {
                point,
                rank: rank_with(&generators, &point, tol),
            }
        })
        .collect();
    Ok(LarcReport {
        sample_count: deficient_points.len(),
        min_rank: deficient_points.iter().map(|d| d.rank).min().unwrap_or(0),
        deficient_points,
        verdict: Verdict::Failed,
        depth,
    })
}
