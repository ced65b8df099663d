//! Fixed-step RK4 integration of `ṡ = h_A(s) + u·h_B(s)`.
//!
//! Skew pairs are integrated as the linear system `ṡ = (A + uB)s`, which
//! coincides with the induced field on S² but leaves norm drift observable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::induced_fields::SystemPair;
use crate::linalg3::{UnitVector3, Vector3};
use crate::planner::{ControlSegment, SteeringPlan};

/// Radius of the ball outside which a state is declared diverged.
const SANITY_RADIUS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    pub step: f64,
    /// Project each accepted state back onto S².
    pub renormalize: bool,
    /// Record every `stride`-th step (segment ends are always recorded).
    pub stride: usize,
}

impl IntegrateOptions {
    /// Renormalization on for general pairs, off for skew pairs.
    pub fn for_system(sys: &SystemPair, step: f64) -> Self {
        Self {
            step,
            renormalize: !sys.skew,
            stride: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub s: Vector3,
    pub u: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub renormalized: bool,
}

impl Trajectory {
    pub fn endpoint(&self) -> Vector3 {
        self.samples.last().map(|s| s.s).unwrap_or(Vector3::ZERO)
    }
}

/// Integrates `schedule` from `s0`, recording samples.
pub fn integrate(
    sys: &SystemPair,
    s0: &UnitVector3,
    schedule: &[ControlSegment],
    opts: &IntegrateOptions,
) -> Result<Trajectory> {
    let mut samples = vec![Sample {
        t: 0.0,
        s: s0.as_vector(),
        u: schedule.first().map_or(0.0, |seg| seg.u),
    }];
    run(sys, s0, schedule, opts, |t, s, u, boundary, k| {
        if boundary || k % opts.stride.max(1) == 0 {
            samples.push(Sample { t, s, u });
        }
    })?;
    Ok(Trajectory {
        samples,
        renormalized: opts.renormalize,
    })
}

/// Integrates `schedule` from `s0` and returns only the final state.
pub fn integrate_endpoint(
    sys: &SystemPair,
    s0: &UnitVector3,
    schedule: &[ControlSegment],
    opts: &IntegrateOptions,
) -> Result<Vector3> {
    let mut end = s0.as_vector();
    run(sys, s0, schedule, opts, |_, s, _, _, _| end = s)?;
    Ok(end)
}

/// `‖RK4 endpoint of plan.segments from plan.start − plan.target‖`, using the
/// default renormalization for `sys`.
pub fn endpoint_error(sys: &SystemPair, plan: &SteeringPlan, step: f64) -> Result<f64> {
    let opts = IntegrateOptions::for_system(sys, step);
    let end = integrate_endpoint(sys, &plan.start, &plan.segments, &opts)?;
    Ok(end.distance(&plan.target.as_vector()))
}

fn run(
    sys: &SystemPair,
    s0: &UnitVector3,
    schedule: &[ControlSegment],
    opts: &IntegrateOptions,
    mut record: impl FnMut(f64, Vector3, f64, bool, usize),
) -> Result<()> {
    if !(opts.step > 0.0 && opts.step.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "step must be positive, got {}",
            opts.step
        )));
    }
    if let Some(bad) = schedule
        .iter()
        .find(|seg| !(seg.duration >= 0.0 && seg.duration.is_finite() && seg.u.is_finite()))
    {
        return Err(Error::InvalidArgument(format!("invalid segment {bad:?}")));
    }
    let mut s = s0.as_vector();
    let mut t_start = 0.0;
    let mut k = 0;
    for seg in schedule {
        if seg.duration == 0.0 {
            continue;
        }
        let m = sys.combined(seg.u);
        let rhs = |x: Vector3| if sys.skew { m * x } else { sys.field(x, seg.u) };
        let t_end = t_start + seg.duration;
        // the last step is shortened to land exactly on t_end
        let steps = ((seg.duration / opts.step) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        for i in 1..=steps {
            let last = i == steps;
            let h = if last {
                t_end - (t_start + (i - 1) as f64 * opts.step)
            } else {
                opts.step
            };
            s = rk4_step(&rhs, s, h);
            if opts.renormalize {
                s = s * (1.0 / s.norm());
            }
            k += 1;
            let t = if last {
                t_end
            } else {
                t_start + i as f64 * opts.step
            };
            let norm = s.norm();
            if !s.is_finite() || norm > SANITY_RADIUS {
                return Err(Error::NonFiniteState { t, norm });
            }
            record(t, s, seg.u, last, k);
        }
        t_start = t_end;
    }
    Ok(())
}

fn rk4_step(f: &impl Fn(Vector3) -> Vector3, s: Vector3, h: f64) -> Vector3 {
    let k1 = f(s);
    let k2 = f(s + k1 * (0.5 * h));
    let k3 = f(s + k2 * (0.5 * h));
    let k4 = f(s + k3 * h);
    s + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0)
}
