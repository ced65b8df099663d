//! Piecewise-constant steering between any two points of S².
//!
//! Plans are built in the working frame, where the drift rotates about the
//! third axis. The route leaves the start latitude on a pole circle, crosses
//! the equator by drift, and climbs the target-hemisphere pole circle to the
//! target latitude:
//!
//! ```text
//! drift → ride(u*) → drift → ride(u*) → drift
//! ```
//!
//! Legs of negligible length are dropped, so a plan has at most five
//! segments.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::dynamics::{pole_maneuver, ride_time_to_level_of, solve_constant_control, PoleManeuver};
use crate::error::{Error, Result};
use crate::linalg3::{rotation_exp, SkewMatrix3, UnitVector3, Vector3};
use crate::normal_form::{working_frame, NormalFormData};

/// Largest playback miss accepted for an emitted plan.
pub const PLAN_TOL: f64 = 1e-9;

/// Geometric gate for "on the equator", "at a pole" and "negligible
/// rotation". Kept well below [`PLAN_TOL`] so that snapping never costs
/// accuracy.
const GATE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlSegment {
    pub u: f64,
    pub duration: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteeringPlan {
    pub segments: Vec<ControlSegment>,
    /// Original coordinates; one more entry than `segments`.
    pub waypoints: Vec<UnitVector3>,
    pub total_time: f64,
    pub frame: NormalFormData,
    pub start: UnitVector3,
    pub target: UnitVector3,
}

impl SteeringPlan {
    pub fn endpoint(&self) -> UnitVector3 {
        *self.waypoints.last().unwrap_or(&self.start)
    }
}

/// Plans a transfer from `start` to `target` for the skew pair `(a, b)`.
pub fn plan(
    a: &SkewMatrix3,
    b: &SkewMatrix3,
    start: UnitVector3,
    target: UnitVector3,
    tol: f64,
) -> Result<SteeringPlan> {
    let nf = working_frame(a, b, tol)?;
    let y0 = UnitVector3::new_unchecked(nf.to_working(start.as_vector()));
    let y1 = UnitVector3::new_unchecked(nf.to_working(target.as_vector()));
    let mut plan = plan_normal_form(&nf, y0, y1, tol)?;
    for w in plan.waypoints.iter_mut() {
        *w = UnitVector3::new_unchecked(nf.from_working(w.as_vector()));
    }
    plan.waypoints[0] = start;
    plan.start = start;
    plan.target = target;
    let miss = plan.endpoint().distance(&target);
    if miss > PLAN_TOL {
        return Err(Error::InternalValidation { error: miss });
    }
    Ok(plan)
}

/// Plans in working coordinates; waypoints are returned in working
/// coordinates as well.
pub fn plan_normal_form(
    nf: &NormalFormData,
    s0: UnitVector3,
    s1: UnitVector3,
    tol: f64,
) -> Result<SteeringPlan> {
    if !(nf.alpha > tol) {
        return Err(Error::BracketVanishes { alpha: nf.alpha });
    }
    if !(nf.b3.abs() > tol) {
        return Err(Error::DegenerateB3 { b3: nf.b3 });
    }
    let mut route = Route::new(nf, s0);
    if s0.distance(&s1) > GATE {
        build_route(&mut route, nf, s0, s1, tol)?;
    }
    let miss = route.position.distance(&s1);
    if miss > PLAN_TOL {
        return Err(Error::InternalValidation { error: miss });
    }
    Ok(SteeringPlan {
        total_time: route.segments.iter().map(|s| s.duration).sum(),
        segments: route.segments,
        waypoints: route.waypoints,
        frame: *nf,
        start: s0,
        target: s1,
    })
}

fn build_route(
    route: &mut Route,
    nf: &NormalFormData,
    s0: UnitVector3,
    s1: UnitVector3,
    tol: f64,
) -> Result<()> {
    // Leg A: from the start latitude down to an anchor on the equator.
    if s0.z().abs() > GATE {
        let m0 = pole_maneuver(nf, s0.z().signum(), tol)?;
        if !at_pole(&s0) {
            // The circle crosses the start latitude at t0 and at period − t0;
            // the later crossing leaves only t0 of riding to the anchor.
            let t0 = ride_time_to_level_of(&m0, &s0)?;
            let q0 = solve_constant_control(nf, &m0.anchor, m0.u_star, -t0);
            route.drift_to(q0.as_vector());
            route.ride(&m0, t0);
        } else {
            route.ride(&m0, m0.half_period);
        }
    }

    // Legs B and C: along the equator, then up to the target latitude.
    if s1.z().abs() > GATE {
        let m1 = pole_maneuver(nf, s1.z().signum(), tol)?;
        route.drift_to(m1.anchor.as_vector());
        if !at_pole(&s1) {
            let t1 = ride_time_to_level_of(&m1, &s1)?;
            route.ride(&m1, t1);
            route.drift_to(s1.as_vector());
        } else {
            route.ride(&m1, m1.half_period);
        }
    } else {
        route.drift_to(s1.as_vector());
    }
    Ok(())
}

fn at_pole(s: &UnitVector3) -> bool {
    s.x().hypot(s.y()) <= GATE
}

/// Segments under construction, with exact playback of each appended leg.
struct Route<'a> {
    nf: &'a NormalFormData,
    position: UnitVector3,
    segments: Vec<ControlSegment>,
    waypoints: Vec<UnitVector3>,
}

impl<'a> Route<'a> {
    fn new(nf: &'a NormalFormData, start: UnitVector3) -> Self {
        Self {
            nf,
            position: start,
            segments: Vec::new(),
            waypoints: vec![start],
        }
    }

    fn push(&mut self, u: f64, duration: f64) {
        if duration * self.nf.generator(u).rate() <= GATE {
            return;
        }
        self.position = solve_constant_control(self.nf, &self.position, u, duration);
        self.segments.push(ControlSegment { u, duration });
        self.waypoints.push(self.position);
    }

    /// Drift until the azimuth matches that of `to`.
    fn drift_to(&mut self, to: Vector3) {
        let from = self.position;
        // under the drift the azimuth decreases at rate a
        let mut gap = (from.y().atan2(from.x()) - to.y.atan2(to.x)).rem_euclid(TAU);
        if gap >= TAU - GATE {
            gap = 0.0;
        }
        self.push(0.0, gap / self.nf.a);
    }

    fn ride(&mut self, m: &PoleManeuver, duration: f64) {
        self.push(m.u_star, duration);
    }
}

/// Replays `plan` from its start in original coordinates and returns the
/// largest deviation from the stored waypoints.
pub fn validate_plan(plan: &SteeringPlan, a: &SkewMatrix3, b: &SkewMatrix3) -> f64 {
    if plan.waypoints.len() != plan.segments.len() + 1 {
        return f64::INFINITY;
    }
    let mut s = plan.start.as_vector();
    let mut worst = s.distance(&plan.waypoints[0].as_vector());
    for (segment, waypoint) in plan.segments.iter().zip(&plan.waypoints[1..]) {
        s = rotation_exp(&a.add_scaled(b, segment.u), segment.duration) * s;
        worst = worst.max(s.distance(&waypoint.as_vector()));
    }
    worst
}
