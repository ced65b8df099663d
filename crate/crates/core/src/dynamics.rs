//! Constant-control flows of the reduced skew system.
//!
//! In working coordinates the generator is
//! `C(u) = skew(a + u·b1, u·b2, u·b3)`, whose nonzero eigenvalues are `±iβ`
//! with `β² = (a + u·b1)² + (u·b2)² + (u·b3)²`. Every constant-control
//! trajectory is a circle of S² traversed at angular rate `β`; trajectories
//! are evaluated through the rotation exponential.
//!
//! A *pole maneuver* is a control `u*` with `u*²·α = (a + u*·b1)²`. For such
//! controls the circle through the equator anchor `±(b3, −b2, 0)/√α` also
//! passes through a pole, and the latitude along the ride is
//! `±(1 − cos βt)/2`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg3::{rotation_exp, Matrix3, UnitVector3, Vector3};
use crate::normal_form::NormalFormData;

/// `√((a + u·b1)² + (u·b2)² + (u·b3)²)`.
pub fn beta(nf: &NormalFormData, u: f64) -> f64 {
    nf.generator(u).rate()
}

/// Eigen-expansion of a constant-control trajectory.
///
/// `s(t) = c1·v1 + c2·(cos βt·v2 − sin βt·v3) + c3·(cos βt·v3 + sin βt·v2)`
/// where `v1 = axis` spans the kernel of `C(u)` and `v2 + i·v3` is an
/// eigenvector for `iβ`. This is a second, independent route to the
/// trajectory; [`solve_constant_control`] is the one used for planning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormSolution {
    pub u: f64,
    pub beta: f64,
    /// `(u·b3, −u·b2, a + u·b1)`; `(0, 0, 1)` for the drift.
    pub axis: Vector3,
    pub v2: Vector3,
    pub v3: Vector3,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub s0: UnitVector3,
}

impl ClosedFormSolution {
    /// Builds the basis for control `u` and the coefficients matching `s0`.
    ///
    /// Fails with `BracketVanishes` when `u ≠ 0` and `alpha = 0` (the complex
    /// eigenvector used here is undefined there).
    pub fn new(nf: &NormalFormData, s0: UnitVector3, u: f64) -> Result<Self> {
        let (a, b1, b2, b3, alpha) = (nf.a, nf.b1, nf.b2, nf.b3, nf.alpha);
        let beta = beta(nf, u);
        let (axis, v2, v3) = if u == 0.0 {
            (Vector3::e3(), Vector3::e2(), -Vector3::e1())
        } else {
            if alpha == 0.0 {
                return Err(Error::BracketVanishes { alpha });
            }
            let w = a + u * b1;
            let k = 1.0 / (u * alpha);
            (
                Vector3::new(u * b3, -u * b2, w),
                Vector3::new(-b3 * w * k, b2 * w * k, 1.0),
                Vector3::new(-b2 * beta * k, -b3 * beta * k, 0.0),
            )
        };
        let basis = Matrix3::from_columns(axis, v2, v3);
        let det = basis.determinant();
        let x = s0.as_vector();
        // Cramer's rule for basis · (c1, c2, c3) = s0
        let c1 = Matrix3::from_columns(x, v2, v3).determinant() / det;
        let c2 = Matrix3::from_columns(axis, x, v3).determinant() / det;
        let c3 = Matrix3::from_columns(axis, v2, x).determinant() / det;
        Ok(Self {
            u,
            beta,
            axis,
            v2,
            v3,
            c1,
            c2,
            c3,
            s0,
        })
    }

    pub fn evaluate(&self, t: f64) -> Vector3 {
        let (sin, cos) = (self.beta * t).sin_cos();
        self.axis * self.c1
            + (self.v2 * cos - self.v3 * sin) * self.c2
            + (self.v3 * cos + self.v2 * sin) * self.c3
    }
}

/// Position at time `t` of the trajectory from `s0` under constant `u`.
pub fn solve_constant_control(
    nf: &NormalFormData,
    s0: &UnitVector3,
    u: f64,
    t: f64,
) -> UnitVector3 {
    UnitVector3::new_unchecked(rotation_exp(&nf.generator(u), t) * s0.as_vector())
}

/// A circle on S², described by its center inside the ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleData {
    pub center: Vector3,
    pub radius: f64,
    pub plane_normal: UnitVector3,
}

/// The circle traced from `s0` under constant control `u`.
pub fn trajectory_circle(
    nf: &NormalFormData,
    s0: &UnitVector3,
    u: f64,
    tol: f64,
) -> Result<CircleData> {
    let generator = nf.generator(u);
    let beta = generator.rate();
    if !(beta > tol) {
        return Err(Error::DegenerateRotation { beta });
    }
    let n = generator.angular_velocity() * (1.0 / beta);
    let height = s0.as_vector().dot(&n);
    Ok(CircleData {
        center: n * height,
        radius: (1.0 - height * height).max(0.0).sqrt(),
        plane_normal: UnitVector3::new_unchecked(n),
    })
}

/// The two controls with `u²·α = (a + u·b1)²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoleRoot {
    /// `u = a / (√α − b1)`.
    Primary,
    /// `u = −a / (√α + b1)`; equals `−a / (2√α)` when `b1 = √α`.
    Complementary,
}

/// The pole-reaching control for the given root, or `None` when its
/// denominator vanishes (within `tol`).
pub fn pole_control(nf: &NormalFormData, root: PoleRoot, tol: f64) -> Option<f64> {
    let sqrt_alpha = nf.alpha.sqrt();
    let denom = match root {
        PoleRoot::Primary => sqrt_alpha - nf.b1,
        PoleRoot::Complementary => sqrt_alpha + nf.b1,
    };
    if denom.abs() <= tol {
        return None;
    }
    Some(match root {
        PoleRoot::Primary => nf.a / denom,
        PoleRoot::Complementary => -nf.a / denom,
    })
}

/// Root used by [`pole_maneuver`]: the one with the larger denominator,
/// which keeps `|u*| ≤ a/√α` and `β(u*) ≤ √2·a`.
pub fn preferred_root(nf: &NormalFormData) -> PoleRoot {
    let sqrt_alpha = nf.alpha.sqrt();
    if (sqrt_alpha - nf.b1).abs() >= (sqrt_alpha + nf.b1).abs() {
        PoleRoot::Primary
    } else {
        PoleRoot::Complementary
    }
}

/// A constant-control ride from an equator anchor to a pole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoleManeuver {
    pub u_star: f64,
    pub beta: f64,
    /// `2π/β`.
    pub period: f64,
    /// `π/β`; the ride reaches the pole at this time.
    pub half_period: f64,
    pub anchor: UnitVector3,
    pub pole: UnitVector3,
    /// `+1` for `(0, 0, 1)`, `−1` for `(0, 0, −1)`.
    pub hemisphere_sign: f64,
}

/// Pole maneuver reaching `(0, 0, target_pole)` with `target_pole = ±1`.
pub fn pole_maneuver(nf: &NormalFormData, target_pole: f64, tol: f64) -> Result<PoleManeuver> {
    let root = preferred_root(nf);
    let u = pole_control_checked(nf, root, tol)?;
    maneuver_for_control(nf, u, target_pole)
}

/// Pole maneuver for an explicit root choice.
pub fn pole_maneuver_with(
    nf: &NormalFormData,
    root: PoleRoot,
    target_pole: f64,
    tol: f64,
) -> Result<PoleManeuver> {
    let u = pole_control_checked(nf, root, tol)?;
    maneuver_for_control(nf, u, target_pole)
}

fn pole_control_checked(nf: &NormalFormData, root: PoleRoot, tol: f64) -> Result<f64> {
    if !(nf.alpha > tol) {
        return Err(Error::BracketVanishes { alpha: nf.alpha });
    }
    if !(nf.b3.abs() > tol) {
        return Err(Error::DegenerateB3 { b3: nf.b3 });
    }
    pole_control(nf, root, tol).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "pole control {root:?} is singular for b1 = {}",
            nf.b1
        ))
    })
}

fn maneuver_for_control(nf: &NormalFormData, u: f64, target_pole: f64) -> Result<PoleManeuver> {
    if target_pole.abs() != 1.0 {
        return Err(Error::InvalidArgument(format!(
            "target pole must be ±1, got {target_pole}"
        )));
    }
    let sqrt_alpha = nf.alpha.sqrt();
    let beta = beta(nf, u);
    let half_period = PI / beta;
    let pole = UnitVector3::new_unchecked(Vector3::new(0.0, 0.0, target_pole));
    let anchor_plus = Vector3::new(nf.b3, -nf.b2, 0.0) * (1.0 / sqrt_alpha);

    // From +anchor the ride climbs towards sign((a + u·b1)/(u·√α)).
    let climbs = ((nf.a + u * nf.b1) / (u * sqrt_alpha)).signum();
    let mut anchor = if climbs == target_pole {
        anchor_plus
    } else {
        -anchor_plus
    };
    let lands = |anchor: Vector3| {
        solve_constant_control(nf, &UnitVector3::new_unchecked(anchor), u, half_period)
            .distance(&pole)
    };
    if lands(anchor) > 1e-9 {
        anchor = -anchor;
    }
    let miss = lands(anchor);
    if miss > 1e-9 {
        return Err(Error::InternalValidation { error: miss });
    }
    Ok(PoleManeuver {
        u_star: u,
        beta,
        period: 2.0 * half_period,
        half_period,
        anchor: UnitVector3::new_unchecked(anchor),
        pole,
        hemisphere_sign: target_pole,
    })
}

/// Third coordinate after riding `m` for time `t` from its anchor.
pub fn latitude_on_pole_circle(m: &PoleManeuver, t: f64) -> f64 {
    m.hemisphere_sign * (0.5 * m.beta * t).sin().powi(2)
}

/// Smallest `t ≥ 0` at which the ride reaches latitude `z`.
pub fn solve_latitude(m: &PoleManeuver, z: f64) -> Result<f64> {
    let level = m.hemisphere_sign * z;
    if !(0.0..=1.0).contains(&level) {
        return Err(Error::LatitudeOutOfRange {
            z,
            hemisphere: m.hemisphere_sign,
        });
    }
    // arccos(1 − 2|z|) written without the cancellation near z = 0
    Ok(2.0 * level.sqrt().asin() / m.beta)
}

/// The other crossing of latitude `z` within one period, on the way back
/// down from the pole: `period − solve_latitude(m, z)`.
pub fn descent_time(m: &PoleManeuver, z: f64) -> Result<f64> {
    Ok(m.period - solve_latitude(m, z)?)
}

/// Smallest ride time at which the polar distance from `m.pole` equals that
/// of `s`.
///
/// Same crossing as [`solve_latitude`] at `s.z`, but computed from the polar
/// angle so it stays well conditioned next to the pole.
pub fn ride_time_to_level_of(m: &PoleManeuver, s: &UnitVector3) -> Result<f64> {
    let level = m.hemisphere_sign * s.z();
    if level < 0.0 {
        return Err(Error::LatitudeOutOfRange {
            z: s.z(),
            hemisphere: m.hemisphere_sign,
        });
    }
    let polar = s.x().hypot(s.y()).atan2(level);
    // cos θ = sin²(βt/2); with βt = π − 2δ this is sin δ = √2·sin(θ/2)
    let delta = (2f64.sqrt() * (0.5 * polar).sin()).min(1.0).asin();
    Ok((PI - 2.0 * delta) / m.beta)
}
