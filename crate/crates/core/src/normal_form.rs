//! Orthogonal reduction of a skew pair `(A, B)` to the canonical drift block.
//!
//! Every nonzero skew `A` is conjugate to `[[0, a, 0], [−a, 0, 0], [0, 0, 0]]`
//! with `a = ‖A‖` (the rotation rate). Conjugating `B` by the same frame
//! yields the control parameters `(b1, b2, b3)`; the pair has a nonvanishing
//! bracket iff `b2² + b3² ≠ 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg3::{bracket, Matrix3, SkewMatrix3, Vector3};

/// Default tolerance of the degeneracy gates.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Reduced form of a skew pair.
///
/// The working frame is `F = P·Q`. In working coordinates `y = Fᵀx` the
/// drift is `skew(a, 0, 0)` and the control matrix is `skew(b1, b2, b3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalFormData {
    pub a: f64,
    #[serde(rename = "P")]
    pub p: Matrix3,
    #[serde(rename = "Q")]
    pub q: Matrix3,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    /// `b2² + b3²`.
    pub alpha: f64,
}

impl NormalFormData {
    /// Builds the data for a pair already in canonical coordinates (`P = Q = I`).
    pub fn canonical(a: f64, b1: f64, b2: f64, b3: f64) -> Self {
        Self {
            a,
            p: Matrix3::identity(),
            q: Matrix3::identity(),
            b1,
            b2,
            b3,
            alpha: b2 * b2 + b3 * b3,
        }
    }

    /// `P·Q`, mapping working coordinates to original coordinates.
    pub fn frame(&self) -> Matrix3 {
        self.p * self.q
    }

    pub fn drift(&self) -> SkewMatrix3 {
        SkewMatrix3::new(self.a, 0.0, 0.0)
    }

    pub fn control(&self) -> SkewMatrix3 {
        SkewMatrix3::new(self.b1, self.b2, self.b3)
    }

    /// `A + u·B` in working coordinates.
    pub fn generator(&self, u: f64) -> SkewMatrix3 {
        self.drift().add_scaled(&self.control(), u)
    }

    pub fn to_working(&self, x: Vector3) -> Vector3 {
        self.frame().transpose() * x
    }

    pub fn from_working(&self, y: Vector3) -> Vector3 {
        self.frame() * y
    }
}

/// Conjugation consistency of a reduction: `[J(A), B̃]` against `Pᵀ[A,B]P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugationCheck {
    /// `max |[J(A), B̃] − Pᵀ[A,B]P|`.
    pub residual: f64,
    pub original_bracket_nonzero: bool,
    pub reduced_bracket_nonzero: bool,
}

/// Returns `(a, P)` with `P` orthogonal and `PᵀAP = skew(a, 0, 0)`, `a > 0`.
///
/// The columns of `P` are the real eigenvector basis
/// `v1 = (−a1a3, a1a2, a2²+a3²)/(a√(a2²+a3²))`, `v2 = −(a2, a3, 0)/√(a2²+a3²)`,
/// `v3 = (a3, −a2, a1)/a`. When `a2² + a3² ≤ tol²` the matrix is already in
/// block form and `P` is the identity, or the half-turn about the first axis
/// if `a1 < 0`.
pub fn skew_normal_form(a_mat: &SkewMatrix3, tol: f64) -> Result<(f64, Matrix3)> {
    let SkewMatrix3 {
        p1: a1,
        p2: a2,
        p3: a3,
    } = *a_mat;
    let rate = a_mat.rate();
    if !(rate > tol) {
        return Err(Error::ZeroMatrix);
    }
    let off = a2 * a2 + a3 * a3;
    if off <= tol * tol {
        let p = if a1 >= 0.0 {
            Matrix3::identity()
        } else {
            Matrix3::diagonal(1.0, -1.0, -1.0)
        };
        return Ok((rate, p));
    }
    let root = off.sqrt();
    let v1 = Vector3::new(-a1 * a3, a1 * a2, off) * (1.0 / (rate * root));
    let v2 = Vector3::new(a2, a3, 0.0) * (-1.0 / root);
    let v3 = Vector3::new(a3, -a2, a1) * (1.0 / rate);
    Ok((rate, Matrix3::from_columns(v1, v2, v3)))
}

/// Conjugates the pair by the frame of [`skew_normal_form`]; `Q` is the identity.
pub fn reduce_system(a: &SkewMatrix3, b: &SkewMatrix3, tol: f64) -> Result<NormalFormData> {
    let (rate, p) = skew_normal_form(a, tol)?;
    let reduced = b.materialize().conjugate_by(&p);
    // exact skew part; conjugation only adds rounding to the diagonal
    let (b1, b2, b3) = (
        0.5 * (reduced[(0, 1)] - reduced[(1, 0)]),
        0.5 * (reduced[(0, 2)] - reduced[(2, 0)]),
        0.5 * (reduced[(1, 2)] - reduced[(2, 1)]),
    );
    Ok(NormalFormData {
        a: rate,
        p,
        q: Matrix3::identity(),
        b1,
        b2,
        b3,
        alpha: b2 * b2 + b3 * b3,
    })
}

/// Compares the reduced bracket with the conjugated original bracket.
pub fn conjugation_check(
    a: &SkewMatrix3,
    b: &SkewMatrix3,
    nf: &NormalFormData,
    tol: f64,
) -> ConjugationCheck {
    let frame = nf.frame();
    let original = bracket(&a.materialize(), &b.materialize());
    let reduced = bracket(&nf.drift().materialize(), &nf.control().materialize());
    ConjugationCheck {
        residual: (reduced - original.conjugate_by(&frame)).max_abs(),
        original_bracket_nonzero: original.max_abs() > tol,
        reduced_bracket_nonzero: reduced.max_abs() > tol,
    }
}

/// Rotation by `π/2` about the third axis.
fn quarter_turn() -> Matrix3 {
    Matrix3::new([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
}

/// Makes `b3` nonzero by conjugating with a quarter turn about the third axis.
///
/// The quarter turn commutes with the drift block, so only `(b1, b2, b3)`
/// change: the new parameters are `(b1, b3, −b2)`.
pub fn ensure_b3_nonzero(nf: &NormalFormData, tol: f64) -> Result<NormalFormData> {
    if !(nf.alpha > tol) {
        return Err(Error::BracketVanishes { alpha: nf.alpha });
    }
    if nf.b3.abs() > tol {
        return Ok(NormalFormData {
            q: Matrix3::identity(),
            ..*nf
        });
    }
    let q = quarter_turn();
    let rotated = nf.control().materialize().conjugate_by(&q);
    let (b1, b2, b3) = (
        0.5 * (rotated[(0, 1)] - rotated[(1, 0)]),
        0.5 * (rotated[(0, 2)] - rotated[(2, 0)]),
        0.5 * (rotated[(1, 2)] - rotated[(2, 1)]),
    );
    let out = NormalFormData {
        q: nf.q * q,
        b1,
        b2,
        b3,
        alpha: b2 * b2 + b3 * b3,
        ..*nf
    };
    if out.b3.abs() <= tol {
        return Err(Error::DegenerateB3 { b3: out.b3 });
    }
    Ok(out)
}

/// `reduce_system` followed by `ensure_b3_nonzero`.
pub fn working_frame(a: &SkewMatrix3, b: &SkewMatrix3, tol: f64) -> Result<NormalFormData> {
    ensure_b3_nonzero(&reduce_system(a, b, tol)?, tol)
}
