//! Vector fields induced on S² by linear maps, and their brackets.
//!
//! The map `M ↦ h_M` with `h_M(s) = Ms − ⟨Ms, s⟩s` is a Lie algebra
//! homomorphism, so brackets are taken on matrices and only pushed to S² at
//! evaluation points.

use serde::{Deserialize, Serialize};

use crate::linalg3::{bracket, Matrix3, UnitVector3, Vector3};

/// Threshold on `max |M + Mᵀ|` for classifying a matrix as skew.
pub const SKEW_TOL: f64 = 1e-9;

/// Default finite-difference step of [`field_bracket_check`].
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Default number of bracket levels generated by [`bracket_closure`].
pub const DEFAULT_DEPTH: usize = 3;

/// Proportionality threshold used when deduplicating bracket generators.
const CLOSURE_TOL: f64 = 1e-9;

/// The pair `(A, B)` of a bilinear system `ẋ = Ax + uBx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemPair {
    #[serde(rename = "A")]
    pub a: Matrix3,
    #[serde(rename = "B")]
    pub b: Matrix3,
    pub skew: bool,
}

impl SystemPair {
    pub fn new(a: Matrix3, b: Matrix3) -> Self {
        let skew = a.is_skew(SKEW_TOL) && b.is_skew(SKEW_TOL);
        Self { a, b, skew }
    }

    /// `A + u·B`.
    pub fn combined(&self, u: f64) -> Matrix3 {
        self.a + self.b.scale(u)
    }

    /// Right-hand side `h_A(s) + u·h_B(s)` of the induced system.
    pub fn field(&self, s: Vector3, u: f64) -> Vector3 {
        induced_field_at(&self.a, s) + u * induced_field_at(&self.b, s)
    }
}

/// `h_M(s) = Ms − ⟨Ms, s⟩s`.
pub fn induced_field(m: &Matrix3, s: &UnitVector3) -> Vector3 {
    induced_field_at(m, s.as_vector())
}

/// The same formula evaluated at an arbitrary point of R³.
pub fn induced_field_at(m: &Matrix3, s: Vector3) -> Vector3 {
    let ms = *m * s;
    ms - s * ms.dot(&s)
}

/// `[A, B] = AB − BA`.
pub fn matrix_bracket(a: &Matrix3, b: &Matrix3) -> Matrix3 {
    bracket(a, b)
}

/// `‖[h_A, h_B](s) − h_[A,B](s)‖` where the field bracket
/// `dh_A(h_B) − dh_B(h_A)` is computed by central differences of step `h`.
pub fn field_bracket_check(a: &Matrix3, b: &Matrix3, s: &UnitVector3, h: f64) -> f64 {
    let s = s.as_vector();
    let directional = |m: &Matrix3, v: Vector3| {
        (induced_field_at(m, s + v * h) - induced_field_at(m, s - v * h)) * (0.5 / h)
    };
    let numeric = directional(a, induced_field_at(b, s)) - directional(b, induced_field_at(a, s));
    numeric.distance(&induced_field_at(&matrix_bracket(a, b), s))
}

/// Matrix generators of the bracket closure up to `depth` levels.
///
/// Level 1 is `{A, B}`. Each further level brackets `A` and `B` with the
/// elements added at the previous level; results that vanish or are
/// proportional to an element already present are dropped.
pub fn bracket_closure(a: &Matrix3, b: &Matrix3, depth: usize) -> Vec<Matrix3> {
    let mut all = vec![*a, *b];
    let mut frontier = all.clone();
    for _ in 1..depth {
        let mut next = Vec::new();
        for base in [a, b] {
            for m in &frontier {
                let c = matrix_bracket(base, m);
                let scale = (base.frobenius() * m.frobenius()).max(1.0);
                if c.frobenius() <= CLOSURE_TOL * scale {
                    continue;
                }
                if all.iter().chain(next.iter()).any(|x| proportional(x, &c)) {
                    continue;
                }
                next.push(c);
            }
        }
        if next.is_empty() {
            break;
        }
        all.extend_from_slice(&next);
        frontier = next;
    }
    all
}

fn proportional(x: &Matrix3, y: &Matrix3) -> bool {
    let (nx, ny) = (x.frobenius(), y.frobenius());
    if nx == 0.0 || ny == 0.0 {
        return nx == ny;
    }
    let (ux, uy) = (x.scale(1.0 / nx), y.scale(1.0 / ny));
    (ux - uy).max_abs() <= CLOSURE_TOL || (ux + uy).max_abs() <= CLOSURE_TOL
}
