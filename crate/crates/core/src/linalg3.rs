//! Fixed-size 3D vectors and matrices.
//!
//! Only what the sphere dynamics need: products, brackets, the skew
//! parametrization, the exponential of a skew matrix and a pairwise rank test
//! for tangent vectors.

use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `| ‖v‖ − 1 |` accepted by [`UnitVector3::new`].
pub const DEFAULT_UNIT_TOL: f64 = 1e-9;

/// Default tolerance of [`rank_at_most_2`].
pub const DEFAULT_SCALE_TOL: f64 = 1e-9;

/// Below this rotation rate `rotation_exp` switches to the series limits.
const SMALL_RATE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vector3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vector3 {
    pub const ZERO: Vector3 = Vector3::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn e1() -> Self {
        Self::new(1.0, 0.0, 0.0)
    }

    pub fn e2() -> Self {
        Self::new(0.0, 1.0, 0.0)
    }

    pub fn e3() -> Self {
        Self::new(0.0, 0.0, 1.0)
    }

    pub fn dot(&self, other: &Vector3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &Vector3) -> Vector3 {
        cross(*self, *other)
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y).hypot(self.z)
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn distance(&self, other: &Vector3) -> f64 {
        (*self - *other).norm()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// Standard cross product.
pub fn cross(u: Vector3, v: Vector3) -> Vector3 {
    Vector3::new(
        u.y * v.z - u.z * v.y,
        u.z * v.x - u.x * v.z,
        u.x * v.y - u.y * v.x,
    )
}

impl From<[f64; 3]> for Vector3 {
    fn from(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl From<Vector3> for [f64; 3] {
    fn from(v: Vector3) -> Self {
        v.to_array()
    }
}

impl Add for Vector3 {
    type Output = Vector3;
    fn add(self, rhs: Vector3) -> Vector3 {
        Vector3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl AddAssign for Vector3 {
    fn add_assign(&mut self, rhs: Vector3) {
        *self = *self + rhs;
    }
}

impl Sub for Vector3 {
    type Output = Vector3;
    fn sub(self, rhs: Vector3) -> Vector3 {
        Vector3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Neg for Vector3 {
    type Output = Vector3;
    fn neg(self) -> Vector3 {
        Vector3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vector3 {
    type Output = Vector3;
    fn mul(self, k: f64) -> Vector3 {
        Vector3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Mul<Vector3> for f64 {
    type Output = Vector3;
    fn mul(self, v: Vector3) -> Vector3 {
        v * self
    }
}

/// A point of S², i.e. a vector whose norm is 1 up to the unit tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct UnitVector3(Vector3);

impl UnitVector3 {
    /// Accepts `v` when `| ‖v‖ − 1 | ≤ tol`; the vector is stored as given.
    pub fn new(v: Vector3, tol: f64) -> Result<Self> {
        let norm = v.norm();
        if !v.is_finite() || (norm - 1.0).abs() > tol {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self(v))
    }

    /// Projects a nonzero finite vector onto the sphere.
    pub fn normalize(v: Vector3) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self(v * (1.0 / norm)))
    }

    /// Wraps `v` without checking. Callers guarantee `v` is on S² up to rounding.
    pub(crate) fn new_unchecked(v: Vector3) -> Self {
        Self(v)
    }

    pub fn xyz(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::new(Vector3::new(x, y, z), DEFAULT_UNIT_TOL)
    }

    pub fn e1() -> Self {
        Self(Vector3::e1())
    }

    pub fn e2() -> Self {
        Self(Vector3::e2())
    }

    pub fn e3() -> Self {
        Self(Vector3::e3())
    }

    pub fn as_vector(&self) -> Vector3 {
        self.0
    }

    pub fn x(&self) -> f64 {
        self.0.x
    }

    pub fn y(&self) -> f64 {
        self.0.y
    }

    pub fn z(&self) -> f64 {
        self.0.z
    }

    pub fn distance(&self, other: &UnitVector3) -> f64 {
        self.0.distance(&other.0)
    }
}

impl TryFrom<[f64; 3]> for UnitVector3 {
    type Error = Error;
    fn try_from(a: [f64; 3]) -> Result<Self> {
        Self::new(a.into(), DEFAULT_UNIT_TOL)
    }
}

impl From<UnitVector3> for [f64; 3] {
    fn from(v: UnitVector3) -> Self {
        v.0.to_array()
    }
}

impl From<UnitVector3> for Vector3 {
    fn from(v: UnitVector3) -> Self {
        v.0
    }
}

/// A 3×3 real matrix, stored row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matrix3 {
    pub rows: [[f64; 3]; 3],
}

impl Matrix3 {
    pub const fn new(rows: [[f64; 3]; 3]) -> Self {
        Self { rows }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::diagonal(1.0, 1.0, 1.0)
    }

    pub fn diagonal(d0: f64, d1: f64, d2: f64) -> Self {
        Self::new([[d0, 0.0, 0.0], [0.0, d1, 0.0], [0.0, 0.0, d2]])
    }

    pub fn from_columns(c0: Vector3, c1: Vector3, c2: Vector3) -> Self {
        Self::new([[c0.x, c1.x, c2.x], [c0.y, c1.y, c2.y], [c0.z, c1.z, c2.z]])
    }

    pub fn row(&self, i: usize) -> Vector3 {
        self.rows[i].into()
    }

    pub fn column(&self, j: usize) -> Vector3 {
        Vector3::new(self.rows[0][j], self.rows[1][j], self.rows[2][j])
    }

    pub fn transpose(&self) -> Self {
        let m = &self.rows;
        Self::new([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn mul_vec(&self, v: Vector3) -> Vector3 {
        Vector3::new(
            self.row(0).dot(&v),
            self.row(1).dot(&v),
            self.row(2).dot(&v),
        )
    }

    pub fn scale(&self, k: f64) -> Self {
        self.map(|x| x * k)
    }

    pub fn trace(&self) -> f64 {
        self.rows[0][0] + self.rows[1][1] + self.rows[2][2]
    }

    pub fn determinant(&self) -> f64 {
        self.row(0).dot(&self.row(1).cross(&self.row(2)))
    }

    /// Max-norm: the largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.rows
            .iter()
            .flatten()
            .fold(0.0, |acc, x| acc.max(x.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        self.rows
            .iter()
            .flatten()
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.rows.iter().flatten().all(|x| x.is_finite())
    }

    /// `max |M + Mᵀ|`.
    pub fn skew_residual(&self) -> f64 {
        (*self + self.transpose()).max_abs()
    }

    pub fn is_skew(&self, tol: f64) -> bool {
        self.skew_residual() <= tol
    }

    /// Conjugation `Fᵀ M F` for an orthogonal `F`.
    pub fn conjugate_by(&self, frame: &Matrix3) -> Matrix3 {
        frame.transpose() * *self * *frame
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let mut out = *self;
        out.rows.iter_mut().flatten().for_each(|x| *x = f(*x));
        out
    }

    fn zip(&self, other: &Matrix3, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut out = *self;
        for i in 0..3 {
            for j in 0..3 {
                out.rows[i][j] = f(self.rows[i][j], other.rows[i][j]);
            }
        }
        out
    }
}

impl Index<(usize, usize)> for Matrix3 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.rows[i][j]
    }
}

impl Add for Matrix3 {
    type Output = Matrix3;
    fn add(self, rhs: Matrix3) -> Matrix3 {
        self.zip(&rhs, |a, b| a + b)
    }
}

impl Sub for Matrix3 {
    type Output = Matrix3;
    fn sub(self, rhs: Matrix3) -> Matrix3 {
        self.zip(&rhs, |a, b| a - b)
    }
}

impl Mul for Matrix3 {
    type Output = Matrix3;
    fn mul(self, rhs: Matrix3) -> Matrix3 {
        let mut out = Matrix3::zero();
        for i in 0..3 {
            for j in 0..3 {
                out.rows[i][j] = (0..3).map(|k| self.rows[i][k] * rhs.rows[k][j]).sum();
            }
        }
        out
    }
}

impl Mul<Vector3> for Matrix3 {
    type Output = Vector3;
    fn mul(self, v: Vector3) -> Vector3 {
        self.mul_vec(v)
    }
}

/// Matrix bracket `AB − BA`.
pub fn bracket(a: &Matrix3, b: &Matrix3) -> Matrix3 {
    *a * *b - *b * *a
}

/// Skew-symmetric matrix `[[0, p1, p2], [−p1, 0, p3], [−p2, −p3, 0]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SkewMatrix3 {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

impl SkewMatrix3 {
    pub const fn new(p1: f64, p2: f64, p3: f64) -> Self {
        Self { p1, p2, p3 }
    }

    pub fn materialize(&self) -> Matrix3 {
        let Self { p1, p2, p3 } = *self;
        Matrix3::new([[0.0, p1, p2], [-p1, 0.0, p3], [-p2, -p3, 0.0]])
    }

    /// Reads the parameters of `m`, failing when `max |M + Mᵀ| > tol`.
    ///
    /// The upper triangle is taken verbatim so that extraction inverts
    /// [`SkewMatrix3::materialize`] exactly.
    pub fn extract(m: &Matrix3, tol: f64) -> Result<Self> {
        let residual = m.skew_residual();
        if residual > tol || !m.is_finite() {
            return Err(Error::NotSkew { residual });
        }
        Ok(Self::new(m[(0, 1)], m[(0, 2)], m[(1, 2)]))
    }

    /// The vector `ω` with `M v = ω × v`; it spans the kernel of `M`.
    pub fn angular_velocity(&self) -> Vector3 {
        Vector3::new(-self.p3, self.p2, -self.p1)
    }

    /// Rotation rate `‖ω‖`; the nonzero eigenvalues of `M` are `±i·rate`.
    pub fn rate(&self) -> f64 {
        self.angular_velocity().norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.p1.abs().max(self.p2.abs()).max(self.p3.abs())
    }

    /// `self + k·other`.
    pub fn add_scaled(&self, other: &SkewMatrix3, k: f64) -> SkewMatrix3 {
        SkewMatrix3::new(
            self.p1 + k * other.p1,
            self.p2 + k * other.p2,
            self.p3 + k * other.p3,
        )
    }

    pub fn apply(&self, v: Vector3) -> Vector3 {
        self.angular_velocity().cross(&v)
    }
}

/// `exp(t·C)` for skew `C`, via the Rodrigues form
/// `I + sin(βt)/β · C + (1 − cos βt)/β² · C²` with `β` the rotation rate of `C`.
pub fn rotation_exp(c: &SkewMatrix3, t: f64) -> Matrix3 {
    let m = c.materialize();
    let m2 = m * m;
    let beta = c.rate();
    let (sin_coef, cos_coef) = if beta < SMALL_RATE {
        (t, 0.5 * t * t)
    } else {
        let half = 0.5 * beta * t;
        // 1 − cos(βt) = 2 sin²(βt/2), which keeps full precision for small βt
        ((beta * t).sin() / beta, 2.0 * (half.sin() / beta).powi(2))
    };
    Matrix3::identity() + m.scale(sin_coef) + m2.scale(cos_coef)
}

/// Rank (0, 1 or 2) of a family of vectors tangent to S² at a common point.
///
/// The family has rank 2 iff some pair satisfies
/// `‖cᵢ × cⱼ‖ > tol · max(1, ‖cᵢ‖‖cⱼ‖)`; rank 1 iff not rank 2 and some
/// `‖cᵢ‖ > tol`. Tangency caps the true rank at 2, so pairwise tests suffice.
pub fn rank_at_most_2(cols: &[Vector3], scale_tol: f64) -> usize {
    for (i, ci) in cols.iter().enumerate() {
        for cj in &cols[i + 1..] {
            let scale = (ci.norm() * cj.norm()).max(1.0);
            if ci.cross(cj).norm() > scale_tol * scale {
                return 2;
            }
        }
    }
    if cols.iter().any(|c| c.norm() > scale_tol) {
        1
    } else {
        0
    }
}

/// Unit directions spanning the real eigenspaces of `m`.
///
/// For a one-dimensional eigenspace the direction is returned once; for a
/// two-dimensional one an orthonormal basis of the plane is returned. When
/// `m` is a multiple of the identity nothing is returned (every direction is
/// an eigenvector).
pub fn real_eigen_directions(m: &Matrix3) -> Vec<Vector3> {
    let scale = m.max_abs();
    if scale == 0.0 || !m.is_finite() {
        return Vec::new();
    }
    let mut out: Vec<Vector3> = Vec::new();
    for lambda in real_characteristic_roots(m) {
        let shifted = *m - Matrix3::identity().scale(lambda);
        let rows = [shifted.row(0), shifted.row(1), shifted.row(2)];
        let candidates = [
            rows[0].cross(&rows[1]),
            rows[0].cross(&rows[2]),
            rows[1].cross(&rows[2]),
        ];
        let best = candidates
            .into_iter()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or(Vector3::ZERO);
        let row_scale = shifted.max_abs().max(scale);
        if best.norm() > 1e-9 * row_scale * row_scale {
            out.push(best * (1.0 / best.norm()));
            continue;
        }
        let Some(row) = rows
            .into_iter()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        else {
            continue;
        };
        if row.norm() <= 1e-12 * scale {
            continue;
        }
        let n = row * (1.0 / row.norm());
        let helper = if n.x.abs() < 0.9 {
            Vector3::e1()
        } else {
            Vector3::e2()
        };
        let b1 = n.cross(&helper);
        let b1 = b1 * (1.0 / b1.norm());
        out.push(b1);
        out.push(n.cross(&b1));
    }
    out
}

/// Real roots of `det(λI − M)`, polished by Newton steps.
fn real_characteristic_roots(m: &Matrix3) -> Vec<f64> {
    // λ³ + c2 λ² + c1 λ + c0
    let c2 = -m.trace();
    let minors = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)] + m[(0, 0)] * m[(2, 2)]
        - m[(0, 2)] * m[(2, 0)]
        + m[(1, 1)] * m[(2, 2)]
        - m[(1, 2)] * m[(2, 1)];
    let c1 = minors;
    let c0 = -m.determinant();

    // depressed cubic in y = λ + c2/3
    let shift = c2 / 3.0;
    let p = c1 - c2 * c2 / 3.0;
    let q = 2.0 * c2.powi(3) / 27.0 - c2 * c1 / 3.0 + c0;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);

    let mut roots = if p.abs() < 1e-300 && q.abs() < 1e-300 {
        vec![0.0]
    } else if disc > 0.0 {
        let sq = disc.sqrt();
        vec![(-q / 2.0 + sq).cbrt() + (-q / 2.0 - sq).cbrt()]
    } else {
        let r = (-p / 3.0).sqrt();
        let cos_arg = if r == 0.0 {
            0.0
        } else {
            (-q / (2.0 * r.powi(3))).clamp(-1.0, 1.0)
        };
        let phi = cos_arg.acos();
        (0..3)
            .map(|k| 2.0 * r * ((phi - 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos())
            .collect()
    };
    for y in roots.iter_mut() {
        *y -= shift;
        for _ in 0..3 {
            let f = ((*y + c2) * *y + c1) * *y + c0;
            let df = (3.0 * *y + 2.0 * c2) * *y + c1;
            if df.abs() > 1e-300 {
                let next = *y - f / df;
                if next.is_finite() {
                    *y = next;
                }
            }
        }
    }
    roots.sort_by(|a, b| a.total_cmp(b));
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
    roots
}
