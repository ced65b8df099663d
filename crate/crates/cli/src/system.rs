//! Input parsing: system files and endpoint vectors.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use sphere_steer::induced_fields::SystemPair;
use sphere_steer::linalg3::{Matrix3, SkewMatrix3, UnitVector3, Vector3};

/// Distance from unit norm within which an endpoint is silently normalized.
const ENDPOINT_NORM_TOL: f64 = 1e-6;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    /// Free-form name; accepted and ignored.
    #[serde(default)]
    #[allow(dead_code)]
    pub label: Option<String>,
}

impl SystemFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn pair(&self) -> Result<SystemPair> {
        Ok(SystemPair::new(
            matrix("A", &self.a)?,
            matrix("B", &self.b)?,
        ))
    }

    /// Both matrices as skew parameters; fails unless both are skew.
    pub fn skew_pair(&self, tol: f64) -> Result<(SkewMatrix3, SkewMatrix3)> {
        let a = SkewMatrix3::extract(&matrix("A", &self.a)?, tol).context("A")?;
        let b = SkewMatrix3::extract(&matrix("B", &self.b)?, tol).context("B")?;
        Ok((a, b))
    }
}

fn matrix(name: &str, rows: &[Vec<f64>]) -> Result<Matrix3> {
    if rows.len() != 3 || rows.iter().any(|r| r.len() != 3) {
        bail!("{name} must be a 3x3 array");
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        bail!("{name} has non-finite entries");
    }
    Ok(Matrix3::new([
        [rows[0][0], rows[0][1], rows[0][2]],
        [rows[1][0], rows[1][1], rows[1][2]],
        [rows[2][0], rows[2][1], rows[2][2]],
    ]))
}

/// Parses `x,y,z`, normalizing when the norm is within 1e-6 of one.
pub fn parse_endpoint(text: &str) -> Result<UnitVector3> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("endpoint {text:?} is not a list of numbers"))?;
    let [x, y, z] = parts[..] else {
        bail!("endpoint {text:?} must have three components");
    };
    let v = Vector3::new(x, y, z);
    if !v.is_finite() || (v.norm() - 1.0).abs() > ENDPOINT_NORM_TOL {
        bail!(
            "endpoint {text:?} is not on the unit sphere (norm {})",
            v.norm()
        );
    }
    Ok(UnitVector3::normalize(v)?)
}
