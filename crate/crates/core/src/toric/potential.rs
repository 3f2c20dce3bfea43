//! Guillemin's symplectic potential on the interior of a moment cone:
//!
//! ```text
//! G_ξ(y) = ½ Σ l_i log l_i + ½ l_ξ log l_ξ - ½ l_∞ log l_∞
//! ```
//!
//! with `l_i(y) = <y, λ_i>`, `l_ξ(y) = <y, ξ>` and `l_∞(y) = <y, Σ λ_i>`.

use nalgebra::{DMatrix, DVector};

use super::cone::{dot_f, MomentCone};
use super::reeb::ReebVector;
use crate::error::{Error, Result};

struct Forms {
    facets: Vec<f64>,
    xi: f64,
    infinity: f64,
}

fn forms(cone: &MomentCone, xi: &ReebVector, y: &[f64]) -> Result<Forms> {
    if y.len() != cone.dim() || xi.0.len() != cone.dim() {
        return Err(Error::Domain("dimension mismatch".into()));
    }
    let facets: Vec<f64> = cone.normals().iter().map(|l| dot_f(l, y)).collect();
    let lxi: f64 = xi.0.iter().zip(y).map(|(a, b)| a * b).sum();
    let linf = dot_f(&cone.normal_sum(), y);
    for &v in facets.iter().chain([&lxi, &linf]) {
        if v <= 0.0 {
            return Err(Error::LogDomain(v));
        }
    }
    Ok(Forms {
        facets,
        xi: lxi,
        infinity: linf,
    })
}

fn xlogx(x: f64) -> f64 {
    x * x.ln()
}

pub fn guillemin_potential(cone: &MomentCone, xi: &ReebVector, y: &[f64]) -> Result<f64> {
    let f = forms(cone, xi, y)?;
    Ok(0.5 * f.facets.iter().map(|&l| xlogx(l)).sum::<f64>() + 0.5 * xlogx(f.xi)
        - 0.5 * xlogx(f.infinity))
}

/// `Σ λ_i λ_iᵀ / (2 l_i) + ξ ξᵀ / (2 l_ξ) - λ_Σ λ_Σᵀ / (2 l_∞)`.
pub fn guillemin_hessian(cone: &MomentCone, xi: &ReebVector, y: &[f64]) -> Result<DMatrix<f64>> {
    let f = forms(cone, xi, y)?;
    let dim = cone.dim();
    let col = |v: &[i64]| DVector::from_iterator(dim, v.iter().map(|&x| x as f64));
    let mut h = DMatrix::zeros(dim, dim);
    for (l, value) in cone.normals().iter().zip(&f.facets) {
        let v = col(l);
        h += &v * v.transpose() / (2.0 * value);
    }
    let x = DVector::from_column_slice(&xi.0);
    h += &x * x.transpose() / (2.0 * f.xi);
    let s = col(&cone.normal_sum());
    h -= &s * s.transpose() / (2.0 * f.infinity);
    Ok(h)
}
