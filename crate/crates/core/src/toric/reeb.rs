//! Reeb vectors, the Gorenstein slice and the volume functional.
//!
//! For `ξ` in the open dual cone, the truncated cone
//! `P_ξ = C ∩ {<y, ξ> <= 1}` is a compact polytope. Its Euclidean volume,
//! scaled by `(n+1)!`, is the volume functional used here; the standard
//! orthant with `ξ = (1, ..., 1)` has volume exactly 1. Through the
//! triangulation of `C` into simplicial cones with rays `r_j`,
//!
//! ```text
//! V(ξ) = Σ_σ |det(r_σ)| / Π_{j∈σ} <r_j, ξ>
//! ```
//!
//! which gives the gradient and Hessian in closed form.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::cone::{dot_f, MomentCone};
use super::linalg::{solve, to_rational, Solution};
use crate::error::{Error, Result};

/// A Reeb vector field, as a point of `R^{n+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReebVector(pub Vec<f64>);

impl ReebVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for ReebVector {
    fn from(v: Vec<f64>) -> Self {
        ReebVector(v)
    }
}

/// Why a cone has no Gorenstein vector.
#[derive(Debug, Clone, PartialEq)]
pub enum GammaFailure {
    Inconsistent,
    /// The unique rational solution, which is not integral.
    NonIntegral(Vec<BigRational>),
    Underdetermined,
}

impl std::fmt::Display for GammaFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GammaFailure::Inconsistent => f.write_str("inconsistent"),
            GammaFailure::NonIntegral(v) => {
                let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
                write!(f, "non-integral ({})", parts.join(", "))
            }
            GammaFailure::Underdetermined => f.write_str("underdetermined"),
        }
    }
}

/// Solves `<λ_j, γ> = -1` for every facet.
pub fn gorenstein_gamma(cone: &MomentCone) -> std::result::Result<Vec<i64>, GammaFailure> {
    let m = to_rational(cone.normals());
    let rhs = vec![-BigRational::one(); cone.normals().len()];
    match solve(&m, &rhs, cone.dim()) {
        Solution::Inconsistent => Err(GammaFailure::Inconsistent),
        Solution::Underdetermined => Err(GammaFailure::Underdetermined),
        Solution::Unique(v) => {
            if v.iter().all(|x| x.is_integer()) {
                let gamma: Option<Vec<i64>> =
                    v.iter().map(|x| x.to_integer().to_i64()).collect();
                // <λ, γ> = -1 forces gcd(γ) = 1, so an integral γ is primitive.
                gamma.ok_or(GammaFailure::NonIntegral(v))
            } else {
                Err(GammaFailure::NonIntegral(v))
            }
        }
    }
}

fn check_interior(cone: &MomentCone, xi: &[f64]) -> Result<()> {
    if cone.contains_reeb(xi) {
        Ok(())
    } else {
        Err(Error::Unbounded)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gamma_f(gamma: &[i64]) -> Vec<f64> {
    gamma.iter().map(|&g| g as f64).collect()
}

/// Rescales `ξ` onto `<ξ, γ> = -(n+1)`.
pub fn reeb_slice_project(cone: &MomentCone, gamma: &[i64], xi: &ReebVector) -> Result<ReebVector> {
    check_interior(cone, &xi.0)?;
    let s = dot(&xi.0, &gamma_f(gamma));
    if s >= 0.0 {
        return Err(Error::SliceSign(s));
    }
    let t = -(cone.dim() as f64) / s;
    Ok(ReebVector(xi.0.iter().map(|x| x * t).collect()))
}

/// `(n+1)!` times the Euclidean volume of `C ∩ {<y, ξ> <= 1}`.
pub fn volume(cone: &MomentCone, xi: &ReebVector) -> Result<f64> {
    check_interior(cone, &xi.0)?;
    Ok(volume_unchecked(cone, &xi.0))
}

fn ray_pairings(cone: &MomentCone, xi: &[f64]) -> Vec<f64> {
    cone.rays().iter().map(|r| dot_f(r, xi)).collect()
}

fn volume_unchecked(cone: &MomentCone, xi: &[f64]) -> f64 {
    let a = ray_pairings(cone, xi);
    cone.simplices()
        .iter()
        .map(|s| s.det / s.rays.iter().map(|&j| a[j]).product::<f64>())
        .sum()
}

/// Vertices of `P_ξ` other than the origin: `r_j / <r_j, ξ>`.
pub fn truncated_vertices(cone: &MomentCone, xi: &ReebVector) -> Result<Vec<Vec<f64>>> {
    check_interior(cone, &xi.0)?;
    Ok(cone
        .rays()
        .iter()
        .map(|r| {
            let a = dot_f(r, &xi.0);
            r.iter().map(|&x| x as f64 / a).collect()
        })
        .collect())
}

/// Full gradient `∂V/∂ξ`.
pub fn volume_gradient(cone: &MomentCone, xi: &ReebVector) -> Result<Vec<f64>> {
    check_interior(cone, &xi.0)?;
    Ok(gradient_unchecked(cone, &xi.0))
}

fn gradient_unchecked(cone: &MomentCone, xi: &[f64]) -> Vec<f64> {
    let dim = cone.dim();
    let a = ray_pairings(cone, xi);
    let mut g = vec![0.0; dim];
    for s in cone.simplices() {
        let v = s.det / s.rays.iter().map(|&j| a[j]).product::<f64>();
        for &j in &s.rays {
            for (k, gk) in g.iter_mut().enumerate() {
                *gk -= v * cone.rays()[j][k] as f64 / a[j];
            }
        }
    }
    g
}

/// Full Hessian `∂²V/∂ξ∂ξ`.
pub fn volume_hessian(cone: &MomentCone, xi: &ReebVector) -> Result<DMatrix<f64>> {
    check_interior(cone, &xi.0)?;
    Ok(hessian_unchecked(cone, &xi.0))
}

fn hessian_unchecked(cone: &MomentCone, xi: &[f64]) -> DMatrix<f64> {
    let dim = cone.dim();
    let a = ray_pairings(cone, xi);
    let mut h = DMatrix::zeros(dim, dim);
    for s in cone.simplices() {
        let v = s.det / s.rays.iter().map(|&j| a[j]).product::<f64>();
        let mut g = DVector::zeros(dim);
        for &j in &s.rays {
            let r = DVector::from_iterator(dim, cone.rays()[j].iter().map(|&x| x as f64 / a[j]));
            h += &r * r.transpose() * v;
            g += r;
        }
        h += &g * g.transpose() * v;
    }
    h
}

/// Orthonormal basis of `γ^⊥`, as the columns of a `dim × (dim-1)` matrix.
pub fn slice_basis(gamma: &[i64]) -> DMatrix<f64> {
    let dim = gamma.len();
    let g = DVector::from_iterator(dim, gamma.iter().map(|&x| x as f64));
    let mut basis: Vec<DVector<f64>> = vec![g.normalize()];
    for i in 0..dim {
        let mut e = DVector::zeros(dim);
        e[i] = 1.0;
        for b in &basis {
            let c = b.dot(&e);
            e -= b * c;
        }
        if e.norm() > 1e-8 && basis.len() < dim {
            basis.push(e.normalize());
        }
    }
    DMatrix::from_columns(&basis[1..])
}

/// Component of the gradient tangent to the slice.
pub fn slice_gradient(cone: &MomentCone, gamma: &[i64], xi: &ReebVector) -> Result<Vec<f64>> {
    let g = DVector::from_vec(volume_gradient(cone, xi)?);
    let b = slice_basis(gamma);
    Ok((&b * (b.transpose() * g)).iter().copied().collect())
}

#[derive(Debug, Clone, Copy)]
pub struct MinimizeOptions {
    /// Stop once the slice gradient norm is below this.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            tolerance: 1e-8,
            max_iterations: 10_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VolumeMinimum {
    pub xi: ReebVector,
    pub volume: f64,
    pub iterations: usize,
    pub grad_norm: f64,
}

/// Slice point from `Σ λ_i`, which is interior to the dual cone.
pub fn barycentric_start(cone: &MomentCone, gamma: &[i64]) -> Result<ReebVector> {
    let sum = cone.normal_sum().iter().map(|&x| x as f64).collect();
    reeb_slice_project(cone, gamma, &ReebVector(sum))
}

/// Minimizes the volume over the slice `<ξ, γ> = -(n+1)` from the
/// barycentric start.
pub fn minimize_volume(cone: &MomentCone, gamma: &[i64]) -> Result<VolumeMinimum> {
    let start = barycentric_start(cone, gamma)?;
    minimize_volume_from(cone, gamma, &start, MinimizeOptions::default())
}

/// Newton direction in slice coordinates, or steepest descent when the
/// reduced Hessian is not positive definite. Returns the full gradient, the
/// slice gradient norm and the direction.
fn newton_direction(
    cone: &MomentCone,
    basis: &DMatrix<f64>,
    x: &[f64],
) -> (DVector<f64>, f64, DVector<f64>) {
    let g = DVector::from_vec(gradient_unchecked(cone, x));
    let gr = basis.transpose() * &g;
    let hr = basis.transpose() * hessian_unchecked(cone, x) * basis;
    let step_r = match hr.cholesky() {
        Some(ch) => -ch.solve(&gr),
        None => -gr.clone(),
    };
    (g, gr.norm(), basis * step_r)
}

/// Damped Newton on the slice coordinates. Steps are halved until the iterate
/// stays inside the dual cone and the Armijo condition holds. Once the slice
/// gradient is below tolerance one more full Newton step is tried, which
/// under quadratic convergence puts the point at rounding level.
pub fn minimize_volume_from(
    cone: &MomentCone,
    gamma: &[i64],
    start: &ReebVector,
    options: MinimizeOptions,
) -> Result<VolumeMinimum> {
    let mut x = reeb_slice_project(cone, gamma, start)?.0;
    let basis = slice_basis(gamma);
    let mut value = volume_unchecked(cone, &x);
    let mut grad_norm = f64::INFINITY;

    for iteration in 0..options.max_iterations {
        let (g, norm, dir) = newton_direction(cone, &basis, &x);
        grad_norm = norm;
        if grad_norm < options.tolerance {
            let polished: Vec<f64> = x.iter().zip(dir.iter()).map(|(a, d)| a + d).collect();
            if cone.contains_reeb(&polished) {
                let v = volume_unchecked(cone, &polished);
                let (_, n, _) = newton_direction(cone, &basis, &polished);
                if n <= grad_norm && v <= value * (1.0 + 1e-14) {
                    x = polished;
                    value = v;
                    grad_norm = n;
                }
            }
            return Ok(VolumeMinimum {
                xi: ReebVector(x),
                volume: value,
                iterations: iteration,
                grad_norm,
            });
        }
        let slope = g.dot(&dir);

        let mut t = 1.0;
        let mut moved = false;
        while t > 1e-30 {
            let cand: Vec<f64> = x.iter().zip(dir.iter()).map(|(a, d)| a + t * d).collect();
            if cone.contains_reeb(&cand) {
                let v = volume_unchecked(cone, &cand);
                let flat = slope.abs() <= 1e-14 * value.abs();
                if v <= value + 1e-4 * t * slope || (flat && v <= value * (1.0 + 1e-14)) {
                    x = cand;
                    value = v;
                    moved = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !moved {
            break;
        }
    }
    Err(Error::NoConvergence {
        iterations: options.max_iterations,
        grad_norm,
        last: x,
    })
}

/// `<ξ, γ>` as an exact rational when `ξ` is given exactly.
pub fn slice_pairing(xi: &[BigRational], gamma: &[i64]) -> BigRational {
    xi.iter()
        .zip(gamma)
        .map(|(x, &g)| x * BigRational::from_integer(BigInt::from(g)))
        .sum()
}
