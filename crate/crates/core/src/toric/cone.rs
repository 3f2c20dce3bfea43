//! Moment cones `C = {y : <y, λ_i> >= 0}` given by primitive integer facet
//! normals.
//!
//! Construction enumerates the extreme rays exactly and builds a pulling
//! triangulation of the cone into simplicial cones, so volumes later reduce
//! to sums of `|det| / Π <r_j, ξ>` over the simplices.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::linalg::{determinant, kernel, primitive_integer, rank, to_rational};
use crate::error::{Error, Result};

/// A simplicial cone of the triangulation: `dim` ray indices and the
/// absolute determinant of those rays.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    pub rays: Vec<usize>,
    pub det: f64,
}

#[derive(Debug, Clone)]
pub struct MomentCone {
    dim: usize,
    normals: Vec<Vec<i64>>,
    rays: Vec<Vec<i64>>,
    simplices: Vec<Simplex>,
}

impl MomentCone {
    /// Validates the normals and precomputes rays and a triangulation.
    ///
    /// Every normal must be nonzero, primitive, distinct and define an actual
    /// facet; the cone must be full-dimensional and contain no line.
    pub fn new(normals: Vec<Vec<i64>>) -> Result<Self> {
        let dim = normals
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidCone("no facet normals".into()))?;
        if dim < 2 {
            return Err(Error::InvalidCone("cone dimension must be at least 2".into()));
        }
        for (i, v) in normals.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::InvalidCone(format!(
                    "normal {i} has length {}, expected {dim}",
                    v.len()
                )));
            }
            let g = v.iter().fold(0i64, |acc, x| acc.gcd(x));
            if g != 1 {
                return Err(Error::InvalidCone(format!(
                    "normal {v:?} is not primitive"
                )));
            }
            if normals[..i].contains(v) {
                return Err(Error::InvalidCone(format!("normal {v:?} is repeated")));
            }
        }
        if rank(&to_rational(&normals)) < dim {
            return Err(Error::InvalidCone(
                "normals do not span: the cone contains a line".into(),
            ));
        }

        let rays = extreme_rays(&normals, dim)?;
        if rays.is_empty() || rank(&to_rational(&rays)) < dim {
            return Err(Error::InvalidCone("cone is not full-dimensional".into()));
        }

        let zero: Vec<Vec<bool>> = normals
            .iter()
            .map(|l| rays.iter().map(|r| dot_i(l, r) == 0).collect())
            .collect();
        for (i, row) in zero.iter().enumerate() {
            let on: Vec<Vec<i64>> = rays
                .iter()
                .zip(row)
                .filter(|(_, &z)| z)
                .map(|(r, _)| r.clone())
                .collect();
            if on.is_empty() || rank(&to_rational(&on)) != dim - 1 {
                return Err(Error::InvalidCone(format!(
                    "normal {:?} does not define a facet",
                    normals[i]
                )));
            }
        }

        let all: Vec<usize> = (0..rays.len()).collect();
        let mut faces = Vec::new();
        triangulate(&rays, &zero, &all, dim, &mut Vec::new(), &mut faces);
        let simplices = faces
            .into_iter()
            .map(|idx| {
                let m: Vec<Vec<i64>> = idx.iter().map(|&j| rays[j].clone()).collect();
                let det = determinant(&to_rational(&m)).abs();
                Simplex {
                    rays: idx,
                    det: det.to_f64().expect("finite determinant"),
                }
            })
            .collect();

        Ok(MomentCone {
            dim,
            normals,
            rays,
            simplices,
        })
    }

    /// `n + 1`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normals(&self) -> &[Vec<i64>] {
        &self.normals
    }

    /// Primitive generators of the extreme rays.
    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    /// `Σ λ_i`.
    pub fn normal_sum(&self) -> Vec<i64> {
        (0..self.dim)
            .map(|j| self.normals.iter().map(|l| l[j]).sum())
            .collect()
    }

    /// `ξ` lies in the open dual cone iff `<r, ξ> > 0` on every extreme ray.
    pub fn contains_reeb(&self, xi: &[f64]) -> bool {
        xi.len() == self.dim && self.rays.iter().all(|r| dot_f(r, xi) > 0.0)
    }

    /// Standard orthant `R^{dim}_{>=0}`.
    pub fn orthant(dim: usize) -> Result<Self> {
        Self::new(
            (0..dim)
                .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
                .collect(),
        )
    }
}

pub(crate) fn dot_i(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(x, y)| *x as i128 * *y as i128).sum()
}

pub(crate) fn dot_f(a: &[i64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| *x as f64 * y).sum()
}

/// Rays are the one-dimensional solutions of `dim - 1` facet equations that
/// satisfy every inequality.
pub(crate) fn extreme_rays(normals: &[Vec<i64>], dim: usize) -> Result<Vec<Vec<i64>>> {
    let mut found = BTreeSet::new();
    for combo in combinations(normals.len(), dim - 1) {
        let rows: Vec<Vec<i64>> = combo.iter().map(|&i| normals[i].clone()).collect();
        let ker = kernel(&to_rational(&rows), dim);
        if ker.len() != 1 {
            continue;
        }
        let mut v: Vec<BigInt> = primitive_integer(&ker[0]);
        let signs: Vec<BigRational> = normals
            .iter()
            .map(|l| {
                BigRational::from_integer(
                    l.iter().zip(&v).map(|(a, b)| BigInt::from(*a) * b).sum(),
                )
            })
            .collect();
        if signs.iter().all(|s| !s.is_positive()) {
            v = v.into_iter().map(|x| -x).collect();
        } else if !signs.iter().all(|s| !s.is_negative()) {
            continue;
        }
        let ray = v
            .iter()
            .map(|x| {
                x.to_i64()
                    .ok_or_else(|| Error::InvalidCone("ray coordinates overflow i64".into()))
            })
            .collect::<Result<Vec<i64>>>()?;
        found.insert(ray);
    }
    Ok(found.into_iter().collect())
}

/// Pulling triangulation: cone the first ray of a face over every facet of
/// the face that misses it, recursively.
fn triangulate(
    rays: &[Vec<i64>],
    zero: &[Vec<bool>],
    face: &[usize],
    dim: usize,
    prefix: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if face.len() == dim {
        let mut s = prefix.clone();
        s.extend_from_slice(face);
        s.sort_unstable();
        out.push(s);
        return;
    }
    let apex = face[0];
    let mut seen = BTreeSet::new();
    for row in zero {
        if row[apex] {
            continue;
        }
        let sub: Vec<usize> = face.iter().copied().filter(|&r| row[r]).collect();
        if sub.len() < dim - 1 || !seen.insert(sub.clone()) {
            continue;
        }
        let vecs: Vec<Vec<i64>> = sub.iter().map(|&r| rays[r].clone()).collect();
        if rank(&to_rational(&vecs)) != dim - 1 {
            continue;
        }
        prefix.push(apex);
        triangulate(rays, zero, &sub, dim - 1, prefix, out);
        prefix.pop();
    }
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}
