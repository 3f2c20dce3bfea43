//! Moment cones of Kähler quotients `C^n // T^k` by an integral weight
//! matrix `Ω ∈ M_{k,n}(Z)`.
//!
//! The torus acts with moment map `μ^i(z) = Σ_α a^i_α |z_α|^2`. The quotient
//! cone lives in `ker Ω`, and its facet normals are the images of the
//! standard basis vectors under the cokernel projection
//! `Z^n -> Z^n / im(Ωᵀ)`, computed from a Smith normal form.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::cone::{combinations, dot_i, extreme_rays, MomentCone};
use super::linalg::{
    determinant, make_primitive, rank, smith_normal_form, to_big, to_rational, transpose,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMatrix {
    rows: Vec<Vec<i64>>,
    n: usize,
}

impl WeightMatrix {
    /// `rows` is `k × n`; `k = 0` is allowed and needs an explicit `n`.
    pub fn new(rows: Vec<Vec<i64>>, n: usize) -> Result<Self> {
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Domain(format!("every weight row must have {n} entries")));
        }
        Ok(WeightMatrix { rows, n })
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// `μ^i(z) = Σ_α a^i_α |z_α|^2` evaluated at `|z_α|^2 = moduli[α]`.
    pub fn moment_map(&self, moduli: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(moduli).map(|(a, m)| *a as f64 * m).sum())
            .collect()
    }

    /// Parses a `k n` header followed by `k` rows of `n` integers.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing `k n` header".into()))?;
        let dims = parse_ints(header)?;
        let [k, n] = dims[..] else {
            return Err(Error::Parse(format!("header `{header}` must be `k n`")));
        };
        if k < 0 || n <= 0 {
            return Err(Error::Parse(format!("bad dimensions {k} {n}")));
        }
        let rows = lines.map(parse_ints).collect::<Result<Vec<_>>>()?;
        if rows.len() != k as usize {
            return Err(Error::Parse(format!("expected {k} rows, found {}", rows.len())));
        }
        Self::new(rows, n as usize)
    }
}

pub(crate) fn parse_ints(line: &str) -> Result<Vec<i64>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| Error::Parse(format!("`{t}` is not an integer")))
        })
        .collect()
}

/// Every row of `Ω` sums to zero.
pub fn cy_condition(omega: &WeightMatrix) -> bool {
    omega.rows.iter().all(|r| r.iter().sum::<i64>() == 0)
}

/// Result of the quotient construction.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub cone: MomentCone,
    /// Nontrivial invariant factors of the cokernel; nonempty means the
    /// quotient lattice has torsion and the quotient is an orbifold.
    pub torsion: Vec<i64>,
    /// How many standard basis vectors landed on each facet normal.
    pub multiplicity: Vec<usize>,
}

impl Quotient {
    pub fn is_orbifold_lattice(&self) -> bool {
        !self.torsion.is_empty()
    }
}

pub fn cone_from_weights(omega: &WeightMatrix) -> Result<Quotient> {
    let (k, n) = (omega.k(), omega.n());
    if n <= k {
        return Err(Error::Domain(format!("need n > k, got k={k}, n={n}")));
    }
    if k > 0 {
        if rank(&to_rational(&omega.rows)) < k {
            return Err(Error::Domain("weight matrix does not have full rank".into()));
        }
        for cols in combinations(n, k) {
            let minor: Vec<Vec<i64>> = omega
                .rows
                .iter()
                .map(|r| cols.iter().map(|&c| r[c]).collect())
                .collect();
            if determinant(&to_rational(&minor)).is_zero() {
                return Err(Error::ZeroMinor(cols));
            }
        }
    }

    // Row α of Ωᵀ is the weight of z_α.
    let (torsion, projection) = if k == 0 {
        let id: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(i64::from(i == j))).collect())
            .collect();
        (Vec::new(), id)
    } else {
        let omega_t = to_big(&transpose(&omega.rows));
        let (diag, u) = smith_normal_form(&omega_t);
        let torsion = diag
            .iter()
            .filter(|d| !d.is_one())
            .map(|d| d.to_i64().expect("small invariant factor"))
            .collect();
        (torsion, u[k..].to_vec())
    };

    let mut normals: Vec<Vec<i64>> = Vec::new();
    let mut multiplicity = Vec::new();
    for alpha in 0..n {
        let image: Vec<BigInt> = projection.iter().map(|row| row[alpha].clone()).collect();
        let image = make_primitive(&image)
            .into_iter()
            .map(|x| {
                x.to_i64()
                    .ok_or_else(|| Error::Domain("facet normal overflows i64".into()))
            })
            .collect::<Result<Vec<i64>>>()?;
        if image.iter().all(|&x| x == 0) {
            return Err(Error::Domain(format!(
                "basis vector {alpha} projects to zero in the quotient lattice"
            )));
        }
        match normals.iter().position(|v| *v == image) {
            Some(i) => multiplicity[i] += 1,
            None => {
                normals.push(image);
                multiplicity.push(1);
            }
        }
    }

    let (normals, multiplicity) = drop_redundant(normals, multiplicity)?;
    let cone = MomentCone::new(normals)?;
    Ok(Quotient {
        cone,
        torsion,
        multiplicity,
    })
}

/// Removes normals whose hyperplane meets the cone in less than a facet.
fn drop_redundant(
    normals: Vec<Vec<i64>>,
    mult: Vec<usize>,
) -> Result<(Vec<Vec<i64>>, Vec<usize>)> {
    let dim = normals.first().map_or(0, Vec::len);
    let rays = extreme_rays(&normals, dim)?;
    Ok(normals
        .into_iter()
        .zip(mult)
        .filter(|(l, _)| {
            let on: Vec<Vec<i64>> = rays.iter().filter(|r| dot_i(l, r) == 0).cloned().collect();
            !on.is_empty() && rank(&to_rational(&on)) + 1 == dim
        })
        .unzip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::linalg::hermite_normal_form;

    fn lattice_equivalent(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
        if a.len() != b.len() {
            return false;
        }
        // Normals as columns; GL(dim, Z) acts by row operations.
        let target = hermite_normal_form(&to_big(&transpose(b)));
        permutations(a.len()).into_iter().any(|p| {
            let perm: Vec<Vec<i64>> = p.iter().map(|&i| a[i].clone()).collect();
            hermite_normal_form(&to_big(&transpose(&perm))) == target
        })
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn conifold_from_weights() {
        let omega = WeightMatrix::new(vec![vec![1, 1, -1, -1]], 4).unwrap();
        assert!(cy_condition(&omega));
        let q = cone_from_weights(&omega).unwrap();
        assert!(!q.is_orbifold_lattice());
        assert_eq!(q.cone.dim(), 3);
        assert_eq!(q.cone.normals().len(), 4);
        let expected = vec![vec![1, 0, 0], vec![1, 1, 0], vec![1, 1, 1], vec![1, 0, 1]];
        assert!(lattice_equivalent(q.cone.normals(), &expected));
        // The orthant is not equivalent to it.
        let orthant4 = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 1]];
        assert!(!lattice_equivalent(q.cone.normals(), &orthant4));
    }

    #[test]
    fn empty_weight_matrix_is_orthant() {
        let omega = WeightMatrix::new(vec![], 3).unwrap();
        let q = cone_from_weights(&omega).unwrap();
        assert_eq!(
            q.cone.normals(),
            &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]
        );
    }

    #[test]
    fn cy_examples() {
        let m = |rows: Vec<Vec<i64>>| WeightMatrix::new(rows, 4).unwrap();
        assert!(cy_condition(&m(vec![vec![1, 1, -1, -1]])));
        assert!(cy_condition(&m(vec![vec![1, 1, 1, -3]])));
        assert!(!cy_condition(&m(vec![vec![1, 1, 1, -2]])));
        assert!(!cy_condition(&m(vec![vec![1, 1, -1, -1], vec![1, 2, 0, 1]])));
    }

    #[test]
    fn torsion_is_reported() {
        // Weights (2, 2, -2, -2): the cokernel has a Z/2 summand.
        let omega = WeightMatrix::new(vec![vec![2, 2, -2, -2]], 4).unwrap();
        let q = cone_from_weights(&omega).unwrap();
        assert_eq!(q.torsion, vec![2]);
        assert!(q.is_orbifold_lattice());
    }

    #[test]
    fn redundant_image_is_dropped() {
        // y_0 + y_1 + y_2 = 3 y_3 on the orthant: y_3 = 0 only at the origin.
        let omega = WeightMatrix::new(vec![vec![1, 1, 1, -3]], 4).unwrap();
        let q = cone_from_weights(&omega).unwrap();
        assert_eq!(q.cone.dim(), 3);
        assert_eq!(q.cone.normals().len(), 3);
        assert_eq!(q.cone.rays().len(), 3);
    }

    #[test]
    fn zero_minor_is_rejected() {
        let omega = WeightMatrix::new(vec![vec![1, 1, -1, -1], vec![1, -1, 2, -2]], 4).unwrap();
        let q = cone_from_weights(&omega).unwrap();
        assert_eq!(q.cone.dim(), 2);
        let omega = WeightMatrix::new(vec![vec![1, 0, -1, 0], vec![0, 1, 0, -1]], 4).unwrap();
        assert!(matches!(cone_from_weights(&omega), Err(Error::ZeroMinor(_))));
        let omega = WeightMatrix::new(vec![vec![1, 1, -1, -1], vec![2, 2, -1, -3]], 4).unwrap();
        assert!(matches!(cone_from_weights(&omega), Err(Error::ZeroMinor(_))));
    }

    #[test]
    fn parse_weight_file() {
        let w = WeightMatrix::parse("# conifold\n1 4\n1 1 -1 -1\n").unwrap();
        assert_eq!(w.rows(), &[vec![1, 1, -1, -1]]);
        assert!(WeightMatrix::parse("2 4\n1 1 -1 -1\n").is_err());
        assert!(WeightMatrix::parse("1 4\n1 1 -1\n").is_err());
        let w = WeightMatrix::parse("0 3\n").unwrap();
        assert_eq!(w.k(), 0);
        assert_eq!(w.moment_map(&[1.0, 2.0, 3.0]), Vec::<f64>::new());
        let c = WeightMatrix::parse("1 4\n1 1 -1 -1").unwrap();
        assert_eq!(c.moment_map(&[1.0, 2.0, 3.0, 0.0]), vec![0.0]);
    }
}
