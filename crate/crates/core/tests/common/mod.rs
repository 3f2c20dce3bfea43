//! Helpers shared by the toric integration tests.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sasaki_core::toric::{
    cone_from_weights, cy_condition, volume, MomentCone, ReebVector, WeightMatrix,
};

pub fn conifold_from_weights() -> MomentCone {
    let omega = WeightMatrix::new(vec![vec![1, 1, -1, -1]], 4).unwrap();
    cone_from_weights(&omega).unwrap().cone
}

/// Cone over the del Pezzo surface dP3: normals `(1, v)` for the hexagon.
pub fn dp3() -> MomentCone {
    let hexagon = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)];
    MomentCone::new(hexagon.iter().map(|&(a, b)| vec![1, a, b]).collect()).unwrap()
}

/// `Y^{p,q}` as the quotient by `[p, p, q - p, -p - q]`.
pub fn ypq(p: i64, q: i64) -> MomentCone {
    let omega = WeightMatrix::new(vec![vec![p, p, q - p, -p - q]], 4).unwrap();
    cone_from_weights(&omega).unwrap().cone
}

pub fn sample_cones() -> Vec<(String, MomentCone)> {
    let mut out = vec![
        ("orthant3".to_string(), MomentCone::orthant(3).unwrap()),
        ("orthant4".to_string(), MomentCone::orthant(4).unwrap()),
        ("orthant5".to_string(), MomentCone::orthant(5).unwrap()),
        ("conifold".to_string(), conifold_from_weights()),
        ("dP3".to_string(), dp3()),
    ];
    for (p, q) in [(2, 1), (3, 1), (3, 2), (5, 3)] {
        out.push((format!("Y{p},{q}"), ypq(p, q)));
    }
    out
}

/// Random point of the open dual cone: a positive combination of normals.
pub fn random_reeb(cone: &MomentCone, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut xi = vec![0.0; cone.dim()];
    for l in cone.normals() {
        let c: f64 = rng.gen_range(0.05..1.0);
        for (x, &li) in xi.iter_mut().zip(l) {
            *x += c * li as f64;
        }
    }
    xi
}

/// Zero-row-sum weight matrix with all maximal minors nonzero.
pub fn random_cy_matrix(rng: &mut ChaCha8Rng, k: usize, n: usize) -> WeightMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..k)
            .map(|_| {
                let mut r: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(-4..=4)).collect();
                r.push(-r.iter().sum::<i64>());
                r
            })
            .collect();
        let omega = WeightMatrix::new(rows, n).unwrap();
        if cy_condition(&omega) && all_minors_nonzero(&omega) {
            return omega;
        }
    }
}

fn det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        if a[p][c].abs() < 1e-9 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= a[c][c];
        for r in (c + 1)..n {
            let f = a[r][c] / a[c][c];
            for x in c..n {
                a[r][x] -= f * a[c][x];
            }
        }
    }
    d
}

pub fn all_minors_nonzero(omega: &WeightMatrix) -> bool {
    let (k, n) = (omega.k(), omega.n());
    let mut cols: Vec<usize> = (0..k).collect();
    loop {
        let m: Vec<Vec<f64>> = omega
            .rows()
            .iter()
            .map(|r| cols.iter().map(|&c| r[c] as f64).collect())
            .collect();
        if det(&m).abs() < 0.5 {
            return false;
        }
        // Next k-combination of 0..n.
        let mut i = k;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if cols[i] < n - k + i {
                cols[i] += 1;
                for j in (i + 1)..k {
                    cols[j] = cols[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// `3!` times the volume of `C ∩ {<y, ξ> <= 1}` for a 3-dimensional cone,
/// as a pyramid: height `1/|ξ|` over the polygon cut out at `<y, ξ> = 1`.
/// Uses only the rays, never the triangulation.
pub fn pyramid_volume_3d(cone: &MomentCone, xi: &[f64]) -> f64 {
    assert_eq!(cone.dim(), 3);
    let pts: Vec<Vec<f64>> = cone
        .rays()
        .iter()
        .map(|r| {
            let r: Vec<f64> = r.iter().map(|&x| x as f64).collect();
            let a = dot(&r, xi);
            r.iter().map(|x| x / a).collect()
        })
        .collect();
    let centre: Vec<f64> = (0..3)
        .map(|i| pts.iter().map(|p| p[i]).sum::<f64>() / pts.len() as f64)
        .collect();
    let norm = dot(xi, xi).sqrt();
    let unit: Vec<f64> = xi.iter().map(|x| x / norm).collect();
    // Orthonormal frame of the cutting plane.
    let seed = if unit[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e1 = {
        let c = cross(&unit, &seed);
        let l = dot(&c, &c).sqrt();
        c.map(|x| x / l)
    };
    let e2 = cross(&unit, &e1);
    let mut planar: Vec<(f64, f64)> = pts
        .iter()
        .map(|p| {
            let d: Vec<f64> = p.iter().zip(&centre).map(|(a, b)| a - b).collect();
            (dot(&d, &e1), dot(&d, &e2))
        })
        .collect();
    planar.sort_by(|a, b| a.1.atan2(a.0).total_cmp(&b.1.atan2(b.0)));
    let area: f64 = (0..planar.len())
        .map(|i| {
            let (x0, y0) = planar[i];
            let (x1, y1) = planar[(i + 1) % planar.len()];
            x0 * y1 - x1 * y0
        })
        .sum::<f64>()
        .abs()
        / 2.0;
    let height = 1.0 / norm;
    6.0 * area * height / 3.0
}

/// Monte Carlo estimate of the normalized volume, sampling the bounding box
/// of the truncated cone's vertices.
pub fn monte_carlo_volume(cone: &MomentCone, xi: &[f64], samples: usize, rng: &mut ChaCha8Rng) -> f64 {
    let dim = cone.dim();
    let mut lo = vec![0.0f64; dim];
    let mut hi = vec![0.0f64; dim];
    for r in cone.rays() {
        let a: f64 = r.iter().zip(xi).map(|(&x, y)| x as f64 * y).sum();
        for i in 0..dim {
            let v = r[i] as f64 / a;
            lo[i] = lo[i].min(v);
            hi[i] = hi[i].max(v);
        }
    }
    let box_volume: f64 = lo.iter().zip(&hi).map(|(l, h)| h - l).product();
    let mut inside = 0usize;
    let mut y = vec![0.0; dim];
    for _ in 0..samples {
        for i in 0..dim {
            y[i] = rng.gen_range(lo[i]..hi[i]);
        }
        let in_cone = cone
            .normals()
            .iter()
            .all(|l| l.iter().zip(&y).map(|(&a, b)| a as f64 * b).sum::<f64>() >= 0.0);
        if in_cone && dot(&y, xi) <= 1.0 {
            inside += 1;
        }
    }
    let factorial: f64 = (1..=dim).map(|i| i as f64).product();
    factorial * box_volume * inside as f64 / samples as f64
}

/// Dense grid search for the minimum of the volume over a 2-dimensional
/// slice. The slice polygon has vertices `3·λ_i`; a 200×200 grid over its
/// bounding box in slice coordinates is scanned, then rescanned on a window
/// of a few cells around the best point, `levels` times.
pub fn grid_minimum(cone: &MomentCone, gamma: &[i64], levels: usize) -> (Vec<f64>, f64) {
    assert_eq!(cone.dim(), 3);
    let basis = sasaki_core::toric::reeb::slice_basis(gamma);
    let g: Vec<f64> = gamma.iter().map(|&x| x as f64).collect();
    let gg = dot(&g, &g);
    // Point of the slice closest to the origin.
    let origin: Vec<f64> = g.iter().map(|x| -3.0 * x / gg).collect();
    let to_xi = |s: f64, t: f64| -> Vec<f64> {
        (0..3)
            .map(|i| origin[i] + s * basis[(i, 0)] + t * basis[(i, 1)])
            .collect()
    };
    let coords: Vec<(f64, f64)> = cone
        .normals()
        .iter()
        .map(|l| {
            let v: Vec<f64> = l.iter().map(|&x| 3.0 * x as f64).collect();
            let d: Vec<f64> = v.iter().zip(&origin).map(|(a, b)| a - b).collect();
            (
                (0..3).map(|i| d[i] * basis[(i, 0)]).sum(),
                (0..3).map(|i| d[i] * basis[(i, 1)]).sum(),
            )
        })
        .collect();
    let mut s_range = (
        coords.iter().map(|c| c.0).fold(f64::INFINITY, f64::min),
        coords.iter().map(|c| c.0).fold(f64::NEG_INFINITY, f64::max),
    );
    let mut t_range = (
        coords.iter().map(|c| c.1).fold(f64::INFINITY, f64::min),
        coords.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max),
    );
    let steps = 200;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for _ in 0..levels {
        let hs = (s_range.1 - s_range.0) / steps as f64;
        let ht = (t_range.1 - t_range.0) / steps as f64;
        for i in 0..=steps {
            for j in 0..=steps {
                let s = s_range.0 + i as f64 * hs;
                let t = t_range.0 + j as f64 * ht;
                if let Ok(v) = volume(cone, &ReebVector(to_xi(s, t))) {
                    if v < best.0 {
                        best = (v, s, t);
                    }
                }
            }
        }
        s_range = (best.1 - 4.0 * hs, best.1 + 4.0 * hs);
        t_range = (best.2 - 4.0 * ht, best.2 + 4.0 * ht);
    }
    (to_xi(best.1, best.2), best.0)
}
