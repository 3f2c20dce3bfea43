mod common;

use common::*;
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sasaki_core::toric::reeb::{slice_basis, volume_gradient};
use sasaki_core::toric::{
    cone_from_weights, gorenstein_gamma, guillemin_hessian, minimize_volume,
    minimize_volume_from, reeb_slice_project, volume, MinimizeOptions, MomentCone, ReebVector,
};

fn vol(cone: &MomentCone, xi: &[f64]) -> f64 {
    volume(cone, &ReebVector(xi.to_vec())).unwrap()
}

fn on_slice(cone: &MomentCone, gamma: &[i64], rng: &mut ChaCha8Rng) -> Vec<f64> {
    reeb_slice_project(cone, gamma, &ReebVector(random_reeb(cone, rng)))
        .unwrap()
        .0
}

#[test]
fn orthant_volume_is_reciprocal_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for dim in 2..=5 {
        let c = MomentCone::orthant(dim).unwrap();
        for _ in 0..50 {
            let xi: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.1..3.0)).collect();
            let expected = 1.0 / xi.iter().product::<f64>();
            assert!((vol(&c, &xi) - expected).abs() <= 1e-13 * expected);
        }
    }
}

#[test]
fn volume_matches_pyramid_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for (name, cone) in sample_cones().into_iter().filter(|(_, c)| c.dim() == 3) {
        for _ in 0..20 {
            let xi = random_reeb(&cone, &mut rng);
            let a = vol(&cone, &xi);
            let b = pyramid_volume_3d(&cone, &xi);
            assert!((a - b).abs() <= 1e-10 * b, "{name}: {a} vs {b}");
        }
    }
}

#[test]
fn volume_matches_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let q = cone_from_weights(&random_cy_matrix(&mut rng, 1, 5)).unwrap().cone;
    for cone in [MomentCone::orthant(3).unwrap(), dp3(), q] {
        let xi = random_reeb(&cone, &mut rng);
        let exact = vol(&cone, &xi);
        let mc = monte_carlo_volume(&cone, &xi, 400_000, &mut rng);
        assert!((exact - mc).abs() < 0.03 * exact, "{exact} vs {mc}");
    }
}

#[test]
fn scale_covariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for (name, cone) in sample_cones() {
        let m = cone.dim() as i32;
        for _ in 0..20 {
            let xi = random_reeb(&cone, &mut rng);
            let t: f64 = rng.gen_range(0.2..5.0);
            let scaled: Vec<f64> = xi.iter().map(|x| x * t).collect();
            let lhs = vol(&cone, &scaled);
            let rhs = t.powi(-m) * vol(&cone, &xi);
            assert!((lhs - rhs).abs() <= 1e-9 * rhs, "{name}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn slice_gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    for (name, cone) in sample_cones() {
        let gamma = gorenstein_gamma(&cone).unwrap();
        let basis = slice_basis(&gamma);
        for _ in 0..10 {
            let xi = on_slice(&cone, &gamma, &mut rng);
            let g = DVector::from_vec(volume_gradient(&cone, &ReebVector(xi.clone())).unwrap());
            let analytic = basis.transpose() * g;
            for c in 0..basis.ncols() {
                let h = 1e-6 * xi.iter().map(|x| x.abs()).fold(0.0, f64::max);
                let shift = |s: f64| -> Vec<f64> {
                    xi.iter().enumerate().map(|(i, x)| x + s * basis[(i, c)]).collect()
                };
                let fd = (vol(&cone, &shift(h)) - vol(&cone, &shift(-h))) / (2.0 * h);
                let scale = analytic.norm().max(vol(&cone, &xi));
                assert!(
                    (fd - analytic[c]).abs() <= 1e-6 * scale,
                    "{name}: {fd} vs {}",
                    analytic[c]
                );
            }
        }
    }
}

#[test]
fn convexity_probe() {
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    for (name, cone) in sample_cones() {
        let gamma = gorenstein_gamma(&cone).unwrap();
        for _ in 0..20 {
            let a = on_slice(&cone, &gamma, &mut rng);
            let b = on_slice(&cone, &gamma, &mut rng);
            let values: Vec<f64> = (0..=10)
                .map(|i| {
                    let t = i as f64 / 10.0;
                    let p: Vec<f64> = a.iter().zip(&b).map(|(x, y)| (1.0 - t) * x + t * y).collect();
                    vol(&cone, &p)
                })
                .collect();
            let max_end = values[0].max(values[10]);
            assert!(values[5] <= max_end * (1.0 + 1e-12), "{name}");
            // Convex along the segment: second differences are non-negative.
            for w in values.windows(3) {
                assert!(w[0] + w[2] - 2.0 * w[1] >= -1e-9 * w[1], "{name}: {w:?}");
            }
        }
    }
}

#[test]
fn minimizer_is_stationary_and_strict() {
    for (name, cone) in sample_cones() {
        let gamma = gorenstein_gamma(&cone).unwrap();
        let m = minimize_volume(&cone, &gamma).unwrap();
        assert!(m.grad_norm < 1e-8, "{name}: {}", m.grad_norm);
        let basis = slice_basis(&gamma);
        for c in 0..basis.ncols() {
            for sign in [-1.0, 1.0] {
                let p: Vec<f64> = m
                    .xi
                    .0
                    .iter()
                    .enumerate()
                    .map(|(i, x)| x + sign * 1e-3 * basis[(i, c)])
                    .collect();
                assert!(vol(&cone, &p) > m.volume, "{name}");
            }
        }
        // Below the volume at the barycentric start.
        let start = sasaki_core::toric::reeb::barycentric_start(&cone, &gamma).unwrap();
        assert!(m.volume <= vol(&cone, &start.0) * (1.0 + 1e-12));
    }
}

#[test]
fn restarts_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for (name, cone) in sample_cones() {
        let gamma = gorenstein_gamma(&cone).unwrap();
        let reference = minimize_volume(&cone, &gamma).unwrap();
        for _ in 0..5 {
            let start = ReebVector(random_reeb(&cone, &mut rng));
            let m = minimize_volume_from(&cone, &gamma, &start, MinimizeOptions::default()).unwrap();
            for (a, b) in m.xi.0.iter().zip(&reference.xi.0) {
                assert!((a - b).abs() < 1e-8, "{name}: {:?} vs {:?}", m.xi.0, reference.xi.0);
            }
        }
    }
}

#[test]
fn known_minimizers() {
    // Volume of Y^{p,q} relative to the round S^5, which is the orthant's
    // normalized volume at (1,1,1).
    for (p, q) in [(2i64, 1i64), (3, 1), (3, 2), (5, 3)] {
        let cone = ypq(p, q);
        let gamma = gorenstein_gamma(&cone).unwrap();
        let m = minimize_volume(&cone, &gamma).unwrap();
        let (p, q) = (p as f64, q as f64);
        let root = (4.0 * p * p - 3.0 * q * q).sqrt();
        let expected =
            q * q * (2.0 * p + root) / (3.0 * p * p * (3.0 * q * q - 2.0 * p * p + p * root));
        assert!((m.volume - expected).abs() < 1e-10, "{} vs {expected}", m.volume);
    }
    let conifold = conifold_from_weights();
    let m = minimize_volume(&conifold, &gorenstein_gamma(&conifold).unwrap());
    assert!((m.unwrap().volume - 16.0 / 27.0).abs() < 1e-12);
}

#[test]
fn gamma_exists_for_random_cy_quotients() {
    let mut rng = ChaCha8Rng::seed_from_u64(48);
    for &(k, n) in &[(1usize, 4usize), (1, 5), (1, 6), (2, 5), (2, 6), (3, 6)] {
        for _ in 0..15 {
            let omega = random_cy_matrix(&mut rng, k, n);
            let q = cone_from_weights(&omega).unwrap();
            let gamma = gorenstein_gamma(&q.cone);
            assert!(gamma.is_ok(), "{:?}: {:?}", omega.rows(), gamma);
        }
    }
}

#[test]
fn guillemin_hessian_positive_definite_on_conifold() {
    let mut rng = ChaCha8Rng::seed_from_u64(49);
    let cone = conifold_from_weights();
    let gamma = gorenstein_gamma(&cone).unwrap();
    let xi = minimize_volume(&cone, &gamma).unwrap().xi;
    for _ in 0..100 {
        // Interior points: positive combinations of the rays.
        let mut y = vec![0.0; 3];
        for r in cone.rays() {
            let c: f64 = rng.gen_range(0.01..2.0);
            for (yi, &ri) in y.iter_mut().zip(r) {
                *yi += c * ri as f64;
            }
        }
        let h = guillemin_hessian(&cone, &xi, &y).unwrap();
        let eig = h.clone().symmetric_eigen().eigenvalues;
        assert!(eig.iter().all(|&e| e > 0.0), "{y:?}: {eig}");
        assert!(h.clone().cholesky().is_some());
    }
}
