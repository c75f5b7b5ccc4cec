use std::f64::consts::PI;

use kdvscatter::grid::{
    fourier_minus, h_zeta_norm, inverse_fourier_minus, sobolev_norm, weighted_l2_norm, zeta_weight, Interpolation,
    Potential, SpatialGrid, SpectralField, SpectralGrid,
};
use kdvscatter::oracles::adaptive_quadrature_line;
use num_complex::Complex64;
use proptest::prelude::*;

fn line() -> SpatialGrid<f64> {
    SpatialGrid::new(20.0, 2048).unwrap()
}

fn band() -> SpectralGrid<f64> {
    SpectralGrid::new(12.0, 1024).unwrap()
}

fn sech2(x: f64) -> f64 {
    let c = x.cosh();
    1.0 / (c * c)
}

#[test]
fn zero_transforms_both_ways() {
    let q = Potential::zero(line());
    let f = fourier_minus(&q, &band()).unwrap();
    assert!(f.values().iter().all(|v| v.norm() == 0.0));
    let back = inverse_fourier_minus(&SpectralField::zeros(band()), &line()).unwrap();
    assert!(back.values().iter().all(|&v| v == 0.0));
}

#[test]
fn gaussian_pair_forward_and_back() {
    let q = Potential::from_fn(line(), |x: f64| (-x * x).exp()).unwrap();
    let ks = band();
    let f = fourier_minus(&q, &ks).unwrap();
    for j in 0..ks.len() {
        let k = ks.node(j);
        let expect = PI.sqrt() * (-k * k).exp();
        assert!((f.values()[j] - expect).norm() < 1e-12, "k = {k}");
    }
    // The closed form itself, against an independent quadrature.
    for k in [0.0, 0.7, 2.5] {
        let re = adaptive_quadrature_line(|x| (2.0 * k * x).cos() * (-x * x).exp());
        assert!((re - PI.sqrt() * (-k * k).exp()).abs() < 1e-10);
    }

    let exact = SpectralField::from_fn(ks, |k: f64| Complex64::new(PI.sqrt() * (-k * k).exp(), 0.0)).unwrap();
    let back = inverse_fourier_minus(&exact, &line()).unwrap();
    for (x, v) in line().nodes().iter().zip(back.values()) {
        assert!((v - (-x * x).exp()).abs() < 1e-10, "x = {x}");
    }
}

#[test]
fn box_transform_converges_to_sinc() {
    // Half-valued samples at the jumps; the continuation converges to the
    // indicator at second order in h.
    let error_at = |n: usize| {
        let g = SpatialGrid::new(4.0, n).unwrap();
        let q = Potential::from_fn(g, |x: f64| {
            if (x.abs() - 1.0).abs() < 1e-12 {
                0.5
            } else if x.abs() < 1.0 {
                1.0
            } else {
                0.0
            }
        })
        .unwrap()
        .with_interpolation(Interpolation::PiecewiseLinear);
        let ks = SpectralGrid::new(4.0, 32).unwrap();
        let f = fourier_minus(&q, &ks).unwrap();
        assert_eq!(f.values()[ks.zero_index()].re, 2.0);
        (0..ks.len())
            .map(|j| {
                let k = ks.node(j);
                let expect = if k == 0.0 { 2.0 } else { (2.0 * k).sin() / k };
                (f.values()[j] - expect).norm()
            })
            .fold(0.0, f64::max)
    };
    let coarse = error_at(1024);
    let fine = error_at(2048);
    assert!(fine < 1e-3, "{fine}");
    assert!(coarse / fine > 3.5, "{coarse} -> {fine}");
}

#[test]
fn sech2_roundtrip() {
    let q = Potential::from_fn(line(), sech2).unwrap();
    let back = inverse_fourier_minus(&fourier_minus(&q, &band()).unwrap(), &line()).unwrap();
    let err = q.values().iter().zip(back.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(err < 1e-10, "{err}");
}

#[test]
fn asymmetric_spectrum_is_rejected() {
    let ks = band();
    let lopsided = SpectralField::from_fn(ks, |k: f64| Complex64::new((-k * k).exp(), (-k * k).exp())).unwrap();
    assert!(inverse_fourier_minus(&lopsided, &line()).is_err());
}

#[test]
fn norms_against_closed_forms_and_quadrature() {
    let g = line();
    assert_eq!(weighted_l2_norm::<f64, f64>(&g, &vec![0.0; g.len()], 1.0), 0.0);
    assert_eq!(sobolev_norm(&g, &vec![0.0; g.len()], 3), 0.0);

    let gauss: Vec<f64> = g.nodes().iter().map(|x| (-x * x).exp()).collect();
    let oracle = adaptive_quadrature_line(|x| (1.0 + x * x) * (-2.0 * x * x).exp()).sqrt();
    assert!((weighted_l2_norm(&g, &gauss, 1.0) - oracle).abs() < 1e-10);
    assert!((sobolev_norm(&g, &gauss, 0) - (PI / 2.0).powf(0.25)).abs() < 1e-12);
    let h1 = adaptive_quadrature_line(|x| (1.0 + 4.0 * x * x) * (-2.0 * x * x).exp()).sqrt();
    assert!((sobolev_norm(&g, &gauss, 1) - h1).abs() < 1e-10);

    let fine = SpatialGrid::new(4.0, 4096).unwrap();
    let indicator: Vec<f64> = fine
        .nodes()
        .iter()
        .map(|x: &f64| {
            if (x.abs() - 1.0).abs() < 1e-12 {
                0.5
            } else if x.abs() < 1.0 {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    assert!((weighted_l2_norm(&fine, &indicator, 0.0) - 2f64.sqrt()).abs() < 1e-3);
}

#[test]
fn zeta_values() {
    assert_eq!(zeta_weight(0.25), 0.25);
    assert_eq!(zeta_weight(3.0), 1.0);
    assert_eq!(zeta_weight(-3.0), -1.0);
    let mid = zeta_weight(0.75);
    assert!(mid > 0.5 && mid < 1.0);
}

#[test]
fn h_zeta_norm_of_gaussian() {
    let ks = SpectralGrid::new(12.0, 1024).unwrap();
    assert_eq!(h_zeta_norm(&SpectralField::zeros(ks), 1), 0.0);
    let f = SpectralField::from_fn(ks, |k: f64| Complex64::new((-k * k).exp(), 0.0)).unwrap();
    let oracle = (adaptive_quadrature_line(|k| (-2.0 * k * k).exp())
        + adaptive_quadrature_line(|k| {
            let z = zeta_weight(k);
            z * z * 4.0 * k * k * (-2.0 * k * k).exp()
        }))
    .sqrt();
    assert!((h_zeta_norm(&f, 1) - oracle).abs() < 1e-8);

    let g = SpectralField::from_fn(ks, |k: f64| Complex64::new((-(k - 0.5).powi(2)).exp(), 0.3 * k * (-k * k).exp())).unwrap();
    let reflected = g.map(|j, _| g.mirrored(j).conj());
    assert!((h_zeta_norm(&g, 2) - h_zeta_norm(&reflected, 2)).abs() < 1e-12);
}

/// Sums of a few Gaussians with random centers, widths and amplitudes.
fn gaussian_sum() -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    prop::collection::vec((-3.0..3.0f64, 0.7..2.0f64, -1.0..1.0f64), 1..4)
}

fn eval_sum(terms: &[(f64, f64, f64)], x: f64) -> f64 {
    terms.iter().map(|&(c, w, a)| a * (-((x - c) / w).powi(2)).exp()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transform_is_conjugate_symmetric(terms in gaussian_sum()) {
        let q = Potential::from_fn(line(), |x| eval_sum(&terms, x)).unwrap();
        let f = fourier_minus(&q, &band()).unwrap();
        prop_assert!(f.symmetry_residual() < 1e-12);
    }

    #[test]
    fn inverse_undoes_forward_on_gaussians(terms in gaussian_sum()) {
        let q = Potential::from_fn(line(), |x| eval_sum(&terms, x)).unwrap();
        let back = inverse_fourier_minus(&fourier_minus(&q, &band()).unwrap(), &line()).unwrap();
        let err = q.l2_distance(&back).unwrap();
        prop_assert!(err <= 1e-8 * q.l2_norm(), "{} vs {}", err, q.l2_norm());
    }

    #[test]
    fn unweighted_norm_is_sobolev_zero(terms in gaussian_sum()) {
        let g = line();
        let f: Vec<f64> = g.nodes().iter().map(|&x| eval_sum(&terms, x)).collect();
        let a = weighted_l2_norm(&g, &f, 0.0);
        let b = sobolev_norm(&g, &f, 0);
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300));
    }

    #[test]
    fn zeta_is_odd_and_nondecreasing(a in -3.0..3.0f64, b in -3.0..3.0f64) {
        prop_assert_eq!(zeta_weight(-a), -zeta_weight(a));
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(zeta_weight(lo) <= zeta_weight(hi));
    }
}
