use kdvscatter::hilbert::{hilbert_transform, hilbert_transform_complex, hilbert_transform_padded};
use kdvscatter::oracles::pv_hilbert_oracle;
use num_complex::Complex64;
use proptest::prelude::*;

/// Nodes `-k_max + j·dk`, `j = 0..n`.
fn nodes(n: usize, k_max: f64) -> (Vec<f64>, f64) {
    let dk = 2.0 * k_max / n as f64;
    ((0..n).map(|j| -k_max + j as f64 * dk).collect(), dk)
}

fn l2(v: &[f64], dk: f64) -> f64 {
    (v.iter().map(|x| x * x).sum::<f64>() * dk).sqrt()
}

#[test]
fn zero_in_zero_out() {
    assert!(hilbert_transform_padded(&[0.0f64; 64], 0.1).iter().all(|&v| v == 0.0));
    let z = vec![Complex64::new(0.0, 0.0); 64];
    assert!(hilbert_transform_complex(&z, 0.1).iter().all(|v| v.norm() == 0.0));
}

#[test]
fn lorentzian_matches_principal_value() {
    let (ks, dk) = nodes(1 << 16, 2048.0);
    let v: Vec<f64> = ks.iter().map(|k| 1.0 / (1.0 + k * k)).collect();
    let hv = hilbert_transform_padded(&v, dk);
    for k in [-3.0, -0.5, 0.0, 0.25, 1.0, 2.0, 5.0] {
        let j = ((k + 2048.0) / dk).round() as usize;
        let oracle = pv_hilbert_oracle(|s| 1.0 / (1.0 + s * s), k);
        assert!((oracle - k / (1.0 + k * k)).abs() < 1e-8, "oracle at {k}");
        assert!((hv[j] - oracle).abs() < 1e-5, "k = {k}: {} vs {oracle}", hv[j]);
    }
}

#[test]
fn rational_functions_match_principal_value() {
    let (ks, dk) = nodes(1 << 16, 2048.0);
    let cases: [fn(f64) -> f64; 3] = [
        |k| 1.0 / (1.0 + k * k).powi(2),
        |k| k / (4.0 + k * k).powi(2),
        |k| (1.0 - k) / (1.0 + (k - 1.0).powi(2) * 0.5).powi(2),
    ];
    for (c, f) in cases.iter().enumerate() {
        let v: Vec<f64> = ks.iter().map(|&k| f(k)).collect();
        let hv = hilbert_transform_padded(&v, dk);
        for k in [-2.0, -0.3125, 0.0, 0.6875, 1.5, 3.0] {
            let j = ((k + 2048.0) / dk).round() as usize;
            let oracle = pv_hilbert_oracle(f, k);
            assert!((hv[j] - oracle).abs() < 1e-5, "case {c}, k = {k}: {} vs {oracle}", hv[j]);
        }
    }
}

#[test]
fn involution_and_isometry_on_zero_mean_data() {
    let (ks, dk) = nodes(2048, 16.0);
    let v: Vec<f64> = ks.iter().map(|k| -2.0 * k * (-k * k).exp()).collect();
    let hv = hilbert_transform(&v, dk);
    let hhv = hilbert_transform(&hv, dk);
    assert!(v.iter().zip(&hhv).all(|(a, b)| (a + b).abs() < 1e-8));
    assert!((l2(&hv, dk) - l2(&v, dk)).abs() < 1e-9 * l2(&v, dk));
}

#[test]
fn commutes_with_differentiation() {
    let (ks, dk) = nodes(4096, 16.0);
    let v: Vec<f64> = ks.iter().map(|k| (-k * k).exp()).collect();
    let dv: Vec<f64> = ks.iter().map(|k| -2.0 * k * (-k * k).exp()).collect();
    let h_of_derivative = hilbert_transform(&dv, dk);
    let hv = hilbert_transform(&v, dk);
    // Sixth-order centered differences of 𝓗v.
    const C: [f64; 3] = [3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0];
    for j in 3..ks.len() - 3 {
        let d = (1..=3).map(|m| C[m - 1] * (hv[j + m] - hv[j - m])).sum::<f64>() / dk;
        assert!((d - h_of_derivative[j]).abs() < 1e-8, "k = {}", ks[j]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn odd_linear_isometry(a in -2.0..2.0f64, b in -2.0..2.0f64, c in -1.5..1.5f64, w in 0.5..2.0f64) {
        let (ks, dk) = nodes(1024, 24.0);
        let g = |k: f64| (-((k - c) / w).powi(2)).exp();
        let u: Vec<f64> = ks.iter().map(|&k| g(k) - g(-k)).collect();
        let v: Vec<f64> = ks.iter().map(|&k| -2.0 * (k - c) / (w * w) * g(k)).collect();
        let combo: Vec<f64> = u.iter().zip(&v).map(|(x, y)| a * x + b * y).collect();
        let (hu, hv, hc) = (hilbert_transform(&u, dk), hilbert_transform(&v, dk), hilbert_transform(&combo, dk));
        for j in 0..ks.len() {
            prop_assert!((hc[j] - a * hu[j] - b * hv[j]).abs() < 1e-12);
        }
        // u is odd and zero-mean: 𝓗u is even and has the same norm.
        for j in 1..ks.len() {
            prop_assert!((hu[j] - hu[ks.len() - j]).abs() < 1e-12);
        }
        prop_assert!((l2(&hu, dk) - l2(&u, dk)).abs() <= 1e-9 * l2(&u, dk).max(1e-300));
    }
}
