use kdvscatter::corpus::GAUSSIAN;
use kdvscatter::direct::{action_density, scattering_data, scattering_data_with, ScatteringConfig};
use kdvscatter::flows::{
    airy_flow, airy_flow_periodic, kdv_flow_scattering, kdv_flow_spectral, rotate, smoothing_report, FlowConfig,
};
use kdvscatter::grid::{Potential, SpatialGrid, SpectralField, SpectralGrid};
use kdvscatter::inverse::inverse_scattering;
use kdvscatter::oracles::{kdv_invariants, linear_airy_oracle};
use kdvscatter::FlowError;
use num_complex::Complex64;
use proptest::prelude::*;

fn line() -> SpatialGrid<f64> {
    SpatialGrid::new(20.0, 2048).unwrap()
}

fn band() -> SpectralGrid<f64> {
    SpectralGrid::new(16.0, 1024).unwrap()
}

fn gaussian() -> Potential<f64> {
    GAUSSIAN.sample(line()).unwrap()
}

fn config() -> FlowConfig {
    FlowConfig {
        reconstruction_padding: 2,
        ..FlowConfig::default()
    }
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn rotation_basics() {
    let ks = band();
    let sigma = SpectralField::from_fn(ks, |k: f64| Complex64::new((-k * k).exp(), 0.4 * k * (-k * k).exp())).unwrap();
    assert_eq!(rotate(&sigma, 0.0), sigma);
    let r = rotate(&sigma, 0.3);
    assert_eq!(r.values()[ks.zero_index()], sigma.values()[ks.zero_index()]);
    assert!(r.symmetry_residual() < 1e-15);
    // At k = 1 the phase is e^{-8it}.
    let j = (0..ks.len()).find(|&j| ks.node(j) == 1.0).unwrap();
    let expect = sigma.values()[j] * Complex64::from_polar(1.0, -8.0 * 0.3);
    assert!((r.values()[j] - expect).norm() < 1e-14);
}

#[test]
fn airy_flow_against_the_mode_sum() {
    let q = gaussian();
    assert!(sup_diff(airy_flow(&q, 0.0, &band()).unwrap().values(), q.values()) < 1e-12);
    let t = 0.1;
    let oracle = linear_airy_oracle(&q, t);
    let banded = airy_flow(&q, t, &band()).unwrap();
    let periodic = airy_flow_periodic(&q, t).unwrap();
    // The band-limited flow lives on the line; compare it with the mode sum on
    // a torus long enough that nothing wraps around.
    let wide = q.padded(4).unwrap();
    let unwrapped = wide.with_values(linear_airy_oracle(&wide, t)).unwrap().restricted(q.grid()).unwrap();
    let banded_gap = sup_diff(banded.values(), unwrapped.values());
    assert!(banded_gap < 1e-8, "{banded_gap}");
    assert!(sup_diff(periodic.values(), &oracle) < 1e-12);
    assert!((periodic.l2_norm() - q.l2_norm()).abs() < 1e-10);
    assert!((banded.l2_norm() - q.l2_norm()).abs() < 1e-10);
    assert!(matches!(airy_flow(&q, -0.1, &band()), Err(FlowError::NegativeTime { .. })));
}

#[test]
fn spectral_reference_conserves_the_invariants() {
    let q = gaussian();
    let zero = Potential::zero(line());
    assert!(kdv_flow_spectral(&zero, 0.1, 1e-3).unwrap().values().iter().all(|&v| v == 0.0));
    assert_eq!(kdv_flow_spectral(&q, 0.0, 1e-4).unwrap(), q);
    assert!(matches!(kdv_flow_spectral(&q, -0.01, 1e-4), Err(FlowError::NegativeTime { .. })));

    let start = kdv_invariants(&q);
    let mut u = q.clone();
    for _ in 0..4 {
        u = kdv_flow_spectral(&u, 0.025, 1e-4).unwrap();
        let now = kdv_invariants(&u);
        assert!((now.mass - start.mass).abs() < 1e-8);
        assert!((now.momentum - start.momentum).abs() < 1e-6 * start.momentum);
        assert!((now.energy - start.energy).abs() < 1e-6 * start.energy.abs());
    }
    // The flow is genuinely nonlinear here.
    let linear = airy_flow_periodic(&q, 0.1).unwrap();
    assert!(u.l2_distance(&linear).unwrap() > 1e-3);
}

#[test]
fn scattering_flow_at_time_zero_is_the_roundtrip() {
    let q = gaussian();
    let cfg = FlowConfig::default();
    let flowed = kdv_flow_scattering(&q, 0.0, &band(), &cfg).unwrap();
    let sd = scattering_data(&q, &band()).unwrap();
    let roundtrip = inverse_scattering(&sd.s, q.grid(), &cfg.inverse).unwrap();
    assert!(flowed.l2_distance(&roundtrip).unwrap() < 1e-10);
    assert!(flowed.l2_distance(&q).unwrap() < 1e-3);

    let report = smoothing_report(&q, 0.0, &band(), &cfg).unwrap();
    assert!(report.h_n1_norm_difference < 1e-8, "{}", report.h_n1_norm_difference);
    assert!(report.action_drift < 1e-3);
}

#[test]
fn scattering_flow_tracks_the_reference_and_preserves_actions() {
    let q = gaussian();
    let ks = band();
    let cfg = config();
    let t = 0.1;
    let evolved = kdv_flow_scattering(&q, t, &ks, &cfg).unwrap();
    let reference = kdv_flow_spectral(&q.padded(16).unwrap(), t, cfg.dt).unwrap().restricted(q.grid()).unwrap();
    let diff = evolved.l2_distance(&reference).unwrap();
    assert!(diff < 1e-3, "{diff}");

    // Isospectrality: |S(qₜ)| = |S(q)| and I(qₜ) = I(q) on a moderate band.
    let rescatter = ScatteringConfig {
        boundary_decay: cfg.output_decay,
        ..cfg.scattering
    };
    let before = scattering_data(&q, &ks).unwrap();
    let after = scattering_data_with(&evolved, &ks, &rescatter).unwrap();
    let (i0, it) = (action_density(&before), action_density(&after));
    for j in 0..ks.len() {
        if ks.node(j).abs() > 4.0 {
            continue;
        }
        let (a, b) = (before.s.values()[j].norm(), after.s.values()[j].norm());
        assert!((a - b).abs() < 1e-3, "k = {}: {a} vs {b}", ks.node(j));
        assert!((i0[j] - it[j]).abs() < 1e-3, "k = {}", ks.node(j));
    }
}

#[test]
fn scattering_flow_composes() {
    let q = gaussian();
    let ks = band();
    let cfg = config();
    let direct = kdv_flow_scattering(&q, 0.1, &ks, &cfg).unwrap();
    let half = kdv_flow_scattering(&q, 0.05, &ks, &cfg).unwrap();
    // The intermediate state carries radiation to the window edge.
    let relaxed = FlowConfig {
        scattering: ScatteringConfig {
            boundary_decay: cfg.output_decay,
            ..cfg.scattering
        },
        ..cfg.clone()
    };
    let twice = kdv_flow_scattering(&half, 0.05, &ks, &relaxed).unwrap();
    let sd = scattering_data(&q, &ks).unwrap();
    let roundtrip_error = inverse_scattering(&sd.s, q.grid(), &cfg.inverse).unwrap().l2_distance(&q).unwrap();
    let gap = direct.l2_distance(&twice).unwrap();
    assert!(gap <= 2.0 * roundtrip_error.max(1e-6), "{gap} vs roundtrip {roundtrip_error}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rotation_is_a_unitary_group(t1 in -1.0..1.0f64, t2 in -1.0..1.0f64, c in -2.0..2.0f64) {
        let ks = SpectralGrid::new(8.0, 256).unwrap();
        let sigma = SpectralField::from_fn(ks, |k: f64| {
            Complex64::new((-(k - c).powi(2)).exp() + (-(k + c).powi(2)).exp(), (-(k - c).powi(2)).exp() - (-(k + c).powi(2)).exp())
        })
        .unwrap();
        let composed = rotate(&rotate(&sigma, t1), t2);
        let once = rotate(&sigma, t1 + t2);
        for j in 0..ks.len() {
            prop_assert!((composed.values()[j] - once.values()[j]).norm() < 1e-11);
            prop_assert!((once.values()[j].norm() - sigma.values()[j].norm()).abs() < 1e-15);
        }
    }
}
