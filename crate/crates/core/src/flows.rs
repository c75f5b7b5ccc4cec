//! Airy and KdV flows: conjugations of the rotation `Ωᵗ` by `𝓕₋` and by the
//! scattering map, a pseudospectral reference integrator for
//! `∂ₜu = -∂ₓ³u + 6u∂ₓu`, and diagnostics for `U_KdV - U_Airy`.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::direct::{
    action_density_at, check_generic_with, scattering_data_with, smoothing_part, ScatteringConfig,
    ScatteringData,
};
use crate::error::FlowError;
use crate::grid::{fourier_minus, inverse_fourier_minus, sobolev_norm, Potential, SpectralField, SpectralGrid};
use crate::inverse::{inverse_scattering, InverseConfig};
use crate::periodic;
use crate::scalar::{cis, Cplx, Real};
use crate::tail::{tail_slope, TAIL_BINS};

/// Exponent of the cubic phase: `Ωᵗσ(k) = e^{ROTATION_SIGN·8ik³t} σ(k)`.
///
/// With `𝓕₋(f)(k) = ∫ e^{2ikx} f`, a solution of `∂ₜv = -∂ₓ³v` satisfies
/// `∂ₜ𝓕₋v = -(-2ik)³ 𝓕₋v = -8ik³ 𝓕₋v`, hence the negative sign. The Airy
/// oracle test pins it down.
pub const ROTATION_SIGN: f64 = -1.0;

fn check_time(t: f64) -> Result<(), FlowError> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(FlowError::NegativeTime { t })
    }
}

/// `Ωᵗσ(k) = e^{-8ik³t} σ(k)`.
pub fn rotate<T: Real>(sigma: &SpectralField<T>, t: T) -> SpectralField<T> {
    let ks = *sigma.grid();
    let c = T::lit(8.0 * ROTATION_SIGN) * t;
    sigma.map(|j, v| {
        let k = ks.node(j);
        v * cis(c * k * k * k)
    })
}

/// `U_Airy^t = 𝓕₋⁻¹ ∘ Ωᵗ ∘ 𝓕₋`, band-limited to the spectral window.
pub fn airy_flow<T: Real>(q: &Potential<T>, t: T, ks: &SpectralGrid<T>) -> Result<Potential<T>, FlowError> {
    check_time(t.as_f64())?;
    let spectrum = fourier_minus(q, ks)?;
    Ok(inverse_fourier_minus(&rotate(&spectrum, t), q.grid())?)
}

/// Exact linear propagator `e^{-t∂ₓ³}` on the periodized grid: the linear
/// part of [`kdv_flow_spectral`], covering the full grid band.
pub fn airy_flow_periodic<T: Real>(q: &Potential<T>, t: T) -> Result<Potential<T>, FlowError> {
    check_time(t.as_f64())?;
    if t == T::zero() {
        return Ok(q.clone());
    }
    let period = q.grid().period();
    let out = periodic::apply_multiplier(&periodic::to_complex(q.values()), period, |xi: T, nyquist| {
        let phase = xi * xi * xi * t;
        if nyquist {
            Complex::new(phase.cos(), T::zero())
        } else {
            cis(phase)
        }
    });
    Ok(q.with_values(out.into_iter().map(|c| c.re).collect())?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowConfig {
    pub scattering: ScatteringConfig,
    pub inverse: InverseConfig,
    /// Range `[0, κ_max]` of the genericity scans.
    pub kappa_max: f64,
    /// Edge-decay threshold for evolved (reconstructed) potentials.
    pub output_decay: f64,
    /// Time step of the pseudospectral reference.
    pub dt: f64,
    /// The periodic references of [`smoothing_report`] run on a torus this
    /// many times longer than the datum's window, so that radiation does not
    /// wrap around. Power of two.
    pub reference_padding: usize,
    /// The scattering flow reconstructs on a window this many times wider
    /// than the datum's and returns the central part, keeping the kernel
    /// truncation away from the returned nodes. Power of two.
    pub reconstruction_padding: usize,
    /// `k`-range of the phase and action diagnostics.
    pub phase_window: (f64, f64),
    /// `k`-range of the tail-slope fits.
    pub tail_window: (f64, f64),
    /// Sobolev order `N`; the difference is measured in `H^{N+1}`.
    pub sobolev_order: u32,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            scattering: ScatteringConfig::default(),
            inverse: InverseConfig::default(),
            kappa_max: 10.0,
            output_decay: 1e-4,
            dt: 1e-4,
            reference_padding: 16,
            reconstruction_padding: 1,
            phase_window: (0.5, 4.0),
            tail_window: (4.0, 32.0),
            sobolev_order: 2,
        }
    }
}

/// `U_KdV^t = S⁻¹ ∘ Ωᵗ ∘ S`.
pub fn kdv_flow_scattering<T: Real>(
    q: &Potential<T>,
    t: T,
    ks: &SpectralGrid<T>,
    config: &FlowConfig,
) -> Result<Potential<T>, FlowError> {
    let (_, wide) = evolve_on_wide_window(q, t, ks, config)?;
    let evolved = wide.restricted(q.grid())?;
    certify_output(&evolved, config)?;
    Ok(evolved)
}

/// Scattering data of `q` and its scattering-flow image on the window
/// widened by `reconstruction_padding`.
fn evolve_on_wide_window<T: Real>(
    q: &Potential<T>,
    t: T,
    ks: &SpectralGrid<T>,
    config: &FlowConfig,
) -> Result<(ScatteringData<T>, Potential<T>), FlowError> {
    check_time(t.as_f64())?;
    let before = check_generic_with(q, T::lit(config.kappa_max), config.scattering.boundary_decay)?;
    if !before.passed {
        return Err(FlowError::NotGeneric {
            w_at_zero: before.w_at_zero.as_f64(),
            min_w: before.min_w_on_axis.as_f64(),
        });
    }
    let sd = scattering_data_with(q, ks, &config.scattering)?;
    let pad = config.reconstruction_padding;
    let grid = *q.padded(pad)?.grid();
    let inverse = InverseConfig {
        n_y: config.inverse.n_y * pad,
        ..config.inverse.clone()
    };
    let evolved = inverse_scattering(&rotate(&sd.s, t), &grid, &inverse)?;
    Ok((sd, evolved))
}

fn certify_output<T: Real>(evolved: &Potential<T>, config: &FlowConfig) -> Result<(), FlowError> {
    let after = check_generic_with(evolved, T::lit(config.kappa_max), config.output_decay)?;
    if !after.passed {
        return Err(FlowError::GenericityLost {
            w_at_zero: after.w_at_zero.as_f64(),
            min_w: after.min_w_on_axis.as_f64(),
        });
    }
    Ok(())
}

/// Growth of `sup|u|` that aborts [`kdv_flow_spectral`].
pub const BLOW_UP_FACTOR: f64 = 100.0;

/// Integrating-factor RK4 for `∂ₜu = -∂ₓ³u + 6u∂ₓu` on the periodized grid.
///
/// In Fourier variables `û_t = iξ³û + 3iξ (u²)^`; the linear part is
/// integrated exactly and the nonlinear term, dealiased by the 2/3 rule, by
/// classical RK4 with `⌈t/dt⌉` equal steps.
pub fn kdv_flow_spectral<T: Real>(q: &Potential<T>, t: T, dt: T) -> Result<Potential<T>, FlowError> {
    check_time(t.as_f64())?;
    if !(dt > T::zero()) {
        return Err(crate::error::GridError::NonPositive {
            what: "dt",
            value: dt.as_f64(),
        }
        .into());
    }
    let n = q.grid().len();
    let steps = (t / dt).ceil().to_usize().unwrap_or(0);
    if steps == 0 {
        return Ok(q.clone());
    }
    let h = t / T::from_usize_lossy(steps);
    let xi = periodic::wavenumbers(n, q.grid().period());
    let cutoff = xi[n / 2] * T::lit(2.0 / 3.0);
    let half = T::lit(0.5);
    let e_half: Vec<Cplx<T>> = xi.iter().map(|&k| cis(k * k * k * h * half)).collect();
    let e_full: Vec<Cplx<T>> = e_half.iter().map(|e| e * e).collect();
    // g = 3iξ·h on the retained modes; the Nyquist mode carries no odd
    // derivative.
    let g: Vec<Cplx<T>> = xi
        .iter()
        .enumerate()
        .map(|(m, &k)| {
            if k.abs() > cutoff || (n.is_multiple_of(2) && m == n / 2) {
                Complex::new(T::zero(), T::zero())
            } else {
                Complex::new(T::zero(), T::lit(3.0) * k * h)
            }
        })
        .collect();

    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let scale = T::one() / T::from_usize_lossy(n);
    let mut work = vec![Complex::new(T::zero(), T::zero()); n];
    let mut nonlinear = |v: &[Cplx<T>], out: &mut [Cplx<T>]| {
        work.copy_from_slice(v);
        inv.process(&mut work);
        for w in work.iter_mut() {
            let u = w.re * scale;
            *w = Complex::new(u * u, T::zero());
        }
        fwd.process(&mut work);
        for ((o, w), gm) in out.iter_mut().zip(&work).zip(&g) {
            *o = *w * *gm;
        }
    };

    let mut v = periodic::to_complex(q.values());
    fwd.process(&mut v);
    let sup0 = q.sup_norm();
    let zero = Complex::new(T::zero(), T::zero());
    let (mut a, mut b, mut c, mut d) = (vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n]);
    let mut stage = vec![zero; n];
    let two = T::lit(2.0);
    let sixth = T::one() / T::lit(6.0);
    for step in 1..=steps {
        nonlinear(&v, &mut a);
        for m in 0..n {
            stage[m] = e_half[m] * (v[m] + a[m] * half);
        }
        nonlinear(&stage, &mut b);
        for m in 0..n {
            stage[m] = e_half[m] * v[m] + b[m] * half;
        }
        nonlinear(&stage, &mut c);
        for m in 0..n {
            stage[m] = e_full[m] * v[m] + e_half[m] * c[m];
        }
        nonlinear(&stage, &mut d);
        for m in 0..n {
            v[m] = e_full[m] * v[m] + (e_full[m] * a[m] + e_half[m] * (b[m] + c[m]) * two + d[m]) * sixth;
        }
        if step % 16 == 0 || step == steps {
            let mut probe = v.clone();
            inv.process(&mut probe);
            let sup = probe.iter().fold(T::zero(), |s, z| s.max((z.re * scale).abs()));
            if !(sup <= T::lit(BLOW_UP_FACTOR) * sup0.max(T::min_positive_value())) {
                return Err(FlowError::BlowUp {
                    t: (h * T::from_usize_lossy(step)).as_f64(),
                    growth: (sup / sup0).as_f64(),
                });
            }
        }
    }
    inv.process(&mut v);
    Ok(q.with_values(v.into_iter().map(|z| z.re * scale).collect())?)
}

/// Diagnostics of `d = U_KdV^t(q) - U_Airy^t(q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowReport<T> {
    pub t: T,
    /// `‖U_KdV^t(q)‖` by scattering vs the pseudospectral reference, in `L²`.
    pub l2_diff_kdv_spectral: T,
    /// `L²` distance between the two evaluations of `d`: the reference
    /// integrator minus its own linear part, and the decomposition
    /// `𝓕₋⁻¹ΩᵗA(q) + S⁻¹(ΩᵗS(q)) - 𝓕₋⁻¹(ΩᵗS(q))`.
    pub decomposition_mismatch: T,
    /// `‖d‖_{H^{N+1}}` of the direct difference.
    pub h_n1_norm_difference: T,
    /// `sup_k |I(qₜ,k) - I(q,k)|` over the phase window.
    pub action_drift: T,
    /// `sup_k |arg S(qₜ,k) - arg S(q,k) + 8k³t|` (mod 2π) over the phase window.
    pub phase_residual: T,
    /// Tail slopes `(slope of |d̂|, slope of |q̂|)`.
    pub tail_slopes: (T, T),
    /// The two evaluations of `d`.
    pub difference_direct: Potential<T>,
    pub difference_decomposed: Potential<T>,
}

impl<T: Real> FlowReport<T> {
    pub fn tail_gap(&self) -> T {
        self.tail_slopes.1 - self.tail_slopes.0
    }
}

/// Magnitudes of the periodic Fourier coefficients indexed by `k = ξ/2`.
pub fn periodic_spectrum<T: Real>(q: &Potential<T>) -> (Vec<T>, Vec<T>) {
    let mut buf = periodic::to_complex(q.values());
    periodic::forward(&mut buf);
    let xi = periodic::wavenumbers(q.grid().len(), q.grid().period());
    let h = q.grid().step();
    let half = T::lit(0.5);
    xi.iter().zip(&buf).map(|(x, c)| (x.abs() * half, c.norm() * h)).unzip()
}

/// Evaluates `d = U_KdV^t(q) - U_Airy^t(q)` twice: as the pseudospectral
/// reference minus its exact linear part (both on the padded torus), and by
/// the decomposition through `A`, the scattering flow and `𝓕₋⁻¹`. Also
/// re-scatters the evolved potential, on the widened reconstruction window,
/// for the phase and action diagnostics.
pub fn smoothing_report<T: Real>(
    q: &Potential<T>,
    t: T,
    ks: &SpectralGrid<T>,
    config: &FlowConfig,
) -> Result<FlowReport<T>, FlowError> {
    let (sd, evolved_wide) = evolve_on_wide_window(q, t, ks, config)?;
    let evolved = evolved_wide.restricted(q.grid())?;
    certify_output(&evolved, config)?;
    let wide = q.padded(config.reference_padding)?;
    let spectral_wide = kdv_flow_spectral(&wide, t, T::lit(config.dt))?;
    let linear_wide = airy_flow_periodic(&wide, t)?;
    let direct_wide = wide.with_values(
        spectral_wide.values().iter().zip(linear_wide.values()).map(|(a, b)| *a - *b).collect(),
    )?;
    let spectral = spectral_wide.restricted(q.grid())?;
    let direct = direct_wide.restricted(q.grid())?;

    let rotated = rotate(&sd.s, t);
    let smooth = inverse_fourier_minus(&rotate(&smoothing_part(q, &sd)?, t), q.grid())?;
    let linear_of_rotated = inverse_fourier_minus(&rotated, q.grid())?;
    let decomposed = q.with_values(
        (0..q.grid().len())
            .map(|j| smooth.values()[j] + evolved.values()[j] - linear_of_rotated.values()[j])
            .collect(),
    )?;

    let rescatter = ScatteringConfig {
        boundary_decay: config.output_decay,
        ..config.scattering
    };
    let sd_t = scattering_data_with(&evolved_wide, ks, &rescatter)?;
    let (lo, hi) = (T::lit(config.phase_window.0), T::lit(config.phase_window.1));
    let mut action_drift = T::zero();
    let mut phase_residual = T::zero();
    let two_pi = T::lit(2.0) * T::PI();
    for j in ks.nonnegative() {
        let k = ks.node(j);
        if k < lo || k > hi {
            continue;
        }
        let (s0, st) = (sd.s.values()[j], sd_t.s.values()[j]);
        action_drift = action_drift.max((action_density_at(st, k) - action_density_at(s0, k)).abs());
        let raw = st.arg() - s0.arg() - T::lit(8.0 * ROTATION_SIGN) * k * k * k * t;
        let wrapped = raw - two_pi * (raw / two_pi).round();
        phase_residual = phase_residual.max(wrapped.abs());
    }

    let (tk, td) = periodic_spectrum(&direct_wide);
    let (_, tq) = periodic_spectrum(&wide);
    let (tlo, thi) = (T::lit(config.tail_window.0), T::lit(config.tail_window.1));
    let nan = T::nan();
    let tail_slopes = (
        tail_slope(&tk, &td, tlo, thi, TAIL_BINS).unwrap_or(nan),
        tail_slope(&tk, &tq, tlo, thi, TAIL_BINS).unwrap_or(nan),
    );

    Ok(FlowReport {
        t,
        l2_diff_kdv_spectral: evolved.l2_distance(&spectral)?,
        decomposition_mismatch: direct.l2_distance(&decomposed)?,
        h_n1_norm_difference: sobolev_norm(wide.grid(), direct_wide.values(), config.sobolev_order + 1),
        action_drift,
        phase_residual,
        tail_slopes,
        difference_direct: direct,
        difference_decomposed: decomposed,
    })
}
