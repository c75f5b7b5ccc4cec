//! FFT helpers on periodized uniform grids.
//!
//! The DFT convention is the one of `rustfft`: `X_m = Σ_j x_j e^{-2πi jm/n}`,
//! so with samples `f(a + jh)` the coefficient `X_m` multiplies the mode
//! `e^{iξ_m (x-a)}` with `ξ_m = 2π m/(n h)` (`m` read in signed order).

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::scalar::{Cplx, Real};

/// Signed angular wavenumbers in FFT order for a period `period`.
///
/// The Nyquist entry (even `n`) is reported as `+π n/period`; callers that
/// differentiate an odd number of times treat it separately.
pub(crate) fn wavenumbers<T: Real>(n: usize, period: T) -> Vec<T> {
    let base = T::lit(2.0) * T::PI() / period;
    (0..n)
        .map(|m| {
            let signed = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
            base * T::lit(signed)
        })
        .collect()
}

pub(crate) fn forward<T: Real>(data: &mut [Cplx<T>]) {
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(data.len()).process(data);
}

/// Inverse transform including the `1/n` normalization.
pub(crate) fn inverse<T: Real>(data: &mut [Cplx<T>]) {
    let n = data.len();
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(n).process(data);
    let scale = T::one() / T::from_usize_lossy(n);
    for v in data.iter_mut() {
        *v = *v * scale;
    }
}

pub(crate) fn to_complex<T: Real>(values: &[T]) -> Vec<Cplx<T>> {
    values.iter().map(|&v| Complex::new(v, T::zero())).collect()
}

/// Multiplies the spectrum of `values` by `symbol(ξ, is_nyquist)` and
/// transforms back.
pub(crate) fn apply_multiplier<T, F>(values: &[Cplx<T>], period: T, symbol: F) -> Vec<Cplx<T>>
where
    T: Real,
    F: Fn(T, bool) -> Cplx<T>,
{
    let n = values.len();
    let xi = wavenumbers(n, period);
    let mut buf = values.to_vec();
    forward(&mut buf);
    for (m, c) in buf.iter_mut().enumerate() {
        let nyquist = n.is_multiple_of(2) && m == n / 2;
        *c = *c * symbol(xi[m], nyquist);
    }
    inverse(&mut buf);
    buf
}

/// Spectral derivative of order `order` on a grid of period `period`.
/// The Nyquist mode is dropped for `order >= 1`.
pub(crate) fn derivative<T: Real>(values: &[Cplx<T>], period: T, order: u32) -> Vec<Cplx<T>> {
    if order == 0 {
        return values.to_vec();
    }
    apply_multiplier(values, period, |xi, nyquist| {
        if nyquist {
            Cplx::new(T::zero(), T::zero())
        } else {
            Cplx::new(T::zero(), xi).powu(order)
        }
    })
}

/// Band-limited translate: samples of the trigonometric interpolant of
/// `values` at `x_j + delta`.
pub(crate) fn shift_real<T: Real>(values: &[T], period: T, delta: T) -> Vec<T> {
    apply_multiplier(&to_complex(values), period, |xi, nyquist| {
        let phase = xi * delta;
        if nyquist {
            // The real interpolant carries the Nyquist mode as a cosine.
            Cplx::new(phase.cos(), T::zero())
        } else {
            Cplx::new(phase.cos(), phase.sin())
        }
    })
    .into_iter()
    .map(|c| c.re)
    .collect()
}

/// `Σ_j |∂^order f|²·h` evaluated through Parseval.
pub(crate) fn derivative_energy<T: Real>(spectrum: &[Cplx<T>], xi: &[T], step: T, order: u32) -> T {
    let n = spectrum.len();
    let scale = step / T::from_usize_lossy(n);
    spectrum
        .iter()
        .zip(xi)
        .enumerate()
        .map(|(m, (c, &x))| {
            if order > 0 && n.is_multiple_of(2) && m == n / 2 {
                T::zero()
            } else {
                c.norm_sqr() * x.powi(2 * order as i32)
            }
        })
        .sum::<T>()
        * scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_sine_is_cosine() {
        let n = 64;
        let period = 2.0 * std::f64::consts::PI;
        let h = period / n as f64;
        let f: Vec<_> = (0..n).map(|j| Complex::new((3.0 * j as f64 * h).sin(), 0.0)).collect();
        let d = derivative(&f, period, 1);
        for (j, v) in d.iter().enumerate() {
            assert!((v.re - 3.0 * (3.0 * j as f64 * h).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn shift_reproduces_translated_mode() {
        let n = 32;
        let period = 8.0;
        let h = period / n as f64;
        let k = 2.0 * std::f64::consts::PI * 3.0 / period;
        let f: Vec<f64> = (0..n).map(|j| (k * j as f64 * h).cos()).collect();
        let g = shift_real(&f, period, 0.3 * h);
        for (j, v) in g.iter().enumerate() {
            assert!((v - (k * (j as f64 * h + 0.3 * h)).cos()).abs() < 1e-12);
        }
    }
}
