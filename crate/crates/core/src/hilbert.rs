//! Hilbert transform on a uniform spectral grid.
//!
//! `𝓗v(k) = -(1/π) p.v.∫ v(k')/(k'-k) dk'`, equivalently the Fourier
//! multiplier `-i·sign(ξ)` for `v̂(ξ) = ∫ v(k) e^{-iξk} dk`. Hence
//! `𝓗 cos = sin` and `𝓗[1/(1+k²)] = k/(1+k²)`.

use num_complex::Complex;

use crate::periodic;
use crate::scalar::{Cplx, Real};

/// Window growth used by [`hilbert_transform_padded`].
pub const PADDING_FACTOR: usize = 4;

fn sign_multiplier<T: Real>(xi: T, nyquist: bool) -> Cplx<T> {
    if nyquist || xi == T::zero() {
        Complex::new(T::zero(), T::zero())
    } else if xi > T::zero() {
        Complex::new(T::zero(), -T::one())
    } else {
        Complex::new(T::zero(), T::one())
    }
}

/// Hilbert transform of complex samples `v(k_0 + j·dk)`, treating them as
/// one period of a periodic function (period `len·dk`).
///
/// The zero mode and the Nyquist mode are annihilated, so applying the
/// transform twice returns `-v` exactly for data without those modes. The
/// caller chooses a window several times wider than the support of `v`.
pub fn hilbert_transform_complex<T: Real>(v: &[Cplx<T>], dk: T) -> Vec<Cplx<T>> {
    if v.is_empty() {
        return Vec::new();
    }
    let period = dk * T::from_usize_lossy(v.len());
    periodic::apply_multiplier(v, period, sign_multiplier)
}

/// Hilbert transform of real samples; see [`hilbert_transform_complex`].
pub fn hilbert_transform<T: Real>(v: &[T], dk: T) -> Vec<T> {
    hilbert_transform_complex(&periodic::to_complex(v), dk)
        .into_iter()
        .map(|c| c.re)
        .collect()
}

/// Hilbert transform of real samples that decay towards both ends, computed
/// on a zero-padded window at least [`PADDING_FACTOR`] times longer so the
/// periodic images do not interact.
pub fn hilbert_transform_padded<T: Real>(v: &[T], dk: T) -> Vec<T> {
    if v.is_empty() {
        return Vec::new();
    }
    let padded_len = (PADDING_FACTOR * v.len()).next_power_of_two();
    let mut buf = vec![Complex::new(T::zero(), T::zero()); padded_len];
    for (b, &x) in buf.iter_mut().zip(v) {
        b.re = x;
    }
    let period = dk * T::from_usize_lossy(padded_len);
    periodic::apply_multiplier(&buf, period, sign_multiplier)[..v.len()]
        .iter()
        .map(|c| c.re)
        .collect()
}

/// `max(|v_first|, |v_last|) / max|v|`: how far the samples are from
/// having decayed at the window edges.
pub fn edge_ratio<T: Real>(v: &[T]) -> T {
    let peak = v.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    if peak == T::zero() || v.is_empty() {
        return T::zero();
    }
    v[0].abs().max(v[v.len() - 1].abs()) / peak
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, kmax: f64) -> (Vec<f64>, f64) {
        let dk = 2.0 * kmax / n as f64;
        ((0..=n).map(|j| -kmax + j as f64 * dk).collect(), dk)
    }

    #[test]
    fn zero_maps_to_zero() {
        assert!(hilbert_transform(&[0.0f64; 33], 0.1).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn gaussian_derivative_involution() {
        let (ks, dk) = grid(1024, 16.0);
        let v: Vec<f64> = ks.iter().map(|k| -2.0 * k * (-k * k).exp()).collect();
        let hv = hilbert_transform(&v, dk);
        let hhv = hilbert_transform(&hv, dk);
        for (a, b) in hhv.iter().zip(&v) {
            assert!((a + b).abs() < 1e-12);
        }
        let norm = |x: &[f64]| x.iter().map(|y| y * y).sum::<f64>().sqrt();
        assert!((norm(&hv) - norm(&v)).abs() / norm(&v) < 1e-12);
    }

    #[test]
    fn lorentzian_pair_in_bulk() {
        let (ks, dk) = grid(8192, 400.0);
        let v: Vec<f64> = ks.iter().map(|k| 1.0 / (1.0 + k * k)).collect();
        let hv = hilbert_transform_padded(&v, dk);
        for (k, h) in ks.iter().zip(&hv) {
            if k.abs() <= 4.0 {
                assert!((h - k / (1.0 + k * k)).abs() < 5e-3, "k = {k}");
            }
        }
    }
}
