//! Log–log decay rates of spectral tails.

use crate::scalar::Real;

/// Default number of geometric bins in [`tail_slope`].
pub const TAIL_BINS: usize = 12;

/// Least-squares slope of `log rms|v|` against `log k`, where the samples
/// with `k ∈ [lo, hi]` are grouped into `bins` geometric bins and each bin
/// contributes the RMS of its magnitudes at its geometric center. Binning
/// averages out the oscillation of transforms of compactly supported data.
///
/// Returns `None` when fewer than two bins are populated or a bin is zero.
pub fn tail_slope<T: Real>(ks: &[T], magnitudes: &[T], lo: T, hi: T, bins: usize) -> Option<T> {
    let ratio = (hi / lo).ln() / T::from_usize_lossy(bins);
    let mut points = Vec::with_capacity(bins);
    for b in 0..bins {
        let left = lo * (ratio * T::from_usize_lossy(b)).exp();
        let right = lo * (ratio * T::from_usize_lossy(b + 1)).exp();
        let (mut sum, mut count) = (T::zero(), 0usize);
        for (k, m) in ks.iter().zip(magnitudes) {
            let a = k.abs();
            if a >= left && (a < right || (b + 1 == bins && a <= right)) {
                sum = sum + *m * *m;
                count += 1;
            }
        }
        if count > 0 {
            let rms = (sum / T::from_usize_lossy(count)).sqrt();
            if rms <= T::zero() {
                return None;
            }
            points.push(((left * right).sqrt().ln(), rms.ln()));
        }
    }
    if points.len() < 2 {
        return None;
    }
    let n = T::from_usize_lossy(points.len());
    let mx = points.iter().map(|p| p.0).sum::<T>() / n;
    let my = points.iter().map(|p| p.1).sum::<T>() / n;
    let sxy = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<T>();
    let sxx = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum::<T>();
    Some(sxy / sxx)
}
