//! Marchenko kernels `F±(y) = (1/π) ∫ ρ±(k) e^{±2iky} dk`.

use rayon::prelude::*;

use crate::error::InverseError;
use crate::grid::SpatialGrid;
use crate::inverse::{HalfLine, InverseChain, InverseConfig};
use crate::scalar::{cis, Real};

/// Kernel samples on `s_j = -L + j·h`, `j = 0..=n`.
///
/// Minus-side samples are stored reflected, `g_j = F₋(-s_j)`: the minus
/// reconstruction of `q` is the plus reconstruction of `x ↦ q(-x)`, whose
/// plus kernel is exactly this `g`. One GLM solver then serves both halves.
/// Arguments `s >= L` are treated as lying beyond the support, where the
/// kernel vanishes.
#[derive(Debug, Clone)]
pub struct MarchenkoKernel<T> {
    pub side: HalfLine,
    pub grid: SpatialGrid<T>,
    pub values: Vec<T>,
    /// Largest imaginary part met while summing, relative to `max(1, sup|F|)`.
    pub imag_residual: T,
}

impl<T: Real> MarchenkoKernel<T> {
    /// Kernel at node offset `j`, zero from `s = L` on.
    #[inline]
    pub fn at(&self, j: usize) -> T {
        if j < self.grid.len() {
            self.values[j]
        } else {
            T::zero()
        }
    }

    /// `F±` at the original coordinate of sample `j`.
    pub fn physical_argument(&self, j: usize) -> T {
        let s = self.grid.node(0) + T::from_usize_lossy(j) * self.grid.step();
        match self.side {
            HalfLine::Plus => s,
            HalfLine::Minus => -s,
        }
    }
}

pub fn marchenko_kernel<T: Real>(
    chain: &InverseChain<T>,
    side: HalfLine,
    grid: &SpatialGrid<T>,
    config: &InverseConfig,
) -> Result<MarchenkoKernel<T>, InverseError> {
    let ks = chain.grid();
    let rho = match side {
        HalfLine::Plus => chain.rho_plus.values(),
        HalfLine::Minus => chain.rho_minus.values(),
    };
    let weighted: Vec<_> = rho.iter().enumerate().map(|(j, r)| *r * ks.weight(j)).collect();
    let nodes = ks.nodes();
    let two = T::lit(2.0);
    let (x0, h) = (grid.node(0), grid.step());
    let sums: Vec<(T, T)> = (0..=grid.len())
        .into_par_iter()
        .map(|j| {
            let s = x0 + T::from_usize_lossy(j) * h;
            let (mut re, mut im) = (T::zero(), T::zero());
            for (k, v) in nodes.iter().zip(&weighted) {
                let term = cis(two * *k * s) * v;
                re = re + term.re;
                im = im + term.im;
            }
            (re / T::PI(), im / T::PI())
        })
        .collect();
    let sup = sums.iter().fold(T::zero(), |m, (re, _)| m.max(re.abs()));
    let imag = sums.iter().fold(T::zero(), |m, (_, im)| m.max(im.abs()));
    let imag_residual = imag / sup.max(T::one());
    if imag_residual.as_f64() > config.reality_tolerance {
        return Err(InverseError::KernelNotReal {
            residual: imag_residual.as_f64(),
            tolerance: config.reality_tolerance,
        });
    }
    Ok(MarchenkoKernel {
        side,
        grid: *grid,
        values: sums.into_iter().map(|(re, _)| re).collect(),
        imag_residual,
    })
}
