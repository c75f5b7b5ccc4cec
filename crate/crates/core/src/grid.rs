//! Spatial and spectral grids, sampled potentials, the `𝓕₋` transform pair
//! and the weighted norms used to measure decay and regularity.
//!
//! Fourier convention: `𝓕₋(f)(k) = ∫ e^{2ikx} f(x) dx` with inverse
//! `𝓕₋⁻¹(g)(x) = (1/π) ∫ e^{-2ikx} g(k) dk`. With this choice the Jost
//! coefficient `S(q,k)` linearizes to `𝓕₋(q)(k)` and the free KdV
//! multiplier is `e^{-8ik³t}`.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Edge, GridError};
use crate::periodic;
use crate::scalar::{cis, Cplx, Real};

/// Default decay threshold at the window edges, relative to `max|f|`.
pub const DEFAULT_BOUNDARY_DECAY: f64 = 1e-10;

/// Uniform periodic grid `x_j = -L + j h`, `j = 0..n`, `h = 2L/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid<T> {
    half_width: T,
    n: usize,
}

impl<T: Real> SpatialGrid<T> {
    pub fn new(half_width: T, n: usize) -> Result<Self, GridError> {
        if !(half_width > T::zero() && half_width.is_finite()) {
            return Err(GridError::NonPositive {
                what: "half width L",
                value: half_width.as_f64(),
            });
        }
        if n < 4 || !n.is_power_of_two() {
            return Err(GridError::NotPowerOfTwo { n });
        }
        Ok(Self { half_width, n })
    }

    pub fn half_width(&self) -> T {
        self.half_width
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn step(&self) -> T {
        T::lit(2.0) * self.half_width / T::from_usize_lossy(self.n)
    }

    pub fn period(&self) -> T {
        T::lit(2.0) * self.half_width
    }

    pub fn node(&self, j: usize) -> T {
        -self.half_width + T::from_usize_lossy(j) * self.step()
    }

    pub fn nodes(&self) -> Vec<T> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    /// Index of the node `x = 0`.
    pub fn origin(&self) -> usize {
        self.n / 2
    }

    /// Index of the node nearest to `x`, clamped into the grid.
    pub fn nearest(&self, x: T) -> usize {
        let r = ((x + self.half_width) / self.step()).round();
        let j = r.to_f64().unwrap_or(0.0).max(0.0) as usize;
        j.min(self.n - 1)
    }
}

/// Symmetric spectral grid with `n_k` (even) intervals on `[-k_max, k_max]`,
/// i.e. `n_k + 1` nodes `k_j = -k_max + j Δk`. The node `k = 0` sits at
/// `j = n_k/2` and node `j` mirrors node `n_k - j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralGrid<T> {
    k_max: T,
    n_k: usize,
}

impl<T: Real> SpectralGrid<T> {
    pub fn new(k_max: T, n_k: usize) -> Result<Self, GridError> {
        if !(k_max > T::zero() && k_max.is_finite()) {
            return Err(GridError::NonPositive {
                what: "k_max",
                value: k_max.as_f64(),
            });
        }
        if n_k == 0 || !n_k.is_multiple_of(2) {
            return Err(GridError::OddSpectralCount { n_k });
        }
        Ok(Self { k_max, n_k })
    }

    pub fn k_max(&self) -> T {
        self.k_max
    }

    pub fn intervals(&self) -> usize {
        self.n_k
    }

    /// Number of nodes, `n_k + 1`.
    pub fn len(&self) -> usize {
        self.n_k + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> T {
        T::lit(2.0) * self.k_max / T::from_usize_lossy(self.n_k)
    }

    pub fn node(&self, j: usize) -> T {
        if j == self.zero_index() {
            return T::zero();
        }
        -self.k_max + T::from_usize_lossy(j) * self.step()
    }

    pub fn nodes(&self) -> Vec<T> {
        (0..self.len()).map(|j| self.node(j)).collect()
    }

    pub fn zero_index(&self) -> usize {
        self.n_k / 2
    }

    /// Index of the node `-k_j`.
    pub fn mirror(&self, j: usize) -> usize {
        self.n_k - j
    }

    /// Trapezoid weight of node `j`.
    pub fn weight(&self, j: usize) -> T {
        if j == 0 || j == self.n_k {
            self.step() * T::lit(0.5)
        } else {
            self.step()
        }
    }

    /// Nodes with `k >= 0`, as indices.
    pub fn nonnegative(&self) -> std::ops::RangeInclusive<usize> {
        self.zero_index()..=self.n_k
    }
}

/// How a sampled potential is continued between grid nodes.
///
/// The Jost integrators evaluate `q` between nodes and `fourier_minus`
/// transforms the continued function, so both stay consistent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interpolation {
    /// Trigonometric interpolant on the periodized window. Exact for
    /// band-limited data; the grid sum is then its exact transform.
    #[default]
    BandLimited,
    /// Piecewise-linear interpolant, suited to discontinuous profiles.
    PiecewiseLinear,
}

/// Real potential sampled on a [`SpatialGrid`] with its regularity (`N`)
/// and decay (`M`) orders carried as metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential<T> {
    grid: SpatialGrid<T>,
    values: Vec<T>,
    sobolev_order: u32,
    weight_order: u32,
    interpolation: Interpolation,
}

/// Default metadata `(N, M)` for constructed potentials.
pub const DEFAULT_ORDERS: (u32, u32) = (2, 4);

impl<T: Real> Potential<T> {
    pub fn new(
        grid: SpatialGrid<T>,
        values: Vec<T>,
        sobolev_order: u32,
        weight_order: u32,
    ) -> Result<Self, GridError> {
        if values.len() != grid.len() {
            return Err(GridError::LengthMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(GridError::NonFinite { index });
        }
        if weight_order < 4 {
            return Err(GridError::WeightOrder { m: weight_order });
        }
        Ok(Self {
            grid,
            values,
            sobolev_order,
            weight_order,
            interpolation: Interpolation::default(),
        })
    }

    /// Samples `f` at the grid nodes with the default orders.
    pub fn from_fn(grid: SpatialGrid<T>, f: impl Fn(T) -> T) -> Result<Self, GridError> {
        let values = grid.nodes().into_iter().map(f).collect();
        Self::new(grid, values, DEFAULT_ORDERS.0, DEFAULT_ORDERS.1)
    }

    pub fn zero(grid: SpatialGrid<T>) -> Self {
        Self::new(grid, vec![T::zero(); grid.len()], DEFAULT_ORDERS.0, DEFAULT_ORDERS.1)
            .expect("zero samples are admissible")
    }

    pub fn with_interpolation(mut self, interpolation: Interpolation) -> Self {
        self.interpolation = interpolation;
        self
    }

    pub fn grid(&self) -> &SpatialGrid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn sobolev_order(&self) -> u32 {
        self.sobolev_order
    }

    pub fn weight_order(&self) -> u32 {
        self.weight_order
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    /// Same metadata, new samples.
    pub fn with_values(&self, values: Vec<T>) -> Result<Self, GridError> {
        let mut out = Self::new(self.grid, values, self.sobolev_order, self.weight_order)?;
        out.interpolation = self.interpolation;
        Ok(out)
    }

    pub fn scaled(&self, factor: T) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v = *v * factor);
        out
    }

    pub fn l1_norm(&self) -> T {
        self.values.iter().map(|v| v.abs()).sum::<T>() * self.grid.step()
    }

    pub fn l2_norm(&self) -> T {
        weighted_l2_norm(&self.grid, &self.values, T::zero())
    }

    pub fn sup_norm(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// `L²` distance to another potential on the same grid.
    pub fn l2_distance(&self, other: &Self) -> Result<T, GridError> {
        if self.grid != other.grid {
            return Err(GridError::GridMismatch);
        }
        let diff: Vec<T> = self.values.iter().zip(&other.values).map(|(a, b)| *a - *b).collect();
        Ok(weighted_l2_norm(&self.grid, &diff, T::zero()))
    }

    /// Embeds the samples in a window `factor` times wider (same step),
    /// extended by zero. `factor` must be a power of two.
    pub fn padded(&self, factor: usize) -> Result<Self, GridError> {
        let n = self.grid.len();
        let wide = SpatialGrid::new(self.grid.half_width() * T::from_usize_lossy(factor), n * factor)?;
        let offset = (factor - 1) * n / 2;
        let mut values = vec![T::zero(); n * factor];
        values[offset..offset + n].copy_from_slice(&self.values);
        Ok(Self { grid: wide, values, ..self.clone() })
    }

    /// The central part of `self` on `inner`, a grid with the same step
    /// whose node count divides ours: the inverse of [`Potential::padded`].
    pub fn restricted(&self, inner: &SpatialGrid<T>) -> Result<Self, GridError> {
        let (n, wide) = (inner.len(), self.grid.len());
        let same_step = (inner.step() - self.grid.step()).abs() <= T::epsilon() * T::lit(16.0) * self.grid.step();
        if n > wide || wide % n != 0 || !same_step {
            return Err(GridError::GridMismatch);
        }
        let offset = (wide - n) / 2;
        Ok(Self {
            grid: *inner,
            values: self.values[offset..offset + n].to_vec(),
            ..self.clone()
        })
    }

    /// Fails when `|q|` at either edge exceeds `threshold · max|q|`.
    pub fn check_decay(&self, threshold: f64) -> Result<(), GridError> {
        check_edge_decay(&self.values, threshold)
    }

    /// Value of the continued potential at a node shifted by `offset`
    /// (in units of `h`, `0 <= offset <= 1`), for every node at once.
    pub(crate) fn shifted_samples(&self, offset: T) -> Vec<T> {
        if offset == T::zero() {
            return self.values.clone();
        }
        match self.interpolation {
            Interpolation::BandLimited => {
                periodic::shift_real(&self.values, self.grid.period(), offset * self.grid.step())
            }
            Interpolation::PiecewiseLinear => {
                let n = self.values.len();
                (0..n)
                    .map(|j| {
                        let next = if j + 1 < n { self.values[j + 1] } else { T::zero() };
                        self.values[j] * (T::one() - offset) + next * offset
                    })
                    .collect()
            }
        }
    }
}

pub(crate) fn check_edge_decay<T: Real>(values: &[T], threshold: f64) -> Result<(), GridError> {
    let peak = values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if peak == T::zero() {
        return Ok(());
    }
    let limit = T::lit(threshold) * peak;
    let edges = [(Edge::Left, values[0]), (Edge::Right, values[values.len() - 1])];
    for (edge, v) in edges {
        if v.abs() > limit {
            return Err(GridError::BoundaryDecay {
                edge,
                value: v.abs().as_f64(),
                threshold: limit.as_f64(),
            });
        }
    }
    Ok(())
}

/// Complex samples on either kind of grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField<T, G> {
    grid: G,
    values: Vec<Cplx<T>>,
}

/// Complex samples over a [`SpectralGrid`]: `S`, `W`, `A`, `σ`, `ρ±`, ...
pub type SpectralField<T> = ComplexField<T, SpectralGrid<T>>;

impl<T: Real, G> ComplexField<T, G> {
    pub fn grid(&self) -> &G {
        &self.grid
    }

    pub fn values(&self) -> &[Cplx<T>] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Cplx<T>> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Pointwise map that keeps the grid.
    pub fn map(&self, f: impl Fn(usize, Cplx<T>) -> Cplx<T>) -> Self
    where
        G: Clone,
    {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().enumerate().map(|(j, &v)| f(j, v)).collect(),
        }
    }
}

impl<T: Real> SpectralField<T> {
    pub fn new(grid: SpectralGrid<T>, values: Vec<Cplx<T>>) -> Result<Self, GridError> {
        if values.len() != grid.len() {
            return Err(GridError::LengthMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(GridError::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: SpectralGrid<T>) -> Self {
        Self {
            grid,
            values: vec![Complex::new(T::zero(), T::zero()); grid.len()],
        }
    }

    pub fn from_fn(grid: SpectralGrid<T>, f: impl Fn(T) -> Cplx<T>) -> Result<Self, GridError> {
        Self::new(grid, grid.nodes().into_iter().map(f).collect())
    }

    /// Value at the mirrored node `-k_j`.
    pub fn mirrored(&self, j: usize) -> Cplx<T> {
        self.values[self.grid.mirror(j)]
    }

    /// `max_j |f(-k_j) - conj f(k_j)|`.
    pub fn symmetry_residual(&self) -> T {
        (0..self.values.len())
            .map(|j| (self.mirrored(j) - self.values[j].conj()).norm())
            .fold(T::zero(), T::max)
    }

    pub fn sup_norm(&self) -> T {
        self.values.iter().map(|v| v.norm()).fold(T::zero(), T::max)
    }

    /// Trapezoid `L²` norm over the nodes with `lo <= |k| <= hi`.
    pub fn l2_norm_on(&self, lo: T, hi: T) -> T {
        (0..self.values.len())
            .filter(|&j| {
                let k = self.grid.node(j).abs();
                k >= lo && k <= hi
            })
            .map(|j| self.grid.weight(j) * self.values[j].norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    pub fn l2_norm(&self) -> T {
        self.l2_norm_on(T::zero(), T::infinity())
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GridError> {
        if self.grid != other.grid {
            return Err(GridError::GridMismatch);
        }
        Ok(Self {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        })
    }
}

/// `𝓕₋(q)(k_j) = ∫ e^{2ik_j x} q(x) dx` of the continued potential.
///
/// For band-limited continuation this is the grid sum `h Σ e^{2ik x_j} q_j`;
/// for piecewise-linear continuation the sum is multiplied by the hat-function
/// factor `sinc²(kh)`. Only `k >= 0` is summed; negative nodes are filled by
/// conjugation, so the symmetry of the result is exact.
pub fn fourier_minus<T: Real>(
    q: &Potential<T>,
    ks: &SpectralGrid<T>,
) -> Result<SpectralField<T>, GridError> {
    q.check_decay(DEFAULT_BOUNDARY_DECAY)?;
    Ok(fourier_minus_unchecked(q.grid(), q.values(), q.interpolation(), ks))
}

pub(crate) fn fourier_minus_unchecked<T: Real>(
    grid: &SpatialGrid<T>,
    values: &[T],
    interpolation: Interpolation,
    ks: &SpectralGrid<T>,
) -> SpectralField<T> {
    let h = grid.step();
    let xs = grid.nodes();
    let two = T::lit(2.0);
    let half: Vec<Cplx<T>> = ks
        .nonnegative()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|j| {
            let k = ks.node(j);
            let mut acc = Complex::new(T::zero(), T::zero());
            for (x, &v) in xs.iter().zip(values) {
                if v != T::zero() {
                    acc = acc + cis(two * k * *x) * v;
                }
            }
            acc * (h * hat_factor(interpolation, k * h))
        })
        .collect();
    let mut out = vec![Complex::new(T::zero(), T::zero()); ks.len()];
    let z = ks.zero_index();
    for (offset, v) in half.into_iter().enumerate() {
        out[z + offset] = v;
        out[z - offset] = v.conj();
    }
    // The k = 0 value of a real integrand is real.
    out[z].im = T::zero();
    ComplexField { grid: *ks, values: out }
}

fn hat_factor<T: Real>(interpolation: Interpolation, u: T) -> T {
    match interpolation {
        Interpolation::BandLimited => T::one(),
        Interpolation::PiecewiseLinear => {
            if u.abs() < T::lit(1e-4) {
                T::one() - u * u / T::lit(3.0)
            } else {
                let s = u.sin() / u;
                s * s
            }
        }
    }
}

/// `(1/π) ∫ e^{-2ikx} F(k) dk` on the x-grid by trapezoid quadrature in `k`.
/// Requires `F(-k) = conj F(k)` so that the result is real.
pub fn inverse_fourier_minus<T: Real>(
    f: &SpectralField<T>,
    xs: &SpatialGrid<T>,
) -> Result<Potential<T>, GridError> {
    let tolerance = 1e-9 * f.sup_norm().as_f64().max(1.0);
    let residual = f.symmetry_residual().as_f64();
    if residual > tolerance {
        return Err(GridError::SymmetryViolation { residual, tolerance });
    }
    let values = inverse_fourier_minus_real(f, xs);
    Potential::new(*xs, values, DEFAULT_ORDERS.0, DEFAULT_ORDERS.1)
}

pub(crate) fn inverse_fourier_minus_real<T: Real>(f: &SpectralField<T>, xs: &SpatialGrid<T>) -> Vec<T> {
    let ks = f.grid();
    let nodes = ks.nodes();
    let weights: Vec<T> = (0..ks.len()).map(|j| ks.weight(j)).collect();
    let two = T::lit(2.0);
    xs.nodes()
        .into_par_iter()
        .map(|x| {
            let mut acc = T::zero();
            for ((k, w), v) in nodes.iter().zip(&weights).zip(f.values()) {
                acc = acc + *w * (cis(-two * *k * x) * v).re;
            }
            acc / T::PI()
        })
        .collect()
}

/// Squared modulus of a real or complex sample.
pub trait Modulus<T> {
    fn modulus_sqr(&self) -> T;
}

macro_rules! modulus_impl {
    ($t:ty) => {
        impl Modulus<$t> for $t {
            fn modulus_sqr(&self) -> $t {
                self * self
            }
        }
        impl Modulus<$t> for Complex<$t> {
            fn modulus_sqr(&self) -> $t {
                self.norm_sqr()
            }
        }
    };
}
modulus_impl!(f32);
modulus_impl!(f64);

/// `(∫ (1+x²)^M |f|² dx)^{1/2}` by grid quadrature.
pub fn weighted_l2_norm<T: Real, V: Modulus<T>>(grid: &SpatialGrid<T>, f: &[V], m: T) -> T {
    let h = grid.step();
    (f.iter()
        .enumerate()
        .map(|(j, v)| {
            let x = grid.node(j);
            let w = if m == T::zero() { T::one() } else { (T::one() + x * x).powf(m) };
            w * v.modulus_sqr()
        })
        .sum::<T>()
        * h)
        .sqrt()
}

/// `(Σ_{j<=N} ‖∂ₓʲ f‖²)^{1/2}` with spectral derivatives on the periodized grid.
pub fn sobolev_norm<T: Real>(grid: &SpatialGrid<T>, f: &[T], order: u32) -> T {
    let mut spectrum = periodic::to_complex(f);
    periodic::forward(&mut spectrum);
    let xi = periodic::wavenumbers(f.len(), grid.period());
    (0..=order)
        .map(|j| periodic::derivative_energy(&spectrum, &xi, grid.step(), j))
        .sum::<T>()
        .sqrt()
}

/// Odd cutoff weight: `ζ(k) = k` for `|k| <= 1/2`, `ζ(k) = sign(k)` for
/// `|k| >= 1`, joined by the quintic matching value, slope and curvature.
pub fn zeta_weight<T: Real>(k: T) -> T {
    let a = k.abs();
    let half = T::lit(0.5);
    let v = if a <= half {
        a
    } else if a >= T::one() {
        T::one()
    } else {
        let s = T::lit(2.0) * a - T::one();
        // p(s) = 1/2 + s/2 + 2s³ - 7/2 s⁴ + 3/2 s⁵, with p'(s) = (1-s)²(1/2 + s + 15/2 s²).
        let poly = T::lit(2.0) + s * (T::lit(-3.5) + s * T::lit(1.5));
        half + half * s + s * s * s * poly
    };
    if k < T::zero() {
        -v
    } else {
        v
    }
}

/// `‖f‖²_{H^M_ζ} = ‖f‖²_{H^{M-1}} + ‖ζ ∂_k^M f‖²`, returned as its square
/// root, with spectral derivatives on the periodized k-grid.
pub fn h_zeta_norm<T: Real>(f: &SpectralField<T>, m: u32) -> T {
    let ks = f.grid();
    let dk = ks.step();
    // Drop the last node: it is the periodic image of the first.
    let samples: Vec<Cplx<T>> = f.values()[..ks.intervals()].to_vec();
    let period = T::lit(2.0) * ks.k_max();
    let energy = |v: &[Cplx<T>], weight: &dyn Fn(usize) -> T| -> T {
        v.iter().enumerate().map(|(j, c)| weight(j) * c.norm_sqr()).sum::<T>() * dk
    };
    let lower: T = (0..m)
        .map(|j| energy(&periodic::derivative(&samples, period, j), &|_| T::one()))
        .sum();
    let top = periodic::derivative(&samples, period, m);
    let weighted = energy(&top, &|j| {
        let z = zeta_weight(ks.node(j));
        z * z
    });
    (lower + weighted).sqrt()
}
