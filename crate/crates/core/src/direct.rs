//! Direct scattering: `S`, `W`, reflection and transmission, the smoothing
//! remainder `A = S - 𝓕₋(q)`, Born terms, action densities and the
//! genericity certificate.
//!
//! At `x = 0`,
//! `S(k) = m₁(k) ∂ₓm₂(-k) - ∂ₓm₁(k) m₂(-k)` and
//! `W(k) = 2ik m₂(k) m₁(k) + m₂(k) ∂ₓm₁(k) - ∂ₓm₂(k) m₁(k)`.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{GridError, ScatteringError};
use crate::grid::{
    fourier_minus, fourier_minus_unchecked, Interpolation, Potential, SpatialGrid, SpectralField, SpectralGrid,
    DEFAULT_BOUNDARY_DECAY,
};
use crate::jost::{at_origin, w_imag_axis_with, Continuation, JostConfig, Side};
use crate::periodic;
use crate::scalar::{cis, Cplx, Real};

/// Tunables of the direct map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringConfig {
    pub jost: JostConfig,
    /// Edge-decay threshold relative to `max|q|`.
    pub boundary_decay: f64,
    /// `|W(k)|` below this is treated as a zero of `W` on the real line.
    pub w_floor: f64,
}

impl Default for ScatteringConfig {
    fn default() -> Self {
        Self {
            jost: JostConfig::default(),
            boundary_decay: DEFAULT_BOUNDARY_DECAY,
            w_floor: 1e-12,
        }
    }
}

/// `S(q,·)` and `W(q,·)` on a symmetric spectral grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringData<T> {
    pub s: SpectralField<T>,
    pub w: SpectralField<T>,
}

impl<T: Real> ScatteringData<T> {
    pub fn grid(&self) -> &SpectralGrid<T> {
        self.s.grid()
    }

    /// `max_k |W(k)W(-k) - 4k² - S(k)S(-k)| / (1 + 4k²)`.
    pub fn identity_residual(&self) -> T {
        let ks = self.grid();
        (0..ks.len())
            .map(|j| {
                let k = ks.node(j);
                let four_k2 = T::lit(4.0) * k * k;
                let lhs = self.w.values()[j] * self.w.mirrored(j);
                let rhs = self.s.values()[j] * self.s.mirrored(j) + four_k2;
                (lhs - rhs).norm() / (T::one() + four_k2)
            })
            .fold(T::zero(), T::max)
    }

    /// Largest conjugate-symmetry defect of `S` and `W`.
    pub fn symmetry_residual(&self) -> T {
        self.s.symmetry_residual().max(self.w.symmetry_residual())
    }
}

/// `S` and `W` with the default configuration.
pub fn scattering_data<T: Real>(q: &Potential<T>, ks: &SpectralGrid<T>) -> Result<ScatteringData<T>, ScatteringError> {
    scattering_data_with(q, ks, &ScatteringConfig::default())
}

pub fn scattering_data_with<T: Real>(
    q: &Potential<T>,
    ks: &SpectralGrid<T>,
    config: &ScatteringConfig,
) -> Result<ScatteringData<T>, ScatteringError> {
    q.check_decay(config.boundary_decay)?;
    let cont = Continuation::new(q, config.jost.substeps_for(ks.k_max(), q.grid().step()));
    let nodes = ks.nodes();
    type Pair<T> = (Cplx<T>, Cplx<T>);
    let solved: Vec<(Pair<T>, Pair<T>)> = nodes
        .par_iter()
        .map(|&k| {
            let kc = Complex::new(k, T::zero());
            Ok((at_origin(&cont, Side::Right, kc)?, at_origin(&cont, Side::Left, kc)?))
        })
        .collect::<Result<_, ScatteringError>>()?;
    let two_i = Complex::new(T::zero(), T::lit(2.0));
    let mut s = Vec::with_capacity(ks.len());
    let mut w = Vec::with_capacity(ks.len());
    for (j, &k) in nodes.iter().enumerate() {
        let ((m1, dm1), (m2, dm2)) = solved[j];
        let (m2r, dm2r) = solved[ks.mirror(j)].1;
        s.push(m1 * dm2r - dm1 * m2r);
        w.push(two_i * k * m2 * m1 + m2 * dm1 - dm2 * m1);
    }
    Ok(ScatteringData {
        s: SpectralField::new(*ks, s)?,
        w: SpectralField::new(*ks, w)?,
    })
}

/// `r₊`, `r₋` and `t` on the spectral grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionTransmission<T> {
    pub r_plus: SpectralField<T>,
    pub r_minus: SpectralField<T>,
    pub t: SpectralField<T>,
}

impl<T: Real> ReflectionTransmission<T> {
    /// `max_{k≠0} max(| |t|²+|r₊|² - 1 |, | |t|²+|r₋|² - 1 |)`.
    pub fn unitarity_residual(&self) -> T {
        let ks = self.t.grid();
        (0..ks.len())
            .filter(|&j| j != ks.zero_index())
            .map(|j| {
                let t2 = self.t.values()[j].norm_sqr();
                let a = (t2 + self.r_plus.values()[j].norm_sqr() - T::one()).abs();
                let b = (t2 + self.r_minus.values()[j].norm_sqr() - T::one()).abs();
                a.max(b)
            })
            .fold(T::zero(), T::max)
    }
}

/// `r±(k) = S(∓k)/W(k)`, `t(k) = 2ik/W(k)`; at `k = 0` the limits
/// `r±(0) = -1`, `t(0) = 0` are stored. If `W(0)` itself vanishes those
/// limits do not apply and the `k = 0` entries are estimated from `k = ±dk`.
pub fn reflection_transmission<T: Real>(sd: &ScatteringData<T>) -> Result<ReflectionTransmission<T>, ScatteringError> {
    reflection_transmission_with(sd, ScatteringConfig::default().w_floor)
}

pub fn reflection_transmission_with<T: Real>(
    sd: &ScatteringData<T>,
    w_floor: f64,
) -> Result<ReflectionTransmission<T>, ScatteringError> {
    let ks = *sd.grid();
    let z = ks.zero_index();
    let mut r_plus = Vec::with_capacity(ks.len());
    let mut r_minus = Vec::with_capacity(ks.len());
    let mut t = Vec::with_capacity(ks.len());
    for j in 0..ks.len() {
        let w = sd.w.values()[j];
        if j == z && w.norm() < T::lit(w_floor) && ks.len() > 1 {
            // Exceptional case W(0) = S(0) = 0, e.g. q ≡ 0: the limits are
            // no longer forced, so they are filled in below from the
            // neighbouring nodes.
            r_plus.push(Complex::new(T::zero(), T::zero()));
            r_minus.push(Complex::new(T::zero(), T::zero()));
            t.push(Complex::new(T::zero(), T::zero()));
            continue;
        }
        if w.norm() < T::lit(w_floor) {
            return Err(ScatteringError::VanishingWronskian {
                k: ks.node(j).as_f64(),
                modulus: w.norm().as_f64(),
                tolerance: w_floor,
            });
        }
        if j == z {
            r_plus.push(Complex::new(-T::one(), T::zero()));
            r_minus.push(Complex::new(-T::one(), T::zero()));
            t.push(Complex::new(T::zero(), T::zero()));
        } else {
            r_plus.push(sd.s.mirrored(j) / w);
            r_minus.push(sd.s.values()[j] / w);
            t.push(Complex::new(T::zero(), T::lit(2.0) * ks.node(j)) / w);
        }
    }
    if sd.w.values()[z].norm() < T::lit(w_floor) && ks.len() > 1 {
        // The real part of the value at ±dk: the odd part cancels, leaving
        // an O(dk²) estimate of the limit (exact when q ≡ 0).
        for v in [&mut r_plus, &mut r_minus, &mut t] {
            v[z] = Complex::new(v[z + 1].re, T::zero());
        }
    }
    Ok(ReflectionTransmission {
        r_plus: SpectralField::new(ks, r_plus)?,
        r_minus: SpectralField::new(ks, r_minus)?,
        t: SpectralField::new(ks, t)?,
    })
}

/// `A(q,k) = S(q,k) - 𝓕₋(q)(k)`.
pub fn smoothing_part<T: Real>(q: &Potential<T>, sd: &ScatteringData<T>) -> Result<SpectralField<T>, ScatteringError> {
    let f = fourier_minus(q, sd.grid())?;
    Ok(sd.s.sub(&f)?)
}

/// Cumulative integral `∫_{-L}^{x_j} f` of samples on the periodized grid.
///
/// For band-limited continuation this integrates the trigonometric
/// interpolant exactly (mean part as a ramp, oscillating part spectrally);
/// for piecewise-linear continuation it is the cumulative trapezoid rule.
pub(crate) fn integral_from_left<T: Real>(
    grid: &SpatialGrid<T>,
    f: &[Cplx<T>],
    interpolation: Interpolation,
) -> Vec<Cplx<T>> {
    let n = f.len();
    let h = grid.step();
    match interpolation {
        Interpolation::PiecewiseLinear => {
            let mut out = Vec::with_capacity(n);
            let mut acc = Complex::new(T::zero(), T::zero());
            out.push(acc);
            for j in 1..n {
                acc = acc + (f[j - 1] + f[j]) * (h * T::lit(0.5));
                out.push(acc);
            }
            out
        }
        Interpolation::BandLimited => {
            let period = grid.period();
            let mut spectrum = f.to_vec();
            periodic::forward(&mut spectrum);
            let mean = spectrum[0] / T::from_usize_lossy(n);
            let xi = periodic::wavenumbers(n, period);
            for (m, c) in spectrum.iter_mut().enumerate() {
                if m == 0 || (n.is_multiple_of(2) && m == n / 2) {
                    *c = Complex::new(T::zero(), T::zero());
                } else {
                    *c = *c / Complex::new(T::zero(), xi[m]);
                }
            }
            periodic::inverse(&mut spectrum);
            let base = spectrum[0];
            (0..n)
                .map(|j| spectrum[j] - base + mean * (T::from_usize_lossy(j) * h))
                .collect()
        }
    }
}

fn total_integral<T: Real>(grid: &SpatialGrid<T>, f: &[Cplx<T>]) -> Cplx<T> {
    f.iter().fold(Complex::new(T::zero(), T::zero()), |a, b| a + b) * grid.step()
}

/// First Born coefficient `s₁(q,k)` by the closed form
/// `s₁ = (1/2i)[𝓕₋(q·I₂q) - 𝓕₋(q·I₁q)]`, `I₁f(t) = ∫_t^∞ f`,
/// `I₂f(t) = ∫_{-∞}^t f`.
///
/// The sign follows from expanding `sin k(t₁-t₀)` inside the simplex
/// integral: the `e^{2ikt₁}` branch collects `I₂` and enters with `+`.
pub fn born_s1<T: Real>(q: &Potential<T>, ks: &SpectralGrid<T>) -> Result<SpectralField<T>, ScatteringError> {
    q.check_decay(DEFAULT_BOUNDARY_DECAY)?;
    let grid = q.grid();
    let qc = periodic::to_complex(q.values());
    let i2 = integral_from_left(grid, &qc, q.interpolation());
    let total = total_integral(grid, &qc);
    let diff: Vec<T> = q
        .values()
        .iter()
        .zip(&i2)
        .map(|(&v, &a)| {
            // q·I₂ - q·I₁ = q·(2 I₂ - total)
            v * (a.re * T::lit(2.0) - total.re)
        })
        .collect();
    let f = fourier_minus_unchecked(grid, &diff, q.interpolation(), ks);
    let inv_two_i = Complex::new(T::zero(), -T::lit(0.5));
    Ok(f.map(|_, v| v * inv_two_i))
}

/// `sₙ(q,k)` for `n ∈ {1, 2}` by iterated quadrature over the ordered
/// simplex `t₀ <= … <= tₙ`, integrating from the innermost variable outwards.
///
/// Each level splits `sin k(t_j - t_{j-1})` into exponentials and uses the
/// exact cumulative integral of the continued integrand.
pub fn born_sn<T: Real>(q: &Potential<T>, k: T, n: usize) -> Result<Cplx<T>, ScatteringError> {
    if !(1..=2).contains(&n) {
        return Err(ScatteringError::UnsupportedBornOrder { n });
    }
    q.check_decay(DEFAULT_BOUNDARY_DECAY)?;
    let grid = q.grid();
    let xs = grid.nodes();
    let interp = q.interpolation();
    let values = q.values();
    let half_over_i = Complex::new(T::zero(), -T::lit(0.5));
    // g(t) is the integrand tail attached to the current outer variable.
    let mut g: Vec<Cplx<T>> = xs.iter().map(|&x| cis(k * x)).collect();
    for _ in 0..n {
        let plus: Vec<Cplx<T>> = (0..xs.len()).map(|j| cis(k * xs[j]) * g[j] * values[j]).collect();
        let minus: Vec<Cplx<T>> = (0..xs.len()).map(|j| cis(-k * xs[j]) * g[j] * values[j]).collect();
        let tail_plus = tail_integral(grid, &plus, interp);
        let tail_minus = tail_integral(grid, &minus, interp);
        g = (0..xs.len())
            .map(|j| (cis(-k * xs[j]) * tail_plus[j] - cis(k * xs[j]) * tail_minus[j]) * half_over_i)
            .collect();
    }
    let outer: Vec<Cplx<T>> = (0..xs.len()).map(|j| cis(k * xs[j]) * g[j] * values[j]).collect();
    Ok(total_integral(grid, &outer))
}

/// `∫_{x_j}^{L} f`.
fn tail_integral<T: Real>(grid: &SpatialGrid<T>, f: &[Cplx<T>], interpolation: Interpolation) -> Vec<Cplx<T>> {
    let total = match interpolation {
        Interpolation::BandLimited => total_integral(grid, f),
        Interpolation::PiecewiseLinear => {
            let inner = total_integral(grid, f);
            inner - (f[0] + f[f.len() - 1]) * (grid.step() * T::lit(0.5))
        }
    };
    integral_from_left(grid, f, interpolation)
        .into_iter()
        .map(|c| total - c)
        .collect()
}

/// `I(q,k) = (k/π) log(1 + |S|²/4k²)`, with `I(q,0) = 0`.
pub fn action_density_at<T: Real>(s: Cplx<T>, k: T) -> T {
    if k == T::zero() {
        return T::zero();
    }
    let ratio = s.norm_sqr() / (T::lit(4.0) * k * k);
    k / T::PI() * ratio.ln_1p()
}

/// Action density at every node of the grid of `sd`.
pub fn action_density<T: Real>(sd: &ScatteringData<T>) -> Vec<T> {
    let ks = sd.grid();
    (0..ks.len())
        .map(|j| action_density_at(sd.s.values()[j], ks.node(j)))
        .collect()
}

/// `4∫ k I(q,k) dk`, which equals `∫ q²` when there are no bound states.
///
/// When `S(q,0) ≠ 0` the integrand behaves like `-(8/π) k² log|k|` near
/// `k = 0`, so the trapezoid sum is short by `4ζ(3)dk³/π³`; that term is
/// added back.
pub fn quadratic_trace<T: Real>(sd: &ScatteringData<T>) -> T {
    let ks = sd.grid();
    let density = action_density(sd);
    let sum = (0..ks.len()).fold(T::zero(), |acc, j| acc + ks.node(j) * density[j] * ks.weight(j));
    let dk = ks.node(1) - ks.node(0);
    const ZETA_3: f64 = 1.202_056_903_159_594_3;
    let endpoint = if sd.s.values()[ks.zero_index()].norm() > T::zero() {
        T::lit(4.0 * ZETA_3) * dk * dk * dk / (T::PI() * T::PI() * T::PI())
    } else {
        T::zero()
    };
    T::lit(4.0) * sum + endpoint
}

/// Outcome of the imaginary-axis scan of `W(q, iκ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GenericityCertificate<T> {
    pub w_at_zero: T,
    pub min_w_on_axis: T,
    /// Largest sampled value; positive values signal a bound state.
    pub max_w_on_axis: T,
    pub kappa_max: T,
    /// Located zero of `W(q, iκ)`, when the scan finds a sign change.
    pub sign_change_at: Option<T>,
    pub passed: bool,
}

/// Number of uniform κ-samples in [`check_generic`].
pub const GENERICITY_SAMPLES: usize = 200;
/// `W(q,0)` must be below `-GENERICITY_TOLERANCE`.
pub const GENERICITY_TOLERANCE: f64 = 1e-8;

/// Samples `W(q, iκ)` on `[0, κ_max]` and refines the first sign change by
/// bisection. Passes iff `W(q,0) < -tol` and `W < 0` at every sample.
pub fn check_generic<T: Real>(q: &Potential<T>, kappa_max: T) -> Result<GenericityCertificate<T>, ScatteringError> {
    check_generic_with(q, kappa_max, DEFAULT_BOUNDARY_DECAY)
}

/// [`check_generic`] with an explicit edge-decay threshold, for
/// reconstructed potentials that carry band-truncation ripple.
pub fn check_generic_with<T: Real>(
    q: &Potential<T>,
    kappa_max: T,
    boundary_decay: f64,
) -> Result<GenericityCertificate<T>, ScatteringError> {
    q.check_decay(boundary_decay)?;
    if !(kappa_max > T::zero()) {
        return Err(GridError::NonPositive {
            what: "kappa_max",
            value: kappa_max.as_f64(),
        }
        .into());
    }
    let cont = Continuation::new(q, JostConfig::default().substeps_for(kappa_max, q.grid().step()));
    let kappas: Vec<T> = (0..GENERICITY_SAMPLES)
        .map(|i| kappa_max * T::from_usize_lossy(i) / T::from_usize_lossy(GENERICITY_SAMPLES - 1))
        .collect();
    let ws: Vec<T> = kappas
        .par_iter()
        .map(|&kappa| w_imag_axis_with(&cont, kappa))
        .collect::<Result<_, _>>()?;
    let w_at_zero = ws[0];
    let min_w = ws.iter().copied().fold(T::infinity(), T::min);
    let max_w = ws.iter().copied().fold(T::neg_infinity(), T::max);
    let mut sign_change_at = None;
    for i in 1..ws.len() {
        if (ws[i - 1] < T::zero()) != (ws[i] < T::zero()) {
            let (mut a, mut b) = (kappas[i - 1], kappas[i]);
            let negative_at_a = ws[i - 1] < T::zero();
            for _ in 0..40 {
                let mid = (a + b) * T::lit(0.5);
                if (w_imag_axis_with(&cont, mid)? < T::zero()) == negative_at_a {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            sign_change_at = Some((a + b) * T::lit(0.5));
            break;
        }
    }
    let passed = w_at_zero < -T::lit(GENERICITY_TOLERANCE) && max_w < T::zero();
    Ok(GenericityCertificate {
        w_at_zero,
        min_w_on_axis: min_w,
        max_w_on_axis: max_w,
        kappa_max,
        sign_change_at,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SpatialGrid;

    fn gaussian(amp: f64) -> Potential<f64> {
        let g = SpatialGrid::new(20.0, 2048).unwrap();
        Potential::from_fn(g, |x: f64| amp * (-x * x).exp()).unwrap()
    }

    #[test]
    fn free_case_exact() {
        let q = Potential::zero(SpatialGrid::new(20.0, 2048).unwrap());
        let ks = SpectralGrid::new(16.0, 64).unwrap();
        let sd = scattering_data(&q, &ks).unwrap();
        for j in 0..ks.len() {
            assert_eq!(sd.s.values()[j], Complex::new(0.0, 0.0));
            assert_eq!(sd.w.values()[j], Complex::new(0.0, 2.0 * ks.node(j)));
        }
        assert!(check_generic(&q, 10.0).map(|c| !c.passed).unwrap());
    }

    #[test]
    fn wronskian_at_zero_is_minus_s() {
        let q = gaussian(0.3);
        let ks = SpectralGrid::new(4.0, 32).unwrap();
        let sd = scattering_data(&q, &ks).unwrap();
        let z = ks.zero_index();
        assert!((sd.w.values()[z] + sd.s.values()[z]).norm() < 1e-12);
        assert!(sd.s.values()[z].re > 0.0);
        assert!(sd.identity_residual() < 1e-9);
    }

    #[test]
    fn born_forms_agree() {
        let q = gaussian(1.0);
        let ks = SpectralGrid::new(4.0, 16).unwrap();
        let s1 = born_s1(&q, &ks).unwrap();
        for j in [9, 12, 16] {
            let direct = born_sn(&q, ks.node(j), 1).unwrap();
            assert!((direct - s1.values()[j]).norm() < 1e-10, "k = {}", ks.node(j));
        }
        assert!(born_sn(&q, 1.0, 3).is_err());
    }

    #[test]
    fn action_density_limits() {
        assert_eq!(action_density_at(Complex::new(0.7, 0.1), 0.0), 0.0);
        let tiny = action_density_at(Complex::new(0.7, 0.0), 1e-8);
        assert!(tiny > 0.0 && tiny < 1e-6);
        assert!(action_density_at(Complex::new(0.7, 0.0), -0.5) < 0.0);
    }
}
