//! Brute-force reference computations for validating the production paths.
//!
//! Nothing here reuses the production kernels: the plane-wave oracle
//! integrates the physical equation `ψ'' = (q - k²)ψ` with its own RK4 and
//! Richardson extrapolation, band-limited potentials are evaluated by a
//! direct trigonometric sum instead of FFTs, the Born oracle sums over the
//! simplex with Gregory weights, and quadratures go through an adaptive
//! double-exponential rule. Everything is `f64`; these are references, not
//! production code.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::OracleError;
use crate::grid::{Interpolation, Potential};

/// A real profile on `[left, right]`, smooth inside each of `cells` equal
/// cells (breakpoints are allowed only at cell edges) and zero outside.
pub struct Profile<'a> {
    eval: Box<dyn Fn(f64) -> f64 + Sync + 'a>,
    pub left: f64,
    pub right: f64,
    pub cells: usize,
}

impl<'a> Profile<'a> {
    pub fn new(eval: impl Fn(f64) -> f64 + Sync + 'a, left: f64, right: f64, cells: usize) -> Self {
        Self {
            eval: Box::new(eval),
            left,
            right,
            cells: cells.max(1),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    /// The continuation of a sampled potential, restricted to the window
    /// where its samples are non-negligible.
    ///
    /// Band-limited potentials are evaluated as an explicit cosine/sine
    /// series; piecewise-linear ones by linear interpolation with the grid
    /// nodes as breakpoints.
    pub fn from_potential(q: &'a Potential<f64>) -> Self {
        let grid = *q.grid();
        let h = grid.step();
        let n = grid.len();
        let values = q.values();
        let peak = q.sup_norm();
        let significant = |v: &f64| v.abs() > 1e-17 * peak;
        let first = values.iter().position(significant).unwrap_or(0).saturating_sub(2);
        let last = (values.iter().rposition(significant).unwrap_or(n - 1) + 2).min(n - 1);
        let (left, right) = (grid.node(first), grid.node(last));
        let cells = last - first;
        match q.interpolation() {
            Interpolation::PiecewiseLinear => Profile::new(
                move |x| {
                    let s = (x - grid.node(0)) / h;
                    let j = s.floor().clamp(0.0, (n - 1) as f64) as usize;
                    let frac = s - j as f64;
                    let next = if j + 1 < n { values[j + 1] } else { values[0] };
                    values[j] * (1.0 - frac) + next * frac
                },
                left,
                right,
                cells,
            ),
            Interpolation::BandLimited => {
                let series = TrigSeries::new(values, grid.node(0), grid.period());
                Profile::new(move |x| series.eval(x), left, right, cells)
            }
        }
    }
}

/// Real trigonometric interpolant of periodic samples, by explicit sums.
struct TrigSeries {
    origin: f64,
    base: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl TrigSeries {
    fn new(values: &[f64], origin: f64, period: f64) -> Self {
        let n = values.len();
        let base = 2.0 * std::f64::consts::PI / period;
        let modes = n / 2;
        let mut cos = vec![0.0; modes + 1];
        let mut sin = vec![0.0; modes + 1];
        for m in 0..=modes {
            let (mut c, mut s) = (0.0, 0.0);
            for (j, v) in values.iter().enumerate() {
                let angle = 2.0 * std::f64::consts::PI * ((m * j) % n) as f64 / n as f64;
                c += v * angle.cos();
                s += v * angle.sin();
            }
            let scale = if m == 0 || (n.is_multiple_of(2) && m == modes) { 1.0 } else { 2.0 };
            cos[m] = scale * c / n as f64;
            sin[m] = if n.is_multiple_of(2) && m == modes { 0.0 } else { scale * s / n as f64 };
        }
        Self { origin, base, cos, sin }
    }

    fn eval(&self, x: f64) -> f64 {
        let u = self.base * (x - self.origin);
        // Chebyshev-style recurrence for cos(mu), sin(mu).
        let (c1, s1) = (u.cos(), u.sin());
        let (mut c, mut s) = (1.0, 0.0);
        let mut acc = 0.0;
        for m in 0..self.cos.len() {
            acc += self.cos[m] * c + self.sin[m] * s;
            let next_c = c * c1 - s * s1;
            s = s * c1 + c * s1;
            c = next_c;
        }
        acc
    }
}

/// Profile values at the half-step points of `2^level` RK4 steps per cell.
struct SampledLevel {
    steps_per_cell: usize,
    values: Vec<f64>,
}

/// Plane-wave scattering amplitudes from the physical Schrödinger equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleScattering {
    pub t: Complex64,
    pub r_plus: Complex64,
    pub r_minus: Complex64,
    /// `max(| |t|²+|r₊|²-1 |, | |t|²+|r₋|²-1 |)`, reported, never imposed.
    pub unitarity_defect: f64,
    /// Difference between the last two extrapolated estimates.
    pub error_estimate: f64,
}

/// Reusable plane-wave oracle for one profile; samples are tabulated once
/// and shared by every wavenumber.
pub struct PlaneWaveOracle {
    left: f64,
    right: f64,
    cells: usize,
    levels: Vec<SampledLevel>,
}

const RICHARDSON_LEVELS: usize = 4;

impl PlaneWaveOracle {
    pub fn new(profile: &Profile<'_>) -> Self {
        let levels = (0..RICHARDSON_LEVELS)
            .map(|level| {
                let steps_per_cell = 1 << level;
                let total = 2 * steps_per_cell * profile.cells;
                let dx = (profile.right - profile.left) / total as f64;
                // Evaluate cell by cell so breakpoints land exactly on
                // one-sided limits of the right cell.
                let values: Vec<f64> = (0..=total)
                    .into_par_iter()
                    .map(|p| profile.eval(profile.left + p as f64 * dx))
                    .collect();
                SampledLevel { steps_per_cell, values }
            })
            .collect();
        Self {
            left: profile.left,
            right: profile.right,
            cells: profile.cells,
            levels,
        }
    }

    /// Transmission and reflection at wavenumber `k != 0`.
    pub fn scatter(&self, k: f64) -> Result<OracleScattering, OracleError> {
        if k == 0.0 {
            return Err(OracleError::ZeroWavenumber);
        }
        // (α, β): f₁ = α e^{ikx} + β e^{-ikx} left of the support.
        // (γ, δ): f₂ = γ e^{ikx} + δ e^{-ikx} right of the support.
        let estimates: Vec<[Complex64; 4]> = self.levels.iter().map(|lvl| self.coefficients(lvl, k)).collect();
        let richardson = |a: &[Complex64; 4], b: &[Complex64; 4], factor: f64| -> [Complex64; 4] {
            std::array::from_fn(|i| (b[i] * factor - a[i]) / (factor - 1.0))
        };
        let first: Vec<[Complex64; 4]> = estimates.windows(2).map(|w| richardson(&w[0], &w[1], 16.0)).collect();
        let second: Vec<[Complex64; 4]> = first.windows(2).map(|w| richardson(&w[0], &w[1], 32.0)).collect();
        let spread = |a: &[Complex64; 4], b: &[Complex64; 4]| (0..4).map(|i| (a[i] - b[i]).norm()).fold(0.0, f64::max);
        let coarse = spread(&first[first.len() - 2], &first[first.len() - 1]);
        let fine = spread(&second[0], &second[1]);
        if fine > coarse.max(1e-13) {
            return Err(OracleError::ExtrapolationDivergence { coarse, fine });
        }
        let [alpha, beta, gamma, delta] = second[second.len() - 1];
        let t = 1.0 / alpha;
        let t_other = 1.0 / delta;
        let r_minus = beta / alpha;
        let r_plus = gamma / delta;
        let unitarity_defect = (t.norm_sqr() + r_plus.norm_sqr() - 1.0)
            .abs()
            .max((t.norm_sqr() + r_minus.norm_sqr() - 1.0).abs());
        Ok(OracleScattering {
            t: (t + t_other) * 0.5,
            r_plus,
            r_minus,
            unitarity_defect,
            error_estimate: fine.max((t - t_other).norm()),
        })
    }

    fn coefficients(&self, level: &SampledLevel, k: f64) -> [Complex64; 4] {
        let steps = level.steps_per_cell * self.cells;
        let dx = (self.right - self.left) / steps as f64;
        let ik = Complex64::new(0.0, k);
        let rhs = |q: f64, psi: Complex64, dpsi: Complex64| (dpsi, psi * (q - k * k));
        let rk4 = |state: (Complex64, Complex64), h: f64, q0: f64, qm: f64, q1: f64| {
            let (p, d) = state;
            let (a1, b1) = rhs(q0, p, d);
            let (a2, b2) = rhs(qm, p + a1 * (h / 2.0), d + b1 * (h / 2.0));
            let (a3, b3) = rhs(qm, p + a2 * (h / 2.0), d + b2 * (h / 2.0));
            let (a4, b4) = rhs(q1, p + a3 * h, d + b3 * h);
            (
                p + (a1 + (a2 + a3) * 2.0 + a4) * (h / 6.0),
                d + (b1 + (b2 + b3) * 2.0 + b4) * (h / 6.0),
            )
        };
        let v = &level.values;
        // f₁ from the right edge towards the left.
        let mut state = ((ik * self.right).exp(), ik * (ik * self.right).exp());
        for i in (0..steps).rev() {
            state = rk4(state, -dx, v[2 * i + 2], v[2 * i + 1], v[2 * i]);
        }
        let (psi, dpsi) = state;
        let x = self.left;
        let alpha = (ik * psi + dpsi) * (-ik * x).exp() / (2.0 * ik);
        let beta = (ik * psi - dpsi) * (ik * x).exp() / (2.0 * ik);
        // f₂ from the left edge towards the right.
        let mut state = ((-ik * self.left).exp(), -ik * (-ik * self.left).exp());
        for i in 0..steps {
            state = rk4(state, dx, v[2 * i], v[2 * i + 1], v[2 * i + 2]);
        }
        let (psi, dpsi) = state;
        let x = self.right;
        let gamma = (ik * psi + dpsi) * (-ik * x).exp() / (2.0 * ik);
        let delta = (ik * psi - dpsi) * (ik * x).exp() / (2.0 * ik);
        [alpha, beta, gamma, delta]
    }
}

/// One-shot plane-wave oracle for a sampled potential.
pub fn ode_scattering_oracle(q: &Potential<f64>, k: f64) -> Result<OracleScattering, OracleError> {
    PlaneWaveOracle::new(&Profile::from_potential(q)).scatter(k)
}

/// Adaptive quadrature of a smooth function on a finite interval.
pub fn adaptive_quadrature(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    quadrature::double_exponential::integrate(f, a, b, 1e-14).integral
}

/// `∫_{-∞}^{∞} f` for integrands decaying at least like `|x|^{-2}`, through
/// the substitution `x = ±1/s` on the tails.
pub fn adaptive_quadrature_line(f: impl Fn(f64) -> f64) -> f64 {
    let core = adaptive_quadrature(&f, -1.0, 1.0);
    let right = adaptive_quadrature(|s| if s == 0.0 { 0.0 } else { f(1.0 / s) / (s * s) }, 0.0, 1.0);
    let left = adaptive_quadrature(|s| if s == 0.0 { 0.0 } else { f(-1.0 / s) / (s * s) }, 0.0, 1.0);
    core + right + left
}

/// `𝓗v(k) = -(1/π) p.v.∫ v(k')/(k'-k) dk'` by symmetric excision.
///
/// With `g(u) = [v(k+u) - v(k-u)]/u`, `𝓗v(k) = -(1/π) lim_{ε→0} ∫_ε^∞ g`.
/// The excised piece is odd in `ε`, so three radii and two Richardson
/// passes (factors 2 and 8) remove the `ε` and `ε³` terms.
pub fn pv_hilbert_oracle(v: impl Fn(f64) -> f64, k: f64) -> f64 {
    let g = |u: f64| (v(k + u) - v(k - u)) / u;
    // Break the finite range where v(k ± u) peaks, then map the tail.
    let reach = 2.0 * k.abs() + 2.0;
    let excised = |eps: f64| {
        let mut cuts = vec![eps, 1.0, k.abs() - 1.0, k.abs() + 1.0, reach];
        cuts.retain(|&c| c >= eps && c <= reach);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let body: f64 = cuts.windows(2).map(|w| adaptive_quadrature(g, w[0], w[1])).sum();
        let tail = adaptive_quadrature(|s| if s == 0.0 { 0.0 } else { g(1.0 / s) / (s * s) }, 0.0, 1.0 / reach);
        body + tail
    };
    let radii = [1e-2, 5e-3, 2.5e-3];
    let i: Vec<f64> = radii.iter().map(|&e| excised(e)).collect();
    let r1 = [2.0 * i[1] - i[0], 2.0 * i[2] - i[1]];
    let r2 = (8.0 * r1[1] - r1[0]) / 7.0;
    -r2 / std::f64::consts::PI
}

/// `sₙ(q,k)`, `n ∈ {1,2}`, by nested sums over the ordered simplex.
///
/// Each inner integral `∫_{t_{j-1}}^{∞}` is a direct sum over the nodes
/// with fourth-order Gregory end corrections; cost is `O(n²)` per level.
pub fn simplex_quadrature_sn(q: &Potential<f64>, k: f64, n: usize) -> Complex64 {
    assert!((1..=2).contains(&n), "simplex oracle supports n = 1, 2");
    let grid = q.grid();
    let h = grid.step();
    let values = q.values();
    let peak = q.sup_norm();
    if peak == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let lo = values.iter().position(|v| v.abs() > 1e-18 * peak).unwrap_or(0);
    let hi = values.iter().rposition(|v| v.abs() > 1e-18 * peak).unwrap_or(0);
    let xs: Vec<f64> = (lo..=hi).map(|j| grid.node(j)).collect();
    let qs: Vec<f64> = values[lo..=hi].to_vec();
    let len = xs.len();
    // g(t) is the tail attached to the outermost free variable.
    let mut g: Vec<Complex64> = xs.iter().map(|&x| Complex64::from_polar(1.0, k * x)).collect();
    for _ in 0..n {
        g = (0..len)
            .into_par_iter()
            .map(|i| {
                let count = len - i;
                (i..len)
                    .map(|j| {
                        let w = gregory_weight(j - i, count);
                        g[j] * (qs[j] * (k * (xs[j] - xs[i])).sin() * w)
                    })
                    .sum::<Complex64>()
                    * h
            })
            .collect();
    }
    (0..len)
        .map(|i| Complex64::from_polar(1.0, k * xs[i]) * qs[i] * g[i] * gregory_weight(i, len))
        .sum::<Complex64>()
        * h
}

/// Fourth-order Gregory weight of node `j` among `count` equispaced nodes.
fn gregory_weight(j: usize, count: usize) -> f64 {
    const END: [f64; 3] = [3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0];
    if count < 7 {
        return if j == 0 || j + 1 == count { 0.5 } else { 1.0 };
    }
    let from_end = count - 1 - j;
    if j < 3 {
        END[j]
    } else if from_end < 3 {
        END[from_end]
    } else {
        1.0
    }
}

/// `E(x, y_i) = C e^{-y_i}` solving the Nyström system
/// `E_i + Σ_j w_j F(x+y_i+z_j) E_j = -F(x+y_i)` for `F(u) = a e^{-u}`,
/// with `C = -a e^{-x} / (1 + a e^{-x} Σ_j w_j e^{-2 z_j})`.
pub fn separable_glm_oracle(a: f64, x: f64, nodes: &[f64], weights: &[f64]) -> Vec<f64> {
    let sum: f64 = nodes.iter().zip(weights).map(|(z, w)| w * (-2.0 * z).exp()).sum();
    let c = -a * (-x).exp() / (1.0 + a * (-x).exp() * sum);
    nodes.iter().map(|y| c * (-y).exp()).collect()
}

/// Exact solution of `∂ₜv = -∂ₓ³v` on the periodized grid, by explicit
/// discrete Fourier sums: each mode `e^{iξx}` is multiplied by `e^{iξ³t}`.
/// The Nyquist mode, whose sign of `ξ` is ambiguous, keeps `cos(ξ³t)`.
pub fn linear_airy_oracle(q: &Potential<f64>, t: f64) -> Vec<f64> {
    let n = q.grid().len();
    let period = q.grid().period();
    let values = q.values();
    let base = 2.0 * std::f64::consts::PI / n as f64;
    let coefficients: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|m| {
            values
                .iter()
                .enumerate()
                .map(|(j, v)| Complex64::from_polar(*v, -base * ((m * j) % n) as f64))
                .sum::<Complex64>()
                / n as f64
        })
        .collect();
    let evolved: Vec<Complex64> = coefficients
        .iter()
        .enumerate()
        .map(|(m, c)| {
            let signed = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
            let xi = 2.0 * std::f64::consts::PI * signed / period;
            let phase = xi * xi * xi * t;
            if n.is_multiple_of(2) && m == n / 2 {
                c * phase.cos()
            } else {
                c * Complex64::from_polar(1.0, phase)
            }
        })
        .collect();
    (0..n)
        .into_par_iter()
        .map(|j| {
            evolved
                .iter()
                .enumerate()
                .map(|(m, c)| (c * Complex64::from_polar(1.0, base * ((m * j) % n) as f64)).re)
                .sum()
        })
        .collect()
}

/// KdV conserved quantities of the sampled profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KdvInvariants {
    /// `∫ u`
    pub mass: f64,
    /// `∫ u²`
    pub momentum: f64,
    /// `∫ (u_x²/2 + u³)`, the Hamiltonian of `∂ₜu = -∂ₓ³u + 6u∂ₓu`
    pub energy: f64,
}

/// Grid quadrature of the KdV invariants, with `u_x` from sixth-order
/// centered differences on the periodized grid.
pub fn kdv_invariants(u: &Potential<f64>) -> KdvInvariants {
    let h = u.grid().step();
    let v = u.values();
    let n = v.len();
    let at = |j: isize| v[j.rem_euclid(n as isize) as usize];
    const C: [f64; 3] = [3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0];
    let mut mass = 0.0;
    let mut momentum = 0.0;
    let mut energy = 0.0;
    for j in 0..n as isize {
        let ux = (1..=3).map(|m| C[m - 1] * (at(j + m as isize) - at(j - m as isize))).sum::<f64>() / h;
        let uj = at(j);
        mass += uj;
        momentum += uj * uj;
        energy += 0.5 * ux * ux + uj * uj * uj;
    }
    KdvInvariants {
        mass: mass * h,
        momentum: momentum * h,
        energy: energy * h,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SpatialGrid;

    #[test]
    fn free_plane_wave() {
        let zero = Profile::new(|_| 0.0, -1.0, 1.0, 100);
        let s = PlaneWaveOracle::new(&zero).scatter(1.3).unwrap();
        assert!((s.t - 1.0).norm() < 1e-13, "{s:?}");
        assert!(s.r_plus.norm() < 1e-13 && s.r_minus.norm() < 1e-13);
        assert!(PlaneWaveOracle::new(&zero).scatter(0.0).is_err());
    }

    #[test]
    fn trig_series_reproduces_nodes() {
        let g = SpatialGrid::new(5.0, 64).unwrap();
        let q = Potential::from_fn(g, |x: f64| (-x * x).exp()).unwrap();
        let s = TrigSeries::new(q.values(), g.node(0), g.period());
        for j in 0..64 {
            assert!((s.eval(g.node(j)) - q.values()[j]).abs() < 1e-13);
        }
    }

    #[test]
    fn gregory_weights_integrate_cubics() {
        let count = 21;
        let h = 0.1;
        let sum: f64 = (0..count)
            .map(|j| {
                let x = j as f64 * h;
                gregory_weight(j, count) * x * x * x
            })
            .sum::<f64>()
            * h;
        assert!((sum - 2.0f64.powi(4) / 4.0).abs() < 1e-12);
    }

    #[test]
    fn pv_oracle_on_lorentzian() {
        let v = |k: f64| 1.0 / (1.0 + k * k);
        for k in [-2.0, 0.0, 0.5, 3.0] {
            assert!((pv_hilbert_oracle(v, k) - k / (1.0 + k * k)).abs() < 1e-9, "k = {k}");
        }
    }

    #[test]
    fn separable_oracle_solves_its_system() {
        let nodes: Vec<f64> = (0..11).map(|j| j as f64 * 0.2).collect();
        let weights: Vec<f64> = (0..11).map(|j| if j == 0 || j == 10 { 0.1 } else { 0.2 }).collect();
        let (a, x) = (0.7, 0.3);
        let e = separable_glm_oracle(a, x, &nodes, &weights);
        let f = |u: f64| a * (-u).exp();
        for (i, y) in nodes.iter().enumerate() {
            let conv: f64 = nodes.iter().zip(&weights).zip(&e).map(|((z, w), ej)| w * f(x + y + z) * ej).sum();
            assert!((e[i] + conv + f(x + y)).abs() < 1e-14);
        }
    }

    #[test]
    fn invariants_of_zero() {
        let g = SpatialGrid::new(5.0, 64).unwrap();
        let inv = kdv_invariants(&Potential::zero(g));
        assert_eq!((inv.mass, inv.momentum, inv.energy), (0.0, 0.0, 0.0));
    }
}
