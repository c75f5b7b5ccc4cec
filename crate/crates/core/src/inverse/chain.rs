//! The chain `σ → l → ω → w → τ, ρ±, R±`.

use num_complex::Complex;

use crate::error::InverseError;
use crate::grid::{SpectralField, SpectralGrid};
use crate::hilbert::hilbert_transform_padded;
use crate::inverse::InverseConfig;
use crate::scalar::{cis, Cplx, Real};

/// Spectral quantities derived from admissible data `σ`.
#[derive(Debug, Clone)]
pub struct InverseChain<T: Real> {
    pub sigma: SpectralField<T>,
    /// `l(k) = log(4(k²+1) / (4k² + σ(k)σ(-k)))`, real and even.
    pub l: Vec<T>,
    /// `𝓗l`, odd.
    pub hilbert_l: Vec<T>,
    pub omega: SpectralField<T>,
    /// `1/w(k) = ω(k) / (2i(k+i))`.
    pub w_inv: SpectralField<T>,
    pub tau: SpectralField<T>,
    pub rho_plus: SpectralField<T>,
    pub rho_minus: SpectralField<T>,
    /// `R₊(k) = 2ik ρ₊(k)`.
    pub big_r_plus: SpectralField<T>,
    /// `R₋(k) = 2ik ρ₋(k)`.
    pub big_r_minus: SpectralField<T>,
}

impl<T: Real> InverseChain<T> {
    pub fn grid(&self) -> &SpectralGrid<T> {
        self.sigma.grid()
    }

    /// `w(k) = 1 / w_inv(k)`.
    pub fn w(&self, j: usize) -> Cplx<T> {
        Complex::new(T::one(), T::zero()) / self.w_inv.values()[j]
    }

    /// `max_k |w(k)w(-k) - 4k² - σ(k)σ(-k)| / (1 + 4k²)`.
    pub fn w_sigma_residual(&self) -> T {
        let ks = self.grid();
        (0..ks.len())
            .map(|j| {
                let k = ks.node(j);
                let m = ks.mirror(j);
                let lhs = self.w(j) * self.w(m);
                let rhs = self.sigma.values()[j] * self.sigma.values()[m] + T::lit(4.0) * k * k;
                (lhs - rhs).norm() / (T::one() + T::lit(4.0) * k * k)
            })
            .fold(T::zero(), T::max)
    }

    /// `max_k |τ(k)τ(-k) + ρ±(k)ρ±(-k) - 1|` over both signs.
    pub fn unitarity_residual(&self) -> T {
        let ks = self.grid();
        let one = Complex::new(T::one(), T::zero());
        (0..ks.len())
            .map(|j| {
                let m = ks.mirror(j);
                let tt = self.tau.values()[j] * self.tau.values()[m];
                let plus = tt + self.rho_plus.values()[j] * self.rho_plus.values()[m] - one;
                let minus = tt + self.rho_minus.values()[j] * self.rho_minus.values()[m] - one;
                plus.norm().max(minus.norm())
            })
            .fold(T::zero(), T::max)
    }
}

/// Builds the chain after checking that `σ` is admissible:
/// `σ(-k) = conj σ(k)`, `σ(0) > 0` and `4k² + σ(k)σ(-k) > 0`.
pub fn build_chain<T: Real>(sigma: &SpectralField<T>, config: &InverseConfig) -> Result<InverseChain<T>, InverseError> {
    let ks = *sigma.grid();
    let s = sigma.values();
    let tolerance = config.symmetry_tolerance * sigma.sup_norm().as_f64().max(1.0);
    let residual = sigma.symmetry_residual().as_f64();
    if residual > tolerance {
        return Err(InverseError::Symmetry { residual, tolerance });
    }
    let z = ks.zero_index();
    let at_zero = s[z].re.as_f64();
    if !(at_zero > config.sigma_floor) {
        return Err(InverseError::SigmaAtZero {
            value: at_zero,
            threshold: config.sigma_floor,
        });
    }

    let four = T::lit(4.0);
    let mut l = Vec::with_capacity(ks.len());
    for j in 0..ks.len() {
        let k = ks.node(j);
        let denom = four * k * k + (s[j] * s[ks.mirror(j)]).re;
        if !(denom.as_f64() > config.positivity_floor) {
            return Err(InverseError::Positivity {
                k: k.as_f64(),
                value: denom.as_f64(),
            });
        }
        l.push((four * (k * k + T::one()) / denom).ln());
    }
    // Symmetrize exactly: l is even by construction up to rounding.
    for j in 0..z {
        let m = ks.mirror(j);
        let avg = (l[j] + l[m]) / T::lit(2.0);
        l[j] = avg;
        l[m] = avg;
    }
    let hilbert_l = hilbert_of_l(&ks, &l);

    let i = Complex::new(T::zero(), T::one());
    let half = T::lit(0.5);
    let omega: Vec<Cplx<T>> = l
        .iter()
        .zip(&hilbert_l)
        .map(|(&a, &b)| cis(half * b) * (half * a).exp())
        .collect();
    let w_inv: Vec<Cplx<T>> = (0..ks.len())
        .map(|j| omega[j] / (i * T::lit(2.0) * (Complex::new(ks.node(j), T::one()))))
        .collect();
    let two_ik = |j: usize| i * (T::lit(2.0) * ks.node(j));
    let tau: Vec<Cplx<T>> = (0..ks.len()).map(|j| two_ik(j) * w_inv[j]).collect();
    let rho_plus: Vec<Cplx<T>> = (0..ks.len()).map(|j| s[ks.mirror(j)] * w_inv[j]).collect();
    let rho_minus: Vec<Cplx<T>> = (0..ks.len()).map(|j| s[j] * w_inv[j]).collect();
    let big_r_plus: Vec<Cplx<T>> = (0..ks.len()).map(|j| two_ik(j) * rho_plus[j]).collect();
    let big_r_minus: Vec<Cplx<T>> = (0..ks.len()).map(|j| two_ik(j) * rho_minus[j]).collect();

    let field = |v: Vec<Cplx<T>>| SpectralField::new(ks, v);
    Ok(InverseChain {
        sigma: sigma.clone(),
        l,
        hilbert_l,
        omega: field(omega)?,
        w_inv: field(w_inv)?,
        tau: field(tau)?,
        rho_plus: field(rho_plus)?,
        rho_minus: field(rho_minus)?,
        big_r_plus: field(big_r_plus)?,
        big_r_minus: field(big_r_minus)?,
    })
}

/// `Σ αᵢ/(aᵢ² + k²)`, whose transform is `Σ αᵢ k/(aᵢ(aᵢ² + k²))`.
struct Lorentzians(&'static [(f64, f64)]);

impl Lorentzians {
    fn value<T: Real>(&self, k: T) -> T {
        self.0.iter().map(|&(alpha, a)| T::lit(alpha) / (T::lit(a * a) + k * k)).sum()
    }

    fn slope<T: Real>(&self, k: T) -> T {
        self.0
            .iter()
            .map(|&(alpha, a)| {
                let d = T::lit(a * a) + k * k;
                T::lit(-2.0 * alpha) * k / (d * d)
            })
            .sum()
    }

    fn transform<T: Real>(&self, k: T) -> T {
        self.0
            .iter()
            .map(|&(alpha, a)| T::lit(alpha / a) * k / (T::lit(a * a) + k * k))
            .sum()
    }
}

/// Tails `k⁻²`, `k⁻⁴` and `k⁻⁶`: the weights cancel successive moments.
const TAIL_BASIS: [Lorentzians; 3] = [
    Lorentzians(&[(1.0, 1.0)]),
    Lorentzians(&[(1.0, 1.0), (-1.0, 2.0)]),
    Lorentzians(&[(5.0, 1.0), (-8.0, 2.0), (3.0, 3.0)]),
];

/// Solves the 3×3 system `m·a = b` by Cramer's rule.
fn solve3<T: Real>(m: [[T; 3]; 3], b: [T; 3]) -> [T; 3] {
    let det = |m: [[T; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(m);
    std::array::from_fn(|c| {
        let mut mc = m;
        for r in 0..3 {
            mc[r][c] = b[r];
        }
        det(mc) / d
    })
}

/// `𝓗l` on the window. `l` decays only like `k⁻²`, so a combination of
/// Lorentzians with closed-form transforms is fitted to its value and slope
/// at the window edges and to its mean; the remainder is then `O(k⁻⁶)`
/// beyond the window and mean-free (which removes the leading periodization
/// error), and goes through the padded FFT transform.
fn hilbert_of_l<T: Real>(ks: &SpectralGrid<T>, l: &[T]) -> Vec<T> {
    let last = ks.len() - 1;
    let edge = ks.node(last);
    let dk = ks.step();
    let edge_slope = (T::lit(25.0) * l[last] - T::lit(48.0) * l[last - 1] + T::lit(36.0) * l[last - 2]
        - T::lit(16.0) * l[last - 3]
        + T::lit(3.0) * l[last - 4])
        / (T::lit(12.0) * dk);
    let mean = |f: &dyn Fn(usize) -> T| (0..ks.len()).fold(T::zero(), |acc, j| acc + ks.weight(j) * f(j));
    let m: [[T; 3]; 3] = [
        std::array::from_fn(|i| TAIL_BASIS[i].value(edge)),
        std::array::from_fn(|i| TAIL_BASIS[i].slope(edge)),
        std::array::from_fn(|i| mean(&|j| TAIL_BASIS[i].value(ks.node(j)))),
    ];
    let coefficients = solve3(m, [l[last], edge_slope, mean(&|j| l[j])]);
    let reference: Vec<(T, T)> = (0..ks.len())
        .map(|j| {
            let k = ks.node(j);
            TAIL_BASIS.iter().zip(&coefficients).fold((T::zero(), T::zero()), |(v, t), (b, c)| {
                (v + *c * b.value(k), t + *c * b.transform(k))
            })
        })
        .collect();
    let remainder: Vec<T> = l.iter().zip(&reference).map(|(v, r)| *v - r.0).collect();
    let mut h = hilbert_transform_padded(&remainder, ks.step());
    for (hj, r) in h.iter_mut().zip(&reference) {
        *hj = *hj + r.1;
    }
    let z = ks.zero_index();
    h[z] = T::zero();
    for j in 0..z {
        let m = ks.mirror(j);
        let odd = (h[m] - h[j]) / T::lit(2.0);
        h[m] = odd;
        h[j] = -odd;
    }
    h
}
