//! Named test potentials.
//!
//! [`generic_corpus`] holds five Schwartz-class repulsive barriers, whose
//! spectra are negligible beyond the desk band `|k| <= 16`. The remaining
//! profiles exercise specific behaviour: algebraic Fourier tails, jumps, and
//! a well that carries a bound state.

use crate::error::GridError;
use crate::grid::{Interpolation, Potential, SpatialGrid};
use crate::scalar::Real;

/// A potential given by a closed-form profile.
#[derive(Debug, Clone, Copy)]
pub struct NamedPotential {
    pub name: &'static str,
    pub profile: fn(f64) -> f64,
    /// Continuation between nodes: band-limited for smooth profiles,
    /// piecewise-linear for profiles with kinks or jumps.
    pub interpolation: Interpolation,
}

impl NamedPotential {
    pub fn eval(&self, x: f64) -> f64 {
        (self.profile)(x)
    }

    pub fn sample<T: Real>(&self, grid: SpatialGrid<T>) -> Result<Potential<T>, GridError> {
        let q = Potential::from_fn(grid, |x| T::lit((self.profile)(x.as_f64())))?;
        Ok(q.with_interpolation(self.interpolation))
    }
}

const fn smooth(name: &'static str, profile: fn(f64) -> f64) -> NamedPotential {
    NamedPotential {
        name,
        profile,
        interpolation: Interpolation::BandLimited,
    }
}

fn sech2(x: f64) -> f64 {
    let c = x.cosh();
    1.0 / (c * c)
}

pub const GAUSSIAN: NamedPotential = smooth("gaussian", |x| 0.3 * (-x * x).exp());

pub const SMALL_GAUSSIAN: NamedPotential = smooth("small-gaussian", |x| 0.2 * (-x * x).exp());

pub const SECH2_BARRIER: NamedPotential = smooth("sech2-barrier", |x| 0.5 * sech2(x));

pub const TWO_BUMP: NamedPotential = smooth("two-bump", |x| {
    0.4 * (-(x - 1.0).powi(2)).exp() + 0.2 * (-2.0 * (x + 1.5).powi(2)).exp()
});

pub const MODULATED_GAUSSIAN: NamedPotential = smooth("modulated-gaussian", |x| {
    0.35 * (-(x - 0.5).powi(2) / 2.0).exp() * (1.0 + 0.3 * x.sin())
});

/// Flat-top barrier `0.4 e^{-x⁴}`.
pub const FLAT_TOP: NamedPotential = smooth("flat-top", |x| 0.4 * (-(x * x) * (x * x)).exp());

/// `(1 - x²)²` on `[-1, 1]`: C¹ with a jump in the second derivative at
/// `±1`, so its Fourier transform decays like `k⁻³`. The rough datum of the
/// smoothing experiments.
pub const TENT_SQUARED: NamedPotential = smooth("tent-squared", |x| {
    let s = 1.0 - x * x;
    if s > 0.0 {
        s * s
    } else {
        0.0
    }
});

/// `max(0, 1 - |x|)²`, read literally: its derivative jumps at the origin,
/// so the Fourier tail is only `k⁻²`.
pub const LITERAL_TENT_SQUARED: NamedPotential = NamedPotential {
    name: "literal-tent-squared",
    profile: |x| {
        let s = 1.0 - x.abs();
        if s > 0.0 {
            s * s
        } else {
            0.0
        }
    },
    interpolation: Interpolation::PiecewiseLinear,
};

/// Height 1 on `[-1, 1]`.
pub const BOX: NamedPotential = NamedPotential {
    name: "box",
    profile: |x| if x.abs() <= 1.0 { 1.0 } else { 0.0 },
    interpolation: Interpolation::PiecewiseLinear,
};

/// `-1.5 sech²x`, a Pöschl–Teller well `-ν(ν+1)sech²x` with
/// `ν = (√7 - 1)/2`; its single bound state sits at `-ν² ≈ -0.677`.
pub const ATTRACTIVE_WELL: NamedPotential = smooth("attractive-well", |x| -1.5 * sech2(x));

/// The five smooth barriers of the roundtrip suites.
pub fn generic_corpus() -> [NamedPotential; 5] {
    [GAUSSIAN, SECH2_BARRIER, TWO_BUMP, MODULATED_GAUSSIAN, FLAT_TOP]
}

/// Every repulsive profile: the smooth corpus plus the rough ones.
pub fn repulsive_profiles() -> Vec<NamedPotential> {
    let mut all = generic_corpus().to_vec();
    all.extend([SMALL_GAUSSIAN, TENT_SQUARED, LITERAL_TENT_SQUARED, BOX]);
    all
}

pub fn by_name(name: &str) -> Option<NamedPotential> {
    repulsive_profiles()
        .into_iter()
        .chain([ATTRACTIVE_WELL])
        .find(|p| p.name == name)
}
