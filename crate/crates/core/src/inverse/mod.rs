//! Inverse scattering `σ ↦ q` through the Gelfand–Levitan–Marchenko
//! equations on both half-lines, glued at a cut point.

mod chain;
mod glm;
mod kernel;
mod lu;

pub use chain::{build_chain, InverseChain};
pub use glm::{gregory_corrections, glm_residual, glm_solve, reconstruct_from_kernel, reconstruct_half, GlmGrid, GlmQuadrature, GlmSolution, HalfReconstruction};
pub use kernel::{marchenko_kernel, MarchenkoKernel};

use crate::error::InverseError;
use crate::grid::{Potential, SpatialGrid, SpectralField, DEFAULT_ORDERS};
use crate::scalar::Real;

/// Which half-line a reconstruction covers: `[c, ∞)` or `(-∞, c]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HalfLine {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InverseConfig {
    /// GLM truncation `Y`; `None` means `2L`.
    pub y_max: Option<f64>,
    pub n_y: usize,
    pub quadrature: GlmQuadrature,
    pub c_plus: f64,
    pub c: f64,
    pub c_minus: f64,
    /// Sup-norm gate on `|q₊ - q₋|` over `[c₊, c₋]`.
    pub overlap_tolerance: f64,
    pub condition_limit: f64,
    pub sigma_floor: f64,
    pub positivity_floor: f64,
    pub symmetry_tolerance: f64,
    pub reality_tolerance: f64,
}

impl Default for InverseConfig {
    fn default() -> Self {
        Self {
            y_max: None,
            n_y: 512,
            quadrature: GlmQuadrature::Gregory(6),
            c_plus: -2.0,
            c: 0.0,
            c_minus: 2.0,
            overlap_tolerance: 1e-3,
            condition_limit: 1e12,
            sigma_floor: 1e-8,
            positivity_floor: 1e-10,
            symmetry_tolerance: 1e-9,
            reality_tolerance: 1e-9,
        }
    }
}

/// Both half-line reconstructions and the glued potential.
#[derive(Debug, Clone)]
pub struct Reconstruction<T: Real> {
    pub potential: Potential<T>,
    pub chain: InverseChain<T>,
    pub plus: HalfReconstruction<T>,
    pub minus: HalfReconstruction<T>,
    /// `sup |q₊ - q₋|` over the overlap nodes in `[c₊, c₋]`.
    pub overlap_mismatch: T,
}

/// `S⁻¹(σ)` sampled on `grid`.
pub fn inverse_scattering<T: Real>(
    sigma: &SpectralField<T>,
    grid: &SpatialGrid<T>,
    config: &InverseConfig,
) -> Result<Potential<T>, InverseError> {
    inverse_scattering_detailed(sigma, grid, config).map(|r| r.potential)
}

pub fn inverse_scattering_detailed<T: Real>(
    sigma: &SpectralField<T>,
    grid: &SpatialGrid<T>,
    config: &InverseConfig,
) -> Result<Reconstruction<T>, InverseError> {
    let half_width = grid.half_width().as_f64();
    let ordered = -half_width < config.c_plus
        && config.c_plus <= config.c
        && config.c <= config.c_minus
        && config.c_minus < half_width;
    if !ordered {
        return Err(InverseError::GluingPoints);
    }
    let chain = build_chain(sigma, config)?;
    let (plus, minus) = rayon::join(
        || reconstruct_half(&chain, grid, HalfLine::Plus, T::lit(config.c_plus), config),
        || reconstruct_half(&chain, grid, HalfLine::Minus, T::lit(config.c_minus), config),
    );
    let (plus, minus) = (plus?, minus?);

    let mut overlap_mismatch = T::zero();
    let mut values = Vec::with_capacity(grid.len());
    let c = T::lit(config.c);
    for j in 0..grid.len() {
        let x = grid.node(j);
        let (p, m) = (plus.value_at(j), minus.value_at(j));
        if let (Some(p), Some(m)) = (p, m) {
            if x >= T::lit(config.c_plus) && x <= T::lit(config.c_minus) {
                overlap_mismatch = overlap_mismatch.max((p - m).abs());
            }
        }
        let v = if x >= c { p } else { m };
        values.push(v.expect("half-lines cover the grid around the cut"));
    }
    if overlap_mismatch.as_f64() > config.overlap_tolerance {
        return Err(InverseError::OverlapMismatch {
            sup: overlap_mismatch.as_f64(),
            tolerance: config.overlap_tolerance,
        });
    }
    let potential = Potential::new(*grid, values, DEFAULT_ORDERS.0, DEFAULT_ORDERS.1)?;
    Ok(Reconstruction {
        potential,
        chain,
        plus,
        minus,
        overlap_mismatch,
    })
}
