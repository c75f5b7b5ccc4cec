//! Error types, one per pipeline stage.
//!
//! Numeric payloads are carried as `f64` so the errors stay independent of
//! the scalar type parameter.

use thiserror::Error;

/// Which end of the spatial window a diagnostic refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    Left,
    Right,
}

impl std::fmt::Display for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Edge::Left => "left",
            Edge::Right => "right",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("grid size {n} must be a power of two (and at least 4)")]
    NotPowerOfTwo { n: usize },
    #[error("{what} must be positive and finite, got {value}")]
    NonPositive { what: &'static str, value: f64 },
    #[error("spectral interval count {n_k} must be even and positive")]
    OddSpectralCount { n_k: usize },
    #[error("expected {expected} samples, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },
    #[error("weight order M = {m} is below the admissible minimum 4")]
    WeightOrder { m: u32 },
    #[error("samples do not decay at the {edge} edge: |f| = {value:e} exceeds {threshold:e}")]
    BoundaryDecay {
        edge: Edge,
        value: f64,
        threshold: f64,
    },
    #[error("conjugate symmetry violated by {residual:e} (tolerance {tolerance:e})")]
    SymmetryViolation { residual: f64, tolerance: f64 },
    #[error("operands live on different grids")]
    GridMismatch,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JostError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("Jost solutions are only bounded for Im k >= 0, got Im k = {im_k}")]
    LowerHalfPlane { im_k: f64 },
    #[error("Jost integration overflowed near x = {x}")]
    Overflow { x: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScatteringError {
    #[error(transparent)]
    Jost(#[from] JostError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("|W(k)| = {modulus:e} at k = {k} is below {tolerance:e}; the potential is not generic")]
    VanishingWronskian { k: f64, modulus: f64, tolerance: f64 },
    #[error("Born terms are evaluated for n = 1 and n = 2 only, got n = {n}")]
    UnsupportedBornOrder { n: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InverseError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Scattering(#[from] ScatteringError),
    #[error("sigma(-k) != conj sigma(k): residual {residual:e} exceeds {tolerance:e}")]
    Symmetry { residual: f64, tolerance: f64 },
    #[error("sigma(0) = {value:e} must be positive (threshold {threshold:e})")]
    SigmaAtZero { value: f64, threshold: f64 },
    #[error("4k^2 + sigma(k)sigma(-k) = {value:e} at k = {k} is not positive")]
    Positivity { k: f64, value: f64 },
    #[error("Marchenko kernel has imaginary residue {residual:e} (tolerance {tolerance:e})")]
    KernelNotReal { residual: f64, tolerance: f64 },
    #[error("Nystrom system at x = {x} is near singular (condition estimate {condition:e})")]
    NearSingular { x: f64, condition: f64 },
    #[error("GLM step Y/n_y = {y_step} must be a positive integer multiple of the grid step {grid_step}")]
    QuadratureStep { y_step: f64, grid_step: f64 },
    #[error("gluing points must satisfy -L < c_plus <= c <= c_minus < L")]
    GluingPoints,
    #[error("plus/minus reconstructions differ by {sup:e} on the overlap (gate {tolerance:e})")]
    OverlapMismatch { sup: f64, tolerance: f64 },
}

impl InverseError {
    /// True when the input spectral data lies outside the admissible class,
    /// as opposed to a numerical failure of the solver.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            InverseError::Symmetry { .. }
                | InverseError::SigmaAtZero { .. }
                | InverseError::Positivity { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Scattering(#[from] ScatteringError),
    #[error(transparent)]
    Inverse(#[from] InverseError),
    #[error("input potential is not generic: W(q,0) = {w_at_zero:e}, min W(q,i kappa) = {min_w:e}")]
    NotGeneric { w_at_zero: f64, min_w: f64 },
    #[error("evolved potential lost genericity: W(q,0) = {w_at_zero:e}, min W(q,i kappa) = {min_w:e}")]
    GenericityLost { w_at_zero: f64, min_w: f64 },
    #[error("time must be finite and non-negative, got {t}")]
    NegativeTime { t: f64 },
    #[error("spectral integrator blew up at t = {t}: sup|u| grew by {growth:.1}x")]
    BlowUp { t: f64, growth: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("the plane-wave oracle needs k != 0")]
    ZeroWavenumber,
    #[error("Richardson extrapolation diverged: successive estimates {coarse:e} then {fine:e}")]
    ExtrapolationDivergence { coarse: f64, fine: f64 },
}
