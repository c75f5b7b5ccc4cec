//! Direct and inverse scattering for the Schrödinger operator
//! `L(q) = -∂ₓ² + q` on the line, for generic potentials without bound
//! states, and the KdV flow obtained by rotating the scattering data.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod corpus;
pub mod direct;
pub mod error;
pub mod flows;
pub mod grid;
pub mod hilbert;
pub mod inverse;
pub mod jost;
pub mod oracles;
mod periodic;
pub mod scalar;
pub mod tail;

pub use error::{Edge, FlowError, GridError, InverseError, JostError, OracleError, ScatteringError};
pub use scalar::{Cplx, Real};

/// `f64` instantiations of the generic types.
pub type PotentialF64 = grid::Potential<f64>;
pub type SpatialGridF64 = grid::SpatialGrid<f64>;
pub type SpectralGridF64 = grid::SpectralGrid<f64>;
pub type SpectralFieldF64 = grid::SpectralField<f64>;
pub type ScatteringDataF64 = direct::ScatteringData<f64>;
pub type ReconstructionF64 = inverse::Reconstruction<f64>;
pub type FlowReportF64 = flows::FlowReport<f64>;
