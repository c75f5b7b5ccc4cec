use kdvscatter::{FlowError, GridError, InverseError, JostError, ScatteringError};
use thiserror::Error;

/// A failed command, classified by the exit code it maps to.
#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or malformed input, or an invalid configuration (exit 2).
    #[error("input error: {0}")]
    Input(String),
    /// The input is outside the admissible class (exit 3).
    #[error("domain check failed: {0}")]
    Domain(String),
    /// A computed invariant exceeded its gate (exit 4).
    #[error("numerical invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }

    pub fn input(msg: impl std::fmt::Display) -> Self {
        CliError::Input(msg.to_string())
    }
}

impl From<GridError> for CliError {
    fn from(e: GridError) -> Self {
        match e {
            // A potential that does not decay is not in the admissible class.
            GridError::BoundaryDecay { .. } => CliError::Domain(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<JostError> for CliError {
    fn from(e: JostError) -> Self {
        match e {
            JostError::Grid(g) => g.into(),
            other => CliError::Invariant(other.to_string()),
        }
    }
}

impl From<ScatteringError> for CliError {
    fn from(e: ScatteringError) -> Self {
        match e {
            ScatteringError::Grid(g) => g.into(),
            ScatteringError::Jost(j) => j.into(),
            ScatteringError::VanishingWronskian { .. } => CliError::Domain(e.to_string()),
            ScatteringError::UnsupportedBornOrder { .. } => CliError::Input(e.to_string()),
        }
    }
}

impl From<InverseError> for CliError {
    fn from(e: InverseError) -> Self {
        if e.is_domain() {
            return CliError::Domain(format!("scattering data outside the admissible class: {e}"));
        }
        match e {
            InverseError::Grid(g) => g.into(),
            InverseError::Scattering(s) => s.into(),
            InverseError::GluingPoints | InverseError::QuadratureStep { .. } => CliError::Input(e.to_string()),
            other => CliError::Invariant(other.to_string()),
        }
    }
}

impl From<FlowError> for CliError {
    fn from(e: FlowError) -> Self {
        match e {
            FlowError::Grid(g) => g.into(),
            FlowError::Scattering(s) => s.into(),
            FlowError::Inverse(i) => i.into(),
            FlowError::NotGeneric { .. } => CliError::Domain(e.to_string()),
            FlowError::NegativeTime { .. } => CliError::Input(e.to_string()),
            FlowError::GenericityLost { .. } | FlowError::BlowUp { .. } => CliError::Invariant(e.to_string()),
        }
    }
}
