use clap::Args;
use kdvscatter::direct::ScatteringConfig;
use kdvscatter::flows::FlowConfig;
use kdvscatter::grid::{SpatialGrid, SpectralGrid};
use kdvscatter::inverse::InverseConfig;

use crate::error::CliError;

/// Grids, gluing points and gates shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Half-width of the spatial window [-L, L] for reconstructions.
    #[arg(long = "L", global = true, default_value_t = 20.0)]
    pub half_width: f64,
    /// Number of spatial nodes (power of two).
    #[arg(long, global = true, default_value_t = 2048)]
    pub n: usize,
    #[arg(long, global = true, default_value_t = 16.0)]
    pub k_max: f64,
    /// Number of spectral intervals (power of two).
    #[arg(long, global = true, default_value_t = 1024)]
    pub n_k: usize,
    /// GLM truncation Y; defaults to 2L.
    #[arg(long = "Y", global = true)]
    pub y_max: Option<f64>,
    #[arg(long, global = true, default_value_t = 512)]
    pub n_y: usize,
    /// Time step of the pseudospectral reference.
    #[arg(long, global = true, default_value_t = 1e-4)]
    pub dt: f64,
    /// Upper end of the imaginary-axis genericity scan.
    #[arg(long, global = true, default_value_t = 10.0)]
    pub kappa_max: f64,
    #[arg(long, global = true, default_value_t = -2.0, allow_hyphen_values = true)]
    pub c_plus: f64,
    #[arg(long, global = true, default_value_t = 0.0, allow_hyphen_values = true)]
    pub c: f64,
    #[arg(long, global = true, default_value_t = 2.0, allow_hyphen_values = true)]
    pub c_minus: f64,
    /// Gate for pointwise identities (W&S, symmetry, unitarity, traces).
    #[arg(long, global = true, default_value_t = 1e-7)]
    pub tolerance: f64,
    /// Sup-norm gate on the plus/minus disagreement over [c_plus, c_minus].
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub overlap_tolerance: f64,
    /// L² gate on inverse-after-direct roundtrips.
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub roundtrip_tolerance: f64,
    /// L² gate between flow methods, and on action drift.
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub flow_tolerance: f64,
    /// Gate on the phase residual of the rotated data (radians).
    #[arg(long, global = true, default_value_t = 1e-2)]
    pub phase_tolerance: f64,
    /// L² gate between the two evaluations of U_KdV - U_Airy.
    #[arg(long, global = true, default_value_t = 1e-4)]
    pub decomposition_tolerance: f64,
    /// Edge-decay threshold accepted for evolved potentials.
    #[arg(long, global = true, default_value_t = 1e-4)]
    pub output_decay: f64,
    /// Scattering flows reconstruct on a window this many times wider.
    #[arg(long, global = true, default_value_t = 2)]
    pub reconstruction_padding: usize,
    /// Periodic references run on a torus this many times longer.
    #[arg(long, global = true, default_value_t = 16)]
    pub reference_padding: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        use clap::Parser;
        #[derive(Parser)]
        struct Wrapper {
            #[command(flatten)]
            config: RunConfig,
        }
        Wrapper::parse_from(["kdvscatter"]).config
    }
}

fn positive(what: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::input(format!("{what} must be positive and finite, got {v}")))
    }
}

fn power_of_two(what: &str, v: usize) -> Result<(), CliError> {
    if v >= 2 && v.is_power_of_two() {
        Ok(())
    } else {
        Err(CliError::input(format!("{what} must be a power of two, got {v}")))
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        positive("L", self.half_width)?;
        positive("k_max", self.k_max)?;
        positive("dt", self.dt)?;
        positive("kappa_max", self.kappa_max)?;
        for (what, v) in [
            ("tolerance", self.tolerance),
            ("overlap_tolerance", self.overlap_tolerance),
            ("roundtrip_tolerance", self.roundtrip_tolerance),
            ("flow_tolerance", self.flow_tolerance),
            ("phase_tolerance", self.phase_tolerance),
            ("decomposition_tolerance", self.decomposition_tolerance),
            ("output_decay", self.output_decay),
        ] {
            positive(what, v)?;
        }
        if let Some(y) = self.y_max {
            positive("Y", y)?;
        }
        power_of_two("n", self.n)?;
        power_of_two("n_k", self.n_k)?;
        if self.n_y == 0 {
            return Err(CliError::input("n_y must be positive"));
        }
        for (what, v) in [
            ("reconstruction_padding", self.reconstruction_padding),
            ("reference_padding", self.reference_padding),
        ] {
            if !v.is_power_of_two() {
                return Err(CliError::input(format!("{what} must be a power of two, got {v}")));
            }
        }
        if !(self.c_plus <= self.c && self.c <= self.c_minus) {
            return Err(CliError::input(format!(
                "gluing points must satisfy c_plus <= c <= c_minus, got {} {} {}",
                self.c_plus, self.c, self.c_minus
            )));
        }
        Ok(())
    }

    pub fn spatial_grid(&self) -> Result<SpatialGrid<f64>, CliError> {
        Ok(SpatialGrid::new(self.half_width, self.n)?)
    }

    pub fn spectral_grid(&self) -> Result<SpectralGrid<f64>, CliError> {
        Ok(SpectralGrid::new(self.k_max, self.n_k)?)
    }

    pub fn inverse(&self) -> InverseConfig {
        InverseConfig {
            y_max: self.y_max,
            n_y: self.n_y,
            c_plus: self.c_plus,
            c: self.c,
            c_minus: self.c_minus,
            overlap_tolerance: self.overlap_tolerance,
            ..InverseConfig::default()
        }
    }

    pub fn flow(&self) -> FlowConfig {
        FlowConfig {
            scattering: ScatteringConfig::default(),
            inverse: self.inverse(),
            kappa_max: self.kappa_max,
            output_decay: self.output_decay,
            dt: self.dt,
            reference_padding: self.reference_padding,
            reconstruction_padding: self.reconstruction_padding,
            ..FlowConfig::default()
        }
    }
}
