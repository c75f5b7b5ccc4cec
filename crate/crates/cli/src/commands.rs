use std::path::Path;

use clap::ValueEnum;
use kdvscatter::corpus::by_name;
use kdvscatter::direct::{
    action_density, check_generic, quadratic_trace, reflection_transmission, scattering_data, smoothing_part,
};
use kdvscatter::flows::{airy_flow_periodic, kdv_flow_scattering, kdv_flow_spectral};
use kdvscatter::grid::Potential;
use kdvscatter::inverse::inverse_scattering_detailed;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::schema::{emit, pairs, read_json, to_json, CertificateFile, KGridSpec, PotentialFile, Report, ScatteringFile};

/// Outcome of a command that produced its output: `Err` only when an
/// invariant gate failed after the file was written.
pub type Outcome = Result<(), CliError>;

pub fn load_potential(path: &Path) -> Result<Potential<f64>, CliError> {
    read_json::<PotentialFile>(path)?.to_potential()
}

fn gate(report: &mut Report, name: &str, value: f64, tolerance: f64, failures: &mut Vec<String>) {
    report.push(name, value);
    if !(value <= tolerance) {
        failures.push(format!("{name} = {value:e} exceeds {tolerance:e}"));
    }
}

fn finish(failures: Vec<String>) -> Outcome {
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Invariant(failures.join("; ")))
    }
}

pub fn scatter(input: &Path, output: Option<&Path>, allow_nongeneric: bool, config: &RunConfig) -> Outcome {
    let q = load_potential(input)?;
    let ks = config.spectral_grid()?;
    let cert = check_generic(&q, config.kappa_max)?;
    if !cert.passed && !allow_nongeneric {
        return Err(CliError::Domain(format!(
            "potential is not generic: W(q,0) = {:e}, min W(q,iκ) = {:e}{}",
            cert.w_at_zero,
            cert.min_w_on_axis,
            cert.sign_change_at.map(|k| format!(", sign change at κ = {k}")).unwrap_or_default()
        )));
    }
    let sd = scattering_data(&q, &ks)?;
    let rt = reflection_transmission(&sd)?;
    let a = smoothing_part(&q, &sd)?;

    let mut report = Report::default();
    let mut failures = Vec::new();
    gate(&mut report, "ws_identity", sd.identity_residual(), config.tolerance, &mut failures);
    gate(&mut report, "conjugate_symmetry", sd.symmetry_residual(), config.tolerance, &mut failures);
    gate(&mut report, "unitarity", rt.unitarity_residual(), config.tolerance, &mut failures);
    report.push("l2_norm_squared", q.l2_norm().powi(2));
    report.push("action_trace", quadratic_trace(&sd));

    let file = ScatteringFile {
        kgrid: KGridSpec {
            k_max: config.k_max,
            n_k: config.n_k,
        },
        s: pairs(&sd.s),
        w: Some(pairs(&sd.w)),
        r_plus: Some(pairs(&rt.r_plus)),
        r_minus: Some(pairs(&rt.r_minus)),
        t: Some(pairs(&rt.t)),
        a: Some(pairs(&a)),
        i: Some(action_density(&sd)),
        certificate: Some(CertificateFile::from(&cert)),
        report,
    };
    emit(&to_json(&file)?, output)?;
    finish(failures)
}

pub fn invert(input: &Path, output: Option<&Path>, config: &RunConfig) -> Outcome {
    let file: ScatteringFile = read_json(input)?;
    let sigma = file.field(&file.s, "S")?;
    let grid = config.spatial_grid()?;
    let rec = inverse_scattering_detailed(&sigma, &grid, &config.inverse())?;
    let mut report = Report::default();
    report.push("overlap_mismatch", rec.overlap_mismatch);
    report.push("overlap_tolerance", config.overlap_tolerance);
    emit(&to_json(&PotentialFile::from_potential(&rec.potential, report))?, output)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Rotation of the scattering data followed by inverse scattering.
    Scattering,
    /// Integrating-factor RK4 on a padded torus.
    Spectral,
    /// Exact linear propagator on a padded torus.
    Airy,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Scattering => "scattering",
            Method::Spectral => "spectral",
            Method::Airy => "airy",
        }
    }
}

/// `q` on a torus `padding` times longer, evolved by `step` and cut back.
fn on_padded_torus(
    q: &Potential<f64>,
    padding: usize,
    step: impl Fn(&Potential<f64>) -> Result<Potential<f64>, CliError>,
) -> Result<(Potential<f64>, Potential<f64>), CliError> {
    let wide = step(&q.padded(padding)?)?;
    Ok((wide.restricted(q.grid())?, wide))
}

pub fn evolve(input: &Path, t: f64, method: Method, output: Option<&Path>, config: &RunConfig) -> Outcome {
    let q = load_potential(input)?;
    let flow = config.flow();
    let spectral = |p: &Potential<f64>| Ok(kdv_flow_spectral(p, t, config.dt)?);
    let mut report = Report::default();
    let mut failures = Vec::new();
    report.push("method", method.name());
    report.push("t", t);
    report.push("l2_norm_in", q.l2_norm());
    let evolved = match method {
        Method::Scattering => {
            let ks = config.spectral_grid()?;
            let evolved = kdv_flow_scattering(&q, t, &ks, &flow)?;
            let (reference, _) = on_padded_torus(&q, config.reference_padding, spectral)?;
            gate(
                &mut report,
                "l2_diff_vs_spectral",
                evolved.l2_distance(&reference)?,
                config.flow_tolerance,
                &mut failures,
            );
            evolved
        }
        Method::Spectral => on_padded_torus(&q, config.reference_padding, spectral)?.0,
        Method::Airy => {
            let (evolved, wide) =
                on_padded_torus(&q, config.reference_padding, |p| Ok(airy_flow_periodic(p, t)?))?;
            // Conserved exactly on the torus; the window can lose some to
            // radiation that has left it.
            report.push("l2_norm_torus", wide.l2_norm());
            evolved
        }
    };
    report.push("l2_norm_out", evolved.l2_norm());
    emit(&to_json(&PotentialFile::from_potential(&evolved, report))?, output)?;
    finish(failures)
}

/// Checks a scattering or potential file without computing anything new.
pub fn validate(input: &Path, output: Option<&Path>, config: &RunConfig) -> Outcome {
    let value: serde_json::Value = read_json(input)?;
    let mut report = Report::default();
    let mut failures = Vec::new();
    if value.get("kgrid").is_some() {
        let file: ScatteringFile =
            serde_json::from_value(value).map_err(|e| CliError::input(format!("{}: {e}", input.display())))?;
        report.push("kind", "scattering");
        let s = file.field(&file.s, "S")?;
        gate(&mut report, "s_symmetry", s.symmetry_residual(), config.tolerance, &mut failures);
        if let Some(w) = &file.w {
            let sd = kdvscatter::direct::ScatteringData {
                s,
                w: file.field(w, "W")?,
            };
            gate(&mut report, "ws_identity", sd.identity_residual(), config.tolerance, &mut failures);
            gate(&mut report, "w_symmetry", sd.w.symmetry_residual(), config.tolerance, &mut failures);
        }
        if let (Some(rp), Some(rm), Some(tt)) = (&file.r_plus, &file.r_minus, &file.t) {
            let rt = kdvscatter::direct::ReflectionTransmission {
                r_plus: file.field(rp, "r_plus")?,
                r_minus: file.field(rm, "r_minus")?,
                t: file.field(tt, "t")?,
            };
            gate(&mut report, "unitarity", rt.unitarity_residual(), config.tolerance, &mut failures);
        }
    } else {
        let file: PotentialFile =
            serde_json::from_value(value).map_err(|e| CliError::input(format!("{}: {e}", input.display())))?;
        report.push("kind", "potential");
        let q = file.to_potential()?;
        let cert = check_generic(&q, config.kappa_max)?;
        report.push("w_at_zero", cert.w_at_zero);
        report.push("generic", cert.passed);
    }
    report.push("passed", failures.is_empty());
    emit(&to_json(&report)?, output)?;
    finish(failures)
}

/// Writes a built-in profile sampled on the configured grid.
pub fn sample(name: &str, output: Option<&Path>, config: &RunConfig) -> Outcome {
    let profile = by_name(name).ok_or_else(|| CliError::input(format!("unknown profile {name:?}")))?;
    let q = profile.sample(config.spatial_grid()?)?;
    emit(&to_json(&PotentialFile::from_potential(&q, Report::default()))?, output)
}
