use std::path::Path;

use clap::ValueEnum;
use kdvscatter::corpus::generic_corpus;
use kdvscatter::direct::{
    action_density, check_generic, quadratic_trace, reflection_transmission, scattering_data, smoothing_part,
};
use kdvscatter::flows::smoothing_report;
use kdvscatter::grid::{fourier_minus, Potential};
use kdvscatter::inverse::inverse_scattering_detailed;
use kdvscatter::tail::{tail_slope, TAIL_BINS};
use rayon::prelude::*;

use crate::commands::{load_potential, Outcome};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::schema::{emit, to_json, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// W(k)W(-k) = 4k² + S(k)S(-k) and conjugate symmetry.
    Identities,
    /// |t|² + |r±|² = 1 away from k = 0.
    Unitarity,
    /// Inverse after direct scattering, and the plus/minus overlap.
    Roundtrip,
    /// Quadratic scaling of A and its tail slope against the datum's.
    Smoothing,
    /// Sign and parity of I, and the trace 4∫kI dk = ∫q².
    Actions,
    /// Scattering flow against the pseudospectral reference.
    Flow,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Unitarity => "unitarity",
            Suite::Roundtrip => "roundtrip",
            Suite::Smoothing => "smoothing",
            Suite::Actions => "actions",
            Suite::Flow => "flow",
        }
    }
}

/// Named potentials from a directory of potential files (sorted by file
/// name), or the built-in smooth corpus on the configured grid.
pub fn load_corpus(dir: Option<&Path>, config: &RunConfig) -> Result<Vec<(String, Potential<f64>)>, CliError> {
    let Some(dir) = dir else {
        let grid = config.spatial_grid()?;
        return generic_corpus()
            .iter()
            .map(|p| Ok((p.name.to_owned(), p.sample(grid)?)))
            .collect();
    };
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::input(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::input(format!("{}: no potential files in corpus", dir.display())));
    }
    paths
        .iter()
        .map(|p| {
            let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            Ok((name, load_potential(p)?))
        })
        .collect()
}

struct Check<'a> {
    report: Report,
    failures: Vec<String>,
    config: &'a RunConfig,
}

impl Check<'_> {
    fn gate(&mut self, name: String, value: f64, tolerance: f64) {
        self.report.push(name.clone(), value);
        if !(value <= tolerance) {
            self.failures.push(format!("{name} = {value:e} exceeds {tolerance:e}"));
        }
    }
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mx, my) = points.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0 / n, b + p.1 / n));
    let cov: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let var: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    cov / var
}

const SCALINGS: [f64; 3] = [0.1, 0.03, 0.01];

fn run_one(suite: Suite, name: &str, q: &Potential<f64>, t: f64, check: &mut Check<'_>) -> Result<(), CliError> {
    let config = check.config;
    let ks = config.spectral_grid()?;
    let key = |what: &str| format!("{name}/{what}");
    match suite {
        Suite::Identities => {
            let sd = scattering_data(q, &ks)?;
            check.gate(key("ws_identity"), sd.identity_residual(), config.tolerance);
            check.gate(key("conjugate_symmetry"), sd.symmetry_residual(), config.tolerance);
        }
        Suite::Unitarity => {
            let rt = reflection_transmission(&scattering_data(q, &ks)?)?;
            check.gate(key("unitarity"), rt.unitarity_residual(), config.tolerance);
        }
        Suite::Roundtrip => {
            let sd = scattering_data(q, &ks)?;
            let rec = inverse_scattering_detailed(&sd.s, q.grid(), &config.inverse())?;
            check.gate(key("roundtrip_l2"), rec.potential.l2_distance(q)?, config.roundtrip_tolerance);
            check.gate(key("overlap_mismatch"), rec.overlap_mismatch, config.overlap_tolerance);
        }
        Suite::Smoothing => {
            let mut ratios = Vec::new();
            let mut fit = Vec::new();
            for eps in SCALINGS {
                let qe = q.scaled(eps);
                let norm = smoothing_part(&qe, &scattering_data(&qe, &ks)?)?.l2_norm();
                ratios.push(norm / (eps * eps));
                fit.push((eps.ln(), norm.ln()));
            }
            let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &r| (l.min(r), h.max(r)));
            check.gate(key("a_ratio_spread"), hi / lo - 1.0, 0.05);
            check.gate(key("a_scaling_exponent_error"), (slope(&fit) - 2.0).abs(), 0.1);

            let sd = scattering_data(q, &ks)?;
            let a = smoothing_part(q, &sd)?;
            let f = fourier_minus(q, &ks)?;
            let nodes = ks.nodes();
            let (lo, hi) = (4.0f64.min(ks.k_max() / 2.0), ks.k_max());
            let mag = |v: &[num_complex::Complex64]| v.iter().map(|z| z.norm()).collect::<Vec<_>>();
            let slope_a = tail_slope(&nodes, &mag(a.values()), lo, hi, TAIL_BINS);
            let slope_q = tail_slope(&nodes, &mag(f.values()), lo, hi, TAIL_BINS);
            check.report.push(key("tail_window_lo"), lo);
            check.report.push(key("tail_window_hi"), hi);
            check.report.push(key("tail_slope_a"), slope_a);
            check.report.push(key("tail_slope_fourier"), slope_q);
            check.report.push(key("tail_gap"), slope_a.zip(slope_q).map(|(a, f)| a - f));
        }
        Suite::Actions => {
            let sd = scattering_data(q, &ks)?;
            let density = action_density(&sd);
            // I carries a factor k: non-negative for k ≥ 0, odd overall.
            let negative = ks.nonnegative().fold(0.0f64, |m, j| m.max(-density[j]));
            let oddness = (0..ks.len()).fold(0.0f64, |m, j| m.max((density[j] + density[ks.mirror(j)]).abs()));
            check.gate(key("negative_part"), negative, 0.0);
            check.gate(key("oddness"), oddness, config.tolerance);
            check.gate(key("at_zero"), density[ks.zero_index()].abs(), 0.0);
            // The trace holds only without bound states.
            let cert = check_generic(q, config.kappa_max)?;
            check.report.push(key("generic"), cert.passed);
            let trace_error = (quadratic_trace(&sd) - q.l2_norm().powi(2)).abs();
            if cert.passed {
                check.gate(key("trace_error"), trace_error, config.tolerance);
            } else {
                check.report.push(key("trace_error"), trace_error);
            }
        }
        Suite::Flow => {
            let r = smoothing_report(q, t, &ks, &config.flow())?;
            check.gate(key("l2_diff_kdv_spectral"), r.l2_diff_kdv_spectral, config.flow_tolerance);
            check.gate(key("action_drift"), r.action_drift, config.flow_tolerance);
            check.gate(key("phase_residual"), r.phase_residual, config.phase_tolerance);
            check.gate(key("decomposition_mismatch"), r.decomposition_mismatch, config.decomposition_tolerance);
            check.report.push(key("h_n1_norm_difference"), r.h_n1_norm_difference);
            check.report.push(key("tail_gap"), r.tail_gap());
        }
    }
    Ok(())
}

pub fn verify(suite: Suite, corpus: Option<&Path>, t: f64, output: Option<&Path>, config: &RunConfig) -> Outcome {
    let potentials = load_corpus(corpus, config)?;
    // Potentials run independently; results are merged in corpus order.
    let parts: Vec<Result<Check<'_>, CliError>> = potentials
        .par_iter()
        .map(|(name, q)| {
            let mut check = Check {
                report: Report::default(),
                failures: Vec::new(),
                config,
            };
            run_one(suite, name, q, t, &mut check)?;
            Ok(check)
        })
        .collect();
    let mut report = Report::default();
    report.push("suite", suite.name());
    report.push("potentials", potentials.len());
    if suite == Suite::Flow {
        report.push("t", t);
    }
    let mut failures = Vec::new();
    let mut merged = Report::default();
    for part in parts {
        let part = part?;
        merged.extend(part.report);
        failures.extend(part.failures);
    }
    report.push("passed", failures.is_empty());
    report.extend(merged);
    emit(&to_json(&report)?, output)?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Invariant(failures.join("; ")))
    }
}
