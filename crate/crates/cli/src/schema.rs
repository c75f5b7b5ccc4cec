//! On-disk formats. Complex numbers are `[re, im]` pairs; every float is
//! written with 17 significant digits so that reruns are byte-identical.

use std::io;
use std::path::Path;

use kdvscatter::direct::GenericityCertificate;
use kdvscatter::grid::{Interpolation, Potential, SpatialGrid, SpectralField, SpectralGrid};
use num_complex::Complex64;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridSpec {
    #[serde(rename = "L")]
    pub half_width: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InterpolationTag {
    BandLimited,
    PiecewiseLinear,
}

impl From<InterpolationTag> for Interpolation {
    fn from(t: InterpolationTag) -> Self {
        match t {
            InterpolationTag::BandLimited => Interpolation::BandLimited,
            InterpolationTag::PiecewiseLinear => Interpolation::PiecewiseLinear,
        }
    }
}

impl From<Interpolation> for InterpolationTag {
    fn from(i: Interpolation) -> Self {
        match i {
            Interpolation::BandLimited => InterpolationTag::BandLimited,
            Interpolation::PiecewiseLinear => InterpolationTag::PiecewiseLinear,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PotentialFile {
    pub grid: GridSpec,
    pub values: Vec<f64>,
    #[serde(rename = "N")]
    pub sobolev_order: u32,
    #[serde(rename = "M")]
    pub weight_order: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interpolation: Option<InterpolationTag>,
    /// Diagnostics of the command that produced the file; ignored on input.
    #[serde(default, skip_deserializing, skip_serializing_if = "Report::is_empty")]
    pub report: Report,
}

impl PotentialFile {
    pub fn from_potential(q: &Potential<f64>, report: Report) -> Self {
        Self {
            grid: GridSpec {
                half_width: q.grid().half_width(),
                n: q.grid().len(),
            },
            values: q.values().to_vec(),
            sobolev_order: q.sobolev_order(),
            weight_order: q.weight_order(),
            interpolation: Some(q.interpolation().into()),
            report,
        }
    }

    pub fn to_potential(&self) -> Result<Potential<f64>, CliError> {
        let grid = SpatialGrid::new(self.grid.half_width, self.grid.n)?;
        let q = Potential::new(grid, self.values.clone(), self.sobolev_order, self.weight_order)?;
        Ok(q.with_interpolation(self.interpolation.map(Into::into).unwrap_or_default()))
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct KGridSpec {
    pub k_max: f64,
    pub n_k: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateFile {
    pub w_at_zero: f64,
    pub min_w_on_axis: f64,
    pub max_w_on_axis: f64,
    pub kappa_max: f64,
    pub sign_change_at: Option<f64>,
    pub passed: bool,
}

impl From<&GenericityCertificate<f64>> for CertificateFile {
    fn from(c: &GenericityCertificate<f64>) -> Self {
        Self {
            w_at_zero: c.w_at_zero,
            min_w_on_axis: c.min_w_on_axis,
            max_w_on_axis: c.max_w_on_axis,
            kappa_max: c.kappa_max,
            sign_change_at: c.sign_change_at,
            passed: c.passed,
        }
    }
}

pub type Pairs = Vec<[f64; 2]>;

pub fn pairs(field: &SpectralField<f64>) -> Pairs {
    field.values().iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScatteringFile {
    pub kgrid: KGridSpec,
    #[serde(rename = "S")]
    pub s: Pairs,
    #[serde(rename = "W", default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Pairs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_plus: Option<Pairs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_minus: Option<Pairs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Pairs>,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Pairs>,
    #[serde(rename = "I", default, skip_serializing_if = "Option::is_none")]
    pub i: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateFile>,
    #[serde(default, skip_deserializing, skip_serializing_if = "Report::is_empty")]
    pub report: Report,
}

impl ScatteringFile {
    pub fn spectral_grid(&self) -> Result<SpectralGrid<f64>, CliError> {
        Ok(SpectralGrid::new(self.kgrid.k_max, self.kgrid.n_k)?)
    }

    pub fn field(&self, pairs: &Pairs, what: &str) -> Result<SpectralField<f64>, CliError> {
        let ks = self.spectral_grid()?;
        let values: Vec<Complex64> = pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        SpectralField::new(ks, values).map_err(|e| CliError::input(format!("{what}: {e}")))
    }
}

/// Ordered name/value pairs, written as a flat JSON object.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report(Vec<(String, Entry)>);

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Entry {
    Count(u64),
    Number(f64),
    Flag(bool),
    Text(String),
    Missing(Option<f64>),
}

impl From<f64> for Entry {
    fn from(v: f64) -> Self {
        Entry::Number(v)
    }
}

impl From<usize> for Entry {
    fn from(v: usize) -> Self {
        Entry::Count(v as u64)
    }
}

impl From<bool> for Entry {
    fn from(v: bool) -> Self {
        Entry::Flag(v)
    }
}

impl From<&str> for Entry {
    fn from(v: &str) -> Self {
        Entry::Text(v.to_owned())
    }
}

impl From<Option<f64>> for Entry {
    fn from(v: Option<f64>) -> Self {
        match v {
            Some(x) => Entry::Number(x),
            None => Entry::Missing(None),
        }
    }
}

impl Report {
    pub fn push(&mut self, name: impl Into<String>, value: impl Into<Entry>) {
        self.0.push((name.into(), value.into()));
    }

    pub fn extend(&mut self, other: Report) {
        self.0.extend(other.0);
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Serialize for Report {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// Compact JSON with `{:.16e}` floats; non-finite values become `null`.
struct FixedDigits;

impl serde_json::ser::Formatter for FixedDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedDigits);
    value
        .serialize(&mut ser)
        .map_err(|e| CliError::input(format!("serialization failed: {e}")))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| CliError::input(e.to_string()))
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// Writes `text` to `path`, or to stdout without one.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::input(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::input(format!("stdout: {e}")))
        }
    }
}
