//! Result files: scan CSV, its JSON mirror, and the optimizer result JSON.

use std::fmt::Write as _;
use std::path::Path;

use catbell_core::optimize::OptimizationResult;
use catbell_core::scan::ScanRecord;
use catbell_core::{make_cat_state, CatStateParams, ComplexAmplitude, MeasurementSettings};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const CSV_HEADER: &str = "alpha,omega,E_zw,E_zpw,E_zwp,E_zpwp,chsh,classification";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        match text.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            t => Err(format!("unknown format `{t}`, expected csv or json")),
        }
    }
}

/// 17 significant digits in scientific notation.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn scan_csv(records: &[ScanRecord]) -> String {
    let mut out = String::with_capacity(160 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let fields = [r.alpha, r.omega, r.e_zw, r.e_zpw, r.e_zwp, r.e_zpwp, r.chsh];
        for x in fields {
            out.push_str(&num(x));
            out.push(',');
        }
        let _ = writeln!(out, "{}", r.classification.as_str());
    }
    out
}

#[derive(Serialize)]
struct JsonRecord<'a> {
    alpha: f64,
    omega: f64,
    #[serde(rename = "E_zw")]
    e_zw: f64,
    #[serde(rename = "E_zpw")]
    e_zpw: f64,
    #[serde(rename = "E_zwp")]
    e_zwp: f64,
    #[serde(rename = "E_zpwp")]
    e_zpwp: f64,
    chsh: f64,
    classification: &'a str,
}

pub fn scan_json(records: &[ScanRecord]) -> String {
    let rows: Vec<_> = records
        .iter()
        .map(|r| JsonRecord {
            alpha: r.alpha,
            omega: r.omega,
            e_zw: r.e_zw,
            e_zpw: r.e_zpw,
            e_zwp: r.e_zwp,
            e_zpwp: r.e_zpwp,
            chsh: r.chsh,
            classification: r.classification.as_str(),
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("records serialize");
    s.push('\n');
    s
}

type Pair = [f64; 2];

fn pair(a: ComplexAmplitude) -> Pair {
    [a.re(), a.im()]
}

fn amplitude(p: Pair) -> std::result::Result<ComplexAmplitude, String> {
    ComplexAmplitude::new(p[0], p[1]).map_err(|e| e.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SettingsFile {
    pub z: Pair,
    #[serde(rename = "z'")]
    pub z_prime: Pair,
    pub w: Pair,
    #[serde(rename = "w'")]
    pub w_prime: Pair,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub sigma: Pair,
    pub eta: Pair,
    pub phi: f64,
}

/// Optimizer result as stored on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub best_value: f64,
    pub settings: SettingsFile,
    pub state: StateFile,
    pub evaluations_used: usize,
    pub seed: u64,
}

impl ResultFile {
    pub fn from_result(r: &OptimizationResult) -> Self {
        let s = &r.best_settings;
        let st = &r.best_state;
        Self {
            best_value: r.best_value,
            settings: SettingsFile {
                z: pair(s.z),
                z_prime: pair(s.z_prime),
                w: pair(s.w),
                w_prime: pair(s.w_prime),
            },
            state: StateFile {
                sigma: pair(st.sigma()),
                eta: pair(st.eta()),
                phi: st.phi(),
            },
            evaluations_used: r.evaluations_used,
            seed: r.seed,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("result serializes");
        s.push('\n');
        s
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = read(path)?;
        serde_json::from_str(&text).map_err(|e| CliError::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn settings(&self) -> std::result::Result<MeasurementSettings, String> {
        let s = &self.settings;
        Ok(MeasurementSettings::new(
            amplitude(s.z)?,
            amplitude(s.z_prime)?,
            amplitude(s.w)?,
            amplitude(s.w_prime)?,
        ))
    }

    pub fn state(&self) -> std::result::Result<CatStateParams, catbell_core::Error> {
        let s = &self.state;
        let sigma = ComplexAmplitude::new(s.sigma[0], s.sigma[1])?;
        let eta = ComplexAmplitude::new(s.eta[0], s.eta[1])?;
        make_cat_state(sigma, eta, s.phi)
    }
}

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
