//! Run configuration from flags and an optional `key=value` file. Flags win.
//!
//! Recognized file keys: `alpha`, `n`, `k_max`, `points`, `tol`, `out`,
//! `format`, `paper_verbatim_e2`, `overlay`. Lines starting with `#` are
//! comments.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use fracfact::ladder::DEFAULT_MAX_STATE;
use fracfact::spectral::{UniformGrid, DEFAULT_K_MAX, DEFAULT_POINTS};
use fracfact::LevyIndex;

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    Csv,
    Svg,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            "json" => Ok(Format::Json),
            other => Err(CliError::Config(format!(
                "unknown format `{other}` (expected csv, svg or json)"
            ))),
        }
    }
}

/// Per-check pass thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub kernel: f64,
    pub factorization: f64,
    pub closed_form_state: f64,
    pub eigen_identity: f64,
    pub printed_energy: f64,
    pub conventional: f64,
    pub node: f64,
    pub round_trip: f64,
    pub gaussian: f64,
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            kernel: 1e-12,
            factorization: 1e-10,
            closed_form_state: 1e-12,
            eigen_identity: 1e-10,
            printed_energy: 1e-12,
            conventional: 1e-10,
            node: 1e-9,
            round_trip: 1e-10,
            gaussian: 1e-6,
            residual: 1e-5,
        }
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Tolerances {
            kernel: tol,
            factorization: tol,
            closed_form_state: tol,
            eigen_identity: tol,
            printed_energy: tol,
            conventional: tol,
            node: tol,
            round_trip: tol,
            gaussian: tol,
            residual: tol,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub alphas: Vec<LevyIndex>,
    /// Whether `alphas` came from a flag or the config file.
    pub alpha_explicit: bool,
    pub states: Vec<usize>,
    pub grid: UniformGrid,
    pub tolerances: Tolerances,
    pub out_dir: PathBuf,
    /// `None` means the command's own default.
    pub formats: Option<Vec<Format>>,
    pub paper_verbatim_e2: bool,
    pub overlay: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            alphas: [1.2, 1.5, 2.0].map(|a| LevyIndex::new(a).unwrap()).to_vec(),
            alpha_explicit: false,
            states: vec![0, 1, 2],
            grid: UniformGrid::default(),
            tolerances: Tolerances::default(),
            out_dir: PathBuf::from("out"),
            formats: None,
            paper_verbatim_e2: false,
            overlay: false,
        }
    }
}

impl RunConfig {
    pub fn wants(&self, format: Format, default: &[Format]) -> bool {
        match &self.formats {
            Some(f) => f.contains(&format),
            None => default.contains(&format),
        }
    }
}

/// Raw settings as strings or parsed flags, before validation.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub alpha: Option<Vec<f64>>,
    pub n: Option<Vec<usize>>,
    pub k_max: Option<f64>,
    pub points: Option<usize>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Vec<Format>>,
    pub paper_verbatim_e2: Option<bool>,
    pub overlay: Option<bool>,
}

impl Overrides {
    /// Fields set in `other` replace those in `self`.
    pub fn merged_with(mut self, other: Overrides) -> Overrides {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(
            alpha,
            n,
            k_max,
            points,
            tol,
            out,
            format,
            paper_verbatim_e2,
            overlay
        );
        self
    }

    pub fn from_file(path: &Path) -> Result<Overrides> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Overrides::parse_key_values(&text)
    }

    pub fn parse_key_values(text: &str) -> Result<Overrides> {
        let mut o = Overrides::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {}: expected key=value", lineno + 1))
            })?;
            let value = value.trim();
            match key.trim() {
                "alpha" => o.alpha = Some(parse_list(value)?),
                "n" => o.n = Some(parse_list(value)?),
                "k_max" => o.k_max = Some(parse_one(value)?),
                "points" => o.points = Some(parse_one(value)?),
                "tol" => o.tol = Some(parse_one(value)?),
                "out" => o.out = Some(PathBuf::from(value)),
                "format" => o.format = Some(parse_list(value)?),
                "paper_verbatim_e2" => o.paper_verbatim_e2 = Some(parse_one(value)?),
                "overlay" => o.overlay = Some(parse_one(value)?),
                other => {
                    return Err(CliError::Config(format!(
                        "line {}: unknown key `{other}`",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(o)
    }

    pub fn into_config(self) -> Result<RunConfig> {
        let mut c = RunConfig::default();
        if let Some(alphas) = self.alpha {
            if alphas.is_empty() {
                return Err(CliError::Config("empty α list".into()));
            }
            c.alphas = alphas
                .into_iter()
                .map(|a| {
                    LevyIndex::new(a)
                        .map_err(|_| CliError::Config(format!("α = {a} is outside 1 < α ≤ 2")))
                })
                .collect::<Result<_>>()?;
            c.alpha_explicit = true;
        }
        if let Some(n) = self.n {
            if n.is_empty() {
                return Err(CliError::Config("empty n list".into()));
            }
            if let Some(&bad) = n.iter().find(|&&n| n > DEFAULT_MAX_STATE) {
                return Err(CliError::Config(format!(
                    "n = {bad} exceeds the maximum excitation level {DEFAULT_MAX_STATE}"
                )));
            }
            c.states = n;
        }
        let k_max = self.k_max.unwrap_or(DEFAULT_K_MAX);
        let points = self.points.unwrap_or(DEFAULT_POINTS);
        c.grid = UniformGrid::new(k_max, points).map_err(|e| CliError::Config(e.to_string()))?;
        if let Some(tol) = self.tol {
            if !(tol >= 0.0 && tol.is_finite()) {
                return Err(CliError::Config(format!(
                    "tolerance must be a finite number ≥ 0, got {tol}"
                )));
            }
            c.tolerances = Tolerances::uniform(tol);
        }
        if let Some(out) = self.out {
            c.out_dir = out;
        }
        c.formats = self.format;
        c.paper_verbatim_e2 = self.paper_verbatim_e2.unwrap_or(false);
        c.overlay = self.overlay.unwrap_or(false);
        Ok(c)
    }
}

fn parse_one<T: FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Config(format!("cannot parse `{s}`")))
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(parse_one)
        .collect()
}
