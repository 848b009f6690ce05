//! `key = value` run configuration files.
//!
//! One key per line, `#` starts a comment. Lists use `[a, b]`, the SNR grid
//! uses `{start, stop, step}`. Missing keys keep their defaults.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use radar_dse::fxp::OperatorPair;
use radar_dse::radar::{EstimatorMode, Modulation, RadarConfig, TargetModel};
use radar_dse::transform::TwiddleSign;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SnrGrid {
    pub start_db: f64,
    pub stop_db: f64,
    pub step_db: f64,
}

impl Default for SnrGrid {
    fn default() -> Self {
        SnrGrid {
            start_db: -5.0,
            stop_db: 10.0,
            step_db: 1.0,
        }
    }
}

impl SnrGrid {
    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        Ok(radar_dse::dse::snr_grid(self.start_db, self.stop_db, self.step_db)?)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub radar: RadarConfig,
    pub target: TargetModel,
    pub pairs: Vec<OperatorPair>,
    pub snr_grid: SnrGrid,
    pub runs: usize,
    pub seed: u64,
    pub cost_table: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            radar: RadarConfig::default(),
            target: TargetModel::default(),
            pairs: vec![OperatorPair::accurate()],
            snr_grid: SnrGrid::default(),
            runs: 100,
            seed: 0,
            cost_table: None,
            output_dir: None,
        }
    }
}

pub const KEYS: &[&str] = &[
    "carrier_hz",
    "n_subcarriers",
    "n_symbols",
    "subcarrier_spacing_hz",
    "elementary_symbol_s",
    "cp_s",
    "total_symbol_s",
    "modulation",
    "zc_root",
    "n_ifft",
    "estimator_mode",
    "twiddle_sign",
    "range_m",
    "velocity_mps",
    "amplitude",
    "pairs",
    "snr_grid",
    "runs",
    "seed",
    "cost_table",
    "output_dir",
];

pub fn parse_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    let mut seen: Vec<&str> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| CliError::Config {
            line: line_no,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        let Some(&known) = KEYS.iter().find(|k| **k == key) else {
            return Err(CliError::Config {
                line: line_no,
                message: format!("unknown key `{key}`"),
            });
        };
        if seen.contains(&known) {
            return Err(CliError::Config {
                line: line_no,
                message: format!("duplicate key `{key}`"),
            });
        }
        seen.push(known);
        apply(&mut cfg, known, value).map_err(|message| CliError::InvalidValue {
            key: known.to_string(),
            line: line_no,
            message,
        })?;
    }
    cfg.radar.validate()?;
    cfg.target.validate(&cfg.radar)?;
    cfg.snr_grid.points()?;
    Ok(cfg)
}

fn unquote(v: &str) -> &str {
    v.strip_prefix('"').and_then(|s| s.strip_suffix('"')).unwrap_or(v)
}

/// Numbers may use the unicode minus sign.
fn num<T: FromStr>(v: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    let v = unquote(v).replace('\u{2212}', "-");
    v.trim().parse::<T>().map_err(|e| format!("`{v}`: {e}"))
}

fn parsed<T: FromStr>(v: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    unquote(v).parse::<T>().map_err(|e| e.to_string())
}

fn delimited(v: &str, open: char, close: char) -> Result<Vec<&str>, String> {
    let inner = v
        .strip_prefix(open)
        .and_then(|s| s.strip_suffix(close))
        .ok_or_else(|| format!("expected {open}...{close}, got `{v}`"))?;
    Ok(inner.split(',').map(str::trim).filter(|s| !s.is_empty()).collect())
}

fn apply(cfg: &mut RunConfig, key: &str, v: &str) -> Result<(), String> {
    let r = &mut cfg.radar;
    match key {
        "carrier_hz" => r.carrier_hz = num(v)?,
        "n_subcarriers" => r.n_subcarriers = num(v)?,
        "n_symbols" => r.n_symbols = num(v)?,
        "subcarrier_spacing_hz" => r.subcarrier_spacing_hz = num(v)?,
        "elementary_symbol_s" => r.elementary_symbol_s = num(v)?,
        "cp_s" => r.cp_s = num(v)?,
        "total_symbol_s" => r.total_symbol_s = num(v)?,
        "modulation" => r.modulation = parsed::<Modulation>(v)?,
        "zc_root" => r.zc_root = num(v)?,
        "n_ifft" => r.n_ifft = num(v)?,
        "estimator_mode" => r.estimator_mode = parsed::<EstimatorMode>(v)?,
        "twiddle_sign" => r.twiddle_sign = TwiddleSign::from_i32(num(v)?).map_err(|e| e.to_string())?,
        "range_m" => cfg.target.range_m = num(v)?,
        "velocity_mps" => cfg.target.velocity_mps = num(v)?,
        "amplitude" => cfg.target.amplitude = num(v)?,
        "pairs" => {
            let items = delimited(v, '[', ']')?;
            if items.is_empty() {
                return Err("at least one pair is required".into());
            }
            cfg.pairs = items.iter().map(|s| parsed::<OperatorPair>(s)).collect::<Result<_, _>>()?;
        }
        "snr_grid" => {
            let items = delimited(v, '{', '}')?;
            let [start, stop, step] = items[..] else {
                return Err(format!("expected {{start, stop, step}}, got `{v}`"));
            };
            let grid = SnrGrid {
                start_db: num(start)?,
                stop_db: num(stop)?,
                step_db: num(step)?,
            };
            grid.points().map_err(|e| e.to_string())?;
            cfg.snr_grid = grid;
        }
        "runs" => {
            cfg.runs = num(v)?;
            if cfg.runs == 0 {
                return Err("runs must be >= 1".into());
            }
        }
        "seed" => cfg.seed = num(v)?,
        "cost_table" => cfg.cost_table = Some(PathBuf::from(unquote(v))),
        "output_dir" => cfg.output_dir = Some(PathBuf::from(unquote(v))),
        _ => unreachable!("key list and match arms agree"),
    }
    Ok(())
}
