use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fxp::OperatorPair;
use crate::radar::{derive_seed, Pipeline, RadarConfig, TargetModel};
use crate::{Error, Result};

/// Monte Carlo accuracy of one pair at one SNR.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccuracyRow {
    #[serde(rename = "pair")]
    pub pair_name: String,
    pub snr_db: f64,
    pub runs: usize,
    pub mean_range_m: f64,
    pub mean_abs_dev_m: f64,
    /// Population standard deviation of the range estimates.
    pub std_m: f64,
}

/// Evenly spaced SNR grid from `start` to `stop` inclusive.
pub fn snr_grid(start_db: f64, stop_db: f64, step_db: f64) -> Result<Vec<f64>> {
    if !(step_db > 0.0) || !start_db.is_finite() || !stop_db.is_finite() || stop_db < start_db {
        return Err(Error::InvalidParameter(format!(
            "snr grid {{{start_db}, {stop_db}, {step_db}}} needs start <= stop and step > 0"
        )));
    }
    let count = ((stop_db - start_db) / step_db + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start_db + i as f64 * step_db).collect())
}

/// Run every pair at every SNR `runs` times.
///
/// Run `r` at SNR index `s` uses the seed `derive_seed(seed, s, r)` whatever
/// the pair, so pairs are compared on identical frames and noise.
pub fn sweep(
    cfg: &RadarConfig,
    target: &TargetModel,
    pairs: &[OperatorPair],
    snr_grid: &[f64],
    runs: usize,
    seed: u64,
) -> Result<Vec<AccuracyRow>> {
    if runs == 0 {
        return Err(Error::InvalidParameter("runs must be >= 1".into()));
    }
    let mut names = HashSet::new();
    for p in pairs {
        if !names.insert(p.name.as_str()) {
            return Err(Error::InvalidParameter(format!("duplicate pair name `{}`", p.name)));
        }
    }
    let kernels = pairs.iter().map(|p| p.kernel()).collect::<Result<Vec<_>>>()?;
    let pipeline = Pipeline::new(cfg, target)?;

    let mut rows = Vec::with_capacity(pairs.len() * snr_grid.len());
    for (pair, kernel) in pairs.iter().zip(&kernels) {
        for (si, &snr) in snr_grid.iter().enumerate() {
            let estimates = (0..runs)
                .into_par_iter()
                .map(|r| {
                    let s = derive_seed(seed, si as u64, r as u64);
                    pipeline.run(kernel, snr, s).map(|o| o.estimate.range_m)
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(summarize(&pair.name, snr, target.range_m, &estimates));
        }
    }
    Ok(rows)
}

fn summarize(pair: &str, snr_db: f64, truth: f64, estimates: &[f64]) -> AccuracyRow {
    let n = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / n;
    let mad = estimates.iter().map(|e| (e - truth).abs()).sum::<f64>() / n;
    let var = estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / n;
    AccuracyRow {
        pair_name: pair.to_string(),
        snr_db,
        runs: estimates.len(),
        mean_range_m: mean,
        mean_abs_dev_m: mad,
        std_m: var.sqrt(),
    }
}

/// CSV with header `pair,snr_db,runs,mean_range_m,mean_abs_dev_m,std_m`.
pub fn write_rows_csv<W: Write>(rows: &[AccuracyRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows_csv<R: Read>(reader: R) -> Result<Vec<AccuracyRow>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let rows = rdr.deserialize().collect::<std::result::Result<Vec<AccuracyRow>, _>>()?;
    for r in &rows {
        if r.runs == 0 || !(r.mean_abs_dev_m >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "accuracy row for `{}` at {} dB needs runs >= 1 and a non-negative deviation",
                r.pair_name, r.snr_db
            )));
        }
    }
    Ok(rows)
}

pub fn read_rows_path(path: impl AsRef<Path>) -> Result<Vec<AccuracyRow>> {
    read_rows_csv(std::fs::File::open(path)?)
}
