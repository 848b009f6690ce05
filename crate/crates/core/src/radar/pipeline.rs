use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::channel::{add_complex_noise, apply_channel};
use super::config::{RadarConfig, TargetModel};
use super::estimate::{divide_exact, quantize_grid, RangeEstimate, RangeEstimator, RangeProfile};
use super::frame::generate_frame;
use crate::fxp::{Arith, OperatorPair, PairKernel};
use crate::{Error, Result};

const PROBE_STREAM: u64 = 2;

/// Per-run seed derived from a base seed and two indices.
///
/// Sweeps key seeds by (SNR index, run) only, so every operator pair sees the
/// same frames and noise realisations.
pub fn derive_seed(base: u64, group: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream((group << 32) ^ index);
    rng.next_u64()
}

/// Outcome of one end-to-end run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunOutcome {
    pub estimate: RangeEstimate,
    pub cp_exceeded: bool,
}

/// Reusable TX -> channel -> division -> estimator chain for one
/// configuration and target.
#[derive(Clone, Debug)]
pub struct Pipeline {
    estimator: RangeEstimator,
    target: TargetModel,
}

impl Pipeline {
    pub fn new(cfg: &RadarConfig, target: &TargetModel) -> Result<Self> {
        target.validate(cfg)?;
        Ok(Pipeline {
            estimator: RangeEstimator::new(cfg)?,
            target: *target,
        })
    }

    pub fn config(&self) -> &RadarConfig {
        self.estimator.config()
    }

    pub fn target(&self) -> &TargetModel {
        &self.target
    }

    /// Run once and keep the full range profile.
    pub fn profile<A: Arith + ?Sized>(
        &self,
        arith: &A,
        snr_db: f64,
        seed: u64,
    ) -> Result<(RangeProfile, RunOutcome)> {
        self.run_with(arith, snr_db, seed, None)
    }

    pub fn run<A: Arith + ?Sized>(&self, arith: &A, snr_db: f64, seed: u64) -> Result<RunOutcome> {
        Ok(self.run_with(arith, snr_db, seed, None)?.1)
    }

    fn run_with<A: Arith + ?Sized>(
        &self,
        arith: &A,
        snr_db: f64,
        seed: u64,
        probe: Option<(ProbeBlock, f64)>,
    ) -> Result<(RangeProfile, RunOutcome)> {
        let cfg = self.config();
        let frame = generate_frame(cfg, seed)?;
        let mut rx = apply_channel(&frame, &self.target, snr_db, cfg, seed)?;
        let mut probe_rng = ChaCha8Rng::seed_from_u64(seed);
        probe_rng.set_stream(PROBE_STREAM);
        if let Some((ProbeBlock::DivisionInput, sigma)) = probe {
            add_complex_noise(&mut rx.grid, sigma * sigma, &mut probe_rng);
        }
        let mut quotient = divide_exact(&rx.grid, &frame)?;
        if let Some((ProbeBlock::EstimatorInput, sigma)) = probe {
            add_complex_noise(&mut quotient, sigma * sigma, &mut probe_rng);
        }
        let d = quantize_grid(&quotient);
        let (profile, estimate) = self.estimator.estimate(arith, &d)?;
        Ok((
            profile,
            RunOutcome {
                estimate,
                cp_exceeded: rx.cp_exceeded,
            },
        ))
    }
}

/// Full pipeline for one operator pair, SNR and seed.
pub fn run_pipeline(
    cfg: &RadarConfig,
    target: &TargetModel,
    pair: &OperatorPair,
    snr_db: f64,
    seed: u64,
) -> Result<RangeEstimate> {
    let kernel = pair.kernel()?;
    Ok(Pipeline::new(cfg, target)?.run(&kernel, snr_db, seed)?.estimate)
}

/// Block boundary at which the resilience probe injects noise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeBlock {
    /// Received grid, before spectral division.
    DivisionInput,
    /// Quotient grid, before quantisation and the periodogram estimator.
    EstimatorInput,
}

impl FromStr for ProbeBlock {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "division_input" => Ok(ProbeBlock::DivisionInput),
            "estimator_input" => Ok(ProbeBlock::EstimatorInput),
            other => Err(Error::InvalidParameter(format!(
                "unknown probe block `{other}` (expected division_input or estimator_input)"
            ))),
        }
    }
}

impl fmt::Display for ProbeBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProbeBlock::DivisionInput => "division_input",
            ProbeBlock::EstimatorInput => "estimator_input",
        })
    }
}

/// Mean absolute range deviation (m) of the accurate, noiseless pipeline when
/// complex Gaussian noise of total variance `sigma^2` is injected at `block`.
pub fn resilience_probe(
    cfg: &RadarConfig,
    target: &TargetModel,
    block: ProbeBlock,
    sigma: f64,
    runs: usize,
    seed: u64,
) -> Result<f64> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!("sigma {sigma} must be >= 0")));
    }
    if runs == 0 {
        return Err(Error::InvalidParameter("runs must be >= 1".into()));
    }
    let pipeline = Pipeline::new(cfg, target)?;
    let arith = PairKernel::ACCURATE;
    let mut total = 0.0;
    for run in 0..runs {
        let run_seed = derive_seed(seed, 0, run as u64);
        let (_, out) = pipeline.run_with(&arith, f64::INFINITY, run_seed, Some((block, sigma)))?;
        total += (out.estimate.range_m - target.range_m).abs();
    }
    Ok(total / runs as f64)
}
