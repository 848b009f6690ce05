use num_complex::Complex64;
use serde::Serialize;

use super::config::{EstimatorMode, RadarConfig};
use super::frame::{Grid, TxFrame};
use crate::fxp::{Arith, ComplexFx16, Fx16, OperatorPair};
use crate::transform::{IfftCore, TwiddleSign};
use crate::{Error, Result};

/// Quantised spectral-division result entering the estimator.
pub type DivGrid = Grid<ComplexFx16>;

/// `rx * conj(tx)` in double precision; an exact division because every
/// transmitted cell has unit modulus.
pub fn divide_exact(rx: &Grid<Complex64>, frame: &TxFrame) -> Result<Grid<Complex64>> {
    if !rx.same_shape(&frame.precoded) {
        return Err(Error::InvalidSize(format!(
            "received grid {}x{} does not match transmitted grid {}x{}",
            rx.n_subcarriers(),
            rx.n_symbols(),
            frame.precoded.n_subcarriers(),
            frame.precoded.n_symbols()
        )));
    }
    Ok(Grid::from_fn(rx.n_subcarriers(), rx.n_symbols(), |k, m| {
        rx.get(k, m) * frame.precoded.get(k, m).conj()
    }))
}

/// Clamp each component into the Q1.15 range and quantise.
pub fn quantize_grid(grid: &Grid<Complex64>) -> DivGrid {
    grid.map(|z| ComplexFx16::from_c64(*z))
}

/// Element-wise division of the received grid by the transmitted frame,
/// quantised to Q1.15.
pub fn spectral_divide(rx: &Grid<Complex64>, frame: &TxFrame) -> Result<DivGrid> {
    Ok(quantize_grid(&divide_exact(rx, frame)?))
}

/// Normalised periodogram over range bins.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RangeProfile {
    /// Power per bin, normalised to a maximum of 1 (all zero if the
    /// transform output vanished).
    pub power: Vec<f64>,
    pub bin_to_m: f64,
    pub mode: EstimatorMode,
}

impl RangeProfile {
    pub fn range_of(&self, bin: usize) -> f64 {
        bin as f64 * self.bin_to_m
    }

    /// `10 log10(power)` floored at `floor_db`.
    pub fn power_db(&self, bin: usize, floor_db: f64) -> f64 {
        let p = self.power[bin];
        if p > 0.0 {
            (10.0 * p.log10()).max(floor_db)
        } else {
            floor_db
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RangeEstimate {
    pub range_m: f64,
    pub peak_bin: usize,
    /// Un-normalised peak power (sum of `|X|^2` in Q1.15 units), in dB.
    pub peak_power_db: f64,
}

/// Periodogram range estimator bound to one configuration.
#[derive(Clone, Debug)]
pub struct RangeEstimator {
    cfg: RadarConfig,
    core: IfftCore,
}

impl RangeEstimator {
    pub fn new(cfg: &RadarConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(RangeEstimator {
            cfg: cfg.clone(),
            core: IfftCore::new(cfg.n_ifft, cfg.twiddle_sign)?,
        })
    }

    pub fn config(&self) -> &RadarConfig {
        &self.cfg
    }

    /// Accumulated `|X[b]|^2` in raw units, indexed by range bin.
    pub fn raw_power<A: Arith + ?Sized>(&self, arith: &A, d: &DivGrid) -> Result<Vec<u64>> {
        let (nc, nm, n) = (self.cfg.n_subcarriers, self.cfg.n_symbols, self.cfg.n_ifft);
        if d.n_subcarriers() != nc || d.n_symbols() != nm {
            return Err(Error::InvalidSize(format!(
                "division grid {}x{} does not match config {nc}x{nm}",
                d.n_subcarriers(),
                d.n_symbols()
            )));
        }
        if d.as_slice().iter().all(|z| *z == ComplexFx16::ZERO) {
            return Err(Error::DegenerateInput("division grid is all zero".into()));
        }
        let mut acc = vec![0u64; n];
        let mut buf = vec![ComplexFx16::ZERO; n];
        match self.cfg.estimator_mode {
            EstimatorMode::ZeropadAverage => {
                for m in 0..nm {
                    buf.fill(ComplexFx16::ZERO);
                    buf[..nc].copy_from_slice(d.symbol(m));
                    self.core.run_in_place(arith, &mut buf)?;
                    for (a, x) in acc.iter_mut().zip(&buf) {
                        *a += x.norm_sqr_raw();
                    }
                }
            }
            EstimatorMode::Flattened => {
                buf.copy_from_slice(d.as_slice());
                self.core.run_in_place(arith, &mut buf)?;
                for (a, x) in acc.iter_mut().zip(&buf) {
                    *a = x.norm_sqr_raw();
                }
            }
        }
        // The forward kernel places a delay at the mirrored bin.
        if self.cfg.twiddle_sign == TwiddleSign::Negative {
            acc[1..].reverse();
        }
        Ok(acc)
    }

    pub fn estimate<A: Arith + ?Sized>(
        &self,
        arith: &A,
        d: &DivGrid,
    ) -> Result<(RangeProfile, RangeEstimate)> {
        let raw = self.raw_power(arith, d)?;
        // First maximum wins ties.
        let (peak_bin, peak) = raw
            .iter()
            .enumerate()
            .fold((0, 0u64), |best, (i, &p)| if p > best.1 { (i, p) } else { best });
        let power = if peak == 0 {
            vec![0.0; raw.len()]
        } else {
            raw.iter().map(|&p| p as f64 / peak as f64).collect()
        };
        let unit = Fx16::ULP * Fx16::ULP;
        let peak_power_db = if peak == 0 {
            f64::NEG_INFINITY
        } else {
            10.0 * (peak as f64 * unit).log10()
        };
        let bin_to_m = self.cfg.bin_to_m();
        Ok((
            RangeProfile {
                power,
                bin_to_m,
                mode: self.cfg.estimator_mode,
            },
            RangeEstimate {
                range_m: peak_bin as f64 * bin_to_m,
                peak_bin,
                peak_power_db,
            },
        ))
    }
}

/// Periodogram range estimate of a division grid through the fixed-point IFFT
/// running on `pair`.
pub fn periodogram_estimate(
    pair: &OperatorPair,
    d: &DivGrid,
    cfg: &RadarConfig,
) -> Result<(RangeProfile, RangeEstimate)> {
    let kernel = pair.kernel()?;
    RangeEstimator::new(cfg)?.estimate(&kernel, d)
}
