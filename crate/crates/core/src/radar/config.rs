use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::transform::TwiddleSign;
use crate::{Error, Result};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// How the 2-D quotient grid is turned into a range profile.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorMode {
    /// One zero-padded `n_ifft`-point IFFT per OFDM symbol, periodograms
    /// summed non-coherently over symbols.
    #[default]
    ZeropadAverage,
    /// A single `n_ifft`-point IFFT over the grid flattened subcarrier-fastest.
    Flattened,
}

impl FromStr for EstimatorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "zeropad_average" => Ok(EstimatorMode::ZeropadAverage),
            "flattened" => Ok(EstimatorMode::Flattened),
            other => Err(Error::Parse(format!(
                "unknown estimator mode `{other}` (expected zeropad_average or flattened)"
            ))),
        }
    }
}

impl fmt::Display for EstimatorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EstimatorMode::ZeropadAverage => "zeropad_average",
            EstimatorMode::Flattened => "flattened",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Modulation {
    #[default]
    #[serde(rename = "4-QAM")]
    Qam4,
}

impl FromStr for Modulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "4-qam" | "4qam" | "qpsk" => Ok(Modulation::Qam4),
            other => Err(Error::Parse(format!("unsupported modulation `{other}`"))),
        }
    }
}

/// OFDM radar system parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct RadarConfig {
    pub carrier_hz: f64,
    pub n_subcarriers: usize,
    pub n_symbols: usize,
    pub subcarrier_spacing_hz: f64,
    pub elementary_symbol_s: f64,
    pub cp_s: f64,
    /// Symbol period including the cyclic prefix; sets the Doppler rotation
    /// per symbol.
    pub total_symbol_s: f64,
    pub modulation: Modulation,
    /// Zadoff-Chu root used for precoding along subcarriers.
    pub zc_root: u32,
    pub estimator_mode: EstimatorMode,
    pub n_ifft: usize,
    pub twiddle_sign: TwiddleSign,
}

impl Default for RadarConfig {
    fn default() -> Self {
        RadarConfig {
            carrier_hz: 30e9,
            n_subcarriers: 32,
            n_symbols: 16,
            subcarrier_spacing_hz: 960e3,
            elementary_symbol_s: 1.0 / 960e3,
            cp_s: 0.26e-6,
            total_symbol_s: 1.3e-6,
            modulation: Modulation::Qam4,
            zc_root: 1,
            estimator_mode: EstimatorMode::ZeropadAverage,
            n_ifft: 512,
            twiddle_sign: TwiddleSign::Positive,
        }
    }
}

fn within_pct(a: f64, b: f64, pct: f64) -> bool {
    (a - b).abs() <= b.abs() * pct / 100.0
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl RadarConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.carrier_hz > 0.0 && self.subcarrier_spacing_hz > 0.0) {
            return bad("carrier and subcarrier spacing must be positive".into());
        }
        if self.n_subcarriers < 2 || self.n_symbols < 1 {
            return bad("need at least 2 subcarriers and 1 symbol".into());
        }
        if !self.n_ifft.is_power_of_two() || self.n_ifft < 2 {
            return bad(format!("n_ifft {} must be a power of two", self.n_ifft));
        }
        if self.n_subcarriers * self.n_symbols != self.n_ifft {
            return bad(format!(
                "n_subcarriers * n_symbols = {} must equal n_ifft = {}",
                self.n_subcarriers * self.n_symbols,
                self.n_ifft
            ));
        }
        if !within_pct(self.elementary_symbol_s, 1.0 / self.subcarrier_spacing_hz, 1.0) {
            return bad("elementary_symbol_s must equal 1/subcarrier_spacing_hz within 1%".into());
        }
        if !(self.cp_s >= 0.0)
            || !within_pct(self.elementary_symbol_s + self.cp_s, self.total_symbol_s, 1.0)
        {
            return bad("elementary_symbol_s + cp_s must equal total_symbol_s within 1%".into());
        }
        let n = self.n_subcarriers as u64;
        let u = self.zc_root as u64;
        if u == 0 || u >= n || gcd(u, n) != 1 || (n.is_multiple_of(2) && u.is_multiple_of(2)) {
            return bad(format!(
                "zc_root {u} must be coprime with {n}, 0 < u < {n} (odd for even lengths)"
            ));
        }
        Ok(())
    }

    /// Width of one fine range bin of the `n_ifft`-point profile (m).
    pub fn bin_to_m(&self) -> f64 {
        SPEED_OF_LIGHT / (2.0 * self.subcarrier_spacing_hz * self.n_ifft as f64)
    }

    /// Range resolution of the subcarrier grid itself, `c / (2 N_c df)` (m).
    pub fn coarse_bin_m(&self) -> f64 {
        SPEED_OF_LIGHT / (2.0 * self.subcarrier_spacing_hz * self.n_subcarriers as f64)
    }

    /// Largest unambiguous range, `c / (2 df)` (m).
    pub fn max_range_m(&self) -> f64 {
        SPEED_OF_LIGHT / (2.0 * self.subcarrier_spacing_hz)
    }
}

/// Point target.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetModel {
    pub range_m: f64,
    pub velocity_mps: f64,
    pub amplitude: f64,
}

impl Default for TargetModel {
    fn default() -> Self {
        TargetModel {
            range_m: 50.0,
            velocity_mps: 20.0,
            amplitude: 1.0,
        }
    }
}

impl TargetModel {
    /// Round-trip delay `2R/c`.
    pub fn delay_s(&self) -> f64 {
        2.0 * self.range_m / SPEED_OF_LIGHT
    }

    /// Doppler shift `2 v f_c / c`.
    pub fn doppler_hz(&self, carrier_hz: f64) -> f64 {
        2.0 * self.velocity_mps * carrier_hz / SPEED_OF_LIGHT
    }

    pub fn validate(&self, cfg: &RadarConfig) -> Result<()> {
        if !(self.range_m >= 0.0) || !self.velocity_mps.is_finite() || !self.amplitude.is_finite()
        {
            return Err(Error::InvalidParameter(
                "target range must be non-negative and all fields finite".into(),
            ));
        }
        if self.delay_s() >= 1.0 / cfg.subcarrier_spacing_hz {
            return Err(Error::InvalidParameter(format!(
                "target at {} m is beyond the unambiguous range {:.2} m",
                self.range_m,
                cfg.max_range_m()
            )));
        }
        Ok(())
    }
}
