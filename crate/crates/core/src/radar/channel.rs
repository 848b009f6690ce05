use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::config::{RadarConfig, TargetModel};
use super::frame::{Grid, TxFrame};
use crate::{Error, Result};

pub(crate) const CHANNEL_STREAM: u64 = 1;

/// Received frequency-domain grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Received {
    pub grid: Grid<Complex64>,
    /// The round-trip delay exceeds the cyclic prefix, so the circular
    /// frequency-domain channel model is only approximate.
    pub cp_exceeded: bool,
}

/// Add circularly-symmetric complex Gaussian noise of total variance
/// `variance` per cell (`variance / 2` per component).
pub fn add_complex_noise<R: Rng>(grid: &mut Grid<Complex64>, variance: f64, rng: &mut R) {
    if variance <= 0.0 {
        return;
    }
    let sigma = (variance / 2.0).sqrt();
    for z in grid.as_mut_slice() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *z += Complex64::new(sigma * re, sigma * im);
    }
}

/// Noise variance per cell for a unit-power signal at `snr_db`; zero for an
/// infinite SNR.
pub fn noise_variance(snr_db: f64) -> Result<f64> {
    if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
        return Err(Error::InvalidParameter(format!("snr {snr_db} dB is not usable")));
    }
    Ok(if snr_db == f64::INFINITY {
        0.0
    } else {
        10f64.powf(-snr_db / 10.0)
    })
}

/// Point-target channel applied in the frequency domain: a delay phase ramp
/// across subcarriers, a Doppler rotation across symbols, then AWGN.
pub fn apply_channel(
    frame: &TxFrame,
    target: &TargetModel,
    snr_db: f64,
    cfg: &RadarConfig,
    seed: u64,
) -> Result<Received> {
    target.validate(cfg)?;
    let variance = noise_variance(snr_db)?;
    let tau = target.delay_s();
    let fd = target.doppler_hz(cfg.carrier_hz);
    let delay_step = -2.0 * PI * cfg.subcarrier_spacing_hz * tau;
    let doppler_step = 2.0 * PI * fd * cfg.total_symbol_s;
    let precoded = &frame.precoded;
    let mut grid = Grid::from_fn(precoded.n_subcarriers(), precoded.n_symbols(), |k, m| {
        let phase = delay_step * k as f64 + doppler_step * m as f64;
        precoded.get(k, m) * Complex64::from_polar(target.amplitude, phase)
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(CHANNEL_STREAM);
    add_complex_noise(&mut grid, variance, &mut rng);
    Ok(Received {
        grid,
        cp_exceeded: tau > cfg.cp_s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radar::frame::generate_frame;

    #[test]
    fn zero_delay_noiseless_is_identity() {
        let cfg = RadarConfig::default();
        let frame = generate_frame(&cfg, 3).unwrap();
        let tgt = TargetModel {
            range_m: 0.0,
            velocity_mps: 0.0,
            amplitude: 1.0,
        };
        let rx = apply_channel(&frame, &tgt, f64::INFINITY, &cfg, 3).unwrap();
        assert_eq!(rx.grid, frame.precoded);
        assert!(!rx.cp_exceeded);
    }

    #[test]
    fn phase_steps_at_defaults() {
        let cfg = RadarConfig::default();
        let frame = generate_frame(&cfg, 4).unwrap();
        let tgt = TargetModel::default();
        let rx = apply_channel(&frame, &tgt, f64::INFINITY, &cfg, 4).unwrap();
        let ratio = |k, m| rx.grid.get(k, m) / frame.precoded.get(k, m);
        // Subcarrier step -2 pi df tau, symbol step 2 pi fD T_o.
        let dk = (ratio(1, 0) / ratio(0, 0)).arg();
        assert!((dk + 2.01201).abs() < 1e-5, "{dk}");
        let dm = (ratio(0, 1) / ratio(0, 0)).arg();
        assert!((dm - 0.03270).abs() < 1e-5, "{dm}");
        // 333.6 ns exceeds the 0.26 us prefix at the default range.
        assert!(rx.cp_exceeded);
    }

    #[test]
    fn noise_power_matches_snr() {
        let cfg = RadarConfig::default();
        let frame = generate_frame(&cfg, 5).unwrap();
        let tgt = TargetModel {
            amplitude: 0.0,
            ..Default::default()
        };
        let mut power = 0.0;
        let trials = 200;
        for seed in 0..trials {
            let rx = apply_channel(&frame, &tgt, 3.0, &cfg, seed).unwrap();
            power += rx.grid.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
        power /= (trials as usize * 512) as f64;
        assert!((power - 10f64.powf(-0.3)).abs() < 0.01, "{power}");
    }

    #[test]
    fn rejects_nan_snr() {
        assert!(noise_variance(f64::NAN).is_err());
        assert_eq!(noise_variance(f64::INFINITY).unwrap(), 0.0);
        assert!((noise_variance(10.0).unwrap() - 0.1).abs() < 1e-15);
    }
}
