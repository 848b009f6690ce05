//! End-to-end OFDM radar pipeline: 4-QAM frame with Zadoff-Chu precoding, a
//! point-target AWGN channel, spectral division and periodogram range
//! estimation through the fixed-point IFFT.
//!
//! Everything ahead of the estimator runs in double precision; only the
//! periodogram IFFT sees the injected operator pair.

mod channel;
mod config;
mod estimate;
mod frame;
mod pipeline;

pub use channel::{add_complex_noise, apply_channel, noise_variance, Received};
pub use config::{EstimatorMode, Modulation, RadarConfig, TargetModel, SPEED_OF_LIGHT};
pub use estimate::{
    divide_exact, periodogram_estimate, quantize_grid, spectral_divide, DivGrid, RangeEstimate,
    RangeEstimator, RangeProfile,
};
pub use frame::{generate_frame, qam4_map, zadoff_chu, Grid, TxFrame};
pub use pipeline::{derive_seed, resilience_probe, run_pipeline, Pipeline, ProbeBlock, RunOutcome};
