//! Error characterisation of a single operator model against its exact
//! counterpart: error percentage (EP), mean absolute error (MAE), worst-case
//! absolute error (WCE) and mean relative error (MRE).
//!
//! Metrics are taken on the raw, pre-saturation outputs: `W+1` bits for an
//! adder of operand width `W`, `2W` bits for a multiplier. MAE and WCE are
//! normalised by `2^W_out - 1`. All accumulation is integer, so a tally is
//! independent of enumeration order; the relative-error sum is held in Q32
//! fixed point (each term floored to a multiple of `2^-32`).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::fxp::{fixture_circuit, AdderModel, CircuitKind, MultModel};
use crate::{Error, Result};

/// Operand widths the evaluator accepts.
pub const SUPPORTED_WIDTHS: [u32; 3] = [4, 8, 16];

/// Sample count used for 16-bit models when none is given.
pub const DEFAULT_SAMPLES: u64 = 10_000_000;

/// Fractional bits of the fixed-point relative-error accumulator.
pub const REL_FRAC_BITS: u32 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricsMode {
    Exhaustive,
    Sampled,
    Fixture,
}

impl MetricsMode {
    pub fn as_str(self) -> &'static str {
        match self {
            MetricsMode::Exhaustive => "exhaustive",
            MetricsMode::Sampled => "sampled",
            MetricsMode::Fixture => "fixture",
        }
    }
}

/// How input pairs are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalMode {
    /// Every one of the `2^(2W)` signed operand pairs.
    Exhaustive,
    /// `samples` uniform independent pairs from a seeded generator.
    Sampled { samples: u64, seed: u64 },
}

/// Exact integer accumulators behind an [`ErrorMetrics`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ErrorTally {
    pub pairs: u64,
    pub mismatches: u64,
    pub abs_err_sum: u128,
    pub max_abs_err: u64,
    /// Sum over pairs with a nonzero exact result of `floor(|err| * 2^32 / |exact|)`.
    pub rel_err_sum_q32: u128,
    pub zero_exact: u64,
}

impl ErrorTally {
    #[inline]
    pub fn record(&mut self, exact: i64, approx: i64) {
        self.pairs += 1;
        let err = exact.abs_diff(approx);
        if err != 0 {
            self.mismatches += 1;
            self.abs_err_sum += err as u128;
            self.max_abs_err = self.max_abs_err.max(err);
        }
        if exact == 0 {
            self.zero_exact += 1;
        } else if err != 0 {
            self.rel_err_sum_q32 += ((err as u128) << REL_FRAC_BITS) / exact.unsigned_abs() as u128;
        }
    }

    pub fn merge(mut self, other: ErrorTally) -> ErrorTally {
        self.pairs += other.pairs;
        self.mismatches += other.mismatches;
        self.abs_err_sum += other.abs_err_sum;
        self.max_abs_err = self.max_abs_err.max(other.max_abs_err);
        self.rel_err_sum_q32 += other.rel_err_sum_q32;
        self.zero_exact += other.zero_exact;
        self
    }

    /// Convert to percentages for an output of `out_width` bits.
    pub fn metrics(&self, width: u32, out_width: u32, mode: EvalMode) -> ErrorMetrics {
        let range = ((1u128 << out_width) - 1) as f64;
        let pairs = self.pairs.max(1) as f64;
        let nonzero = self.pairs - self.zero_exact;
        let mre = if nonzero == 0 {
            0.0
        } else {
            self.rel_err_sum_q32 as f64 / (1u64 << REL_FRAC_BITS) as f64 / nonzero as f64
        };
        let (mode_tag, seed) = match mode {
            EvalMode::Exhaustive => (MetricsMode::Exhaustive, None),
            EvalMode::Sampled { seed, .. } => (MetricsMode::Sampled, Some(seed)),
        };
        ErrorMetrics {
            width,
            mode: mode_tag,
            ep_pct: self.mismatches as f64 / pairs * 100.0,
            mae_pct: self.abs_err_sum as f64 / pairs / range * 100.0,
            wce_pct: Some(self.max_abs_err as f64 / range * 100.0),
            mre_pct: mre * 100.0,
            pairs_evaluated: self.pairs,
            zero_exact_skipped: self.zero_exact,
            seed,
            tally: Some(*self),
        }
    }
}

/// Error metrics of one operator model, in percent.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorMetrics {
    pub width: u32,
    pub mode: MetricsMode,
    pub ep_pct: f64,
    pub mae_pct: f64,
    /// `None` for fixture circuits whose WCE was not published.
    pub wce_pct: Option<f64>,
    pub mre_pct: f64,
    pub pairs_evaluated: u64,
    pub zero_exact_skipped: u64,
    pub seed: Option<u64>,
    #[serde(skip)]
    pub tally: Option<ErrorTally>,
}

impl ErrorMetrics {
    /// True iff every evaluated pair matched the exact operator.
    pub fn is_exact(&self) -> bool {
        self.tally.is_some_and(|t| t.mismatches == 0)
    }
}

fn check_width(width: u32) -> Result<()> {
    if SUPPORTED_WIDTHS.contains(&width) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "width {width} not in {SUPPORTED_WIDTHS:?}"
        )))
    }
}

fn fixture_metrics(name: &str, kind: CircuitKind, width: u32) -> Result<ErrorMetrics> {
    let published = fixture_circuit(name)
        .filter(|c| c.kind == kind)
        .and_then(|c| c.published)
        .ok_or_else(|| Error::UnsupportedModel(format!("{name}: no published metrics")))?;
    Ok(ErrorMetrics {
        width,
        mode: MetricsMode::Fixture,
        ep_pct: published.ep_pct,
        mae_pct: published.mae_pct,
        wce_pct: None,
        mre_pct: published.mre_pct,
        pairs_evaluated: 0,
        zero_exact_skipped: 0,
        seed: None,
        tally: None,
    })
}

/// Tally `f(a, b) -> (exact, approx)` over the chosen operand pairs.
fn tally_over<F>(width: u32, mode: EvalMode, f: F) -> ErrorTally
where
    F: Fn(i32, i32) -> (i64, i64) + Sync,
{
    let lo = -(1i32 << (width - 1));
    let hi = (1i32 << (width - 1)) - 1;
    match mode {
        EvalMode::Exhaustive => (lo..=hi)
            .into_par_iter()
            .map(|a| {
                let mut t = ErrorTally::default();
                for b in lo..=hi {
                    let (exact, approx) = f(a, b);
                    t.record(exact, approx);
                }
                t
            })
            .reduce(ErrorTally::default, ErrorTally::merge),
        EvalMode::Sampled { samples, seed } => {
            // Fixed chunking keeps the draw sequence independent of the
            // thread count.
            const CHUNK: u64 = 1 << 16;
            let chunks = samples.div_ceil(CHUNK);
            (0..chunks)
                .into_par_iter()
                .map(|chunk| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(chunk);
                    let n = CHUNK.min(samples - chunk * CHUNK);
                    let mut t = ErrorTally::default();
                    for _ in 0..n {
                        let a = rng.random_range(lo..=hi);
                        let b = rng.random_range(lo..=hi);
                        let (exact, approx) = f(a, b);
                        t.record(exact, approx);
                    }
                    t
                })
                .reduce(ErrorTally::default, ErrorTally::merge)
        }
    }
}

fn check_mode(mode: EvalMode) -> Result<()> {
    if let EvalMode::Sampled { samples: 0, .. } = mode {
        return Err(Error::InvalidParameter("sample count must be positive".into()));
    }
    Ok(())
}

/// Error metrics of an adder model at operand width `width`.
///
/// Fixture circuits return their published metrics with mode `fixture`.
pub fn eval_adder_metrics(model: &AdderModel, width: u32, mode: EvalMode) -> Result<ErrorMetrics> {
    check_width(width)?;
    if let AdderModel::Fixture(name) = model {
        return fixture_metrics(name, CircuitKind::Adder, width);
    }
    check_mode(mode)?;
    model.check_width(width)?;
    let kernel = model.kernel()?;
    let tally = tally_over(width, mode, |a, b| {
        ((a + b) as i64, kernel.add_raw(width, a, b) as i64)
    });
    Ok(tally.metrics(width, width + 1, mode))
}

/// Error metrics of a multiplier model at operand width `width`.
pub fn eval_mult_metrics(model: &MultModel, width: u32, mode: EvalMode) -> Result<ErrorMetrics> {
    check_width(width)?;
    if let MultModel::Fixture(name) = model {
        return fixture_metrics(name, CircuitKind::Multiplier, width);
    }
    check_mode(mode)?;
    model.check_width(width)?;
    let kernel = model.kernel()?;
    let tally = tally_over(width, mode, |a, b| {
        (a as i64 * b as i64, kernel.mul_raw(a, b))
    });
    Ok(tally.metrics(width, 2 * width, mode))
}
