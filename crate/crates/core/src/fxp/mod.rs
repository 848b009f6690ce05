//! Fixed-point numeric core.
//!
//! Every signal inside the estimator is a Q1.15 word: a 16-bit two's-complement
//! integer `raw` standing for `raw / 2^15`. Arithmetic on those words goes
//! through an [`Arith`] implementation, normally a [`PairKernel`] built from an
//! [`OperatorPair`], so the approximate operator models can be swapped in
//! without touching the transform code.

mod models;
mod pair;

pub use models::{
    add, fixture_circuit, mul, AdderKernel, AdderModel, CircuitKind, FixtureCircuit, MultKernel,
    MultModel, PublishedMetrics, FIXTURE_CIRCUITS,
};
pub use pair::{cmul, Arith, Counting, OperatorPair, PairKernel};

use std::fmt;

/// Number of fractional bits of the Q1.15 format.
pub const FRAC_BITS: u32 = 15;

const SCALE: f64 = (1u32 << FRAC_BITS) as f64;

/// A Q1.15 sample.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fx16(i16);

impl Fx16 {
    pub const ZERO: Fx16 = Fx16(0);
    /// Largest representable value, `1 - 2^-15`; the quantised `1.0`.
    pub const MAX: Fx16 = Fx16(i16::MAX);
    pub const MIN: Fx16 = Fx16(i16::MIN);
    /// One unit in the last place, as a real value.
    pub const ULP: f64 = 1.0 / SCALE;

    #[inline]
    pub const fn from_raw(raw: i16) -> Self {
        Fx16(raw)
    }

    #[inline]
    pub const fn raw(self) -> i16 {
        self.0
    }

    /// Clamp a wide integer result into the 16-bit range.
    #[inline]
    pub fn saturate(wide: i64) -> Self {
        Fx16(wide.clamp(i16::MIN as i64, i16::MAX as i64) as i16)
    }

    /// Round-to-nearest-even quantisation of a real value, saturating at the
    /// Q1.15 bounds.
    pub fn quantize(x: f64) -> Self {
        debug_assert!(x.is_finite(), "quantize of non-finite value {x}");
        let scaled = (x * SCALE).round_ties_even();
        Fx16(scaled.clamp(i16::MIN as f64, i16::MAX as f64) as i16)
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.0 as f64 / SCALE
    }

    /// Two's-complement negation; `-MIN` saturates to `MAX`.
    #[inline]
    pub fn saturating_neg(self) -> Self {
        Fx16(self.0.saturating_neg())
    }
}

/// Free-function form of [`Fx16::quantize`].
pub fn quantize(x: f64) -> Fx16 {
    Fx16::quantize(x)
}

impl fmt::Display for Fx16 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.5}", self.to_f64())
    }
}

/// Complex Q1.15 sample.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ComplexFx16 {
    pub re: Fx16,
    pub im: Fx16,
}

impl ComplexFx16 {
    pub const ZERO: ComplexFx16 = ComplexFx16 {
        re: Fx16::ZERO,
        im: Fx16::ZERO,
    };

    #[inline]
    pub const fn new(re: Fx16, im: Fx16) -> Self {
        ComplexFx16 { re, im }
    }

    #[inline]
    pub const fn from_raw(re: i16, im: i16) -> Self {
        ComplexFx16 {
            re: Fx16::from_raw(re),
            im: Fx16::from_raw(im),
        }
    }

    /// Componentwise quantisation.
    pub fn quantize(re: f64, im: f64) -> Self {
        ComplexFx16 {
            re: Fx16::quantize(re),
            im: Fx16::quantize(im),
        }
    }

    pub fn from_c64(z: num_complex::Complex64) -> Self {
        Self::quantize(z.re, z.im)
    }

    pub fn to_c64(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// `re^2 + im^2` in raw units (exact).
    #[inline]
    pub fn norm_sqr_raw(self) -> u64 {
        let re = self.re.raw() as i64;
        let im = self.im.raw() as i64;
        (re * re + im * im) as u64
    }

    #[inline]
    pub fn saturating_neg(self) -> Self {
        ComplexFx16 {
            re: self.re.saturating_neg(),
            im: self.im.saturating_neg(),
        }
    }
}
