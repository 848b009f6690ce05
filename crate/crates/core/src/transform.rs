//! Radix-2 decimation-in-time IFFT over Q1.15 samples.
//!
//! The dataflow mirrors a fully parallel core: the input is bit-reverse
//! permuted, then `log2(N)` stages each apply `N/2` independent butterflies
//! `Ya = Xa + W*Xb`, `Yb = Xa - W*Xb` with twiddles read from a precomputed
//! ROM. Every stage ends with an arithmetic right shift by one, so the output
//! carries the conventional `1/N` normalisation.
//!
//! Inside the transform the shift is taken from the adder's 17-bit result, so a
//! butterfly whose sum exceeds the 16-bit range loses only its LSB.

use crate::fxp::{cmul, Arith, ComplexFx16, Fx16};
use crate::{Error, Result};

/// Largest supported transform size.
pub const MAX_SIZE: usize = 1 << 16;

/// Exponent sign of the twiddle factors `e^{sign * j2pi t/N}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TwiddleSign {
    /// `e^{+j2pi/N}`: a true inverse transform.
    #[default]
    Positive,
    /// `e^{-j2pi/N}`: the forward kernel.
    Negative,
}

impl TwiddleSign {
    pub fn from_i32(sign: i32) -> Result<Self> {
        match sign {
            1 => Ok(TwiddleSign::Positive),
            -1 => Ok(TwiddleSign::Negative),
            other => Err(Error::InvalidParameter(format!(
                "twiddle sign must be +1 or -1, got {other}"
            ))),
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            TwiddleSign::Positive => 1,
            TwiddleSign::Negative => -1,
        }
    }
}

fn check_size(n: usize) -> Result<()> {
    if !(2..=MAX_SIZE).contains(&n) || !n.is_power_of_two() {
        return Err(Error::InvalidSize(format!(
            "transform size {n} must be a power of two in [2, {MAX_SIZE}]"
        )));
    }
    Ok(())
}

/// Precomputed twiddle factors `W^t`, `t in 0..N/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwiddleRom {
    n: usize,
    sign: TwiddleSign,
    entries: Box<[ComplexFx16]>,
}

impl TwiddleRom {
    pub fn new(n: usize, sign: TwiddleSign) -> Result<Self> {
        check_size(n)?;
        let entries = (0..n / 2)
            .map(|t| {
                let theta = 2.0 * std::f64::consts::PI * t as f64 / n as f64;
                let sin = Fx16::quantize(theta.sin());
                let im = match sign {
                    TwiddleSign::Positive => sin,
                    TwiddleSign::Negative => sin.saturating_neg(),
                };
                ComplexFx16::new(Fx16::quantize(theta.cos()), im)
            })
            .collect();
        Ok(TwiddleRom { n, sign, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sign(&self) -> TwiddleSign {
        self.sign
    }

    pub fn entries(&self) -> &[ComplexFx16] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, t: usize) -> ComplexFx16 {
        self.entries[t]
    }
}

/// Free-function form of [`TwiddleRom::new`].
pub fn build_rom(n: usize, sign: TwiddleSign) -> Result<TwiddleRom> {
    TwiddleRom::new(n, sign)
}

/// One butterfly slot: the two data positions and the twiddle index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ButterflySlot {
    pub top: usize,
    pub bottom: usize,
    pub twiddle: usize,
}

/// Butterfly schedule for every stage of an `N`-point transform.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StagePlan {
    n: usize,
    stages: Vec<Vec<ButterflySlot>>,
}

impl StagePlan {
    pub fn new(n: usize) -> Result<Self> {
        check_size(n)?;
        let mut stages = Vec::with_capacity(n.trailing_zeros() as usize);
        let mut span = 2;
        while span <= n {
            let half = span / 2;
            let stride = n / span;
            let mut slots = Vec::with_capacity(n / 2);
            for start in (0..n).step_by(span) {
                for j in 0..half {
                    slots.push(ButterflySlot {
                        top: start + j,
                        bottom: start + j + half,
                        twiddle: j * stride,
                    });
                }
            }
            stages.push(slots);
            span *= 2;
        }
        Ok(StagePlan { n, stages })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stages(&self) -> &[Vec<ButterflySlot>] {
        &self.stages
    }
}

#[inline]
fn bit_reverse_index(i: usize, bits: u32) -> usize {
    i.reverse_bits() >> (usize::BITS - bits)
}

/// In-place bit-reversal permutation.
pub fn bit_reverse_in_place<T>(x: &mut [T]) -> Result<()> {
    let n = x.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::InvalidSize(format!("length {n} is not a power of two")));
    }
    if n == 1 {
        return Ok(());
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = bit_reverse_index(i, bits);
        if i < j {
            x.swap(i, j);
        }
    }
    Ok(())
}

/// Move the element at index `i` to its bit-reversed index.
pub fn bit_reverse_permute<T: Clone>(x: &[T]) -> Result<Vec<T>> {
    let mut out = x.to_vec();
    bit_reverse_in_place(&mut out)?;
    Ok(out)
}

/// Radix-2 butterfly `(xa + w*xb, xa - w*xb)` with saturating outputs:
/// 4 multiplier and 6 adder invocations.
pub fn butterfly<A: Arith + ?Sized>(
    arith: &A,
    xa: ComplexFx16,
    xb: ComplexFx16,
    w: ComplexFx16,
) -> (ComplexFx16, ComplexFx16) {
    let t = cmul(arith, w, xb);
    let ya = ComplexFx16::new(arith.add(xa.re, t.re), arith.add(xa.im, t.im));
    let yb = ComplexFx16::new(arith.sub(xa.re, t.re), arith.sub(xa.im, t.im));
    (ya, yb)
}

/// Butterfly followed by the stage scaling shift, applied to the adders'
/// 17-bit outputs.
#[inline]
fn scaled_butterfly<A: Arith + ?Sized>(
    arith: &A,
    xa: ComplexFx16,
    xb: ComplexFx16,
    w: ComplexFx16,
) -> (ComplexFx16, ComplexFx16) {
    let t = cmul(arith, w, xb);
    let neg = t.saturating_neg();
    let half = |wide: i32| Fx16::saturate((wide >> 1) as i64);
    let ya = ComplexFx16::new(
        half(arith.add_wide(xa.re, t.re)),
        half(arith.add_wide(xa.im, t.im)),
    );
    let yb = ComplexFx16::new(
        half(arith.add_wide(xa.re, neg.re)),
        half(arith.add_wide(xa.im, neg.im)),
    );
    (ya, yb)
}

/// A ready-to-run IFFT: twiddle ROM plus stage schedule.
#[derive(Clone, Debug)]
pub struct IfftCore {
    rom: TwiddleRom,
    plan: StagePlan,
}

impl IfftCore {
    pub fn new(n: usize, sign: TwiddleSign) -> Result<Self> {
        Ok(IfftCore {
            rom: TwiddleRom::new(n, sign)?,
            plan: StagePlan::new(n)?,
        })
    }

    pub fn from_rom(rom: TwiddleRom) -> Result<Self> {
        let plan = StagePlan::new(rom.n())?;
        Ok(IfftCore { rom, plan })
    }

    pub fn n(&self) -> usize {
        self.rom.n()
    }

    pub fn rom(&self) -> &TwiddleRom {
        &self.rom
    }

    /// Transform `x` in place.
    pub fn run_in_place<A: Arith + ?Sized>(&self, arith: &A, x: &mut [ComplexFx16]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::InvalidSize(format!(
                "input length {} does not match transform size {}",
                x.len(),
                self.n()
            )));
        }
        bit_reverse_in_place(x)?;
        for stage in self.plan.stages() {
            for slot in stage {
                let (ya, yb) =
                    scaled_butterfly(arith, x[slot.top], x[slot.bottom], self.rom.get(slot.twiddle));
                x[slot.top] = ya;
                x[slot.bottom] = yb;
            }
        }
        Ok(())
    }

    pub fn run<A: Arith + ?Sized>(&self, arith: &A, x: &[ComplexFx16]) -> Result<Vec<ComplexFx16>> {
        let mut out = x.to_vec();
        self.run_in_place(arith, &mut out)?;
        Ok(out)
    }
}

/// `N`-point IFFT of `x` under `arith`, scaled by `1/N`.
pub fn ifft<A: Arith + ?Sized>(
    arith: &A,
    x: &[ComplexFx16],
    rom: &TwiddleRom,
) -> Result<Vec<ComplexFx16>> {
    if x.len() != rom.n() {
        return Err(Error::InvalidSize(format!(
            "input length {} does not match ROM size {}",
            x.len(),
            rom.n()
        )));
    }
    IfftCore::from_rom(rom.clone())?.run(arith, x)
}
