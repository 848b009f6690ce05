//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls into the implementation paths it is used to check: the
//! operator oracles simulate gates bit by bit, the transform oracle is a
//! direct O(N^2) inverse DFT, and the reference estimator works in double
//! precision straight from the channel formula.
#![allow(dead_code)]

use num_complex::Complex64;
use radar_dse::fxp::{AdderModel, MultModel};
use std::f64::consts::PI;

pub const C: f64 = 299_792_458.0;

// ---------------------------------------------------------------------------
// Bit-level operator oracles
// ---------------------------------------------------------------------------

fn bit(v: i64, i: u32) -> u64 {
    ((v >> i) & 1) as u64
}

/// Interpret the low `bits` bits of `v` as two's complement.
fn signed(v: u64, bits: u32) -> i64 {
    let v = v & ((1u64 << bits) - 1);
    if v >> (bits - 1) & 1 == 1 {
        v as i64 - (1i64 << bits)
    } else {
        v as i64
    }
}

/// Ripple-carry full adders over result bits `lo..hi` of the sign-extended
/// operands, starting from `carry_in`. Returns the sum bits and carry out.
fn ripple(a: i64, b: i64, lo: u32, hi: u32, carry_in: u64) -> (u64, u64) {
    let mut carry = carry_in;
    let mut out = 0u64;
    for i in lo..hi {
        let (x, y) = (bit(a, i), bit(b, i));
        out |= (x ^ y ^ carry) << i;
        carry = (x & y) | (carry & (x ^ y));
    }
    (out, carry)
}

/// Gate-level adder oracle: raw `width+1`-bit signed result.
pub fn oracle_add(model: &AdderModel, width: u32, a: i64, b: i64) -> i64 {
    let out_bits = width + 1;
    let raw = match *model {
        AdderModel::Acc => ripple(a, b, 0, out_bits, 0).0,
        AdderModel::Loa(k) => {
            let mut low = 0u64;
            for i in 0..k {
                low |= (bit(a, i) | bit(b, i)) << i;
            }
            low | ripple(a, b, k, out_bits, 0).0
        }
        AdderModel::Tra(k) => ripple(a, b, k, out_bits, 0).0,
        AdderModel::Bcp(bs) => {
            let mut out = 0u64;
            let mut lo = 0;
            while lo < width {
                let top = lo + bs >= width;
                let hi = if top { out_bits } else { lo + bs };
                out |= ripple(a, b, lo, hi, 0).0;
                lo += bs;
            }
            out
        }
        AdderModel::Fixture(_) => panic!("fixture has no behaviour"),
    };
    signed(raw, out_bits)
}

/// Array-multiplier oracle: sign-magnitude operands, shift-and-add partial
/// product rows, raw `2*width`-bit signed result.
pub fn oracle_mul(model: &MultModel, width: u32, a: i64, b: i64) -> i64 {
    let (mut ma, mut mb) = (a.unsigned_abs(), b.unsigned_abs());
    let mut skip_rows = 0;
    match *model {
        MultModel::Acc => {}
        MultModel::Tmul(k) => {
            for i in 0..k {
                ma &= !(1 << i);
                mb &= !(1 << i);
            }
        }
        MultModel::Ppp(r) => skip_rows = r,
        MultModel::Fixture(_) => panic!("fixture has no behaviour"),
    }
    let mut acc = 0u64;
    for row in skip_rows..=width {
        if (mb >> row) & 1 == 1 {
            acc += ma << row;
        }
    }
    let p = acc as i64;
    if (a < 0) != (b < 0) {
        -p
    } else {
        p
    }
}

/// Brute-force tallies over all `2^(2W)` operand pairs.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct OracleTally {
    pub pairs: u64,
    pub mismatches: u64,
    pub abs_err_sum: u128,
    pub max_abs_err: u64,
    pub rel_err_sum_q32: u128,
    pub zero_exact: u64,
}

impl OracleTally {
    pub fn ep_pct(&self) -> f64 {
        self.mismatches as f64 / self.pairs as f64 * 100.0
    }

    pub fn mae_pct(&self, out_bits: u32) -> f64 {
        self.abs_err_sum as f64 / self.pairs as f64 / ((1u128 << out_bits) - 1) as f64 * 100.0
    }

    pub fn wce_pct(&self, out_bits: u32) -> f64 {
        self.max_abs_err as f64 / ((1u128 << out_bits) - 1) as f64 * 100.0
    }

    pub fn mre_pct(&self) -> f64 {
        let n = self.pairs - self.zero_exact;
        if n == 0 {
            0.0
        } else {
            self.rel_err_sum_q32 as f64 / 2f64.powi(32) / n as f64 * 100.0
        }
    }

    /// Floating-point MRE computed directly, for a tolerance sanity check.
    pub fn brute<F: Fn(i64, i64) -> (i64, i64)>(width: u32, f: F) -> (OracleTally, f64) {
        let lo = -(1i64 << (width - 1));
        let hi = (1i64 << (width - 1)) - 1;
        let mut t = OracleTally::default();
        let mut rel_float = 0.0;
        for a in lo..=hi {
            for b in lo..=hi {
                let (exact, approx) = f(a, b);
                let err = (exact - approx).unsigned_abs();
                t.pairs += 1;
                if err > 0 {
                    t.mismatches += 1;
                }
                t.abs_err_sum += err as u128;
                t.max_abs_err = t.max_abs_err.max(err);
                if exact == 0 {
                    t.zero_exact += 1;
                } else {
                    t.rel_err_sum_q32 += ((err as u128) << 32) / exact.unsigned_abs() as u128;
                    rel_float += err as f64 / exact.unsigned_abs() as f64;
                }
            }
        }
        let n = (t.pairs - t.zero_exact).max(1) as f64;
        (t, rel_float / n * 100.0)
    }
}

// ---------------------------------------------------------------------------
// Transform oracle
// ---------------------------------------------------------------------------

/// `(1/N) sum_k x[k] e^{+j 2 pi n k / N}` by direct summation.
pub fn inverse_dft(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            x.iter()
                .enumerate()
                .map(|(k, v)| v * Complex64::from_polar(1.0, 2.0 * PI * ((i * k) % n) as f64 / n as f64))
                .sum::<Complex64>()
                / n as f64
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Double-precision reference estimator
// ---------------------------------------------------------------------------

/// Noiseless quotient grid straight from the channel formula (the payload and
/// precoding cancel in the division), indexed `[m][k]`.
pub fn reference_quotient(range_m: f64, velocity_mps: f64) -> Vec<Vec<Complex64>> {
    let (df, fc, t_sym) = (960e3, 30e9, 1.3e-6);
    let tau = 2.0 * range_m / C;
    let fd = 2.0 * velocity_mps * fc / C;
    (0..16)
        .map(|m| {
            (0..32)
                .map(|k| {
                    Complex64::from_polar(
                        1.0,
                        -2.0 * PI * k as f64 * df * tau + 2.0 * PI * fd * m as f64 * t_sym,
                    )
                })
                .collect()
        })
        .collect()
}

/// Zero-padded, symbol-averaged periodogram evaluated at a (possibly
/// fractional) bin of a 512-point grid.
pub fn reference_power(quotient: &[Vec<Complex64>], bin: f64) -> f64 {
    quotient
        .iter()
        .map(|sym| {
            sym.iter()
                .enumerate()
                .map(|(k, d)| d * Complex64::from_polar(1.0, 2.0 * PI * k as f64 * bin / 512.0))
                .sum::<Complex64>()
                .norm_sqr()
        })
        .sum()
}

/// Integer argmax of the reference periodogram over 512 bins.
pub fn reference_peak_bin(quotient: &[Vec<Complex64>]) -> usize {
    (0..512)
        .map(|b| (b, reference_power(quotient, b as f64)))
        .fold((0, f64::MIN), |best, (b, p)| if p > best.1 { (b, p) } else { best })
        .0
}

/// Continuous peak location, refined on a 0.001-bin grid around the integer
/// argmax.
pub fn reference_continuous_peak(quotient: &[Vec<Complex64>]) -> f64 {
    let coarse = reference_peak_bin(quotient) as f64;
    (-1000..=1000)
        .map(|i| coarse + i as f64 * 0.001)
        .map(|b| (b, reference_power(quotient, b)))
        .fold((coarse, f64::MIN), |best, (b, p)| if p > best.1 { (b, p) } else { best })
        .0
}

/// Flattened-mode reference: one 512-point inverse DFT of `x[m*32 + k]`.
pub fn reference_flattened_peak(quotient: &[Vec<Complex64>]) -> usize {
    let x: Vec<Complex64> = quotient.iter().flatten().copied().collect();
    inverse_dft(&x)
        .iter()
        .enumerate()
        .fold((0, f64::MIN), |best, (b, v)| {
            if v.norm_sqr() > best.1 {
                (b, v.norm_sqr())
            } else {
                best
            }
        })
        .0
}

pub fn fine_bin_m() -> f64 {
    C / (2.0 * 960e3 * 512.0)
}
