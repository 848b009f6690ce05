use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::RadarConfig;
use crate::{Error, Result};

/// Random stream of a run's seed that feeds the payload bits.
pub(crate) const FRAME_STREAM: u64 = 0;

/// Subcarrier x symbol grid, stored symbol-major (subcarrier index fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<T> {
    n_subcarriers: usize,
    n_symbols: usize,
    data: Vec<T>,
}

impl<T> Grid<T> {
    pub fn from_fn(n_subcarriers: usize, n_symbols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n_subcarriers * n_symbols);
        for m in 0..n_symbols {
            for k in 0..n_subcarriers {
                data.push(f(k, m));
            }
        }
        Grid {
            n_subcarriers,
            n_symbols,
            data,
        }
    }

    pub fn n_subcarriers(&self) -> usize {
        self.n_subcarriers
    }

    pub fn n_symbols(&self) -> usize {
        self.n_symbols
    }

    #[inline]
    pub fn get(&self, k: usize, m: usize) -> &T {
        &self.data[m * self.n_subcarriers + k]
    }

    #[inline]
    pub fn get_mut(&mut self, k: usize, m: usize) -> &mut T {
        &mut self.data[m * self.n_subcarriers + k]
    }

    /// All cells in flattened order `m * n_subcarriers + k`.
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    /// The `n_subcarriers` cells of symbol `m`.
    pub fn symbol(&self, m: usize) -> &[T] {
        &self.data[m * self.n_subcarriers..(m + 1) * self.n_subcarriers]
    }

    pub fn same_shape<U>(&self, other: &Grid<U>) -> bool {
        self.n_subcarriers == other.n_subcarriers && self.n_symbols == other.n_symbols
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Grid<U> {
        Grid {
            n_subcarriers: self.n_subcarriers,
            n_symbols: self.n_symbols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

/// Zadoff-Chu sequence `exp(-j pi u i^2 / n)` for even `n`.
pub fn zadoff_chu(n: usize, root: u32) -> Result<Vec<Complex64>> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "zadoff-chu length {n} must be even and positive"
        )));
    }
    let u = root as usize;
    if u == 0 || u >= n || u.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "zadoff-chu root {root} must be odd with 0 < u < {n}"
        )));
    }
    Ok((0..n)
        .map(|i| {
            // i^2 u mod 2n keeps the phase argument small and exact.
            let e = (i * i % (2 * n)) * u % (2 * n);
            Complex64::from_polar(1.0, -PI * e as f64 / n as f64)
        })
        .collect())
}

/// Gray-coded unit-energy 4-QAM: `b0` selects the imaginary sign, `b1` the
/// real sign (00 -> +1+j, 01 -> -1+j, 11 -> -1-j, 10 -> +1-j, all over sqrt 2).
pub fn qam4_map(b0: u8, b1: u8) -> Complex64 {
    let re = if b1 == 0 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
    let im = if b0 == 0 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
    Complex64::new(re, im)
}

/// One transmitted OFDM radar frame.
#[derive(Clone, Debug, PartialEq)]
pub struct TxFrame {
    /// Two bits per grid cell, in flattened grid order.
    pub bits: Vec<u8>,
    pub qam: Grid<Complex64>,
    pub zc: Vec<Complex64>,
    /// `qam[k, m] * zc[k]`.
    pub precoded: Grid<Complex64>,
}

impl TxFrame {
    /// Build the frame for a given payload; `bits.len()` must be `2 N_c M`.
    pub fn from_bits(cfg: &RadarConfig, bits: Vec<u8>) -> Result<Self> {
        let (nc, nm) = (cfg.n_subcarriers, cfg.n_symbols);
        if bits.len() != 2 * nc * nm {
            return Err(Error::InvalidSize(format!(
                "expected {} payload bits, got {}",
                2 * nc * nm,
                bits.len()
            )));
        }
        let zc = zadoff_chu(nc, cfg.zc_root)?;
        let qam = Grid::from_fn(nc, nm, |k, m| {
            let i = 2 * (m * nc + k);
            qam4_map(bits[i], bits[i + 1])
        });
        let precoded = Grid::from_fn(nc, nm, |k, m| qam.get(k, m) * zc[k]);
        Ok(TxFrame {
            bits,
            qam,
            zc,
            precoded,
        })
    }
}

/// Seeded random frame.
pub fn generate_frame(cfg: &RadarConfig, seed: u64) -> Result<TxFrame> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(FRAME_STREAM);
    let bits = (0..2 * cfg.n_subcarriers * cfg.n_symbols)
        .map(|_| rng.random::<bool>() as u8)
        .collect();
    TxFrame::from_bits(cfg, bits)
}
