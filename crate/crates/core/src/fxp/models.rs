//! Behavioural models of exact and approximate adders and multipliers.
//!
//! Each functional family is defined for any operand width `W` (4, 8 or 16 in
//! practice). Operands are `W`-bit two's-complement values carried sign-extended
//! in an `i32`. Adders return the raw `W+1`-bit sum, multipliers the raw
//! `2W`-bit product; the Q1.15 entry points [`add`] and [`mul`] post-process
//! those raw results into 16-bit samples.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::Fx16;
use crate::{Error, Result};

/// Largest operand width any model is defined for.
pub const MAX_WIDTH: u32 = 16;

/// Adder model: an exact adder, one of the approximate families, or a named
/// fixture circuit that only carries published metadata.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AdderModel {
    /// Exact adder.
    Acc,
    /// Lower-part OR adder: the `k` low result bits are the OR of the operand
    /// bits, the upper part is an exact sum with carry-in 0.
    Loa(u32),
    /// Truncation adder: the `k` low result bits are zero, the upper part is an
    /// exact sum with carry-in 0.
    Tra(u32),
    /// Block-carry-prediction adder with block size `b`: every block is added
    /// exactly with a predicted carry-in of 0.
    Bcp(u32),
    Fixture(String),
}

/// Multiplier model.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MultModel {
    /// Exact multiplier.
    Acc,
    /// Operand truncation: the `k` least-significant magnitude bits of both
    /// operands are zeroed before an exact multiply.
    Tmul(u32),
    /// Partial-product perforation: the `r` least-significant partial-product
    /// rows of the unsigned array are dropped.
    Ppp(u32),
    Fixture(String),
}

/// Functional (simulatable) subset of [`AdderModel`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AdderKernel {
    Acc,
    Loa(u32),
    Tra(u32),
    Bcp(u32),
}

/// Functional (simulatable) subset of [`MultModel`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MultKernel {
    Acc,
    Tmul(u32),
    Ppp(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CircuitKind {
    Adder,
    Multiplier,
}

/// Error metrics published for a fixture circuit, in percent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PublishedMetrics {
    pub mae_pct: f64,
    pub ep_pct: f64,
    pub mre_pct: f64,
}

/// A named gate-level circuit known only through its published metadata.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixtureCircuit {
    pub name: &'static str,
    pub kind: CircuitKind,
    pub published: Option<PublishedMetrics>,
}

/// Fixture circuits recognised by bare name in pair strings.
pub const FIXTURE_CIRCUITS: &[FixtureCircuit] = &[
    FixtureCircuit {
        name: "add16se_3BD",
        kind: CircuitKind::Adder,
        published: Some(PublishedMetrics {
            mae_pct: 0.046,
            ep_pct: 99.02,
            mre_pct: 0.96,
        }),
    },
    FixtureCircuit {
        name: "mul16s_HFB",
        kind: CircuitKind::Multiplier,
        published: Some(PublishedMetrics {
            mae_pct: 0.002,
            ep_pct: 98.43,
            mre_pct: 0.22,
        }),
    },
    FixtureCircuit {
        name: "mul16s_GV3",
        kind: CircuitKind::Multiplier,
        published: None,
    },
];

pub fn fixture_circuit(name: &str) -> Option<&'static FixtureCircuit> {
    FIXTURE_CIRCUITS.iter().find(|c| c.name == name)
}

#[inline]
fn low_mask(bits: u32) -> i32 {
    ((1i64 << bits) - 1) as i32
}

impl AdderKernel {
    /// Raw `W+1`-bit sum of two sign-extended `W`-bit operands.
    ///
    /// Parameters must already be valid for `width` (see [`AdderModel::check_width`]).
    #[inline]
    pub fn add_raw(self, width: u32, a: i32, b: i32) -> i32 {
        match self {
            AdderKernel::Acc => a + b,
            AdderKernel::Loa(0) | AdderKernel::Tra(0) => a + b,
            AdderKernel::Loa(k) => {
                let upper = ((a >> k) + (b >> k)) << k;
                upper | ((a | b) & low_mask(k))
            }
            AdderKernel::Tra(k) => ((a >> k) + (b >> k)) << k,
            AdderKernel::Bcp(bs) => {
                if bs >= width {
                    return a + b;
                }
                let top = width - bs;
                let m = low_mask(bs);
                let mut low = 0i32;
                let mut shift = 0;
                while shift < top {
                    let block = (((a >> shift) & m) + ((b >> shift) & m)) & m;
                    low |= block << shift;
                    shift += bs;
                }
                (((a >> top) + (b >> top)) << top) | low
            }
        }
    }
}

impl MultKernel {
    /// Raw `2W`-bit product of two sign-extended operands.
    #[inline]
    pub fn mul_raw(self, a: i32, b: i32) -> i64 {
        match self {
            MultKernel::Acc | MultKernel::Tmul(0) | MultKernel::Ppp(0) => a as i64 * b as i64,
            MultKernel::Tmul(k) => {
                let keep = !((1u64 << k) - 1);
                let ma = a.unsigned_abs() as u64 & keep;
                let mb = b.unsigned_abs() as u64 & keep;
                apply_sign(ma * mb, (a < 0) != (b < 0))
            }
            MultKernel::Ppp(r) => {
                // Rows are selected by the bits of the second operand; dropping
                // the r lowest rows is a mask on its magnitude.
                let keep = !((1u64 << r) - 1);
                let ma = a.unsigned_abs() as u64;
                let mb = b.unsigned_abs() as u64 & keep;
                apply_sign(ma * mb, (a < 0) != (b < 0))
            }
        }
    }
}

#[inline]
fn apply_sign(magnitude: u64, negative: bool) -> i64 {
    if negative {
        -(magnitude as i64)
    } else {
        magnitude as i64
    }
}

impl AdderModel {
    pub fn loa(k: u32) -> Result<Self> {
        check_param("loa", k)?;
        Ok(AdderModel::Loa(k))
    }

    pub fn tra(k: u32) -> Result<Self> {
        check_param("tra", k)?;
        Ok(AdderModel::Tra(k))
    }

    pub fn bcp(block: u32) -> Result<Self> {
        if block == 0 || !MAX_WIDTH.is_multiple_of(block) {
            return Err(Error::InvalidParameter(format!(
                "bcp block size {block} must divide {MAX_WIDTH}"
            )));
        }
        Ok(AdderModel::Bcp(block))
    }

    pub fn is_fixture(&self) -> bool {
        matches!(self, AdderModel::Fixture(_))
    }

    pub fn kernel(&self) -> Result<AdderKernel> {
        Ok(match *self {
            AdderModel::Acc => AdderKernel::Acc,
            AdderModel::Loa(k) => AdderKernel::Loa(k),
            AdderModel::Tra(k) => AdderKernel::Tra(k),
            AdderModel::Bcp(b) => AdderKernel::Bcp(b),
            AdderModel::Fixture(ref name) => return Err(Error::UnsupportedModel(name.clone())),
        })
    }

    /// Reject parameters that make no sense at a reduced operand width.
    pub fn check_width(&self, width: u32) -> Result<()> {
        match *self {
            AdderModel::Loa(k) | AdderModel::Tra(k) if k >= width => Err(Error::InvalidParameter(
                format!("{self}: parameter must be below the operand width {width}"),
            )),
            _ => Ok(()),
        }
    }
}

impl MultModel {
    pub fn tmul(k: u32) -> Result<Self> {
        check_param("tmul", k)?;
        Ok(MultModel::Tmul(k))
    }

    pub fn ppp(r: u32) -> Result<Self> {
        check_param("ppp", r)?;
        Ok(MultModel::Ppp(r))
    }

    pub fn is_fixture(&self) -> bool {
        matches!(self, MultModel::Fixture(_))
    }

    pub fn kernel(&self) -> Result<MultKernel> {
        Ok(match *self {
            MultModel::Acc => MultKernel::Acc,
            MultModel::Tmul(k) => MultKernel::Tmul(k),
            MultModel::Ppp(r) => MultKernel::Ppp(r),
            MultModel::Fixture(ref name) => return Err(Error::UnsupportedModel(name.clone())),
        })
    }

    pub fn check_width(&self, width: u32) -> Result<()> {
        match *self {
            MultModel::Tmul(k) | MultModel::Ppp(k) if k >= width => Err(Error::InvalidParameter(
                format!("{self}: parameter must be below the operand width {width}"),
            )),
            _ => Ok(()),
        }
    }
}

fn check_param(family: &str, value: u32) -> Result<()> {
    if value >= MAX_WIDTH {
        return Err(Error::InvalidParameter(format!(
            "{family}{value}: parameter must be below {MAX_WIDTH}"
        )));
    }
    Ok(())
}

/// Q1.15 addition under `model`: raw 17-bit result, saturated to 16 bits.
pub fn add(model: &AdderModel, a: Fx16, b: Fx16) -> Result<Fx16> {
    let kernel = model.kernel()?;
    Ok(Fx16::saturate(
        kernel.add_raw(16, a.raw() as i32, b.raw() as i32) as i64,
    ))
}

/// Q1.15 multiplication under `model`: raw 32-bit product, rounded half-up on
/// the 15-bit shift, then saturated.
pub fn mul(model: &MultModel, a: Fx16, b: Fx16) -> Result<Fx16> {
    let kernel = model.kernel()?;
    Ok(scale_product(kernel.mul_raw(a.raw() as i32, b.raw() as i32)))
}

#[inline]
pub(crate) fn scale_product(raw: i64) -> Fx16 {
    Fx16::saturate((raw + (1 << 14)) >> 15)
}

fn split_family(token: &str) -> Option<(&str, u32)> {
    let idx = token.find(|c: char| c.is_ascii_digit())?;
    let (family, digits) = token.split_at(idx);
    digits.parse().ok().map(|v| (family, v))
}

fn fixture_token(token: &str, kind: CircuitKind) -> Result<Option<&str>> {
    if let Some(name) = token.strip_prefix("fixture:") {
        if name.is_empty() {
            return Err(Error::Parse("empty fixture name".into()));
        }
        if let Some(known) = fixture_circuit(name) {
            if known.kind != kind {
                return Err(Error::Parse(format!(
                    "fixture `{name}` is not a {kind:?} circuit"
                )));
            }
        }
        return Ok(Some(name));
    }
    match fixture_circuit(token) {
        Some(c) if c.kind == kind => Ok(Some(token)),
        Some(_) => Err(Error::Parse(format!(
            "fixture `{token}` is not a {kind:?} circuit"
        ))),
        None => Ok(None),
    }
}

impl FromStr for AdderModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let token = s.trim();
        if let Some(name) = fixture_token(token, CircuitKind::Adder)? {
            return Ok(AdderModel::Fixture(name.to_string()));
        }
        let lower = token.to_ascii_lowercase();
        if lower == "acc" {
            return Ok(AdderModel::Acc);
        }
        match split_family(&lower) {
            Some(("loa", k)) => AdderModel::loa(k),
            Some(("tra", k)) => AdderModel::tra(k),
            Some(("bcp", b)) => AdderModel::bcp(b),
            _ => Err(Error::Parse(format!("unknown adder model `{token}`"))),
        }
    }
}

impl FromStr for MultModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let token = s.trim();
        if let Some(name) = fixture_token(token, CircuitKind::Multiplier)? {
            return Ok(MultModel::Fixture(name.to_string()));
        }
        let lower = token.to_ascii_lowercase();
        if lower == "acc" {
            return Ok(MultModel::Acc);
        }
        match split_family(&lower) {
            Some(("tmul", k)) => MultModel::tmul(k),
            Some(("ppp", r)) => MultModel::ppp(r),
            _ => Err(Error::Parse(format!("unknown multiplier model `{token}`"))),
        }
    }
}

impl fmt::Display for AdderModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdderModel::Acc => f.write_str("acc"),
            AdderModel::Loa(k) => write!(f, "loa{k}"),
            AdderModel::Tra(k) => write!(f, "tra{k}"),
            AdderModel::Bcp(b) => write!(f, "bcp{b}"),
            AdderModel::Fixture(name) => f.write_str(name),
        }
    }
}

impl fmt::Display for MultModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultModel::Acc => f.write_str("acc"),
            MultModel::Tmul(k) => write!(f, "tmul{k}"),
            MultModel::Ppp(r) => write!(f, "ppp{r}"),
            MultModel::Fixture(name) => f.write_str(name),
        }
    }
}
