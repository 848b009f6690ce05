use std::cell::Cell;
use std::fmt;
use std::str::FromStr;

use super::models::{scale_product, AdderKernel, AdderModel, MultKernel, MultModel};
use super::{ComplexFx16, Fx16};
use crate::{Error, Result};

/// Scalar arithmetic on Q1.15 words, as seen by the transform code.
pub trait Arith {
    /// Raw 17-bit sum, before saturation.
    fn add_wide(&self, a: Fx16, b: Fx16) -> i32;

    fn mul(&self, a: Fx16, b: Fx16) -> Fx16;

    #[inline]
    fn add(&self, a: Fx16, b: Fx16) -> Fx16 {
        Fx16::saturate(self.add_wide(a, b) as i64)
    }

    /// `a - b` as the addition of the saturating two's-complement negation.
    #[inline]
    fn sub(&self, a: Fx16, b: Fx16) -> Fx16 {
        self.add(a, b.saturating_neg())
    }
}

impl<A: Arith + ?Sized> Arith for &A {
    #[inline]
    fn add_wide(&self, a: Fx16, b: Fx16) -> i32 {
        (**self).add_wide(a, b)
    }

    #[inline]
    fn mul(&self, a: Fx16, b: Fx16) -> Fx16 {
        (**self).mul(a, b)
    }
}

/// A named (adder, multiplier) pair injected into every butterfly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OperatorPair {
    pub name: String,
    pub adder: AdderModel,
    pub mult: MultModel,
}

impl OperatorPair {
    /// Pair named by its canonical token string, e.g. `loa4+tmul6`.
    pub fn new(adder: AdderModel, mult: MultModel) -> Self {
        let name = format!("{adder}+{mult}");
        OperatorPair { name, adder, mult }
    }

    /// The accurate `acc+acc` baseline.
    pub fn accurate() -> Self {
        Self::new(AdderModel::Acc, MultModel::Acc)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn is_accurate(&self) -> bool {
        self.adder == AdderModel::Acc && self.mult == MultModel::Acc
    }

    pub fn is_functional(&self) -> bool {
        !self.adder.is_fixture() && !self.mult.is_fixture()
    }

    /// Resolve to the executable kernel; fails for fixture-only pairs.
    pub fn kernel(&self) -> Result<PairKernel> {
        let adder = self.adder.kernel().map_err(|_| self.unsupported())?;
        let mult = self.mult.kernel().map_err(|_| self.unsupported())?;
        Ok(PairKernel { adder, mult })
    }

    fn unsupported(&self) -> Error {
        Error::UnsupportedModel(self.name.clone())
    }
}

impl FromStr for OperatorPair {
    type Err = Error;

    /// Grammar: `<adder>+<mult>`, e.g. `acc+acc`, `bcp4+ppp3`,
    /// `fixture:add16se_3BD+fixture:mul16s_HFB`.
    fn from_str(s: &str) -> Result<Self> {
        let (adder, mult) = s
            .trim()
            .split_once('+')
            .ok_or_else(|| Error::Parse(format!("pair `{s}` must have the form <adder>+<mult>")))?;
        Ok(OperatorPair::new(adder.parse()?, mult.parse()?))
    }
}

impl fmt::Display for OperatorPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Executable form of a functional [`OperatorPair`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairKernel {
    pub adder: AdderKernel,
    pub mult: MultKernel,
}

impl PairKernel {
    pub const ACCURATE: PairKernel = PairKernel {
        adder: AdderKernel::Acc,
        mult: MultKernel::Acc,
    };
}

impl Arith for PairKernel {
    #[inline]
    fn add_wide(&self, a: Fx16, b: Fx16) -> i32 {
        self.adder.add_raw(16, a.raw() as i32, b.raw() as i32)
    }

    #[inline]
    fn mul(&self, a: Fx16, b: Fx16) -> Fx16 {
        scale_product(self.mult.mul_raw(a.raw() as i32, b.raw() as i32))
    }
}

/// Instrumented wrapper that counts every adder and multiplier invocation.
#[derive(Debug, Default)]
pub struct Counting<A> {
    inner: A,
    adds: Cell<u64>,
    muls: Cell<u64>,
}

impl<A> Counting<A> {
    pub fn new(inner: A) -> Self {
        Counting {
            inner,
            adds: Cell::new(0),
            muls: Cell::new(0),
        }
    }

    pub fn adds(&self) -> u64 {
        self.adds.get()
    }

    pub fn muls(&self) -> u64 {
        self.muls.get()
    }

    pub fn reset(&self) {
        self.adds.set(0);
        self.muls.set(0);
    }
}

impl<A: Arith> Arith for Counting<A> {
    fn add_wide(&self, a: Fx16, b: Fx16) -> i32 {
        self.adds.set(self.adds.get() + 1);
        self.inner.add_wide(a, b)
    }

    fn mul(&self, a: Fx16, b: Fx16) -> Fx16 {
        self.muls.set(self.muls.get() + 1);
        self.inner.mul(a, b)
    }
}

/// Complex multiply with 4 multiplier and 2 adder invocations.
#[inline]
pub fn cmul<A: Arith + ?Sized>(arith: &A, x: ComplexFx16, y: ComplexFx16) -> ComplexFx16 {
    let rr = arith.mul(x.re, y.re);
    let ii = arith.mul(x.im, y.im);
    let ri = arith.mul(x.re, y.im);
    let ir = arith.mul(x.im, y.re);
    ComplexFx16 {
        re: arith.sub(rr, ii),
        im: arith.add(ri, ir),
    }
}
