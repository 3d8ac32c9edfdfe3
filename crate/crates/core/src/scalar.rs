//! Scalar abstraction used throughout the crate.
//!
//! All numerical kernels are generic over [`Real`], a real scalar that knows
//! its own working precision. Two implementations ship here: plain `f64`
//! (53 bits, handy for smoke tests and property tests) and the MPFR-backed
//! [`crate::bigfloat::BigFloat`] for session precisions of 256 bits and up.
//! Values carry their precision; binary operations promote to the wider of
//! the two operands, so constants created at low precision never silently
//! truncate a computation.

use std::fmt::{Debug, Display};
use std::marker::PhantomData;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Minimal ring bound shared by polynomial coefficients
/// (satisfied by `f64`, `BigFloat`, `BigRational`, `Complex<S>`).
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
}

impl<T> Ring for T where
    T: Clone
        + Debug
        + PartialEq
        + Zero
        + One
        + Neg<Output = Self>
        + Add<Output = Self>
        + Sub<Output = Self>
        + Mul<Output = Self>
        + Send
        + Sync
        + 'static
{
}

/// Real scalar with precision awareness and the transcendental functions the
/// contour and product engines need.
pub trait Real: Ring + Div<Output = Self> + PartialOrd + Display {
    fn prec_bits(&self) -> u32;

    fn from_i64_prec(v: i64, bits: u32) -> Self;
    fn from_f64_prec(v: f64, bits: u32) -> Self;
    fn from_ratio_prec(q: &BigRational, bits: u32) -> Self;
    /// Parse a decimal string, rounding to `bits`.
    fn parse_prec(s: &str, bits: u32) -> Option<Self>;
    fn pi(bits: u32) -> Self;
    /// 2^e, exact.
    fn pow2(e: i64, bits: u32) -> Self;

    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    /// `self.atan2(x)` = angle of the point `(x, self)`.
    fn atan2(&self, x: &Self) -> Self;
    fn powi(&self, n: i64) -> Self;

    fn to_f64(&self) -> f64;
    fn is_finite_val(&self) -> bool;
    /// The exact rational value of this (binary) float. `None` for
    /// non-finite values.
    fn to_exact_rational(&self) -> Option<BigRational>;
    /// Decimal string with enough digits to reparse bit-exactly at the same
    /// precision.
    fn dec_string(&self) -> String;
    fn round_to(&self, bits: u32) -> Self;

    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }

    fn max_val(self, other: Self) -> Self {
        if other > self { other } else { self }
    }

    fn min_val(self, other: Self) -> Self {
        if other < self { other } else { self }
    }
}

/// Precision context: a lightweight factory for scalars of type `S` at a
/// fixed number of bits.
pub struct Prec<S> {
    pub bits: u32,
    _marker: PhantomData<fn() -> S>,
}

impl<S> Clone for Prec<S> {
    fn clone(&self) -> Self {
        *self
    }
}
impl<S> Copy for Prec<S> {}

impl<S: Real> Prec<S> {
    pub fn new(bits: u32) -> Self {
        Prec { bits, _marker: PhantomData }
    }

    pub fn int(&self, v: i64) -> S {
        S::from_i64_prec(v, self.bits)
    }

    pub fn f64(&self, v: f64) -> S {
        S::from_f64_prec(v, self.bits)
    }

    pub fn ratio(&self, q: &BigRational) -> S {
        S::from_ratio_prec(q, self.bits)
    }

    pub fn parse(&self, s: &str) -> Option<S> {
        S::parse_prec(s, self.bits)
    }

    pub fn pi(&self) -> S {
        S::pi(self.bits)
    }

    pub fn pow2(&self, e: i64) -> S {
        S::pow2(e, self.bits)
    }

    /// Unit roundoff at this precision, 2^-bits.
    pub fn eps(&self) -> S {
        S::pow2(-(self.bits as i64), self.bits)
    }

    pub fn zero(&self) -> S {
        self.int(0)
    }

    pub fn one(&self) -> S {
        self.int(1)
    }
}

impl<S: Real> Debug for Prec<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Prec({})", self.bits)
    }
}

impl Real for f64 {
    fn prec_bits(&self) -> u32 {
        53
    }

    fn from_i64_prec(v: i64, _bits: u32) -> Self {
        v as f64
    }

    fn from_f64_prec(v: f64, _bits: u32) -> Self {
        v
    }

    fn from_ratio_prec(q: &BigRational, _bits: u32) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }

    fn parse_prec(s: &str, _bits: u32) -> Option<Self> {
        s.trim().parse().ok()
    }

    fn pi(_bits: u32) -> Self {
        std::f64::consts::PI
    }

    fn pow2(e: i64, _bits: u32) -> Self {
        (e as f64).exp2()
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }

    fn exp(&self) -> Self {
        f64::exp(*self)
    }

    fn ln(&self) -> Self {
        f64::ln(*self)
    }

    fn sin(&self) -> Self {
        f64::sin(*self)
    }

    fn cos(&self) -> Self {
        f64::cos(*self)
    }

    fn atan2(&self, x: &Self) -> Self {
        f64::atan2(*self, *x)
    }

    fn powi(&self, n: i64) -> Self {
        f64::powi(*self, n as i32)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_finite_val(&self) -> bool {
        self.is_finite()
    }

    fn to_exact_rational(&self) -> Option<BigRational> {
        BigRational::from_float(*self)
    }

    fn dec_string(&self) -> String {
        // {:?} prints the shortest uniquely round-tripping decimal
        format!("{self:?}")
    }

    fn round_to(&self, _bits: u32) -> Self {
        *self
    }
}
