//! MPFR-backed arbitrary-precision scalar.
//!
//! `BigFloat` wraps [`rug::Float`] and normalizes the precision semantics:
//! every binary operation rounds once, into the wider precision of its two
//! operands. All MPFR operations are correctly rounded, which is what makes
//! the bit-exact rerun guarantees of the report formats possible.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::scalar::Real;

#[derive(Clone, Debug)]
pub struct BigFloat(pub Float);

impl BigFloat {
    pub fn with_bits(bits: u32, v: impl Into<f64>) -> Self {
        BigFloat(Float::with_val(bits.max(2), v.into()))
    }

    fn join(a: &BigFloat, b: &BigFloat) -> u32 {
        a.0.prec().max(b.0.prec())
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dec_string())
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl Add for BigFloat {
    type Output = BigFloat;
    fn add(self, rhs: Self) -> Self {
        let p = Self::join(&self, &rhs);
        BigFloat(Float::with_val(p, &self.0 + &rhs.0))
    }
}

impl Sub for BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: Self) -> Self {
        let p = Self::join(&self, &rhs);
        BigFloat(Float::with_val(p, &self.0 - &rhs.0))
    }
}

impl Mul for BigFloat {
    type Output = BigFloat;
    fn mul(self, rhs: Self) -> Self {
        let p = Self::join(&self, &rhs);
        BigFloat(Float::with_val(p, &self.0 * &rhs.0))
    }
}

impl Div for BigFloat {
    type Output = BigFloat;
    fn div(self, rhs: Self) -> Self {
        let p = Self::join(&self, &rhs);
        BigFloat(Float::with_val(p, &self.0 / &rhs.0))
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> Self {
        BigFloat(-self.0)
    }
}

// Constants default to 53 bits: enough that integer bookkeeping built from
// repeated zero()/one() arithmetic (polynomial derivative factors, counters)
// stays exact, while the max-precision promotion rule lets them join
// wider computations without truncating anything.
impl Zero for BigFloat {
    fn zero() -> Self {
        BigFloat(Float::with_val(53, 0))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for BigFloat {
    fn one() -> Self {
        BigFloat(Float::with_val(53, 1))
    }
}

impl Real for BigFloat {
    fn prec_bits(&self) -> u32 {
        self.0.prec()
    }

    fn from_i64_prec(v: i64, bits: u32) -> Self {
        BigFloat(Float::with_val(bits.max(2), v))
    }

    fn from_f64_prec(v: f64, bits: u32) -> Self {
        BigFloat(Float::with_val(bits.max(53), v))
    }

    fn from_ratio_prec(q: &BigRational, bits: u32) -> Self {
        let r = rug::Rational::from_str(&q.to_string()).expect("rational text");
        BigFloat(Float::with_val(bits.max(2), &r))
    }

    fn parse_prec(s: &str, bits: u32) -> Option<Self> {
        Float::parse(s.trim())
            .ok()
            .map(|incomplete| BigFloat(Float::with_val(bits.max(2), incomplete)))
    }

    fn pi(bits: u32) -> Self {
        BigFloat(Float::with_val(bits.max(2), Constant::Pi))
    }

    fn pow2(e: i64, bits: u32) -> Self {
        BigFloat(Float::with_val(bits.max(2), Float::i_exp(1, e as i32)))
    }

    fn abs(&self) -> Self {
        BigFloat(Float::with_val(self.0.prec(), self.0.abs_ref()))
    }

    fn sqrt(&self) -> Self {
        BigFloat(Float::with_val(self.0.prec(), self.0.sqrt_ref()))
    }

    fn exp(&self) -> Self {
        BigFloat(Float::with_val(self.0.prec(), self.0.exp_ref()))
    }

    fn ln(&self) -> Self {
        BigFloat(Float::with_val(self.0.prec(), self.0.ln_ref()))
    }

    fn sin(&self) -> Self {
        BigFloat(Float::with_val(self.0.prec(), self.0.sin_ref()))
    }

    fn cos(&self) -> Self {
        BigFloat(Float::with_val(self.0.prec(), self.0.cos_ref()))
    }

    fn atan2(&self, x: &Self) -> Self {
        let p = Self::join(self, x);
        BigFloat(Float::with_val(p, self.0.atan2_ref(&x.0)))
    }

    fn powi(&self, n: i64) -> Self {
        BigFloat(Float::with_val(self.0.prec(), (&self.0).pow(n as i32)))
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    fn is_finite_val(&self) -> bool {
        self.0.is_finite()
    }

    fn to_exact_rational(&self) -> Option<BigRational> {
        if !self.0.is_finite() {
            return None;
        }
        if self.0.is_zero() {
            return Some(BigRational::zero());
        }
        // finite binary float = mantissa * 2^exp, both exact
        let (mant, exp) = self.0.to_integer_exp()?;
        let m = BigInt::from_str(&mant.to_string()).ok()?;
        let one = BigInt::one();
        if exp >= 0 {
            Some(BigRational::from_integer(m << (exp as usize)))
        } else {
            Some(BigRational::new(m, one << ((-exp) as usize)))
        }
    }

    fn dec_string(&self) -> String {
        if self.0.is_zero() {
            return "0".into();
        }
        // None = as many digits as needed for exact round-trip at this precision
        self.0.to_string_radix(10, None)
    }

    fn round_to(&self, bits: u32) -> Self {
        BigFloat(Float::with_val(bits.max(2), &self.0))
    }
}
