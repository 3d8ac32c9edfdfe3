//! Complex numbers over a generic [`Real`] scalar.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct Complex<S> {
    pub re: S,
    pub im: S,
}

impl<S: Real> Complex<S> {
    pub fn new(re: S, im: S) -> Self {
        Complex { re, im }
    }

    pub fn from_re(re: S) -> Self {
        let im = re.clone() - re.clone();
        Complex { re, im }
    }

    pub fn conj(&self) -> Self {
        Complex { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn abs_sq(&self) -> S {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn abs(&self) -> S {
        self.abs_sq().sqrt()
    }

    pub fn arg(&self) -> S {
        self.im.atan2(&self.re)
    }

    pub fn scale(&self, s: &S) -> Self {
        Complex { re: self.re.clone() * s.clone(), im: self.im.clone() * s.clone() }
    }

    pub fn recip(&self) -> Self {
        let d = self.abs_sq();
        Complex { re: self.re.clone() / d.clone(), im: -self.im.clone() / d }
    }

    /// Multiplication by i.
    pub fn mul_i(&self) -> Self {
        Complex { re: -self.im.clone(), im: self.re.clone() }
    }

    pub fn exp(&self) -> Self {
        let r = self.re.exp();
        Complex { re: r.clone() * self.im.cos(), im: r * self.im.sin() }
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite_val() && self.im.is_finite_val()
    }

    pub fn powu(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Complex::from_re(S::from_i64_prec(1, self.re.prec_bits()));
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            n >>= 1;
        }
        acc
    }
}

impl<S: Real> fmt::Display for Complex<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}i", self.re, if self.im >= S::zero() { "+" } else { "" }, self.im)
    }
}

impl<S: Real> Add for Complex<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Complex { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<S: Real> Sub for Complex<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Complex { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl<S: Real> Mul for Complex<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Complex {
            re: self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone(),
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl<S: Real> Div for Complex<S> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let d = rhs.abs_sq();
        let num = self * rhs.conj();
        Complex { re: num.re / d.clone(), im: num.im / d }
    }
}

impl<S: Real> Neg for Complex<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Complex { re: -self.re, im: -self.im }
    }
}

impl<S: Real> Zero for Complex<S> {
    fn zero() -> Self {
        Complex { re: S::zero(), im: S::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl<S: Real> One for Complex<S> {
    fn one() -> Self {
        Complex { re: S::one(), im: S::zero() }
    }
}
