//! Dense univariate polynomials over an arbitrary coefficient ring.
//!
//! Used with exact rational coefficients for the canonical-system structure
//! pairs and the test oracles, and with floating scalars for evaluation.

use num_traits::{One, Zero};

use crate::complex::Complex;
use crate::scalar::{Real, Ring};

/// Coefficients in ascending order; `coeffs` is empty only for the zero
/// polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().map(Zero::is_zero).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero_poly() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    pub fn x() -> Self {
        Poly::new(vec![T::zero(), T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() { None } else { Some(self.coeffs.len() - 1) }
    }

    pub fn is_zero_poly(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) - other.coeff(k));
        }
        Poly::new(out)
    }

    pub fn neg(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero_poly() || other.is_zero_poly() {
            return Poly::zero_poly();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, s: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero_poly();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        let mut k = T::one();
        for c in &self.coeffs[1..] {
            out.push(c.clone() * k.clone());
            k = k + T::one();
        }
        Poly::new(out)
    }

    /// Horner evaluation in the coefficient ring.
    pub fn eval(&self, z: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z.clone() + c.clone();
        }
        acc
    }

    pub fn from_roots(roots: &[T]) -> Self {
        let mut p = Poly::constant(T::one());
        for r in roots {
            p = p.mul(&Poly::new(vec![-r.clone(), T::one()]));
        }
        p
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

// by-value ring operations so Poly<T> itself satisfies `Ring` (used for
// polynomial-entry matrices)
impl<T: Ring> std::ops::Add for Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Self) -> Poly<T> {
        Poly::add(&self, &rhs)
    }
}

impl<T: Ring> std::ops::Sub for Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Self) -> Poly<T> {
        Poly::sub(&self, &rhs)
    }
}

impl<T: Ring> std::ops::Mul for Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Self) -> Poly<T> {
        Poly::mul(&self, &rhs)
    }
}

impl<T: Ring> std::ops::Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::neg(&self)
    }
}

impl<T: Ring> Zero for Poly<T> {
    fn zero() -> Self {
        Poly::zero_poly()
    }
    fn is_zero(&self) -> bool {
        self.is_zero_poly()
    }
}

impl<T: Ring> One for Poly<T> {
    fn one() -> Self {
        Poly::constant(T::one())
    }
}

impl<S: Real> Poly<S> {
    /// Horner evaluation of a real-coefficient polynomial at a complex point.
    pub fn eval_complex(&self, z: &Complex<S>) -> Complex<S> {
        let mut acc = Complex::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z.clone() + Complex::from_re(c.clone());
        }
        acc
    }

    /// Upper bound on the modulus of every root (Fujiwara bound:
    /// 2 max_i |c_{d-i}/c_d|^{1/i}), which stays tight when the leading
    /// coefficient is tiny.
    pub fn root_bound(&self) -> Option<S> {
        let d = self.degree()?;
        if d == 0 {
            return None;
        }
        let lead = self.coeffs[d].abs();
        let mut m = S::zero();
        for (i, c) in self.coeffs[..d].iter().enumerate() {
            let ratio = c.abs() / lead.clone();
            if ratio.is_zero() {
                continue;
            }
            let root = (ratio.ln() / S::from_i64_prec((d - i) as i64, c.prec_bits())).exp();
            m = m.max_val(root);
        }
        Some((S::one() + S::one()) * m.max_val(S::one()))
    }
}

/// 2x2 matrix over a ring, sufficient for the transfer-matrix products.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Ring> Mat2<T> {
    pub fn identity() -> Self {
        Mat2 { a: T::one(), b: T::zero(), c: T::zero(), d: T::one() }
    }

    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Mat2 {
            a: self.a.clone() * o.a.clone() + self.b.clone() * o.c.clone(),
            b: self.a.clone() * o.b.clone() + self.b.clone() * o.d.clone(),
            c: self.c.clone() * o.a.clone() + self.d.clone() * o.c.clone(),
            d: self.c.clone() * o.b.clone() + self.d.clone() * o.d.clone(),
        }
    }

    pub fn det(&self) -> T {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_and_eval() {
        let p = Poly::from_roots(&[1.0f64, 2.0, 3.0]);
        assert_eq!(p.degree(), Some(3));
        assert!(p.eval(&2.0).abs() < 1e-12);
        assert!((p.eval(&0.0) - (-6.0)).abs() < 1e-12);
        let d = p.derivative();
        // p = (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
        assert_eq!(d.coeffs(), &[11.0, -12.0, 3.0]);
    }

    #[test]
    fn mat2_det() {
        let m = Mat2::new(1.0f64, 2.0, 3.0, 4.0);
        assert_eq!(m.det(), -2.0);
        let id = Mat2::<f64>::identity();
        assert_eq!(m.mul(&id), m);
    }
}
