//! Numerical laboratory for spaces of Cauchy transforms of discrete measures.
//!
//! The crate builds finite truncations of the spaces H(T, mu) of Cauchy
//! transforms f(z) = sum a_n mu_n^{1/2}/(z - t_n), locates and certifies the
//! zeros of their entire counterparts F = A f by the argument principle,
//! and runs desk-scale diagnostics for zero localization, attraction-set
//! ordering, weighted polynomial density, and finite-stage canonical systems.
//!
//! Everything numeric is generic over the [`scalar::Real`] scalar; use `f64`
//! for quick experiments and [`bigfloat::BigFloat`] (MPFR) for session
//! precisions of 256 bits and beyond.

pub mod bigfloat;
pub mod cansys;
pub mod cauchy;
pub mod complex;
pub mod density;
pub mod error;
pub mod exact;
pub mod localize;
pub mod measure;
pub mod poly;
pub mod products;
pub mod scalar;
pub mod zeros;

pub use bigfloat::BigFloat;
pub use complex::Complex;
pub use error::{Error, Result};
pub use scalar::{Prec, Real};

/// Default session precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;

/// Concrete aliases for the two scalar lanes.
pub type F64 = f64;
pub type Big = BigFloat;
pub type CBig = Complex<BigFloat>;
pub type C64 = Complex<f64>;
