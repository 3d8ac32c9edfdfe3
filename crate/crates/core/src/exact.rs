//! Exact rational arithmetic paths.
//!
//! Finite canonical products over rational zero sets have rational values and
//! derivatives; several diagnostics (canonical Hamburger series, projection
//! oracles, structure-pair roots) are kept exact through this module so the
//! floating pipeline can be checked against an independent route.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::Poly;

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// 2^e as an exact rational (e may be negative).
pub fn pow2(e: i64) -> BigRational {
    let one = BigInt::one();
    if e >= 0 {
        BigRational::from_integer(one << (e as usize))
    } else {
        BigRational::new(one.clone(), one << ((-e) as usize))
    }
}

/// prod_{j} (1 - x/t_j) over rational zeros, genus 0.
pub fn product_value(zeros: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::one();
    for t in zeros {
        acc *= BigRational::one() - x / t;
    }
    acc
}

/// Derivative of the genus-0 product at its k-th zero:
/// (-1/t_k) * prod_{j != k} (1 - t_k/t_j).
pub fn product_derivative_at_zero(zeros: &[BigRational], k: usize) -> BigRational {
    let tk = &zeros[k];
    let mut acc = -tk.recip();
    for (j, t) in zeros.iter().enumerate() {
        if j != k {
            acc *= BigRational::one() - tk / t;
        }
    }
    acc
}

/// Real-root isolation for exact polynomials via Sturm chains. Serves as
/// the independent root oracle for the structure-pair interlacing checks.
pub struct SturmChain {
    chain: Vec<Poly<BigRational>>,
}

impl SturmChain {
    pub fn new(p: &Poly<BigRational>) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero_poly() {
                chain.pop();
                break;
            }
            let rem = poly_rem(&chain[n - 2], &chain[n - 1]);
            if rem.is_zero_poly() {
                break;
            }
            chain.push(rem.neg());
        }
        SturmChain { chain }
    }

    fn sign_changes(&self, x: &BigRational) -> usize {
        let mut last = 0i8;
        let mut changes = 0;
        for p in &self.chain {
            let v = p.eval(x);
            let s = if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            };
            if s != 0 {
                if last != 0 && s != last {
                    changes += 1;
                }
                last = s;
            }
        }
        changes
    }

    /// Number of distinct real roots in the half-open interval (a, b].
    pub fn count_roots(&self, a: &BigRational, b: &BigRational) -> usize {
        self.sign_changes(a) - self.sign_changes(b)
    }
}

/// Isolate all real roots of `p` (assumed squarefree over the search window)
/// to intervals narrower than `width`. Returns sorted disjoint intervals,
/// one root in each.
pub fn isolate_real_roots(
    p: &Poly<BigRational>,
    lo: &BigRational,
    hi: &BigRational,
    width: &BigRational,
) -> Vec<(BigRational, BigRational)> {
    let chain = SturmChain::new(p);
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone())];
    while let Some((a, b)) = stack.pop() {
        let n = chain.count_roots(&a, &b);
        if n == 0 {
            continue;
        }
        let w = &b - &a;
        if n == 1 && w < *width {
            out.push((a, b));
            continue;
        }
        let mid = (&a + &b) / int(2);
        // nudge off an exact root of the chain head
        let mid = if p.eval(&mid).is_zero() {
            (&mid + &b) / int(2)
        } else {
            mid
        };
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

fn poly_rem(num: &Poly<BigRational>, den: &Poly<BigRational>) -> Poly<BigRational> {
    let dd = den.degree().expect("nonzero divisor");
    let lead = den.coeff(dd);
    let mut rem = num.clone();
    while let Some(rd) = rem.degree() {
        if rd < dd {
            break;
        }
        let factor = rem.coeff(rd) / lead.clone();
        let mut shift = vec![BigRational::zero(); rd - dd];
        shift.push(factor);
        rem = rem.sub(&den.mul(&Poly::new(shift)));
    }
    rem
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_derivative_matches_symbolic() {
        // A(z) = (1-z)(1-z/2)(1-z/3), A'(2) = 1/6
        let zeros = vec![int(1), int(2), int(3)];
        let d = product_derivative_at_zero(&zeros, 1);
        assert_eq!(d, ratio(1, 6));
    }

    #[test]
    fn sturm_isolates_quadratic_roots() {
        // 6z^2 - 22z + 18: roots (11 +- sqrt(13))/6
        let p = Poly::new(vec![int(18), int(-22), int(6)]);
        let roots = isolate_real_roots(&p, &int(0), &int(4), &ratio(1, 1 << 30));
        assert_eq!(roots.len(), 2);
        let mid0 = (&roots[0].0 + &roots[0].1) / int(2);
        let approx = 1.2324081207560018f64; // (11 - sqrt(13))/6
        assert!((num_traits::ToPrimitive::to_f64(&mid0).unwrap() - approx).abs() < 1e-8);
    }
}
