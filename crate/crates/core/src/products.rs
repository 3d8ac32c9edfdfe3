//! Canonical products A(z) = prod (1 - z/t_n), genus 0 or 1, over finite
//! truncations of real or complex zero sets, with a-posteriori rounding
//! bounds, law-aware tail bounds, and the Hamburger-class diagnostic.

use num_traits::{One, Zero};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::scalar::{Prec, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Genus {
    Zero,
    One,
}

/// Known generating laws. A law buys the product an analytic tail bound
/// (valid in the documented range); unlabeled finite zero lists carry no
/// tail claim and downstream reports mark them "truncated, no tail bound".
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProductLaw {
    /// zeros n^2, n = 1..=n_max (genus 0); closed form sin(pi sqrt z)/(pi sqrt z)
    Squares { n_max: u32 },
    /// zeros +-n, n = 1..=n_max (genus 1); closed form sin(pi z)/(pi z)
    Lattice { n_max: u32 },
    /// zeros 2^k, k = k_min..=k_max (genus 0)
    PowersOfTwo { k_min: u32, k_max: u32 },
}

#[derive(Clone, Debug)]
pub struct CanonicalProduct<S> {
    zeros: Vec<Complex<S>>,
    genus: Genus,
    precision_bits: u32,
    law: Option<ProductLaw>,
    all_real: bool,
}

/// Value together with an a-posteriori rounding bound:
/// |err| <= 2^-(precision_bits-10) * |value| * (#factors).
#[derive(Clone, Debug)]
pub struct Evaluated<S> {
    pub value: Complex<S>,
    pub rounding_bound: S,
}

impl<S: Real> CanonicalProduct<S> {
    pub fn new(zeros: Vec<Complex<S>>, genus: Genus, precision_bits: u32) -> Result<Self> {
        Self::with_law(zeros, genus, precision_bits, None)
    }

    pub fn with_law(
        zeros: Vec<Complex<S>>,
        genus: Genus,
        precision_bits: u32,
        law: Option<ProductLaw>,
    ) -> Result<Self> {
        for (i, z) in zeros.iter().enumerate() {
            if z.is_zero() {
                return Err(Error::invalid(format!("zero #{i} is 0; 0 cannot be a zero")));
            }
        }
        let all_real = zeros.iter().all(|z| z.im.is_zero());
        if all_real {
            let mut sorted: Vec<&Complex<S>> = zeros.iter().collect();
            sorted.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
            for w in sorted.windows(2) {
                if w[0].re == w[1].re {
                    return Err(Error::invalid(format!(
                        "repeated real zero {}; real products must have simple zeros",
                        w[0].re
                    )));
                }
            }
        }
        Ok(CanonicalProduct { zeros, genus, precision_bits, law, all_real })
    }

    pub fn from_real_zeros(zeros: &[S], genus: Genus, precision_bits: u32) -> Result<Self> {
        Self::new(zeros.iter().cloned().map(Complex::from_re).collect(), genus, precision_bits)
    }

    pub fn zeros(&self) -> &[Complex<S>] {
        &self.zeros
    }

    pub fn real_zeros(&self) -> Option<Vec<S>> {
        if self.all_real {
            Some(self.zeros.iter().map(|z| z.re.clone()).collect())
        } else {
            None
        }
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn law(&self) -> Option<&ProductLaw> {
        self.law.as_ref()
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    fn prec(&self) -> Prec<S> {
        Prec::new(self.precision_bits)
    }

    /// The finite product over the stored zeros, genus factors included.
    pub fn eval(&self, z: &Complex<S>) -> Evaluated<S> {
        let mut acc = Complex::<S>::one();
        let one = Complex::<S>::one();
        for t in &self.zeros {
            let factor = one.clone() - z.clone() / t.clone();
            let factor = match self.genus {
                Genus::Zero => factor,
                Genus::One => factor * (z.clone() / t.clone()).exp(),
            };
            acc = acc * factor;
            if acc.is_zero() {
                // z is a stored zero; the value 0 is exact
                return Evaluated { value: acc, rounding_bound: S::zero() };
            }
        }
        let p = self.prec();
        let bound = p.pow2(-(self.precision_bits as i64 - 10))
            * acc.abs()
            * p.int(self.zeros.len() as i64);
        Evaluated { value: acc, rounding_bound: bound }
    }

    /// Logarithmic derivative sum: A'(z)/A(z) = sum 1/(z - t_j) (+ genus
    /// terms). Only valid off the zero set.
    pub fn log_derivative(&self, z: &Complex<S>) -> Complex<S> {
        let mut acc = Complex::<S>::zero();
        let one = Complex::<S>::one();
        for t in &self.zeros {
            acc = acc + (z.clone() - t.clone()).recip();
            if matches!(self.genus, Genus::One) {
                acc = acc + one.clone() / t.clone();
            }
        }
        acc
    }

    /// A'(t_k) at the k-th stored zero: the only term of the product rule
    /// that survives is the one differentiating the vanishing factor.
    pub fn derivative_at_zero(&self, k: usize) -> Result<Complex<S>> {
        let tk = self
            .zeros
            .get(k)
            .ok_or_else(|| Error::invalid(format!("zero index {k} out of range")))?
            .clone();
        let one = Complex::<S>::one();
        // d/dz [(1 - z/t) e^{z/t}] at z = t is -e/t for genus 1, -1/t for genus 0
        let mut acc = -(one.clone() / tk.clone());
        if matches!(self.genus, Genus::One) {
            acc = acc.scale(&S::one().exp());
        }
        for (j, t) in self.zeros.iter().enumerate() {
            if j == k {
                continue;
            }
            let factor = one.clone() - tk.clone() / t.clone();
            let factor = match self.genus {
                Genus::Zero => factor,
                Genus::One => factor * (tk.clone() / t.clone()).exp(),
            };
            acc = acc * factor;
        }
        Ok(acc)
    }

    /// Real-zero convenience: A'(t_k) as a real scalar.
    pub fn derivative_at_real_zero(&self, k: usize) -> Result<S> {
        if !self.all_real {
            return Err(Error::invalid("product has complex zeros"));
        }
        Ok(self.derivative_at_zero(k)?.re)
    }

    /// Relative tail bound |A_full(z)/A_truncated(z) - 1| <= bound, when the
    /// law knows one and `z` is in its validity range.
    pub fn tail_bound(&self, z: &Complex<S>) -> Option<S> {
        let p = self.prec();
        let law = self.law.as_ref()?;
        match law {
            ProductLaw::Squares { n_max } => {
                // |log(1 - z/n^2)| <= 2|z|/n^2 for |z| <= n^2/2;
                // sum over n > N is <= 2|z|/N
                let n = p.int(*n_max as i64);
                let r = z.abs();
                if r > n.clone() * n.clone() / p.int(2) {
                    return None;
                }
                Some((p.int(2) * r / n).exp() - p.one())
            }
            ProductLaw::Lattice { n_max } => {
                // pairs to prod (1 - z^2/n^2); bound exp(2|z|^2/N) - 1 for |z|^2 <= N/2
                let n = p.int(*n_max as i64);
                let r2 = z.abs_sq();
                if r2 > n.clone() / p.int(2) {
                    return None;
                }
                Some((p.int(2) * r2 / n).exp() - p.one())
            }
            ProductLaw::PowersOfTwo { k_max, .. } => {
                // sum over k > k_max of 2|z|/2^k = 4|z|/2^{k_max+1}
                let r = z.abs();
                let cap = p.pow2(*k_max as i64 + 1);
                if r > cap.clone() / p.int(2) {
                    return None;
                }
                Some((p.int(4) * r / cap).exp() - p.one())
            }
        }
    }
}

/// Genus-0 product over a lacunary sequence; rejects inputs that are not
/// lacunary at the given ratio.
pub fn make_lacunary<S: Real>(
    seed_zeros: Vec<Complex<S>>,
    ratio_check: &S,
    precision_bits: u32,
) -> Result<CanonicalProduct<S>> {
    if *ratio_check <= S::one() {
        return Err(Error::invalid("lacunary ratio must exceed 1"));
    }
    if seed_zeros.is_empty() {
        return Err(Error::invalid("lacunary product needs at least one zero"));
    }
    for k in 0..seed_zeros.len() - 1 {
        let a = seed_zeros[k].abs();
        let b = seed_zeros[k + 1].abs();
        if b < ratio_check.clone() * a {
            return Err(Error::invalid(format!(
                "lacunary ratio violated at index {k}: |z_{}|/|z_{k}| < ratio",
                k + 1
            )));
        }
    }
    CanonicalProduct::new(seed_zeros, Genus::Zero, precision_bits)
}

// ---------------------------------------------------------------------------
// Hamburger diagnostic
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Inconsistent,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trend {
    Increasing,
    Decreasing,
    Mixed,
}

/// Trend of the tail of a positive sequence: strictly monotone over the last
/// half of the data, or mixed.
pub fn tail_trend<S: Real>(values: &[S]) -> Option<Trend> {
    if values.len() < 4 {
        return None;
    }
    let tail = &values[values.len() / 2..];
    let inc = tail.windows(2).all(|w| w[1] > w[0]);
    let dec = tail.windows(2).all(|w| w[1] < w[0]);
    Some(if inc {
        Trend::Increasing
    } else if dec {
        Trend::Decreasing
    } else {
        Trend::Mixed
    })
}

#[derive(Clone, Debug)]
pub struct HamburgerDiagnostic<S> {
    pub m_tested: Vec<S>,
    /// per M: min over zeros of |B'(s_k)| / |s_k|^M
    pub min_ratio: Vec<S>,
    pub trends: Vec<Option<Trend>>,
    pub verdict: Verdict,
}

/// Finite-scale probe of the Hamburger-class condition |s_k|^M = o(|B'(s_k)|):
/// for each M the ratio table |B'(s_k)|/|s_k|^M over zeros ordered by |s_k|.
/// Decreasing over the last half of the window argues against membership;
/// the condition is asymptotic, so the verdict is three-valued.
pub fn hamburger_check<S: Real>(
    p: &CanonicalProduct<S>,
    m_list: &[S],
) -> Result<HamburgerDiagnostic<S>> {
    let zeros = p
        .real_zeros()
        .ok_or_else(|| Error::invalid("hamburger check requires real zeros"))?;
    let mut order: Vec<usize> = (0..zeros.len()).collect();
    order.sort_by(|&a, &b| zeros[a].abs().partial_cmp(&zeros[b].abs()).unwrap());
    // collapse equal-|t| entries (the +-t pairs of even products)
    let mut grouped: Vec<usize> = Vec::new();
    for &k in &order {
        match grouped.last() {
            Some(&prev) if zeros[prev].abs() == zeros[k].abs() => {}
            _ => grouped.push(k),
        }
    }
    let order = grouped;
    let derivs: Vec<S> = order
        .iter()
        .map(|&k| p.derivative_at_real_zero(k).map(|d| d.abs()))
        .collect::<Result<_>>()?;
    let mut min_ratio = Vec::new();
    let mut trends = Vec::new();
    let mut any_dec = false;
    let mut all_inc = true;
    for m in m_list {
        let ratios: Vec<S> = order
            .iter()
            .zip(&derivs)
            .map(|(&k, d)| {
                let t = zeros[k].abs();
                d.clone() / (t.ln() * m.clone()).exp()
            })
            .collect();
        let mut mn = ratios[0].clone();
        for r in &ratios {
            mn = mn.min_val(r.clone());
        }
        min_ratio.push(mn);
        let t = tail_trend(&ratios);
        match t {
            Some(Trend::Decreasing) => {
                any_dec = true;
                all_inc = false;
            }
            Some(Trend::Increasing) => {}
            _ => all_inc = false,
        }
        trends.push(t);
    }
    let verdict = if zeros.len() < 4 || m_list.is_empty() {
        Verdict::Inconclusive
    } else if any_dec {
        Verdict::Inconsistent
    } else if all_inc {
        Verdict::Consistent
    } else {
        Verdict::Inconclusive
    };
    Ok(HamburgerDiagnostic { m_tested: m_list.to_vec(), min_ratio, trends, verdict })
}

// ---------------------------------------------------------------------------
// JSON format
// ---------------------------------------------------------------------------

impl<S: Real> CanonicalProduct<S> {
    pub fn to_json(&self) -> serde_json::Value {
        let zeros: Vec<serde_json::Value> = self
            .zeros
            .iter()
            .map(|z| {
                if z.im.is_zero() {
                    serde_json::Value::String(z.re.dec_string())
                } else {
                    serde_json::json!({"re": z.re.dec_string(), "im": z.im.dec_string()})
                }
            })
            .collect();
        let law = self.law.as_ref().map(|l| match l {
            ProductLaw::Squares { n_max } => format!("squares n<={n_max}"),
            ProductLaw::Lattice { n_max } => format!("lattice |n|<={n_max}"),
            ProductLaw::PowersOfTwo { k_min, k_max } => format!("pow2 k={k_min}..{k_max}"),
        });
        serde_json::json!({
            "zeros": zeros,
            "genus": match self.genus { Genus::Zero => 0, Genus::One => 1 },
            "law": law,
            "precision_bits": self.precision_bits,
        })
    }

    pub fn from_json(doc: &serde_json::Value, session_bits: u32) -> Result<Self> {
        let bits = doc
            .get("precision_bits")
            .and_then(|v| v.as_u64())
            .map(|v| v as u32)
            .unwrap_or(session_bits);
        let genus = match doc.get("genus").and_then(|v| v.as_u64()) {
            Some(0) => Genus::Zero,
            Some(1) => Genus::One,
            _ => return Err(Error::invalid("product genus must be 0 or 1")),
        };
        let zeros_doc = doc
            .get("zeros")
            .and_then(|v| v.as_array())
            .ok_or_else(|| Error::invalid("product requires a zeros array"))?;
        let parse_s = |v: &serde_json::Value| -> Result<S> {
            let txt = match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) => n.to_string(),
                other => return Err(Error::invalid(format!("bad zero entry {other}"))),
            };
            S::parse_prec(&txt, bits).ok_or_else(|| Error::invalid(format!("bad number {txt:?}")))
        };
        let zeros: Vec<Complex<S>> = zeros_doc
            .iter()
            .map(|v| {
                if let Some(obj) = v.as_object() {
                    let re = parse_s(obj.get("re").unwrap_or(&serde_json::Value::Null))?;
                    let im = parse_s(obj.get("im").unwrap_or(&serde_json::Value::Null))?;
                    Ok(Complex::new(re, im))
                } else {
                    Ok(Complex::from_re(parse_s(v)?))
                }
            })
            .collect::<Result<_>>()?;
        CanonicalProduct::new(zeros, genus, bits)
    }
}

// ---------------------------------------------------------------------------
// Law-aware constructors and closed forms (oracles live in tests; these are
// the production generators that carry tail bounds)
// ---------------------------------------------------------------------------

pub fn squares_product<S: Real>(n_max: u32, bits: u32) -> CanonicalProduct<S> {
    let p = Prec::<S>::new(bits);
    let zeros: Vec<Complex<S>> =
        (1..=n_max as i64).map(|n| Complex::from_re(p.int(n * n))).collect();
    CanonicalProduct::with_law(zeros, Genus::Zero, bits, Some(ProductLaw::Squares { n_max }))
        .expect("squares product is valid")
}

/// Integer lattice product over +-n, n <= n_max, genus 1 (sum 1/|t| diverges
/// over the full law, so the genus-1 factors are mandatory).
pub fn lattice_product<S: Real>(n_max: u32, bits: u32) -> CanonicalProduct<S> {
    let p = Prec::<S>::new(bits);
    let mut zeros: Vec<Complex<S>> = Vec::new();
    for n in 1..=n_max as i64 {
        zeros.push(Complex::from_re(p.int(-n)));
        zeros.push(Complex::from_re(p.int(n)));
    }
    zeros.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
    CanonicalProduct::with_law(zeros, Genus::One, bits, Some(ProductLaw::Lattice { n_max }))
        .expect("lattice product is valid")
}

pub fn powers_of_two_product<S: Real>(k_min: u32, k_max: u32, bits: u32) -> CanonicalProduct<S> {
    let p = Prec::<S>::new(bits);
    let zeros: Vec<Complex<S>> =
        (k_min..=k_max).map(|k| Complex::from_re(p.pow2(k as i64))).collect();
    CanonicalProduct::with_law(
        zeros,
        Genus::Zero,
        bits,
        Some(ProductLaw::PowersOfTwo { k_min, k_max }),
    )
    .expect("pow2 product is valid")
}
