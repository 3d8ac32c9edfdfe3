//! Discrete measures (T, mu): construction, validation, separation and decay
//! diagnostics, the example measure generators, and the JSON file format.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact;
use crate::scalar::{Prec, Real};

/// A point mass. Weights are kept exact when the generating law produces
/// rationals (powers of two, |A'|^-2 over rational supports); otherwise they
/// are rounded once to the session precision.
#[derive(Clone, Debug, PartialEq)]
pub enum Weight<S> {
    Exact(BigRational),
    Approx(S),
}

impl<S: Real> Weight<S> {
    pub fn to_scalar(&self, bits: u32) -> S {
        match self {
            Weight::Exact(q) => S::from_ratio_prec(q, bits),
            Weight::Approx(v) => v.clone(),
        }
    }

    /// Exact rational value of the stored weight. Always available: a stored
    /// float is itself a rational.
    pub fn to_rational(&self) -> BigRational {
        match self {
            Weight::Exact(q) => q.clone(),
            Weight::Approx(v) => v.to_exact_rational().expect("finite weight"),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Weight::Exact(_))
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Weight::Exact(q) => q.is_positive(),
            Weight::Approx(v) => *v > S::zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure<S> {
    pub label: String,
    support: Vec<S>,
    weights: Vec<Weight<S>>,
    /// Paper index of the first support point; for two-sided supports the
    /// indices skip 0 (0 is never in T).
    index_offset: i64,
}

impl<S: Real> DiscreteMeasure<S> {
    pub fn new(
        label: impl Into<String>,
        support: Vec<S>,
        weights: Vec<Weight<S>>,
        index_offset: i64,
    ) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::invalid("empty support"));
        }
        if support.len() != weights.len() {
            return Err(Error::invalid(format!(
                "support has {} points but {} weights given",
                support.len(),
                weights.len()
            )));
        }
        Ok(DiscreteMeasure { label: label.into(), support, weights, index_offset })
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn support(&self) -> &[S] {
        &self.support
    }

    pub fn weights(&self) -> &[Weight<S>] {
        &self.weights
    }

    pub fn weight_scalar(&self, i: usize, bits: u32) -> S {
        self.weights[i].to_scalar(bits)
    }

    pub fn index_offset(&self) -> i64 {
        self.index_offset
    }

    /// Paper index of the i-th stored point (skips 0 for two-sided supports).
    pub fn index_of(&self, i: usize) -> i64 {
        let mut n = self.index_offset + i as i64;
        if self.index_offset <= 0 && n >= 0 {
            n += 1;
        }
        n
    }

    /// Distance from the i-th point to its nearest neighbor.
    pub fn min_gap_at(&self, i: usize) -> S {
        let mut gap: Option<S> = None;
        if i > 0 {
            gap = Some(self.support[i].clone() - self.support[i - 1].clone());
        }
        if i + 1 < self.support.len() {
            let up = self.support[i + 1].clone() - self.support[i].clone();
            gap = Some(match gap {
                Some(g) => g.min_val(up),
                None => up,
            });
        }
        gap.unwrap_or_else(|| self.support[i].abs())
    }

    /// All exactly-stored weights? (enables the exact series paths)
    pub fn all_weights_exact(&self) -> bool {
        self.weights.iter().all(Weight::is_exact)
    }

    /// Support as exact rationals (binary floats convert exactly).
    pub fn support_rationals(&self) -> Vec<BigRational> {
        self.support
            .iter()
            .map(|t| t.to_exact_rational().expect("finite support point"))
            .collect()
    }

    pub fn validate(&self, bits: u32) -> ValidationReport<S> {
        let mut violations = Vec::new();
        for (i, t) in self.support.iter().enumerate() {
            if t.is_zero() {
                violations.push(format!("support[{i}] is 0 (0 must not lie in the support)"));
            }
        }
        for i in 1..self.support.len() {
            if self.support[i] <= self.support[i - 1] {
                violations.push(format!(
                    "support not strictly increasing at positions {} -> {}",
                    i - 1,
                    i
                ));
            }
        }
        for (i, w) in self.weights.iter().enumerate() {
            if !w.is_positive() {
                violations.push(format!("weight[{i}] is not strictly positive"));
            }
        }
        let p = Prec::<S>::new(bits);
        let mut poisson = p.zero();
        for (i, t) in self.support.iter().enumerate() {
            let t2 = t.clone() * t.clone();
            poisson = poisson + self.weight_scalar(i, bits) / (p.one() + t2);
        }
        ValidationReport { valid: violations.is_empty(), violations, poisson_partial_sum: poisson }
    }

    pub fn check_power_separation(&self, c: &S, n_exp: i64) -> Result<SeparationCertificate<S>> {
        if *c <= S::zero() {
            return Err(Error::invalid("separation constant C must be positive"));
        }
        if self.support.len() < 2 {
            return Ok(SeparationCertificate {
                c: c.clone(),
                n_exp,
                satisfied: true,
                worst_index: 0,
                worst_margin: None,
            });
        }
        let mut worst: Option<(usize, S)> = None;
        for i in 0..self.support.len() - 1 {
            let gap = self.support[i + 1].clone() - self.support[i].clone();
            let bound = c.clone() * self.support[i].abs().powi(-n_exp);
            // margin = gap / bound; satisfied iff margin >= 1 everywhere
            let margin = gap / bound;
            match &worst {
                Some((_, m)) if *m <= margin => {}
                _ => worst = Some((i, margin)),
            }
        }
        let (worst_index, margin) = worst.unwrap();
        Ok(SeparationCertificate {
            c: c.clone(),
            n_exp,
            satisfied: margin >= S::one(),
            worst_index,
            worst_margin: Some(margin),
        })
    }

    /// Finite-scale decay diagnostic for mu_n against |t_n|^-M.
    pub fn check_weight_decay(&self, m_exp: &S, bits: u32) -> DecayReport<S> {
        let vals: Vec<S> = (0..self.len())
            .map(|i| {
                let t_pow = self.support[i].abs().ln() * m_exp.clone();
                (self.weight_scalar(i, bits).ln() + t_pow).exp()
            })
            .collect();
        let mut max_value = vals[0].clone();
        let mut argmax = 0usize;
        for (i, v) in vals.iter().enumerate() {
            if *v > max_value {
                max_value = v.clone();
                argmax = i;
            }
        }
        let xs: Vec<f64> = self.support.iter().map(|t| t.abs().ln().to_f64()).collect();
        let ys: Vec<f64> = vals.iter().map(|v| v.ln().to_f64()).collect();
        let slope = lsq_slope(&xs, &ys);
        let half = self.len() / 2;
        let slope_tail = lsq_slope(&xs[half..], &ys[half..]);
        let bounded_trend = match (slope, slope_tail) {
            (_, Some(st)) => st <= 0.0,
            (Some(s), None) => s <= 0.0,
            (None, None) => true, // single mass
        };
        DecayReport { m_exp: m_exp.clone(), max_value, argmax, slope, slope_tail, bounded_trend }
    }
}

fn lsq_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let den = nf * sxx - sx * sx;
    if den.abs() < 1e-300 {
        return None;
    }
    Some((nf * sxy - sx * sy) / den)
}

#[derive(Clone, Debug)]
pub struct ValidationReport<S> {
    pub valid: bool,
    pub violations: Vec<String>,
    pub poisson_partial_sum: S,
}

/// Certificate for |t_{n+1} - t_n| >= C |t_n|^-N over the data window.
#[derive(Clone, Debug)]
pub struct SeparationCertificate<S> {
    pub c: S,
    pub n_exp: i64,
    pub satisfied: bool,
    pub worst_index: usize,
    /// min over pairs of gap / (C |t|^-N); >= 1 iff satisfied.
    pub worst_margin: Option<S>,
}

#[derive(Clone, Debug)]
pub struct DecayReport<S> {
    pub m_exp: S,
    pub max_value: S,
    pub argmax: usize,
    pub slope: Option<f64>,
    pub slope_tail: Option<f64>,
    pub bounded_trend: bool,
}

// ---------------------------------------------------------------------------
// Example generators
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeLaw {
    /// mu_n = e^{-sqrt|n|}
    ExpSqrt,
    /// mu_n = e^{-n^2}
    ExpSquare,
    /// mu_n = 1
    Unit,
}

#[derive(Clone, Debug)]
pub enum ExampleKind {
    /// Masses 2^{-n(n-1)/2} n^2 at t_n = 2^n, n = n_min..=n_max.
    Simex { n_min: u32, n_max: u32 },
    /// Integer lattice without 0, |n| <= n_max, with an even weight law.
    Lattice { n_max: u32, law: LatticeLaw },
    /// Zero set {n^2, n <= n_sq} plus {n^3 + 1/2, n <= n_cb}, weights
    /// |A'(t_n)|^-2 for the finite product A over the whole support.
    HamburgerCx { n_sq: u32, n_cb: u32 },
}

pub fn make_example<S: Real>(kind: &ExampleKind, bits: u32) -> Result<DiscreteMeasure<S>> {
    let p = Prec::<S>::new(bits);
    match *kind {
        ExampleKind::Simex { n_min, n_max } => {
            if n_max < n_min || n_min == 0 {
                return Err(Error::invalid("simex requires 1 <= n_min <= n_max"));
            }
            let mut support = Vec::new();
            let mut weights = Vec::new();
            for n in n_min..=n_max {
                support.push(p.pow2(n as i64));
                let n_i = n as i64;
                let w = exact::pow2(-n_i * (n_i - 1) / 2)
                    * BigRational::from_integer(BigInt::from(n_i * n_i));
                weights.push(Weight::Exact(w));
            }
            DiscreteMeasure::new(format!("simex n={n_min}..{n_max}"), support, weights, n_min as i64)
        }
        ExampleKind::Lattice { n_max, law } => {
            if n_max == 0 {
                return Err(Error::invalid("lattice requires n_max >= 1"));
            }
            let mut support = Vec::new();
            let mut weights = Vec::new();
            let mut idx: Vec<i64> = (-(n_max as i64)..=n_max as i64).filter(|n| *n != 0).collect();
            idx.sort_unstable();
            for n in idx {
                support.push(p.int(n));
                let w = match law {
                    LatticeLaw::ExpSqrt => {
                        Weight::Approx((-p.int(n.abs()).sqrt()).exp())
                    }
                    LatticeLaw::ExpSquare => Weight::Approx((-p.int(n * n)).exp()),
                    LatticeLaw::Unit => Weight::Exact(BigRational::one()),
                };
                weights.push(w);
            }
            let label = match law {
                LatticeLaw::ExpSqrt => format!("lattice exp(-sqrt|n|) |n|<={n_max}"),
                LatticeLaw::ExpSquare => format!("lattice exp(-n^2) |n|<={n_max}"),
                LatticeLaw::Unit => format!("lattice unit |n|<={n_max}"),
            };
            DiscreteMeasure::new(label, support, weights, -(n_max as i64))
        }
        ExampleKind::HamburgerCx { n_sq, n_cb } => {
            if n_sq == 0 && n_cb == 0 {
                return Err(Error::invalid("hamburger_cx requires at least one point"));
            }
            let mut pts: Vec<BigRational> = Vec::new();
            for n in 1..=n_sq as i64 {
                pts.push(exact::int(n * n));
            }
            for n in 1..=n_cb as i64 {
                pts.push(exact::int(n * n * n) + exact::ratio(1, 2));
            }
            pts.sort_by(|a, b| a.cmp(b));
            let weights: Vec<Weight<S>> = (0..pts.len())
                .map(|k| {
                    let d = exact::product_derivative_at_zero(&pts, k);
                    Weight::Exact((&d * &d).recip())
                })
                .collect();
            let support = pts.iter().map(|q| p.ratio(q)).collect();
            DiscreteMeasure::new(
                format!("hamburger_cx squares<={n_sq} cubes<={n_cb}"),
                support,
                weights,
                1,
            )
        }
    }
}

// ---------------------------------------------------------------------------
// JSON format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct MeasureDoc {
    label: String,
    support: Vec<serde_json::Value>,
    weights: Vec<serde_json::Value>,
    #[serde(default = "default_offset")]
    index_offset: i64,
    #[serde(default)]
    precision_bits: Option<u32>,
}

fn default_offset() -> i64 {
    1
}

#[derive(Deserialize)]
struct GeneratorDoc {
    generator: GeneratorSpec,
}

#[derive(Deserialize)]
struct GeneratorSpec {
    kind: String,
    #[serde(default)]
    params: serde_json::Map<String, serde_json::Value>,
}

fn num_to_string(v: &serde_json::Value) -> Result<String> {
    match v {
        serde_json::Value::String(s) => Ok(s.clone()),
        serde_json::Value::Number(n) => Ok(n.to_string()),
        other => Err(Error::invalid(format!("expected number or numeric string, got {other}"))),
    }
}

fn parse_weight<S: Real>(txt: &str, bits: u32) -> Result<Weight<S>> {
    if txt.contains('/') {
        let q: BigRational = txt
            .parse()
            .map_err(|e| Error::invalid(format!("bad rational weight {txt:?}: {e}")))?;
        Ok(Weight::Exact(q))
    } else {
        let v = S::parse_prec(txt, bits)
            .ok_or_else(|| Error::invalid(format!("bad weight {txt:?}")))?;
        Ok(Weight::Approx(v))
    }
}

impl<S: Real> DiscreteMeasure<S> {
    pub fn to_json(&self, bits: u32) -> serde_json::Value {
        let support: Vec<serde_json::Value> =
            self.support.iter().map(|t| t.dec_string().into()).collect();
        let weights: Vec<serde_json::Value> = self
            .weights
            .iter()
            .map(|w| match w {
                Weight::Exact(q) => format!("{}/{}", q.numer(), q.denom()).into(),
                Weight::Approx(v) => v.dec_string().into(),
            })
            .collect();
        serde_json::json!({
            "label": self.label,
            "support": support,
            "weights": weights,
            "index_offset": self.index_offset,
            "precision_bits": bits,
        })
    }

    /// Parse the measure file format, accepting either explicit arrays or a
    /// generator block. Numbers may be JSON numbers or decimal strings;
    /// weights additionally accept exact "p/q" fractions.
    pub fn from_json(doc: &serde_json::Value, session_bits: u32) -> Result<Self> {
        if doc.get("generator").is_some() {
            let g: GeneratorDoc = serde_json::from_value(doc.clone())?;
            let kind = g.generator.to_like().to_kind()?;
            return make_example(&kind, session_bits);
        }
        let d: MeasureDoc = serde_json::from_value(doc.clone())?;
        let bits = d.precision_bits.unwrap_or(session_bits);
        let support: Vec<S> = d
            .support
            .iter()
            .map(|v| {
                let txt = num_to_string(v)?;
                S::parse_prec(&txt, bits)
                    .ok_or_else(|| Error::invalid(format!("bad support value {txt:?}")))
            })
            .collect::<Result<_>>()?;
        let weights: Vec<Weight<S>> = d
            .weights
            .iter()
            .map(|v| parse_weight(&num_to_string(v)?, bits))
            .collect::<Result<_>>()?;
        DiscreteMeasure::new(d.label, support, weights, d.index_offset)
    }
}

fn get_u32(params: &serde_json::Map<String, serde_json::Value>, key: &str) -> Result<Option<u32>> {
    match params.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_u64()
            .and_then(|x| u32::try_from(x).ok())
            .map(Some)
            .ok_or_else(|| Error::invalid(format!("generator param {key} must be a small integer"))),
    }
}

/// Adapter so both measure files and CLI flags can name a generator.
pub struct GeneratorSpecLike<'a> {
    pub kind: &'a str,
    pub params: &'a serde_json::Map<String, serde_json::Value>,
}

impl GeneratorSpec {
    fn to_like(&self) -> GeneratorSpecLike<'_> {
        GeneratorSpecLike { kind: &self.kind, params: &self.params }
    }
}

impl<'a> GeneratorSpecLike<'a> {
    pub fn to_kind(&self) -> Result<ExampleKind> {
        match self.kind {
            "simex" => {
                let n_min = get_u32(self.params, "n_min")?.unwrap_or(1);
                let n_max = get_u32(self.params, "n_max")?
                    .ok_or_else(|| Error::invalid("simex: n_max required"))?;
                Ok(ExampleKind::Simex { n_min, n_max })
            }
            "lattice" => {
                let n_max = get_u32(self.params, "n_max")?
                    .ok_or_else(|| Error::invalid("lattice: n_max required"))?;
                let law = match self.params.get("law").and_then(|v| v.as_str()).unwrap_or("exp_sqrt")
                {
                    "exp_sqrt" => LatticeLaw::ExpSqrt,
                    "exp_square" => LatticeLaw::ExpSquare,
                    "unit" => LatticeLaw::Unit,
                    other => return Err(Error::invalid(format!("unknown lattice law {other:?}"))),
                };
                Ok(ExampleKind::Lattice { n_max, law })
            }
            "hamburger_cx" => {
                let n_sq = get_u32(self.params, "n_sq")?
                    .ok_or_else(|| Error::invalid("hamburger_cx: n_sq required"))?;
                let n_cb = get_u32(self.params, "n_cb")?
                    .ok_or_else(|| Error::invalid("hamburger_cx: n_cb required"))?;
                Ok(ExampleKind::HamburgerCx { n_sq, n_cb })
            }
            other => Err(Error::invalid(format!("unknown generator kind {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigfloat::BigFloat;

    type B = BigFloat;

    #[test]
    fn two_mass_validation_and_poisson() {
        let p = Prec::<f64>::new(53);
        let m = DiscreteMeasure::new(
            "two",
            vec![p.int(1), p.int(2)],
            vec![Weight::Exact(BigRational::one()), Weight::Exact(BigRational::one())],
            1,
        )
        .unwrap();
        let r = m.validate(53);
        assert!(r.valid);
        // 1/2 + 1/5 = 0.7
        assert!((r.poisson_partial_sum - 0.7).abs() < 1e-15);
    }

    #[test]
    fn monotonicity_violation_detected() {
        let p = Prec::<f64>::new(53);
        let m = DiscreteMeasure::new(
            "bad",
            vec![p.int(2), p.int(1)],
            vec![Weight::Approx(1.0), Weight::Approx(1.0)],
            1,
        )
        .unwrap();
        let r = m.validate(53);
        assert!(!r.valid);
        assert!(r.violations.iter().any(|v| v.contains("increasing")));
    }

    #[test]
    fn empty_support_rejected() {
        let r = DiscreteMeasure::<f64>::new("x", vec![], vec![], 1);
        assert!(matches!(r, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn simex_first_three_weights() {
        let m = make_example::<B>(&ExampleKind::Simex { n_min: 1, n_max: 3 }, 128).unwrap();
        assert_eq!(m.len(), 3);
        let s: Vec<f64> = m.support().iter().map(|t| t.to_f64()).collect();
        assert_eq!(s, vec![2.0, 4.0, 8.0]);
        let w: Vec<BigRational> = m.weights().iter().map(Weight::to_rational).collect();
        assert_eq!(w[0], exact::int(1));
        assert_eq!(w[1], exact::int(2));
        assert_eq!(w[2], exact::ratio(9, 8));
    }

    #[test]
    fn lattice_even_decreasing_and_indices() {
        let m = make_example::<B>(
            &ExampleKind::Lattice { n_max: 5, law: LatticeLaw::ExpSqrt },
            128,
        )
        .unwrap();
        assert_eq!(m.len(), 10);
        assert_eq!(m.index_of(0), -5);
        assert_eq!(m.index_of(4), -1);
        assert_eq!(m.index_of(5), 1);
        assert_eq!(m.index_of(9), 5);
        // even in n, decreasing in |n|
        for i in 0..5 {
            let a = m.weight_scalar(i, 128);
            let b = m.weight_scalar(9 - i, 128);
            assert_eq!(a, b);
        }
        assert!(m.weight_scalar(5, 128) > m.weight_scalar(6, 128));
        let r = m.validate(128);
        assert!(r.valid);
    }

    #[test]
    fn hamburger_cx_support_sorted() {
        let m = make_example::<B>(&ExampleKind::HamburgerCx { n_sq: 4, n_cb: 3 }, 192).unwrap();
        let s: Vec<f64> = m.support().iter().map(|t| t.to_f64()).collect();
        assert_eq!(s, vec![1.0, 1.5, 4.0, 8.5, 9.0, 16.0, 27.5]);
        assert!(m.all_weights_exact());
        assert!(m.validate(192).valid);
    }

    #[test]
    fn separation_certificates() {
        let p = Prec::<f64>::new(53);
        let support: Vec<f64> = (1..=10).map(|n| p.int(n)).collect();
        let weights = vec![Weight::Approx(1.0); 10];
        let m = DiscreteMeasure::new("unit gaps", support, weights, 1).unwrap();
        let cert = m.check_power_separation(&1.0, 0).unwrap();
        assert!(cert.satisfied);

        let m2 = DiscreteMeasure::new(
            "tight",
            vec![1.0, 1.0 + 1e-9],
            vec![Weight::Approx(1.0), Weight::Approx(1.0)],
            1,
        )
        .unwrap();
        let cert2 = m2.check_power_separation(&1.0, 1).unwrap();
        assert!(!cert2.satisfied);
        assert_eq!(cert2.worst_index, 0);

        assert!(m.check_power_separation(&0.0, 0).is_err());
    }

    #[test]
    fn separation_mixed_squares_cubes() {
        // {n^2, n<=10} with {n^3 + 1/2, n<=6}: min gap 1/2, so C=1/4, N=0 holds
        let m = make_example::<f64>(&ExampleKind::HamburgerCx { n_sq: 10, n_cb: 6 }, 53).unwrap();
        let cert = m.check_power_separation(&0.25, 0).unwrap();
        assert!(cert.satisfied, "margin {:?}", cert.worst_margin);
        // exhaustive gap scan oracle
        let mut min_gap = f64::INFINITY;
        for i in 1..m.len() {
            min_gap = min_gap.min(m.support()[i] - m.support()[i - 1]);
        }
        assert_eq!(min_gap, 0.5);
    }

    #[test]
    fn decay_reports() {
        // simex, M = 5: bounded, decreasing tail
        let m = make_example::<B>(&ExampleKind::Simex { n_min: 1, n_max: 15 }, 256).unwrap();
        let p = Prec::<B>::new(256);
        let rep = m.check_weight_decay(&p.int(5), 256);
        assert!(rep.bounded_trend);
        assert!(rep.slope_tail.unwrap() < 0.0);
        // direct oracle: values 2^{-n(n-1)/2} n^2 2^{5n} decrease for n >= 6
        let direct =
            |n: f64| -> f64 { -n * (n - 1.0) / 2.0 * 2f64.ln() + 2.0 * n.ln() + 5.0 * n * 2f64.ln() };
        assert!(direct(15.0) < direct(8.0));

        // unit weights on 1..20, M = 1: slope +1
        let pf = Prec::<f64>::new(53);
        let support: Vec<f64> = (1..=20).map(|n| pf.int(n)).collect();
        let weights = vec![Weight::Approx(1.0); 20];
        let m2 = DiscreteMeasure::new("unit", support, weights, 1).unwrap();
        let rep2 = m2.check_weight_decay(&1.0, 53);
        assert!(!rep2.bounded_trend);
        assert!((rep2.slope.unwrap() - 1.0).abs() < 1e-9);

        // single mass: trivially bounded
        let m3 = DiscreteMeasure::new("one", vec![3.0], vec![Weight::Approx(0.5)], 1).unwrap();
        assert!(m3.check_weight_decay(&1.0, 53).bounded_trend);
    }

    #[test]
    fn json_round_trip_bit_exact() {
        let m = make_example::<B>(&ExampleKind::Lattice { n_max: 4, law: LatticeLaw::ExpSqrt }, 256)
            .unwrap();
        let doc = m.to_json(256);
        let back = DiscreteMeasure::<B>::from_json(&doc, 256).unwrap();
        assert_eq!(m, back);
        // and the serialized form is byte-stable
        let doc2 = back.to_json(256);
        assert_eq!(serde_json::to_string(&doc).unwrap(), serde_json::to_string(&doc2).unwrap());
    }

    #[test]
    fn json_generator_form() {
        let doc = serde_json::json!({
            "generator": {"kind": "simex", "params": {"n_max": 3}}
        });
        let m = DiscreteMeasure::<B>::from_json(&doc, 128).unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(m.weights()[1].to_rational(), exact::int(2));
    }

    #[test]
    fn validate_after_make_example_always_passes() {
        for kind in [
            ExampleKind::Simex { n_min: 1, n_max: 8 },
            ExampleKind::Lattice { n_max: 6, law: LatticeLaw::ExpSquare },
            ExampleKind::HamburgerCx { n_sq: 5, n_cb: 4 },
        ] {
            let m = make_example::<B>(&kind, 192).unwrap();
            assert!(m.validate(192).valid, "{:?}", kind);
        }
    }

    #[test]
    fn poisson_sum_example2_matches_direct_summation() {
        let m = make_example::<B>(&ExampleKind::Simex { n_min: 1, n_max: 10 }, 256).unwrap();
        let r = m.validate(256);
        assert!(r.valid);
        // direct summation oracle in f64 (values well within range here)
        let mut acc = 0.0f64;
        for n in 1..=10u32 {
            let t = 2f64.powi(n as i32);
            let mu = 2f64.powf(-(n as f64) * (n as f64 - 1.0) / 2.0) * (n as f64).powi(2);
            acc += mu / (1.0 + t * t);
        }
        assert!((r.poisson_partial_sum.to_f64() - acc).abs() < 1e-12);
    }
}
