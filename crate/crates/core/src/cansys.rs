//! Finite-stage canonical systems: Hamiltonians built from indivisible
//! intervals, exact transfer-matrix products, structure polynomials
//! (A_k, B_k) with E_k = A_k - i B_k, and the finite-stage spectral measure
//! feeding the localization lab.
//!
//! Each interval contributes the factor Id + z l H J^{-1} with H = e e^T,
//! e = (cos phi, sin phi): H J^{-1} is nilpotent, so the matrix exponential
//! truncates at first order and the stage products stay exact over the
//! rationals whenever the angles have rational cosines (0 and pi/2 here).

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::exact;
use crate::measure::{DiscreteMeasure, Weight};
use crate::poly::{Mat2, Poly};
use crate::scalar::{Prec, Real};
use crate::zeros::{find_zeros, FindOpts, Rect};

/// Angle as an exact rational multiple of pi in [0, 1).
#[derive(Clone, Debug, PartialEq)]
pub struct PiFrac(BigRational);

impl PiFrac {
    pub fn new(q: BigRational) -> Result<Self> {
        if q.is_negative() || q >= BigRational::one() {
            return Err(Error::invalid(format!("angle fraction {q} outside [0, 1)")));
        }
        Ok(PiFrac(q))
    }

    pub fn zero_angle() -> Self {
        PiFrac(BigRational::zero())
    }

    pub fn right_angle() -> Self {
        PiFrac(exact::ratio(1, 2))
    }

    pub fn fraction(&self) -> &BigRational {
        &self.0
    }

    /// (cos, sin) as exact rationals, when they are rational (multiples of
    /// pi/2 within [0, pi)).
    pub fn exact_cos_sin(&self) -> Option<(BigRational, BigRational)> {
        if self.0.is_zero() {
            Some((BigRational::one(), BigRational::zero()))
        } else if self.0 == exact::ratio(1, 2) {
            Some((BigRational::zero(), BigRational::one()))
        } else {
            None
        }
    }

    pub fn cos_sin<S: Real>(&self, bits: u32) -> (S, S) {
        if let Some((c, s)) = self.exact_cos_sin() {
            let p = Prec::<S>::new(bits);
            return (p.ratio(&c), p.ratio(&s));
        }
        let p = Prec::<S>::new(bits);
        let phi = p.pi() * p.ratio(&self.0);
        (phi.cos(), phi.sin())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    pub length: BigRational,
    pub angle: PiFrac,
}

/// Ordered indivisible intervals. Construction normalizes: consecutive equal
/// angles merge into one interval (maximality of indivisible intervals), and
/// lengths must be positive. tr H = 1 holds automatically for projections.
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    intervals: Vec<Interval>,
}

impl Hamiltonian {
    pub fn new(raw: Vec<Interval>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::invalid("Hamiltonian needs at least one interval"));
        }
        let mut intervals: Vec<Interval> = Vec::with_capacity(raw.len());
        for iv in raw {
            if !iv.length.is_positive() {
                return Err(Error::invalid("interval lengths must be positive"));
            }
            match intervals.last_mut() {
                Some(last) if last.angle == iv.angle => {
                    last.length += iv.length;
                }
                _ => intervals.push(iv),
            }
        }
        Ok(Hamiltonian { intervals })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn stages(&self) -> usize {
        self.intervals.len()
    }

    pub fn total_length(&self) -> BigRational {
        self.intervals.iter().map(|iv| iv.length.clone()).fold(BigRational::zero(), |a, b| a + b)
    }

    /// Geometric lengths l_k = 2^-k with alternating angles 0, pi/2; the
    /// indivisible intervals accumulate only at the right end of [0, L].
    pub fn geometric(stages: usize) -> Result<Self> {
        let raw = (0..stages)
            .map(|k| Interval {
                length: exact::pow2(-(k as i64 + 1)),
                angle: if k % 2 == 0 { PiFrac::zero_angle() } else { PiFrac::right_angle() },
            })
            .collect();
        Hamiltonian::new(raw)
    }

    /// All angles in {0, pi/2} (or otherwise with rational cosines), so the
    /// structure pair is computable exactly over the rationals.
    pub fn exact_angles(&self) -> bool {
        self.intervals.iter().all(|iv| iv.angle.exact_cos_sin().is_some())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let intervals: Vec<serde_json::Value> = self
            .intervals
            .iter()
            .map(|iv| {
                serde_json::json!({
                    "length": format!("{}/{}", iv.length.numer(), iv.length.denom()),
                    "angle_pi_fraction": format!(
                        "{}/{}",
                        iv.angle.fraction().numer(),
                        iv.angle.fraction().denom()
                    ),
                })
            })
            .collect();
        serde_json::json!({ "intervals": intervals })
    }

    pub fn from_json(doc: &serde_json::Value) -> Result<Self> {
        let arr = doc
            .get("intervals")
            .and_then(|v| v.as_array())
            .ok_or_else(|| Error::invalid("hamiltonian file needs an intervals array"))?;
        let mut raw = Vec::with_capacity(arr.len());
        for iv in arr {
            let length = parse_rational(
                iv.get("length").ok_or_else(|| Error::invalid("interval missing length"))?,
            )?;
            let angle = parse_rational(
                iv.get("angle_pi_fraction")
                    .ok_or_else(|| Error::invalid("interval missing angle_pi_fraction"))?,
            )?;
            raw.push(Interval { length, angle: PiFrac::new(angle)? });
        }
        Hamiltonian::new(raw)
    }
}

/// Parse a JSON number or string as an exact rational; decimal strings
/// convert exactly (every finite decimal is rational).
pub fn parse_rational(v: &serde_json::Value) -> Result<BigRational> {
    let txt = match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Number(n) => n.to_string(),
        other => return Err(Error::invalid(format!("expected a number, got {other}"))),
    };
    let txt = txt.trim();
    if let Some((num, den)) = txt.split_once('/') {
        let n: num_bigint::BigInt =
            num.trim().parse().map_err(|e| Error::invalid(format!("bad rational: {e}")))?;
        let d: num_bigint::BigInt =
            den.trim().parse().map_err(|e| Error::invalid(format!("bad rational: {e}")))?;
        if d.is_zero() {
            return Err(Error::invalid("rational with zero denominator"));
        }
        return Ok(BigRational::new(n, d));
    }
    // decimal: sign, integer part, optional fraction, optional exponent
    let (mantissa, exp10) = match txt.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i64 =
                e.parse().map_err(|e2| Error::invalid(format!("bad exponent: {e2}")))?;
            (m, exp)
        }
        None => (txt, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    let n: num_bigint::BigInt =
        digits.parse().map_err(|e| Error::invalid(format!("bad decimal {txt:?}: {e}")))?;
    let shift = exp10 - frac_part.len() as i64;
    let ten = BigRational::from_integer(10.into());
    let mut q = BigRational::from_integer(n);
    if shift > 0 {
        for _ in 0..shift {
            q *= ten.clone();
        }
    } else {
        for _ in 0..(-shift) {
            q /= ten.clone();
        }
    }
    Ok(q)
}

// ---------------------------------------------------------------------------
// Transfer matrices and structure pairs
// ---------------------------------------------------------------------------

/// One interval's transfer factor as a polynomial matrix over the ring T:
/// Id + z l [[-cs, c^2], [-s^2, cs]].
fn factor_poly<T: crate::scalar::Ring>(l: T, c: T, s: T) -> Mat2<Poly<T>> {
    let cs = c.clone() * s.clone();
    let c2 = c.clone() * c;
    let s2 = s.clone() * s.clone();
    let lin = |coef: T| Poly::new(vec![T::zero(), coef]);
    Mat2::new(
        Poly::constant(T::one()).add(&lin(-(l.clone() * cs.clone()))),
        lin(l.clone() * c2),
        lin(-(l.clone() * s2)),
        Poly::constant(T::one()).add(&lin(l * cs)),
    )
}

/// Transfer matrix Y(stage, z) evaluated numerically: the ordered product of
/// the first `stage` interval factors at the point z.
pub fn transfer<S: Real>(
    h: &Hamiltonian,
    stage: usize,
    z: &Complex<S>,
    bits: u32,
) -> Result<Mat2<Complex<S>>> {
    if stage > h.stages() {
        return Err(Error::invalid(format!(
            "stage {stage} out of range (Hamiltonian has {} intervals)",
            h.stages()
        )));
    }
    let p = Prec::<S>::new(bits);
    let mut y: Mat2<Complex<S>> = Mat2::identity();
    for iv in &h.intervals[..stage] {
        let (c, s) = iv.angle.cos_sin::<S>(bits);
        let l = p.ratio(&iv.length);
        let cs = c.clone() * s.clone();
        let c2 = c.clone() * c.clone();
        let s2 = s.clone() * s;
        let zl = z.scale(&l);
        let f = Mat2::new(
            Complex::one() - zl.scale(&cs),
            zl.scale(&c2),
            -zl.scale(&s2),
            Complex::one() + zl.scale(&cs),
        );
        y = y.mul(&f);
    }
    Ok(y)
}

/// Structure polynomials (A_k, B_k) = first row of the symbolic stage
/// product, exact over the rationals when the angles allow, and realized at
/// the session precision either way.
#[derive(Clone, Debug)]
pub struct StructurePair<S> {
    pub stage: usize,
    pub a: Poly<S>,
    pub b: Poly<S>,
    pub a_exact: Option<Poly<BigRational>>,
    pub b_exact: Option<Poly<BigRational>>,
}

impl<S: Real> StructurePair<S> {
    pub fn eval_e(&self, z: &Complex<S>) -> Complex<S> {
        let a = self.a.eval_complex(z);
        let b = self.b.eval_complex(z);
        a - b.mul_i()
    }

    /// |E(z)|^2 - |E*(z)|^2 with E* = conj(E(conj z)); positive on the upper
    /// half-plane for Hermite-Biehler E.
    pub fn hb_margin(&self, z: &Complex<S>) -> S {
        let e = self.eval_e(z);
        let estar = self.eval_e(&z.conj()).conj();
        e.abs_sq() - estar.abs_sq()
    }
}

pub fn structure_pair<S: Real>(
    h: &Hamiltonian,
    stage: usize,
    bits: u32,
) -> Result<StructurePair<S>> {
    if stage > h.stages() {
        return Err(Error::invalid(format!(
            "stage {stage} out of range (Hamiltonian has {} intervals)",
            h.stages()
        )));
    }
    let p = Prec::<S>::new(bits);
    if h.exact_angles() {
        let mut y: Mat2<Poly<BigRational>> = Mat2::identity();
        for iv in &h.intervals[..stage] {
            let (c, s) = iv.angle.exact_cos_sin().expect("checked exact");
            y = y.mul(&factor_poly(iv.length.clone(), c, s));
        }
        let a = y.a.map(|q| p.ratio(q));
        let b = y.b.map(|q| p.ratio(q));
        Ok(StructurePair { stage, a, b, a_exact: Some(y.a), b_exact: Some(y.b) })
    } else {
        let mut y: Mat2<Poly<S>> = Mat2::identity();
        for iv in &h.intervals[..stage] {
            let (c, s) = iv.angle.cos_sin::<S>(bits);
            y = y.mul(&factor_poly(p.ratio(&iv.length), c, s));
        }
        Ok(StructurePair { stage, a: y.a, b: y.b, a_exact: None, b_exact: None })
    }
}

// ---------------------------------------------------------------------------
// Spectral data
// ---------------------------------------------------------------------------

/// Finite-stage spectral measure: support = zeros of A_k (must be real and
/// simple), weights from the partial fractions of B_k/A_k. The sign
/// convention is fixed once here: B/A = -sum mu_n/(z - t_n) (+ linear term),
/// i.e. mu_n = -B(t_n)/A'(t_n), which makes every weight positive and
/// matches the expansion B/A ~ -(sum mu_n)/z at infinity.
pub fn spectral_data<S: Real>(
    h: &Hamiltonian,
    stage: usize,
    bits: u32,
) -> Result<DiscreteMeasure<S>> {
    let sp = structure_pair::<S>(h, stage, bits)?;
    let p = Prec::<S>::new(bits);
    let deg = match sp.a.degree() {
        Some(d) if d >= 1 => d,
        _ => {
            return Err(Error::DegenerateStage(
                "A is constant: empty spectrum at this stage".into(),
            ))
        }
    };
    let bound = sp.a.root_bound().expect("degree >= 1");
    let height = bound.clone() * p.f64(0.25) + p.one();
    let window = Rect::new(
        -(bound.clone() + p.one()),
        bound.clone() + p.one(),
        -height.clone(),
        height,
    )?;
    let fa = PolyFn { poly: sp.a.clone(), bits };
    let min_box = bound * S::pow2(-(bits as i64) / 4, bits);
    let inv = find_zeros(&fa, &window, &min_box, &FindOpts::default())?;
    if inv.total_count != deg as i64 || inv.zeros.len() != deg {
        return Err(Error::DegenerateStage(format!(
            "A has degree {deg} but {} simple zeros were certified",
            inv.zeros.len()
        )));
    }
    let da = sp.a.derivative();
    let mut pts: Vec<(S, S)> = Vec::with_capacity(deg);
    for z in &inv.zeros {
        if z.multiplicity != 1 {
            return Err(Error::DegenerateStage("A has a multiple zero".into()));
        }
        // zeros of the Hermite-Biehler A-component are real
        let t = z.location.re.clone();
        let bv = sp.b.eval(&t);
        let dv = da.eval(&t);
        let mu = -(bv / dv);
        if !(mu > p.zero()) {
            return Err(Error::DegenerateStage(format!(
                "nonpositive residue at t = {}",
                t.to_f64()
            )));
        }
        pts.push((t, mu));
    }
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let support: Vec<S> = pts.iter().map(|(t, _)| t.clone()).collect();
    let weights: Vec<Weight<S>> = pts.into_iter().map(|(_, mu)| Weight::Approx(mu)).collect();
    DiscreteMeasure::new(format!("spectral stage {stage}"), support, weights, 1)
}

struct PolyFn<S> {
    poly: Poly<S>,
    bits: u32,
}

impl<S: Real> crate::zeros::AnalyticFn<S> for PolyFn<S> {
    fn eval(&self, z: &Complex<S>) -> Result<Complex<S>> {
        Ok(self.poly.eval_complex(z))
    }

    fn eval_with_deriv(&self, z: &Complex<S>) -> Result<(Complex<S>, Complex<S>)> {
        Ok((self.poly.eval_complex(z), self.poly.derivative().eval_complex(z)))
    }

    fn bits(&self) -> u32 {
        self.bits
    }
}

/// Feed the finite-stage spectral measure into the localization lab with
/// seeded random coefficients; the desk-scale face of the correspondence
/// between left-accumulating Hamiltonians and localized spaces. Reports
/// trends only, never verdicts about the infinite statement.
pub fn localization_bridge<S: Real>(
    h: &Hamiltonian,
    stage: usize,
    seed: u64,
    bits: u32,
) -> Result<(crate::localize::LocalizationReport<S>, DiscreteMeasure<S>)> {
    use rand::{Rng, SeedableRng};
    let measure = spectral_data::<S>(h, stage, bits)?;
    let p = Prec::<S>::new(bits);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<Complex<S>> = (0..measure.len())
        .map(|_| {
            // Box-Muller in f64, lifted exactly: deterministic per seed
            let u1: f64 = rng.random::<f64>().max(1e-12);
            let u2: f64 = rng.random();
            let g = (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
            Complex::from_re(p.f64(g))
        })
        .collect();
    let g = crate::cauchy::CauchyFunction::from_l2_coeffs(measure.clone(), &coeffs, bits)?
        .attach_default_product()?;
    let t_min = measure.support().first().unwrap().clone();
    let t_max = measure.support().last().unwrap().clone();
    // padded in both directions: finite-stage spectra put sizeable residues
    // at the edge points and the zeros of F wander well off the axis
    let pad = (t_max.clone() - t_min.clone()) / p.int(10) + p.one();
    let window = Rect::new(
        t_min - pad.clone(),
        t_max + pad.clone(),
        -pad.clone(),
        pad,
    )?;
    let grid = crate::localize::disk_grid(&measure, &window, &p.f64(0.25), &p.one(), bits);
    let rep = crate::localize::localize(&g, &grid, &window, &crate::localize::LocalizeOpts::default())?;
    Ok((rep, measure))
}
