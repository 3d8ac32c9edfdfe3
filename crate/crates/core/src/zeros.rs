//! Certified zero location by the argument principle: adaptive periodic
//! trapezoid winding counts on circles and rectangles, bisection of windows,
//! and Newton refinement inside certified contours.

use num_traits::Zero;

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::scalar::{Prec, Real};

/// An analytic evaluator. Implementors may provide an exact derivative
/// (Cauchy sums differentiate termwise); the default is a central difference
/// at h = |z| 2^{-bits/3}.
pub trait AnalyticFn<S: Real>: Sync {
    fn eval(&self, z: &Complex<S>) -> Result<Complex<S>>;

    fn eval_with_deriv(&self, z: &Complex<S>) -> Result<(Complex<S>, Complex<S>)> {
        let bits = self.bits();
        let p = Prec::<S>::new(bits);
        let scale = z.abs().max_val(p.one());
        let h = scale * p.pow2(-(bits as i64) / 3);
        let hc = Complex::from_re(h.clone());
        let up = self.eval(&(z.clone() + hc.clone()))?;
        let dn = self.eval(&(z.clone() - hc))?;
        let two_h = Complex::from_re(p.int(2) * h);
        Ok((self.eval(z)?, (up - dn) / two_h))
    }

    fn bits(&self) -> u32;
}

/// Wrapper turning a closure into an evaluator (test and oracle use).
pub struct FnEval<F> {
    pub f: F,
    pub bits: u32,
}

impl<S: Real, F> AnalyticFn<S> for FnEval<F>
where
    F: Fn(&Complex<S>) -> Complex<S> + Sync,
{
    fn eval(&self, z: &Complex<S>) -> Result<Complex<S>> {
        Ok((self.f)(z))
    }
    fn bits(&self) -> u32 {
        self.bits
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rect<S> {
    pub re_lo: S,
    pub re_hi: S,
    pub im_lo: S,
    pub im_hi: S,
}

impl<S: Real> Rect<S> {
    pub fn new(re_lo: S, re_hi: S, im_lo: S, im_hi: S) -> Result<Self> {
        if re_lo >= re_hi || im_lo >= im_hi {
            return Err(Error::invalid("rectangle must have positive width and height"));
        }
        Ok(Rect { re_lo, re_hi, im_lo, im_hi })
    }

    pub fn width(&self) -> S {
        self.re_hi.clone() - self.re_lo.clone()
    }

    pub fn height(&self) -> S {
        self.im_hi.clone() - self.im_lo.clone()
    }

    pub fn center(&self) -> Complex<S> {
        let two = S::from_i64_prec(2, self.re_lo.prec_bits());
        Complex::new(
            (self.re_lo.clone() + self.re_hi.clone()) / two.clone(),
            (self.im_lo.clone() + self.im_hi.clone()) / two,
        )
    }

    pub fn diameter(&self) -> S {
        let w = self.width();
        let h = self.height();
        (w.clone() * w + h.clone() * h).sqrt()
    }

    /// Half-open membership: [re_lo, re_hi) x [im_lo, im_hi), so a split
    /// tiles the parent without double-counting boundary points.
    pub fn contains(&self, z: &Complex<S>) -> bool {
        z.re >= self.re_lo && z.re < self.re_hi && z.im >= self.im_lo && z.im < self.im_hi
    }

    pub fn corners(&self) -> [Complex<S>; 4] {
        [
            Complex::new(self.re_lo.clone(), self.im_lo.clone()),
            Complex::new(self.re_hi.clone(), self.im_lo.clone()),
            Complex::new(self.re_hi.clone(), self.im_hi.clone()),
            Complex::new(self.re_lo.clone(), self.im_hi.clone()),
        ]
    }

    /// Split at an absolute position along the given axis. Returns the two
    /// children plus a thin strip straddling the split line, used to certify
    /// the line is zero-free (a zero sitting exactly on the line can fool
    /// both child windings with clean-looking principal values).
    fn split_at(&self, horizontal: bool, mid: S) -> (Rect<S>, Rect<S>, Rect<S>) {
        let bits = self.re_lo.prec_bits();
        let thin = S::pow2(-12, bits);
        if horizontal {
            let eps = self.width() * thin;
            (
                Rect { re_hi: mid.clone(), ..self.clone() },
                Rect { re_lo: mid.clone(), ..self.clone() },
                Rect { re_lo: mid.clone() - eps.clone(), re_hi: mid + eps, ..self.clone() },
            )
        } else {
            let eps = self.height() * thin;
            (
                Rect { im_hi: mid.clone(), ..self.clone() },
                Rect { im_lo: mid.clone(), ..self.clone() },
                Rect { im_lo: mid.clone() - eps.clone(), im_hi: mid + eps, ..self.clone() },
            )
        }
    }

    #[cfg(test)]
    fn split(&self, frac: f64) -> (Rect<S>, Rect<S>, Rect<S>) {
        let bits = self.re_lo.prec_bits();
        let t = S::from_f64_prec(frac, bits);
        let horizontal = self.width() >= self.height();
        let mid = if horizontal {
            self.re_lo.clone() + self.width() * t
        } else {
            self.im_lo.clone() + self.height() * t
        };
        self.split_at(horizontal, mid)
    }

    fn scaled_about_center(&self, factor: f64) -> Rect<S> {
        let bits = self.re_lo.prec_bits();
        let two = S::from_i64_prec(2, bits);
        let f = S::from_f64_prec(factor, bits);
        let c = self.center();
        let hw = self.width() / two.clone() * f.clone();
        let hh = self.height() / two * f;
        Rect {
            re_lo: c.re.clone() - hw.clone(),
            re_hi: c.re + hw,
            im_lo: c.im.clone() - hh.clone(),
            im_hi: c.im + hh,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Contour<S> {
    Circle { center: Complex<S>, radius: S },
    Rectangle(Rect<S>),
}

impl<S: Real> Contour<S> {
    pub fn describe(&self) -> String {
        match self {
            Contour::Circle { center, radius } => {
                format!("circle(center={},r={})", center, radius)
            }
            Contour::Rectangle(r) => format!(
                "rect([{},{}]x[{},{}])",
                r.re_lo, r.re_hi, r.im_lo, r.im_hi
            ),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct WindingOpts {
    pub start_samples: usize,
    pub max_samples: usize,
    /// Accept when the trapezoid estimate is within this distance of an
    /// integer.
    pub tolerance: f64,
}

impl Default for WindingOpts {
    fn default() -> Self {
        WindingOpts { start_samples: 32, max_samples: 1 << 16, tolerance: 0.25 }
    }
}

#[derive(Clone, Debug)]
pub struct Winding {
    pub count: i64,
    /// |raw estimate - count| (complex distance), always <= tolerance.
    pub deviation: f64,
    pub samples: usize,
}

/// Winding count of F around a contour as the periodic/composite trapezoid
/// estimate of (1/2 pi i) contour-integral of F'/F, refined dyadically until
/// the estimate sits within `tolerance` of an integer.
pub fn winding_count<S: Real>(
    f: &dyn AnalyticFn<S>,
    contour: &Contour<S>,
    opts: &WindingOpts,
) -> Result<Winding> {
    match contour {
        Contour::Circle { center, radius } => {
            match circle_winding(f, center, radius, opts) {
                Ok(w) => Ok(w),
                Err(Error::UnresolvedWinding(_)) | Err(Error::Pole { .. }) => {
                    // perturbation retry: radius * (1 +- 2^-8)
                    let bits = f.bits();
                    let p = Prec::<S>::new(bits);
                    let up = radius.clone() * (p.one() + p.pow2(-8));
                    let dn = radius.clone() * (p.one() - p.pow2(-8));
                    circle_winding(f, center, &up, opts)
                        .or_else(|_| circle_winding(f, center, &dn, opts))
                }
                Err(e) => Err(e),
            }
        }
        Contour::Rectangle(rect) => rect_winding(f, rect, opts),
    }
}

fn near_zero_guard<S: Real>(min_abs: &S, max_abs: &S, bits: u32) -> Result<()> {
    if min_abs.is_zero()
        || (!max_abs.is_zero()
            && min_abs.clone() < max_abs.clone() * S::pow2(-(bits as i64 - 20), bits))
    {
        return Err(Error::UnresolvedWinding("contour passes (numerically) through a zero".into()));
    }
    Ok(())
}

fn circle_winding<S: Real>(
    f: &dyn AnalyticFn<S>,
    center: &Complex<S>,
    radius: &S,
    opts: &WindingOpts,
) -> Result<Winding> {
    let bits = f.bits();
    let p = Prec::<S>::new(bits);
    let two_pi = p.pi() * p.int(2);
    // integrand g(theta) = F'(z)/F(z) * (z - c); winding = mean over theta
    let sample = |k: usize, n: usize| -> Result<(Complex<S>, S)> {
        let theta = two_pi.clone() * p.int(k as i64) / p.int(n as i64);
        let dir = Complex::new(theta.cos(), theta.sin());
        let z = center.clone() + dir.scale(radius);
        let (fv, dv) = f.eval_with_deriv(&z)?;
        let fabs = fv.abs();
        if fabs.is_zero() {
            return Err(Error::UnresolvedWinding("zero of F on circle".into()));
        }
        Ok(((dv / fv) * (z - center.clone()), fabs))
    };

    let mut n = opts.start_samples.max(4);
    let mut values: Vec<Complex<S>> = Vec::with_capacity(n);
    let mut min_abs: Option<S> = None;
    let mut max_abs: Option<S> = None;
    for k in 0..n {
        let (v, fabs) = sample(k, n)?;
        min_abs = Some(match min_abs.take() {
            Some(m) => m.min_val(fabs.clone()),
            None => fabs.clone(),
        });
        max_abs = Some(match max_abs.take() {
            Some(m) => m.max_val(fabs.clone()),
            None => fabs,
        });
        values.push(v);
    }
    // A level is only trusted when the previous dyadic level produced the
    // same count within tolerance: an under-sampled estimate can land on a
    // wrong integer by accident.
    let mut prev: Option<(i64, f64)> = None;
    loop {
        near_zero_guard(min_abs.as_ref().unwrap(), max_abs.as_ref().unwrap(), bits)?;
        let mut acc = Complex::<S>::zero();
        for v in &values {
            acc = acc + v.clone();
        }
        let est = acc.scale(&(p.one() / p.int(values.len() as i64)));
        let count = est.re.to_f64().round() as i64;
        let dev_c = est - Complex::from_re(p.int(count));
        let deviation = dev_c.abs().to_f64();
        if deviation < opts.tolerance && count >= 0 {
            if let Some((pc, pd)) = prev {
                if pc == count && pd < opts.tolerance {
                    return Ok(Winding { count, deviation, samples: values.len() });
                }
            }
        }
        prev = Some((count, deviation));
        if 2 * n > opts.max_samples {
            return Err(Error::UnresolvedWinding(format!(
                "circle winding did not settle below {} after {} samples (deviation {deviation:.3})",
                opts.tolerance,
                values.len()
            )));
        }
        // dyadic refinement: interleave midpoints, reusing existing samples
        let mut next = Vec::with_capacity(2 * n);
        for k in 0..n {
            next.push(values[k].clone());
            let (v, fabs) = sample(2 * k + 1, 2 * n)?;
            let mn = min_abs.take().unwrap();
            min_abs = Some(mn.min_val(fabs.clone()));
            let mx = max_abs.take().unwrap();
            max_abs = Some(mx.max_val(fabs));
            next.push(v);
        }
        values = next;
        n *= 2;
    }
}

fn rect_winding<S: Real>(f: &dyn AnalyticFn<S>, rect: &Rect<S>, opts: &WindingOpts) -> Result<Winding> {
    let bits = f.bits();
    let p = Prec::<S>::new(bits);
    let corners = rect.corners();
    let two_pi_i = Complex::new(p.zero(), p.pi() * p.int(2));

    // composite trapezoid along one edge with m intervals
    let edge = |a: &Complex<S>, b: &Complex<S>, m: usize| -> Result<(Complex<S>, S, S)> {
        let mut acc = Complex::<S>::zero();
        let mut min_abs: Option<S> = None;
        let mut max_abs: Option<S> = None;
        for k in 0..=m {
            let t = p.int(k as i64) / p.int(m as i64);
            let z = a.clone() + (b.clone() - a.clone()).scale(&t);
            let (fv, dv) = f.eval_with_deriv(&z)?;
            let fabs = fv.abs();
            if fabs.is_zero() {
                return Err(Error::UnresolvedWinding("zero of F on rectangle edge".into()));
            }
            min_abs = Some(match min_abs.take() {
                Some(mv) => mv.min_val(fabs.clone()),
                None => fabs.clone(),
            });
            max_abs = Some(match max_abs.take() {
                Some(mv) => mv.max_val(fabs.clone()),
                None => fabs,
            });
            let g = dv / fv;
            let w = if k == 0 || k == m { p.f64(0.5) } else { p.one() };
            acc = acc + g.scale(&w);
        }
        let seg = (b.clone() - a.clone()).scale(&(p.one() / p.int(m as i64)));
        Ok((acc * seg, min_abs.unwrap(), max_abs.unwrap()))
    };

    let mut m = (opts.start_samples / 4).max(4);
    let mut prev: Option<(i64, f64)> = None;
    loop {
        let mut total = Complex::<S>::zero();
        let mut min_abs: Option<S> = None;
        let mut max_abs: Option<S> = None;
        let mut failed = false;
        for e in 0..4 {
            match edge(&corners[e], &corners[(e + 1) % 4], m) {
                Ok((v, mn, mx)) => {
                    total = total + v;
                    min_abs = Some(match min_abs.take() {
                        Some(c) => c.min_val(mn),
                        None => mn,
                    });
                    max_abs = Some(match max_abs.take() {
                        Some(c) => c.max_val(mx),
                        None => mx,
                    });
                }
                Err(Error::Pole { .. }) | Err(Error::UnresolvedWinding(_)) => {
                    failed = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if !failed {
            near_zero_guard(min_abs.as_ref().unwrap(), max_abs.as_ref().unwrap(), bits)?;
            let est = total / two_pi_i.clone();
            let count = est.re.to_f64().round() as i64;
            let dev_c = est - Complex::from_re(p.int(count));
            let deviation = dev_c.abs().to_f64();
            if deviation < opts.tolerance && count >= 0 {
                if let Some((pc, pd)) = prev {
                    if pc == count && pd < opts.tolerance {
                        return Ok(Winding { count, deviation, samples: 4 * (m + 1) });
                    }
                }
            }
            prev = Some((count, deviation));
        } else {
            prev = None;
        }
        if 8 * m > opts.max_samples {
            return Err(Error::UnresolvedWinding(format!(
                "rectangle winding did not settle after {} samples per edge",
                m
            )));
        }
        m *= 2;
    }
}

// ---------------------------------------------------------------------------
// Inventory
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct ZeroRecord<S> {
    pub location: Complex<S>,
    pub refined: bool,
    pub winding_cert: i64,
    pub winding_dev: f64,
    pub contour: Contour<S>,
    pub multiplicity: u32,
}

#[derive(Clone, Debug)]
pub struct ZeroInventory<S> {
    pub window: Rect<S>,
    pub zeros: Vec<ZeroRecord<S>>,
    pub total_count: i64,
    pub unresolved: Vec<Rect<S>>,
}

impl<S: Real> ZeroInventory<S> {
    /// CSV inventory: `re, im, multiplicity, winding_dev, box_size`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,multiplicity,winding_dev,box_size\n");
        for z in &self.zeros {
            let size = match &z.contour {
                Contour::Circle { radius, .. } => {
                    (radius.clone() + radius.clone()).dec_string()
                }
                Contour::Rectangle(r) => r.width().max_val(r.height()).dec_string(),
            };
            out.push_str(&format!(
                "{},{},{},{:.6e},{}\n",
                z.location.re.dec_string(),
                z.location.im.dec_string(),
                z.multiplicity,
                z.winding_dev,
                size
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let zeros: Vec<serde_json::Value> = self
            .zeros
            .iter()
            .map(|z| {
                serde_json::json!({
                    "re": z.location.re.dec_string(),
                    "im": z.location.im.dec_string(),
                    "refined": z.refined,
                    "winding": z.winding_cert,
                    "winding_dev": format!("{:.6e}", z.winding_dev),
                    "multiplicity": z.multiplicity,
                    "contour": z.contour.describe(),
                })
            })
            .collect();
        serde_json::json!({
            "window": {
                "re_lo": self.window.re_lo.dec_string(),
                "re_hi": self.window.re_hi.dec_string(),
                "im_lo": self.window.im_lo.dec_string(),
                "im_hi": self.window.im_hi.dec_string(),
            },
            "total_count": self.total_count,
            "zeros": zeros,
            "unresolved_boxes": self.unresolved.len(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct FindOpts<S> {
    pub winding: WindingOpts,
    pub newton_max_iters: usize,
    /// Preferred split abscissae (e.g. mid-gap points of a measure support):
    /// tried before the generic dyadic fractions when one falls inside the
    /// middle half of the box being split.
    pub split_hints: Vec<S>,
}

impl<S> Default for FindOpts<S> {
    fn default() -> Self {
        FindOpts {
            winding: WindingOpts::default(),
            newton_max_iters: 256,
            split_hints: Vec::new(),
        }
    }
}

const SPLIT_FRACTIONS: [f64; 7] = [
    0.5,
    0.5 + 1.0 / 256.0,
    0.5 - 1.0 / 256.0,
    0.5 + 1.0 / 64.0,
    0.5 - 1.0 / 64.0,
    0.5 + 1.0 / 16.0,
    0.5 - 1.0 / 16.0,
];

/// Locate every zero of `f` inside `window` with a certified enclosing
/// contour. Boxes at or below `min_box` that still report count > 1 become a
/// single record with that multiplicity; winding failures surface as
/// unresolved boxes, never as silently dropped zeros.
pub fn find_zeros<S: Real>(
    f: &dyn AnalyticFn<S>,
    window: &Rect<S>,
    min_box: &S,
    opts: &FindOpts<S>,
) -> Result<ZeroInventory<S>> {
    let top = match rect_winding(f, window, &opts.winding) {
        Ok(w) => w,
        Err(Error::UnresolvedWinding(_)) => {
            // boundary jitter: expand, then shrink, by 2^-8
            let grown = window.scaled_about_center(1.0 + 1.0 / 256.0);
            match rect_winding(f, &grown, &opts.winding) {
                Ok(w) => w,
                Err(_) => {
                    let shrunk = window.scaled_about_center(1.0 - 1.0 / 256.0);
                    rect_winding(f, &shrunk, &opts.winding)?
                }
            }
        }
        Err(e) => return Err(e),
    };

    let bits = f.bits();
    let mut zeros: Vec<ZeroRecord<S>> = Vec::new();
    let mut unresolved: Vec<Rect<S>> = Vec::new();
    let mut queue: Vec<(Rect<S>, Winding)> = vec![(window.clone(), top.clone())];

    while let Some((rect, w)) = queue.pop() {
        if w.count <= 0 {
            continue;
        }
        let size = rect.width().max_val(rect.height());
        if w.count == 1 {
            if let Some(rec) = newton_in_rect(f, &rect, &w, opts) {
                zeros.push(rec);
                continue;
            }
            if size <= *min_box {
                zeros.push(ZeroRecord {
                    location: rect.center(),
                    refined: false,
                    winding_cert: 1,
                    winding_dev: w.deviation,
                    contour: Contour::Rectangle(rect),
                    multiplicity: 1,
                });
                continue;
            }
        } else if size <= *min_box {
            // multiplicity is declared, never refined further, at min_box
            zeros.push(ZeroRecord {
                location: rect.center(),
                refined: false,
                winding_cert: w.count,
                winding_dev: w.deviation,
                contour: Contour::Rectangle(rect),
                multiplicity: w.count as u32,
            });
            continue;
        }

        // candidate split lines: measure-aware hints in the middle half of
        // the box first (those sit far from any zero hugging the support),
        // then the generic jittered fractions
        let horizontal = rect.width() >= rect.height();
        let (lo, len) = if horizontal {
            (rect.re_lo.clone(), rect.width())
        } else {
            (rect.im_lo.clone(), rect.height())
        };
        let quarter = lo.clone() + len.clone() * S::from_f64_prec(0.25, bits);
        let three_q = lo.clone() + len.clone() * S::from_f64_prec(0.75, bits);
        let mut candidates: Vec<S> = Vec::new();
        if horizontal {
            let center = rect.center().re;
            let mut hints: Vec<S> = opts
                .split_hints
                .iter()
                .filter(|h| **h > quarter && **h < three_q)
                .cloned()
                .collect();
            hints.sort_by(|a, b| {
                (a.clone() - center.clone())
                    .abs()
                    .partial_cmp(&(b.clone() - center.clone()).abs())
                    .unwrap()
            });
            candidates.extend(hints.into_iter().take(2));
        }
        candidates.extend(
            SPLIT_FRACTIONS
                .iter()
                .map(|frac| lo.clone() + len.clone() * S::from_f64_prec(*frac, bits)),
        );

        // strip certification gets a small sample budget: an unresolved strip
        // just means "pick a different line", never a hard failure
        let strip_opts =
            WindingOpts { max_samples: 2048.min(opts.winding.max_samples), ..opts.winding };
        let mut split_ok = false;
        for mid in candidates {
            let (r1, r2, strip) = rect.split_at(horizontal, mid);
            let w1 = match rect_winding(f, &r1, &opts.winding) {
                Ok(x) => x,
                Err(Error::UnresolvedWinding(_)) => continue,
                Err(e) => return Err(e),
            };
            let w2 = match rect_winding(f, &r2, &opts.winding) {
                Ok(x) => x,
                Err(Error::UnresolvedWinding(_)) => continue,
                Err(e) => return Err(e),
            };
            if w1.count + w2.count != w.count {
                continue;
            }
            // the split line must also be certified zero-free before the
            // children are trusted: a zero exactly on the line can hand both
            // children plausible integer counts (principal values)
            match rect_winding(f, &strip, &strip_opts) {
                Ok(ws) if ws.count == 0 => {}
                Ok(_) | Err(Error::UnresolvedWinding(_)) => continue,
                Err(e) => return Err(e),
            }
            queue.push((r1, w1));
            queue.push((r2, w2));
            split_ok = true;
            break;
        }
        if !split_ok {
            unresolved.push(rect);
        }
    }

    zeros.sort_by(|a, b| {
        (a.location.re.clone(), a.location.im.clone())
            .partial_cmp(&(b.location.re.clone(), b.location.im.clone()))
            .unwrap()
    });
    Ok(ZeroInventory { window: window.clone(), zeros, total_count: top.count, unresolved })
}

/// Newton iteration from the rectangle center; succeeds only if the iterate
/// converges and stays inside the certified box.
fn newton_in_rect<S: Real>(
    f: &dyn AnalyticFn<S>,
    rect: &Rect<S>,
    w: &Winding,
    opts: &FindOpts<S>,
) -> Option<ZeroRecord<S>> {
    let bits = f.bits();
    let p = Prec::<S>::new(bits);
    let mut z = rect.center();
    let diag = rect.diameter();
    let escape = rect.scaled_about_center(1.5);
    for _ in 0..opts.newton_max_iters {
        let (fv, dv) = match f.eval_with_deriv(&z) {
            Ok(x) => x,
            Err(_) => return None,
        };
        if fv.is_zero() {
            break; // landed exactly on the zero
        }
        if dv.is_zero() {
            return None;
        }
        let step = fv / dv;
        z = z - step.clone();
        if z.re < escape.re_lo || z.re > escape.re_hi || z.im < escape.im_lo || z.im > escape.im_hi
        {
            return None;
        }
        let tol = (z.abs() + diag.clone()) * p.pow2(-(bits as i64) + 16);
        if step.abs() <= tol {
            if rect.contains(&z) {
                return Some(ZeroRecord {
                    location: z,
                    refined: true,
                    winding_cert: 1,
                    winding_dev: w.deviation,
                    contour: Contour::Rectangle(rect.clone()),
                    multiplicity: 1,
                });
            }
            return None;
        }
    }
    if rect.contains(&z) {
        // converged by exact-zero break
        if let Ok(fv) = f.eval(&z) {
            if fv.is_zero() {
                return Some(ZeroRecord {
                    location: z,
                    refined: true,
                    winding_cert: 1,
                    winding_dev: w.deviation,
                    contour: Contour::Rectangle(rect.clone()),
                    multiplicity: 1,
                });
            }
        }
    }
    None
}

/// Refine an approximate zero inside an explicit contour. The contour must
/// certify winding count exactly 1; a count above 1 is returned as a
/// multiplicity record without refinement.
pub fn refine<S: Real>(
    f: &dyn AnalyticFn<S>,
    z0: &Complex<S>,
    contour: &Contour<S>,
    opts: &FindOpts<S>,
) -> Result<ZeroRecord<S>> {
    let w = winding_count(f, contour, &opts.winding)?;
    if w.count == 0 {
        return Err(Error::invalid("contour encloses no zero"));
    }
    if w.count > 1 {
        return Ok(ZeroRecord {
            location: z0.clone(),
            refined: false,
            winding_cert: w.count,
            winding_dev: w.deviation,
            contour: contour.clone(),
            multiplicity: w.count as u32,
        });
    }
    let bits = f.bits();
    let p = Prec::<S>::new(bits);
    let mut z = z0.clone();
    let scale = match contour {
        Contour::Circle { radius, .. } => radius.clone(),
        Contour::Rectangle(r) => r.diameter(),
    };
    for _ in 0..opts.newton_max_iters {
        let (fv, dv) = f.eval_with_deriv(&z)?;
        if fv.is_zero() {
            break;
        }
        if dv.is_zero() {
            return Err(Error::Numerical("Newton hit a critical point".into()));
        }
        let step = fv / dv;
        z = z - step.clone();
        let tol = (z.abs() + scale.clone()) * p.pow2(-(bits as i64) + 16);
        if step.abs() <= tol {
            let inside = match contour {
                Contour::Circle { center, radius } => {
                    (z.clone() - center.clone()).abs() <= radius.clone()
                }
                Contour::Rectangle(r) => r.contains(&z),
            };
            if !inside {
                return Err(Error::Numerical("Newton escaped the certifying contour".into()));
            }
            return Ok(ZeroRecord {
                location: z,
                refined: true,
                winding_cert: 1,
                winding_dev: w.deviation,
                contour: contour.clone(),
                multiplicity: 1,
            });
        }
    }
    Err(Error::Numerical("Newton did not converge".into()))
}
