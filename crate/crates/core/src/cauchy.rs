//! Elements f of the Cauchy-transform space attached to a discrete measure:
//! f(z) = sum_n r_n/(z - t_n) with r_n = a_n mu_n^{1/2}, the entire
//! counterpart F = A f, residues, and the membership diagnostic.
//!
//! The literature swaps between three coefficient conventions (a_n mu_n^{1/2},
//! d_n mu_n, c_n mu_n^{1/2}); this type stores the raw residues r_n once and
//! converts on demand, which keeps factor-of-mu^{1/2} mistakes structurally
//! impossible.

use num_traits::{One, Zero};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::products::{CanonicalProduct, Verdict};
use crate::scalar::{Prec, Real};
use crate::zeros::AnalyticFn;

#[derive(Clone, Debug)]
pub struct CauchyFunction<S> {
    measure: DiscreteMeasure<S>,
    residues: Vec<Complex<S>>,
    attached: Option<CanonicalProduct<S>>,
    bits: u32,
}

impl<S: Real> CauchyFunction<S> {
    pub fn from_residues(
        measure: DiscreteMeasure<S>,
        residues: Vec<Complex<S>>,
        bits: u32,
    ) -> Result<Self> {
        if residues.len() != measure.len() {
            return Err(Error::invalid(format!(
                "{} residues for {} support points",
                residues.len(),
                measure.len()
            )));
        }
        Ok(CauchyFunction { measure, residues, attached: None, bits })
    }

    /// Build from l2 coefficients a_n (r_n = a_n mu_n^{1/2}).
    pub fn from_l2_coeffs(
        measure: DiscreteMeasure<S>,
        coeffs: &[Complex<S>],
        bits: u32,
    ) -> Result<Self> {
        let residues = coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| a.scale(&measure.weight_scalar(n, bits).sqrt()))
            .collect();
        Self::from_residues(measure, residues, bits)
    }

    /// Build from d coefficients (r_n = d_n mu_n).
    pub fn from_d_coeffs(
        measure: DiscreteMeasure<S>,
        coeffs: &[Complex<S>],
        bits: u32,
    ) -> Result<Self> {
        let residues = coeffs
            .iter()
            .enumerate()
            .map(|(n, d)| d.scale(&measure.weight_scalar(n, bits)))
            .collect();
        Self::from_residues(measure, residues, bits)
    }

    /// Attach the canonical product for F = A f; its zero set must equal the
    /// support.
    pub fn attach_product(mut self, p: CanonicalProduct<S>) -> Result<Self> {
        let zeros = p
            .real_zeros()
            .ok_or_else(|| Error::invalid("attached product must have real zeros"))?;
        if zeros.len() != self.measure.len()
            || zeros.iter().zip(self.measure.support()).any(|(a, b)| a != b)
        {
            return Err(Error::invalid("attached product zeros differ from the support"));
        }
        self.attached = Some(p);
        Ok(self)
    }

    /// Attach the genus-0 product over the support.
    pub fn attach_default_product(self) -> Result<Self> {
        let bits = self.bits;
        let p = CanonicalProduct::from_real_zeros(self.measure.support(), crate::products::Genus::Zero, bits)?;
        self.attach_product(p)
    }

    pub fn measure(&self) -> &DiscreteMeasure<S> {
        &self.measure
    }

    pub fn residues(&self) -> &[Complex<S>] {
        &self.residues
    }

    pub fn product(&self) -> Option<&CanonicalProduct<S>> {
        self.attached.as_ref()
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn l2_coeffs(&self) -> Vec<Complex<S>> {
        (0..self.residues.len())
            .map(|n| {
                let s = self.measure.weight_scalar(n, self.bits).sqrt();
                Complex::new(self.residues[n].re.clone() / s.clone(), self.residues[n].im.clone() / s)
            })
            .collect()
    }

    pub fn d_coeffs(&self) -> Vec<Complex<S>> {
        (0..self.residues.len())
            .map(|n| {
                let w = self.measure.weight_scalar(n, self.bits);
                Complex::new(self.residues[n].re.clone() / w.clone(), self.residues[n].im.clone() / w)
            })
            .collect()
    }

    /// The space norm ||f|| = ||a||_{l2}.
    pub fn norm_l2(&self) -> S {
        let mut acc = S::zero();
        for a in self.l2_coeffs() {
            acc = acc + a.abs_sq();
        }
        acc.sqrt()
    }

    pub fn residue(&self, n: usize) -> Result<Complex<S>> {
        self.residues
            .get(n)
            .cloned()
            .ok_or_else(|| Error::invalid(format!("residue index {n} out of range")))
    }

    /// Indices with a_n = 0; by the modified zero-set convention these count
    /// as zeros of f at t_n (and are honest zeros of F = A f).
    pub fn zero_coeff_indices(&self) -> Vec<usize> {
        (0..self.residues.len()).filter(|&n| self.residues[n].is_zero()).collect()
    }

    fn pole_threshold(&self, t: &S) -> S {
        t.abs() * S::pow2(-(self.bits as i64) / 2, self.bits)
    }

    /// f(z) = sum r_n / (z - t_n). Errors with `Pole` if z is within
    /// 2^{-bits/2} |t_n| of a support point carrying a nonzero residue; the
    /// winding engine must never sample de-facto poles.
    pub fn eval_f(&self, z: &Complex<S>) -> Result<Complex<S>> {
        Ok(self.eval_f_deriv(z)?.0)
    }

    /// (f, f') in one pass; Cauchy sums differentiate termwise.
    pub fn eval_f_deriv(&self, z: &Complex<S>) -> Result<(Complex<S>, Complex<S>)> {
        let mut f = Complex::<S>::zero();
        let mut df = Complex::<S>::zero();
        for (n, t) in self.measure.support().iter().enumerate() {
            let r = &self.residues[n];
            if r.is_zero() {
                continue;
            }
            let dz = z.clone() - Complex::from_re(t.clone());
            if dz.abs() < self.pole_threshold(t) {
                return Err(Error::Pole { index: n, residue: format!("{}", r) });
            }
            let term = r.clone() / dz.clone();
            f = f + term.clone();
            df = df - term / dz;
        }
        Ok((f, df))
    }

    /// F(z) = A(z) f(z), entire; at a support point the removable-singularity
    /// value r_n A'(t_n) is used.
    pub fn eval_big_f(&self, z: &Complex<S>) -> Result<Complex<S>> {
        let p = self
            .attached
            .as_ref()
            .ok_or_else(|| Error::invalid("no product attached; call attach_product first"))?;
        match self.eval_f_deriv(z) {
            Ok((f, _)) => Ok(p.eval(z).value * f),
            Err(Error::Pole { index, .. }) => {
                Ok(self.residues[index].clone() * p.derivative_at_zero(index)?)
            }
            Err(e) => Err(e),
        }
    }
}

/// The entire function F = A f as a contour-integrable evaluator.
pub struct CauchyEntire<'a, S> {
    g: &'a CauchyFunction<S>,
}

impl<'a, S: Real> CauchyEntire<'a, S> {
    pub fn new(g: &'a CauchyFunction<S>) -> Result<Self> {
        if g.attached.is_none() {
            return Err(Error::invalid("CauchyEntire requires an attached product"));
        }
        Ok(CauchyEntire { g })
    }
}

impl<'a, S: Real> AnalyticFn<S> for CauchyEntire<'a, S> {
    fn eval(&self, z: &Complex<S>) -> Result<Complex<S>> {
        Ok(self.eval_with_deriv(z)?.0)
    }

    /// Fused single pass over the support: accumulates the product A, its
    /// logarithmic derivative, f and f' from one (z - t_n) per term. This is
    /// the innermost kernel of every winding count.
    fn eval_with_deriv(&self, z: &Complex<S>) -> Result<(Complex<S>, Complex<S>)> {
        let g = self.g;
        let p = g.attached.as_ref().expect("checked at construction");
        let genus_one = matches!(p.genus(), crate::products::Genus::One);
        let threshold_scale = S::pow2(-(g.bits as i64) / 2, g.bits);

        let mut a_val = Complex::<S>::one();
        let mut log_d = Complex::<S>::zero();
        let mut f = Complex::<S>::zero();
        let mut df = Complex::<S>::zero();
        for (n, t) in g.measure.support().iter().enumerate() {
            let r = &g.residues[n];
            // d = z - t_n (t_n real)
            let d = Complex::new(z.re.clone() - t.clone(), z.im.clone());
            // factor 1 - z/t = -(z - t)/t
            let neg_inv_t = -(t.recip());
            a_val = a_val * d.scale(&neg_inv_t);
            let inv_d = d.recip();
            log_d = log_d + inv_d.clone();
            if genus_one {
                let inv_t = t.recip();
                a_val = a_val * Complex::new(z.re.clone() * inv_t.clone(), z.im.clone() * inv_t.clone()).exp();
                log_d = log_d + Complex::from_re(t.recip());
            }
            if !r.is_zero() {
                if d.abs() < t.abs() * threshold_scale.clone() {
                    return Err(Error::Pole { index: n, residue: format!("{}", r) });
                }
                let term = r.clone() * inv_d.clone();
                f = f + term.clone();
                df = df - term * inv_d;
            }
        }
        let fz = a_val.clone() * f.clone();
        // F' = A' f + A f' = A (log A)' f + A f'
        let dfz = a_val.clone() * df + a_val * log_d * f;
        Ok((fz, dfz))
    }

    fn bits(&self) -> u32 {
        self.g.bits
    }
}

// ---------------------------------------------------------------------------
// Membership diagnostic
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumTrend {
    Bounded,
    Growing,
    Short,
}

#[derive(Clone, Debug)]
pub struct MembershipReport<S> {
    /// Partial sums S_N of sum |F(t_n)|^2 / (|A'(t_n)|^2 mu_n), support
    /// ordered by |t_n|.
    pub partial_sums: Vec<S>,
    pub sum_trend: SumTrend,
    /// (y, |F(iy)/A(iy)|) along the sampled imaginary axis.
    pub axis_ratios: Vec<(S, S)>,
    /// Sampled liminf surrogate: did the running minimum decrease across the
    /// top decade of y?
    pub axis_consistent: Option<bool>,
    pub verdict: Verdict,
}

pub struct MembershipOpts<S> {
    /// Tail increment S_N - S_{N/2} below which the sum is tagged bounded.
    pub bounded_tail_abs: S,
}

impl<S: Real> Default for MembershipOpts<S> {
    fn default() -> Self {
        MembershipOpts { bounded_tail_abs: S::from_f64_prec(1e-3, 53) }
    }
}

/// Theorem-26-style membership diagnostic for an entire evaluator F against
/// the space attached to (T, mu) with product A. Any finite sampling of the
/// liminf condition is a heuristic; the verdict is three-valued and reports
/// remain window-relative.
pub fn membership_diagnostic<S: Real>(
    f_entire: &dyn AnalyticFn<S>,
    measure: &DiscreteMeasure<S>,
    product: &CanonicalProduct<S>,
    axis_samples: &[S],
    opts: &MembershipOpts<S>,
    bits: u32,
) -> Result<MembershipReport<S>> {
    let zeros = product
        .real_zeros()
        .ok_or_else(|| Error::invalid("membership diagnostic requires a real product"))?;
    if zeros.len() != measure.len() {
        return Err(Error::invalid("product zeros and support have different lengths"));
    }
    let mut order: Vec<usize> = (0..measure.len()).collect();
    order.sort_by(|&a, &b| {
        measure.support()[a].abs().partial_cmp(&measure.support()[b].abs()).unwrap()
    });
    let mut partial_sums = Vec::with_capacity(order.len());
    let mut acc = S::zero();
    for &n in &order {
        let t = Complex::from_re(measure.support()[n].clone());
        let fv = f_entire.eval(&t)?;
        let da = product.derivative_at_zero(n)?.abs_sq();
        let mu = measure.weight_scalar(n, bits);
        acc = acc + fv.abs_sq() / (da * mu);
        partial_sums.push(acc.clone());
    }
    let n = partial_sums.len();
    let sum_trend = if n < 4 {
        SumTrend::Short
    } else {
        let tail = partial_sums[n - 1].clone() - partial_sums[n / 2].clone();
        if tail <= opts.bounded_tail_abs {
            SumTrend::Bounded
        } else {
            SumTrend::Growing
        }
    };

    let p = Prec::<S>::new(bits);
    let mut axis_ratios = Vec::with_capacity(axis_samples.len());
    for y in axis_samples {
        let iy = Complex::new(p.zero(), y.clone());
        let fv = f_entire.eval(&iy)?;
        let av = product.eval(&iy).value;
        axis_ratios.push((y.clone(), fv.abs() / av.abs()));
    }
    let axis_consistent = axis_liminf_surrogate(&axis_ratios, bits);

    let verdict = match (sum_trend, axis_consistent) {
        (SumTrend::Bounded, Some(true)) => Verdict::Consistent,
        (SumTrend::Growing, _) | (_, Some(false)) => Verdict::Inconsistent,
        _ => Verdict::Inconclusive,
    };
    Ok(MembershipReport { partial_sums, sum_trend, axis_ratios, axis_consistent, verdict })
}

/// Sampled surrogate for liminf |F(iy)/A(iy)| = 0: the minimum over the top
/// decade of sampled y must not exceed the minimum over the rest.
fn axis_liminf_surrogate<S: Real>(ratios: &[(S, S)], bits: u32) -> Option<bool> {
    if ratios.len() < 4 {
        return None;
    }
    let mut sorted: Vec<&(S, S)> = ratios.iter().collect();
    sorted.sort_by(|a, b| a.0.abs().partial_cmp(&b.0.abs()).unwrap());
    let ymax = sorted.last().unwrap().0.abs();
    let cutoff = ymax / S::from_i64_prec(10, bits);
    let mut min_rest: Option<S> = None;
    let mut min_top: Option<S> = None;
    for (y, r) in ratios {
        let slot = if y.abs() > cutoff { &mut min_top } else { &mut min_rest };
        *slot = Some(match slot.take() {
            Some(m) => m.min_val(r.clone()),
            None => r.clone(),
        });
    }
    match (min_top, min_rest) {
        (Some(t), Some(r)) => Some(t <= r),
        _ => None,
    }
}

/// Convenience: geometric axis grid y = y0 * 2^k, k = 0..count.
pub fn geometric_axis<S: Real>(y0: f64, count: usize, bits: u32) -> Vec<S> {
    let p = Prec::<S>::new(bits);
    (0..count).map(|k| p.f64(y0) * p.pow2(k as i64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigfloat::BigFloat;
    use crate::measure::{make_example, ExampleKind, Weight};
    use crate::products::Genus;
    use num_rational::BigRational;

    type B = BigFloat;

    fn unit_measure(support: Vec<f64>) -> DiscreteMeasure<f64> {
        let n = support.len();
        DiscreteMeasure::new("unit", support, vec![Weight::Approx(1.0); n], 1).unwrap()
    }

    fn cplx(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn single_mass_value() {
        let m = unit_measure(vec![1.0]);
        let g = CauchyFunction::from_l2_coeffs(m, &[cplx(1.0, 0.0)], 53).unwrap();
        let v = g.eval_f(&cplx(0.0, 0.0)).unwrap();
        assert_eq!(v.re, -1.0);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn three_mass_direct_sum() {
        // masses {1,2,3}, mu = 1, a = {1,2,3}: f(0) = -1 - 1 - 1 = -3
        let m = unit_measure(vec![1.0, 2.0, 3.0]);
        let a = vec![cplx(1.0, 0.0), cplx(2.0, 0.0), cplx(3.0, 0.0)];
        let g = CauchyFunction::from_l2_coeffs(m, &a, 53).unwrap();
        let v = g.eval_f(&cplx(0.0, 0.0)).unwrap();
        assert!((v.re + 3.0).abs() < 1e-15);
    }

    #[test]
    fn pole_error_carries_index() {
        let m = unit_measure(vec![1.0, 2.0]);
        let g = CauchyFunction::from_l2_coeffs(m, &[cplx(1.0, 0.0), cplx(1.0, 0.0)], 53).unwrap();
        match g.eval_f(&cplx(2.0, 0.0)) {
            Err(Error::Pole { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected pole, got {other:?}"),
        }
    }

    #[test]
    fn zero_residue_point_is_not_a_pole() {
        let m = unit_measure(vec![1.0, 2.0]);
        let g = CauchyFunction::from_l2_coeffs(m, &[cplx(1.0, 0.0), cplx(0.0, 0.0)], 53).unwrap();
        let v = g.eval_f(&cplx(2.0, 0.0)).unwrap();
        assert!((v.re - 1.0).abs() < 1e-15);
        assert_eq!(g.zero_coeff_indices(), vec![1]);
    }

    #[test]
    fn simex_compensated_summation_oracle() {
        let bits = 256;
        let m = make_example::<B>(&ExampleKind::Simex { n_min: 1, n_max: 5 }, bits).unwrap();
        let a: Vec<Complex<B>> =
            (0..5).map(|_| Complex::from_re(B::from_i64_prec(1, bits))).collect();
        let g = CauchyFunction::from_l2_coeffs(m.clone(), &a, bits).unwrap();
        let z = Complex::new(B::from_i64_prec(0, bits), B::from_i64_prec(1, bits));
        let v = g.eval_f(&z).unwrap();

        // independent oracle: Kahan-compensated summation of the same terms
        let mut sum = Complex::<B>::zero();
        let mut comp = Complex::<B>::zero();
        for n in 0..5 {
            let t = Complex::from_re(m.support()[n].clone());
            let r = Complex::from_re(m.weight_scalar(n, bits).sqrt());
            let term = r / (z.clone() - t) - comp.clone();
            let next = sum.clone() + term.clone();
            comp = (next.clone() - sum) - term;
            sum = next;
        }
        let diff = (v - sum).abs();
        assert!(diff < B::from_f64_prec(1e-60, bits), "diff {}", diff.to_f64());
    }

    #[test]
    fn entire_counterpart_quadratic() {
        // masses {1,-1}, mu = 1, a = {1,1}: A = 1 - z^2, f = 1/(z-1) + 1/(z+1),
        // F = A f = -2z
        let m = unit_measure(vec![-1.0, 1.0]);
        let g = CauchyFunction::from_l2_coeffs(m, &[cplx(1.0, 0.0), cplx(1.0, 0.0)], 53)
            .unwrap()
            .attach_default_product()
            .unwrap();
        let v0 = g.eval_big_f(&cplx(0.0, 0.0)).unwrap();
        assert!(v0.abs() < 1e-15);
        let vh = g.eval_big_f(&cplx(0.5, 0.0)).unwrap();
        assert!((vh.re + 1.0).abs() < 1e-13, "{}", vh);
        // removable-singularity value at z = 1: product here is
        // (1-z/(-1))(1-z/1) = 1-z^2 again, A'(1) = -2, r = 1 -> F(1) = -2
        let v1 = g.eval_big_f(&cplx(1.0, 0.0)).unwrap();
        assert!((v1.re + 2.0).abs() < 1e-13, "{}", v1);
    }

    #[test]
    fn conjugate_symmetry() {
        let m = unit_measure(vec![-1.0, 1.0]);
        let g = CauchyFunction::from_l2_coeffs(m, &[cplx(1.0, 0.0), cplx(1.0, 0.0)], 53)
            .unwrap()
            .attach_default_product()
            .unwrap();
        let a = g.eval_big_f(&cplx(0.0, 1.0)).unwrap();
        let b = g.eval_big_f(&cplx(0.0, -1.0)).unwrap().conj();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn product_support_mismatch_rejected() {
        let m = unit_measure(vec![1.0, 2.0]);
        let g = CauchyFunction::from_l2_coeffs(m, &[cplx(1.0, 0.0), cplx(1.0, 0.0)], 53).unwrap();
        let p = CanonicalProduct::from_real_zeros(&[1.0, 3.0], Genus::Zero, 53).unwrap();
        assert!(g.attach_product(p).is_err());
    }

    #[test]
    fn residues_and_probe() {
        let bits = 192;
        let m = make_example::<B>(&ExampleKind::Simex { n_min: 1, n_max: 3 }, bits).unwrap();
        let a = vec![
            Complex::from_re(B::from_i64_prec(1, bits)),
            Complex::from_re(B::from_i64_prec(0, bits)),
            Complex::from_re(B::from_i64_prec(2, bits)),
        ];
        let g = CauchyFunction::from_l2_coeffs(m.clone(), &a, bits).unwrap();
        assert!(g.residue(1).unwrap().is_zero());
        assert!(g.residue(5).is_err());
        // finite-h probe: (z - t_n) f(z) at z = t_n + h -> r_n + O(h)
        let n = 2;
        let t = m.support()[n].clone();
        let h = B::from_f64_prec(1e-12, bits);
        let z = Complex::from_re(t.clone() + h.clone());
        let f = g.eval_f(&z).unwrap();
        let probe = f.scale(&h);
        let r = g.residue(n).unwrap();
        let err = (probe - r).abs().to_f64();
        assert!(err < 1e-10, "err {err}");
    }

    #[test]
    fn linearity_at_summation_level() {
        let m = unit_measure(vec![1.0, 2.0, 3.0]);
        let a1 = vec![cplx(1.0, 0.0), cplx(0.5, 0.0), cplx(-1.0, 0.0)];
        let a2 = vec![cplx(0.0, 1.0), cplx(2.0, 0.0), cplx(1.0, -1.0)];
        let g1 = CauchyFunction::from_l2_coeffs(m.clone(), &a1, 53).unwrap();
        let g2 = CauchyFunction::from_l2_coeffs(m.clone(), &a2, 53).unwrap();
        let alpha = cplx(2.0, 1.0);
        let beta = cplx(-0.5, 0.25);
        let combo: Vec<Complex<f64>> = (0..3)
            .map(|n| alpha.clone() * a1[n].clone() + beta.clone() * a2[n].clone())
            .collect();
        let g3 = CauchyFunction::from_l2_coeffs(m, &combo, 53).unwrap();
        let z = cplx(0.3, 0.7);
        let lhs = g3.eval_f(&z).unwrap();
        let rhs = alpha * g1.eval_f(&z).unwrap() + beta * g2.eval_f(&z).unwrap();
        assert!((lhs - rhs).abs() < 1e-13);
    }

    #[test]
    fn decay_bound_above_support() {
        let m = unit_measure(vec![1.0, 2.0, 3.0]);
        let a = vec![cplx(1.0, 0.0), cplx(-2.0, 0.0), cplx(0.5, 0.0)];
        let g = CauchyFunction::from_l2_coeffs(m.clone(), &a, 53).unwrap();
        let norm = g.norm_l2();
        let mass: f64 = (0..3).map(|n| g.measure().weight_scalar(n, 53)).sum();
        for k in 1..6 {
            let y = 4.0 * k as f64;
            let z = cplx(0.0, y);
            let dist = (y * y + 1.0).sqrt(); // dist(iy, T) = sqrt(y^2 + min t^2)
            let bound = norm * mass.sqrt() / dist;
            let v = g.eval_f(&z).unwrap().abs();
            assert!(v <= bound, "y={y}: {v} > {bound}");
        }
    }

    #[test]
    fn membership_single_kernel_consistent() {
        // F = A * (kernel at t_0): the Theorem-26 sum has the single value
        // mu_0 |A'(t_0)|^2 / (|A'(t_0)|^2 mu_0) = 1 at every N
        let bits = 192;
        let m = make_example::<B>(&ExampleKind::Simex { n_min: 1, n_max: 6 }, bits).unwrap();
        let mut a = vec![Complex::<B>::zero(); 6];
        a[0] = Complex::from_re(B::from_i64_prec(1, bits));
        let g = CauchyFunction::from_l2_coeffs(m.clone(), &a, bits)
            .unwrap()
            .attach_default_product()
            .unwrap();
        let fe = CauchyEntire::new(&g).unwrap();
        let p = g.product().unwrap().clone();
        let axis: Vec<B> = geometric_axis(100.0, 12, bits);
        let rep =
            membership_diagnostic(&fe, &m, &p, &axis, &MembershipOpts::default(), bits).unwrap();
        let one = B::from_i64_prec(1, bits);
        for s in &rep.partial_sums {
            assert!((s.clone() - one.clone()).abs().to_f64() < 1e-40);
        }
        assert_eq!(rep.sum_trend, SumTrend::Bounded);
        assert_eq!(rep.verdict, Verdict::Consistent);
    }

    #[test]
    fn membership_degree_too_high_inconsistent() {
        // F = A * z: |F(iy)/A(iy)| = |y| grows along the axis
        let bits = 192;
        let m = make_example::<B>(&ExampleKind::Simex { n_min: 1, n_max: 6 }, bits).unwrap();
        let p = CanonicalProduct::from_real_zeros(m.support(), Genus::Zero, bits).unwrap();
        struct AzTimesZ<S> {
            p: CanonicalProduct<S>,
            bits: u32,
        }
        impl<S: Real> AnalyticFn<S> for AzTimesZ<S> {
            fn eval(&self, z: &Complex<S>) -> Result<Complex<S>> {
                Ok(self.p.eval(z).value * z.clone())
            }
            fn bits(&self) -> u32 {
                self.bits
            }
        }
        let f = AzTimesZ { p: p.clone(), bits };
        let axis: Vec<B> = geometric_axis(100.0, 12, bits);
        let rep =
            membership_diagnostic(&f, &m, &p, &axis, &MembershipOpts::default(), bits).unwrap();
        assert_eq!(rep.axis_consistent, Some(false));
        assert_eq!(rep.verdict, Verdict::Inconsistent);
    }

    #[test]
    fn coefficient_conventions_round_trip() {
        let bits = 128;
        let m = make_example::<B>(&ExampleKind::Simex { n_min: 1, n_max: 4 }, bits).unwrap();
        let d: Vec<Complex<B>> =
            (1..=4).map(|k| Complex::from_re(B::from_i64_prec(k, bits))).collect();
        let g = CauchyFunction::from_d_coeffs(m.clone(), &d, bits).unwrap();
        let d_back = g.d_coeffs();
        for (x, y) in d.iter().zip(&d_back) {
            assert!((x.clone() - y.clone()).abs().to_f64() < 1e-30);
        }
        // r_n = d_n mu_n = a_n mu_n^{1/2} => a_n = d_n mu_n^{1/2}
        let a = g.l2_coeffs();
        for n in 0..4 {
            let w = m.weight_scalar(n, bits).sqrt();
            let expect = d[n].scale(&w);
            assert!((a[n].clone() - expect).abs().to_f64() < 1e-30);
        }
    }

    #[test]
    fn weights_exactness_survives_function_construction() {
        let bits = 192;
        let m = make_example::<B>(&ExampleKind::Simex { n_min: 1, n_max: 4 }, bits).unwrap();
        assert!(m.all_weights_exact());
        let a: Vec<Complex<B>> =
            (0..4).map(|_| Complex::from_re(B::from_i64_prec(1, bits))).collect();
        let g = CauchyFunction::from_l2_coeffs(m, &a, bits).unwrap();
        assert!(g.measure().all_weights_exact());
        assert_eq!(
            g.measure().weights()[1].to_rational(),
            BigRational::from_integer(2.into())
        );
    }
}
