//! Polynomial-density diagnostics in the weighted sequence space:
//! projection residuals onto monomial spans, the log-weight criterion for
//! lattice measures, the two classical weighted series, and the
//! divisor-series test for non-density.
//!
//! Monomial Grams are catastrophically ill-conditioned, so the
//! orthogonalization reorthogonalizes (twice-is-enough) and escalates the
//! working precision by doubling until the Gram is resolvable or the 8192-bit
//! cap is hit.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact;
use crate::measure::DiscreteMeasure;
use crate::products::{hamburger_check, CanonicalProduct, HamburgerDiagnostic};
use crate::scalar::{Prec, Real};

pub const PRECISION_CAP_BITS: u32 = 8192;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityVerdict {
    DenseTrend,
    NonDenseTrend,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct DensityReport<S> {
    pub max_degree: usize,
    /// residuals[p][k] = distance from probe p to the span of the monomial
    /// vectors of degree <= k, in the plain l2 coefficient metric.
    pub residuals: Vec<Vec<S>>,
    /// Rough condition growth of the monomial Gram: max over k of
    /// ||v_k|| / ||orthogonalized v_k||.
    pub gram_condition: S,
    pub precision_used: u32,
    /// sum_n d_n t_n^k mu_n for the supplied pairing sequence, k <= max_degree.
    pub moment_table: Option<Vec<S>>,
    pub verdict: DensityVerdict,
}

/// Default probe set: the first three coordinate vectors plus one seeded
/// random unit vector.
pub fn default_probes<S: Real>(len: usize, seed: u64, bits: u32) -> Vec<Vec<S>> {
    use rand::{Rng, SeedableRng};
    let p = Prec::<S>::new(bits);
    let mut probes = Vec::new();
    for i in 0..3.min(len) {
        let mut e = vec![p.zero(); len];
        e[i] = p.one();
        probes.push(e);
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..len).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
    let norm: f64 = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    probes.push(raw.iter().map(|x| p.f64(x / norm)).collect());
    probes
}

fn dot<S: Real>(a: &[S], b: &[S]) -> S {
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        acc = acc + x.clone() * y.clone();
    }
    acc
}

fn norm<S: Real>(a: &[S]) -> S {
    dot(a, a).sqrt()
}

struct Orthogonalized<S> {
    residuals: Vec<Vec<S>>,
    gram_condition: S,
    breakdown: bool,
}

/// Modified Gram-Schmidt with one reorthogonalization pass; probe residuals
/// follow the recurrence r_k^2 = r_{k-1}^2 - |c_k|^2 clamped at 0, which
/// makes monotonicity in the degree exact by construction.
fn mgs_residuals<S: Real>(vectors: &[Vec<S>], probes: &[Vec<S>], bits: u32) -> Orthogonalized<S> {
    let p = Prec::<S>::new(bits);
    let threshold = S::pow2(-(bits as i64) / 2, bits);
    let dim = vectors.first().map(Vec::len).unwrap_or(0);
    let mut basis: Vec<Vec<S>> = Vec::new();
    let mut probe_res: Vec<Vec<S>> = probes.iter().map(|_| Vec::new()).collect();
    let mut probe_cur: Vec<Vec<S>> = probes.to_vec();
    let mut probe_sq: Vec<S> = probes.iter().map(|q| dot(q, q)).collect();
    let mut gram_condition = p.one();
    let mut breakdown = false;

    for v in vectors {
        if basis.len() < dim {
            let scale = norm(v);
            let mut w = v.clone();
            for _pass in 0..2 {
                for q in &basis {
                    let c = dot(&w, q);
                    for (wi, qi) in w.iter_mut().zip(q) {
                        *wi = wi.clone() - c.clone() * qi.clone();
                    }
                }
            }
            let rem = norm(&w);
            if !scale.is_zero() && !rem.is_zero() {
                gram_condition = gram_condition.max_val(scale.clone() / rem.clone());
            }
            if rem > threshold.clone() * scale.max_val(p.one()) {
                let inv = rem.recip();
                let q: Vec<S> = w.iter().map(|x| x.clone() * inv.clone()).collect();
                for (pi, pc) in probe_cur.iter_mut().enumerate() {
                    let c = dot(pc, &q);
                    for (xi, qi) in pc.iter_mut().zip(&q) {
                        *xi = xi.clone() - c.clone() * qi.clone();
                    }
                    let next = probe_sq[pi].clone() - c.clone() * c;
                    probe_sq[pi] = if next < S::zero() { S::zero() } else { next };
                }
                basis.push(q);
            } else {
                breakdown = true;
            }
        }
        if basis.len() >= dim {
            // the span is the whole coordinate space: residuals are exactly 0
            // by the dimension count, not merely at rounding level
            for sq in probe_sq.iter_mut() {
                *sq = S::zero();
            }
        }
        for (pi, sq) in probe_sq.iter().enumerate() {
            probe_res[pi].push(sq.sqrt());
        }
    }
    Orthogonalized { residuals: probe_res, gram_condition, breakdown }
}

fn monomial_vectors<S: Real>(m: &DiscreteMeasure<S>, max_degree: usize, bits: u32) -> Vec<Vec<S>> {
    let n = m.len();
    let sqrt_w: Vec<S> = (0..n).map(|i| m.weight_scalar(i, bits).sqrt()).collect();
    let mut vectors = Vec::with_capacity(max_degree + 1);
    let mut cur: Vec<S> = sqrt_w;
    vectors.push(cur.clone());
    for _ in 1..=max_degree {
        cur = cur.iter().zip(m.support()).map(|(v, t)| v.clone() * t.round_to(bits)).collect();
        vectors.push(cur.clone());
    }
    vectors
}

/// Projection residuals of unit probes onto span{(t_n^k mu_n^{1/2})_n :
/// k <= K} at session precision, with automatic doubling escalation.
pub fn density_residuals<S: Real>(
    m: &DiscreteMeasure<S>,
    max_degree: usize,
    probes: &[Vec<S>],
    pairing: Option<&[S]>,
    bits: u32,
) -> Result<DensityReport<S>> {
    if probes.is_empty() {
        return Err(Error::invalid("at least one probe vector required"));
    }
    for q in probes {
        if q.len() != m.len() {
            return Err(Error::invalid("probe length differs from window size"));
        }
    }
    let mut use_bits = bits;
    loop {
        let vectors = monomial_vectors(m, max_degree, use_bits);
        let probes_up: Vec<Vec<S>> = probes
            .iter()
            .map(|q| q.iter().map(|x| x.round_to(use_bits)).collect())
            .collect();
        let o = mgs_residuals(&vectors, &probes_up, use_bits);
        if o.breakdown && use_bits < PRECISION_CAP_BITS {
            use_bits = (use_bits * 2).min(PRECISION_CAP_BITS);
            continue;
        }
        if o.breakdown {
            return Err(Error::GramBreakdown(format!(
                "monomial Gram unresolved at {} bits (condition ~ {:.3e})",
                use_bits,
                o.gram_condition.to_f64()
            )));
        }
        let moment_table = pairing.map(|d| {
            let mut table = Vec::with_capacity(max_degree + 1);
            let mut pw: Vec<S> = vec![S::from_i64_prec(1, use_bits); m.len()];
            for _k in 0..=max_degree {
                let mut acc = S::zero();
                for i in 0..m.len() {
                    acc = acc + d[i].clone() * pw[i].clone() * m.weight_scalar(i, use_bits);
                }
                table.push(acc);
                for (x, t) in pw.iter_mut().zip(m.support()) {
                    *x = x.clone() * t.clone();
                }
            }
            table
        });
        let verdict = residual_verdict(&o.residuals, max_degree, m.len(), use_bits);
        return Ok(DensityReport {
            max_degree,
            residuals: o.residuals,
            gram_condition: o.gram_condition,
            precision_used: use_bits,
            moment_table,
            verdict,
        });
    }
}

/// Frozen trend rule: with K = max_degree/2, dense-trend requires every
/// voting probe residual to drop by at least a factor 2 from degree K to
/// degree 2K; a plateau above the precision floor on some voting probe is a
/// non-dense trend; degenerate windows (2K+1 >= window size) are
/// inconclusive. Only the coordinate probes (the first three) vote: a random
/// unit probe carries mass at the window edge that no low-degree polynomial
/// can reach, so it stress-tests the Gram but cannot distinguish measures.
fn residual_verdict<S: Real>(
    residuals: &[Vec<S>],
    max_degree: usize,
    window: usize,
    bits: u32,
) -> DensityVerdict {
    let k = max_degree / 2;
    let k2 = 2 * k;
    if k == 0 || k2 > max_degree || k2 + 1 >= window {
        return DensityVerdict::Inconclusive;
    }
    let floor = S::pow2(-(bits as i64) / 4, bits);
    let two = S::from_i64_prec(2, bits);
    let mut all_drop = true;
    let mut any_plateau = false;
    for probe in residuals.iter().take(3) {
        let a = probe[k].clone();
        let b = probe[k2].clone();
        if b.clone() * two.clone() > a {
            all_drop = false;
            if b > floor {
                any_plateau = true;
            }
        }
    }
    if all_drop {
        DensityVerdict::DenseTrend
    } else if any_plateau {
        DensityVerdict::NonDenseTrend
    } else {
        DensityVerdict::Inconclusive
    }
}

/// Exact-rational residual-squared table for a single-coordinate probe: the
/// independent oracle route (normal equations over the rationals in the
/// mu-weighted metric; no square roots are needed because only squared
/// correlations enter).
pub fn exact_residual_sq(
    support: &[BigRational],
    weights: &[BigRational],
    probe_index: usize,
    probe_value: &BigRational,
    max_degree: usize,
) -> Vec<BigRational> {
    let n = support.len();
    let ip = |a: &[BigRational], b: &[BigRational]| -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..n {
            acc += &a[i] * &b[i] * &weights[i];
        }
        acc
    };
    // unnormalized orthogonal value-vectors w_j with mu-norms^2
    let mut basis: Vec<(Vec<BigRational>, BigRational)> = Vec::new();
    let mut cur: Vec<BigRational> = vec![BigRational::one(); n];
    let mut res_sq = Vec::with_capacity(max_degree + 1);
    let mut acc_sq = probe_value * probe_value;
    for k in 0..=max_degree {
        if k > 0 {
            for i in 0..n {
                cur[i] = &cur[i] * &support[i];
            }
        }
        let mut w = cur.clone();
        for (q, nsq) in &basis {
            let c = ip(&w, q) / nsq;
            for i in 0..n {
                let d = &c * &q[i];
                w[i] = &w[i] - &d;
            }
        }
        let nsq = ip(&w, &w);
        if !nsq.is_zero() {
            // correlation^2 of the plain-l2 coordinate probe with the
            // half-weighted normalized basis vector
            let corr_sq =
                probe_value * probe_value * &w[probe_index] * &w[probe_index]
                    * &weights[probe_index]
                    / &nsq;
            acc_sq -= corr_sq;
            if acc_sq.is_negative() {
                acc_sq = BigRational::zero();
            }
            basis.push((w, nsq));
        }
        res_sq.push(acc_sq.clone());
    }
    res_sq
}

// ---------------------------------------------------------------------------
// Log-weight criterion (integer-lattice measures)
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesTrend {
    Convergent,
    Divergent,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct LogWeightReport<S> {
    /// partial sums of log mu_n / (1 + n^2) in |n| order
    pub partial_sums: Vec<S>,
    pub trend: SeriesTrend,
}

/// Partial sums of sum_n log mu_n / (1 + n^2) over an integer-lattice
/// support (t_n = n required exactly), with a tail-based convergence tag.
pub fn log_weight_criterion<S: Real>(
    m: &DiscreteMeasure<S>,
    bits: u32,
) -> Result<LogWeightReport<S>> {
    let p = Prec::<S>::new(bits);
    for i in 0..m.len() {
        let idx = m.index_of(i);
        if m.support()[i].clone() != p.int(idx) {
            return Err(Error::invalid(format!(
                "support[{i}] = {} is not the lattice point {idx}",
                m.support()[i]
            )));
        }
    }
    let mut order: Vec<usize> = (0..m.len()).collect();
    order.sort_by_key(|&i| (m.index_of(i).abs(), m.index_of(i)));
    let mut sums = Vec::with_capacity(m.len());
    let mut terms = Vec::with_capacity(m.len());
    let mut acc = p.zero();
    for &i in &order {
        let nn = m.index_of(i);
        let term = m.weight_scalar(i, bits).ln() / p.int(1 + nn * nn);
        acc = acc + term.clone();
        terms.push(term);
        sums.push(acc.clone());
    }
    // tail rule: |tail-half sum| <= |head-half sum|/2 -> convergent;
    // >= 3/4 of it -> divergent; otherwise inconclusive. The identically-zero
    // series (unit weights) lands in the convergent branch.
    let half = terms.len() / 2;
    let head: S = terms[..half].iter().fold(p.zero(), |a, b| a + b.clone());
    let tail: S = terms[half..].iter().fold(p.zero(), |a, b| a + b.clone());
    let (ha, ta) = (head.abs(), tail.abs());
    let trend = if ta.clone() * p.int(2) <= ha.clone() {
        SeriesTrend::Convergent
    } else if ta * p.int(4) >= ha * p.int(3) {
        SeriesTrend::Divergent
    } else {
        SeriesTrend::Inconclusive
    };
    Ok(LogWeightReport { partial_sums: sums, trend })
}

// ---------------------------------------------------------------------------
// Weighted series (the classical pair) and the divisor test
// ---------------------------------------------------------------------------

/// Partial-sum tables of sum 1/(mu_n |D'(t_n)|^2) and the (1+t^2)-damped
/// variant, exact over the rationals whenever the measure stores exact
/// weights (the support always converts exactly).
#[derive(Clone, Debug)]
pub struct WeightedSeriesReport<S> {
    pub first_partial: Vec<S>,
    pub second_partial: Vec<S>,
    pub first_trend: SeriesTrend,
    pub second_trend: SeriesTrend,
    pub exact: bool,
    pub first_exact: Option<Vec<BigRational>>,
    pub second_exact: Option<Vec<BigRational>>,
}

fn series_trend<S: Real>(partial: &[S], bits: u32) -> SeriesTrend {
    let p = Prec::<S>::new(bits);
    let n = partial.len();
    if n < 4 {
        return SeriesTrend::Inconclusive;
    }
    let tail = partial[n - 1].clone() - partial[n / 2].clone();
    let last = partial[n - 1].clone();
    if tail.clone() * p.int(4) >= last.clone() {
        SeriesTrend::Divergent
    } else if tail <= p.f64(1e-3) * (p.one() + last) {
        SeriesTrend::Convergent
    } else {
        SeriesTrend::Inconclusive
    }
}

/// The two series over the full support with D = A (the product over the
/// whole zero set, which must match the measure support).
pub fn hamburger_series<S: Real>(
    m: &DiscreteMeasure<S>,
    product: &CanonicalProduct<S>,
    bits: u32,
) -> Result<WeightedSeriesReport<S>> {
    let zeros = product
        .real_zeros()
        .ok_or_else(|| Error::invalid("hamburger series requires a real product"))?;
    if zeros.len() != m.len() || zeros.iter().zip(m.support()).any(|(a, b)| a != b) {
        return Err(Error::invalid("product zeros must equal the support"));
    }
    let sel: Vec<usize> = (0..m.len()).collect();
    weighted_series_over(m, &sel, bits)
}

#[derive(Clone, Debug)]
pub struct DivisorTestReport<S> {
    pub series: WeightedSeriesReport<S>,
    pub hamburger: HamburgerDiagnostic<S>,
    pub mask_len: usize,
}

/// Divisor series over a masked zero subset: builds the finite product over
/// the masked support points and tabulates sum_{mask} 1/(mu_n |D'(t_n)|^2)
/// together with the Hamburger-class diagnostic of the divisor. A bounded
/// trend for a Hamburger-consistent divisor is evidence of non-density.
pub fn borichev_sodin_test<S: Real>(
    m: &DiscreteMeasure<S>,
    mask: &[usize],
    bits: u32,
) -> Result<DivisorTestReport<S>> {
    if mask.is_empty() {
        return Err(Error::invalid("divisor mask must be nonempty"));
    }
    let mut sel: Vec<usize> = mask.to_vec();
    sel.sort_unstable();
    sel.dedup();
    if sel.len() != mask.len() {
        return Err(Error::invalid("divisor mask repeats indices (non-simple zeros)"));
    }
    if *sel.last().unwrap() >= m.len() {
        return Err(Error::invalid("divisor mask index out of range"));
    }
    let series = weighted_series_over(m, &sel, bits)?;
    let sub_zeros: Vec<S> = sel.iter().map(|&i| m.support()[i].clone()).collect();
    let sub = CanonicalProduct::from_real_zeros(&sub_zeros, crate::products::Genus::Zero, bits)?;
    let p = Prec::<S>::new(bits);
    let m_list = [p.int(1), p.int(2), p.int(3)];
    let hamburger = hamburger_check(&sub, &m_list)?;
    Ok(DivisorTestReport { series, hamburger, mask_len: sel.len() })
}

fn weighted_series_over<S: Real>(
    m: &DiscreteMeasure<S>,
    sel: &[usize],
    bits: u32,
) -> Result<WeightedSeriesReport<S>> {
    if m.all_weights_exact() {
        let support_q = m.support_rationals();
        let sub: Vec<BigRational> = sel.iter().map(|&i| support_q[i].clone()).collect();
        let mut first = Vec::with_capacity(sel.len());
        let mut second = Vec::with_capacity(sel.len());
        let mut acc1 = BigRational::zero();
        let mut acc2 = BigRational::zero();
        for (k, &i) in sel.iter().enumerate() {
            let d = exact::product_derivative_at_zero(&sub, k);
            let mu = m.weights()[i].to_rational();
            let term = (&mu * &(&d * &d)).recip();
            acc1 += &term;
            let t = &support_q[i];
            acc2 += &term / (BigRational::one() + t * t);
            first.push(acc1.clone());
            second.push(acc2.clone());
        }
        let p = Prec::<S>::new(bits);
        let first_s: Vec<S> = first.iter().map(|q| p.ratio(q)).collect();
        let second_s: Vec<S> = second.iter().map(|q| p.ratio(q)).collect();
        let ft = series_trend(&first_s, bits);
        let st = series_trend(&second_s, bits);
        return Ok(WeightedSeriesReport {
            first_partial: first_s,
            second_partial: second_s,
            first_trend: ft,
            second_trend: st,
            exact: true,
            first_exact: Some(first),
            second_exact: Some(second),
        });
    }
    let sub_zeros: Vec<S> = sel.iter().map(|&i| m.support()[i].clone()).collect();
    let sub = CanonicalProduct::from_real_zeros(&sub_zeros, crate::products::Genus::Zero, bits)?;
    let p = Prec::<S>::new(bits);
    let mut first = Vec::with_capacity(sel.len());
    let mut second = Vec::with_capacity(sel.len());
    let mut acc1 = p.zero();
    let mut acc2 = p.zero();
    for (k, &i) in sel.iter().enumerate() {
        let d = sub.derivative_at_real_zero(k)?;
        let mu = m.weight_scalar(i, bits);
        let term = (mu * d.clone() * d).recip();
        acc1 = acc1 + term.clone();
        let t = m.support()[i].clone();
        acc2 = acc2 + term / (p.one() + t.clone() * t);
        first.push(acc1.clone());
        second.push(acc2.clone());
    }
    let ft = series_trend(&first, bits);
    let st = series_trend(&second, bits);
    Ok(WeightedSeriesReport {
        first_partial: first,
        second_partial: second,
        first_trend: ft,
        second_trend: st,
        exact: false,
        first_exact: None,
        second_exact: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigfloat::BigFloat;
    use crate::measure::{make_example, ExampleKind, LatticeLaw, Weight};
    use crate::products::Genus;

    type B = BigFloat;

    #[test]
    fn two_masses_full_span() {
        let m = DiscreteMeasure::new(
            "two",
            vec![1.0f64, 2.0],
            vec![Weight::Approx(1.0), Weight::Approx(1.0)],
            1,
        )
        .unwrap();
        let probes = default_probes::<f64>(2, 0, 53);
        let rep = density_residuals(&m, 1, &probes, None, 53).unwrap();
        for pr in &rep.residuals {
            assert_eq!(pr[1], 0.0, "K=1 residual must be exactly 0 on two masses");
        }
    }

    #[test]
    fn residual_monotone_in_degree() {
        let bits = 512;
        let m = make_example::<B>(
            &ExampleKind::Lattice { n_max: 10, law: LatticeLaw::ExpSqrt },
            bits,
        )
        .unwrap();
        let probes = default_probes::<B>(m.len(), 7, bits);
        let rep = density_residuals(&m, 12, &probes, None, bits).unwrap();
        for pr in &rep.residuals {
            for w in pr.windows(2) {
                assert!(w[1] <= w[0], "residuals must be non-increasing");
            }
        }
    }

    #[test]
    fn lattice_exp_sqrt_dense_trend() {
        let bits = 512;
        let m = make_example::<B>(
            &ExampleKind::Lattice { n_max: 25, law: LatticeLaw::ExpSqrt },
            bits,
        )
        .unwrap();
        let probes = default_probes::<B>(m.len(), 1, bits);
        let rep = density_residuals(&m, 24, &probes, None, bits).unwrap();
        assert_eq!(rep.verdict, DensityVerdict::DenseTrend);
    }

    #[test]
    fn simex_non_dense_trend() {
        let bits = 512;
        let m = make_example::<B>(&ExampleKind::Simex { n_min: 1, n_max: 12 }, bits).unwrap();
        let probes = default_probes::<B>(m.len(), 1, bits);
        let rep = density_residuals(&m, 8, &probes, None, bits).unwrap();
        assert_eq!(rep.verdict, DensityVerdict::NonDenseTrend);
    }

    #[test]
    fn simex_residual_matches_exact_oracle() {
        let bits = 512;
        let m = make_example::<B>(&ExampleKind::Simex { n_min: 1, n_max: 8 }, bits).unwrap();
        let p = Prec::<B>::new(bits);
        let mut probe = vec![p.zero(); 8];
        probe[1] = p.one();
        let rep = density_residuals(&m, 5, &[probe], None, bits).unwrap();

        let support_q = m.support_rationals();
        let weights_q: Vec<BigRational> = m.weights().iter().map(|w| w.to_rational()).collect();
        let oracle = exact_residual_sq(&support_q, &weights_q, 1, &BigRational::one(), 5);
        for k in 0..=5 {
            let got = rep.residuals[0][k].clone();
            let want = p.ratio(&oracle[k]).sqrt();
            let err = (got - want).abs().to_f64();
            assert!(err < 1e-100, "k={k} err={err}");
        }
    }

    #[test]
    fn log_weight_trends() {
        let bits = 256;
        let m = make_example::<B>(
            &ExampleKind::Lattice { n_max: 40, law: LatticeLaw::ExpSqrt },
            bits,
        )
        .unwrap();
        assert_eq!(log_weight_criterion(&m, bits).unwrap().trend, SeriesTrend::Convergent);

        let m2 = make_example::<B>(
            &ExampleKind::Lattice { n_max: 40, law: LatticeLaw::ExpSquare },
            bits,
        )
        .unwrap();
        assert_eq!(log_weight_criterion(&m2, bits).unwrap().trend, SeriesTrend::Divergent);

        let m3 =
            make_example::<B>(&ExampleKind::Lattice { n_max: 40, law: LatticeLaw::Unit }, bits)
                .unwrap();
        let rep3 = log_weight_criterion(&m3, bits).unwrap();
        assert_eq!(rep3.trend, SeriesTrend::Convergent);
        assert!(rep3.partial_sums.last().unwrap().is_zero());

        let m4 = make_example::<B>(&ExampleKind::Simex { n_min: 1, n_max: 5 }, bits).unwrap();
        assert!(log_weight_criterion(&m4, bits).is_err());
    }

    #[test]
    fn canonical_series_is_exactly_n() {
        let bits = 256;
        let m = make_example::<B>(&ExampleKind::HamburgerCx { n_sq: 40, n_cb: 15 }, bits).unwrap();
        let p = CanonicalProduct::from_real_zeros(m.support(), Genus::Zero, bits).unwrap();
        let rep = hamburger_series(&m, &p, bits).unwrap();
        assert!(rep.exact);
        let fe = rep.first_exact.as_ref().unwrap();
        for (k, s) in fe.iter().enumerate() {
            assert_eq!(*s, exact::int(k as i64 + 1), "S_{} != {}", k + 1, k + 1);
        }
        assert_eq!(rep.first_trend, SeriesTrend::Divergent);
        assert_eq!(rep.second_trend, SeriesTrend::Convergent);
    }

    #[test]
    fn scaled_canonical_weights_converge() {
        // mu_n = |A'|^-2 t_n^2 makes the first series behave like sum 1/t^2
        let bits = 256;
        let base =
            make_example::<B>(&ExampleKind::HamburgerCx { n_sq: 10, n_cb: 6 }, bits).unwrap();
        let support_q = base.support_rationals();
        let weights: Vec<Weight<B>> = base
            .weights()
            .iter()
            .zip(&support_q)
            .map(|(w, t)| Weight::Exact(w.to_rational() * t * t))
            .collect();
        let m = DiscreteMeasure::new("scaled", base.support().to_vec(), weights, 1).unwrap();
        let p = CanonicalProduct::from_real_zeros(m.support(), Genus::Zero, bits).unwrap();
        let rep = hamburger_series(&m, &p, bits).unwrap();
        assert_eq!(rep.first_trend, SeriesTrend::Convergent);
    }

    #[test]
    fn full_mask_divisor_equals_first_series() {
        let bits = 256;
        let m = make_example::<B>(&ExampleKind::HamburgerCx { n_sq: 8, n_cb: 5 }, bits).unwrap();
        let p = CanonicalProduct::from_real_zeros(m.support(), Genus::Zero, bits).unwrap();
        let series = hamburger_series(&m, &p, bits).unwrap();
        let mask: Vec<usize> = (0..m.len()).collect();
        let bs = borichev_sodin_test(&m, &mask, bits).unwrap();
        assert_eq!(
            bs.series.first_exact.as_ref().unwrap(),
            series.first_exact.as_ref().unwrap(),
            "full mask must reproduce the first series entry-for-entry"
        );
    }

    #[test]
    fn single_point_mask_degenerate() {
        let bits = 256;
        let m = make_example::<B>(&ExampleKind::HamburgerCx { n_sq: 6, n_cb: 4 }, bits).unwrap();
        let bs = borichev_sodin_test(&m, &[3], bits).unwrap();
        assert_eq!(bs.hamburger.verdict, crate::products::Verdict::Inconclusive);
    }

    #[test]
    fn mask_validation() {
        let bits = 128;
        let m = make_example::<B>(&ExampleKind::HamburgerCx { n_sq: 4, n_cb: 2 }, bits).unwrap();
        assert!(borichev_sodin_test(&m, &[], bits).is_err());
        assert!(borichev_sodin_test(&m, &[0, 0], bits).is_err());
        assert!(borichev_sodin_test(&m, &[99], bits).is_err());
    }

    #[test]
    fn weight_rescaling_leaves_residuals_invariant() {
        let bits = 256;
        let m = make_example::<B>(
            &ExampleKind::Lattice { n_max: 8, law: LatticeLaw::ExpSqrt },
            bits,
        )
        .unwrap();
        let scaled: Vec<Weight<B>> = m
            .weights()
            .iter()
            .map(|w| Weight::Approx(w.to_scalar(bits) * B::from_f64_prec(3.75, bits)))
            .collect();
        let m2 = DiscreteMeasure::new("scaled", m.support().to_vec(), scaled, -8).unwrap();
        let probes = default_probes::<B>(m.len(), 3, bits);
        let r1 = density_residuals(&m, 6, &probes, None, bits).unwrap();
        let r2 = density_residuals(&m2, 6, &probes, None, bits).unwrap();
        for (a, b) in r1.residuals.iter().zip(&r2.residuals) {
            for (x, y) in a.iter().zip(b) {
                let err = (x.clone() - y.clone()).abs().to_f64();
                assert!(err < 1e-60, "{err}");
            }
        }
    }
}
