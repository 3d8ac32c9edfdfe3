use cauchyloc::bigfloat::BigFloat as B;
use cauchyloc::cauchy::{CauchyEntire, CauchyFunction};
use cauchyloc::complex::Complex;
use cauchyloc::measure::{make_example, ExampleKind};
use cauchyloc::scalar::{Prec, Real};
use cauchyloc::zeros::*;
use rand::{Rng, SeedableRng};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

static EVALS: AtomicU64 = AtomicU64::new(0);

struct Counted<'a, S: cauchyloc::scalar::Real>(&'a dyn AnalyticFn<S>);
impl<'a, S: cauchyloc::scalar::Real> AnalyticFn<S> for Counted<'a, S> {
    fn eval(&self, z: &Complex<S>) -> cauchyloc::Result<Complex<S>> {
        EVALS.fetch_add(1, Ordering::Relaxed);
        self.0.eval(z)
    }
    fn eval_with_deriv(&self, z: &Complex<S>) -> cauchyloc::Result<(Complex<S>, Complex<S>)> {
        EVALS.fetch_add(1, Ordering::Relaxed);
        self.0.eval_with_deriv(z)
    }
    fn bits(&self) -> u32 { self.0.bits() }
}

fn main() {
    let bits = 512;
    let p = Prec::<B>::new(bits);
    let m = make_example::<B>(&ExampleKind::Simex { n_min: 1, n_max: 12 }, bits).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    let coeffs: Vec<Complex<B>> = (0..12).map(|_| {
        let u1: f64 = rng.random::<f64>().max(1e-12);
        let u2: f64 = rng.random();
        let g = (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
        Complex::from_re(p.f64(g))
    }).collect();
    let g = CauchyFunction::from_l2_coeffs(m.clone(), &coeffs, bits).unwrap().attach_default_product().unwrap();
    let fe = CauchyEntire::new(&g).unwrap();
    let counted = Counted(&fe);
    // time one eval
    let z = Complex::new(p.f64(3.7), p.f64(0.4));
    let t0 = Instant::now();
    for _ in 0..1000 { let _ = fe.eval_with_deriv(&z).unwrap(); }
    println!("eval_with_deriv: {:.1?}/call", t0.elapsed() / 1000);
    let w1 = Rect::new(p.one(), p.pow2(13), -p.one(), p.one()).unwrap();
    let mut opts = FindOpts::default();
    for i in 1..m.len() { opts.split_hints.push((m.support()[i-1].clone()+m.support()[i].clone())/p.int(2)); }
    let t0 = Instant::now();
    let inv = find_zeros(&counted, &w1, &(w1.diameter()*B::pow2(-20,bits)), &opts).unwrap();
    println!("find_zeros: {:.2?} evals {} zeros {}", t0.elapsed(), EVALS.load(Ordering::Relaxed), inv.zeros.len());
}
