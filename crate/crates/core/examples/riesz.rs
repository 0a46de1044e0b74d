//! Riesz products as test measures: coefficients, nonnegativity, and the
//! exact expansion of `∫ΦR` into its `k = 1` and `k >= 2` parts.

use runnerlab::exact_ml::ml_exact;
use runnerlab::fourier::{
    integrate_riesz, quadrature_riesz, riesz_coefficients, riesz_density_f64, PhiSpec, RieszSpec,
};
use runnerlab::rational::ratio;
use runnerlab::speeds::SpeedSet;

fn main() {
    let riesz = RieszSpec::new(vec![1, 5], ratio(1, 2)).unwrap();
    for (m, c) in riesz_coefficients(&riesz) {
        print!("R̂({m}) = {c}  ");
    }
    println!();
    let min = (0..1000).map(|i| riesz_density_f64(&riesz, i as f64 / 1000.0)).fold(f64::MAX, f64::min);
    println!("min R on 1000 points: {min:.4}");

    let s = SpeedSet::new([1, 5, 11]).unwrap();
    let ml = ml_exact(&s).unwrap().value;
    for delta in [ratio(1, 6), ratio(1, 5), ml.clone()] {
        let spec = PhiSpec::new(s.clone(), delta.clone()).unwrap();
        let i = integrate_riesz(&spec, &riesz, 128);
        let (quad, err) = quadrature_riesz(&spec, &riesz, 20_000);
        println!(
            "δ = {delta:<5} ∫ΦR = {}  (2δn = {}, T2 = {:.5}, T3 = {:.5}; quadrature {quad:.5} ± {err:.1e})",
            i.value,
            i.mass,
            i.t2.to_f64(),
            i.t3.to_f64()
        );
    }
    println!("ML = {ml}: below it the integral may drop under 1, at it never");
}
