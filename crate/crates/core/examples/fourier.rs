//! The covering count `Φ`, its Fourier coefficients and the Fejér sums.

use runnerlab::fourier::{
    fejer_weighted_sum, integrate_discrete, min_phi, phi_hat, phi_value, DiscreteMeasure,
    FejerWeights, PhiSpec,
};
use runnerlab::rational::ratio;
use runnerlab::speeds::SpeedSet;

fn main() {
    let s = SpeedSet::initial_segment(4);
    let spec = PhiSpec::new(s.clone(), ratio(1, 6)).unwrap();
    println!("Φ(1/5) = {}", phi_value(&spec, &ratio(1, 5)));
    let min = min_phi(&spec, 1_000_000).unwrap();
    println!("min Φ = {} at {} (δ = 1/6 < ML = 1/5)", min.value, min.witness);

    for m in 0..=4 {
        let c = phi_hat(&spec, m, 128);
        println!("Φ̂({m}) = {}", c.value);
    }

    let mu = DiscreteMeasure::uniform_mod_p(7);
    println!("∫Φ dμ over Z/7 = {}", integrate_discrete(&spec, &mu));

    let spec = PhiSpec::new(s, ratio(1, 5)).unwrap();
    for v in 1..=4 {
        let sum = fejer_weighted_sum(&spec, v, 400, FejerWeights::Proof, 128);
        println!("Fejér sum at v = {v}: {sum}");
    }
}
