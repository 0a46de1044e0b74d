//! Every certification method on one speed set, and the automatic choice.

use runnerlab::certificates::{
    best_certificate, certify_best_prime, certify_riesz_dissociated, certify_riesz_general,
    certify_trivial, CertifyOptions, Effort, RieszOptions,
};
use runnerlab::exact_ml::ml_exact;
use runnerlab::interval::PrecisionPolicy;
use runnerlab::rational::to_decimal;
use runnerlab::speeds::SpeedSet;

fn main() {
    let s = SpeedSet::new([1, 3, 9, 27]).unwrap();
    let ml = ml_exact(&s).unwrap().value;
    println!("ML{s} = {ml} ≈ {}", to_decimal(&ml, 6));

    let certs = [
        Ok(certify_trivial(&s)),
        certify_best_prime(&s, 500),
        certify_riesz_dissociated(&s, &PrecisionPolicy::default()),
        certify_riesz_general(&s, &RieszOptions::default()),
    ];
    for c in certs.into_iter().flatten() {
        assert!(c.bound <= ml);
        println!("{:<18} {}", c.method.name(), to_decimal(&c.bound, 6));
    }

    let best = best_certificate(&s, &CertifyOptions::from_effort(Effort::Quick));
    println!("quick effort picks {} with {}", best.method.name(), best.bound);
}
