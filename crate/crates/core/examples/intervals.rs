//! Rigorous enclosures and the precision-doubling policy.

use runnerlab::interval::{cos_2pi, pi, sin_2pi, PrecisionPolicy};
use runnerlab::rational::ratio;
use std::cmp::Ordering;

fn main() {
    println!("π ∈ {}", pi(96));
    println!("sin(2π/7) ∈ {}", sin_2pi(&ratio(1, 7), 64));

    // cos(2π/6) = 1/2 exactly, so no precision decides `>` and the cap is hit.
    let policy = PrecisionPolicy::new(32, 256);
    let tie = policy
        .decide::<Ordering, ()>(|bits| Ok(cos_2pi(&ratio(1, 6), bits).cmp_rational(&ratio(1, 2))))
        .unwrap();
    println!("cos(2π/6) vs 1/2: {tie:?}");
    let near = policy
        .decide::<Ordering, ()>(|bits| {
            Ok(cos_2pi(&ratio(1, 6), bits).cmp_rational(&(ratio(1, 2) + ratio(1u64, 1u64 << 60))))
        })
        .unwrap();
    println!("cos(2π/6) vs 1/2 + 2^-60: {near:?}");
}
