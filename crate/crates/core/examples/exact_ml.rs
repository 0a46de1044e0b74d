//! Exact maximum loneliness with its witness time, checked against a grid.

use runnerlab::exact_ml::{candidate_count, loneliness_at, ml_exact, ml_grid_oracle};
use runnerlab::speeds::SpeedSet;

fn main() {
    for n in 1..=6 {
        let s = SpeedSet::initial_segment(n);
        let r = ml_exact(&s).unwrap();
        println!("ML{s} = {} at t = {}", r.value, r.witness_time);
    }

    let s = SpeedSet::new([3, 7, 10, 12]).unwrap();
    let r = ml_exact(&s).unwrap();
    println!("\nML{s} = {} ({} candidate times)", r.value, candidate_count(&s));
    assert_eq!(loneliness_at(&s, &r.witness_time), r.value);
    let grid = ml_grid_oracle(&s, 10_000);
    println!("grid of 10^4 points sees {grid}");
}
