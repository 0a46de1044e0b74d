//! Bounds from the uniform measure on `Z/p`, with the prime found by a
//! residue-window search.

use runnerlab::certificates::{certify_good_prime, find_good_prime, prime_bound};
use runnerlab::rational::{ratio, to_decimal};
use runnerlab::speeds::SpeedSet;

fn main() {
    let s = SpeedSet::new([1, 2, 3]).unwrap();
    for p in [5, 7, 11, 13] {
        println!("p = {p:>2}: ⌈(p-1)/2n⌉/p = {}", prime_bound(s.len(), p));
    }

    let dense = SpeedSet::new((1..=30).filter(|v| v % 3 != 0).take(10)).unwrap();
    let c = ratio(1, 2);
    let p = find_good_prime(&dense, &c, 10_000).unwrap();
    let cert = certify_good_prime(&dense, &c, 10_000).unwrap();
    println!(
        "\n{dense}: p = {p}, bound {} vs 1/(2n) = {}",
        to_decimal(&cert.bound, 6),
        to_decimal(&ratio(1, 2 * dense.len() as u64), 6)
    );
}
