//! Dissociativity tests, 2-dimensions and the signed-sum shells `E_k`.

use runnerlab::dissociation::{dim2, dim2_minus, enumerate_ek, is_k_dissociated};

fn main() {
    let a = [1, 2, 3];
    match is_k_dissociated(&a, 1).unwrap().relation() {
        Some(r) => println!("{a:?} has the relation {r}"),
        None => println!("{a:?} is 1-dissociated"),
    }

    let b = [1, 4, 16, 64];
    println!("{b:?} 2-dissociated: {}", is_k_dissociated(&b, 2).unwrap().is_dissociated());

    let mixed = [1, 2, 5, 13, 40, 41];
    let hi = dim2(&mixed).unwrap();
    let lo = dim2_minus(&mixed).unwrap();
    println!("dim2 = {} via {:?}, dim2⁻ = {} via {:?}", hi.dimension, hi.witness, lo.dimension, lo.witness);

    for k in 0..=b.len() {
        let ek = enumerate_ek(&b, k).unwrap();
        let shown: Vec<i64> = ek.iter().take(6).map(|s| s.value).collect();
        println!("|E_{k}| = {:>2}, first values {shown:?}", ek.len());
    }
}
