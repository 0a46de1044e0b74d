//! Sunflowers of signed supports and the extraction of a 1-dissociated half.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use runnerlab::dissociation::is_k_dissociated;
use runnerlab::sunflower::{
    ek_in_progression, extract_dissociated_half, find_sunflower, random_sunflower,
    ArithmeticProgression,
};
use std::collections::BTreeSet;

fn main() {
    let p = ArithmeticProgression::interval(-10, 10).unwrap();
    let r = ek_in_progression(&[1, 3, 9], 1, &p, 1.0).unwrap();
    println!("|E_1 ∩ [-10, 10]| = {}", r.hits.len());

    let family: Vec<BTreeSet<i64>> = vec![[1, 2].into(), [1, 3].into(), [1, 4].into(), [2, 3].into()];
    let w = find_sunflower(&family, 3).unwrap().unwrap();
    println!("kernel {:?}, petals {:?}", w.kernel, w.petals);

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let inst = random_sunflower(&mut rng, 7, 1, 2, 4);
    let e = extract_dissociated_half(&inst.elements(), &inst.supports, &inst.kernel).unwrap();
    println!("kept {:?} of {:?}; steps {:?}", e.kept, inst.elements(), e.cases);
    assert!(is_k_dissociated(&e.shifted(), 1).unwrap().is_dissociated());
}
