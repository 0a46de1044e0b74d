//! Rectification modulo a prime, the dilation transfer, and a full
//! reduction trace that shrinks sparse speeds.

use runnerlab::exact_ml::ml_exact;
use runnerlab::reduction::{
    dilate_model, rectify, rectify_exhaustive, reduce_model, verify_trace, ReductionConfig,
    ResidueSet,
};
use runnerlab::rational::{ratio, to_decimal};
use runnerlab::speeds::SpeedSet;

fn main() {
    let set = ResidueSet::new(1009, [17, 300, 911]).unwrap();
    let d = set.dim2_minus().unwrap();
    let pig = rectify(&set, d).unwrap();
    let best = rectify_exhaustive(&set).unwrap();
    println!("dim2⁻ = {d}; pigeonhole λ = {} radius {}, exhaustive λ = {} radius {}",
        pig.dilation_unit, pig.radius, best.dilation_unit, best.radius);

    let b = SpeedSet::new([17, 300, 911]).unwrap();
    let dil = dilate_model(&b, 1009, best.dilation_unit, &ratio(1009, best.radius)).unwrap();
    println!("dilated model {} with loss {}", dil.model, dil.loss);

    let sparse = SpeedSet::new([5, 48_611, 90_001]).unwrap();
    let trace = reduce_model(&sparse, 64, &ReductionConfig::default()).unwrap();
    for step in &trace.steps {
        println!("p = {:>6}, λ = {:>6}: {} -> {}", step.prime, step.dilation_unit, step.model_before, step.model_after);
    }
    verify_trace(&trace).unwrap();
    let total = trace.total_error();
    let ml = ml_exact(&sparse).unwrap().value;
    let model = ml_exact(&trace.final_model).unwrap().value;
    println!("stop: {:?}; ML = {} >= {} - {}", trace.stop_reason, to_decimal(&ml, 6), to_decimal(&model, 6), to_decimal(&total, 6));
}
