use proptest::prelude::*;
use runnerlab::certificates::{
    best_certificate, certify_best_prime, verify_certificate, CertifyOptions, Effort,
};
use runnerlab::dissociation::{is_k_dissociated, Dissociation};
use runnerlab::document::{Document, Payload};
use runnerlab::exact_ml::{loneliness_at, ml_exact};
use runnerlab::interval::{cos_2pi, sin_2pi, PrecisionPolicy};
use runnerlab::rational::{parse_rational, ratio, to_f64};
use runnerlab::speeds::SpeedSet;
use std::collections::BTreeSet;

fn speed_set(max_n: usize, max_v: u64) -> impl Strategy<Value = SpeedSet> {
    prop::collection::btree_set(1..=max_v, 1..=max_n).prop_map(|s| SpeedSet::new(s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ml_is_attained_and_bracketed(s in speed_set(5, 60)) {
        let r = ml_exact(&s).unwrap();
        prop_assert_eq!(loneliness_at(&s, &r.witness_time), r.value.clone());
        prop_assert!(r.value >= ratio(1, 2 * s.len() as u64));
        prop_assert!(r.value <= ratio(1, 2));
    }

    #[test]
    fn ml_scale_invariant(s in speed_set(4, 30), k in 2u64..6) {
        prop_assert_eq!(ml_exact(&s.dilate(k).unwrap()).unwrap().value, ml_exact(&s).unwrap().value);
    }

    #[test]
    fn subsets_are_lonelier(s in speed_set(5, 40)) {
        prop_assume!(s.len() >= 2);
        let sub = SpeedSet::new(s.iter().skip(1)).unwrap();
        prop_assert!(ml_exact(&sub).unwrap().value >= ml_exact(&s).unwrap().value);
    }

    #[test]
    fn certificates_sound_and_reverifiable(s in speed_set(4, 40)) {
        let ml = ml_exact(&s).unwrap().value;
        let policy = PrecisionPolicy::default();
        let cert = best_certificate(&s, &CertifyOptions::from_effort(Effort::Quick));
        prop_assert!(cert.bound <= ml);
        let text = Document::new(Payload::Certificate(cert)).to_json();
        let Payload::Certificate(back) = Document::parse(&text).unwrap().payload else { unreachable!() };
        prop_assert!(verify_certificate(&back, &policy).is_ok());
        if let Ok(p) = certify_best_prime(&s, 100) {
            prop_assert!(p.bound <= ml);
        }
    }

    #[test]
    fn relations_are_genuine(v in prop::collection::btree_set(1i64..50, 1..7)) {
        let v: Vec<i64> = v.into_iter().collect();
        if let Dissociation::Relation(r) = is_k_dissociated(&v, 1).unwrap() {
            prop_assert!(r.verify());
        } else {
            // no nonempty signed subset sums to zero
            for mask in 1u32..3u32.pow(v.len() as u32) {
                let (mut m, mut sum) = (mask, 0);
                for x in &v {
                    sum += x * ((m % 3) as i64 - 1);
                    m /= 3;
                }
                let nontrivial = { let mut m = mask; (0..v.len()).any(|_| { let d = m % 3; m /= 3; d != 1 }) };
                prop_assert!(!(nontrivial && sum == 0));
            }
        }
    }

    #[test]
    fn trig_enclosures_contain_float(num in 0i64..1000, den in 1i64..1000) {
        let x = ratio(num, den);
        let t = 2.0 * std::f64::consts::PI * to_f64(&x);
        let s = sin_2pi(&x, 96);
        let c = cos_2pi(&x, 96);
        prop_assert!((s.to_f64() - t.sin()).abs() < 1e-9);
        prop_assert!((c.to_f64() - t.cos()).abs() < 1e-9);
        prop_assert!(s.radius_f64() < 1e-20);
    }

    #[test]
    fn rationals_round_trip(num in -10_000i64..10_000, den in 1i64..10_000) {
        let q = ratio(num, den);
        prop_assert_eq!(parse_rational(&q.to_string()).unwrap(), q);
    }

    #[test]
    fn speed_sets_sort_and_reject_duplicates(v in prop::collection::vec(1u64..100, 1..8)) {
        let distinct: BTreeSet<u64> = v.iter().copied().collect();
        match SpeedSet::new(v.clone()) {
            Ok(s) => {
                prop_assert_eq!(distinct.len(), v.len());
                prop_assert!(s.speeds().windows(2).all(|w| w[0] < w[1]));
            }
            Err(_) => prop_assert!(distinct.len() < v.len()),
        }
    }
}
