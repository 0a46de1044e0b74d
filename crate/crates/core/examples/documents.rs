//! Certificates as versioned documents: write, read back, re-verify, and
//! watch a tampered copy fail.

use runnerlab::certificates::{best_certificate, CertifyOptions, Effort};
use runnerlab::document::{verify_document, Document, Payload};
use runnerlab::interval::PrecisionPolicy;
use runnerlab::rational::ratio;
use runnerlab::speeds::SpeedSet;

fn main() {
    let s = SpeedSet::new([1, 2, 3]).unwrap();
    let cert = best_certificate(&s, &CertifyOptions::from_effort(Effort::Standard));
    let text = Document::new(Payload::Certificate(cert)).to_json();
    println!("{}", &text[..text.len().min(400)]);

    let policy = PrecisionPolicy::default();
    let doc = Document::parse(&text).unwrap();
    println!("verified: {}", verify_document(&doc, &policy).unwrap().passed());

    let mut forged = doc;
    if let Payload::Certificate(c) = &mut forged.payload {
        c.bound = ratio(1, 3);
    }
    let v = verify_document(&forged, &policy).unwrap();
    println!("forged: {:?}", v.failures);
}
