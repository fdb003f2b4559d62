//! Classifies the summand `X` for a handful of biquadratic fields and
//! prints the embedding verdicts with their certificates.

use klein4::arith::{BiquadParams, Classifier};

pub fn run_example() -> Vec<(i64, i64, String)> {
    let classifier = Classifier::default();
    let mut out = Vec::new();
    for (a1, a2) in [(7, -5), (7, -1), (2, -1), (5, 13), (5, 41)] {
        let p = BiquadParams::new(a1, a2).expect("independent squarefree classes");
        let x = classifier.classify_x(&p).expect("consistent verdicts");
        let w = classifier.witnesses(&p, &x.report);
        println!("{p}: X = {}", x.shape);
        println!("  im T basis: {:?}", x.im_t.basis().iter().map(|v| v.to_string()).collect::<Vec<_>>());
        for i in 0..3 {
            if let Some((x, y)) = &w.z4z2[i] {
                println!("  a{} = ({x})² + ({y})²", i + 1);
            }
        }
        if let Some((e, f)) = &w.q8 {
            println!("  Q8 frame: e = {e:?}, f = {f:?}");
        }
        out.push((a1, a2, x.shape.to_string()));
    }
    out
}

#[allow(dead_code)]
fn main() {
    run_example();
}
