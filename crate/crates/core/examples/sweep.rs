//! Classifies every field `Q(√a1, √a2)` with small squarefree parameters
//! and prints how often each shape of `X` occurs.

use std::collections::BTreeMap;

use klein4::arith::Classifier;
use klein4::cli::sweep_doc;

pub fn run_example(max_abs: u64) -> BTreeMap<String, usize> {
    let doc = sweep_doc(&Classifier::default(), max_abs).expect("sweep is consistent");
    println!("{} fields with |a| ≤ {max_abs}", doc.records.len());
    for (shape, count) in &doc.histogram {
        println!("  {shape:<45} {count}");
    }
    doc.histogram
}

#[allow(dead_code)]
fn main() {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    run_example(n);
}
