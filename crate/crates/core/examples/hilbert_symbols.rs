//! Tabulates Hilbert symbols and checks the product formula.

use klein4::arith::rational::rat;
use klein4::arith::{hilbert_symbol, relevant_places};

pub fn run_example() -> Vec<(i64, i64, bool)> {
    let mut out = Vec::new();
    for (a, b) in [(-1, -1), (2, 7), (-1, 5), (13, -5), (6, -35), (-3, 10)] {
        let (qa, qb) = (rat(a), rat(b));
        let places = relevant_places(&[&qa, &qb]).expect("small inputs");
        let symbols: Vec<_> = places
            .iter()
            .map(|v| (v.to_string(), hilbert_symbol(&qa, &qb, *v).unwrap()))
            .collect();
        let product: i8 = symbols.iter().map(|(_, s)| s).product();
        println!("({a}, {b}): {symbols:?}, product {product}");
        out.push((a, b, product == 1));
    }
    out
}

#[allow(dead_code)]
fn main() {
    run_example();
}
