//! Computes the filtration of the fixed part and the submodule Ĵ, then
//! solves a diagram inside Ĵ.

use klein4::decomp::{build_hat_j, solvable_in_hat_j, Layer};
use klein4::module::{direct_sum, Operator, SummandType};

pub fn run_example() -> Vec<(&'static str, usize)> {
    let parts: Vec<_> = [
        SummandType::Free,
        SummandType::OmegaPlus(1),
        SummandType::OmegaPlus(2),
        SummandType::CycG1,
        SummandType::Triv,
    ]
    .iter()
    .map(|t| t.canonical())
    .collect();
    let m = direct_sum(&parts);
    let phi = m.fixed_submodule();
    let j = build_hat_j(&m, &phi).expect("Φ is the whole fixed part");
    let f = &j.filtration;
    println!("dim Φ = {}, A = {}, V = {}, B = {}, C = {}, D = {}",
        phi.dim(), f.a.dim(), f.v.dim(), f.b.dim(), f.c.dim(), f.d.dim());
    let mut counts = Vec::new();
    for (name, layer) in j.layers() {
        println!("  {name}: {} summands", layer.len());
        counts.push((name, layer.len()));
    }
    println!("Ĵ decomposes as {}", j.counts());
    if let Some(b) = f.b.basis().first() {
        let g = solvable_in_hat_j(&m, &j, Layer::B, b).expect("b lies in B");
        let a1 = m.operator(Operator::A1).apply(&g);
        println!("A1·{g} = {a1} = {b}");
    }
    counts
}

#[allow(dead_code)]
fn main() {
    run_example();
}
