//! Writes the norm of an element of `K₃` down to `Q` as a product of
//! norms from `K₁` and `K₂`.

use klein4::arith::rational::ratio;
use klein4::arith::{factor_k3_norm, norm_product, BiquadParams, KElement, NormTarget};

pub fn run_example() -> bool {
    let p = BiquadParams::new(5, 13).unwrap();
    let k = KElement::new(&p, [ratio(3, 2), ratio(1, 1), ratio(-4, 3), ratio(-8, 9)]);
    let target = k.norm(NormTarget::K3);
    println!("element      {k}");
    println!("norm to K3   {target}");
    let h = factor_k3_norm(&k).expect("norm lies in Q");
    println!("factors      {:?}", h);
    let product = norm_product(&p, &h);
    println!("product      {product}");
    target.as_rational() == Some(&product)
}

#[allow(dead_code)]
fn main() {
    assert!(run_example());
}
