//! Builds a module as a disguised direct sum and recovers its
//! Krull–Schmidt multiplicities from the 27 invariants.

use klein4::f2la::F2Matrix;
use klein4::module::{direct_sum, multiplicities, Multiplicities, SummandType};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_invertible(n: usize, rng: &mut ChaCha8Rng) -> F2Matrix {
    use rand::Rng;
    loop {
        let mut p = F2Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if rng.gen_bool(0.5) {
                    p.set(i, j, true);
                }
            }
        }
        if p.rank() == n {
            return p;
        }
    }
}

pub fn run_example() -> (Multiplicities, Multiplicities) {
    let types = [
        SummandType::Free,
        SummandType::OmegaMinus(2),
        SummandType::OmegaPlus(1),
        SummandType::CycG3,
        SummandType::Triv,
        SummandType::Triv,
    ];
    let expected = Multiplicities::from_types(types);
    let parts: Vec<_> = types.iter().map(|t| t.canonical()).collect();
    let m = direct_sum(&parts);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let p = random_invertible(m.dim(), &mut rng);
    let disguised = m.conjugate(&p).expect("invertible change of basis");
    println!("{}", disguised.to_text());
    let found = multiplicities(&disguised).expect("module lies in the family");
    println!("expected {expected}");
    println!("found    {found}");
    (expected, found)
}

#[allow(dead_code)]
fn main() {
    run_example();
}
