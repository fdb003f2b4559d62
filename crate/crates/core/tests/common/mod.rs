#![allow(dead_code)]

use std::collections::HashSet;

use klein4::f2la::F2Matrix;
use klein4::module::{direct_sum, KleinModule, Multiplicities, SummandType};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const FAMILY: [SummandType; 9] = [
    SummandType::Triv,
    SummandType::CycG1,
    SummandType::CycG2,
    SummandType::CycG3,
    SummandType::Free,
    SummandType::OmegaPlus(1),
    SummandType::OmegaPlus(2),
    SummandType::OmegaMinus(1),
    SummandType::OmegaMinus(2),
];

pub fn random_invertible(n: usize, rng: &mut ChaCha8Rng) -> F2Matrix {
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

/// Random multiset over the family with total dimension at most `max_dim`.
pub fn random_types(rng: &mut ChaCha8Rng, max_dim: usize) -> Vec<SummandType> {
    let target = rng.gen_range(1..=max_dim);
    let mut out = Vec::new();
    let mut dim = 0;
    loop {
        let t = FAMILY[rng.gen_range(0..FAMILY.len())];
        if dim + t.dim() > target {
            break;
        }
        dim += t.dim();
        out.push(t);
    }
    if out.is_empty() {
        out.push(SummandType::Triv);
    }
    out
}

/// A conjugated direct sum together with its true multiplicities.
pub fn random_module(rng: &mut ChaCha8Rng, max_dim: usize) -> (KleinModule, Multiplicities) {
    let types = random_types(rng, max_dim);
    let m = direct_sum(&types.iter().map(|t| t.canonical()).collect::<Vec<_>>());
    let p = random_invertible(m.dim(), rng);
    (m.conjugate(&p).unwrap(), Multiplicities::from_types(types))
}

fn squarefree(mut n: i128) -> i128 {
    let sign = n.signum();
    n = n.abs();
    let mut out = 1;
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= p;
        }
        p += 1;
    }
    sign * out * n
}

fn primes_of(mut n: i128) -> Vec<i128> {
    n = n.abs();
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Squarefree, pairwise coprime coefficients with the same isotropy.
fn normalize(mut c: [i128; 3]) -> [i128; 3] {
    loop {
        c = c.map(squarefree);
        let shared = (0..3).find_map(|i| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            primes_of(c[j]).into_iter().find(|p| c[k] % p == 0).map(|p| (i, j, k, p))
        });
        match shared {
            None => return c,
            Some((i, j, k, p)) => {
                c[j] /= p;
                c[k] /= p;
                c[i] *= p;
            }
        }
    }
}

fn primitive_zero_mod(c: [i128; 3], p: i128, modulus: i128) -> bool {
    let m = modulus;
    let sq = |x: i128| (x * x).rem_euclid(m);
    let units: HashSet<i128> = (0..m).filter(|x| x % p != 0).map(sq).collect();
    let all: HashSet<i128> = (0..m).map(sq).collect();
    let term = |ci: i128, s: i128| (ci * s).rem_euclid(m);
    // at least one of the three variables is a unit
    for ui in 0..3 {
        let (j, k) = ((ui + 1) % 3, (ui + 2) % 3);
        let last: HashSet<i128> = all.iter().map(|&s| term(c[k], s)).collect();
        for &su in &units {
            for &sj in &all {
                let t = (term(c[ui], su) + term(c[j], sj)).rem_euclid(m);
                if last.contains(&(-t).rem_euclid(m)) {
                    return true;
                }
            }
        }
    }
    false
}

/// A place where `c₀x² + c₁y² + c₂z² = 0` has no nontrivial solution, found
/// by brute force over residues. `None` means the form is isotropic.
pub fn local_obstruction(c: [i128; 3]) -> Option<String> {
    assert!(c.iter().all(|&x| x != 0));
    let c = normalize(c);
    if c.iter().all(|&x| x > 0) || c.iter().all(|&x| x < 0) {
        return Some("inf".into());
    }
    let mut primes: Vec<i128> = c.iter().flat_map(|&x| primes_of(x)).collect();
    primes.push(2);
    primes.sort_unstable();
    primes.dedup();
    for p in primes {
        let modulus = if p == 2 { 64 } else { p * p };
        if !primitive_zero_mod(c, p, modulus) {
            return Some(p.to_string());
        }
    }
    None
}

/// Whether `a` is a sum of three rational squares, by residues mod 64.
pub fn three_squares_locally(a: i128) -> bool {
    if a <= 0 {
        return false;
    }
    let mut prim = HashSet::new();
    let mut all = HashSet::new();
    for x in 0..64i128 {
        for y in x..64 {
            for z in y..64 {
                let s = (x * x + y * y + z * z) % 64;
                all.insert(s);
                if (x | y | z) & 1 == 1 {
                    prim.insert(s);
                }
            }
        }
    }
    (0..64i128).any(|w| {
        let t = (a * w * w).rem_euclid(64);
        if w % 2 == 1 {
            all.contains(&t)
        } else {
            prim.contains(&t)
        }
    })
}

fn cross(u: [i128; 3], v: [i128; 3]) -> [i128; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

/// Whether `⟨1,1,1⟩` has orthogonal vectors of lengths `a1` and `a2`,
/// decided by residues on the complement of a fixed vector of length `a1`.
pub fn q8_locally(a1: i128, a2: i128) -> bool {
    if a1 <= 0 || a2 <= 0 || !three_squares_locally(a1) {
        return false;
    }
    let e = (1..)
        .find_map(|w: i128| {
            let t = a1 * w * w;
            (0..=t.isqrt()).find_map(|x| {
                (x..=(t - x * x).isqrt()).find_map(|y| {
                    let r = t - x * x - y * y;
                    let z = r.isqrt();
                    (z * z == r).then_some([x, y, z])
                })
            })
        })
        .unwrap();
    let u = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        .into_iter()
        .map(|k| cross(e, k))
        .find(|u| u.iter().any(|&x| x != 0))
        .unwrap();
    let v = cross(e, u);
    let len = |x: [i128; 3]| x.iter().map(|c| c * c).sum::<i128>();
    local_obstruction([len(u), len(v), -a2]).is_none()
}
