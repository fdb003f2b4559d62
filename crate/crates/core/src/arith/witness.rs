//! Bounded searches for explicit solutions. These certify positive
//! verdicts; they never decide anything on their own.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{ToPrimitive, Zero};

use super::rational::Rational;

fn isqrt_exact(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

/// Scales a rational form to coprime integer coefficients.
fn integer_form(c: [&Rational; 3]) -> Option<[i128; 3]> {
    let l = c.iter().fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = c.iter().map(|q| (*q * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return None;
    }
    let v: Option<Vec<i128>> = ints.iter().map(|x| (x / &g).to_i128()).collect();
    v.and_then(|v| v.try_into().ok())
}

/// Primitive nonzero zero of `c₀x² + c₁y² + c₂z²` with all entries in
/// `[0, bound]`, searching by increasing height.
pub fn search_integer_form(c: [i128; 3], bound: u64) -> Option<[i128; 3]> {
    if c.contains(&0) {
        return None;
    }
    if c.iter().all(|&x| x > 0) || c.iter().all(|&x| x < 0) {
        return None;
    }
    let bound = bound as i128;
    // iterate the two smaller coefficients, solve for the largest
    let k = (0..3).max_by_key(|&i| c[i].abs()).unwrap();
    let (i, j) = match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let try_pair = |x: i128, y: i128| -> Option<[i128; 3]> {
        let t = -(c[i] * x * x + c[j] * y * y);
        if t % c[k] != 0 {
            return None;
        }
        let z = isqrt_exact(t / c[k])?;
        if z > bound {
            return None;
        }
        let mut out = [0; 3];
        out[i] = x;
        out[j] = y;
        out[k] = z;
        let g = x.gcd(&y).gcd(&z);
        Some(out.map(|v| v / g))
    };
    for h in 1..=bound {
        for other in 0..=h {
            if let Some(w) = try_pair(h, other).or_else(|| try_pair(other, h)) {
                return Some(w);
            }
        }
    }
    None
}

/// Primitive integer zero of `c₀x² + c₁y² + c₂z²` with entries at most
/// `bound`, or `None` if nothing was found below the bound.
pub fn witness_search(c: [&Rational; 3], bound: u64) -> Option<[BigInt; 3]> {
    let form = integer_form(c)?;
    let w = search_integer_form(form, bound)?;
    let value: Rational = (0..3)
        .map(|i| c[i] * Rational::from_integer(BigInt::from(w[i] * w[i])))
        .sum();
    assert!(value.is_zero(), "search returned a non-solution");
    Some(w.map(BigInt::from))
}

fn rat_of(n: i128) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `(x, y)` with `a = x² + y²`.
pub fn two_squares_witness(a: &Rational, bound: u64) -> Option<(Rational, Rational)> {
    let one = rat_of(1);
    let w = witness_search([&one, &one, &-a], bound)?;
    let z = Rational::from_integer(w[2].clone());
    let x = Rational::from_integer(w[0].clone()) / &z;
    let y = Rational::from_integer(w[1].clone()) / &z;
    assert_eq!(&x * &x + &y * &y, *a);
    Some((x, y))
}

/// `(x, y)` with `b = a y² − x²`.
pub fn norm_form_witness(a: &Rational, b: &Rational, bound: u64) -> Option<(Rational, Rational)> {
    let w = witness_search([&rat_of(-1), a, &-b], bound)?;
    // a nonzero zero has z ≠ 0 when a is not a square
    if w[2].is_zero() {
        return None;
    }
    let z = Rational::from_integer(w[2].clone());
    let x = Rational::from_integer(w[0].clone()) / &z;
    let y = Rational::from_integer(w[1].clone()) / &z;
    assert_eq!(a * &y * &y - &x * &x, *b);
    Some((x, y))
}

pub type Vec3 = [Rational; 3];

fn dot(u: &[i128; 3], v: &[i128; 3]) -> i128 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

fn cross(u: &[i128; 3], v: &[i128; 3]) -> [i128; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

/// Integer `(x, y, z, w)` with `x² + y² + z² = a·w²`, `w ≥ 1`.
pub fn three_squares_scaled(a: i128, bound: u64) -> Option<([i128; 3], i128)> {
    if a <= 0 {
        return None;
    }
    let bound = bound as i128;
    for w in 1..=bound {
        let t = a * w * w;
        let mut x = 0;
        while 3 * x * x <= t && x <= bound {
            let mut y = x;
            while x * x + 2 * y * y <= t && y <= bound {
                if let Some(z) = isqrt_exact(t - x * x - y * y) {
                    if z <= bound {
                        return Some(([x, y, z], w));
                    }
                }
                y += 1;
            }
            x += 1;
        }
    }
    None
}

/// Rational vectors `e`, `f` with `|e|² = a₁`, `|f|² = a₂`, `e·f = 0`.
///
/// Any `e` of the right length works: its orthogonal complement in the
/// standard form is determined up to isometry.
pub fn q8_witness(a1: &BigInt, a2: &BigInt, bound: u64) -> Option<(Vec3, Vec3)> {
    let (a1i, a2i) = (a1.to_i128()?, a2.to_i128()?);
    let (e, w) = three_squares_scaled(a1i, bound)?;
    let axis = (0..3)
        .map(|k| {
            let mut unit = [0; 3];
            unit[k] = 1;
            cross(&e, &unit)
        })
        .find(|u| u.iter().any(|&x| x != 0))?;
    let v = cross(&e, &axis);
    let (ca, cc) = (dot(&axis, &axis), dot(&v, &v));
    let g = ca.gcd(&cc).gcd(&a2i);
    let [m, n, t] = search_integer_form([ca / g, cc / g, -a2i / g], bound)?;
    if t == 0 {
        return None;
    }
    let ev: Vec3 = e.map(|x| rat_of(x) / rat_of(w));
    let fv: Vec3 = std::array::from_fn(|i| rat_of(m * axis[i] + n * v[i]) / rat_of(t));
    let norm = |x: &Vec3| x.iter().map(|c| c * c).sum::<Rational>();
    let inner: Rational = ev.iter().zip(&fv).map(|(x, y)| x * y).sum();
    assert!(norm(&ev) == Rational::from_integer(a1.clone()));
    assert!(norm(&fv) == Rational::from_integer(a2.clone()));
    assert!(inner.is_zero());
    Some((ev, fv))
}
