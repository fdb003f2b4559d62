//! Local Hilbert symbols over `Q`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::rational::{class_integer, is_prime, odd_prime_divisors, Rational};
use super::ArithError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => f.write_str("inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if matches!(s, "inf" | "∞") {
            return Ok(Place::Infinity);
        }
        match s.parse::<u64>() {
            Ok(p) if is_prime(p) => Ok(Place::Prime(p)),
            _ => Err(ArithError::InvalidPlace(s.to_string())),
        }
    }
}

/// Splits `n = p^v · u` with `p ∤ u`.
fn split(n: &BigInt, p: u64) -> (u32, BigInt) {
    let p = BigInt::from(p);
    let mut u = n.clone();
    let mut v = 0;
    while u.is_multiple_of(&p) {
        u /= &p;
        v += 1;
    }
    (v, u)
}

/// Legendre symbol `(u|p)` as `true` for residues, `p` odd, `p ∤ u`.
fn is_residue(u: &BigInt, p: u64) -> bool {
    let r = u.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    let m = BigInt::from(p);
    BigInt::from(r).modpow(&BigInt::from((p - 1) / 2), &m) == BigInt::from(1)
}

fn mod8(u: &BigInt) -> u64 {
    u.mod_floor(&BigInt::from(8)).to_u64().unwrap()
}

/// `(a, b)_v ∈ {+1, −1}`.
pub fn hilbert_symbol(a: &Rational, b: &Rational, place: Place) -> Result<i8, ArithError> {
    let a = class_integer(a)?;
    let b = class_integer(b)?;
    Ok(match place {
        Place::Infinity => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(p) if !is_prime(p) => return Err(ArithError::InvalidPlace(p.to_string())),
        Place::Prime(2) => {
            let (alpha, u) = split(&a, 2);
            let (beta, v) = split(&b, 2);
            let eps = |x: &BigInt| u32::from(mod8(x) % 4 == 3);
            let omega = |x: &BigInt| u32::from(matches!(mod8(x), 3 | 5));
            let e = eps(&u) * eps(&v) + alpha * omega(&v) + beta * omega(&u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let (alpha, u) = split(&a, p);
            let (beta, v) = split(&b, p);
            let mut e = if p % 4 == 3 { alpha * beta } else { 0 };
            if beta % 2 == 1 && !is_residue(&u, p) {
                e += 1;
            }
            if alpha % 2 == 1 && !is_residue(&v, p) {
                e += 1;
            }
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
    })
}

/// `∞`, `2`, and the odd primes dividing any of `qs`; every other place
/// gives symbol `+1` for pairs drawn from `qs`.
pub fn relevant_places(qs: &[&Rational]) -> Result<Vec<Place>, ArithError> {
    let mut primes = vec![2u64];
    for q in qs {
        if q.is_zero() {
            return Err(ArithError::ZeroInput);
        }
        primes.extend(odd_prime_divisors(q)?);
    }
    primes.sort_unstable();
    primes.dedup();
    let mut out = vec![Place::Infinity];
    out.extend(primes.into_iter().map(Place::Prime));
    Ok(out)
}

/// Product of `(cᵢ, cⱼ)_v` over `i < j`.
pub fn hasse_invariant(coeffs: &[Rational], place: Place) -> Result<i8, ArithError> {
    let mut s = 1;
    for i in 0..coeffs.len() {
        for j in i + 1..coeffs.len() {
            s *= hilbert_symbol(&coeffs[i], &coeffs[j], place)?;
        }
    }
    Ok(s)
}
