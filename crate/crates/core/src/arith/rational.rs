//! Square classes of rationals and factoring of machine-size integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ArithError;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// An integer in the same square class as `q`, namely `num·den`.
pub fn class_integer(q: &Rational) -> Result<BigInt, ArithError> {
    if q.is_zero() {
        return Err(ArithError::ZeroInput);
    }
    Ok(q.numer() * q.denom())
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for all of `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Pollard-Brent; `n` must be an odd composite.
fn pollard_brent(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g, mut q) = (2u64, 2u64, 1u64, 1u64);
        let mut ys = y;
        let mut r = 1u64;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Prime factorization as sorted `(p, e)` pairs. `factor_u64(1)` is empty.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    let mut rest = n;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while rest > 1 && rest.is_multiple_of(p) {
            primes.push(p);
            rest /= p;
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
        } else {
            let d = pollard_brent(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Factorization of `|n|`.
pub fn factor(n: &BigInt) -> Result<Vec<(u64, u32)>, ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroInput);
    }
    let m = n.abs().to_u64().ok_or_else(|| ArithError::TooLarge(n.to_string()))?;
    Ok(factor_u64(m))
}

/// The squarefree integer `d` with `q = d·(rational square)`.
pub fn squarefree_part(q: &Rational) -> Result<BigInt, ArithError> {
    if q.is_zero() {
        return Err(ArithError::ZeroInput);
    }
    let mut d = BigInt::one();
    for part in [q.numer(), q.denom()] {
        for (p, e) in factor(part)? {
            if e % 2 == 1 {
                d *= p;
            }
        }
    }
    if q.is_negative() {
        d = -d;
    }
    Ok(d)
}

pub fn squarefree_part_int(n: &BigInt) -> Result<BigInt, ArithError> {
    squarefree_part(&Rational::from_integer(n.clone()))
}

pub fn is_square(q: &Rational) -> bool {
    squarefree_part(q).map(|d| d.is_one()).unwrap_or(false)
}

/// Odd primes dividing `num·den` of `q`.
pub fn odd_prime_divisors(q: &Rational) -> Result<Vec<u64>, ArithError> {
    let mut ps: Vec<u64> = Vec::new();
    for part in [q.numer(), q.denom()] {
        ps.extend(factor(part)?.into_iter().map(|(p, _)| p).filter(|&p| p != 2));
    }
    ps.sort_unstable();
    ps.dedup();
    Ok(ps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(&rat(18)).unwrap(), BigInt::from(2));
        assert_eq!(squarefree_part(&ratio(-5, 49)).unwrap(), BigInt::from(-5));
        assert_eq!(squarefree_part(&ratio(65, 4)).unwrap(), BigInt::from(65));
        assert_eq!(squarefree_part(&ratio(3, 12)).unwrap(), BigInt::from(1));
        assert_eq!(squarefree_part(&rat(0)), Err(ArithError::ZeroInput));
    }

    #[test]
    fn factoring_matches_trial_division() {
        for n in 1u64..3000 {
            let f = factor_u64(n);
            assert_eq!(f.iter().map(|(p, e)| p.pow(*e)).product::<u64>(), n);
            assert!(f.iter().all(|(p, _)| (2..*p).all(|d| p % d != 0)));
        }
        let big = 1_000_000_007u64 * 998_244_353;
        assert_eq!(factor_u64(big), vec![(998_244_353, 1), (1_000_000_007, 1)]);
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn too_large_is_reported() {
        let n = BigInt::from(u64::MAX) * 3;
        assert!(matches!(factor(&n), Err(ArithError::TooLarge(_))));
    }
}
