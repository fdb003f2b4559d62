//! Exact arithmetic in `K = Q(√a₁, √a₂)`.

use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::{squarefree_part_int, Rational};
use super::ArithError;

/// Independent square classes `a₁`, `a₂`, with `a₃` the squarefree part
/// of `a₁a₂`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BiquadParams {
    a1: BigInt,
    a2: BigInt,
    a3: BigInt,
}

impl BiquadParams {
    /// Both arguments must already be squarefree.
    pub fn new(a1: impl Into<BigInt>, a2: impl Into<BigInt>) -> Result<Self, ArithError> {
        let (a1, a2) = (a1.into(), a2.into());
        for (name, a) in [("a1", &a1), ("a2", &a2)] {
            if a.is_zero() {
                return Err(ArithError::ZeroInput);
            }
            if squarefree_part_int(a)? != *a {
                return Err(ArithError::NotSquarefree(name));
            }
        }
        Self::from_squarefree(a1, a2)
    }

    /// Reduces both arguments to squarefree parts first; the flag reports
    /// whether anything changed.
    pub fn reducing(a1: impl Into<BigInt>, a2: impl Into<BigInt>) -> Result<(Self, bool), ArithError> {
        let (a1, a2) = (a1.into(), a2.into());
        if a1.is_zero() || a2.is_zero() {
            return Err(ArithError::ZeroInput);
        }
        let r1 = squarefree_part_int(&a1)?;
        let r2 = squarefree_part_int(&a2)?;
        let changed = r1 != a1 || r2 != a2;
        Ok((Self::from_squarefree(r1, r2)?, changed))
    }

    fn from_squarefree(a1: BigInt, a2: BigInt) -> Result<Self, ArithError> {
        if a1.is_one() {
            return Err(ArithError::DependentClasses("a1 is a square"));
        }
        if a2.is_one() {
            return Err(ArithError::DependentClasses("a2 is a square"));
        }
        let a3 = squarefree_part_int(&(&a1 * &a2))?;
        if a3.is_one() {
            return Err(ArithError::DependentClasses("a1*a2 is a square"));
        }
        Ok(Self { a1, a2, a3 })
    }

    pub fn a1(&self) -> &BigInt {
        &self.a1
    }

    pub fn a2(&self) -> &BigInt {
        &self.a2
    }

    pub fn a3(&self) -> &BigInt {
        &self.a3
    }

    /// `aᵢ` for `i ∈ {1, 2, 3}`.
    pub fn a(&self, i: usize) -> &BigInt {
        match i {
            1 => &self.a1,
            2 => &self.a2,
            3 => &self.a3,
            _ => panic!("index {i} out of range 1..=3"),
        }
    }
}

impl fmt::Display for BiquadParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(√{}, √{})", self.a1, self.a2)
    }
}

/// Nontrivial elements of `Gal(K/Q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sigma {
    S1,
    S2,
    S12,
}

/// Targets of the norm maps out of `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormTarget {
    K1,
    K2,
    K3,
    F,
}

/// `f₁ + f₂√a₁ + f₃√a₂ + f₄√(a₁a₂)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KElement {
    params: BiquadParams,
    coords: [Rational; 4],
}

impl KElement {
    pub fn new(params: &BiquadParams, coords: [Rational; 4]) -> Self {
        Self {
            params: params.clone(),
            coords,
        }
    }

    pub fn from_rational(params: &BiquadParams, q: Rational) -> Self {
        Self::new(params, [q, Rational::zero(), Rational::zero(), Rational::zero()])
    }

    pub fn params(&self) -> &BiquadParams {
        &self.params
    }

    pub fn coords(&self) -> &[Rational; 4] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coords[1..]
            .iter()
            .all(Zero::is_zero)
            .then_some(&self.coords[0])
    }

    fn check(&self, other: &KElement) -> Result<(), ArithError> {
        if self.params != other.params {
            return Err(ArithError::ParamsMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &KElement) -> Result<KElement, ArithError> {
        self.check(other)?;
        let c = std::array::from_fn(|i| &self.coords[i] + &other.coords[i]);
        Ok(KElement::new(&self.params, c))
    }

    pub fn mul(&self, other: &KElement) -> Result<KElement, ArithError> {
        self.check(other)?;
        let a1 = Rational::from_integer(self.params.a1.clone());
        let a2 = Rational::from_integer(self.params.a2.clone());
        let a12 = &a1 * &a2;
        let [x0, x1, x2, x3] = &self.coords;
        let [y0, y1, y2, y3] = &other.coords;
        let c0 = x0 * y0 + &a1 * (x1 * y1) + &a2 * (x2 * y2) + &a12 * (x3 * y3);
        let c1 = x0 * y1 + x1 * y0 + &a2 * (x2 * y3 + x3 * y2);
        let c2 = x0 * y2 + x2 * y0 + &a1 * (x1 * y3 + x3 * y1);
        let c3 = x0 * y3 + x3 * y0 + x1 * y2 + x2 * y1;
        Ok(KElement::new(&self.params, [c0, c1, c2, c3]))
    }

    pub fn galois_act(&self, s: Sigma) -> KElement {
        let negated: [usize; 2] = match s {
            Sigma::S1 => [1, 3],
            Sigma::S2 => [2, 3],
            Sigma::S12 => [1, 2],
        };
        let mut c = self.coords.clone();
        for i in negated {
            c[i] = -&c[i];
        }
        KElement::new(&self.params, c)
    }

    pub fn norm(&self, to: NormTarget) -> KElement {
        let times = |s: Sigma| self.mul(&self.galois_act(s)).unwrap();
        match to {
            NormTarget::K1 => times(Sigma::S2),
            NormTarget::K2 => times(Sigma::S1),
            NormTarget::K3 => times(Sigma::S12),
            NormTarget::F => times(Sigma::S1).mul(&times(Sigma::S1).galois_act(Sigma::S2)).unwrap(),
        }
    }

    /// `N_{Kᵢ/Q}` of an element of `Kᵢ`; `None` if `self ∉ Kᵢ`.
    pub fn norm_down(&self, from: NormTarget) -> Option<Rational> {
        let (s, kept) = match from {
            NormTarget::K1 => (Sigma::S1, 1),
            NormTarget::K2 => (Sigma::S2, 2),
            NormTarget::K3 => (Sigma::S1, 3),
            NormTarget::F => return self.as_rational().cloned(),
        };
        let inside = (1..4).all(|i| i == kept || self.coords[i].is_zero());
        if !inside {
            return None;
        }
        self.mul(&self.galois_act(s)).unwrap().as_rational().cloned()
    }
}

impl Add for &KElement {
    type Output = KElement;

    fn add(self, other: &KElement) -> KElement {
        self.try_add(other).expect("elements of the same field")
    }
}

impl fmt::Display for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [c0, c1, c2, c3] = &self.coords;
        write!(
            f,
            "{c0} + {c1}·√{a1} + {c2}·√{a2} + {c3}·√{a12}",
            a1 = self.params.a1,
            a2 = self.params.a2,
            a12 = &self.params.a1 * &self.params.a2
        )
    }
}

/// `((h₁, h₂), (h₃, h₄))` with `N_{K/K₃}(k) = (h₁² − a₁h₂²)(h₃² − a₂h₄²)`.
pub type NormFactors = ((Rational, Rational), (Rational, Rational));

/// Splits the `K₃`-norm of `k`, which must be rational, into a norm from
/// `K₁` times a norm from `K₂`.
pub fn factor_k3_norm(k: &KElement) -> Result<NormFactors, ArithError> {
    let [f1, f2, f3, f4] = k.coords();
    if f1 * f4 != f2 * f3 {
        return Err(ArithError::PreconditionFailed("f1·f4 ≠ f2·f3".into()));
    }
    let g = k
        .norm(NormTarget::K3)
        .as_rational()
        .cloned()
        .ok_or_else(|| ArithError::PreconditionFailed("norm to K3 is not rational".into()))?;
    if g.is_zero() {
        return Err(ArithError::DegenerateNorm);
    }
    let zero = Rational::zero();
    let one = Rational::one();
    let factors = if !f1.is_zero() {
        ((f1.clone(), f2.clone()), (one, f3 / f1))
    } else if f2.is_zero() {
        ((f3.clone(), f4.clone()), (zero, one))
    } else {
        ((zero, one), (f2.clone(), f4.clone()))
    };
    if norm_product(k.params(), &factors) != g {
        return Err(ArithError::InternalInconsistency(
            "norm factorization does not multiply back".into(),
        ));
    }
    Ok(factors)
}

/// `(h₁² − a₁h₂²)(h₃² − a₂h₄²)`.
pub fn norm_product(p: &BiquadParams, ((h1, h2), (h3, h4)): &NormFactors) -> Rational {
    let a1 = Rational::from_integer(p.a1.clone());
    let a2 = Rational::from_integer(p.a2.clone());
    (h1 * h1 - a1 * h2 * h2) * (h3 * h3 - a2 * h4 * h4)
}

/// Square-class representative of `aᵢ` as a rational.
pub fn class_of(p: &BiquadParams, i: usize) -> Rational {
    Rational::from_integer(p.a(i).clone())
}

#[cfg(test)]
mod tests {
    use super::super::rational::{rat, ratio};
    use super::*;

    fn p(a1: i64, a2: i64) -> BiquadParams {
        BiquadParams::new(a1, a2).unwrap()
    }

    fn k(params: &BiquadParams, c: [i64; 4]) -> KElement {
        KElement::new(params, c.map(rat))
    }

    #[test]
    fn params_validation() {
        assert_eq!(*p(5, 13).a3(), BigInt::from(65));
        assert_eq!(*p(6, 10).a3(), BigInt::from(15));
        assert_eq!(
            BiquadParams::new(1, 2),
            Err(ArithError::DependentClasses("a1 is a square"))
        );
        assert_eq!(
            BiquadParams::new(3, 3),
            Err(ArithError::DependentClasses("a1*a2 is a square"))
        );
        assert_eq!(BiquadParams::new(4, 2), Err(ArithError::NotSquarefree("a1")));
        let (r, changed) = BiquadParams::reducing(12, -20).unwrap();
        assert!(changed);
        assert_eq!((r.a1().clone(), r.a2().clone()), (BigInt::from(3), BigInt::from(-5)));
        assert_eq!(
            BiquadParams::reducing(4, 8).unwrap_err(),
            ArithError::DependentClasses("a1 is a square")
        );
    }

    #[test]
    fn multiplication_table() {
        let pr = p(7, -5);
        let r1 = k(&pr, [0, 1, 0, 0]);
        let r2 = k(&pr, [0, 0, 1, 0]);
        let r3 = k(&pr, [0, 0, 0, 1]);
        assert_eq!(r1.mul(&r1).unwrap(), k(&pr, [7, 0, 0, 0]));
        assert_eq!(r3.mul(&r3).unwrap(), k(&pr, [-35, 0, 0, 0]));
        assert_eq!(r1.mul(&r2).unwrap(), r3);
        assert_eq!(r1.mul(&r3).unwrap(), k(&pr, [0, 0, 7, 0]));
        assert_eq!(r2.mul(&r3).unwrap(), k(&pr, [0, -5, 0, 0]));
        let other = k(&p(2, 3), [1, 0, 0, 0]);
        assert_eq!(r1.mul(&other), Err(ArithError::ParamsMismatch));
    }

    #[test]
    fn norm_examples() {
        let pr = p(7, -5);
        let r1 = k(&pr, [0, 1, 0, 0]);
        assert_eq!(r1.norm(NormTarget::K2).as_rational(), Some(&rat(-7)));
        let c = KElement::from_rational(&pr, ratio(3, 2));
        assert_eq!(c.norm(NormTarget::F).as_rational(), Some(&ratio(81, 16)));
        let x = k(&pr, [1, 2, -3, 4]);
        let n3 = x.norm(NormTarget::K3);
        assert!(n3.coords()[1].is_zero() && n3.coords()[2].is_zero());
        assert!(x.norm(NormTarget::F).as_rational().is_some());
    }

    #[test]
    fn norm_tower() {
        let pr = p(7, -5);
        let x = k(&pr, [1, 2, -3, 4]);
        let full = x.norm(NormTarget::F).as_rational().cloned().unwrap();
        for t in [NormTarget::K1, NormTarget::K2, NormTarget::K3] {
            assert_eq!(x.norm(t).norm_down(t), Some(full.clone()));
        }
    }

    #[test]
    fn factorization_cases() {
        let pr = p(7, -5);
        let c = KElement::from_rational(&pr, rat(3));
        assert_eq!(
            factor_k3_norm(&c).unwrap(),
            ((rat(3), rat(0)), (rat(1), rat(0)))
        );
        let x = k(&pr, [0, 0, 2, 3]);
        assert_eq!(
            factor_k3_norm(&x).unwrap(),
            ((rat(2), rat(3)), (rat(0), rat(1)))
        );
        let y = k(&pr, [0, 2, 0, 3]);
        assert_eq!(
            factor_k3_norm(&y).unwrap(),
            ((rat(0), rat(1)), (rat(2), rat(3)))
        );
        let z = k(&pr, [2, 3, 4, 6]);
        assert!(factor_k3_norm(&z).is_ok());
        assert!(matches!(
            factor_k3_norm(&k(&pr, [1, 1, 1, 2])),
            Err(ArithError::PreconditionFailed(_))
        ));
        assert_eq!(
            factor_k3_norm(&k(&pr, [0, 0, 0, 0])),
            Err(ArithError::DegenerateNorm)
        );
    }
}
