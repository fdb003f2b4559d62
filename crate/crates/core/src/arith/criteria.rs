//! Embedding-problem criteria, the image of `T`, and the shape of `X`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::field::BiquadParams;
use super::hilbert::{hilbert_symbol, relevant_places, Place};
use super::rational::{is_square, Rational};
use super::witness::{norm_form_witness, q8_witness, two_squares_witness, Vec3};
use super::ArithError;
use crate::decomp::{x_shape, XShape};
use crate::f2la::{F2Vector, Subspace};

/// Seven embedding verdicts, indexed by type `i = 1, 2, 3` at `[i-1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EmbeddingReport {
    pub z4z2: [bool; 3],
    pub d4: [bool; 3],
    pub q8: bool,
}

/// T-vectors of the seven Galois groups, in the order
/// D4 types 1–3, Z/4⊕Z/2 types 1–3, Q8.
pub const T_VECTORS: [[u8; 3]; 7] = [
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [0, 1, 1],
    [1, 0, 1],
    [1, 1, 0],
    [1, 1, 1],
];

impl EmbeddingReport {
    pub fn verdicts(&self) -> [bool; 7] {
        [
            self.d4[0],
            self.d4[1],
            self.d4[2],
            self.z4z2[0],
            self.z4z2[1],
            self.z4z2[2],
            self.q8,
        ]
    }

    /// T-vectors realized by some fixed class.
    pub fn achieved(&self) -> Vec<F2Vector> {
        self.verdicts()
            .iter()
            .zip(T_VECTORS)
            .filter(|(v, _)| **v)
            .map(|(_, t)| F2Vector::from_u8s(&t))
            .collect()
    }
}

/// The image of `T` from the achieved T-vectors. Errors unless those
/// vectors together with zero already form a subspace.
pub fn im_t(report: &EmbeddingReport) -> Result<Subspace, ArithError> {
    let achieved = report.achieved();
    let span = Subspace::span(&achieved, 3).expect("length-3 vectors");
    let expected = (1usize << span.dim()) - 1;
    if achieved.len() != expected {
        return Err(ArithError::InconsistentImage(format!(
            "{} nonzero vectors achieved but their span has {expected}",
            achieved.len()
        )));
    }
    Ok(span)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XClassification {
    pub shape: XShape,
    pub im_t: Subspace,
    pub report: EmbeddingReport,
}

/// Explicit certificates for positive verdicts, where the search found one.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Witnesses {
    /// `aᵢ = x² + y²`.
    pub z4z2: [Option<(Rational, Rational)>; 3],
    /// `aᵢ = aⱼ y² − x²` for the first admissible `j`.
    pub d4: [Option<(Rational, Rational)>; 3],
    pub q8: Option<(Vec3, Vec3)>,
}

/// Decision procedures with a configurable witness bound. `fault_at_two`
/// flips every symbol at the prime 2 and exists to exercise failure paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classifier {
    pub witness_bound: u64,
    pub fault_at_two: bool,
}

impl Default for Classifier {
    fn default() -> Self {
        Self {
            witness_bound: 10_000,
            fault_at_two: false,
        }
    }
}

fn int(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

impl Classifier {
    pub fn symbol(&self, a: &Rational, b: &Rational, place: Place) -> Result<i8, ArithError> {
        let s = hilbert_symbol(a, b, place)?;
        Ok(if self.fault_at_two && place == Place::Prime(2) { -s } else { s })
    }

    /// `(a, b)_v = +1` at every place.
    pub fn symbol_trivial(&self, a: &Rational, b: &Rational) -> Result<bool, ArithError> {
        for v in relevant_places(&[a, b])? {
            if self.symbol(a, b, v)? != 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_sum_of_two_squares(&self, a: &Rational) -> Result<bool, ArithError> {
        if a.is_zero() {
            return Err(ArithError::ZeroInput);
        }
        Ok(a.is_positive() && self.symbol_trivial(&-Rational::one(), a)?)
    }

    /// Whether `b = a y² − x²` has a rational solution.
    pub fn norm_form_solvable(&self, a: &Rational, b: &Rational) -> Result<bool, ArithError> {
        if a.is_zero() || b.is_zero() {
            return Err(ArithError::ZeroInput);
        }
        if is_square(a) {
            return Err(ArithError::SquareParameter);
        }
        self.symbol_trivial(a, &-b)
    }

    /// Whether `⟨a₁, a₂, a₁a₂⟩ ≅ ⟨1, 1, 1⟩` over `Q`.
    pub fn q8_embeddable(&self, p: &BiquadParams) -> Result<bool, ArithError> {
        let (a1, a2) = (int(p.a1()), int(p.a2()));
        if !a1.is_positive() || !a2.is_positive() {
            return Ok(false);
        }
        let coeffs = [a1.clone(), a2.clone(), &a1 * &a2];
        for v in relevant_places(&[&a1, &a2])? {
            let mut hasse = 1;
            for i in 0..3 {
                for j in i + 1..3 {
                    hasse *= self.symbol(&coeffs[i], &coeffs[j], v)?;
                }
            }
            if hasse != 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The D4 type-`i` verdict computed from both admissible `j`.
    pub fn d4_both(&self, p: &BiquadParams, i: usize) -> Result<(bool, bool), ArithError> {
        let others: Vec<usize> = (1..=3).filter(|&j| j != i).collect();
        let ai = int(p.a(i));
        let first = self.norm_form_solvable(&int(p.a(others[0])), &ai)?;
        let second = self.norm_form_solvable(&int(p.a(others[1])), &ai)?;
        Ok((first, second))
    }

    pub fn embedding_report(&self, p: &BiquadParams) -> Result<EmbeddingReport, ArithError> {
        let mut r = EmbeddingReport::default();
        for i in 1..=3 {
            r.z4z2[i - 1] = self.is_sum_of_two_squares(&int(p.a(i)))?;
            let (first, second) = self.d4_both(p, i)?;
            if first != second {
                return Err(ArithError::InternalInconsistency(format!(
                    "D4 type {i} criteria disagree for {p}"
                )));
            }
            r.d4[i - 1] = first;
        }
        r.q8 = self.q8_embeddable(p)?;
        Ok(r)
    }

    pub fn classify_x(&self, p: &BiquadParams) -> Result<XClassification, ArithError> {
        let report = self.embedding_report(p)?;
        let im = im_t(&report)?;
        let shape = x_shape(&im, None).expect("ambient dimension 3");
        Ok(XClassification {
            shape,
            im_t: im,
            report,
        })
    }

    /// Searches a certificate for each positive verdict of `report`.
    pub fn witnesses(&self, p: &BiquadParams, report: &EmbeddingReport) -> Witnesses {
        let bound = self.witness_bound;
        let mut w = Witnesses::default();
        for i in 1..=3 {
            let ai = int(p.a(i));
            if report.z4z2[i - 1] {
                w.z4z2[i - 1] = two_squares_witness(&ai, bound);
            }
            if report.d4[i - 1] {
                let j = if i == 1 { 2 } else { 1 };
                w.d4[i - 1] = norm_form_witness(&int(p.a(j)), &ai, bound);
            }
        }
        if report.q8 {
            w.q8 = q8_witness(p.a1(), p.a2(), bound);
        }
        w
    }
}

#[cfg(test)]
mod tests {
    use super::super::rational::rat;
    use super::*;

    fn params(a1: i64, a2: i64) -> BiquadParams {
        BiquadParams::new(a1, a2).unwrap()
    }

    fn classify(a1: i64, a2: i64) -> XClassification {
        Classifier::default().classify_x(&params(a1, a2)).unwrap()
    }

    #[test]
    fn sums_of_two_squares() {
        let c = Classifier::default();
        assert!(c.is_sum_of_two_squares(&rat(5)).unwrap());
        assert!(!c.is_sum_of_two_squares(&rat(7)).unwrap());
        assert!(!c.is_sum_of_two_squares(&rat(-35)).unwrap());
        assert!(c.is_sum_of_two_squares(&rat(2)).unwrap());
    }

    #[test]
    fn norm_forms() {
        let c = Classifier::default();
        assert!(c.norm_form_solvable(&rat(7), &rat(-1)).unwrap());
        assert!(!c.norm_form_solvable(&rat(13), &rat(5)).unwrap());
        assert!(c.norm_form_solvable(&rat(2), &rat(-1)).unwrap());
        assert!(c.norm_form_solvable(&rat(2), &rat(-2)).unwrap());
        assert_eq!(
            c.norm_form_solvable(&rat(4), &rat(3)),
            Err(ArithError::SquareParameter)
        );
    }

    #[test]
    fn q8_examples() {
        let c = Classifier::default();
        assert!(c.q8_embeddable(&params(5, 41)).unwrap());
        assert!(!c.q8_embeddable(&params(7, -1)).unwrap());
        assert!(!c.q8_embeddable(&params(5, 13)).unwrap());
    }

    #[test]
    fn worked_reports() {
        let c = Classifier::default();
        assert_eq!(c.embedding_report(&params(7, -5)).unwrap(), EmbeddingReport::default());
        let r = c.embedding_report(&params(7, -1)).unwrap();
        assert_eq!(r.verdicts(), [false, true, false, false, false, false, false]);
        let r = c.embedding_report(&params(2, -1)).unwrap();
        assert_eq!(r.verdicts(), [false, true, true, true, false, false, false]);
    }

    #[test]
    fn worked_classifications() {
        let x = classify(7, -5);
        assert_eq!((x.shape, x.im_t.dim()), (XShape::Zero, 0));
        let x = classify(7, -1);
        assert_eq!(x.shape, XShape::F2);
        assert_eq!(x.im_t, Subspace::span(&[F2Vector::from_u8s(&[0, 1, 0])], 3).unwrap());
        let x = classify(2, -1);
        assert_eq!(x.shape, XShape::OmegaMinus1);
        assert!(x.im_t.basis().iter().all(|v| !v.get(0)));
        assert_eq!(classify(5, 13).shape, XShape::F2PlusF2);
        let x = classify(5, 41);
        assert_eq!((x.shape, x.im_t.dim()), (XShape::Undecided, 3));
    }

    #[test]
    fn im_t_rejects_non_subspace() {
        let r = EmbeddingReport {
            d4: [true, true, false],
            ..Default::default()
        };
        assert!(matches!(im_t(&r), Err(ArithError::InconsistentImage(_))));
    }

    #[test]
    fn fault_at_two_breaks_the_examples() {
        let faulty = Classifier {
            fault_at_two: true,
            ..Default::default()
        };
        let outcomes: Vec<_> = [(7, -5), (7, -1), (2, -1), (5, 13), (5, 41)]
            .iter()
            .map(|&(a, b)| faulty.classify_x(&params(a, b)).map(|x| x.shape))
            .collect();
        let honest: Vec<_> = [(7, -5), (7, -1), (2, -1), (5, 13), (5, 41)]
            .iter()
            .map(|&(a, b)| Ok(classify(a, b).shape))
            .collect();
        assert_ne!(outcomes, honest);
    }

    #[test]
    fn witnesses_for_positive_verdicts() {
        let c = Classifier::default();
        let p = params(5, 41);
        let r = c.embedding_report(&p).unwrap();
        let w = c.witnesses(&p, &r);
        assert!(w.q8.is_some());
        for i in 0..3 {
            assert_eq!(w.z4z2[i].is_some(), r.z4z2[i]);
            assert_eq!(w.d4[i].is_some(), r.d4[i]);
        }
    }
}
