//! Constructive splitting of a module along a designated fixed subspace Φ,
//! and the shape table for the summand `X` given the image of `T`.
//!
//! All diagrams are read with `A1 = 1+σ₁` and `A2 = 1+σ₂`. For `f ∈ Φ`:
//!
//! | layer | solvable system        |
//! |-------|------------------------|
//! | A     | `N γ = f`              |
//! | B     | `A1 γ = f`, `A2 γ = 0` |
//! | C     | `A2 γ = f`, `A1 γ = 0` |
//! | D     | `A1 γ = A2 γ = f`      |

use std::fmt;

use thiserror::Error;

use crate::f2la::{self, F2Matrix, F2Vector, LinAlgError, Subspace};
use crate::module::{canonical, KleinModule, Multiplicities, Operator, SummandType};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompError {
    #[error("designated subspace is not fixed by the group")]
    PhiNotFixed,
    #[error("not a complement: {0}")]
    NotComplement(String),
    #[error("vector is not in the requested layer")]
    NotInSubspace,
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("image of T has dimension 3; the norm-intersection flag is required")]
    MissingFlag,
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// The five subspaces of Φ cut out by the solvability diagrams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration {
    pub a: Subspace,
    pub v: Subspace,
    pub b: Subspace,
    pub c: Subspace,
    pub d: Subspace,
}

/// Which diagram a witness should solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Layer {
    A,
    B,
    C,
    D,
}

fn check_phi(m: &KleinModule, phi: &Subspace) -> Result<(), DecompError> {
    if phi.ambient_dim() != m.dim() || !phi.is_subspace_of(&m.fixed_submodule()) {
        return Err(DecompError::PhiNotFixed);
    }
    Ok(())
}

pub fn filtration(m: &KleinModule, phi: &Subspace) -> Result<Filtration, DecompError> {
    check_phi(m, phi)?;
    let a1 = m.operator(Operator::A1);
    let a2 = m.operator(Operator::A2);
    let s1_plus_s2 = m.s1().add(m.s2())?;
    let a = phi.intersect(&f2la::image(&m.operator(Operator::N)))?;
    let b = phi.intersect(&f2la::kernel(&a2).map(&a1)?)?;
    let c = phi.intersect(&f2la::kernel(&a1).map(&a2)?)?;
    let d = phi.intersect(&f2la::kernel(&s1_plus_s2).map(&a1)?)?;
    let v = b.intersect(&c)?;
    Ok(Filtration { a, v, b, c, d })
}

/// One solution of the W-diagram: `A2γ₁ = 0`, `A1γ₁ = A2γ₂ = b`,
/// `A1γ₂ = A2γ₃ = c`, `A1γ₃ = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WTriple {
    pub b: F2Vector,
    pub c: F2Vector,
    pub gammas: [F2Vector; 3],
}

/// The pairing `B_W → C_W` of W-solvable classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WPairing {
    pub b_w: Subspace,
    pub c_w: Subspace,
    /// Agrees with the pairing on `B_W`; zero on a fixed complement.
    pub phi_w: F2Matrix,
    /// One triple per canonical basis vector of `B_W`.
    pub triples: Vec<WTriple>,
}

impl WPairing {
    /// Image of `b` under the pairing, if `b ∈ B_W`.
    pub fn phi(&self, b: &F2Vector) -> Option<F2Vector> {
        self.b_w.contains(b).then(|| self.phi_w.apply(b))
    }

    /// A W-diagram solution for `b ∈ B_W`.
    pub fn witness(&self, b: &F2Vector) -> Option<[F2Vector; 3]> {
        let coords = self.b_w.coordinates(b)?;
        let n = b.len();
        let mut out = [F2Vector::zeros(n), F2Vector::zeros(n), F2Vector::zeros(n)];
        for i in coords.ones() {
            for (o, g) in out.iter_mut().zip(&self.triples[i].gammas) {
                o.add_assign(g);
            }
        }
        Some(out)
    }
}

/// Assembles a block matrix from `n × n` blocks (`None` is zero).
fn block_matrix(grid: &[&[Option<&F2Matrix>]], n: usize) -> F2Matrix {
    let cols = grid.first().map_or(0, |r| r.len()) * n;
    let mut out = F2Matrix::zeros(grid.len() * n, cols);
    for (bi, row) in grid.iter().enumerate() {
        for (bj, block) in row.iter().enumerate() {
            let Some(block) = block else { continue };
            for i in 0..n {
                for j in block.row(i).ones() {
                    out.set(bi * n + i, bj * n + j, true);
                }
            }
        }
    }
    out
}

struct WSystem {
    n: usize,
    /// Homogeneous constraints on `(γ₁|γ₂|γ₃)`.
    constraints: F2Matrix,
    /// `(γ₁|γ₂|γ₃) ↦ (A1γ₁ | A1γ₂) = (b | c)`.
    projection: F2Matrix,
}

impl WSystem {
    fn new(m: &KleinModule) -> WSystem {
        let n = m.dim();
        let a1 = m.operator(Operator::A1);
        let a2 = m.operator(Operator::A2);
        let constraints = block_matrix(
            &[
                &[Some(&a2), None, None],
                &[Some(&a1), Some(&a2), None],
                &[None, Some(&a1), Some(&a2)],
                &[None, None, Some(&a1)],
            ],
            n,
        );
        let projection = block_matrix(&[&[Some(&a1), None, None], &[None, Some(&a1), None]], n);
        WSystem {
            n,
            constraints,
            projection,
        }
    }

    fn achievable_pairs(&self) -> Result<Subspace, LinAlgError> {
        f2la::kernel(&self.constraints).map(&self.projection)
    }

    fn solve(&self, b: &F2Vector, c: &F2Vector) -> Result<Option<[F2Vector; 3]>, LinAlgError> {
        let system = self.constraints.vstack(&self.projection)?;
        let rhs = F2Vector::zeros(4 * self.n).concat(b).concat(c);
        Ok(f2la::solve(&system, &rhs)?.map(|g| {
            let n = self.n;
            [g.slice(0, n), g.slice(n, n), g.slice(2 * n, n)]
        }))
    }
}

fn check_complement(name: &str, comp: &Subspace, v: &Subspace, outer: &Subspace) -> Result<(), DecompError> {
    let ok = comp.ambient_dim() == outer.ambient_dim()
        && comp.is_subspace_of(outer)
        && comp.intersect(v)?.is_zero()
        && comp.dim() + v.dim() == outer.dim();
    if ok {
        Ok(())
    } else {
        Err(DecompError::NotComplement(format!("{name} is not a complement of V")))
    }
}

pub fn w_pairing(
    m: &KleinModule,
    phi: &Subspace,
    b_comp: &Subspace,
    c_comp: &Subspace,
) -> Result<WPairing, DecompError> {
    let filt = filtration(m, phi)?;
    check_complement("B_comp", b_comp, &filt.v, &filt.b)?;
    check_complement("C_comp", c_comp, &filt.v, &filt.c)?;
    let n = m.dim();
    let system = WSystem::new(m);
    let zero = F2Vector::zeros(n);
    let mut box_gens: Vec<F2Vector> = b_comp.basis().iter().map(|b| b.concat(&zero)).collect();
    box_gens.extend(c_comp.basis().iter().map(|c| zero.concat(c)));
    let product = Subspace::span(&box_gens, 2 * n)?;
    let pairs = system.achievable_pairs()?.intersect(&product)?;

    let firsts: Vec<F2Vector> = pairs.basis().iter().map(|p| p.slice(0, n)).collect();
    let seconds: Vec<F2Vector> = pairs.basis().iter().map(|p| p.slice(n, n)).collect();
    let b_w = Subspace::span(&firsts, n)?;
    let c_w = Subspace::span(&seconds, n)?;
    if b_w.dim() != pairs.dim() || c_w.dim() != pairs.dim() {
        return Err(DecompError::VerificationFailed("W pairing is not a bijection".into()));
    }

    let firsts_matrix = F2Matrix::from_columns(n, &firsts)?;
    let mut triples = Vec::with_capacity(b_w.dim());
    for b in b_w.basis() {
        let coeffs = f2la::solve(&firsts_matrix, b)?
            .ok_or_else(|| DecompError::VerificationFailed("B_W basis not reachable".into()))?;
        let mut c = F2Vector::zeros(n);
        for i in coeffs.ones() {
            c.add_assign(&seconds[i]);
        }
        let gammas = system
            .solve(b, &c)?
            .ok_or_else(|| DecompError::VerificationFailed("achievable pair has no witness".into()))?;
        triples.push(WTriple {
            b: b.clone(),
            c,
            gammas,
        });
    }

    // extend the pairing by zero on a complement so it is a matrix on all of F_2^n
    let rest = b_w.complement_in(&Subspace::full(n))?;
    let mut domain: Vec<F2Vector> = b_w.basis().to_vec();
    domain.extend(rest.basis().iter().cloned());
    let mut images: Vec<F2Vector> = triples.iter().map(|t| t.c.clone()).collect();
    images.resize(n, F2Vector::zeros(n));
    let phi_w = F2Matrix::from_columns(n, &images)?.mul(&F2Matrix::from_columns(n, &domain)?.inverse()?)?;

    Ok(WPairing {
        b_w,
        c_w,
        phi_w,
        triples,
    })
}

/// One indecomposable piece of Ĵ: the images of the canonical basis of
/// `kind` under an equivariant embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summand {
    pub kind: SummandType,
    pub basis: Vec<F2Vector>,
}

impl Summand {
    pub fn span(&self, n: usize) -> Subspace {
        Subspace::span(&self.basis, n).expect("summand vectors have ambient length")
    }
}

/// Output of [`build_hat_j`], grouped by layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HatJResult {
    pub ambient_dim: usize,
    pub filtration: Filtration,
    pub pairing: WPairing,
    /// Free summands, one per basis vector of A.
    pub y_a: Vec<Summand>,
    /// `Ω¹` summands on a complement of A in V.
    pub y_v: Vec<Summand>,
    /// `Ω²` summands on the W pairing.
    pub y_w: Vec<Summand>,
    pub y_b: Vec<Summand>,
    pub y_c: Vec<Summand>,
    pub y_d: Vec<Summand>,
    pub y_f: Vec<Summand>,
}

impl HatJResult {
    pub fn layers(&self) -> [(&'static str, &[Summand]); 7] {
        [
            ("Y_A", &self.y_a),
            ("Y_V", &self.y_v),
            ("Y_W", &self.y_w),
            ("Y_B", &self.y_b),
            ("Y_C", &self.y_c),
            ("Y_D", &self.y_d),
            ("Y_F", &self.y_f),
        ]
    }

    pub fn summands(&self) -> impl Iterator<Item = &Summand> {
        self.y_a
            .iter()
            .chain(&self.y_v)
            .chain(&self.y_w)
            .chain(&self.y_b)
            .chain(&self.y_c)
            .chain(&self.y_d)
            .chain(&self.y_f)
    }

    pub fn counts(&self) -> Multiplicities {
        Multiplicities::from_types(self.summands().map(|s| s.kind))
    }

    fn span_of<'a>(&self, parts: impl IntoIterator<Item = &'a Summand>) -> Subspace {
        let vs: Vec<F2Vector> = parts.into_iter().flat_map(|s| s.basis.iter().cloned()).collect();
        Subspace::span(&vs, self.ambient_dim).expect("summand vectors have ambient length")
    }

    /// Span of one layer.
    pub fn layer_span(&self, layer: &[Summand]) -> Subspace {
        self.span_of(layer)
    }

    /// The whole of Ĵ.
    pub fn span(&self) -> Subspace {
        self.span_of(self.summands())
    }
}

/// Solves `[op_1; op_2] γ = (r_1 | r_2)`.
fn solve_pair(m: &KleinModule, ops: [Operator; 2], rhs: [&F2Vector; 2]) -> Result<Option<F2Vector>, DecompError> {
    let a = m.operator(ops[0]).vstack(&m.operator(ops[1]))?;
    Ok(f2la::solve(&a, &rhs[0].concat(rhs[1]))?)
}

fn missing(what: &str) -> DecompError {
    DecompError::VerificationFailed(format!("no preimage for a basis vector of {what}"))
}

fn embed_check(m: &KleinModule, s: &Summand) -> Result<(), DecompError> {
    let canon = canonical(s.kind);
    let e = F2Matrix::from_columns(m.dim(), &s.basis)?;
    let equivariant = m.s1().mul(&e)? == e.mul(canon.s1())? && m.s2().mul(&e)? == e.mul(canon.s2())?;
    if !equivariant || e.rank() != s.basis.len() {
        return Err(DecompError::VerificationFailed(format!(
            "{} summand is not an equivariant embedding",
            s.kind
        )));
    }
    Ok(())
}

/// Builds Ĵ layer by layer from bases of the filtration pieces, then checks
/// that the sum is direct and that its fixed part is exactly Φ.
pub fn build_hat_j(m: &KleinModule, phi: &Subspace) -> Result<HatJResult, DecompError> {
    let n = m.dim();
    let filt = filtration(m, phi)?;
    let b_comp = filt.v.complement_in(&filt.b)?;
    let c_comp = filt.v.complement_in(&filt.c)?;
    let pairing = w_pairing(m, phi, &b_comp, &c_comp)?;
    let zero = F2Vector::zeros(n);
    let s1 = m.s1();
    let s2 = m.s2();

    let mut y_a = Vec::new();
    for f in filt.a.basis() {
        let g = f2la::solve(&m.operator(Operator::N), f)?.ok_or_else(|| missing("A"))?;
        let g1 = s1.apply(&g);
        let g2 = s2.apply(&g);
        let g12 = s1.apply(&g2);
        y_a.push(Summand {
            kind: SummandType::Free,
            basis: vec![g, g1, g2, g12],
        });
    }

    let mut y_v = Vec::new();
    for f in filt.a.complement_in(&filt.v)?.basis() {
        let g1 = solve_pair(m, [Operator::A1, Operator::A2], [f, &zero])?.ok_or_else(|| missing("V"))?;
        let g2 = solve_pair(m, [Operator::A2, Operator::A1], [f, &zero])?.ok_or_else(|| missing("V"))?;
        y_v.push(Summand {
            kind: SummandType::OmegaPlus(1),
            basis: vec![g1, g2, f.clone()],
        });
    }

    let y_w = pairing
        .triples
        .iter()
        .map(|t| {
            let [g1, g2, g3] = t.gammas.clone();
            Summand {
                kind: SummandType::OmegaPlus(2),
                basis: vec![g1, g2, g3, t.b.clone(), t.c.clone()],
            }
        })
        .collect();

    let cyclic = |kind: SummandType, space: &Subspace, ops: [Operator; 2], same: bool| {
        space
            .basis()
            .iter()
            .map(|f| {
                let second = if same { f } else { &zero };
                let g = solve_pair(m, ops, [f, second])?.ok_or_else(|| missing(&kind.name()))?;
                let g_swapped = g.add(f);
                Ok(Summand {
                    kind,
                    basis: vec![g, g_swapped],
                })
            })
            .collect::<Result<Vec<_>, DecompError>>()
    };
    let y_b = cyclic(
        SummandType::CycG1,
        &pairing.b_w.complement_in(&b_comp)?,
        [Operator::A1, Operator::A2],
        false,
    )?;
    let y_c = cyclic(
        SummandType::CycG2,
        &pairing.c_w.complement_in(&c_comp)?,
        [Operator::A2, Operator::A1],
        false,
    )?;
    let b_plus_c = filt.b.add(&filt.c)?;
    let y_d = cyclic(
        SummandType::CycG3,
        &b_plus_c.intersect(&filt.d)?.complement_in(&filt.d)?,
        [Operator::A1, Operator::A2],
        true,
    )?;
    let y_f = b_plus_c
        .add(&filt.d)?
        .complement_in(phi)?
        .basis()
        .iter()
        .map(|f| Summand {
            kind: SummandType::Triv,
            basis: vec![f.clone()],
        })
        .collect();

    let result = HatJResult {
        ambient_dim: n,
        filtration: filt,
        pairing,
        y_a,
        y_v,
        y_w,
        y_b,
        y_c,
        y_d,
        y_f,
    };
    for s in result.summands() {
        embed_check(m, s)?;
    }
    let total = result.span();
    let expected: usize = result.summands().map(|s| s.kind.dim()).sum();
    if total.dim() != expected {
        return Err(DecompError::VerificationFailed(format!(
            "sum of summands is not direct ({} < {expected})",
            total.dim()
        )));
    }
    if total.intersect(&m.fixed_submodule())? != *phi {
        return Err(DecompError::VerificationFailed("fixed part of the sum differs from Φ".into()));
    }
    Ok(result)
}

/// `(fixed value, contribution to γ)` pairs for one layer's diagram.
fn layer_generators(m: &KleinModule, result: &HatJResult, which: Layer) -> Vec<(F2Vector, F2Vector)> {
    let a1 = m.operator(Operator::A1);
    let a2 = m.operator(Operator::A2);
    let n_op = m.operator(Operator::N);
    let mut gens = Vec::new();
    for s in &result.y_a {
        let g = &s.basis[0];
        let x = match which {
            Layer::A => g.clone(),
            Layer::B => a2.apply(g),
            Layer::C => a1.apply(g),
            Layer::D => a1.apply(g).add(&a2.apply(g)),
        };
        gens.push((n_op.apply(g), x));
    }
    if which == Layer::A {
        return gens;
    }
    for s in &result.y_v {
        let x = match which {
            Layer::B => s.basis[0].clone(),
            Layer::C => s.basis[1].clone(),
            _ => s.basis[0].add(&s.basis[1]),
        };
        gens.push((s.basis[2].clone(), x));
    }
    for s in &result.y_w {
        let (f, x) = match which {
            Layer::B => (s.basis[3].clone(), s.basis[0].clone()),
            Layer::C => (s.basis[4].clone(), s.basis[2].clone()),
            _ => (s.basis[3].add(&s.basis[4]), s.basis[0].add(&s.basis[1]).add(&s.basis[2])),
        };
        gens.push((f, x));
    }
    let own = match which {
        Layer::B => &result.y_b,
        Layer::C => &result.y_c,
        _ => &result.y_d,
    };
    for s in own {
        gens.push((s.basis[0].add(&s.basis[1]), s.basis[0].clone()));
    }
    gens
}

/// Solves the diagram for `which` at `f`, using only vectors of Ĵ.
pub fn solvable_in_hat_j(
    m: &KleinModule,
    result: &HatJResult,
    which: Layer,
    f: &F2Vector,
) -> Result<F2Vector, DecompError> {
    let n = m.dim();
    if f.len() != n {
        return Err(LinAlgError::LengthMismatch {
            expected: n,
            found: f.len(),
        }
        .into());
    }
    let gens = layer_generators(m, result, which);
    let values: Vec<F2Vector> = gens.iter().map(|(v, _)| v.clone()).collect();
    let coeffs = f2la::solve(&F2Matrix::from_columns(n, &values)?, f)?.ok_or(DecompError::NotInSubspace)?;
    let mut gamma = F2Vector::zeros(n);
    for i in coeffs.ones() {
        gamma.add_assign(&gens[i].1);
    }

    let a1g = m.operator(Operator::A1).apply(&gamma);
    let a2g = m.operator(Operator::A2).apply(&gamma);
    let zero = F2Vector::zeros(n);
    let ok = match which {
        Layer::A => m.operator(Operator::N).apply(&gamma) == *f,
        Layer::B => a1g == *f && a2g == zero,
        Layer::C => a2g == *f && a1g == zero,
        Layer::D => a1g == *f && a2g == *f,
    };
    if !ok || !result.span().contains(&gamma) {
        return Err(DecompError::VerificationFailed("witness does not solve the diagram".into()));
    }
    Ok(gamma)
}

/// Isomorphism type of the summand `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum XShape {
    Zero,
    F2,
    F2PlusF2,
    OmegaMinus1,
    OmegaMinus2,
    OmegaMinus1Squared,
    /// Full image of `T`; either `Ω⁻²` or `Ω⁻¹ ⊕ Ω⁻¹`.
    Undecided,
}

impl XShape {
    pub fn is_decided(self) -> bool {
        self != XShape::Undecided
    }

    pub fn decided(self) -> Result<XShape, DecompError> {
        if self.is_decided() {
            Ok(self)
        } else {
            Err(DecompError::MissingFlag)
        }
    }

    /// Summands of `X`, or `None` while undecided.
    pub fn multiplicities(self) -> Option<Multiplicities> {
        use SummandType::*;
        let types: &[SummandType] = match self {
            XShape::Zero => &[],
            XShape::F2 => &[Triv],
            XShape::F2PlusF2 => &[Triv, Triv],
            XShape::OmegaMinus1 => &[OmegaMinus(1)],
            XShape::OmegaMinus2 => &[OmegaMinus(2)],
            XShape::OmegaMinus1Squared => &[OmegaMinus(1), OmegaMinus(1)],
            XShape::Undecided => return None,
        };
        Some(Multiplicities::from_types(types.iter().copied()))
    }
}

impl fmt::Display for XShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            XShape::Zero => "Zero",
            XShape::F2 => "F2",
            XShape::F2PlusF2 => "F2 ⊕ F2",
            XShape::OmegaMinus1 => "Omega-1",
            XShape::OmegaMinus2 => "Omega-2",
            XShape::OmegaMinus1Squared => "Omega-1 ⊕ Omega-1",
            XShape::Undecided => "Undecided(Omega-2 | Omega-1 ⊕ Omega-1)",
        })
    }
}

/// Whether a plane in `F_2³` is one of `{tᵢ = 0}`.
pub fn is_coordinate_plane(plane: &Subspace) -> bool {
    plane.ambient_dim() == 3
        && plane.dim() == 2
        && (0..3).any(|i| plane.basis().iter().all(|v| !v.get(i)))
}

/// Shape of `X` from `im T ⊆ F_2³`. `norm_flag` says whether the norm
/// intersection is nontrivial and only matters when `im T` is everything.
pub fn x_shape(im_t: &Subspace, norm_flag: Option<bool>) -> Result<XShape, DecompError> {
    if im_t.ambient_dim() != 3 {
        return Err(LinAlgError::DimensionMismatch(format!(
            "image of T lives in F_2^3, got ambient dimension {}",
            im_t.ambient_dim()
        ))
        .into());
    }
    Ok(match im_t.dim() {
        0 => XShape::Zero,
        1 => XShape::F2,
        2 if is_coordinate_plane(im_t) => XShape::OmegaMinus1,
        2 => XShape::F2PlusF2,
        _ => match norm_flag {
            Some(true) => XShape::OmegaMinus2,
            Some(false) => XShape::OmegaMinus1Squared,
            None => XShape::Undecided,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{direct_sum, multiplicities};
    use SummandType::*;

    fn sum(types: &[SummandType]) -> KleinModule {
        direct_sum(&types.iter().map(|t| canonical(*t)).collect::<Vec<_>>())
    }

    fn fixed(m: &KleinModule) -> Subspace {
        m.fixed_submodule()
    }

    #[test]
    fn filtration_on_free_module() {
        let m = canonical(Free);
        let phi = fixed(&m);
        let f = filtration(&m, &phi).unwrap();
        for s in [&f.a, &f.v, &f.b, &f.c, &f.d] {
            assert_eq!(*s, phi);
        }
    }

    #[test]
    fn filtration_on_omega_plus_one() {
        let m = canonical(OmegaPlus(1));
        let phi = fixed(&m);
        assert_eq!(phi.dim(), 1);
        let f = filtration(&m, &phi).unwrap();
        assert!(f.a.is_zero());
        for s in [&f.v, &f.b, &f.c, &f.d] {
            assert_eq!(*s, phi);
        }
    }

    #[test]
    fn filtration_on_trivial_module() {
        let m = canonical(Triv);
        let f = filtration(&m, &Subspace::full(1)).unwrap();
        for s in [&f.a, &f.v, &f.b, &f.c, &f.d] {
            assert!(s.is_zero());
        }
    }

    #[test]
    fn filtration_rejects_unfixed_phi() {
        let m = canonical(CycG1);
        assert_eq!(
            filtration(&m, &Subspace::full(2)).unwrap_err(),
            DecompError::PhiNotFixed
        );
    }

    #[test]
    fn w_pairing_on_omega_plus_two() {
        let m = canonical(OmegaPlus(2));
        let phi = fixed(&m);
        assert_eq!(phi.dim(), 2);
        let b = F2Vector::unit(5, 3);
        let c = F2Vector::unit(5, 4);
        let bc = Subspace::span(std::slice::from_ref(&b), 5).unwrap();
        let cc = Subspace::span(std::slice::from_ref(&c), 5).unwrap();
        let w = w_pairing(&m, &phi, &bc, &cc).unwrap();
        assert_eq!(w.b_w, bc);
        assert_eq!(w.c_w, cc);
        assert_eq!(w.phi(&b), Some(c));
        let [g1, g2, g3] = w.witness(&b).unwrap();
        let a1 = m.operator(Operator::A1);
        let a2 = m.operator(Operator::A2);
        assert!(a2.apply(&g1).is_zero() && a1.apply(&g3).is_zero());
        assert_eq!(a1.apply(&g1), a2.apply(&g2));
        assert_eq!(a1.apply(&g2), a2.apply(&g3));
    }

    #[test]
    fn w_pairing_trivial_cases() {
        let m = sum(&[OmegaPlus(1), OmegaPlus(1)]);
        let phi = fixed(&m);
        let f = filtration(&m, &phi).unwrap();
        assert_eq!(f.b, f.v);
        let zero = Subspace::zero(6);
        let w = w_pairing(&m, &phi, &zero, &zero).unwrap();
        assert!(w.b_w.is_zero() && w.c_w.is_zero());

        let m = KleinModule::zero();
        let z = Subspace::zero(0);
        let w = w_pairing(&m, &z, &z, &z).unwrap();
        assert!(w.b_w.is_zero() && w.triples.is_empty());
    }

    #[test]
    fn w_pairing_rejects_bad_complements() {
        let m = canonical(OmegaPlus(2));
        let phi = fixed(&m);
        let zero = Subspace::zero(5);
        let cc = Subspace::span(&[F2Vector::unit(5, 4)], 5).unwrap();
        assert!(matches!(
            w_pairing(&m, &phi, &zero, &cc),
            Err(DecompError::NotComplement(_))
        ));
    }

    #[test]
    fn hat_j_examples() {
        let m = sum(&[Free, Triv]);
        let r = build_hat_j(&m, &fixed(&m)).unwrap();
        assert_eq!(r.counts(), Multiplicities::from_types([Free, Triv]));

        let m = canonical(OmegaPlus(2));
        let r = build_hat_j(&m, &fixed(&m)).unwrap();
        assert_eq!(r.counts(), Multiplicities::from_types([OmegaPlus(2)]));

        let m = sum(&[OmegaMinus(1)]);
        let r = build_hat_j(&m, &fixed(&m)).unwrap();
        assert_eq!(r.counts(), Multiplicities::from_types([Triv, Triv]));
    }

    #[test]
    fn hat_j_matches_multiplicities_on_mixed_module() {
        let m = sum(&[CycG1, CycG2, CycG3, OmegaPlus(1), Free, OmegaPlus(2)]);
        let r = build_hat_j(&m, &fixed(&m)).unwrap();
        let restricted = m.restrict(&r.span()).unwrap();
        assert_eq!(multiplicities(&restricted).unwrap(), r.counts());
        assert_eq!(r.counts(), multiplicities(&m).unwrap());
    }

    #[test]
    fn layer_fixed_parts_follow_the_filtration() {
        let m = sum(&[Free, OmegaPlus(1), OmegaPlus(2), CycG1, CycG3, Triv]);
        let phi = fixed(&m);
        let r = build_hat_j(&m, &phi).unwrap();
        let g = m.fixed_submodule();
        let f = &r.filtration;
        let fixed_of = |layers: &[&[Summand]]| {
            let all: Vec<Summand> = layers.iter().flat_map(|l| l.iter().cloned()).collect();
            r.layer_span(&all).intersect(&g).unwrap()
        };
        assert_eq!(fixed_of(&[&r.y_a]), f.a);
        assert_eq!(fixed_of(&[&r.y_a, &r.y_v]), f.v);
        let bw_cw = r.pairing.b_w.add(&r.pairing.c_w).unwrap();
        assert_eq!(fixed_of(&[&r.y_a, &r.y_v, &r.y_w]), f.v.add(&bw_cw).unwrap());
        assert_eq!(
            fixed_of(&[&r.y_a, &r.y_v, &r.y_w, &r.y_b, &r.y_c, &r.y_d, &r.y_f]),
            phi
        );
    }

    #[test]
    fn witnesses_for_every_layer() {
        let m = sum(&[Free, OmegaPlus(1), OmegaPlus(2), CycG1, CycG2, CycG3, Triv]);
        let phi = fixed(&m);
        let r = build_hat_j(&m, &phi).unwrap();
        let f = r.filtration.clone();
        for (layer, space) in [(Layer::A, &f.a), (Layer::B, &f.b), (Layer::C, &f.c), (Layer::D, &f.d)] {
            for v in space.basis() {
                solvable_in_hat_j(&m, &r, layer, v).unwrap();
            }
            let zero = F2Vector::zeros(m.dim());
            assert!(solvable_in_hat_j(&m, &r, layer, &zero).unwrap().is_zero());
        }
        // a trivial-summand vector solves nothing
        let t = r.y_f[0].basis[0].clone();
        for layer in [Layer::A, Layer::B, Layer::C, Layer::D] {
            assert_eq!(solvable_in_hat_j(&m, &r, layer, &t), Err(DecompError::NotInSubspace));
        }
    }

    #[test]
    fn d_layer_witness_spans_pairing() {
        let m = canonical(OmegaPlus(2));
        let r = build_hat_j(&m, &fixed(&m)).unwrap();
        let t = &r.pairing.triples[0];
        let f = t.b.add(&t.c);
        assert!(r.filtration.d.contains(&f));
        let g = solvable_in_hat_j(&m, &r, Layer::D, &f).unwrap();
        assert_eq!(m.operator(Operator::A1).apply(&g), f);
    }

    #[test]
    fn x_shape_table() {
        let v = |s: &str| s.parse::<F2Vector>().unwrap();
        let span = |vs: &[&str]| Subspace::span(&vs.iter().map(|s| v(s)).collect::<Vec<_>>(), 3).unwrap();
        assert_eq!(x_shape(&Subspace::zero(3), None).unwrap(), XShape::Zero);
        assert_eq!(x_shape(&span(&["011", "001"]), None).unwrap(), XShape::OmegaMinus1);
        assert_eq!(x_shape(&span(&["110", "011"]), None).unwrap(), XShape::F2PlusF2);
        assert_eq!(x_shape(&Subspace::full(3), None).unwrap(), XShape::Undecided);
        assert_eq!(x_shape(&Subspace::full(3), Some(true)).unwrap(), XShape::OmegaMinus2);
        assert_eq!(
            x_shape(&Subspace::full(3), Some(false)).unwrap(),
            XShape::OmegaMinus1Squared
        );
        assert_eq!(XShape::Undecided.decided(), Err(DecompError::MissingFlag));
        assert!(x_shape(&Subspace::full(2), None).is_err());
    }

    #[test]
    fn x_shape_is_total_on_all_subspaces() {
        let mut seen = std::collections::HashSet::new();
        for mask in 0u32..1 << 8 {
            let vs: Vec<F2Vector> = (0..8u32)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| F2Vector::from_bits((0..3).map(|b| i >> b & 1 == 1)))
                .collect();
            let s = Subspace::span(&vs, 3).unwrap();
            for flag in [Some(true), Some(false)] {
                assert!(x_shape(&s, flag).unwrap().is_decided());
            }
            seen.insert(s);
        }
        assert_eq!(seen.len(), 16);
        let planes = seen.iter().filter(|s| s.dim() == 2).count();
        let coordinate = seen.iter().filter(|s| is_coordinate_plane(s)).count();
        assert_eq!((planes, coordinate), (7, 3));
    }
}
