//! Finite-dimensional modules over `F_2[G]`, `G` the Klein four-group.
//!
//! A module is given by the matrices of the two generators `σ₁`, `σ₂`.
//! Elements are written additively as coordinate vectors.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::f2la::{self, F2Matrix, F2Vector, LinAlgError, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("invalid module: {0}")]
    Invalid(Violation),
    #[error("module is not a direct sum of the supported summand types")]
    NotInFamily { functionals: Vec<i64> },
    #[error("functional matrix has rank {rank}, expected {expected}")]
    GramRankDeficient { rank: usize, expected: usize },
    #[error("subspace is not stable under the group action")]
    NotSubmodule,
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// Which module identity fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotSquare { which: &'static str, rows: usize, cols: usize },
    SizeMismatch { s1: usize, s2: usize },
    S1NotInvolution,
    S2NotInvolution,
    NotCommuting,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotSquare { which, rows, cols } => {
                write!(f, "{which} is {rows}x{cols}, not square")
            }
            Violation::SizeMismatch { s1, s2 } => {
                write!(f, "s1 has size {s1} but s2 has size {s2}")
            }
            Violation::S1NotInvolution => f.write_str("s1² ≠ I"),
            Violation::S2NotInvolution => f.write_str("s2² ≠ I"),
            Violation::NotCommuting => f.write_str("s1s2 ≠ s2s1"),
        }
    }
}

/// Checks the module identities for a candidate pair of actions.
pub fn validate(s1: &F2Matrix, s2: &F2Matrix) -> Result<(), Violation> {
    for (which, m) in [("s1", s1), ("s2", s2)] {
        if m.rows() != m.cols() {
            return Err(Violation::NotSquare {
                which,
                rows: m.rows(),
                cols: m.cols(),
            });
        }
    }
    if s1.rows() != s2.rows() {
        return Err(Violation::SizeMismatch {
            s1: s1.rows(),
            s2: s2.rows(),
        });
    }
    if !s1.mul(s1).unwrap().is_identity() {
        return Err(Violation::S1NotInvolution);
    }
    if !s2.mul(s2).unwrap().is_identity() {
        return Err(Violation::S2NotInvolution);
    }
    if s1.mul(s2).unwrap() != s2.mul(s1).unwrap() {
        return Err(Violation::NotCommuting);
    }
    Ok(())
}

/// The operators `1+σ₁`, `1+σ₂`, `1+σ₁σ₂` and the norm `(1+σ₁)(1+σ₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    A1,
    A2,
    A3,
    N,
}

/// Isomorphism types of indecomposable summands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SummandType {
    /// The trivial module `F_2`.
    Triv,
    /// `F_2[Ḡ₁]`: σ₁ swaps, σ₂ trivial.
    CycG1,
    /// `F_2[Ḡ₂]`: σ₂ swaps, σ₁ trivial.
    CycG2,
    /// `F_2[Ḡ₃]`: σ₁ and σ₂ act by the same swap.
    CycG3,
    /// The regular module `F_2[G]`.
    Free,
    /// `Ωⁿ`, dimension `2n+1`, `n` fixed vectors.
    OmegaPlus(u32),
    /// `Ω⁻ⁿ`, dimension `2n+1`, `n+1` fixed vectors.
    OmegaMinus(u32),
}

impl SummandType {
    pub fn dim(self) -> usize {
        match self {
            SummandType::Triv => 1,
            SummandType::CycG1 | SummandType::CycG2 | SummandType::CycG3 => 2,
            SummandType::Free => 4,
            SummandType::OmegaPlus(n) | SummandType::OmegaMinus(n) => 2 * n as usize + 1,
        }
    }

    pub fn name(self) -> String {
        match self {
            SummandType::Triv => "F2".into(),
            SummandType::CycG1 => "C_G1".into(),
            SummandType::CycG2 => "C_G2".into(),
            SummandType::CycG3 => "C_G3".into(),
            SummandType::Free => "Free".into(),
            SummandType::OmegaPlus(n) => format!("Omega+{n}"),
            SummandType::OmegaMinus(n) => format!("Omega-{n}"),
        }
    }

    /// Type of the dual (transposed) module.
    pub fn dual(self) -> SummandType {
        match self {
            SummandType::OmegaPlus(n) => SummandType::OmegaMinus(n),
            SummandType::OmegaMinus(n) => SummandType::OmegaPlus(n),
            other => other,
        }
    }

    pub fn canonical(self) -> KleinModule {
        canonical(self)
    }
}

impl fmt::Display for SummandType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for SummandType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let omega = |rest: &str| -> Result<u32, String> {
            match rest.parse::<u32>() {
                Ok(n) if n >= 1 => Ok(n),
                _ => Err(format!("bad Omega index in {s:?}")),
            }
        };
        Ok(match s {
            "F2" => SummandType::Triv,
            "C_G1" => SummandType::CycG1,
            "C_G2" => SummandType::CycG2,
            "C_G3" => SummandType::CycG3,
            "Free" => SummandType::Free,
            _ => {
                if let Some(rest) = s.strip_prefix("Omega+") {
                    SummandType::OmegaPlus(omega(rest)?)
                } else if let Some(rest) = s.strip_prefix("Omega-") {
                    SummandType::OmegaMinus(omega(rest)?)
                } else {
                    return Err(format!("unknown summand type {s:?}"));
                }
            }
        })
    }
}

/// Counts of summand types.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Multiplicities(BTreeMap<SummandType, usize>);

impl Multiplicities {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_types<I: IntoIterator<Item = SummandType>>(types: I) -> Self {
        let mut m = Self::new();
        for t in types {
            m.add(t, 1);
        }
        m
    }

    pub fn add(&mut self, t: SummandType, count: usize) {
        if count > 0 {
            *self.0.entry(t).or_insert(0) += count;
        }
    }

    pub fn get(&self, t: SummandType) -> usize {
        self.0.get(&t).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.0.iter().map(|(t, c)| t.dim() * c).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (SummandType, usize)> + '_ {
        self.0.iter().map(|(t, c)| (*t, *c))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dual(&self) -> Multiplicities {
        let mut m = Multiplicities::new();
        for (t, c) in self.iter() {
            m.add(t.dual(), c);
        }
        m
    }

    /// Builds the direct sum of canonical modules in type order.
    pub fn module(&self) -> KleinModule {
        let parts: Vec<KleinModule> = self
            .iter()
            .flat_map(|(t, c)| std::iter::repeat_n(t, c))
            .map(canonical)
            .collect();
        direct_sum(&parts)
    }
}

impl fmt::Display for Multiplicities {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (t, c)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}:{c}")?;
        }
        f.write_str("}")
    }
}

/// A validated `F_2[G]`-module.
#[derive(Clone, PartialEq, Eq)]
pub struct KleinModule {
    s1: F2Matrix,
    s2: F2Matrix,
}

impl fmt::Debug for KleinModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KleinModule(dim={})", self.dim())
    }
}

impl KleinModule {
    /// Validates the actions and wraps them.
    pub fn new(s1: F2Matrix, s2: F2Matrix) -> Result<Self, ModuleError> {
        validate(&s1, &s2).map_err(ModuleError::Invalid)?;
        Ok(Self { s1, s2 })
    }

    pub fn zero() -> Self {
        Self {
            s1: F2Matrix::zeros(0, 0),
            s2: F2Matrix::zeros(0, 0),
        }
    }

    pub fn dim(&self) -> usize {
        self.s1.rows()
    }

    pub fn s1(&self) -> &F2Matrix {
        &self.s1
    }

    pub fn s2(&self) -> &F2Matrix {
        &self.s2
    }

    pub fn operator(&self, which: Operator) -> F2Matrix {
        let id = F2Matrix::identity(self.dim());
        match which {
            Operator::A1 => self.s1.add(&id).unwrap(),
            Operator::A2 => self.s2.add(&id).unwrap(),
            Operator::A3 => self.s1.mul(&self.s2).unwrap().add(&id).unwrap(),
            Operator::N => self
                .operator(Operator::A1)
                .mul(&self.operator(Operator::A2))
                .unwrap(),
        }
    }

    /// `M^G = ker(1+σ₁) ∩ ker(1+σ₂)`.
    pub fn fixed_submodule(&self) -> Subspace {
        let stacked = self
            .operator(Operator::A1)
            .vstack(&self.operator(Operator::A2))
            .unwrap();
        f2la::kernel(&stacked)
    }

    /// Smallest submodule containing `gens`.
    pub fn submodule_closure(&self, gens: &[F2Vector]) -> Result<Subspace, ModuleError> {
        let mut span = Subspace::span(gens, self.dim())?;
        loop {
            let mut vs: Vec<F2Vector> = span.basis().to_vec();
            for b in span.basis() {
                vs.push(self.s1.apply(b));
                vs.push(self.s2.apply(b));
            }
            let next = Subspace::span(&vs, self.dim())?;
            if next.dim() == span.dim() {
                return Ok(span);
            }
            span = next;
        }
    }

    pub fn is_submodule(&self, s: &Subspace) -> bool {
        s.ambient_dim() == self.dim()
            && s
                .basis()
                .iter()
                .all(|b| s.contains(&self.s1.apply(b)) && s.contains(&self.s2.apply(b)))
    }

    /// The module structure on a stable subspace, in the coordinates of
    /// its canonical basis.
    pub fn restrict(&self, s: &Subspace) -> Result<KleinModule, ModuleError> {
        if !self.is_submodule(s) {
            return Err(ModuleError::NotSubmodule);
        }
        let act = |m: &F2Matrix| -> F2Matrix {
            let cols: Vec<F2Vector> = s
                .basis()
                .iter()
                .map(|b| s.coordinates(&m.apply(b)).unwrap())
                .collect();
            F2Matrix::from_columns(s.dim(), &cols).unwrap()
        };
        KleinModule::new(act(&self.s1), act(&self.s2))
    }

    /// The isomorphic module `P M P⁻¹`.
    pub fn conjugate(&self, p: &F2Matrix) -> Result<KleinModule, ModuleError> {
        let inv = p.inverse()?;
        let c = |m: &F2Matrix| p.mul(m).unwrap().mul(&inv).unwrap();
        KleinModule::new(c(&self.s1), c(&self.s2))
    }

    /// The dual module, acting by transposed matrices.
    pub fn transpose(&self) -> KleinModule {
        KleinModule {
            s1: self.s1.transpose(),
            s2: self.s2.transpose(),
        }
    }

    /// Serializes in the line-oriented text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("dim {}\n", self.dim());
        for (label, m) in [("sigma1", &self.s1), ("sigma2", &self.s2)] {
            out.push_str(label);
            out.push('\n');
            for r in m.row_vectors() {
                out.push_str(&r.to_string());
                out.push('\n');
            }
        }
        out
    }

    /// Parses the text format without validating the module identities.
    pub fn parse_actions(text: &str) -> Result<(F2Matrix, F2Matrix), ModuleError> {
        let mut lines: Vec<&str> = text.split('\n').collect();
        if lines.last() == Some(&"") {
            lines.pop();
        }
        let err = |line: usize, message: String| ModuleError::Parse { line, message };
        let header = lines.first().ok_or_else(|| err(1, "empty input".into()))?;
        let n: usize = header
            .strip_prefix("dim ")
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| err(1, format!("expected `dim <n>`, found {header:?}")))?;
        if lines.len() != 2 * n + 3 {
            return Err(err(
                lines.len().min(2 * n + 3),
                format!("expected {} lines for dim {n}, found {}", 2 * n + 3, lines.len()),
            ));
        }
        let read = |label: &str, start: usize| -> Result<F2Matrix, ModuleError> {
            if lines[start] != label {
                return Err(err(start + 1, format!("expected `{label}`")));
            }
            let rows = (0..n)
                .map(|i| {
                    let line = lines[start + 1 + i];
                    if line.len() != n {
                        return Err(err(start + 2 + i, format!("row must have {n} characters")));
                    }
                    line.parse::<F2Vector>()
                        .map_err(|e| err(start + 2 + i, e.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(F2Matrix::from_rows(n, rows)?)
        };
        let s1 = read("sigma1", 1)?;
        let s2 = read("sigma2", n + 2)?;
        Ok((s1, s2))
    }

    pub fn from_text(text: &str) -> Result<KleinModule, ModuleError> {
        let (s1, s2) = Self::parse_actions(text)?;
        KleinModule::new(s1, s2)
    }
}

/// Basis-explicit canonical module of each summand type.
pub fn canonical(t: SummandType) -> KleinModule {
    let swap = F2Matrix::from_u8_rows(&[&[0, 1], &[1, 0]]);
    let (s1, s2) = match t {
        SummandType::Triv => (F2Matrix::identity(1), F2Matrix::identity(1)),
        SummandType::CycG1 => (swap, F2Matrix::identity(2)),
        SummandType::CycG2 => (F2Matrix::identity(2), swap),
        SummandType::CycG3 => (swap.clone(), swap),
        SummandType::Free => {
            // basis e, σ₁, σ₂, σ₁σ₂
            let s1 = F2Matrix::from_u8_rows(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]);
            let s2 = F2Matrix::from_u8_rows(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
            (s1, s2)
        }
        SummandType::OmegaMinus(n) => {
            // α₁..αₙ at 0..n, β₁..βₙ₊₁ at n..2n+1
            let n = n as usize;
            let mut s1 = F2Matrix::identity(2 * n + 1);
            let mut s2 = F2Matrix::identity(2 * n + 1);
            for i in 0..n {
                s2.set(n + i, i, true);
                s1.set(n + i + 1, i, true);
            }
            (s1, s2)
        }
        SummandType::OmegaPlus(n) => {
            // γ₁..γₙ₊₁ at 0..=n, δ₁..δₙ at n+1..2n+1
            let n = n as usize;
            let mut s1 = F2Matrix::identity(2 * n + 1);
            let mut s2 = F2Matrix::identity(2 * n + 1);
            for i in 0..n {
                s1.set(n + 1 + i, i, true);
                s2.set(n + 1 + i, i + 1, true);
            }
            (s1, s2)
        }
    };
    KleinModule { s1, s2 }
}

pub fn direct_sum(parts: &[KleinModule]) -> KleinModule {
    let s1: Vec<&F2Matrix> = parts.iter().map(|m| &m.s1).collect();
    let s2: Vec<&F2Matrix> = parts.iter().map(|m| &m.s2).collect();
    KleinModule {
        s1: F2Matrix::block_diagonal(&s1),
        s2: F2Matrix::block_diagonal(&s2),
    }
}

/// Rank of the linear system `Φ·A = B·Φ` in the entries of a
/// `rows × cols` matrix `Φ`, for each `(A, B)` pair.
fn intertwiner_rank(pairs: &[(&F2Matrix, &F2Matrix)], rows: usize, cols: usize) -> usize {
    let unknowns = rows * cols;
    let mut eqs = Vec::with_capacity(pairs.len() * unknowns);
    for (a, b) in pairs {
        let a_cols = a.columns();
        for i in 0..rows {
            let b_row = b.row(i);
            for (j, a_col) in a_cols.iter().enumerate() {
                // (ΦA)[i,j] + (BΦ)[i,j] = Σ_k Φ[i,k] A[k,j] + Σ_k B[i,k] Φ[k,j]
                let mut eq = F2Vector::zeros(unknowns);
                for k in a_col.ones() {
                    eq.flip(i * cols + k);
                }
                for k in b_row.ones() {
                    eq.flip(k * cols + j);
                }
                eqs.push(eq);
            }
        }
    }
    F2Matrix::from_rows(unknowns, eqs).unwrap().rank()
}

/// `dim Hom_{F_2[G]}(x, m)`.
pub fn hom_dim(x: &KleinModule, m: &KleinModule) -> usize {
    let (rows, cols) = (m.dim(), x.dim());
    let rank = intertwiner_rank(&[(&x.s1, &m.s1), (&x.s2, &m.s2)], rows, cols);
    rows * cols - rank
}

/// The nine rank invariants, in order: dim, dim M^G, rank A1, rank A2,
/// rank A3, rank N, dim(im A1 ∩ im A2), rank A1|ker A2, rank A2|ker A1.
pub fn rank_invariants(m: &KleinModule) -> [usize; 9] {
    let a1 = m.operator(Operator::A1);
    let a2 = m.operator(Operator::A2);
    let im1 = f2la::image(&a1);
    let im2 = f2la::image(&a2);
    let k1 = f2la::kernel(&a1);
    let k2 = f2la::kernel(&a2);
    [
        m.dim(),
        m.fixed_submodule().dim(),
        im1.dim(),
        im2.dim(),
        m.operator(Operator::A3).rank(),
        m.operator(Operator::N).rank(),
        im1.intersect(&im2).unwrap().dim(),
        k2.map(&a1).unwrap().dim(),
        k1.map(&a2).unwrap().dim(),
    ]
}

/// A set of summand types that multiplicity recovery is run against,
/// together with its functional matrix.
#[derive(Debug, Clone)]
pub struct Family {
    types: Vec<SummandType>,
    canon: Vec<KleinModule>,
    /// `functionals[r][c]`: functional `r` evaluated on type `c`.
    matrix: Vec<Vec<i64>>,
    rank: usize,
}

impl Family {
    /// The cyclic types together with `Ω^{±n}` for `1 ≤ n ≤ max_omega`.
    pub fn with_max_omega(max_omega: u32) -> Family {
        let mut types = vec![
            SummandType::Triv,
            SummandType::CycG1,
            SummandType::CycG2,
            SummandType::CycG3,
            SummandType::Free,
        ];
        types.extend((1..=max_omega).map(SummandType::OmegaPlus));
        types.extend((1..=max_omega).map(SummandType::OmegaMinus));
        Family::new(types)
    }

    pub fn new(types: Vec<SummandType>) -> Family {
        let canon: Vec<KleinModule> = types.iter().map(|t| canonical(*t)).collect();
        let per_type: Vec<Vec<i64>> = canon.iter().map(|m| functionals_against(&canon, m)).collect();
        let rows = per_type.first().map_or(0, Vec::len);
        let matrix: Vec<Vec<i64>> = (0..rows)
            .map(|r| per_type.iter().map(|col| col[r]).collect())
            .collect();
        let rank = rational_rank(&matrix, types.len());
        Family {
            types,
            canon,
            matrix,
            rank,
        }
    }

    pub fn types(&self) -> &[SummandType] {
        &self.types
    }

    pub fn functional_matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Errors unless the functionals separate all types in the family.
    pub fn verify(&self) -> Result<(), ModuleError> {
        if self.rank == self.types.len() {
            Ok(())
        } else {
            Err(ModuleError::GramRankDeficient {
                rank: self.rank,
                expected: self.types.len(),
            })
        }
    }

    pub fn functionals(&self, m: &KleinModule) -> Vec<i64> {
        functionals_against(&self.canon, m)
    }

    /// Recovers the multiplicity of each type in `m`, which must be a
    /// direct sum of family members.
    pub fn multiplicities(&self, m: &KleinModule) -> Result<Multiplicities, ModuleError> {
        self.verify()?;
        let values = self.functionals(m);
        let not_in_family = || ModuleError::NotInFamily {
            functionals: values.clone(),
        };
        let counts = solve_exact(&self.matrix, &values, self.types.len()).ok_or_else(not_in_family)?;
        let mut out = Multiplicities::new();
        for (t, c) in self.types.iter().zip(&counts) {
            if !c.is_integer() || c.is_negative() {
                return Err(not_in_family());
            }
            out.add(*t, c.to_integer().to_usize().ok_or_else(not_in_family)?);
        }
        // every row, not only the pivot rows, must agree
        for (row, v) in self.matrix.iter().zip(&values) {
            let predicted: usize = self
                .types
                .iter()
                .zip(row)
                .map(|(t, f)| out.get(*t) * *f as usize)
                .sum();
            if predicted as i64 != *v {
                return Err(not_in_family());
            }
        }
        Ok(out)
    }
}

fn functionals_against(canon: &[KleinModule], m: &KleinModule) -> Vec<i64> {
    let mut out: Vec<i64> = canon.iter().map(|x| hom_dim(x, m) as i64).collect();
    out.extend(canon.iter().map(|x| hom_dim(m, x) as i64));
    out.extend(rank_invariants(m).iter().map(|&r| r as i64));
    out
}

fn to_rational_rows(matrix: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    matrix
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect()
}

/// Gaussian elimination over Q; returns (reduced rows, pivot columns).
fn rref_q(mut a: Vec<Vec<BigRational>>, cols: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = &*x - &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

fn rational_rank(matrix: &[Vec<i64>], cols: usize) -> usize {
    rref_q(to_rational_rows(matrix), cols).1.len()
}

/// Unique rational solution of `matrix · x = values`, if the system is
/// consistent and has full column rank.
fn solve_exact(matrix: &[Vec<i64>], values: &[i64], cols: usize) -> Option<Vec<BigRational>> {
    let aug: Vec<Vec<i64>> = matrix
        .iter()
        .zip(values)
        .map(|(r, v)| r.iter().copied().chain(std::iter::once(*v)).collect())
        .collect();
    let (red, pivots) = rref_q(to_rational_rows(&aug), cols + 1);
    if pivots.contains(&cols) || pivots.len() != cols {
        return None;
    }
    Some(red.iter().take(cols).map(|r| r[cols].clone()).collect())
}

/// The nine types used throughout: cyclic types and `Ω^{±1}`, `Ω^{±2}`.
pub fn default_family() -> &'static Family {
    static FAMILY: OnceLock<Family> = OnceLock::new();
    FAMILY.get_or_init(|| Family::with_max_omega(2))
}

/// Decomposes `m` against the default nine-type family.
pub fn multiplicities(m: &KleinModule) -> Result<Multiplicities, ModuleError> {
    default_family().multiplicities(m)
}

/// Renders the functional matrix as text, one functional per line.
pub fn format_functional_matrix(family: &Family) -> String {
    let n = family.types().len();
    let mut labels: Vec<String> = family.types().iter().map(|t| format!("Hom({t},M)")).collect();
    labels.extend(family.types().iter().map(|t| format!("Hom(M,{t})")));
    labels.extend(
        [
            "dim", "dim M^G", "rk A1", "rk A2", "rk A3", "rk N", "im A1∩im A2", "rk A1|ker A2",
            "rk A2|ker A1",
        ]
        .iter()
        .map(|s| s.to_string()),
    );
    let width = labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);
    let mut out = format!("{:width$} ", "");
    for t in family.types() {
        out.push_str(&format!("{:>8}", t.name()));
    }
    out.push('\n');
    for (label, row) in labels.iter().zip(family.functional_matrix()) {
        let pad = width - label.chars().count();
        out.push_str(label);
        out.push_str(&" ".repeat(pad + 1));
        for v in row.iter().take(n) {
            out.push_str(&format!("{v:>8}"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use SummandType::*;

    const NINE: [SummandType; 9] = [
        Triv,
        CycG1,
        CycG2,
        CycG3,
        Free,
        OmegaPlus(1),
        OmegaPlus(2),
        OmegaMinus(1),
        OmegaMinus(2),
    ];

    /// Counts maps by enumerating every dim(x)·dim(m) bit matrix.
    fn brute_hom_count(x: &KleinModule, m: &KleinModule) -> usize {
        let (r, c) = (m.dim(), x.dim());
        let n = r * c;
        assert!(n <= 16);
        (0u32..1 << n)
            .filter(|bits| {
                let mut phi = F2Matrix::zeros(r, c);
                for i in 0..r {
                    for j in 0..c {
                        phi.set(i, j, (bits >> (i * c + j)) & 1 == 1);
                    }
                }
                phi.mul(x.s1()).unwrap() == m.s1().mul(&phi).unwrap()
                    && phi.mul(x.s2()).unwrap() == m.s2().mul(&phi).unwrap()
            })
            .count()
    }

    #[test]
    fn canonical_modules_are_valid_with_expected_dims() {
        for t in NINE.into_iter().chain([OmegaPlus(3), OmegaMinus(5)]) {
            let m = canonical(t);
            validate(m.s1(), m.s2()).unwrap();
            assert_eq!(m.dim(), t.dim());
        }
    }

    #[test]
    fn validate_reports_violations() {
        let bad = F2Matrix::from_u8_rows(&[&[1, 1], &[1, 0]]);
        assert_eq!(
            validate(&bad, &F2Matrix::identity(2)),
            Err(Violation::S1NotInvolution)
        );
        // a swap and a non-commuting involution generate a dihedral group
        let swap = F2Matrix::from_u8_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        let other = F2Matrix::from_u8_rows(&[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]]);
        assert!(other.mul(&other).unwrap().is_identity());
        assert_eq!(validate(&swap, &other), Err(Violation::NotCommuting));
        assert_eq!(Violation::NotCommuting.to_string(), "s1s2 ≠ s2s1");
    }

    #[test]
    fn canonical_examples() {
        let m = canonical(OmegaMinus(1));
        assert_eq!((m.dim(), m.fixed_submodule().dim()), (3, 2));
        let m = canonical(OmegaPlus(2));
        assert_eq!(m.dim(), 5);
        assert_eq!(m.fixed_submodule().dim(), 2);
        assert_eq!(m.operator(Operator::A1).rank(), 2);
        let m = canonical(Free);
        assert_eq!(m.operator(Operator::N).rank(), 1);
    }

    #[test]
    fn direct_sum_examples() {
        assert_eq!(direct_sum(&[]).dim(), 0);
        let tt = direct_sum(&[canonical(Triv), canonical(Triv)]);
        assert!(tt.s1().is_identity() && tt.s2().is_identity());
        let m = direct_sum(&[canonical(OmegaMinus(1)), canonical(Free)]);
        assert_eq!(m.dim(), 7);
        validate(m.s1(), m.s2()).unwrap();
    }

    #[test]
    fn fixed_submodule_examples() {
        assert_eq!(canonical(Triv).fixed_submodule(), Subspace::full(1));
        let m = canonical(OmegaMinus(2));
        let betas: Vec<F2Vector> = (2..5).map(|i| F2Vector::unit(5, i)).collect();
        assert_eq!(m.fixed_submodule(), Subspace::span(&betas, 5).unwrap());
        let free = canonical(Free);
        let norm_image = f2la::image(&free.operator(Operator::N));
        assert_eq!(free.fixed_submodule(), norm_image);
        assert_eq!(norm_image.dim(), 1);
    }

    #[test]
    fn operator_examples() {
        assert!(canonical(Triv).operator(Operator::A1).is_zero());
        assert!(canonical(OmegaPlus(1)).operator(Operator::N).is_zero());
        assert!(canonical(CycG3).operator(Operator::A3).is_zero());
        for t in NINE {
            let m = canonical(t);
            let a1 = m.operator(Operator::A1);
            let a2 = m.operator(Operator::A2);
            assert_eq!(m.operator(Operator::N), a2.mul(&a1).unwrap());
        }
    }

    #[test]
    fn hom_dim_matches_enumeration() {
        let small = [Triv, CycG1, CycG2, CycG3, Free, OmegaPlus(1), OmegaMinus(1)];
        for x in small {
            for m in small {
                let (x, m) = (canonical(x), canonical(m));
                if x.dim() * m.dim() <= 16 {
                    assert_eq!(1usize << hom_dim(&x, &m), brute_hom_count(&x, &m));
                }
            }
        }
        assert_eq!(hom_dim(&canonical(OmegaPlus(1)), &canonical(OmegaMinus(1))), 4);
    }

    #[test]
    fn hom_from_triv_and_free() {
        for t in NINE {
            let m = canonical(t);
            assert_eq!(hom_dim(&canonical(Triv), &m), m.fixed_submodule().dim());
            assert_eq!(hom_dim(&canonical(Free), &m), m.dim());
        }
    }

    #[test]
    fn gram_matrix_has_full_rank() {
        let fam = default_family();
        assert_eq!(fam.functional_matrix().len(), 27);
        assert_eq!(fam.rank(), 9);
        // a family with Ω^{±3} is still separated
        assert_eq!(Family::with_max_omega(3).rank(), 11);
    }

    #[test]
    fn degeneracy_pair_is_separated() {
        let p = direct_sum(&[canonical(CycG1), canonical(CycG2), canonical(CycG3)]);
        let q = direct_sum(&[canonical(OmegaPlus(1)), canonical(OmegaMinus(1))]);
        assert_eq!(rank_invariants(&p), rank_invariants(&q));
        assert_eq!(hom_dim(&canonical(OmegaPlus(1)), &p), 6);
        assert_eq!(hom_dim(&canonical(OmegaPlus(1)), &q), 7);
        assert_eq!(
            multiplicities(&p).unwrap(),
            Multiplicities::from_types([CycG1, CycG2, CycG3])
        );
        assert_eq!(
            multiplicities(&q).unwrap(),
            Multiplicities::from_types([OmegaPlus(1), OmegaMinus(1)])
        );
    }

    #[test]
    fn not_in_family_is_reported() {
        let m = canonical(OmegaMinus(3));
        match multiplicities(&m) {
            Err(ModuleError::NotInFamily { functionals }) => assert_eq!(functionals.len(), 27),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn closure_examples() {
        let t = canonical(Triv);
        assert_eq!(t.submodule_closure(&[F2Vector::unit(1, 0)]).unwrap().dim(), 1);
        let free = canonical(Free);
        assert_eq!(free.submodule_closure(&[F2Vector::unit(4, 0)]).unwrap().dim(), 4);
        let om = canonical(OmegaMinus(1));
        assert_eq!(om.submodule_closure(&[F2Vector::unit(3, 0)]).unwrap().dim(), 3);
    }

    #[test]
    fn restrict_to_submodule() {
        let m = direct_sum(&[canonical(Free), canonical(CycG1)]);
        let s = m.submodule_closure(&[F2Vector::unit(6, 0)]).unwrap();
        let r = m.restrict(&s).unwrap();
        assert_eq!(multiplicities(&r).unwrap(), Multiplicities::from_types([Free]));
        let not_stable = Subspace::span(&[F2Vector::unit(6, 0)], 6).unwrap();
        assert_eq!(m.restrict(&not_stable), Err(ModuleError::NotSubmodule));
    }

    #[test]
    fn text_format_round_trip_and_errors() {
        let m = direct_sum(&[canonical(OmegaMinus(1)), canonical(Free)]);
        let text = m.to_text();
        assert!(text.starts_with("dim 7\nsigma1\n"));
        assert_eq!(KleinModule::from_text(&text).unwrap(), m);
        assert_eq!(KleinModule::from_text(text.trim_end()).unwrap(), m);
        assert_eq!(KleinModule::from_text("dim 0\nsigma1\nsigma2\n").unwrap().dim(), 0);
        assert!(matches!(
            KleinModule::from_text("dim 2\nsigma1\n10\n01\nsigma2\n10\n0\n"),
            Err(ModuleError::Parse { line: 7, .. })
        ));
        assert!(matches!(
            KleinModule::from_text("dimension 2\n"),
            Err(ModuleError::Parse { line: 1, .. })
        ));
        let dihedral = "dim 3\nsigma1\n010\n100\n001\nsigma2\n100\n001\n010\n";
        assert_eq!(
            KleinModule::from_text(dihedral),
            Err(ModuleError::Invalid(Violation::NotCommuting))
        );
    }

    #[test]
    fn summand_names_round_trip() {
        for t in NINE {
            assert_eq!(t.name().parse::<SummandType>().unwrap(), t);
        }
        assert!("Omega+0".parse::<SummandType>().is_err());
        assert!("Z".parse::<SummandType>().is_err());
    }
}
