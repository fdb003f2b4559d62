//! Dense linear algebra over the two-element field.
//!
//! Vectors are bit-packed into `u64` words. Subspaces are always stored in
//! reduced row-echelon form with strictly increasing pivot columns, so two
//! subspaces are equal exactly when their stored bases are equal.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("vector has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subspace is not contained in the enclosing space")]
    NotASubspace,
    #[error("invalid bit character {0:?}")]
    InvalidBit(char),
    #[error("matrix is singular")]
    Singular,
}

/// A vector in `F_2^len`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Vector {
    len: usize,
    words: Vec<u64>,
}

impl F2Vector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    /// The `i`-th standard basis vector.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Builds a vector from 0/1 entries; any nonzero entry counts as 1.
    pub fn from_u8s(bits: &[u8]) -> Self {
        Self::from_bits(bits.iter().map(|&b| b & 1 == 1))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// In-place addition. Panics on length mismatch.
    #[inline]
    pub fn add_assign(&mut self, other: &F2Vector) {
        assert_eq!(self.len, other.len, "F2Vector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn add(&self, other: &F2Vector) -> F2Vector {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn dot(&self, other: &F2Vector) -> bool {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Index of the lowest set bit.
    pub fn leading(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Concatenation `(self, other)`.
    pub fn concat(&self, other: &F2Vector) -> F2Vector {
        F2Vector::from_bits(self.bits().chain(other.bits()))
    }

    /// Coordinates `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> F2Vector {
        F2Vector::from_bits((start..start + len).map(|i| self.get(i)))
    }

    /// Writes `block` into coordinates starting at `start`.
    pub fn put(&mut self, start: usize, block: &F2Vector) {
        for i in 0..block.len() {
            self.set(start + i, block.get(i));
        }
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Vector({self})")
    }
}

impl FromStr for F2Vector {
    type Err = LinAlgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(LinAlgError::InvalidBit(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(F2Vector::from_bits(bits))
    }
}

/// A dense matrix over `F_2`, stored as a list of row vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<F2Vector>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![F2Vector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<F2Vector>) -> Result<Self, LinAlgError> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(LinAlgError::LengthMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    pub fn from_columns(rows: usize, columns: &[F2Vector]) -> Result<Self, LinAlgError> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(LinAlgError::LengthMismatch {
                    expected: rows,
                    found: c.len(),
                });
            }
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
        Ok(m)
    }

    /// Convenience constructor from nested 0/1 arrays.
    pub fn from_u8_rows(rows: &[&[u8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().map(|r| F2Vector::from_u8s(r)).collect();
        Self::from_rows(cols, data).expect("ragged rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &F2Vector {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[F2Vector] {
        &self.data
    }

    pub fn column(&self, j: usize) -> F2Vector {
        F2Vector::from_bits(self.data.iter().map(|r| r.get(j)))
    }

    pub fn columns(&self) -> Vec<F2Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        self.data[i].set(j, bit);
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows);
        for (i, r) in self.data.iter().enumerate() {
            for j in r.ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &F2Vector) -> Result<F2Vector, LinAlgError> {
        if v.len() != self.cols {
            return Err(LinAlgError::LengthMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(F2Vector::from_bits(self.data.iter().map(|r| r.dot(v))))
    }

    /// `self * v`, panicking on a length mismatch. For internal use where
    /// shapes are already known to agree.
    pub fn apply(&self, v: &F2Vector) -> F2Vector {
        self.mul_vec(v).expect("matrix/vector shape mismatch")
    }

    pub fn mul(&self, other: &F2Matrix) -> Result<F2Matrix, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .map(|r| {
                let mut acc = F2Vector::zeros(other.cols);
                for k in r.ones() {
                    acc.add_assign(&other.data[k]);
                }
                acc
            })
            .collect();
        Ok(F2Matrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn add(&self, other: &F2Matrix) -> Result<F2Matrix, LinAlgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinAlgError::DimensionMismatch(format!(
                "{}x{} plus {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.add(b))
            .collect();
        Ok(F2Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F2Vector::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == F2Matrix::identity(self.rows)
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.cols);
        for r in &self.data {
            ech.insert(r.clone());
        }
        ech.rank()
    }

    /// Block-diagonal sum of square or rectangular blocks.
    pub fn block_diagonal(blocks: &[&F2Matrix]) -> F2Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = F2Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for (i, row) in b.data.iter().enumerate() {
                m.data[r0 + i].put(c0, row);
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Stacks `self` above `other`.
    pub fn vstack(&self, other: &F2Matrix) -> Result<F2Matrix, LinAlgError> {
        if self.cols != other.cols {
            return Err(LinAlgError::DimensionMismatch(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(F2Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn inverse(&self) -> Result<F2Matrix, LinAlgError> {
        if self.rows != self.cols {
            return Err(LinAlgError::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a: Vec<F2Vector> = self
            .data
            .iter()
            .enumerate()
            .map(|(i, r)| r.concat(&F2Vector::unit(n, i)))
            .collect();
        for col in 0..n {
            let p = (col..n).find(|&i| a[i].get(col)).ok_or(LinAlgError::Singular)?;
            a.swap(col, p);
            let pivot = a[col].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i != col && row.get(col) {
                    row.add_assign(&pivot);
                }
            }
        }
        let data = a.iter().map(|r| r.slice(n, n)).collect();
        Ok(F2Matrix { rows: n, cols: n, data })
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{} [", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

/// Incremental reduced row-echelon basis that remembers, for every stored
/// row, which combination of inserted vectors produced it.
///
/// `combo` vectors live in `F_2^k` where `k` is the number of inserted
/// vectors so far; they are resized lazily.
#[derive(Clone, Debug)]
struct Echelon {
    dim: usize,
    rows: Vec<(usize, F2Vector)>,
}

impl Echelon {
    fn new(dim: usize) -> Self {
        Self { dim, rows: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: F2Vector) -> F2Vector {
        for (p, r) in &self.rows {
            if v.get(*p) {
                v.add_assign(r);
            }
        }
        v
    }

    /// Returns `true` if `v` enlarged the span.
    fn insert(&mut self, v: F2Vector) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let v = self.reduce(v);
        match v.leading() {
            None => false,
            Some(p) => {
                for (_, r) in self.rows.iter_mut() {
                    if r.get(p) {
                        r.add_assign(&v);
                    }
                }
                let at = self.rows.partition_point(|(q, _)| *q < p);
                self.rows.insert(at, (p, v));
                true
            }
        }
    }

    fn into_basis(self) -> Vec<F2Vector> {
        self.rows.into_iter().map(|(_, r)| r).collect()
    }
}

/// Tracked elimination: reduces `inputs` and records how each reduced
/// row or zero row was obtained.
struct Tracked {
    dim: usize,
    count: usize,
    /// (pivot, reduced vector, combination of inputs)
    rows: Vec<(usize, F2Vector, F2Vector)>,
    /// combinations of inputs summing to zero
    relations: Vec<F2Vector>,
}

impl Tracked {
    fn new(dim: usize, inputs: &[F2Vector]) -> Self {
        let count = inputs.len();
        let mut t = Tracked {
            dim,
            count,
            rows: Vec::new(),
            relations: Vec::new(),
        };
        for (i, v) in inputs.iter().enumerate() {
            let (v, combo) = t.reduce(v.clone(), F2Vector::unit(count, i));
            match v.leading() {
                None => t.relations.push(combo),
                Some(p) => {
                    for (_, r, c) in t.rows.iter_mut() {
                        if r.get(p) {
                            r.add_assign(&v);
                            c.add_assign(&combo);
                        }
                    }
                    let at = t.rows.partition_point(|(q, _, _)| *q < p);
                    t.rows.insert(at, (p, v, combo));
                }
            }
        }
        t
    }

    fn reduce(&self, mut v: F2Vector, mut combo: F2Vector) -> (F2Vector, F2Vector) {
        debug_assert_eq!(v.len(), self.dim);
        for (p, r, c) in &self.rows {
            if v.get(*p) {
                v.add_assign(r);
                combo.add_assign(c);
            }
        }
        (v, combo)
    }

    /// Combination of inputs equal to `target`, if `target` is in the span.
    fn express(&self, target: &F2Vector) -> Option<F2Vector> {
        let (rem, combo) = self.reduce(target.clone(), F2Vector::zeros(self.count));
        rem.is_zero().then_some(combo)
    }
}

fn check_len(v: &F2Vector, n: usize) -> Result<(), LinAlgError> {
    if v.len() == n {
        Ok(())
    } else {
        Err(LinAlgError::LengthMismatch {
            expected: n,
            found: v.len(),
        })
    }
}

/// A linear subspace of `F_2^ambient_dim` held in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<F2Vector>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.basis.iter().map(|v| v.to_string()).collect();
        write!(f, "Subspace(n={}, [{}])", self.ambient_dim, b.join(", "))
    }
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: (0..ambient_dim).map(|i| F2Vector::unit(ambient_dim, i)).collect(),
        }
    }

    /// Span of `vectors` in canonical reduced-echelon form.
    pub fn canonicalize<'a, I>(vectors: I, ambient_dim: usize) -> Result<Self, LinAlgError>
    where
        I: IntoIterator<Item = &'a F2Vector>,
    {
        let mut ech = Echelon::new(ambient_dim);
        for v in vectors {
            check_len(v, ambient_dim)?;
            ech.insert(v.clone());
        }
        Ok(Self {
            ambient_dim,
            basis: ech.into_basis(),
        })
    }

    pub fn span(vectors: &[F2Vector], ambient_dim: usize) -> Result<Self, LinAlgError> {
        Self::canonicalize(vectors.iter(), ambient_dim)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[F2Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|v| v.leading().unwrap()).collect()
    }

    fn reduce(&self, mut v: F2Vector) -> F2Vector {
        for b in &self.basis {
            if v.get(b.leading().unwrap()) {
                v.add_assign(b);
            }
        }
        v
    }

    pub fn contains(&self, v: &F2Vector) -> bool {
        v.len() == self.ambient_dim && self.reduce(v.clone()).is_zero()
    }

    /// Coordinates of `v` with respect to the canonical basis.
    pub fn coordinates(&self, v: &F2Vector) -> Option<F2Vector> {
        if v.len() != self.ambient_dim {
            return None;
        }
        let mut rem = v.clone();
        let mut coords = F2Vector::zeros(self.dim());
        for (i, b) in self.basis.iter().enumerate() {
            if rem.get(b.leading().unwrap()) {
                rem.add_assign(b);
                coords.set(i, true);
            }
        }
        rem.is_zero().then_some(coords)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis.iter().all(|v| other.contains(v))
    }

    fn same_ambient(&self, other: &Subspace) -> Result<(), LinAlgError> {
        if self.ambient_dim == other.ambient_dim {
            Ok(())
        } else {
            Err(LinAlgError::DimensionMismatch(format!(
                "ambient dimensions {} and {}",
                self.ambient_dim, other.ambient_dim
            )))
        }
    }

    /// `U + V`.
    pub fn add(&self, other: &Subspace) -> Result<Subspace, LinAlgError> {
        self.same_ambient(other)?;
        Subspace::canonicalize(self.basis.iter().chain(&other.basis), self.ambient_dim)
    }

    /// Vectors orthogonal to every element of `self` under the standard
    /// dot product.
    pub fn annihilator(&self) -> Subspace {
        let m = F2Matrix::from_rows(self.ambient_dim, self.basis.clone()).unwrap();
        kernel(&m)
    }

    /// `U ∩ V`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinAlgError> {
        self.same_ambient(other)?;
        // Coefficient vectors alpha with sum(alpha_i u_i) in V.
        let checks = other.annihilator();
        let u_cols = F2Matrix::from_columns(self.ambient_dim, &self.basis)?;
        let h = F2Matrix::from_rows(self.ambient_dim, checks.basis.clone())?;
        let coeffs = kernel(&h.mul(&u_cols)?);
        let vs: Vec<F2Vector> = coeffs.basis.iter().map(|a| u_cols.apply(a)).collect();
        Subspace::span(&vs, self.ambient_dim)
    }

    /// A complement of `self` inside `outer`, chosen greedily from the
    /// canonical basis of `outer` in pivot order.
    pub fn complement_in(&self, outer: &Subspace) -> Result<Subspace, LinAlgError> {
        self.same_ambient(outer)?;
        if !self.is_subspace_of(outer) {
            return Err(LinAlgError::NotASubspace);
        }
        let mut ech = Echelon::new(self.ambient_dim);
        for b in &self.basis {
            ech.insert(b.clone());
        }
        let mut chosen = Vec::new();
        for v in &outer.basis {
            if ech.insert(v.clone()) {
                chosen.push(v.clone());
            }
        }
        Subspace::span(&chosen, self.ambient_dim)
    }

    /// Image of the subspace under `a`.
    pub fn map(&self, a: &F2Matrix) -> Result<Subspace, LinAlgError> {
        if a.cols() != self.ambient_dim {
            return Err(LinAlgError::DimensionMismatch(format!(
                "{}x{} applied to subspace of F2^{}",
                a.rows(),
                a.cols(),
                self.ambient_dim
            )));
        }
        let imgs: Vec<F2Vector> = self.basis.iter().map(|v| a.apply(v)).collect();
        Subspace::span(&imgs, a.rows())
    }

    /// Basis vectors as the columns of a matrix.
    pub fn basis_matrix(&self) -> F2Matrix {
        F2Matrix::from_columns(self.ambient_dim, &self.basis).unwrap()
    }
}

/// Solves `a · x = b`. Returns `None` when the system is inconsistent.
pub fn solve(a: &F2Matrix, b: &F2Vector) -> Result<Option<F2Vector>, LinAlgError> {
    if b.len() != a.rows() {
        return Err(LinAlgError::DimensionMismatch(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            a.rows()
        )));
    }
    let t = Tracked::new(a.rows(), &a.columns());
    let x = t.express(b);
    if let Some(x) = &x {
        debug_assert_eq!(&a.apply(x), b);
    }
    Ok(x)
}

pub fn kernel(a: &F2Matrix) -> Subspace {
    let t = Tracked::new(a.rows(), &a.columns());
    Subspace::span(&t.relations, a.cols()).unwrap()
}

pub fn image(a: &F2Matrix) -> Subspace {
    Subspace::span(&a.columns(), a.rows()).unwrap()
}

/// The image of `a` together with a preimage for every canonical basis
/// vector: `a · preimages[i] == image.basis()[i]`.
pub fn image_with_preimages(a: &F2Matrix) -> (Subspace, Vec<F2Vector>) {
    let t = Tracked::new(a.rows(), &a.columns());
    let img = Subspace {
        ambient_dim: a.rows(),
        basis: t.rows.iter().map(|(_, r, _)| r.clone()).collect(),
    };
    let pre = t.rows.iter().map(|(_, _, c)| c.clone()).collect();
    (img, pre)
}

/// `{x : a · x ∈ w}`.
pub fn preimage(a: &F2Matrix, w: &Subspace) -> Result<Subspace, LinAlgError> {
    if w.ambient_dim() != a.rows() {
        return Err(LinAlgError::DimensionMismatch(format!(
            "target subspace of F2^{} for {} rows",
            w.ambient_dim(),
            a.rows()
        )));
    }
    let h = F2Matrix::from_rows(a.rows(), w.annihilator().basis)?;
    Ok(kernel(&h.mul(a)?))
}
