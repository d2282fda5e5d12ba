//! Dense linear algebra over prime fields.
//!
//! Every routine uses the same elimination order (leftmost pivot column,
//! topmost available row), so solution representatives and kernel bases are
//! reproducible.

use std::fmt;

use crate::error::{Error, Result};

/// Largest modulus accepted; products of two residues must fit in a `u64`.
pub const MAX_PRIME: u32 = 65521;

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u32) -> Result<()> {
    if p > MAX_PRIME || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

#[inline]
pub fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
pub fn neg_mod(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p), "inverse of zero");
    // Fermat: a^(p-2).
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u32;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Reduces an arbitrary signed integer into `[0, p)`.
pub fn reduce_i64(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

/// Signed representative in `(-p/2, p/2]`, used for display.
pub fn signed(v: u32, p: u32) -> i64 {
    if v as u64 * 2 > p as u64 {
        v as i64 - p as i64
    } else {
        v as i64
    }
}

pub fn vec_add(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| add_mod(x, y, p)).collect()
}

pub fn vec_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| sub_mod(x, y, p)).collect()
}

pub fn vec_neg(a: &[u32], p: u32) -> Vec<u32> {
    a.iter().map(|&x| neg_mod(x, p)).collect()
}

pub fn vec_scale(a: &[u32], c: u32, p: u32) -> Vec<u32> {
    a.iter().map(|&x| mul_mod(x, c, p)).collect()
}

/// `acc += c * v`
pub fn vec_axpy(acc: &mut [u32], c: u32, v: &[u32], p: u32) {
    if c == 0 {
        return;
    }
    for (a, &x) in acc.iter_mut().zip(v) {
        *a = add_mod(*a, mul_mod(c, x, p), p);
    }
}

/// A dense matrix over F_p, row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix(p={}, {}x{})", self.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl FpMatrix {
    pub fn new(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        check_prime(p)?;
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let data = data.into_iter().map(|v| v % p).collect();
        Ok(FpMatrix { p, rows, cols, data })
    }

    /// Builds a matrix from signed integer rows, reducing mod p.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Result<Self> {
        check_prime(p)?;
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data = rows.iter().flatten().map(|&v| reduce_i64(v, p)).collect();
        Ok(FpMatrix { p, rows: r, cols: c, data })
    }

    pub(crate) fn raw(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        FpMatrix { p, rows, cols, data }
    }

    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(p: u32, rows: usize, cols: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            debug_assert_eq!(c.len(), rows);
            for (i, &v) in c.iter().enumerate() {
                m.data[i * cols.len() + j] = v;
            }
        }
        m
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let p = self.p as u64;
        let mut out = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d = (*d + a * b as u64) % p;
                }
            }
        }
        FpMatrix {
            p: self.p,
            rows: self.rows,
            cols: other.cols,
            data: out.into_iter().map(|v| v as u32).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % self.p as u64)
                    as u32
            })
            .collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("matrix sum of different shapes".into()));
        }
        Ok(FpMatrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            data: vec_add(&self.data, &other.data, self.p),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        FpMatrix { data: vec_neg(&self.data, self.p), ..self.clone() }
    }

    pub fn scale(&self, c: u32) -> Self {
        FpMatrix { data: vec_scale(&self.data, c % self.p, self.p), ..self.clone() }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn pow(&self, e: usize) -> Self {
        assert_eq!(self.rows, self.cols, "power of a non-square matrix");
        let mut acc = Self::identity(self.p, self.rows);
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack row counts differ".into()));
        }
        let cols = self.cols + other.cols;
        let mut out = Self::zeros(self.p, self.rows, cols);
        for r in 0..self.rows {
            out.data[r * cols..r * cols + self.cols].copy_from_slice(self.row(r));
            out.data[r * cols + self.cols..(r + 1) * cols].copy_from_slice(other.row(r));
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack column counts differ".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FpMatrix { p: self.p, rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn block_diag(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zeros(self.p, self.rows + other.rows, self.cols + other.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, other);
        Ok(out)
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Self) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.data[(r0 + r) * self.cols + c0 + c] = block.get(r, c);
            }
        }
    }

    pub fn submatrix(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Self {
        let mut out = Self::zeros(self.p, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                out.data[r * cols + c] = self.get(r0 + r, c0 + c);
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place(self.cols);
        (m, pivots)
    }

    /// Row reduces in place, choosing pivots only among the first `pivot_cols`
    /// columns. Returns the pivot columns in order.
    fn rref_in_place(&mut self, pivot_cols: usize) -> Vec<usize> {
        let p = self.p;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..pivot_cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.data[r * cols + col] != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..cols {
                    self.data.swap(pr * cols + c, row * cols + c);
                }
            }
            let inv = inv_mod(self.data[row * cols + col], p);
            for c in 0..cols {
                let v = &mut self.data[row * cols + c];
                *v = mul_mod(*v, inv, p);
            }
            let pivot_row: Vec<u32> = self.row(row).to_vec();
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.data[r * cols + col];
                if factor == 0 {
                    continue;
                }
                let f = neg_mod(factor, p);
                vec_axpy(&mut self.data[r * cols..(r + 1) * cols], f, &pivot_row, p);
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : A x = 0}`, one vector per free column in ascending order.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let (r, pivots) = self.rref();
        kernel_from_rref(&r, &pivots)
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = self.hstack(&Self::identity(self.p, n)).ok()?;
        let pivots = aug.rref_in_place(n);
        if pivots.len() != n {
            return None;
        }
        Some(aug.submatrix(0, n, n, n))
    }
}

fn kernel_from_rref(r: &FpMatrix, pivots: &[usize]) -> Vec<Vec<u32>> {
    let p = r.p;
    let mut basis = Vec::new();
    let mut is_pivot = vec![false; r.cols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    for free in 0..r.cols {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![0u32; r.cols];
        v[free] = 1;
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = neg_mod(r.get(row, free), p);
        }
        basis.push(v);
    }
    basis
}

/// An affine subspace `representative + span(basis)` of F_p^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSpace {
    p: u32,
    representative: Vec<u32>,
    basis: Vec<Vec<u32>>,
}

impl AffineSpace {
    pub fn new(p: u32, representative: Vec<u32>, basis: Vec<Vec<u32>>) -> Result<Self> {
        check_prime(p)?;
        let n = representative.len();
        if basis.iter().any(|b| b.len() != n) {
            return Err(Error::DimensionMismatch("basis vector of wrong length".into()));
        }
        if !basis.is_empty() && FpMatrix::from_columns(p, n, &basis).rank() != basis.len() {
            return Err(Error::DimensionMismatch("basis vectors are dependent".into()));
        }
        Ok(AffineSpace { p, representative, basis })
    }

    pub(crate) fn raw(p: u32, representative: Vec<u32>, basis: Vec<Vec<u32>>) -> Self {
        AffineSpace { p, representative, basis }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.representative.len()
    }

    pub fn representative(&self) -> &[u32] {
        &self.representative
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Number of points, saturating.
    pub fn cardinality(&self) -> u128 {
        (self.p as u128).saturating_pow(self.basis.len() as u32)
    }

    /// The point with the given basis coefficients.
    pub fn point(&self, coeffs: &[u32]) -> Vec<u32> {
        let mut v = self.representative.clone();
        for (c, b) in coeffs.iter().zip(&self.basis) {
            vec_axpy(&mut v, *c, b, self.p);
        }
        v
    }

    /// All points, coefficient vectors in lexicographic order (first
    /// coefficient most significant).
    pub fn enumerate_points(&self, cap: usize) -> Result<Vec<Vec<u32>>> {
        let needed = self.cardinality();
        if needed > cap as u128 {
            return Err(Error::EnumerationOverflow { needed, cap });
        }
        let d = self.basis.len();
        let mut coeffs = vec![0u32; d];
        let mut out = Vec::with_capacity(needed as usize);
        loop {
            out.push(self.point(&coeffs));
            // increment, last coefficient fastest
            let mut i = d;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                coeffs[i] += 1;
                if coeffs[i] < self.p {
                    break;
                }
                coeffs[i] = 0;
            }
        }
    }
}

/// Solves `A x = b`. Returns `None` when the system is inconsistent.
pub fn solve_affine(a: &FpMatrix, b: &[u32]) -> Result<Option<AffineSpace>> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} equations but right-hand side of length {}",
            a.rows(),
            b.len()
        )));
    }
    let p = a.p();
    let rhs = FpMatrix::raw(p, b.len(), 1, b.iter().map(|&v| v % p).collect());
    let mut aug = a.hstack(&rhs)?;
    let pivots = aug.rref_in_place(a.cols());
    let n = a.cols();
    // inconsistent iff a zero row of A has nonzero rhs
    for r in pivots.len()..aug.rows() {
        if aug.get(r, n) != 0 {
            return Ok(None);
        }
    }
    let mut rep = vec![0u32; n];
    for (row, &pc) in pivots.iter().enumerate() {
        rep[pc] = aug.get(row, n);
    }
    let coeff = aug.submatrix(0, aug.rows(), 0, n);
    let basis = kernel_from_rref(&coeff, &pivots);
    Ok(Some(AffineSpace::raw(p, rep, basis)))
}

/// Reduced basis of a span of vectors (RREF rows).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    p: u32,
    ambient: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(p: u32, ambient: usize, vectors: &[Vec<u32>]) -> Result<Self> {
        check_prime(p)?;
        if vectors.iter().any(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch("vector outside ambient space".into()));
        }
        let data: Vec<u32> = vectors.iter().flatten().map(|&v| v % p).collect();
        let m = FpMatrix::raw(p, vectors.len(), ambient, data);
        let (r, pivots) = m.rref();
        let rows = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Ok(Subspace { p, ambient, rows, pivots })
    }

    pub fn zero(p: u32, ambient: usize) -> Self {
        Subspace { p, ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Echelon basis of the subspace.
    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the echelon basis; the result is zero iff `v` lies
    /// in the subspace.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let mut w: Vec<u32> = v.iter().map(|&x| x % self.p).collect();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = w[pc];
            if c != 0 {
                vec_axpy(&mut w, neg_mod(c, self.p), row, self.p);
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of the class of `v` in the complement spanned by the
    /// standard basis vectors at non-pivot positions.
    pub fn quotient_coords(&self, v: &[u32]) -> Vec<u32> {
        let w = self.reduce(v);
        let mut is_pivot = vec![false; self.ambient];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        w.into_iter()
            .enumerate()
            .filter(|(i, _)| !is_pivot[*i])
            .map(|(_, x)| x)
            .collect()
    }

    pub fn quotient_dim(&self) -> usize {
        self.ambient - self.rows.len()
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        let mut all = self.rows.clone();
        all.extend(other.rows.iter().cloned());
        Subspace::span(self.p, self.ambient, &all)
    }
}

/// Coordinates of the class of `v` modulo `span(subspace_basis)`.
pub fn quotient_coords(p: u32, subspace_basis: &[Vec<u32>], v: &[u32]) -> Result<Vec<u32>> {
    let sub = Subspace::span(p, v.len(), subspace_basis)?;
    Ok(sub.quotient_coords(v))
}
