//! Dense exact linear algebra: reduced row echelon form, rank, kernels.
//!
//! Pivots are chosen as the first non-zero entry of each column, scanning
//! rows top-down, so every result is deterministic. [`DenseMatrix::rank`]
//! dispatches to specialised kernels: plain `u64` arithmetic over `F_p`,
//! and fraction-free integer elimination over `Q` (fixed-width first,
//! arbitrary precision on overflow).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{pow_mod, Field, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<FieldElement>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: DenseMatrix,
    pub pivots: Vec<usize>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, field: Field, data: Vec<FieldElement>) -> Result<DenseMatrix> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|v| v.field() != field) {
            return Err(Error::FieldMismatch(format!("{field}"), format!("{}", bad.field())));
        }
        Ok(DenseMatrix { rows, cols, field, data })
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<FieldElement>>) -> Result<DenseMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        DenseMatrix::new(r, c, field, rows.into_iter().flatten().collect())
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> DenseMatrix {
        let c = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().flat_map(|r| r.iter().map(|&v| field.from_i64(v))).collect();
        DenseMatrix { rows: rows.len(), cols: c, field, data }
    }

    pub fn zeros(rows: usize, cols: usize, field: Field) -> DenseMatrix {
        DenseMatrix { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(n: usize, field: Field) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        debug_assert_eq!(v.field(), self.field);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElement::is_zero)
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        DenseMatrix { rows: self.cols, cols: self.rows, field: self.field, data }
    }

    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{}", self.field), format!("{}", other.field)));
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols, self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if v.len() != self.cols {
            return Err(Error::Shape("vector length mismatch".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    /// Gauss–Jordan elimination to the unique reduced row echelon form.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inverse().expect("pivot is non-zero");
            for j in c..m.cols {
                let idx = r * m.cols + j;
                if !m.data[idx].is_zero() {
                    m.data[idx] = &m.data[idx] * &inv;
                }
            }
            let support: Vec<usize> = (c..m.cols).filter(|&j| !m.get(r, j).is_zero()).collect();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for &j in &support {
                    let delta = &f * m.get(r, j);
                    let idx = i * m.cols + j;
                    m.data[idx] = &m.data[idx] - &delta;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        match self.field {
            Field::Prime(p) => {
                let data = self.data.iter().map(|v| v.residue().unwrap_or(0)).collect();
                rank_mod_p(self.rows, self.cols, data, p)
            }
            Field::Rational => self.rank_rational(),
        }
    }

    fn rank_rational(&self) -> usize {
        let rows = self.integer_rows();
        let small: Option<Vec<Vec<i128>>> = rows
            .iter()
            .map(|row| row.iter().map(|v| v.to_i128()).collect())
            .collect();
        if let Some(small) = small {
            if let Some(r) = fraction_free_rank(small, self.cols) {
                return r;
            }
        }
        fraction_free_rank(rows, self.cols).expect("arbitrary precision never overflows")
    }

    /// Each row scaled by the lcm of its denominators.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let fr: Vec<(BigInt, BigInt)> = self.row(i).iter().map(FieldElement::as_fraction).collect();
                let l = fr.iter().fold(BigInt::one(), |acc, (_, d)| acc.lcm(d));
                fr.into_iter().map(|(n, d)| n * (&l / d)).collect()
            })
            .collect()
    }

    /// Basis of the right kernel, one vector per free column of the RREF.
    pub fn kernel_basis(&self) -> Vec<Vec<FieldElement>> {
        let Rref { matrix, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -matrix.get(r, free);
            }
            out.push(v);
        }
        out
    }

    /// Two-sided inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<DenseMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = DenseMatrix::zeros(n, 2 * n, self.field);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let Rref { matrix, pivots } = aug.rref();
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return None;
        }
        let mut inv = DenseMatrix::zeros(n, n, self.field);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, matrix.get(i, n + j).clone());
            }
        }
        Some(inv)
    }
}

impl fmt::Display for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<_> = self.row(i).iter().map(|v| format!("{v}")).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

fn rank_mod_p(rows: usize, cols: usize, mut a: Vec<u32>, p: u32) -> usize {
    let p64 = p as u64;
    let mut r = 0;
    let mut support = Vec::with_capacity(cols);
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            for j in c..cols {
                a.swap(piv * cols + j, r * cols + j);
            }
        }
        let inv = pow_mod(a[r * cols + c], p - 2, p) as u64;
        support.clear();
        for j in c..cols {
            let v = a[r * cols + j];
            if v != 0 {
                a[r * cols + j] = (v as u64 * inv % p64) as u32;
                support.push(j);
            }
        }
        for i in r + 1..rows {
            let f = a[i * cols + c] as u64;
            if f == 0 {
                continue;
            }
            let neg = p64 - f;
            for &j in &support {
                let idx = i * cols + j;
                a[idx] = ((a[idx] as u64 + neg * a[r * cols + j] as u64) % p64) as u32;
            }
        }
        r += 1;
    }
    r
}

/// Integer arithmetic for fraction-free elimination. Fixed-width types
/// report overflow with `None`.
trait ExactInt: Clone + PartialEq {
    fn zero_val() -> Self;
    fn one_val() -> Self;
    fn is_one_val(&self) -> bool;
    fn is_zero_val(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn gcd_val(&self, other: &Self) -> Self;
    fn div_exact(&self, other: &Self) -> Self;
    fn neg_val(&self) -> Self;
    fn mul_sub(&self, a: &Self, b: &Self, c: &Self) -> Option<Self>;
}

impl ExactInt for i128 {
    fn zero_val() -> Self {
        0
    }
    fn one_val() -> Self {
        1
    }
    fn is_one_val(&self) -> bool {
        *self == 1
    }
    fn is_zero_val(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn gcd_val(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
    fn neg_val(&self) -> Self {
        -self
    }
    /// `self * a - b * c`
    fn mul_sub(&self, a: &Self, b: &Self, c: &Self) -> Option<Self> {
        self.checked_mul(*a)?.checked_sub(b.checked_mul(*c)?)
    }
}

impl ExactInt for BigInt {
    fn zero_val() -> Self {
        BigInt::zero()
    }
    fn one_val() -> Self {
        BigInt::one()
    }
    fn is_one_val(&self) -> bool {
        self.is_one()
    }
    fn is_zero_val(&self) -> bool {
        self.is_zero()
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn gcd_val(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
    fn neg_val(&self) -> Self {
        -self
    }
    fn mul_sub(&self, a: &Self, b: &Self, c: &Self) -> Option<Self> {
        Some(self * a - b * c)
    }
}

/// Rank by fraction-free elimination with primitive-part reduction.
fn fraction_free_rank<T: ExactInt>(mut a: Vec<Vec<T>>, cols: usize) -> Option<usize> {
    let rows = a.len();
    let mut r = 0;
    let mut support = Vec::with_capacity(cols);
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero_val()) else {
            continue;
        };
        a.swap(r, piv);
        make_primitive(&mut a[r][c..]);
        support.clear();
        support.extend((c..cols).filter(|&j| !a[r][j].is_zero_val()));
        let (head, tail) = a.split_at_mut(r + 1);
        let prow = &head[r];
        let pv = &prow[c];
        for row in tail.iter_mut() {
            if row[c].is_zero_val() {
                continue;
            }
            let g = pv.gcd_val(&row[c]);
            let pa = pv.div_exact(&g);
            let fa = row[c].div_exact(&g);
            if pa.is_unit() {
                // row <- row - (fa / pa) * prow on the pivot support only
                let f = if pa.is_one_val() { fa } else { fa.neg_val() };
                let one = T::one_val();
                for &j in &support {
                    let v = row[j].mul_sub(&one, &f, &prow[j])?;
                    row[j] = v;
                }
            } else {
                for j in c..cols {
                    let v = row[j].mul_sub(&pa, &fa, &prow[j])?;
                    row[j] = v;
                }
                make_primitive(&mut row[c..]);
            }
            debug_assert!(row[c].is_zero_val());
        }
        r += 1;
    }
    Some(r)
}

fn make_primitive<T: ExactInt>(row: &mut [T]) {
    let mut g = T::zero_val();
    for v in row.iter() {
        if !v.is_zero_val() {
            g = g.gcd_val(v);
            if g.is_unit() {
                return;
            }
        }
    }
    if g.is_zero_val() {
        return;
    }
    for v in row.iter_mut() {
        if !v.is_zero_val() {
            *v = v.div_exact(&g);
        }
    }
}
