//! Homogeneous forms in `x_0..x_n` and graded matrices between sums of
//! line bundles on `P^n`.
//!
//! A [`GradedMatrix`] from `⊕ O(e_j)` to `⊕ O(f_i)` carries in slot
//! `(i, j)` a form of degree exactly `f_i - e_j`. Slots with negative
//! prescribed degree hold the zero form, since `Hom(O(e), O(f)) = 0` for
//! `f < e`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::{Field, FieldElement};

/// Exponent vector of a monomial in `x_0..x_n`.
///
/// Ordered degree-lexicographically with `x_0 > x_1 > … > x_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Monomial {
        Monomial { exps }
    }

    pub fn one(n: usize) -> Monomial {
        Monomial { exps: vec![0; n + 1] }
    }

    pub fn var(n: usize, i: usize) -> Monomial {
        let mut exps = vec![0; n + 1];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> i64 {
        self.exps.iter().map(|&e| e as i64).sum()
    }

    /// Ambient dimension `n` (one less than the number of variables).
    pub fn ambient(&self) -> usize {
        self.exps.len() - 1
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Monomials of degree `d` in `n + 1` variables, greatest first.
/// Empty for `d < 0`.
pub fn monomial_basis(n: usize, d: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    if d < 0 {
        return out;
    }
    let mut cur = vec![0u32; n + 1];
    fill_basis(&mut cur, 0, d as u32, &mut out);
    out
}

fn fill_basis(cur: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<Monomial>) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(Monomial::new(cur.clone()));
        return;
    }
    for e in (0..=left).rev() {
        cur[pos] = e;
        fill_basis(cur, pos + 1, left - e, out);
    }
    cur[pos] = 0;
}

/// `dim S_d = C(d + n, n)` for `d >= 0`, zero otherwise.
pub fn forms_dim(n: usize, d: i64) -> usize {
    if d < 0 {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 1..=n as u128 {
        r = r * (d as u128 + i) / i;
    }
    r as usize
}

/// A homogeneous form with a recorded degree. The zero form keeps its
/// degree, which may be negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogPoly {
    n: usize,
    degree: i64,
    field: Field,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl HomogPoly {
    pub fn zero(n: usize, degree: i64, field: Field) -> HomogPoly {
        HomogPoly { n, degree, field, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: FieldElement) -> HomogPoly {
        let field = c.field();
        let mut p = HomogPoly::zero(n, 0, field);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(n), c);
        }
        p
    }

    pub fn var(n: usize, i: usize, field: Field) -> HomogPoly {
        HomogPoly::term(Monomial::var(n, i), field.one())
    }

    pub fn term(m: Monomial, c: FieldElement) -> HomogPoly {
        let mut p = HomogPoly::zero(m.ambient(), m.degree(), c.field());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a form from `(monomial, coefficient)` pairs, summing repeats.
    /// Every monomial must have `n + 1` variables and total degree `degree`.
    pub fn from_terms<I>(n: usize, degree: i64, field: Field, terms: I) -> Result<HomogPoly>
    where
        I: IntoIterator<Item = (Monomial, FieldElement)>,
    {
        let mut p = HomogPoly::zero(n, degree, field);
        for (m, c) in terms {
            if m.exps.len() != n + 1 {
                return Err(Error::DimensionMismatch { expected: n, found: m.ambient() });
            }
            if m.degree() != degree {
                return Err(Error::NotHomogeneous(degree));
            }
            if c.field() != field {
                return Err(Error::FieldMismatch(
                    format!("{field}"),
                    format!("{}", c.field()),
                ));
            }
            p.add_term(m, &c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: &FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = &*v + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    /// The form with coordinates `coeffs` in the [`monomial_basis`] of degree `degree`.
    pub fn from_coefficients(n: usize, degree: i64, field: Field, coeffs: &[FieldElement]) -> Result<HomogPoly> {
        let basis = monomial_basis(n, degree);
        if basis.len() != coeffs.len() {
            return Err(Error::DimensionMismatch { expected: basis.len(), found: coeffs.len() });
        }
        HomogPoly::from_terms(n, degree, field, basis.into_iter().zip(coeffs.iter().cloned()))
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms, greatest monomial first.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElement {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Coefficient of the constant monomial; meaningful for degree 0.
    pub fn constant_term(&self) -> FieldElement {
        self.coeff(&Monomial::one(self.n))
    }

    /// Coefficients of `x_0..x_n` for a linear form.
    pub fn linear_coefficients(&self) -> Vec<FieldElement> {
        (0..=self.n).map(|i| self.coeff(&Monomial::var(self.n, i))).collect()
    }

    /// The same zero form re-labelled with another degree. Non-zero forms
    /// are returned unchanged.
    pub fn relabel_zero(mut self, degree: i64) -> HomogPoly {
        if self.terms.is_empty() {
            self.degree = degree;
        }
        self
    }

    pub fn checked_add(&self, other: &HomogPoly) -> Result<HomogPoly> {
        self.compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::NotHomogeneous(self.degree));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> HomogPoly {
        HomogPoly {
            n: self.n,
            degree: self.degree,
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn checked_sub(&self, other: &HomogPoly) -> Result<HomogPoly> {
        self.checked_add(&other.neg())
    }

    pub fn scale(&self, c: &FieldElement) -> HomogPoly {
        let mut out = HomogPoly::zero(self.n, self.degree, self.field);
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), v * c);
        }
        out
    }

    pub fn checked_mul(&self, other: &HomogPoly) -> Result<HomogPoly> {
        self.compatible(other)?;
        let mut out = HomogPoly::zero(self.n, self.degree + other.degree, self.field);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        Ok(out)
    }

    fn compatible(&self, other: &HomogPoly) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                format!("{}", self.field),
                format!("{}", other.field),
            ));
        }
        Ok(())
    }
}

/// `⊕_j O(e_j)` on `P^n`. The empty list is the zero sheaf.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeSheaf {
    n: usize,
    twists: Vec<i64>,
}

impl FreeSheaf {
    pub fn new(n: usize, twists: Vec<i64>) -> FreeSheaf {
        FreeSheaf { n, twists }
    }

    pub fn zero(n: usize) -> FreeSheaf {
        FreeSheaf { n, twists: Vec::new() }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn is_zero(&self) -> bool {
        self.twists.is_empty()
    }

    /// `Hom(-, ω)` with `ω = O(-n-1)`: each twist `e` becomes `-n-1-e`.
    pub fn dual(&self) -> FreeSheaf {
        let w = -(self.n as i64) - 1;
        FreeSheaf { n: self.n, twists: self.twists.iter().map(|e| w - e).collect() }
    }

    /// Tensor with `O(a)`.
    pub fn twisted(&self, a: i64) -> FreeSheaf {
        FreeSheaf { n: self.n, twists: self.twists.iter().map(|e| e + a).collect() }
    }

    pub fn direct_sum(&self, other: &FreeSheaf) -> FreeSheaf {
        let mut twists = self.twists.clone();
        twists.extend_from_slice(&other.twists);
        FreeSheaf { n: self.n, twists }
    }

    /// `dim H^0` of the degree-`t` part of the graded module `⊕ S(e_j)`.
    pub fn sections_dim(&self, t: i64) -> usize {
        self.twists.iter().map(|e| forms_dim(self.n, t + e)).sum()
    }

    pub fn max_abs_twist(&self) -> i64 {
        self.twists.iter().map(|e| e.abs()).max().unwrap_or(0)
    }
}

/// A morphism `⊕_j O(e_j) → ⊕_i O(f_i)`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMatrix {
    source: FreeSheaf,
    target: FreeSheaf,
    field: Field,
    entries: Vec<HomogPoly>,
}

impl GradedMatrix {
    /// Validates shape, ambient dimension, field and every entry degree.
    /// Zero entries are re-labelled with their prescribed degree.
    pub fn new(
        source: FreeSheaf,
        target: FreeSheaf,
        field: Field,
        rows: Vec<Vec<HomogPoly>>,
    ) -> Result<GradedMatrix> {
        if source.n != target.n {
            return Err(Error::DimensionMismatch { expected: target.n, found: source.n });
        }
        if rows.len() != target.rank() {
            return Err(Error::Shape(format!(
                "{} rows given for a target of rank {}",
                rows.len(),
                target.rank()
            )));
        }
        let mut entries = Vec::with_capacity(source.rank() * target.rank());
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != source.rank() {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries for a source of rank {}",
                    row.len(),
                    source.rank()
                )));
            }
            for (j, p) in row.into_iter().enumerate() {
                let expected = target.twists[i] - source.twists[j];
                if p.n != source.n {
                    return Err(Error::DimensionMismatch { expected: source.n, found: p.n });
                }
                if p.field != field {
                    return Err(Error::FieldMismatch(format!("{field}"), format!("{}", p.field)));
                }
                if !p.is_zero() && p.degree != expected {
                    return Err(Error::EntryDegree { row: i, col: j, expected, found: p.degree });
                }
                entries.push(p.relabel_zero(expected));
            }
        }
        Ok(GradedMatrix { source, target, field, entries })
    }

    pub fn zero(source: FreeSheaf, target: FreeSheaf, field: Field) -> GradedMatrix {
        let mut entries = Vec::with_capacity(source.rank() * target.rank());
        for f in &target.twists {
            for e in &source.twists {
                entries.push(HomogPoly::zero(source.n, f - e, field));
            }
        }
        GradedMatrix { source, target, field, entries }
    }

    pub fn identity(sheaf: &FreeSheaf, field: Field) -> GradedMatrix {
        let mut m = GradedMatrix::zero(sheaf.clone(), sheaf.clone(), field);
        for i in 0..sheaf.rank() {
            m.entries[i * sheaf.rank() + i] = HomogPoly::constant(sheaf.n, field.one());
        }
        m
    }

    pub fn source(&self) -> &FreeSheaf {
        &self.source
    }

    pub fn target(&self) -> &FreeSheaf {
        &self.target
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.source.n
    }

    pub fn rows(&self) -> usize {
        self.target.rank()
    }

    pub fn cols(&self) -> usize {
        self.source.rank()
    }

    pub fn entry(&self, i: usize, j: usize) -> &HomogPoly {
        &self.entries[i * self.cols() + j]
    }

    /// Prescribed degree `f_i - e_j` of slot `(i, j)`.
    pub fn slot_degree(&self, i: usize, j: usize) -> i64 {
        self.target.twists[i] - self.source.twists[j]
    }

    /// Replaces one entry, enforcing the slot degree.
    pub fn set_entry(&mut self, i: usize, j: usize, p: HomogPoly) -> Result<()> {
        let expected = self.slot_degree(i, j);
        if p.n != self.ambient() || p.field != self.field {
            return Err(Error::Shape(format!("entry ({i}, {j}) from a different ring")));
        }
        if !p.is_zero() && p.degree != expected {
            return Err(Error::EntryDegree { row: i, col: j, expected, found: p.degree });
        }
        let c = self.cols();
        self.entries[i * c + j] = p.relabel_zero(expected);
        Ok(())
    }

    pub fn row_entries(&self, i: usize) -> &[HomogPoly] {
        let c = self.cols();
        &self.entries[i * c..(i + 1) * c]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(HomogPoly::is_zero)
    }

    /// `self ∘ other`, i.e. `other` first.
    pub fn compose(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        if self.source != other.target {
            return Err(Error::TwistMismatch(format!(
                "cannot compose: source {:?} vs target {:?}",
                self.source.twists, other.target.twists
            )));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{}", self.field), format!("{}", other.field)));
        }
        let mut out = GradedMatrix::zero(other.source.clone(), self.target.clone(), self.field);
        let (r, c, k) = (self.rows(), other.cols(), self.cols());
        for i in 0..r {
            for j in 0..c {
                let mut acc = out.entries[i * c + j].clone();
                for l in 0..k {
                    let a = self.entry(i, l);
                    let b = other.entry(l, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.checked_add(&a.checked_mul(b)?)?;
                }
                out.entries[i * c + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::TwistMismatch("cannot add morphisms of different shape".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(GradedMatrix { entries, ..self.clone() })
    }

    pub fn scale(&self, c: &FieldElement) -> GradedMatrix {
        GradedMatrix {
            entries: self.entries.iter().map(|p| p.scale(c)).collect(),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> GradedMatrix {
        self.scale(&-&self.field.one())
    }

    /// `Hom(-, ω)` applied to the morphism: `G^∨ → F^∨` with transposed
    /// entries. Degrees survive because `(-n-1-e_j) - (-n-1-f_i) = f_i - e_j`.
    pub fn dual_hom(&self) -> GradedMatrix {
        let (r, c) = (self.rows(), self.cols());
        let mut entries = Vec::with_capacity(r * c);
        for j in 0..c {
            for i in 0..r {
                entries.push(self.entry(i, j).clone());
            }
        }
        GradedMatrix {
            source: self.target.dual(),
            target: self.source.dual(),
            field: self.field,
            entries,
        }
    }

    /// The same morphism between both sheaves twisted by `O(a)`.
    pub fn twisted(&self, a: i64) -> GradedMatrix {
        GradedMatrix {
            source: self.source.twisted(a),
            target: self.target.twisted(a),
            ..self.clone()
        }
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        if self.ambient() != other.ambient() || self.field != other.field {
            return Err(Error::Shape("direct sum of morphisms over different rings".into()));
        }
        let source = self.source.direct_sum(&other.source);
        let target = self.target.direct_sum(&other.target);
        let mut out = GradedMatrix::zero(source, target, self.field);
        let (r1, c1) = (self.rows(), self.cols());
        for i in 0..r1 {
            for j in 0..c1 {
                out.set_entry(i, j, self.entry(i, j).clone())?;
            }
        }
        for i in 0..other.rows() {
            for j in 0..other.cols() {
                out.set_entry(r1 + i, c1 + j, other.entry(i, j).clone())?;
            }
        }
        Ok(out)
    }

    /// Constant part: the matrix of degree-0 slots (equal twists), with every
    /// other slot read as zero.
    pub fn degree_zero_part(&self) -> DenseMatrix {
        let (r, c) = (self.rows(), self.cols());
        let mut m = DenseMatrix::zeros(r, c, self.field);
        for i in 0..r {
            for j in 0..c {
                if self.slot_degree(i, j) == 0 {
                    m.set(i, j, self.entry(i, j).constant_term());
                }
            }
        }
        m
    }

    /// A constant morphism between equal-twist slots from a plain matrix.
    /// Entries of `m` at slots of non-zero degree must vanish.
    pub fn from_degree_zero(
        source: FreeSheaf,
        target: FreeSheaf,
        m: &DenseMatrix,
    ) -> Result<GradedMatrix> {
        if m.rows() != target.rank() || m.cols() != source.rank() {
            return Err(Error::Shape("constant block has the wrong size".into()));
        }
        let n = source.n;
        let mut out = GradedMatrix::zero(source, target, m.field());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let v = m.get(i, j);
                if v.is_zero() {
                    continue;
                }
                out.set_entry(i, j, HomogPoly::constant(n, v.clone()))?;
            }
        }
        Ok(out)
    }

    /// The map `⊕_j S_{t+e_j} → ⊕_i S_{t+f_i}` on degree-`t` sections.
    ///
    /// Rows and columns follow the twist lists, each block in
    /// [`monomial_basis`] order.
    pub fn sections_matrix(&self, t: i64) -> DenseMatrix {
        let n = self.ambient();
        let mut row_offsets = Vec::with_capacity(self.rows());
        let mut row_index: Vec<BTreeMap<Monomial, usize>> = Vec::with_capacity(self.rows());
        let mut rows = 0;
        for f in &self.target.twists {
            row_offsets.push(rows);
            let basis = monomial_basis(n, t + f);
            rows += basis.len();
            row_index.push(basis.into_iter().enumerate().map(|(k, m)| (m, k)).collect());
        }
        let cols = self.source.sections_dim(t);
        let mut out = DenseMatrix::zeros(rows, cols, self.field);
        let mut col = 0;
        for (j, e) in self.source.twists.iter().enumerate() {
            for mu in monomial_basis(n, t + e) {
                for i in 0..self.rows() {
                    for (nu, c) in self.entry(i, j).terms() {
                        let k = row_index[i][&nu.mul(&mu)];
                        out.set(row_offsets[i] + k, col, c.clone());
                    }
                }
                col += 1;
            }
        }
        out
    }
}
