//! Bounded complexes of free sheaves on `P^n` ("monads"), their dual
//! complexes, minimality, and degreewise Hilbert functions.
//!
//! A [`Monad`] stores the terms `C^lo … C^hi`, the differentials between
//! consecutive terms, the declared codimension `c` of the support of its
//! cohomology sheaf, and the index at which that sheaf sits.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::hilbert::{euler_poly, interpolate, IntPoly};
use crate::polymat::{FreeSheaf, GradedMatrix, HomogPoly};
use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monad {
    n: usize,
    field: Field,
    lo: i64,
    terms: Vec<FreeSheaf>,
    diffs: Vec<GradedMatrix>,
    codim: usize,
    cohomology_at: i64,
}

/// A defect reported by [`Monad::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `d_{index+1} ∘ d_index` is not zero.
    NotComplex { index: i64 },
    /// An entry of `d_index` has the wrong degree.
    Inhomogeneous { index: i64, row: usize, col: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotComplex { index } => write!(f, "d[{}] * d[{index}] != 0", index + 1),
            Violation::Inhomogeneous { index, row, col } => {
                write!(f, "d[{index}] entry ({row}, {col}) has the wrong degree")
            }
        }
    }
}

impl Violation {
    pub fn code(&self) -> &'static str {
        match self {
            Violation::NotComplex { .. } => "not_complex",
            Violation::Inhomogeneous { .. } => "inhomogeneous",
        }
    }
}

impl Monad {
    /// Assembles a monad. `diffs[k]` maps `terms[k]` to `terms[k + 1]`.
    pub fn new(
        n: usize,
        field: Field,
        lo: i64,
        terms: Vec<FreeSheaf>,
        diffs: Vec<GradedMatrix>,
        codim: usize,
        cohomology_at: i64,
    ) -> Result<Monad> {
        let bad = |s: String| Err(Error::InvalidMonad(s));
        if terms.is_empty() {
            return bad("a monad needs at least one term".into());
        }
        if diffs.len() + 1 != terms.len() {
            return bad(format!("{} terms need {} differentials, got {}", terms.len(), terms.len() - 1, diffs.len()));
        }
        if codim < 1 || codim > n {
            return bad(format!("codimension {codim} outside 1..={n}"));
        }
        if let Some(t) = terms.iter().find(|t| t.ambient() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: t.ambient() });
        }
        for (k, d) in diffs.iter().enumerate() {
            let i = lo + k as i64;
            if d.field() != field {
                return Err(Error::FieldMismatch(format!("{field}"), format!("{}", d.field())));
            }
            if d.source() != &terms[k] || d.target() != &terms[k + 1] {
                return bad(format!("differential {i} does not map C^{i} to C^{}", i + 1));
            }
        }
        Ok(Monad { n, field, lo, terms, diffs, codim, cohomology_at })
    }

    /// All differentials zero.
    pub fn with_zero_diffs(
        n: usize,
        field: Field,
        lo: i64,
        terms: Vec<FreeSheaf>,
        codim: usize,
        cohomology_at: i64,
    ) -> Result<Monad> {
        let diffs = terms
            .windows(2)
            .map(|w| GradedMatrix::zero(w[0].clone(), w[1].clone(), field))
            .collect();
        Monad::new(n, field, lo, terms, diffs, codim, cohomology_at)
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    /// Dimension `d = n - c` of the support.
    pub fn support_dim(&self) -> usize {
        self.n - self.codim
    }

    pub fn cohomology_at(&self) -> i64 {
        self.cohomology_at
    }

    pub fn indices(&self) -> RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    /// `C^i`, or `None` outside `lo..=hi`.
    pub fn term(&self, i: i64) -> Option<&FreeSheaf> {
        let k = i.checked_sub(self.lo)?;
        usize::try_from(k).ok().and_then(|k| self.terms.get(k))
    }

    pub fn terms(&self) -> &[FreeSheaf] {
        &self.terms
    }

    /// `d_i : C^i → C^{i+1}`, or `None` if either end is missing.
    pub fn diff(&self, i: i64) -> Option<&GradedMatrix> {
        let k = i.checked_sub(self.lo)?;
        usize::try_from(k).ok().and_then(|k| self.diffs.get(k))
    }

    pub fn diffs(&self) -> &[GradedMatrix] {
        &self.diffs
    }

    pub fn max_abs_twist(&self) -> i64 {
        self.terms.iter().map(FreeSheaf::max_abs_twist).max().unwrap_or(0)
    }

    /// Replaces the differentials, keeping everything else.
    pub fn with_diffs(&self, diffs: Vec<GradedMatrix>) -> Result<Monad> {
        Monad::new(self.n, self.field, self.lo, self.terms.clone(), diffs, self.codim, self.cohomology_at)
    }

    /// Every index where `d∘d ≠ 0` or an entry has the wrong degree.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (k, d) in self.diffs.iter().enumerate() {
            let index = self.lo + k as i64;
            for row in 0..d.rows() {
                for col in 0..d.cols() {
                    let p = d.entry(row, col);
                    if p.degree() != d.slot_degree(row, col) || (d.slot_degree(row, col) < 0 && !p.is_zero()) {
                        out.push(Violation::Inhomogeneous { index, row, col });
                    }
                }
            }
        }
        for k in 0..self.diffs.len().saturating_sub(1) {
            let comp = self.diffs[k + 1].compose(&self.diffs[k]);
            if !comp.is_ok_and(|c| c.is_zero()) {
                out.push(Violation::NotComplex { index: self.lo + k as i64 });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// The dual complex `C_D^i = Hom(C^{-i-c}, ω)` with transposed
    /// differentials `d_D^i = d_{-i-c-1}^∨`. The cohomology index `k`
    /// becomes `-k`; with the usual normalisation `k = 0` it stays at 0.
    /// For a complex too short to be exact off `k`, `-k` may fall outside
    /// the new index range, where the complex is zero.
    pub fn dualize(&self) -> Result<Monad> {
        if let Some(v) = self.validate().first() {
            return Err(Error::InvalidMonad(format!("{v}")));
        }
        let c = self.codim as i64;
        let lo = -self.hi() - c;
        let hi = -self.lo - c;
        let terms = (lo..=hi)
            .map(|i| self.term(-i - c).expect("index in range").dual())
            .collect();
        let diffs = (lo..hi)
            .map(|i| self.diff(-i - c - 1).expect("index in range").dual_hom())
            .collect();
        Monad::new(self.n, self.field, lo, terms, diffs, self.codim, -self.cohomology_at)
    }

    /// Tensor every term with `O(a)`.
    pub fn twisted(&self, a: i64) -> Monad {
        Monad {
            terms: self.terms.iter().map(|t| t.twisted(a)).collect(),
            diffs: self.diffs.iter().map(|d| d.twisted(a)).collect(),
            ..self.clone()
        }
    }

    /// Direct sum with the acyclic piece `O(twist) --1--> O(twist)` placed
    /// at positions `index` and `index + 1`.
    pub fn with_acyclic_summand(&self, index: i64, twist: i64) -> Result<Monad> {
        if index < self.lo || index + 1 > self.hi() {
            return Err(Error::OutOfRange(format!(
                "acyclic summand at {index}..{} outside {}..={}",
                index + 1,
                self.lo,
                self.hi()
            )));
        }
        let extra = FreeSheaf::new(self.n, alloc::vec![twist]);
        let terms: Vec<FreeSheaf> = self
            .indices()
            .map(|i| {
                let t = self.term(i).unwrap();
                if i == index || i == index + 1 {
                    t.direct_sum(&extra)
                } else {
                    t.clone()
                }
            })
            .collect();
        let mut diffs = Vec::with_capacity(self.diffs.len());
        for (k, d) in self.diffs.iter().enumerate() {
            let i = self.lo + k as i64;
            let src = &terms[k];
            let tgt = &terms[k + 1];
            let mut nd = GradedMatrix::zero(src.clone(), tgt.clone(), self.field);
            for r in 0..d.rows() {
                for c in 0..d.cols() {
                    nd.set_entry(r, c, d.entry(r, c).clone())?;
                }
            }
            if i == index {
                nd.set_entry(d.rows(), d.cols(), HomogPoly::constant(self.n, self.field.one()))?;
            }
            diffs.push(nd);
        }
        Monad::new(self.n, self.field, self.lo, terms, diffs, self.codim, self.cohomology_at)
    }

    /// `dim ker H^0(d_pos(t)) - rank H^0(d_{pos-1}(t))`, missing maps read as zero.
    pub fn cohomology_dim_at(&self, pos: i64, t: i64) -> usize {
        let Some(term) = self.term(pos) else {
            return 0;
        };
        let dim = term.sections_dim(t);
        let kernel = match self.diff(pos) {
            Some(d) => dim - d.sections_matrix(t).rank(),
            None => dim,
        };
        let image = match pos.checked_sub(1).and_then(|p| self.diff(p)) {
            Some(d) => d.sections_matrix(t).rank(),
            None => 0,
        };
        kernel - image
    }

    pub fn cohomology_hilbert_function(&self, pos: i64, ts: RangeInclusive<i64>) -> Vec<usize> {
        ts.map(|t| self.cohomology_dim_at(pos, t)).collect()
    }

    /// Twist window used by [`Monad::hilbert_poly_of_cohomology`]:
    /// `[T, T + n + 1]` with `T = n + 1 + max |twist|`, shifted up by
    /// `n + 2` for each retry.
    pub fn hilbert_window(&self, retry: usize) -> RangeInclusive<i64> {
        let n = self.n as i64;
        let t = n + 1 + self.max_abs_twist() + retry as i64 * (n + 2);
        t..=t + n + 1
    }

    /// Hilbert polynomial of the cohomology sheaf, read off a high twist
    /// window and cross-checked against [`euler_poly`].
    pub fn hilbert_poly_of_cohomology(&self) -> Result<IntPoly> {
        self.hilbert_poly_of_cohomology_with(|m, pos, ts| m.cohomology_hilbert_function(pos, ts))
    }

    /// As [`Monad::hilbert_poly_of_cohomology`] with a caller-supplied
    /// evaluator for the Hilbert function (e.g. a parallel one).
    pub fn hilbert_poly_of_cohomology_with<F>(&self, mut hf: F) -> Result<IntPoly>
    where
        F: FnMut(&Monad, i64, RangeInclusive<i64>) -> Vec<usize>,
    {
        let expected = euler_poly(self);
        let mut last = String::new();
        for retry in 0..2 {
            let window = self.hilbert_window(retry);
            let t0 = *window.start();
            let values: Vec<i64> = hf(self, self.cohomology_at, window.clone())
                .into_iter()
                .map(|v| v as i64)
                .collect();
            match interpolate(&values, t0, self.support_dim()) {
                Ok(p) if p == expected => return Ok(p),
                Ok(p) => {
                    last = format!(
                        "window {}..={} gives {p}, Euler characteristic gives {expected}",
                        window.start(),
                        window.end()
                    )
                }
                Err(e) => last = format!("window {}..={}: {e}", window.start(), window.end()),
            }
        }
        Err(Error::WindowDisagreement(last))
    }

    /// Whether the cohomology vanishes at each position on the whole
    /// window. A finite check, not a proof of exactness.
    pub fn exactness_check(&self, positions: &[i64], ts: RangeInclusive<i64>) -> Vec<bool> {
        positions
            .iter()
            .map(|&p| ts.clone().all(|t| self.cohomology_dim_at(p, t) == 0))
            .collect()
    }

    /// True iff no differential has a non-zero constant entry between
    /// equal twists.
    pub fn minimality_check(&self) -> bool {
        self.diffs.iter().all(|d| {
            (0..d.rows()).all(|r| (0..d.cols()).all(|c| d.slot_degree(r, c) != 0 || d.entry(r, c).is_zero()))
        })
    }
}

/// Table of `h^{i+p}(F ⊗ Ω^p(p))` for `0 <= p <= n` and `-p <= i <= n - p`,
/// for a sheaf with support of dimension `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohTable {
    n: usize,
    d: usize,
    entries: BTreeMap<(i64, usize), u64>,
}

impl CohTable {
    /// Builds a table from `(i, p, h)` triples. Entries must lie in the
    /// meaningful rectangle and vanish for cohomological degree `i + p > d`.
    pub fn new<I>(n: usize, d: usize, entries: I) -> Result<CohTable>
    where
        I: IntoIterator<Item = (i64, usize, u64)>,
    {
        if d > n {
            return Err(Error::OutOfRange(format!("support dimension {d} on P^{n}")));
        }
        let mut map = BTreeMap::new();
        for (i, p, h) in entries {
            if p > n || i < -(p as i64) || i > n as i64 - p as i64 {
                return Err(Error::OutOfRange(format!("table entry ({i}, {p}) on P^{n}")));
            }
            if h != 0 && i + p as i64 > d as i64 {
                return Err(Error::OutOfRange(format!(
                    "h^{} non-zero for a sheaf of dimension {d}",
                    i + p as i64
                )));
            }
            if h != 0 {
                map.insert((i, p), h);
            }
        }
        Ok(CohTable { n, d, entries: map })
    }

    pub fn zero(n: usize, d: usize) -> CohTable {
        CohTable { n, d, entries: BTreeMap::new() }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn support_dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: i64, p: usize) -> u64 {
        self.entries.get(&(i, p)).copied().unwrap_or(0)
    }

    /// Non-zero entries as `(i, p, h)`, sorted by `(i, p)`.
    pub fn nonzero(&self) -> impl Iterator<Item = (i64, usize, u64)> + '_ {
        self.entries.iter().map(|(&(i, p), &h)| (i, p, h))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Terms `C^i = ⊕_p h[i][p] · O(-p)` for `i = -n..=n`, twists descending.
pub fn beilinson_shape(table: &CohTable) -> Vec<(i64, FreeSheaf)> {
    let n = table.n as i64;
    (-n..=n)
        .map(|i| {
            let twists = (0..=table.n)
                .flat_map(|p| core::iter::repeat_n(-(p as i64), table.get(i, p) as usize))
                .collect();
            (i, FreeSheaf::new(table.n, twists))
        })
        .collect()
}

/// Index map of the dual table: entry `(i, p)` is read from `(-i-c, n-p)`.
pub fn dual_table_index(n: usize, d: usize, i: i64, p: usize) -> (i64, usize) {
    let c = (n - d) as i64;
    (-i - c, n - p)
}

/// The table of `F^D(1)` from that of `F`:
/// `h^{i+p}(F^D ⊗ Ω^p(p+1)) = h^{d-i-p}(F ⊗ Ω^{n-p}(n-p))`.
pub fn dual_beilinson_table(table: &CohTable) -> CohTable {
    let (n, d) = (table.n, table.d);
    let entries = table
        .nonzero()
        .map(|(i, p, h)| {
            // (i, p) = dual_table_index(i', p') is an involution
            let (ni, np) = dual_table_index(n, d, i, p);
            ((ni, np), h)
        })
        .collect();
    CohTable { n, d, entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn koszul_validates() {
        let k = catalog::koszul(2, 2, Field::Rational);
        assert!(k.is_valid());
        assert_eq!(k.terms()[0].twists(), &[-2]);
        assert_eq!(k.terms()[1].twists(), &[-1, -1]);
        assert_eq!(k.terms()[2].twists(), &[0]);
    }

    #[test]
    fn sign_flip_breaks_complex() {
        let k = catalog::koszul(2, 2, Field::Rational);
        let mut d = k.diffs().to_vec();
        let flipped = d[0].entry(0, 0).neg();
        d[0].set_entry(0, 0, flipped).unwrap();
        let bad = k.with_diffs(d).unwrap();
        assert_eq!(bad.validate(), alloc::vec![Violation::NotComplex { index: -2 }]);
        assert!(bad.dualize().is_err());
    }

    #[test]
    fn zero_diffs_are_valid() {
        let m = Monad::with_zero_diffs(
            3,
            Field::Rational,
            -1,
            alloc::vec![FreeSheaf::new(3, alloc::vec![-1, 2]), FreeSheaf::new(3, alloc::vec![0])],
            1,
            0,
        )
        .unwrap();
        assert!(m.is_valid());
    }

    #[test]
    fn constructor_rejects_bad_shapes() {
        let t = FreeSheaf::new(2, alloc::vec![0]);
        assert!(Monad::new(2, Field::Rational, 0, alloc::vec![t.clone()], alloc::vec![], 3, 0).is_err());
        assert!(Monad::new(2, Field::Rational, 0, alloc::vec![t.clone()], alloc::vec![], 0, 0).is_err());
        let wrong = GradedMatrix::zero(FreeSheaf::new(2, alloc::vec![-1]), t.clone(), Field::Rational);
        assert!(Monad::new(2, Field::Rational, 0, alloc::vec![t.clone(), t], alloc::vec![wrong], 1, 0).is_err());
    }

    #[test]
    fn line_resolution_on_p2() {
        let m = catalog::line_resolution(2, 0, Field::Rational);
        assert_eq!(m.cohomology_hilbert_function(0, 0..=3), alloc::vec![1, 2, 3, 4]);
        assert_eq!(m.exactness_check(&[-1], 0..=6), alloc::vec![true]);
        assert_eq!(m.hilbert_poly_of_cohomology().unwrap(), IntPoly::from_i64(&[1, 1]));
        let d = m.dualize().unwrap();
        assert_eq!(d.lo(), -1);
        assert_eq!(d.term(-1).unwrap().twists(), &[-3]);
        assert_eq!(d.term(0).unwrap().twists(), &[-2]);
        assert_eq!(euler_poly(&d), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(d.hilbert_poly_of_cohomology().unwrap(), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(d.dualize().unwrap(), m);
    }

    #[test]
    fn non_exact_complex_is_rejected() {
        let m = Monad::with_zero_diffs(
            2,
            Field::Rational,
            -1,
            alloc::vec![FreeSheaf::new(2, alloc::vec![-1]), FreeSheaf::new(2, alloc::vec![0])],
            1,
            0,
        )
        .unwrap();
        assert!(matches!(m.hilbert_poly_of_cohomology(), Err(Error::WindowDisagreement(_))));
    }

    #[test]
    fn acyclic_summand_breaks_minimality_only() {
        let m = catalog::koszul(3, 2, Field::Rational);
        assert!(m.minimality_check());
        let a = m.with_acyclic_summand(-1, -1).unwrap();
        assert!(a.is_valid());
        assert!(!a.minimality_check());
        for pos in m.indices() {
            assert_eq!(
                a.cohomology_hilbert_function(pos, -2..=4),
                m.cohomology_hilbert_function(pos, -2..=4)
            );
        }
        assert!(m.with_acyclic_summand(0, 0).is_err());
    }

    #[test]
    fn beilinson_shapes() {
        let t = CohTable::new(2, 2, [(0, 0, 1)]).unwrap();
        let shape = beilinson_shape(&t);
        for (i, s) in &shape {
            if *i == 0 {
                assert_eq!(s.twists(), &[0]);
            } else {
                assert!(s.is_zero());
            }
        }
        let line = CohTable::new(2, 1, [(0, 0, 1), (-1, 1, 1)]).unwrap();
        let shape: BTreeMap<i64, FreeSheaf> = beilinson_shape(&line).into_iter().collect();
        assert_eq!(shape[&-1].twists(), &[-1]);
        assert_eq!(shape[&0].twists(), &[0]);
        assert!(shape[&1].is_zero());
        assert!(beilinson_shape(&CohTable::zero(3, 1)).iter().all(|(_, s)| s.is_zero()));
    }

    #[test]
    fn dual_table_line_on_p2() {
        let line = CohTable::new(2, 1, [(0, 0, 1), (-1, 1, 1)]).unwrap();
        let dual = dual_beilinson_table(&line);
        assert_eq!(dual.get(0, 0), 0);
        assert_eq!(dual.get(1, 0), 0);
        assert_eq!(dual_beilinson_table(&dual), line);
        assert!(dual_beilinson_table(&CohTable::zero(2, 1)).is_zero());
        for i in -2..=2 {
            for p in 0..=2 {
                let (a, b) = dual_table_index(2, 1, i, p);
                assert_eq!(dual_table_index(2, 1, a, b), (i, p));
            }
        }
    }

    #[test]
    fn table_rejects_out_of_range() {
        assert!(CohTable::new(2, 1, [(0, 3, 1)]).is_err());
        assert!(CohTable::new(2, 1, [(-2, 1, 1)]).is_err());
        assert!(CohTable::new(2, 1, [(1, 1, 1)]).is_err());
        assert!(CohTable::new(2, 3, []).is_err());
    }
}
