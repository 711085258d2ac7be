//! Small named complexes used throughout the tests and the CLI.

use alloc::vec;
use alloc::vec::Vec;

use crate::monad::Monad;
use crate::polymat::{FreeSheaf, GradedMatrix, HomogPoly};
use crate::scalar::Field;

/// Size-`j` subsets of `0..r` in lexicographic order.
fn subsets(r: usize, j: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, r: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for s in start..r {
            cur.push(s);
            go(s + 1, r, j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, r, j, &mut Vec::new(), &mut out);
    out
}

/// Koszul complex of `x_0, …, x_{r-1}` on `P^n`, with `C^{-j} = ∧^j ⊗ O(-j)`
/// and `e_I ↦ Σ_s (-1)^s x_{i_s} e_{I \ i_s}`. Cohomology at 0, codimension
/// `min(r, n)`.
///
/// # Panics
/// If `r == 0` or `r > n + 1`.
pub fn koszul(n: usize, r: usize, field: Field) -> Monad {
    assert!(r >= 1 && r <= n + 1, "koszul needs 1 <= r <= n + 1");
    let lo = -(r as i64);
    let bases: Vec<Vec<Vec<usize>>> = (0..=r).rev().map(|j| subsets(r, j)).collect();
    let terms: Vec<FreeSheaf> = (0..=r)
        .rev()
        .map(|j| FreeSheaf::new(n, vec![-(j as i64); bases[r - j].len()]))
        .collect();
    let mut diffs = Vec::with_capacity(r);
    for k in 0..r {
        let (src, tgt) = (&bases[k], &bases[k + 1]);
        let mut d = GradedMatrix::zero(terms[k].clone(), terms[k + 1].clone(), field);
        for (col, set) in src.iter().enumerate() {
            for s in 0..set.len() {
                let mut rest = set.clone();
                let v = rest.remove(s);
                let row = tgt.iter().position(|t| *t == rest).expect("face present");
                let x = HomogPoly::var(n, v, field);
                let entry = if s % 2 == 0 { x } else { x.neg() };
                d.set_entry(row, col, entry).expect("degree one slot");
            }
        }
        diffs.push(d);
    }
    Monad::new(n, field, lo, terms, diffs, r.min(n), 0).expect("koszul complex is well formed")
}

/// Resolution of `O_L(a)` for the line `L = {x_0 = … = x_{n-2} = 0}`.
pub fn line_resolution(n: usize, a: i64, field: Field) -> Monad {
    assert!(n >= 2, "a line needs n >= 2");
    koszul(n, n - 1, field).twisted(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_shapes() {
        let k = koszul(3, 3, Field::Rational);
        let ranks: Vec<usize> = k.terms().iter().map(FreeSheaf::rank).collect();
        assert_eq!(ranks, vec![1, 3, 3, 1]);
        assert!(k.is_valid());
        assert_eq!(k.lo(), -3);
        assert!(koszul(2, 3, Field::prime(7).unwrap()).is_valid());
    }

    #[test]
    fn koszul_is_exact_inside() {
        let k = koszul(3, 2, Field::Rational);
        assert_eq!(k.exactness_check(&[-2, -1], -3..=5), vec![true, true]);
        let full = koszul(2, 3, Field::Rational);
        assert_eq!(full.exactness_check(&[-3, -2, -1], -3..=5), vec![true, true, true]);
    }
}
