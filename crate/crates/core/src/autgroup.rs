//! The group `G = ∏_i Aut(C^i)` of a monad's terms and its action
//! `d_i ↦ g_{i+1} d_i g_i^{-1}`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::monad::Monad;
use crate::polymat::{FreeSheaf, GradedMatrix};
use crate::random::{self, ChaCha8Rng};
use crate::scalar::Field;

fn require_endo(g: &GradedMatrix) -> Result<()> {
    if g.source() != g.target() {
        return Err(Error::TwistMismatch(format!(
            "not an endomorphism: {:?} -> {:?}",
            g.source().twists(),
            g.target().twists()
        )));
    }
    Ok(())
}

/// Whether the constant part between equal twists is invertible.
///
/// Write `g = g_0 (1 + ν)` with `ν = g_0^{-1}(g - g_0)`. Every entry of `ν`
/// strictly raises the twist, so `ν^k = 0` once `k` exceeds the number of
/// distinct twists and `1 + ν` is always invertible.
pub fn is_automorphism(g: &GradedMatrix) -> Result<bool> {
    require_endo(g)?;
    Ok(g.degree_zero_part().inverse().is_some())
}

/// `ν` of [`is_automorphism`] together with `g_0^{-1}`.
fn split(g: &GradedMatrix) -> Result<(GradedMatrix, GradedMatrix)> {
    require_endo(g)?;
    let g0_inv = g.degree_zero_part().inverse().ok_or(Error::NotAutomorphism)?;
    let g0_inv = GradedMatrix::from_degree_zero(g.source().clone(), g.target().clone(), &g0_inv)?;
    let g0 = GradedMatrix::from_degree_zero(g.source().clone(), g.target().clone(), &g.degree_zero_part())?;
    let nu = g0_inv.compose(&g.checked_add(&g0.neg())?)?;
    Ok((nu, g0_inv))
}

/// Number of distinct twists: a bound on the nilpotency index of `ν`.
pub fn nilpotency_bound(sheaf: &FreeSheaf) -> usize {
    sheaf.twists().iter().collect::<BTreeSet<_>>().len()
}

/// `ν = g_0^{-1}(g - g_0)`, exposed for tests of nilpotency.
pub fn unipotent_part(g: &GradedMatrix) -> Result<GradedMatrix> {
    Ok(split(g)?.0)
}

/// `g^{-1} = (Σ_{j<k} (-ν)^j) g_0^{-1}`.
pub fn inverse(g: &GradedMatrix) -> Result<GradedMatrix> {
    let (nu, g0_inv) = split(g)?;
    let minus_nu = nu.neg();
    let id = GradedMatrix::identity(g.source(), g.field());
    let mut sum = id.clone();
    let mut power = id;
    for _ in 1..nilpotency_bound(g.source()) {
        power = power.compose(&minus_nu)?;
        if power.is_zero() {
            break;
        }
        sum = sum.checked_add(&power)?;
    }
    sum.compose(&g0_inv)
}

/// An element of `G`: one automorphism per term `C^lo … C^hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    lo: i64,
    blocks: Vec<GradedMatrix>,
}

impl GroupElement {
    pub fn new(lo: i64, blocks: Vec<GradedMatrix>) -> Result<GroupElement> {
        for (k, b) in blocks.iter().enumerate() {
            if !is_automorphism(b)? {
                return Err(Error::InvalidMonad(format!("block {} is not an automorphism", lo + k as i64)));
            }
        }
        Ok(GroupElement { lo, blocks })
    }

    pub fn identity(m: &Monad) -> GroupElement {
        GroupElement {
            lo: m.lo(),
            blocks: m.terms().iter().map(|t| GradedMatrix::identity(t, m.field())).collect(),
        }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.blocks.len() as i64 - 1
    }

    pub fn blocks(&self) -> &[GradedMatrix] {
        &self.blocks
    }

    pub fn block(&self, i: i64) -> Option<&GradedMatrix> {
        let k = usize::try_from(i.checked_sub(self.lo)?).ok()?;
        self.blocks.get(k)
    }

    fn matches(&self, m: &Monad) -> Result<()> {
        let ok = self.lo == m.lo()
            && self.blocks.len() == m.terms().len()
            && self.blocks.iter().zip(m.terms()).all(|(b, t)| b.source() == t);
        if ok {
            Ok(())
        } else {
            Err(Error::TwistMismatch("group element does not fit the monad's terms".into()))
        }
    }

    /// `(g·h)_i = g_i ∘ h_i`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.lo != other.lo || self.blocks.len() != other.blocks.len() {
            return Err(Error::TwistMismatch("group elements of different groups".into()));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.compose(b))
            .collect::<Result<_>>()?;
        Ok(GroupElement { lo: self.lo, blocks })
    }

    pub fn inverse(&self) -> Result<GroupElement> {
        let blocks = self.blocks.iter().map(inverse).collect::<Result<_>>()?;
        Ok(GroupElement { lo: self.lo, blocks })
    }

    /// `d_i ↦ g_{i+1} ∘ d_i ∘ g_i^{-1}`.
    pub fn act(&self, m: &Monad) -> Result<Monad> {
        self.matches(m)?;
        let inv: Vec<GradedMatrix> = self.blocks.iter().map(inverse).collect::<Result<_>>()?;
        let diffs = m
            .diffs()
            .iter()
            .enumerate()
            .map(|(k, d)| self.blocks[k + 1].compose(&d.compose(&inv[k])?))
            .collect::<Result<_>>()?;
        m.with_diffs(diffs)
    }

    /// The element of the dual group with block `(g_{-i-c}^∨)^{-1}` at `i`,
    /// so that `dualize(g·m) = g_D · dualize(m)`.
    pub fn induced_dual_element(&self, c: usize) -> Result<GroupElement> {
        let c = c as i64;
        let lo = -self.hi() - c;
        let hi = -self.lo - c;
        let blocks = (lo..=hi)
            .map(|i| inverse(&self.block(-i - c).expect("index in range").dual_hom()))
            .collect::<Result<_>>()?;
        Ok(GroupElement { lo, blocks })
    }

    /// A random element for the terms of `m`: invertible constant blocks
    /// between equal twists, positive-degree slots filled with forms kept
    /// at the given monomial density.
    pub fn random(rng: &mut ChaCha8Rng, m: &Monad, density: f64) -> GroupElement {
        let blocks = m.terms().iter().map(|t| random_automorphism(rng, t, m.field(), density)).collect();
        GroupElement { lo: m.lo(), blocks }
    }
}

pub fn random_automorphism(rng: &mut ChaCha8Rng, sheaf: &FreeSheaf, field: Field, density: f64) -> GradedMatrix {
    let k = sheaf.rank();
    let tw = sheaf.twists();
    let constant = loop {
        let mut c = DenseMatrix::zeros(k, k, field);
        for i in 0..k {
            for j in 0..k {
                if tw[i] == tw[j] {
                    c.set(i, j, random::scalar(rng, field));
                }
            }
        }
        if c.inverse().is_some() {
            break c;
        }
    };
    let mut g = GradedMatrix::from_degree_zero(sheaf.clone(), sheaf.clone(), &constant).expect("equal-twist slots");
    for i in 0..k {
        for j in 0..k {
            let d = g.slot_degree(i, j);
            if d > 0 {
                let f = random::form(rng, sheaf.ambient(), d, field, density);
                g.set_entry(i, j, f).expect("slot degree");
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::polymat::HomogPoly;
    use crate::scalar::Field;
    use alloc::vec;

    const Q: Field = Field::Rational;

    fn unipotent(n: usize) -> GradedMatrix {
        let s = FreeSheaf::new(n, vec![-1, 0]);
        let mut g = GradedMatrix::identity(&s, Q);
        g.set_entry(1, 0, HomogPoly::var(n, 0, Q)).unwrap();
        g
    }

    #[test]
    fn unipotent_inverse() {
        let g = unipotent(2);
        assert!(is_automorphism(&g).unwrap());
        let inv = inverse(&g).unwrap();
        assert_eq!(inv.entry(1, 0), &HomogPoly::var(2, 0, Q).neg());
        assert_eq!(inv.entry(0, 0), &HomogPoly::constant(2, Q.one()));
        assert_eq!(g.compose(&inv).unwrap(), GradedMatrix::identity(g.source(), Q));
    }

    #[test]
    fn scalar_and_singular() {
        let s = FreeSheaf::new(2, vec![0, 1]);
        let id = GradedMatrix::identity(&s, Q);
        assert!(is_automorphism(&id.scale(&Q.from_i64(-3))).unwrap());
        assert_eq!(inverse(&id).unwrap(), id);
        let mut g = GradedMatrix::zero(s.clone(), s.clone(), Q);
        g.set_entry(1, 0, HomogPoly::var(2, 1, Q)).unwrap();
        assert!(!is_automorphism(&g).unwrap());
        assert!(matches!(inverse(&g), Err(Error::NotAutomorphism)));
        let other = GradedMatrix::zero(s, FreeSheaf::new(2, vec![0]), Q);
        assert!(is_automorphism(&other).is_err());
    }

    #[test]
    fn random_inverses_and_nilpotency() {
        let mut rng = random::rng(7);
        for _ in 0..30 {
            let s = random::free_sheaf(&mut rng, 2, 4, 2);
            let g = random_automorphism(&mut rng, &s, Q, 0.7);
            let inv = inverse(&g).unwrap();
            let id = GradedMatrix::identity(&s, Q);
            assert_eq!(g.compose(&inv).unwrap(), id);
            assert_eq!(inv.compose(&g).unwrap(), id);
            assert_eq!(Some(inv.degree_zero_part()), g.degree_zero_part().inverse());
            let nu = unipotent_part(&g).unwrap();
            let mut p = id;
            for _ in 0..nilpotency_bound(&s) {
                p = p.compose(&nu).unwrap();
            }
            assert!(p.is_zero());
        }
    }

    #[test]
    fn unipotent_square_on_two_terms() {
        // O(-1) + O --(x1, x2)--> O(1): both sides of the square by hand.
        let n = 2;
        let src = FreeSheaf::new(n, vec![-1, 0]);
        let tgt = FreeSheaf::new(n, vec![1]);
        let x = |i| HomogPoly::var(n, i, Q);
        let d = GradedMatrix::new(src.clone(), tgt.clone(), Q, vec![vec![x(1).checked_mul(&x(1)).unwrap(), x(2)]]).unwrap();
        let m = Monad::new(n, Q, -1, vec![src.clone(), tgt.clone()], vec![d], 1, 0).unwrap();
        let g = GroupElement::new(-1, vec![unipotent(n), GradedMatrix::identity(&tgt, Q)]).unwrap();
        let acted = g.act(&m).unwrap();
        // g^{-1} = [[1,0],[-x0,1]], so the row becomes (x1^2 - x0 x2, x2).
        let e0 = x(1).checked_mul(&x(1)).unwrap().checked_sub(&x(0).checked_mul(&x(2)).unwrap()).unwrap();
        assert_eq!(acted.diffs()[0].entry(0, 0), &e0);
        assert_eq!(acted.diffs()[0].entry(0, 1), &x(2));
        let left = acted.dualize().unwrap();
        let gd = g.induced_dual_element(1).unwrap();
        let right = gd.act(&m.dualize().unwrap()).unwrap();
        assert_eq!(left, right);
        // The dual column is (e0, x2)^T from O(-4) to O(-2) + O(-3).
        assert_eq!(left.diffs()[0].entry(0, 0), &e0);
        assert_eq!(left.diffs()[0].entry(1, 0), &x(2));
        assert_eq!(gd.block(0).unwrap().entry(0, 1), &x(0).neg());
        assert_eq!(gd.block(-1).unwrap(), &GradedMatrix::identity(&FreeSheaf::new(n, vec![-4]), Q));
    }

    #[test]
    fn action_laws() {
        let m = catalog::koszul(3, 2, Q);
        let mut rng = random::rng(11);
        let id = GroupElement::identity(&m);
        assert_eq!(id.act(&m).unwrap(), m);
        assert_eq!(id.induced_dual_element(2).unwrap(), GroupElement::identity(&m.dualize().unwrap()));
        for _ in 0..5 {
            let g = GroupElement::random(&mut rng, &m, 0.5);
            let h = GroupElement::random(&mut rng, &m, 0.5);
            let gh = g.compose(&h).unwrap();
            assert_eq!(gh.act(&m).unwrap(), g.act(&h.act(&m).unwrap()).unwrap());
            let gd = g.induced_dual_element(2).unwrap();
            let hd = h.induced_dual_element(2).unwrap();
            assert_eq!(gh.induced_dual_element(2).unwrap(), gd.compose(&hd).unwrap());
            assert_eq!(
                g.act(&m).unwrap().dualize().unwrap(),
                gd.act(&m.dualize().unwrap()).unwrap()
            );
            assert!(g.act(&m).unwrap().is_valid());
        }
    }
}
