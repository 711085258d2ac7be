//! Seeded random scalars, forms, morphisms and complexes.
//!
//! Every generator takes an explicit [`ChaCha8Rng`]; the same seed yields
//! the same object on every platform.

use alloc::vec::Vec;

use rand::Rng;
pub use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

use crate::monad::Monad;
use crate::polymat::{monomial_basis, FreeSheaf, GradedMatrix, HomogPoly};
use crate::scalar::{Field, FieldElement};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform residue over `F_p`; an integer in `[-3, 3]` over `Q`.
pub fn scalar(rng: &mut ChaCha8Rng, field: Field) -> FieldElement {
    match field {
        Field::Rational => field.from_i64(rng.random_range(-3..=3)),
        Field::Prime(p) => field.from_i64(rng.random_range(0..p as i64)),
    }
}

pub fn nonzero_scalar(rng: &mut ChaCha8Rng, field: Field) -> FieldElement {
    loop {
        let s = scalar(rng, field);
        if !s.is_zero() {
            return s;
        }
    }
}

/// A form of degree `d`; each monomial is kept with probability `density`.
pub fn form(rng: &mut ChaCha8Rng, n: usize, d: i64, field: Field, density: f64) -> HomogPoly {
    let mut terms = Vec::new();
    for m in monomial_basis(n, d) {
        if rng.random_bool(density) {
            terms.push((m, scalar(rng, field)));
        }
    }
    HomogPoly::from_terms(n, d, field, terms).expect("monomials of the right degree")
}

/// A morphism with every admissible slot filled by [`form`].
pub fn morphism(
    rng: &mut ChaCha8Rng,
    source: &FreeSheaf,
    target: &FreeSheaf,
    field: Field,
    density: f64,
) -> GradedMatrix {
    let mut g = GradedMatrix::zero(source.clone(), target.clone(), field);
    for i in 0..g.rows() {
        for j in 0..g.cols() {
            let d = g.slot_degree(i, j);
            if d >= 0 {
                let f = form(rng, source.ambient(), d, field, density);
                g.set_entry(i, j, f).expect("slot degree");
            }
        }
    }
    g
}

/// A free sheaf of rank `0..=max_rank` with twists in `[-bound, bound]`.
pub fn free_sheaf(rng: &mut ChaCha8Rng, n: usize, max_rank: usize, bound: i64) -> FreeSheaf {
    let k = rng.random_range(0..=max_rank);
    let mut twists: Vec<i64> = (0..k).map(|_| rng.random_range(-bound..=bound)).collect();
    twists.sort_unstable_by(|a, b| b.cmp(a));
    FreeSheaf::new(n, twists)
}

/// A random complex on `P^n` for `1 <= n <= max_n`: up to five terms,
/// random codimension and cohomology position, and random non-zero
/// differentials at non-adjacent indices (so `d∘d = 0` holds trivially)
/// unless `zero_diffs` is set.
pub fn complex(rng: &mut ChaCha8Rng, max_n: usize, field: Field, zero_diffs: bool) -> Monad {
    let n = rng.random_range(1..=max_n);
    let len = rng.random_range(1..=5usize);
    let lo = rng.random_range(-4..=1i64);
    let terms: Vec<FreeSheaf> = (0..len).map(|_| free_sheaf(rng, n, 3, 4)).collect();
    let codim = rng.random_range(1..=n);
    let pos = lo + rng.random_range(0..len as i64);
    let mut diffs = Vec::with_capacity(len.saturating_sub(1));
    let mut prev_nonzero = false;
    for k in 0..len.saturating_sub(1) {
        let nonzero = !zero_diffs && !prev_nonzero && rng.random_bool(0.5);
        let d = if nonzero {
            morphism(rng, &terms[k], &terms[k + 1], field, 0.6)
        } else {
            GradedMatrix::zero(terms[k].clone(), terms[k + 1].clone(), field)
        };
        prev_nonzero = nonzero;
        diffs.push(d);
    }
    Monad::new(n, field, lo, terms, diffs, codim, pos).expect("shapes match by construction")
}
