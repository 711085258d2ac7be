use num_rational::BigRational;
use sheafmonad::autgroup::GroupElement;
use sheafmonad::catalog;
use sheafmonad::hilbert::{euler_poly, line_bundle_hilb, IntPoly};
use sheafmonad::monad::{beilinson_shape, dual_beilinson_table, CohTable};
use sheafmonad::random;
use sheafmonad::scalar::Field;
use sheafmonad::{bott_h, Monad};

use rand::Rng;

fn sign(k: i64) -> BigRational {
    BigRational::from_integer(if k.rem_euclid(2) == 0 { 1.into() } else { (-1).into() })
}

#[test]
fn euler_of_dual_reflects() {
    let mut rng = random::rng(21);
    for case in 0..100 {
        let m = random::complex(&mut rng, 4, Field::Rational, case % 3 == 0);
        let d = m.dualize().unwrap();
        let k = m.ambient() as i64 - m.codim() as i64;
        assert_eq!(euler_poly(&d), euler_poly(&m).reflect().scale(&sign(k)), "case {case}");
    }
}

#[test]
fn dualize_is_involution_and_keeps_validity() {
    let mut rng = random::rng(22);
    for _ in 0..100 {
        let m = random::complex(&mut rng, 3, Field::prime(101).unwrap(), false);
        assert!(m.is_valid());
        let d = m.dualize().unwrap();
        assert!(d.is_valid());
        assert_eq!(d.lo(), -m.hi() - m.codim() as i64);
        assert_eq!(d.hi(), -m.lo() - m.codim() as i64);
        assert_eq!(d.dualize().unwrap(), m);
    }
}

#[test]
fn reflection_identity_for_line_bundles() {
    for n in 0..=4usize {
        for e in -5..=5 {
            let lhs = line_bundle_hilb(n, -(n as i64) - 1 - e);
            assert_eq!(lhs, line_bundle_hilb(n, e).reflect().scale(&sign(n as i64)));
        }
    }
}

/// Koszul complexes moved by random group elements stay exact off 0 and
/// the window interpolation reproduces the Euler polynomial.
#[test]
fn window_matches_euler_for_exact_monads() {
    let mut rng = random::rng(23);
    let f = Field::prime(101).unwrap();
    for n in 2..=3 {
        for r in 1..=n {
            for a in [-2i64, 0, 3] {
                let k = catalog::koszul(n, r, f).twisted(a);
                let g = GroupElement::random(&mut rng, &k, 0.7);
                let m = g.act(&k).unwrap();
                assert_eq!(m.hilbert_poly_of_cohomology().unwrap(), euler_poly(&m));
                let d = m.dualize().unwrap();
                assert_eq!(d.hilbert_poly_of_cohomology().unwrap(), euler_poly(&d));
            }
        }
    }
}

#[test]
fn group_action_keeps_hilbert_function() {
    let mut rng = random::rng(24);
    let f = Field::prime(101).unwrap();
    for case in 0..50 {
        let n = 2 + case % 2;
        let r = 1 + case % n;
        let k = catalog::koszul(n, r, f).twisted(rng.random_range(-2..=2));
        let g = GroupElement::random(&mut rng, &k, 0.6);
        let m = g.act(&k).unwrap();
        assert!(m.is_valid());
        for pos in k.indices() {
            assert_eq!(m.cohomology_hilbert_function(pos, -3..=4), k.cohomology_hilbert_function(pos, -3..=4));
        }
    }
}

#[test]
fn acyclic_summands_keep_hilbert_function() {
    let mut rng = random::rng(25);
    for _ in 0..20 {
        let n = rng.random_range(2..=3);
        let r = rng.random_range(1..=n);
        let k = catalog::koszul(n, r, Field::Rational);
        let idx = rng.random_range(k.lo()..k.hi());
        let aug = k.with_acyclic_summand(idx, rng.random_range(-3..=1)).unwrap();
        assert!(aug.is_valid());
        assert!(k.minimality_check());
        assert!(!aug.minimality_check());
        assert_eq!(euler_poly(&aug), euler_poly(&k));
        for pos in k.indices() {
            assert_eq!(aug.cohomology_hilbert_function(pos, -2..=4), k.cohomology_hilbert_function(pos, -2..=4));
        }
    }
}

#[test]
fn structure_sheaf_table_from_bott() {
    for n in 1..=4usize {
        let mut entries = Vec::new();
        for p in 0..=n {
            for i in -(p as i64)..=(n - p) as i64 {
                let q = (i + p as i64) as usize;
                entries.push((i, p, bott_h(n, p, q, p as i64).unwrap()));
            }
        }
        let t = CohTable::new(n, n, entries).unwrap();
        for (i, s) in beilinson_shape(&t) {
            assert_eq!(s.twists(), if i == 0 { &[0][..] } else { &[][..] });
        }
    }
}

#[test]
fn point_table_gives_koszul_terms() {
    for n in 1..=4usize {
        let binom = |k: usize| (0..k).fold(1u64, |acc, j| acc * (n - j) as u64 / (j + 1) as u64);
        let t = CohTable::new(n, 0, (0..=n).map(|p| (-(p as i64), p, binom(p)))).unwrap();
        let k = catalog::koszul(n, n, Field::Rational);
        for (i, s) in beilinson_shape(&t) {
            match k.term(i) {
                Some(term) => assert_eq!(&s, term),
                None => assert!(s.is_zero()),
            }
        }
        assert_eq!(dual_beilinson_table(&dual_beilinson_table(&t)), t);
    }
}

#[test]
fn beilinson_shapes_are_minimal() {
    let mut rng = random::rng(26);
    let t = CohTable::new(2, 1, [(0, 0, 1), (-1, 1, 1)]).unwrap();
    let terms: Vec<_> = beilinson_shape(&t).into_iter().filter(|(_, s)| !s.is_zero()).collect();
    assert_eq!(terms.len(), 2);
    let m = Monad::with_zero_diffs(2, Field::Rational, -1, terms.into_iter().map(|t| t.1).collect(), 1, 0).unwrap();
    let d = random::morphism(&mut rng, &m.terms()[0], &m.terms()[1], Field::Rational, 1.0);
    let m = m.with_diffs(vec![d]).unwrap();
    assert!(m.minimality_check());
    assert_eq!(euler_poly(&m.dualize().unwrap()), IntPoly::from_i64(&[-1, 1]));
}
