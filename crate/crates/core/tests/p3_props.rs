use sheafmonad::autgroup::GroupElement;
use sheafmonad::error::Error;
use sheafmonad::hilbert::{euler_poly, IntPoly};
use sheafmonad::modp3::{self, Clause, DualPoint, ParamPoint};
use sheafmonad::random;
use sheafmonad::scalar::Field;

fn f101() -> Field {
    Field::prime(101).unwrap()
}

#[test]
fn samples_are_members_with_expected_hilbert() {
    for field in [f101(), Field::prime(7).unwrap()] {
        for seed in 0..20 {
            let s = modp3::sample_wss(seed, field, 20).unwrap();
            assert!(s.tries <= modp3::SAMPLE_TRY_BOUND, "seed {seed}");
            assert!(modp3::wss_membership(&s.point).is_member());
            let m = s.point.to_monad();
            assert!(m.is_valid());
            assert_eq!(m.exactness_check(&[-2, -1], -2..=6), vec![true, true]);
            if seed < 5 {
                assert_eq!(m.hilbert_poly_of_cohomology().unwrap(), IntPoly::from_i64(&[1, 3]));
                let d = s.point.dualize().to_monad();
                assert_eq!(d.hilbert_poly_of_cohomology().unwrap(), IntPoly::from_i64(&[-1, 3]));
            }
            assert_eq!(euler_poly(&m), IntPoly::from_i64(&[1, 3]));
        }
    }
}

#[test]
fn sampling_is_deterministic() {
    for seed in [0, 7, 42] {
        assert_eq!(modp3::sample_wss(seed, f101(), 5).unwrap(), modp3::sample_wss(seed, f101(), 5).unwrap());
    }
    assert_ne!(modp3::sample_wss(1, f101(), 5).unwrap(), modp3::sample_wss(2, f101(), 5).unwrap());
    assert!(matches!(modp3::sample_wss(0, Field::Rational, 5), Err(Error::UnsupportedField(_))));
    assert!(matches!(modp3::sample_wss(0, f101(), 0), Err(Error::ExhaustedTries(0))));
}

/// Membership is a property of the orbit; the constant entry of `φ` is
/// rescaled but never killed.
#[test]
fn membership_is_invariant() {
    let mut rng = random::rng(41);
    let points = [
        modp3::sample_wss(3, f101(), 5).unwrap().point,
        modp3::twisted_cubic(f101()),
        modp3::forbidden_point(f101()),
    ];
    for case in 0..50 {
        let pt = &points[case % 3];
        let g = GroupElement::random(&mut rng, &pt.to_monad(), 0.7);
        let moved = pt.act(&g).unwrap();
        assert_eq!(modp3::wss_membership(&moved), modp3::wss_membership(pt), "case {case}");
        assert_eq!(moved.phi().entry(1, 0).is_zero(), pt.phi().entry(1, 0).is_zero());
        assert_eq!(modp3::clause_d_holds(moved.phi()), modp3::clause_d_holds(pt.phi()));
    }
}

#[test]
fn dual_points_are_equivariant() {
    let mut rng = random::rng(42);
    for seed in 0..20 {
        let pt = modp3::sample_wss(seed, f101(), 5).unwrap().point;
        let g = GroupElement::random(&mut rng, &pt.to_monad(), 0.7);
        let gd = g.induced_dual_element(modp3::CODIM).unwrap();
        assert_eq!(pt.act(&g).unwrap().dualize(), pt.dualize().act(&gd).unwrap());
        let d = pt.dualize();
        assert_eq!(DualPoint::from_monad(&d.to_monad()).unwrap(), d);
        assert_eq!(ParamPoint::from_monad(&pt.to_monad()).unwrap(), pt);
        assert_eq!(d.dualize(), pt);
    }
}

#[test]
fn forbidden_point_fails_only_d() {
    for field in [Field::Rational, f101(), Field::prime(7).unwrap()] {
        let pt = modp3::forbidden_point(field);
        assert_eq!(modp3::wss_membership(&pt).failed, vec![Clause::ForbiddenForm]);
        assert_eq!(euler_poly(&pt.to_monad()), IntPoly::from_i64(&[1, 3]));
    }
}

#[test]
fn zero_psi_fails_only_rank() {
    let tc = modp3::twisted_cubic(f101());
    let psi = sheafmonad::GradedMatrix::zero(modp3::psi_source(), modp3::middle(), f101());
    let pt = ParamPoint::new(psi, tc.phi().clone()).unwrap();
    assert_eq!(modp3::wss_membership(&pt).failed, vec![Clause::PsiRank]);
}

#[test]
fn non_minimal_but_same_hilbert() {
    let tc = modp3::twisted_cubic(Field::Rational);
    let m = tc.to_monad();
    assert!(!m.minimality_check());
    assert_eq!(m.cohomology_hilbert_function(0, 0..=4), vec![1, 4, 7, 10, 13]);
}
