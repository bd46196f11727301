use proptest::prelude::*;
use qso3_core::fockrep::build_space;
use qso3_core::matelem::{
    default_nmax, me_pairs, reduced_me, reduced_me_diagonal, reduced_me_lowering_via_adjoint,
    reduced_me_raising, remainder_order, taylor_diagonal, taylor_raising, taylor_remainder, ChannelChoice, MeKind, Oracle,
    CHANNEL_TOL, ORACLE_TOL,
};
use qso3_core::DeformationParam;

const TAUS: [f64; 6] = [-0.3, -0.1, 0.0, 0.1, 0.3, 0.5];

#[test]
fn oracle_agrees_with_closed_forms() {
    let space = build_space(default_nmax(10));
    for tau in TAUS {
        let p = DeformationParam::new(tau).unwrap();
        let oracle = Oracle::new(&space, p).unwrap();
        for lambda in 0..=10u32 {
            for (lf, li) in me_pairs(lambda) {
                let ex = oracle.extract(lambda, lf, li, ChannelChoice::All).unwrap();
                let closed = reduced_me(lambda, lf, li, p).unwrap().value;
                let err = (ex.record.value - closed).abs() / closed.abs().max(1.0);
                assert!(err <= ORACLE_TOL, "λ={lambda} {lf}<-{li} τ={tau}: {err:e}");
                assert!(ex.spread <= CHANNEL_TOL, "spread λ={lambda} {lf}<-{li} τ={tau}: {:e}", ex.spread);
                let d = oracle.extract(lambda, lf, li, ChannelChoice::Default).unwrap();
                assert_eq!(d.channels.len(), 1);
                assert!((d.record.value - closed).abs() / closed.abs().max(1.0) <= ORACLE_TOL);
            }
        }
    }
}

#[test]
fn symmetry_of_raising_and_lowering() {
    let space = build_space(default_nmax(8));
    for tau in [-0.3, 0.2, 0.5] {
        let p = DeformationParam::new(tau).unwrap();
        let oracle = Oracle::new(&space, p).unwrap();
        for lambda in 2..=8u32 {
            for l in (lambda % 2..=lambda - 2).step_by(2) {
                let up = oracle.extract(lambda, l + 2, l, ChannelChoice::All).unwrap().record.value;
                let down = oracle.extract(lambda, l, l + 2, ChannelChoice::All).unwrap().record.value;
                assert!((up - down).abs() <= 1e-9 * up.abs().max(1.0));
                let via = reduced_me_lowering_via_adjoint(lambda, l, p).unwrap();
                assert!((via - up).abs() <= 1e-9 * up.abs().max(1.0));
            }
        }
    }
}

#[test]
fn oracle_coefficients_match_printed() {
    let space = build_space(default_nmax(8));
    for tau in [-0.3, 0.1, 0.5] {
        let p = DeformationParam::new(tau).unwrap();
        let oracle = Oracle::new(&space, p).unwrap();
        for lambda in 0..=8u32 {
            for l in qso3_core::basis::allowed_l(lambda) {
                let (a, b) = oracle.coefficients(lambda, l).unwrap();
                let bb = qso3_core::matelem::coeff_b(lambda, l, p).unwrap();
                assert!((b - bb).abs() <= 1e-9 * bb.abs().max(1.0));
                if let Some(a) = a {
                    let aa = qso3_core::matelem::coeff_a(lambda, l, p).unwrap();
                    assert!((a - aa).abs() <= 1e-9 * aa.abs().max(1.0));
                }
            }
        }
    }
}

#[test]
fn classical_limit_matches_taylor_constants() {
    let p = DeformationParam::new(1e-12).unwrap();
    for lambda in 0..=12u32 {
        for (lf, li) in me_pairs(lambda) {
            let c0 = if lf == li + 2 {
                taylor_raising(lambda, li).unwrap()[0]
            } else if lf == li {
                taylor_diagonal(lambda, li).unwrap()[0]
            } else {
                continue;
            };
            let v = reduced_me(lambda, lf, li, p).unwrap().value;
            assert!((v - c0).abs() <= 1e-8 * c0.abs().max(1.0));
        }
    }
}

fn raising_pair() -> impl Strategy<Value = (u32, u32)> {
    (2u32..=12).prop_flat_map(|lam| ((0..=(lam - 2) / 2), Just(lam))).prop_map(|(k, lam)| (lam, lam - 2 - 2 * k))
}

fn diagonal_pair() -> impl Strategy<Value = (u32, u32)> {
    (1u32..=12).prop_flat_map(|lam| ((0..=(lam - 1) / 2), Just(lam))).prop_map(|(k, lam)| (lam, lam - 2 * k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn taylor_remainder_is_cubic((lambda, l) in raising_pair(), diag in any::<bool>()) {
        let (kind, l) = if diag { (MeKind::Diagonal, l + 2) } else { (MeKind::Raising, l) };
        prop_assume!(!(diag && l == 0));
        let r1 = taylor_remainder(kind, lambda, l, 1e-2).unwrap();
        let r2 = taylor_remainder(kind, lambda, l, 1e-3).unwrap();
        let expected = 10f64.powi(remainder_order(kind, lambda, l) as i32);
        let ratio = r1 / r2;
        prop_assert!(ratio > expected / 3.0 && ratio < expected * 3.0, "ratio {}", ratio);
    }

    #[test]
    fn signs(lt in diagonal_pair(), tau in -0.5f64..=0.5) {
        let (lambda, l) = lt;
        prop_assume!(l >= 2);
        let p = DeformationParam::new(tau).unwrap();
        prop_assert!(reduced_me_diagonal(lambda, l, p).unwrap().value < 0.0);
        if l + 2 <= lambda {
            prop_assert!(reduced_me_raising(lambda, l, p).unwrap().value > 0.0);
        }
        if l >= 2 {
            prop_assert!(reduced_me_raising(lambda, l - 2, p).unwrap().value > 0.0);
        }
    }
}
