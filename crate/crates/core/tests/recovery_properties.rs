mod common;

use petz_core::random;
use petz_core::recovery::{
    am_adjoint_residual, chain_report, contraction_defect_check, petz_sufficiency_check, swb_gap, RecoverySetup,
    SufficiencyOutcome,
};
use petz_core::superop::coordinates;
use petz_core::{Channel, ReferenceState, State};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn chain_holds(idx in 0usize..4, seed in any::<u64>()) {
        let alg = common::algebra(idx);
        let phi = common::random_channel(&alg, seed);
        let b = common::reference(&alg, seed ^ 1);
        let setup = RecoverySetup::new(&phi, &b).unwrap();
        let a = random::random_state(&alg, seed ^ 2);
        let r = chain_report(&a, &setup).unwrap();
        prop_assert!(r.fidelity_margin() >= -1e-9, "{r:?}");
        prop_assert!(r.l1_margin() >= -1e-9, "{r:?}");
        prop_assert!(r.am_margin() >= -1e-9, "{r:?}");
        prop_assert!(r.trace_vs_am_margin() >= -1e-9, "{r:?}");
        prop_assert!(swb_gap(&a, &setup).unwrap().is_finite());
    }

    #[test]
    fn petz_contracts(idx in 0usize..4, seed in any::<u64>()) {
        let alg = common::algebra(idx);
        let phi = common::random_channel(&alg, seed);
        let b = common::reference(&alg, seed ^ 3);
        let setup = RecoverySetup::new(&phi, &b).unwrap();
        prop_assert!(setup.fixed_point_residual() <= 1e-9);
        let d = setup.petz().diagnostics();
        prop_assert!(d.choi_min_eigenvalue >= -1e-10);
        prop_assert!(d.trace_residual <= 1e-10);
        prop_assert!(am_adjoint_residual(&setup).unwrap() <= 1e-9);
    }

    #[test]
    fn contraction_defect_on_contractions(idx in 0usize..4, seed in any::<u64>()) {
        let alg = common::algebra(idx);
        let phi = common::random_channel(&alg, seed);
        let one = ReferenceState::maximally_mixed(&alg);
        // With B = 1 the map V is φ* composed with multiplications by 1, a contraction.
        let ops = petz_core::checks::ContractionOperators::new(&phi, &one).unwrap();
        let v = ops.v().scale(1.0 / ops.v().operator_norm().max(1.0));
        let x = coordinates(&random::random_element(&alg, seed ^ 4));
        prop_assert!(contraction_defect_check(&v, &x).unwrap() >= -1e-10 * x.norm_squared().max(1.0));
    }

    #[test]
    fn unitary_channels_recover_perfectly(idx in 0usize..4, seed in any::<u64>()) {
        let alg = common::algebra(idx);
        let u = Channel::unitary(&alg, &random::random_unitary(&alg, seed)).unwrap();
        let b = common::reference(&alg, seed ^ 5);
        let setup = RecoverySetup::new(&u, &b).unwrap();
        let a = random::random_state(&alg, seed ^ 6);
        let r = chain_report(&a, &setup).unwrap();
        for v in [r.entropy_gap, r.am_residual_sq, r.l1_residual_sq, r.fidelity_term] {
            prop_assert!(v.abs() <= 1e-10, "{r:?}");
        }
        let s = petz_sufficiency_check(&a, &setup).unwrap();
        prop_assert_eq!(s.outcome, SufficiencyOutcome::Pass);
    }

    #[test]
    fn pinching_invariant_states_are_sufficient(idx in 0usize..4, seed in any::<u64>()) {
        // Diagonal A and B commute with the pinching, so R(φ(A)) = A.
        let alg = common::algebra(idx);
        let pinch = Channel::pinching(&alg);
        let b = ReferenceState::new(common::reference(&alg, seed).diagonal_part(), 1e-6).unwrap();
        let a = State::new(random::random_state(&alg, seed ^ 7).diagonal_part()).unwrap();
        let setup = RecoverySetup::new(&pinch, &b).unwrap();
        let s = petz_sufficiency_check(&a, &setup).unwrap();
        prop_assert_eq!(s.outcome, SufficiencyOutcome::Pass, "{:?}", s);
    }

    #[test]
    fn small_gap_forces_small_residual(idx in 0usize..4, seed in any::<u64>(), eps in 1e-12f64..1e-6) {
        let alg = common::algebra(idx);
        let pinch = Channel::pinching(&alg);
        let b = ReferenceState::maximally_mixed(&alg);
        let setup = RecoverySetup::new(&pinch, &b).unwrap();
        let diag = random::random_state(&alg, seed).diagonal_part();
        let off = random::random_hermitian(&alg, seed ^ 8);
        let off = off.sub(&off.diagonal_part()).unwrap().scale(eps);
        let Ok(a) = State::new(diag.add(&off).unwrap()) else { return Ok(()); };
        let r = chain_report(&a, &setup).unwrap();
        if r.entropy_gap <= 1e-10 {
            prop_assert!(r.am_residual_sq.sqrt() <= 1e-4);
        }
    }
}

#[test]
fn identity_channel_has_no_gap() {
    let alg = common::algebra(2);
    let b = common::reference(&alg, 1);
    let setup = RecoverySetup::new(&Channel::identity(&alg), &b).unwrap();
    let a = random::random_state(&alg, 2);
    let r = chain_report(&a, &setup).unwrap();
    assert!(r.entropy_gap.abs() < 1e-10);
    assert!(setup.recover(&a).unwrap().max_abs_diff(&a).unwrap() < 1e-10);
}
