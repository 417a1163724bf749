use proptest::prelude::*;
use quatpass::sketch::{
    low_rank_project, max_principal_angle, Algorithm, SketchConfig,
};
use quatpass::synthetic::exact_rank;
use quatpass::{Error, QuatMatrix, RandomMode};

fn rel(x: &QuatMatrix, y: &QuatMatrix) -> f64 {
    x.sub(y).unwrap().frobenius_norm() / x.frobenius_norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ledger_matches_budget(alg_n in 1u8..=4, v in 2usize..=7, seed in 0u64..1000) {
        let alg = Algorithm::from_number(alg_n).unwrap();
        let x = QuatMatrix::gaussian(40, 36, RandomMode::Quaternion, seed);
        let cfg = SketchConfig::new(3, 2, seed);
        match alg.parameter_for_passes(v) {
            Ok(param) => {
                let r = alg.run(&x, &cfg, param).unwrap();
                prop_assert_eq!(r.passes_used, v);
                prop_assert_eq!(alg.passes_for_parameter(param), v);
            }
            Err(e) => {
                prop_assert!(alg.uses_power() && v % 2 == 1);
                prop_assert!(matches!(e, Error::Rank(_)));
            }
        }
    }

    #[test]
    fn factors_are_orthonormal(alg_n in 1u8..=4, v in 2usize..=6, seed in 0u64..1000) {
        let alg = Algorithm::from_number(alg_n).unwrap();
        let Ok(param) = alg.parameter_for_passes(v) else { return Ok(()) };
        let x = QuatMatrix::gaussian(30, 25, RandomMode::Quaternion, seed);
        let r = alg.run(&x, &SketchConfig::new(4, 2, seed + 1), param).unwrap();
        let f = &r.factors;
        prop_assert_eq!(f.u.cols(), 4);
        prop_assert!(f.u.hermitian_mul(&f.u).unwrap().sub(&QuatMatrix::identity(4)).unwrap().max_abs() < 1e-10);
        prop_assert!(f.v.hermitian_mul(&f.v).unwrap().sub(&QuatMatrix::identity(4)).unwrap().max_abs() < 1e-10);
        prop_assert!(f.s.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn exact_rank_recovery_at_minimum_budget() {
    let x = exact_rank(100, 80, 5, 42);
    let cfg = SketchConfig::new(5, 5, 7);
    for alg in Algorithm::ALL {
        let r = alg.run_with_passes(&x, &cfg, 2).unwrap();
        assert_eq!(r.passes_used, 2);
        let err = rel(&x, &low_rank_project(&x, &r).unwrap());
        assert!(err < 1e-8, "{alg}: {err}");
    }
}

#[test]
fn quaternion_test_matrices_work_too() {
    let x = exact_rank(50, 40, 3, 1);
    let cfg = SketchConfig::new(3, 3, 2).with_mode(RandomMode::Quaternion);
    for alg in Algorithm::ALL {
        let r = alg.run_with_passes(&x, &cfg, 4).unwrap();
        assert!(rel(&x, &low_rank_project(&x, &r).unwrap()) < 1e-8);
    }
}

#[test]
fn even_budget_equals_subspace_iteration() {
    let x = QuatMatrix::gaussian(60, 50, RandomMode::Quaternion, 3);
    for q in 0..3 {
        let cfg = SketchConfig::new(6, 4, 10 + q as u64);
        let a = Algorithm::SubspaceIteration.run(&x, &cfg, q).unwrap();
        let b = Algorithm::ArbitraryPass.run(&x, &cfg, 2 * q + 2).unwrap();
        assert!(max_principal_angle(&a.range_basis, &b.range_basis) < 1e-8);
        assert!(max_principal_angle(&a.corange_basis, &b.corange_basis) < 1e-8);
    }
}

#[test]
fn sketch_must_fit() {
    let x = QuatMatrix::gaussian(10, 8, RandomMode::Real, 1);
    let cfg = SketchConfig::new(5, 4, 0);
    assert!(matches!(Algorithm::ArbitraryPass.run(&x, &cfg, 2), Err(Error::Rank(_))));
    assert!(matches!(Algorithm::ArbitraryPass.run(&x, &SketchConfig::new(2, 1, 0), 1), Err(Error::PassBudget(1))));
}
