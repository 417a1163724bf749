use proptest::prelude::*;
use quatpass::{QuatMatrix, Quaternion, RandomMode};

fn quat() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-10.0..10.0f64).prop_map(|[a, b, c, d]| Quaternion::new(a, b, c, d))
}

fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn product_is_associative(a in quat(), b in quat(), c in quat()) {
        prop_assert!(close((a * b) * c, a * (b * c), 1e-12));
    }

    #[test]
    fn norm_is_multiplicative(a in quat(), b in quat()) {
        let lhs = (a * b).norm();
        prop_assert!((lhs - a.norm() * b.norm()).abs() <= 1e-12 * (1.0 + lhs));
    }

    #[test]
    fn inverse_is_two_sided(a in quat()) {
        prop_assume!(a.norm() > 1e-3);
        let inv = a.inv().unwrap();
        prop_assert!(close(a * inv, Quaternion::ONE, 1e-12));
        prop_assert!(close(inv * a, Quaternion::ONE, 1e-12));
    }

    #[test]
    fn conjugate_reverses_products(a in quat(), b in quat()) {
        prop_assert!(close((a * b).conj(), b.conj() * a.conj(), 1e-12));
    }

    #[test]
    fn matrix_product_laws(m in 1usize..7, n in 1usize..7, r in 1usize..7, s in 1usize..7, seed in 0u64..1000) {
        let x = QuatMatrix::gaussian(m, n, RandomMode::Quaternion, seed);
        let y = QuatMatrix::gaussian(n, r, RandomMode::Quaternion, seed + 1);
        let z = QuatMatrix::gaussian(r, s, RandomMode::Quaternion, seed + 2);
        let left = x.mul(&y).unwrap().mul(&z).unwrap();
        let right = x.mul(&y.mul(&z).unwrap()).unwrap();
        prop_assert!(left.sub(&right).unwrap().max_abs() < 1e-10);

        let xy_h = x.mul(&y).unwrap().hermitian();
        let yh_xh = y.hermitian().mul(&x.hermitian()).unwrap();
        prop_assert!(xy_h.sub(&yh_xh).unwrap().max_abs() < 1e-10);
        prop_assert!(x.hermitian_mul(&x.mul(&y).unwrap()).unwrap()
            .sub(&x.hermitian().mul(&x.mul(&y).unwrap()).unwrap()).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn adjoint_is_a_homomorphism(m in 1usize..6, n in 1usize..6, r in 1usize..6, seed in 0u64..1000) {
        let x = QuatMatrix::gaussian(m, n, RandomMode::Quaternion, seed);
        let y = QuatMatrix::gaussian(n, r, RandomMode::Quaternion, seed + 7);
        let lhs = x.mul(&y).unwrap().to_adjoint();
        let rhs = x.to_adjoint().mul(&y.to_adjoint()).unwrap();
        prop_assert!((lhs.data - rhs.data).norm() < 1e-10);
        prop_assert_eq!(QuatMatrix::from_adjoint(&x.to_adjoint()).unwrap(), x.clone());
        prop_assert!((x.to_adjoint().frobenius_norm() - 2f64.sqrt() * x.frobenius_norm()).abs() < 1e-10);
    }

    #[test]
    fn frobenius_norm_counts_every_component(m in 1usize..8, n in 1usize..8, seed in 0u64..1000) {
        let x = QuatMatrix::gaussian(m, n, RandomMode::Quaternion, seed);
        let direct: f64 = x.to_column_major().iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!((x.frobenius_norm() - direct).abs() < 1e-12 * (1.0 + direct));
    }
}

#[test]
fn scalar_matrices_multiply_like_quaternions() {
    let a = Quaternion::new(0.5, -1.0, 2.0, 3.0);
    let b = Quaternion::new(-2.0, 0.25, 1.0, -1.5);
    let prod = QuatMatrix::from_rows(&[vec![a]]).unwrap().mul(&QuatMatrix::from_rows(&[vec![b]]).unwrap()).unwrap();
    assert_eq!(prod.get(0, 0), a * b);
}
