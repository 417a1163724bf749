//! Quaternion arithmetic, the complex adjoint, and factorizations checked
//! against the adjoint oracle.

use quatpass::factor::{adjoint_singular_values, qr, qsvd, spectral_norm};
use quatpass::{QuatMatrix, Quaternion, RandomMode};

fn main() -> quatpass::Result<()> {
    let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
    println!("ij = {:?}\nji = {:?}", i * j, j * i);
    assert_eq!(i * j, k);

    let p = Quaternion::new(1.0, 2.0, -1.0, 0.5);
    println!("|p| = {:.6}, p * p^-1 = {:?}", p.norm(), p * p.inv()?);

    // a quarter turn about the z axis
    let half = std::f64::consts::FRAC_PI_4;
    let rotor = Quaternion::new(half.cos(), 0.0, 0.0, half.sin());
    let v = rotor.rotate_vector(Quaternion::pure(1.0, 0.0, 0.0))?;
    println!("x axis rotated: ({:.3}, {:.3}, {:.3})", v.q1, v.q2, v.q3);

    let x = QuatMatrix::gaussian(40, 25, RandomMode::Quaternion, 7);
    let y = QuatMatrix::gaussian(25, 30, RandomMode::Quaternion, 8);
    let xy = x.mul(&y)?;
    let via_adjoint = QuatMatrix::from_adjoint(&x.to_adjoint().mul(&y.to_adjoint())?)?;
    println!("product vs adjoint product: {:.2e}", xy.sub(&via_adjoint)?.max_abs());

    let f = qr(&x)?;
    let qtq = f.q.hermitian_mul(&f.q)?;
    println!(
        "QR: reconstruction {:.2e}, orthonormality {:.2e}",
        f.q.mul(&f.r)?.sub(&x)?.frobenius_norm(),
        qtq.sub(&QuatMatrix::identity(25))?.max_abs()
    );

    let svd = qsvd(&x);
    let oracle = adjoint_singular_values(&x);
    // the adjoint lists every singular value twice
    let worst = svd.s.iter().zip(oracle.iter().step_by(2)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!(
        "QSVD: sigma_1 = {:.4} (spectral norm {:.4}), worst oracle gap {:.2e}",
        svd.s[0],
        spectral_norm(&x),
        worst
    );
    println!(
        "QSVD reconstruction: {:.2e}",
        svd.reconstruct().sub(&x)?.frobenius_norm() / x.frobenius_norm()
    );
    Ok(())
}
