//! Every product with the data matrix is one view. The ledger shows what
//! each algorithm spends, and how accuracy improves with the budget.

use quatpass::bounds::SpectrumProfile;
use quatpass::experiment::spectrum_matrix;
use quatpass::ledger::CountedMatrix;
use quatpass::sketch::{max_principal_angle, truncation_error, Algorithm, SketchConfig};
use quatpass::{QuatMatrix, RandomMode};

fn main() -> quatpass::Result<()> {
    let x = QuatMatrix::gaussian(50, 40, RandomMode::Quaternion, 1);
    let counted = CountedMatrix::new(&x);
    let omega = QuatMatrix::gaussian(40, 6, RandomMode::Real, 2);
    let y = counted.apply(&omega)?;
    counted.apply_hermitian(&y)?;
    println!("X^H (X Omega): {} views", counted.views());

    let profile = SpectrumProfile::polynomial(120, 1.0);
    let a = spectrum_matrix(150, 120, &profile, 3)?;
    let cfg = SketchConfig::new(10, 5, 11);
    println!("{:<6} {:>7} {:>13}", "alg", "passes", "error");
    for alg in Algorithm::ALL {
        for v in 2..=7 {
            let Ok(param) = alg.parameter_for_passes(v) else { continue };
            let r = alg.run(&a, &cfg, param)?;
            assert_eq!(r.passes_used, v);
            println!("{:<6} {:>7} {:>13.6e}", alg.to_string(), v, truncation_error(&a, &r)?);
        }
    }
    println!("optimal rank-10 error: {:.6e}", profile.sigmas()[10]);

    // an even budget of the arbitrary-pass method is subspace iteration
    let one = Algorithm::SubspaceIteration.run(&a, &cfg, 2)?;
    let two = Algorithm::ArbitraryPass.run(&a, &cfg, 6)?;
    println!(
        "alg1(q=2) vs alg2(v=6): largest principal angle {:.2e}",
        max_principal_angle(&one.range_basis, &two.range_basis)
    );
    Ok(())
}
