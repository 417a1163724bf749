//! Mean projection errors against the theoretical bounds for a matrix with
//! singular values `j^-2`.
//!
//! `cargo run --release --example bound_validation [TRIALS]`

use quatpass::experiment::{median, run_bench, BenchConfig, SpectrumSpec};
use quatpass::sketch::Algorithm;

fn main() -> quatpass::Result<()> {
    let trials = std::env::args().nth(1).and_then(|t| t.parse().ok()).unwrap_or(5);
    let cfg = BenchConfig {
        spectrum: SpectrumSpec::Power(2.0),
        rows: 200,
        cols: 200,
        algorithms: Algorithm::ALL.to_vec(),
        rank: 10,
        oversample: 5,
        passes: (2..=6).collect(),
        trials,
        seed: 99,
    };
    println!("{:<6} {:>6} {:>6} {:>12} {:>12} {:>12}", "alg", "passes", "side", "mean", "median", "bound");
    for row in run_bench(&cfg)? {
        println!(
            "{:<6} {:>6} {:>6} {:>12.4e} {:>12.4e} {:>12.4e}{}",
            row.algorithm.to_string(),
            row.passes,
            format!("{:?}", row.side).to_lowercase(),
            row.mean,
            median(&row.errors),
            row.bound,
            if row.within_bound() { "" } else { "  EXCEEDED" }
        );
    }
    Ok(())
}
