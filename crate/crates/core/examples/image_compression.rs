//! Rank-30 compression of a 256x256 color image with each algorithm.
//!
//! `cargo run --release --example image_compression [IMAGE]`; without an
//! argument a synthetic landscape is used.

use std::time::Instant;

use quatpass::imgio::{image_to_quat, load_image, psnr, quat_to_image, save_image};
use quatpass::sketch::{low_rank_project, Algorithm, SketchConfig};
use quatpass::synthetic::natural_scene;

fn main() -> quatpass::Result<()> {
    let img = match std::env::args().nth(1) {
        Some(path) => load_image(path, Some((256, 256)))?,
        None => natural_scene(256, 256, 13),
    }
    .quantized();
    let x = image_to_quat(&img);
    let cfg = SketchConfig::new(30, 5, 2024);
    let out = std::env::temp_dir();

    println!("{:<6} {:>6} {:>10} {:>9}", "alg", "passes", "seconds", "PSNR");
    for (alg, passes) in [
        (Algorithm::SubspaceIteration, 4),
        (Algorithm::ArbitraryPass, 3),
        (Algorithm::BlockKrylov, 4),
        (Algorithm::BlockArbitraryPass, 3),
    ] {
        let start = Instant::now();
        let result = alg.run_with_passes(&x, &cfg, passes)?;
        let approx = low_rank_project(&x, &result)?;
        let secs = start.elapsed().as_secs_f64();
        let rec = quat_to_image(&approx).quantized();
        println!("{:<6} {:>6} {:>10.4} {:>9.3}", alg.to_string(), result.passes_used, secs, psnr(&rec, &img)?);
        save_image(&rec, out.join(format!("compressed-{alg}.png")))?;
    }
    println!("images written to {}", out.display());
    Ok(())
}
