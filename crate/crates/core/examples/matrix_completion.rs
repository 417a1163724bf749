//! Inpainting 70% missing pixels, and exact recovery of a low-rank matrix
//! from 70% of its entries.

use quatpass::completion::{complete, hidden_relative_error, random_mask, CompletionProblem};
use quatpass::imgio::{image_to_quat, psnr, quat_to_image, save_image};
use quatpass::synthetic::{exact_rank, natural_scene};

fn main() -> quatpass::Result<()> {
    let truth = exact_rank(80, 60, 4, 5);
    let mask = random_mask(80, 60, 0.3, 6)?;
    let problem = CompletionProblem::new(&truth, mask.clone(), 4)?.with_stopping(200, 1e-6);
    let trace = complete(&problem)?;
    println!(
        "rank-4 matrix, 30% hidden: {} iterations, hidden-entry error {:.2e}",
        trace.iterations,
        hidden_relative_error(&trace.estimate, &truth, &mask)?
    );

    let img = natural_scene(256, 256, 11).quantized();
    let x = image_to_quat(&img);
    let mask = random_mask(256, 256, 0.7, 12)?;
    let problem = CompletionProblem::new(&x, mask, 30)?.with_smoothing(0.6).with_seed(3);
    let trace = complete(&problem)?;
    let observed = quat_to_image(problem.observed());
    let recovered = quat_to_image(&trace.estimate);
    println!(
        "image, 70% missing: zero-filled {:.2} dB, recovered {:.2} dB after {} iterations",
        psnr(&observed, &img)?,
        psnr(&recovered, &img)?,
        trace.iterations
    );
    for (n, c) in trace.changes.iter().enumerate().step_by(10) {
        println!("  iteration {:>2}: relative change {c:.3e}", n + 1);
    }
    let out = std::env::temp_dir();
    save_image(&observed, out.join("inpaint-observed.png"))?;
    save_image(&recovered, out.join("inpaint-recovered.png"))?;
    Ok(())
}
