//! Factor-4 upsampling as structured completion, compared with holding
//! each sample over its block.

use quatpass::completion::{complete, superres_mask, CompletionProblem};
use quatpass::imgio::{image_to_quat, psnr, quat_to_image, save_image, zero_order_hold};
use quatpass::synthetic::natural_scene;

fn main() -> quatpass::Result<()> {
    let img = natural_scene(256, 256, 2).quantized();
    let x = image_to_quat(&img);
    let mask = superres_mask(256, 256, 4)?;
    println!("observed {} of {} pixels", mask.observed_count(), 256 * 256);

    let held = zero_order_hold(&img, 4);
    println!("zero-order hold: {:.2} dB", psnr(&held, &img)?);
    for (rank, iters) in [(2, 50), (2, 400), (10, 400)] {
        let problem = CompletionProblem::new(&x, mask.clone(), rank)?
            .with_smoothing(0.6)
            .with_stopping(iters, 1e-5);
        let trace = complete(&problem)?;
        let rec = quat_to_image(&trace.estimate);
        println!(
            "rank {rank:>2}, {:>3} iterations: {:.2} dB",
            trace.iterations,
            psnr(&rec, &img)?
        );
        save_image(&rec, std::env::temp_dir().join(format!("superres-r{rank}-{iters}.png")))?;
    }
    Ok(())
}
