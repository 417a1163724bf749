//! Deterministic test data: matrices with prescribed spectra and synthetic
//! color images.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::factor::qr;
use crate::imgio::ColorImage;
use crate::matrix::{QuatMatrix, RandomMode};

/// Orthonormal `n x r` quaternion basis from the QR of a Gaussian matrix.
pub fn random_orthonormal(n: usize, r: usize, seed: u64) -> QuatMatrix {
    let g = QuatMatrix::gaussian(n, r, RandomMode::Quaternion, seed);
    qr(&g).expect("tall Gaussian matrix").q
}

/// `U diag(sigmas) V^H` with random orthonormal `U` and `V`. The singular
/// values of the result are `sigmas` (padded with zeros).
pub fn with_spectrum(rows: usize, cols: usize, sigmas: &[f64], seed: u64) -> Result<QuatMatrix> {
    let r = sigmas.len();
    if r > rows.min(cols) {
        return Err(Error::Shape(format!(
            "{r} singular values do not fit a {rows}x{cols} matrix"
        )));
    }
    let u = random_orthonormal(rows, r, seed);
    let v = random_orthonormal(cols, r, seed.wrapping_add(0x9e37_79b9));
    u.scale_columns(sigmas).mul(&v.hermitian())
}

/// `sigma_j = j^(-exponent)` for `j = 1..=n`.
pub fn power_law(n: usize, exponent: f64) -> Vec<f64> {
    (1..=n).map(|j| (j as f64).powf(-exponent)).collect()
}

/// Product of two Gaussian quaternion factors, rank `rank` almost surely.
pub fn exact_rank(rows: usize, cols: usize, rank: usize, seed: u64) -> QuatMatrix {
    let a = QuatMatrix::gaussian(rows, rank, RandomMode::Quaternion, seed);
    let b = QuatMatrix::gaussian(rank, cols, RandomMode::Quaternion, seed.wrapping_add(1));
    a.mul(&b).expect("inner dimensions agree")
}

/// Integer-valued image in `[0, 240]` whose pure quaternion embedding has
/// rank at most `rank`: every channel shares the left factor.
pub fn low_rank_image(height: usize, width: usize, rank: usize, seed: u64) -> ColorImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = (240 / rank.max(1)).max(1) as u32;
    let left = DMatrix::from_fn(height, rank, |_, _| f64::from(rng.random_range(0..=1u32)));
    let rights: [DMatrix<f64>; 3] =
        std::array::from_fn(|_| DMatrix::from_fn(rank, width, |_, _| f64::from(rng.random_range(0..=scale))));
    ColorImage::new(rights.map(|r| &left * r)).expect("channels share a shape")
}

struct Wave {
    fx: f64,
    fy: f64,
    phase: f64,
    amp: f64,
}

fn waves(rng: &mut ChaCha8Rng, count: usize, max_freq: f64, amp: f64) -> Vec<Wave> {
    (0..count)
        .map(|n| {
            let decay = 1.0 / (1.0 + n as f64);
            Wave {
                fx: rng.random_range(-max_freq..max_freq),
                fy: rng.random_range(-max_freq..max_freq),
                phase: rng.random_range(0.0..2.0 * PI),
                amp: amp * decay,
            }
        })
        .collect()
}

fn field(ws: &[Wave], u: f64, v: f64) -> f64 {
    ws.iter().map(|w| w.amp * (2.0 * PI * (w.fx * u + w.fy * v) + w.phase).sin()).sum()
}

fn smoothstep(edge: f64, width: f64, t: f64) -> f64 {
    let s = ((t - edge) / width + 0.5).clamp(0.0, 1.0);
    s * s * (3.0 - 2.0 * s)
}

fn mix(a: [f64; 3], b: [f64; 3], t: f64) -> [f64; 3] {
    std::array::from_fn(|c| a[c] * (1.0 - t) + b[c] * t)
}

/// Landscape-like scene: graded sky, soft sun, two mountain ridges and a
/// textured foreground. Smooth at large scales with softened edges, like a
/// downsampled photograph.
pub fn natural_scene(height: usize, width: usize, seed: u64) -> ColorImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let far_ridge = waves(&mut rng, 5, 3.0, 0.05);
    let near_ridge = waves(&mut rng, 6, 4.0, 0.06);
    let ground = waves(&mut rng, 8, 6.0, 18.0);
    let clouds = waves(&mut rng, 6, 2.5, 1.0);
    let sun = (rng.random_range(0.55..0.85), rng.random_range(0.12..0.3));
    let soft = 1.5 / height.max(width) as f64;

    ColorImage::from_fn(height, width, |y, x| {
        let u = x as f64 / width as f64;
        let v = y as f64 / height as f64;
        let sky_top = [70.0, 110.0, 190.0];
        let sky_low = [200.0, 190.0, 170.0];
        let cloud = smoothstep(0.4, 0.5, field(&clouds, u, v * 2.0)) * (1.0 - v);
        let mut px = mix(mix(sky_top, sky_low, v / 0.6), [235.0, 235.0, 240.0], 0.6 * cloud);

        let d = ((u - sun.0).powi(2) + (v - sun.1).powi(2)).sqrt();
        let glow = (-(d * d) / 0.004).exp();
        px = mix(px, [255.0, 240.0, 200.0], glow.min(1.0));

        let far = 0.45 + field(&far_ridge, u, 0.0);
        px = mix(px, [100.0, 110.0, 140.0], smoothstep(far, soft * 2.0, v));

        let near = 0.62 + field(&near_ridge, u, 0.0);
        let shade = 0.8 + 0.2 * (2.0 * PI * (u * 3.0 + v)).sin();
        let hill = [60.0 * shade, 95.0 * shade, 55.0 * shade];
        px = mix(px, hill, smoothstep(near, soft * 2.0, v));

        let fg = smoothstep(0.82, 0.04, v);
        let tex = field(&ground, u, v);
        let soil = [120.0 + tex, 95.0 + 0.8 * tex, 60.0 + 0.5 * tex];
        px = mix(px, soil, fg);
        px.map(|c| c.clamp(0.0, 255.0))
    })
}
