//! Color images as pure quaternion matrices: conversion, PSNR, Gaussian
//! smoothing and PNG I/O.
//!
//! A pixel `(R, G, B)` maps to `R i + G j + B k`. Everything stays in `f64`
//! until an image is written, where values are clamped to `[0, 255]` and
//! rounded.

use std::path::Path;

use image::imageops::FilterType;
use image::{Rgb, RgbImage};
use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matrix::QuatMatrix;

pub const PEAK: f64 = 255.0;

/// RGB image with real-valued channels, `height x width` each.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorImage {
    channels: [DMatrix<f64>; 3],
}

impl ColorImage {
    pub fn new(channels: [DMatrix<f64>; 3]) -> Result<Self> {
        let shape = channels[0].shape();
        if channels.iter().any(|c| c.shape() != shape) {
            return Err(Error::Shape("color channels disagree in shape".into()));
        }
        Ok(Self { channels })
    }

    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> [f64; 3]) -> Self {
        let mut channels: [DMatrix<f64>; 3] = std::array::from_fn(|_| DMatrix::zeros(height, width));
        for x in 0..width {
            for y in 0..height {
                let px = f(y, x);
                for c in 0..3 {
                    channels[c][(y, x)] = px[c];
                }
            }
        }
        Self { channels }
    }

    pub fn height(&self) -> usize {
        self.channels[0].nrows()
    }

    pub fn width(&self) -> usize {
        self.channels[0].ncols()
    }

    pub fn channel(&self, c: usize) -> &DMatrix<f64> {
        &self.channels[c]
    }

    pub fn pixel(&self, y: usize, x: usize) -> [f64; 3] {
        std::array::from_fn(|c| self.channels[c][(y, x)])
    }

    /// Values clamped to `[0, 255]`.
    pub fn clamped(&self) -> Self {
        Self {
            channels: self.channels.clone().map(|c| c.map(|v| v.clamp(0.0, PEAK))),
        }
    }

    /// Clamped and rounded to the 8-bit grid, as written to disk.
    pub fn quantized(&self) -> Self {
        Self {
            channels: self.channels.clone().map(|c| c.map(|v| v.clamp(0.0, PEAK).round())),
        }
    }

    pub fn to_rgb8(&self) -> RgbImage {
        let q = self.quantized();
        RgbImage::from_fn(self.width() as u32, self.height() as u32, |x, y| {
            let px = q.pixel(y as usize, x as usize);
            Rgb(px.map(|v| v as u8))
        })
    }

    pub fn from_rgb8(img: &RgbImage) -> Self {
        Self::from_fn(img.height() as usize, img.width() as usize, |y, x| {
            img.get_pixel(x as u32, y as u32).0.map(f64::from)
        })
    }
}

/// `X1 = 0, X2 = R, X3 = G, X4 = B`.
pub fn image_to_quat(img: &ColorImage) -> QuatMatrix {
    let [r, g, b] = img.channels.clone();
    let zero = DMatrix::zeros(img.height(), img.width());
    QuatMatrix::from_planes([zero, r, g, b]).expect("channels share a shape")
}

/// Drops the real plane and clamps the color planes to `[0, 255]`.
pub fn quat_to_image(x: &QuatMatrix) -> ColorImage {
    ColorImage {
        channels: std::array::from_fn(|c| x.plane(c + 1).map(|v| v.clamp(0.0, PEAK))),
    }
}

fn mse_from_sq_sum(sq: f64, count: usize) -> f64 {
    sq / count as f64
}

fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (PEAK * PEAK / mse).log10()
    }
}

/// Peak signal-to-noise ratio in dB with peak 255 and the MSE averaged over
/// all pixels and channels. Identical images give `f64::INFINITY`.
pub fn psnr(a: &ColorImage, b: &ColorImage) -> Result<f64> {
    if a.channels[0].shape() != b.channels[0].shape() {
        return Err(Error::Shape(format!(
            "psnr of {}x{} and {}x{} images",
            a.height(),
            a.width(),
            b.height(),
            b.width()
        )));
    }
    let sq: f64 = (0..3)
        .map(|c| (&a.channels[c] - &b.channels[c]).iter().map(|v| v * v).sum::<f64>())
        .sum();
    Ok(psnr_from_mse(mse_from_sq_sum(sq, 3 * a.height() * a.width())))
}

/// PSNR of two pure quaternion images computed in the quaternion domain.
pub fn psnr_quat(a: &QuatMatrix, b: &QuatMatrix) -> Result<f64> {
    let d = a.sub(b)?;
    let sq = d.frobenius_norm().powi(2);
    Ok(psnr_from_mse(mse_from_sq_sum(sq, 3 * a.rows() * a.cols())))
}

/// Normalized 1-D Gaussian kernel of radius `ceil(3 sigma)`.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as i64;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|t| (-(t * t) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= total);
    k
}

// Half-sample symmetric extension: ... c b a | a b c ... | c b a ...
fn reflect(i: i64, n: i64) -> usize {
    let period = 2 * n;
    let m = i.rem_euclid(period);
    (if m < n { m } else { period - 1 - m }) as usize
}

fn convolve_columns(plane: &DMatrix<f64>, kernel: &[f64]) -> DMatrix<f64> {
    let (rows, cols) = plane.shape();
    let radius = (kernel.len() / 2) as i64;
    DMatrix::from_fn(rows, cols, |i, j| {
        kernel
            .iter()
            .enumerate()
            .map(|(t, w)| w * plane[(reflect(i as i64 + t as i64 - radius, rows as i64), j)])
            .sum()
    })
}

fn blur_plane(plane: &DMatrix<f64>, kernel: &[f64]) -> DMatrix<f64> {
    let vertical = convolve_columns(plane, kernel);
    convolve_columns(&vertical.transpose(), kernel).transpose()
}

/// Separable Gaussian blur of the selected component planes (0 = real,
/// 1..=3 = i, j, k) with reflective boundaries.
pub fn gaussian_blur_planes(x: &QuatMatrix, sigma: f64, planes: &[usize]) -> QuatMatrix {
    if sigma <= 0.0 {
        return x.clone();
    }
    let kernel = gaussian_kernel(sigma);
    let mut out = x.clone();
    for &c in planes {
        *out.plane_mut(c) = blur_plane(x.plane(c), &kernel);
    }
    out
}

/// Gaussian blur of all four planes. A nonpositive `sigma` leaves `x`
/// unchanged.
pub fn gaussian_blur(x: &QuatMatrix, sigma: f64) -> QuatMatrix {
    gaussian_blur_planes(x, sigma, &[0, 1, 2, 3])
}

/// Upsamples by repeating each observed sample on the positions up to the
/// next one: pixel `(y, x)` takes the value at `(factor * (y / factor),
/// factor * (x / factor))`.
pub fn zero_order_hold(img: &ColorImage, factor: usize) -> ColorImage {
    let f = factor.max(1);
    ColorImage::from_fn(img.height(), img.width(), |y, x| img.pixel(f * (y / f), f * (x / f)))
}

/// Reads an 8-bit RGB raster image, optionally resizing with bilinear
/// interpolation to `size = (height, width)`.
pub fn load_image(path: impl AsRef<Path>, size: Option<(usize, usize)>) -> Result<ColorImage> {
    let mut rgb = image::open(path)?.to_rgb8();
    if let Some((h, w)) = size {
        if (rgb.height() as usize, rgb.width() as usize) != (h, w) {
            rgb = image::imageops::resize(&rgb, w as u32, h as u32, FilterType::Triangle);
        }
    }
    Ok(ColorImage::from_rgb8(&rgb))
}

/// Writes an 8-bit RGB image; the format follows the file extension.
pub fn save_image(img: &ColorImage, path: impl AsRef<Path>) -> Result<()> {
    img.to_rgb8().save(path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::RandomMode;

    fn sample_image() -> ColorImage {
        ColorImage::from_fn(6, 5, |y, x| [(10 * y + x) as f64, (3 * x) as f64, 200.0 - y as f64])
    }

    #[test]
    fn embedding_round_trip() {
        let img = sample_image();
        let q = image_to_quat(&img);
        assert_eq!(quat_to_image(&q), img);
        assert!(q.plane(0).iter().all(|&v| v == 0.0));
        let black = ColorImage::from_fn(3, 3, |_, _| [0.0; 3]);
        assert_eq!(image_to_quat(&black).max_abs(), 0.0);
        let sum: f64 = (0..3).map(|c| img.channel(c).iter().map(|v| v * v).sum::<f64>()).sum();
        assert!((q.frobenius_norm() - sum.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn clamping() {
        let mut q = image_to_quat(&sample_image());
        q.plane_mut(1)[(0, 0)] = 300.0;
        q.plane_mut(2)[(0, 0)] = -4.0;
        q.plane_mut(0)[(0, 0)] = 0.7;
        let img = quat_to_image(&q);
        assert_eq!(img.pixel(0, 0)[0], 255.0);
        assert_eq!(img.pixel(0, 0)[1], 0.0);
    }

    #[test]
    fn psnr_values() {
        let a = sample_image();
        assert_eq!(psnr(&a, &a).unwrap(), f64::INFINITY);
        let b = ColorImage::from_fn(6, 5, |y, x| a.pixel(y, x).map(|v| v + 16.0));
        let expected = 10.0 * (255.0_f64 * 255.0 / 256.0).log10();
        assert!((psnr(&a, &b).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 24.048).abs() < 1e-3);
        assert_eq!(psnr(&a, &b).unwrap(), psnr(&b, &a).unwrap());
        let qa = image_to_quat(&a);
        let qb = image_to_quat(&b);
        assert!((psnr_quat(&qa, &qb).unwrap() - expected).abs() < 1e-9);
        let small = ColorImage::from_fn(2, 2, |_, _| [0.0; 3]);
        assert!(matches!(psnr(&a, &small), Err(Error::Shape(_))));
    }

    #[test]
    fn kernel_radius_rule() {
        let k = gaussian_kernel(0.6);
        assert_eq!(k.len(), 5);
        assert!((k.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn blur_preserves_constants_and_mass() {
        let c = QuatMatrix::from_real(DMatrix::from_element(7, 9, 3.5));
        assert!(gaussian_blur(&c, 0.6).sub(&c).unwrap().max_abs() < 1e-12);

        let x = QuatMatrix::gaussian(8, 11, RandomMode::Quaternion, 3);
        let y = gaussian_blur(&x, 1.3);
        for p in 0..4 {
            assert!((x.plane(p).sum() - y.plane(p).sum()).abs() < 1e-9);
        }
        // radius larger than the image still conserves mass
        let tiny = QuatMatrix::gaussian(2, 3, RandomMode::Real, 1);
        let z = gaussian_blur(&tiny, 2.0);
        assert!((tiny.plane(0).sum() - z.plane(0).sum()).abs() < 1e-12);
    }

    #[test]
    fn blur_is_linear() {
        let x = QuatMatrix::gaussian(9, 7, RandomMode::Quaternion, 5);
        let y = QuatMatrix::gaussian(9, 7, RandomMode::Quaternion, 6);
        let lhs = gaussian_blur(&x.scale(2.0).add(&y.scale(-0.5)).unwrap(), 0.6);
        let rhs = gaussian_blur(&x, 0.6).scale(2.0).add(&gaussian_blur(&y, 0.6).scale(-0.5)).unwrap();
        assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn png_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("img.png");
        let img = sample_image();
        save_image(&img, &path).unwrap();
        let back = load_image(&path, None).unwrap();
        assert_eq!(back, img.quantized());
        let resized = load_image(&path, Some((4, 4))).unwrap();
        assert_eq!((resized.height(), resized.width()), (4, 4));
    }

    #[test]
    fn zero_order_hold_repeats_samples() {
        let img = sample_image();
        let z = zero_order_hold(&img, 2);
        assert_eq!(z.pixel(1, 3), img.pixel(0, 2));
        assert_eq!(z.pixel(4, 4), img.pixel(4, 4));
    }
}
