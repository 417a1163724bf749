//! Rank-constrained matrix completion by alternating a randomized low-rank
//! projection with replacement of the observed entries.
//!
//! Each iteration computes `X = L(C)` with one of the sketching algorithms,
//! optionally blurs the color planes of `X`, and then sets
//! `C <- mask * M + (1 - mask) * X`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::imgio::gaussian_blur_planes;
use crate::matrix::{QuatMatrix, RandomMode};
use crate::sketch::{low_rank_project, Algorithm, SketchConfig};

pub const DEFAULT_MAX_ITERS: usize = 50;
pub const DEFAULT_TOL: f64 = 1e-4;
pub const DEFAULT_OVERSAMPLE: usize = 5;

/// Binary sampling pattern; `1.0` marks an observed entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    data: DMatrix<f64>,
}

impl Mask {
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        if data.iter().any(|&v| v != 0.0 && v != 1.0) {
            return Err(Error::Mask("mask entries must be 0 or 1".into()));
        }
        Ok(Self { data })
    }

    pub fn full(rows: usize, cols: usize) -> Self {
        Self { data: DMatrix::from_element(rows, cols, 1.0) }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        Self { data: DMatrix::from_fn(rows, cols, |i, j| if f(i, j) { 1.0 } else { 0.0 }) }
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.data.shape()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn is_observed(&self, i: usize, j: usize) -> bool {
        self.data[(i, j)] == 1.0
    }

    pub fn observed_count(&self) -> usize {
        self.data.iter().filter(|&&v| v == 1.0).count()
    }

    pub fn complement(&self) -> Self {
        Self { data: self.data.map(|v| 1.0 - v) }
    }
}

/// Entry-wise product with the mask.
pub fn project_mask(x: &QuatMatrix, mask: &Mask) -> Result<QuatMatrix> {
    x.hadamard_real(&mask.data)
}

/// Each entry is hidden independently with probability `missing_fraction`.
pub fn random_mask(rows: usize, cols: usize, missing_fraction: f64, seed: u64) -> Result<Mask> {
    if !(0.0..1.0).contains(&missing_fraction) {
        return Err(Error::Mask(format!("missing fraction {missing_fraction} outside [0, 1)")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(Mask::from_fn(rows, cols, |_, _| rng.random::<f64>() >= missing_fraction))
}

/// Observes the positions whose row and column indices are both multiples
/// of `factor`.
pub fn superres_mask(rows: usize, cols: usize, factor: usize) -> Result<Mask> {
    if factor < 2 {
        return Err(Error::Mask(format!("super-resolution factor {factor} must be at least 2")));
    }
    Ok(Mask::from_fn(rows, cols, |i, j| i % factor == 0 && j % factor == 0))
}

/// Relative Frobenius error restricted to the entries the mask hides.
pub fn hidden_relative_error(estimate: &QuatMatrix, truth: &QuatMatrix, mask: &Mask) -> Result<f64> {
    let hidden = mask.complement();
    let diff = project_mask(&estimate.sub(truth)?, &hidden)?;
    let reference = project_mask(truth, &hidden)?.frobenius_norm();
    Ok(if reference == 0.0 { diff.frobenius_norm() } else { diff.frobenius_norm() / reference })
}

#[derive(Debug, Clone)]
pub struct CompletionProblem {
    observed: QuatMatrix,
    mask: Mask,
    pub rank: usize,
    pub oversample: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub smoothing_sigma: f64,
    pub solver: Algorithm,
    /// Power `q` for algorithms 1 and 3, pass count `v` for 2 and 4.
    pub solver_param: usize,
    pub seed: u64,
    pub random_mode: RandomMode,
}

impl CompletionProblem {
    /// Builds a problem from the full data matrix, zeroing the entries the
    /// mask hides. Defaults: two-pass algorithm 2, 50 iterations, tolerance
    /// 1e-4, no smoothing, oversampling 5, seed 0.
    pub fn new(data: &QuatMatrix, mask: Mask, rank: usize) -> Result<Self> {
        if data.shape() != mask.shape() {
            return Err(Error::Shape(format!(
                "data is {}x{} but mask is {}x{}",
                data.rows(),
                data.cols(),
                mask.rows(),
                mask.cols()
            )));
        }
        if rank == 0 || rank > data.rows().min(data.cols()) {
            return Err(Error::Rank(format!(
                "completion rank {rank} must lie in 1..={}",
                data.rows().min(data.cols())
            )));
        }
        let observed = project_mask(data, &mask)?;
        Ok(Self {
            observed,
            mask,
            rank,
            oversample: DEFAULT_OVERSAMPLE,
            max_iters: DEFAULT_MAX_ITERS,
            tol: DEFAULT_TOL,
            smoothing_sigma: 0.0,
            solver: Algorithm::ArbitraryPass,
            solver_param: 2,
            seed: 0,
            random_mode: RandomMode::Real,
        })
    }

    pub fn with_solver(mut self, solver: Algorithm, param: usize) -> Self {
        self.solver = solver;
        self.solver_param = param;
        self
    }

    pub fn with_smoothing(mut self, sigma: f64) -> Self {
        self.smoothing_sigma = sigma;
        self
    }

    pub fn with_stopping(mut self, max_iters: usize, tol: f64) -> Self {
        self.max_iters = max_iters;
        self.tol = tol;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_oversample(mut self, p: usize) -> Self {
        self.oversample = p;
        self
    }

    pub fn observed(&self) -> &QuatMatrix {
        &self.observed
    }

    pub fn mask(&self) -> &Mask {
        &self.mask
    }

    // Oversampling shrinks when the sketch would not fit the matrix.
    fn sketch_config(&self) -> SketchConfig {
        let blocks = match self.solver {
            Algorithm::BlockKrylov => self.solver_param + 1,
            Algorithm::BlockArbitraryPass => (self.solver_param / 2).max(1),
            _ => 1,
        };
        let room = self.observed.rows().min(self.observed.cols()) / blocks;
        let p = self.oversample.min(room.saturating_sub(self.rank));
        SketchConfig::new(self.rank, p, self.seed).with_mode(self.random_mode)
    }
}

#[derive(Debug, Clone)]
pub struct CompletionTrace {
    pub iterations: usize,
    /// `||C_new - C||_F / ||C||_F` for every iteration run.
    pub changes: Vec<f64>,
    pub estimate: QuatMatrix,
}

fn relative_change(new: &QuatMatrix, old: &QuatMatrix) -> f64 {
    let delta = new.sub(old).expect("iterates share a shape").frobenius_norm();
    let base = old.frobenius_norm();
    if base > 0.0 {
        delta / base
    } else if delta == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

pub fn complete(problem: &CompletionProblem) -> Result<CompletionTrace> {
    let cfg = problem.sketch_config();
    let hidden = problem.mask.complement();
    let mut current = problem.observed.clone();
    let mut changes = Vec::new();
    for _ in 0..problem.max_iters {
        let sketch = problem.solver.run(&current, &cfg, problem.solver_param)?;
        let mut low_rank = low_rank_project(&current, &sketch)?;
        if problem.smoothing_sigma > 0.0 {
            low_rank = gaussian_blur_planes(&low_rank, problem.smoothing_sigma, &[1, 2, 3]);
        }
        let next = problem.observed.add(&project_mask(&low_rank, &hidden)?)?;
        let change = relative_change(&next, &current);
        current = next;
        changes.push(change);
        if change < problem.tol {
            break;
        }
    }
    Ok(CompletionTrace { iterations: changes.len(), changes, estimate: current })
}
