//! Empirical checks of the error bounds: synthetic matrices with a chosen
//! spectrum, the projection error each algorithm's bound refers to, and a
//! trial sweep over pass budgets.

use std::fmt;
use std::str::FromStr;

use crate::bounds::{
    block_krylov_bound, block_view_budget_bound, subspace_iteration_bound, view_budget_bound, Side,
    SpectrumProfile,
};
use crate::error::{Error, Result};
use crate::matrix::QuatMatrix;
use crate::sketch::{left_projection_error, right_projection_error, Algorithm, SketchConfig, SketchResult};
use crate::synthetic::with_spectrum;

/// Singular value family: `power:E` (`j^-E`), `geometric:R` (`R^(j-1)`) or
/// `rank:K` (`K` unit values, then zeros).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumSpec {
    Power(f64),
    Geometric(f64),
    Rank(usize),
}

impl SpectrumSpec {
    pub fn profile(self, n: usize) -> SpectrumProfile {
        match self {
            SpectrumSpec::Power(e) => SpectrumProfile::polynomial(n, e),
            SpectrumSpec::Geometric(r) => SpectrumProfile::geometric(n, r),
            SpectrumSpec::Rank(k) => SpectrumProfile::exact_rank(n, k.min(n)),
        }
    }
}

impl FromStr for SpectrumSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Shape(format!("unknown spectrum '{s}', expected power:E, geometric:R or rank:K"));
        let (kind, value) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "power" => value.parse().map(SpectrumSpec::Power).map_err(|_| bad()),
            "geometric" => match value.parse::<f64>() {
                Ok(r) if r > 0.0 && r <= 1.0 => Ok(SpectrumSpec::Geometric(r)),
                _ => Err(bad()),
            },
            "rank" => value.parse().map(SpectrumSpec::Rank).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for SpectrumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectrumSpec::Power(e) => write!(f, "power:{e}"),
            SpectrumSpec::Geometric(r) => write!(f, "geometric:{r}"),
            SpectrumSpec::Rank(k) => write!(f, "rank:{k}"),
        }
    }
}

/// Test matrix with the profile's spectrum.
pub fn spectrum_matrix(rows: usize, cols: usize, profile: &SpectrumProfile, seed: u64) -> Result<QuatMatrix> {
    let n = rows.min(cols);
    with_spectrum(rows, cols, &profile.sigmas()[..n.min(profile.len())], seed)
}

/// Sides whose projection error has a bound for this algorithm and budget.
pub fn bounded_sides(alg: Algorithm) -> &'static [Side] {
    match alg {
        Algorithm::SubspaceIteration | Algorithm::BlockKrylov => &[Side::Left],
        Algorithm::ArbitraryPass => &[Side::Left, Side::Right],
        Algorithm::BlockArbitraryPass => &[Side::Right],
    }
}

/// Projection error on `side` using the full sketch basis of that side.
pub fn projection_error(x: &QuatMatrix, result: &SketchResult, side: Side) -> f64 {
    match side {
        Side::Left => left_projection_error(x, &result.range_basis),
        Side::Right => right_projection_error(x, &result.corange_basis),
    }
}

/// Theoretical bound on [`projection_error`] for `alg` run with `param`
/// (power for algorithms 1 and 3, passes for 2 and 4).
pub fn theoretical_bound(
    alg: Algorithm,
    profile: &SpectrumProfile,
    k: usize,
    p: usize,
    param: usize,
    side: Side,
) -> Result<f64> {
    match alg {
        Algorithm::SubspaceIteration => subspace_iteration_bound(profile, k, p, param),
        Algorithm::ArbitraryPass => view_budget_bound(profile, k, p, param, side),
        Algorithm::BlockKrylov => block_krylov_bound(profile, k, p, param),
        Algorithm::BlockArbitraryPass => block_view_budget_bound(profile, k, p, param),
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub spectrum: SpectrumSpec,
    pub rows: usize,
    pub cols: usize,
    pub algorithms: Vec<Algorithm>,
    pub rank: usize,
    pub oversample: usize,
    pub passes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
}

/// One measured configuration: per-trial errors, their mean and the bound.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub algorithm: Algorithm,
    pub passes: usize,
    pub param: usize,
    pub side: Side,
    pub errors: Vec<f64>,
    pub mean: f64,
    pub bound: f64,
    /// Total time inside the algorithm calls.
    pub seconds: f64,
}

impl BenchRow {
    pub fn within_bound(&self) -> bool {
        self.mean <= self.bound
    }
}

/// Seed of the random test matrix for trial `t`; the data matrix uses `seed`.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_add(1 + trial as u64)
}

/// Runs every algorithm over the pass sweep. Budgets a power method cannot
/// use (odd ones) are skipped.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let profile = cfg.spectrum.profile(cfg.rows.min(cfg.cols));
    let x = spectrum_matrix(cfg.rows, cfg.cols, &profile, cfg.seed)?;
    let mut rows = Vec::new();
    for &alg in &cfg.algorithms {
        for &passes in &cfg.passes {
            let Ok(param) = alg.parameter_for_passes(passes) else { continue };
            let sides = bounded_sides(alg);
            let mut errors = vec![Vec::with_capacity(cfg.trials); sides.len()];
            let mut seconds = 0.0;
            for t in 0..cfg.trials {
                let sketch = SketchConfig::new(cfg.rank, cfg.oversample, trial_seed(cfg.seed, t));
                let start = std::time::Instant::now();
                let result = alg.run(&x, &sketch, param)?;
                seconds += start.elapsed().as_secs_f64();
                for (errs, &side) in errors.iter_mut().zip(sides) {
                    errs.push(projection_error(&x, &result, side));
                }
            }
            for (errs, &side) in errors.into_iter().zip(sides) {
                let mean = errs.iter().sum::<f64>() / errs.len().max(1) as f64;
                rows.push(BenchRow {
                    algorithm: alg,
                    passes,
                    param,
                    side,
                    bound: theoretical_bound(alg, &profile, cfg.rank, cfg.oversample, param, side)?,
                    errors: errs,
                    mean,
                    seconds,
                });
            }
        }
    }
    Ok(rows)
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
