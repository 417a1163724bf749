//! Expected spectral-norm error bounds for the sketching algorithms.
//!
//! Most bounds share the shape
//!
//! ```text
//! ( a * s^e + b * (sum_{j>k} sigma_j^(2e))^(1/2) )^(1/e),   s = sigma_{k+1}
//! a = 1 + 3 sqrt(k / (4p + 2)),   b = 3 e sqrt(4k + 4p + 2) / (2p + 2)
//! ```
//!
//! with an exponent `e` fixed by the algorithm and its pass budget. The sums
//! are evaluated in the log domain so large exponents neither overflow nor
//! underflow.

use std::f64::consts::E;

use crate::error::{Error, Result};

/// Interpretation used by [`block_view_budget_bound`]: the outer root is
/// taken as `1/(2v)`, matching its inner powers `2v` and `4v`.
pub const BLOCK_BUDGET_EXPONENT_NOTE: &str = "block_budget_outer_exponent=1/(2v)";

/// Full singular spectrum of a test matrix, nonincreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumProfile {
    sigmas: Vec<f64>,
}

impl SpectrumProfile {
    pub fn new(sigmas: Vec<f64>) -> Result<Self> {
        if sigmas.iter().any(|s| !s.is_finite() || *s < 0.0) {
            return Err(Error::BoundPrecondition("singular values must be finite and nonnegative".into()));
        }
        if sigmas.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::BoundPrecondition("singular values must be nonincreasing".into()));
        }
        Ok(Self { sigmas })
    }

    /// `sigma_j = j^(-exponent)`, `j = 1..=n`.
    pub fn polynomial(n: usize, exponent: f64) -> Self {
        Self {
            sigmas: (1..=n).map(|j| (j as f64).powf(-exponent)).collect(),
        }
    }

    /// `sigma_j = ratio^(j-1)`.
    pub fn geometric(n: usize, ratio: f64) -> Self {
        Self {
            sigmas: (0..n).map(|j| ratio.powi(j as i32)).collect(),
        }
    }

    /// `rank` unit singular values followed by zeros.
    pub fn exact_rank(n: usize, rank: usize) -> Self {
        Self {
            sigmas: (0..n).map(|j| if j < rank { 1.0 } else { 0.0 }).collect(),
        }
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    pub fn len(&self) -> usize {
        self.sigmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigmas.is_empty()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            sigmas: self.sigmas.iter().map(|s| s * c).collect(),
        }
    }

    fn tail(&self, k: usize) -> &[f64] {
        &self.sigmas[k..]
    }
}

/// Which projection error a view-budget bound refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `||X - Q1 Q1^H X||`
    Left,
    /// `||X - X Q2 Q2^H||`
    Right,
}

fn log_sum_exp(terms: impl IntoIterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.into_iter().filter(|t| *t > f64::NEG_INFINITY).collect();
    let Some(max) = terms.iter().copied().reduce(f64::max) else {
        return f64::NEG_INFINITY;
    };
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

fn coefficient_a(k: usize, p: usize) -> f64 {
    1.0 + 3.0 * (k as f64 / (4 * p + 2) as f64).sqrt()
}

fn coefficient_b(k: usize, p: usize) -> f64 {
    3.0 * E * ((4 * k + 4 * p + 2) as f64).sqrt() / (2 * p + 2) as f64
}

fn check_basic(spec: &SpectrumProfile, k: usize, p: usize, min_k: usize, min_p: usize) -> Result<()> {
    if k < min_k {
        return Err(Error::BoundPrecondition(format!("target rank k = {k} must be at least {min_k}")));
    }
    if p < min_p {
        return Err(Error::BoundPrecondition(format!("oversampling p = {p} must be at least {min_p}")));
    }
    if k + p > spec.len() {
        return Err(Error::BoundPrecondition(format!(
            "k + p = {} exceeds spectrum length {}",
            k + p,
            spec.len()
        )));
    }
    Ok(())
}

/// `(a s^e + b (sum_{j>k} sigma_j^(2e))^(1/2))^(1/e)`.
fn power_bound(spec: &SpectrumProfile, k: usize, p: usize, exponent: f64) -> f64 {
    let s = spec.sigmas[k];
    if s == 0.0 {
        return 0.0;
    }
    let first = coefficient_a(k, p).ln() + exponent * s.ln();
    let tail = log_sum_exp(spec.tail(k).iter().map(|x| 2.0 * exponent * x.ln()));
    let second = coefficient_b(k, p).ln() + 0.5 * tail;
    (log_sum_exp([first, second]) / exponent).exp()
}

/// Expected error of subspace iteration with `power` steps, for the
/// rank-`(k+p)` range projection `||X - Q1 Q1^H X||`.
pub fn subspace_iteration_bound(spec: &SpectrumProfile, k: usize, p: usize, power: usize) -> Result<f64> {
    check_basic(spec, k, p, 1, 1)?;
    Ok(power_bound(spec, k, p, (2 * power + 1) as f64))
}

/// Expected co-range error `||X - X Q2 Q2^H||` when `Q2` spans
/// `(X^H X)^power Omega`.
pub fn corange_power_bound(spec: &SpectrumProfile, k: usize, p: usize, power: usize) -> Result<f64> {
    check_basic(spec, k, p, 2, 2)?;
    if power == 0 {
        return Err(Error::BoundPrecondition("power must be at least 1".into()));
    }
    Ok(power_bound(spec, k, p, (2 * power) as f64))
}

/// Exponent used by [`view_budget_bound`]: the favoured side of a budget
/// `v` gets exponent `v`, the other side `v - 1`.
pub fn view_budget_exponent(passes: usize, side: Side) -> usize {
    match (passes.is_multiple_of(2), side) {
        (true, Side::Right) | (false, Side::Left) => passes,
        _ => passes - 1,
    }
}

/// Expected left or right projection error of the arbitrary-pass method
/// after `passes` views.
pub fn view_budget_bound(spec: &SpectrumProfile, k: usize, p: usize, passes: usize, side: Side) -> Result<f64> {
    if passes < 2 {
        return Err(Error::PassBudget(passes));
    }
    check_basic(spec, k, p, 1, 1)?;
    Ok(power_bound(spec, k, p, view_budget_exponent(passes, side) as f64))
}

/// Expected range error of the block Krylov method with `power` steps.
pub fn block_krylov_bound(spec: &SpectrumProfile, k: usize, p: usize, power: usize) -> Result<f64> {
    check_basic(spec, k, p, 1, 1)?;
    let s = spec.sigmas[k];
    if s == 0.0 {
        return Ok(0.0);
    }
    let steps = (power + 1) as f64;
    let powers: Vec<f64> = (0..=power).map(|i| 2.0 * (2 * i + 1) as f64).collect();
    let a = (1.0 + 3.0 * steps * (k as f64 / (4 * p + 2) as f64).sqrt()).ln()
        + 0.5 * log_sum_exp(powers.iter().map(|e| e * s.ln()));
    let b = (steps * coefficient_b(k, p)).ln()
        + 0.5
            * log_sum_exp(
                spec.tail(k)
                    .iter()
                    .flat_map(|x| powers.iter().map(move |e| e * x.ln())),
            );
    Ok((log_sum_exp([a, b]) / (2 * power + 1) as f64).exp())
}

/// Expected co-range error of the block arbitrary-pass method after
/// `passes` views (see [`BLOCK_BUDGET_EXPONENT_NOTE`]).
pub fn block_view_budget_bound(spec: &SpectrumProfile, k: usize, p: usize, passes: usize) -> Result<f64> {
    if passes < 2 {
        return Err(Error::PassBudget(passes));
    }
    check_basic(spec, k, p, 2, 2)?;
    Ok(power_bound(spec, k, p, (2 * passes) as f64))
}
