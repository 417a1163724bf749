//! Randomized truncated SVDs with exact pass accounting.
//!
//! Every product with the input goes through [`CountedMatrix`], so the
//! returned `passes_used` is the number of views actually taken:
//!
//! | algorithm                         | parameter | views    |
//! |-----------------------------------|-----------|----------|
//! | [`subspace_tsvd`]                 | power `q` | `2q + 2` |
//! | [`arbitrary_pass_tsvd`]           | budget `v`| `v`      |
//! | [`block_krylov_tsvd`]             | power `q` | `2q + 2` |
//! | [`block_arbitrary_pass_tsvd`]     | budget `v`| `v`      |
//!
//! All randomness is the single Gaussian test matrix drawn from
//! `SketchConfig::seed`; two calls with the same seed see the same `Omega`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::factor::{qr, qsvd, spectral_norm, truncated_svd, QrFactors, SvdFactors};
use crate::ledger::CountedMatrix;
use crate::matrix::{QuatMatrix, RandomMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SketchConfig {
    /// Target rank `k`.
    pub rank: usize,
    /// Oversampling `p`.
    pub oversample: usize,
    pub seed: u64,
    pub random_mode: RandomMode,
}

impl SketchConfig {
    pub fn new(rank: usize, oversample: usize, seed: u64) -> Self {
        Self {
            rank,
            oversample,
            seed,
            random_mode: RandomMode::Real,
        }
    }

    pub fn with_mode(mut self, mode: RandomMode) -> Self {
        self.random_mode = mode;
        self
    }

    /// Sketch width `k + p`.
    pub fn width(&self) -> usize {
        self.rank + self.oversample
    }

    fn validate(&self, x: &QuatMatrix, blocks: usize) -> Result<()> {
        let limit = x.rows().min(x.cols());
        if self.rank == 0 {
            return Err(Error::Rank("target rank must be positive".into()));
        }
        let width = self.width() * blocks;
        if width > limit {
            return Err(Error::Rank(format!(
                "sketch width {width} ({blocks} block(s) of k+p = {}) exceeds min(rows, cols) = {limit}",
                self.width()
            )));
        }
        Ok(())
    }

    fn test_matrix(&self, cols: usize) -> QuatMatrix {
        QuatMatrix::gaussian(cols, self.width(), self.random_mode, self.seed)
    }
}

/// Which factor the final projection favours.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccurateSide {
    /// `U` is at least as accurate as `V`.
    Left,
    /// `V` is at least as accurate as `U`.
    Right,
}

#[derive(Debug, Clone)]
pub struct SketchResult {
    /// Rank-`k` factors.
    pub factors: SvdFactors,
    pub passes_used: usize,
    pub side: AccurateSide,
    /// Final orthonormal basis for the column space (`Q^(1)`, or `Q` for the
    /// block Krylov method).
    pub range_basis: QuatMatrix,
    /// Final orthonormal basis for the row space (`Q^(2)`).
    pub corange_basis: QuatMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Subspace iteration with `q` power steps.
    SubspaceIteration,
    /// Alternating range/co-range QR under a view budget `v`.
    ArbitraryPass,
    /// Block Krylov subspace with `q` power steps.
    BlockKrylov,
    /// Block Krylov under a view budget `v`.
    BlockArbitraryPass,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Self::SubspaceIteration,
        Self::ArbitraryPass,
        Self::BlockKrylov,
        Self::BlockArbitraryPass,
    ];

    /// Command-line number `1..=4`.
    pub fn number(self) -> u8 {
        match self {
            Self::SubspaceIteration => 1,
            Self::ArbitraryPass => 2,
            Self::BlockKrylov => 3,
            Self::BlockArbitraryPass => 4,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.number() == n)
    }

    /// Whether the algorithm is parameterized by power steps `q` (views
    /// `2q + 2`) rather than by a view budget.
    pub fn uses_power(self) -> bool {
        matches!(self, Self::SubspaceIteration | Self::BlockKrylov)
    }

    /// Maps a view budget onto the algorithm's own parameter. Power-based
    /// methods only accept even budgets.
    pub fn parameter_for_passes(self, passes: usize) -> Result<usize> {
        if passes < 2 {
            return Err(Error::PassBudget(passes));
        }
        if self.uses_power() {
            if !passes.is_multiple_of(2) {
                return Err(Error::Rank(format!(
                    "algorithm {} needs an even pass budget, got {passes}",
                    self.number()
                )));
            }
            Ok(passes / 2 - 1)
        } else {
            Ok(passes)
        }
    }

    /// Views consumed for the given parameter.
    pub fn passes_for_parameter(self, param: usize) -> usize {
        if self.uses_power() {
            2 * param + 2
        } else {
            param
        }
    }

    /// Runs the algorithm with its own parameter (`q` or `v`).
    pub fn run(self, x: &QuatMatrix, cfg: &SketchConfig, param: usize) -> Result<SketchResult> {
        match self {
            Self::SubspaceIteration => subspace_tsvd(x, cfg, param),
            Self::ArbitraryPass => arbitrary_pass_tsvd(x, cfg, param),
            Self::BlockKrylov => block_krylov_tsvd(x, cfg, param),
            Self::BlockArbitraryPass => block_arbitrary_pass_tsvd(x, cfg, param),
        }
    }

    /// Runs the algorithm under a total view budget.
    pub fn run_with_passes(self, x: &QuatMatrix, cfg: &SketchConfig, passes: usize) -> Result<SketchResult> {
        self.run(x, cfg, self.parameter_for_passes(passes)?)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alg{}", self.number())
    }
}

impl FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let digits = s.trim_start_matches("alg");
        digits
            .parse::<u8>()
            .ok()
            .and_then(Self::from_number)
            .ok_or_else(|| format!("unknown algorithm `{s}` (expected 1, 2, 3 or 4)"))
    }
}

/// Factors `U = Q1 * a`, `V = Q2 * b` from the small SVD.
fn back_project(
    q1: &QuatMatrix,
    left: &QuatMatrix,
    s: Vec<f64>,
    q2: &QuatMatrix,
    right: &QuatMatrix,
) -> SvdFactors {
    SvdFactors {
        u: q1.mul_unchecked(left),
        s,
        v: q2.mul_unchecked(right),
    }
}

/// `X^H Q1 = Q2 R` gives `R = Vh S Uh^H`, so `V = Q2 Vh` and `U = Q1 Uh`.
fn finish_from_corange(q1: QuatMatrix, qr2: QrFactors, k: usize, passes: usize) -> Result<SketchResult> {
    let small = truncated_svd(&qr2.r, k)?;
    Ok(SketchResult {
        factors: back_project(&q1, &small.v, small.s, &qr2.q, &small.u),
        passes_used: passes,
        side: AccurateSide::Right,
        range_basis: q1,
        corange_basis: qr2.q,
    })
}

/// `X Q2 = Q1 R` gives `R = Uh S Vh^H`, so `U = Q1 Uh` and `V = Q2 Vh`.
fn finish_from_range(qr1: QrFactors, q2: QuatMatrix, k: usize, passes: usize) -> Result<SketchResult> {
    let small = truncated_svd(&qr1.r, k)?;
    Ok(SketchResult {
        factors: back_project(&qr1.q, &small.u, small.s, &q2, &small.v),
        passes_used: passes,
        side: AccurateSide::Left,
        range_basis: qr1.q,
        corange_basis: q2,
    })
}

/// Classical randomized subspace iteration with `power` power steps.
pub fn subspace_tsvd(x: &QuatMatrix, cfg: &SketchConfig, power: usize) -> Result<SketchResult> {
    cfg.validate(x, 1)?;
    let counted = CountedMatrix::new(x);
    let omega = cfg.test_matrix(x.cols());

    let mut q1 = qr(&counted.apply(&omega)?)?.q;
    for _ in 0..power {
        let q2 = qr(&counted.apply_hermitian(&q1)?)?.q;
        q1 = qr(&counted.apply(&q2)?)?.q;
    }
    let qr2 = qr(&counted.apply_hermitian(&q1)?)?;
    finish_from_corange(q1, qr2, cfg.rank, counted.views())
}

/// Randomized truncated SVD using exactly `passes` views of `x`.
///
/// Odd steps orthonormalize `X Q2`, even steps `X^H Q1`, starting from
/// `Q2 = Omega`. The small SVD is taken from the last triangular factor.
pub fn arbitrary_pass_tsvd(x: &QuatMatrix, cfg: &SketchConfig, passes: usize) -> Result<SketchResult> {
    if passes < 2 {
        return Err(Error::PassBudget(passes));
    }
    cfg.validate(x, 1)?;
    let counted = CountedMatrix::new(x);
    let mut q2 = cfg.test_matrix(x.cols());
    let mut q1 = QuatMatrix::zeros(x.rows(), 0);
    let mut last = None;

    for i in 1..=passes {
        if i % 2 == 1 {
            let f = qr(&counted.apply(&q2)?)?;
            q1 = f.q.clone();
            last = Some(f);
        } else {
            let f = qr(&counted.apply_hermitian(&q1)?)?;
            q2 = f.q.clone();
            last = Some(f);
        }
    }
    let last = last.expect("at least two steps ran");
    let views = counted.views();
    if passes.is_multiple_of(2) {
        finish_from_corange(q1, last, cfg.rank, views)
    } else {
        finish_from_range(last, q2, cfg.rank, views)
    }
}

/// Block Krylov method over `[K0, K1, ..., Kq]` with `K0 = X Omega` and
/// `Ki = X X^H K(i-1)`, orthonormalized once after concatenation.
pub fn block_krylov_tsvd(x: &QuatMatrix, cfg: &SketchConfig, power: usize) -> Result<SketchResult> {
    cfg.validate(x, power + 1)?;
    let counted = CountedMatrix::new(x);
    let omega = cfg.test_matrix(x.cols());

    let mut blocks = vec![counted.apply(&omega)?];
    for i in 0..power {
        let back = counted.apply_hermitian(&blocks[i])?;
        blocks.push(counted.apply(&back)?);
    }
    let refs: Vec<&QuatMatrix> = blocks.iter().collect();
    let q = qr(&QuatMatrix::hstack(&refs)?)?.q;
    // Y = Q^H X, taken as (X^H Q)^H
    let y = counted.apply_hermitian(&q)?.hermitian();
    let svd = qsvd(&y);
    let k = cfg.rank;
    Ok(SketchResult {
        factors: SvdFactors {
            u: q.mul_unchecked(&svd.u.columns(0, k)),
            s: svd.s[..k].to_vec(),
            v: svd.v.columns(0, k),
        },
        passes_used: counted.views(),
        side: AccurateSide::Right,
        range_basis: q,
        corange_basis: svd.v,
    })
}

/// Block Krylov variant of [`arbitrary_pass_tsvd`] using exactly `passes`
/// views.
///
/// Steps `1..passes-1` alternate as in the arbitrary-pass method and keep
/// every intermediate basis; the last of them is stored unorthonormalized.
/// Even budgets stack the range blocks `[Q1_1, Q1_3, ...]`, odd budgets the
/// co-range blocks `[Q2_2, Q2_4, ...]`, and one final view closes the
/// factorization.
pub fn block_arbitrary_pass_tsvd(x: &QuatMatrix, cfg: &SketchConfig, passes: usize) -> Result<SketchResult> {
    if passes < 2 {
        return Err(Error::PassBudget(passes));
    }
    let blocks = if passes.is_multiple_of(2) { passes / 2 } else { (passes - 1) / 2 };
    cfg.validate(x, blocks)?;
    let counted = CountedMatrix::new(x);
    let mut q2 = cfg.test_matrix(x.cols());
    let mut q1 = QuatMatrix::zeros(x.rows(), 0);
    let mut range_blocks = Vec::new();
    let mut corange_blocks = Vec::new();

    for i in 1..passes {
        let raw = i == passes - 1;
        if i % 2 == 1 {
            let prod = counted.apply(&q2)?;
            q1 = if raw { prod } else { qr(&prod)?.q };
            range_blocks.push(q1.clone());
        } else {
            let prod = counted.apply_hermitian(&q1)?;
            q2 = if raw { prod } else { qr(&prod)?.q };
            corange_blocks.push(q2.clone());
        }
    }

    if passes.is_multiple_of(2) {
        let refs: Vec<&QuatMatrix> = range_blocks.iter().collect();
        let q1 = qr(&QuatMatrix::hstack(&refs)?)?.q;
        let qr2 = qr(&counted.apply_hermitian(&q1)?)?;
        finish_from_corange(q1, qr2, cfg.rank, counted.views())
    } else {
        let refs: Vec<&QuatMatrix> = corange_blocks.iter().collect();
        let q2 = qr(&QuatMatrix::hstack(&refs)?)?.q;
        let qr1 = qr(&counted.apply(&q2)?)?;
        finish_from_range(qr1, q2, cfg.rank, counted.views())
    }
}

/// Rank-`k` reconstruction `U diag(S) V^H`.
pub fn low_rank_project(x: &QuatMatrix, result: &SketchResult) -> Result<QuatMatrix> {
    let f = &result.factors;
    if f.u.rows() != x.rows() || f.v.rows() != x.cols() {
        return Err(Error::Shape(format!(
            "factors {}x{} do not fit a {:?} matrix",
            f.u.rows(),
            f.v.rows(),
            x.shape()
        )));
    }
    Ok(f.reconstruct())
}

/// `||X - Q Q^H X||_2` for an orthonormal `Q`.
pub fn left_projection_error(x: &QuatMatrix, q: &QuatMatrix) -> f64 {
    let proj = q.mul_unchecked(&q.hermitian_mul_unchecked(x));
    spectral_norm(&x.sub(&proj).expect("same shape"))
}

/// `||X - X Q Q^H||_2` for an orthonormal `Q`.
pub fn right_projection_error(x: &QuatMatrix, q: &QuatMatrix) -> f64 {
    let proj = x.mul_unchecked(q).mul_unchecked(&q.hermitian());
    spectral_norm(&x.sub(&proj).expect("same shape"))
}

/// `||X - U diag(S) V^H||_2`.
pub fn truncation_error(x: &QuatMatrix, result: &SketchResult) -> Result<f64> {
    Ok(spectral_norm(&x.sub(&low_rank_project(x, result)?)?))
}

/// Largest principal angle (radians) between the spans of two orthonormal
/// column sets of equal width.
pub fn max_principal_angle(a: &QuatMatrix, b: &QuatMatrix) -> f64 {
    // sin(theta_max) = ||(I - A A^H) B||_2
    let resid = b
        .sub(&a.mul_unchecked(&a.hermitian_mul_unchecked(b)))
        .expect("same shape");
    spectral_norm(&resid).min(1.0).asin()
}
