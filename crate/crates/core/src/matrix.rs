//! Dense quaternion matrices stored as four real component planes.
//!
//! A matrix `X = X1 + X2 i + X3 j + X4 k` keeps `X1..X4` as separate
//! column-major [`DMatrix<f64>`] planes, so every product reduces to real
//! dense kernels. The complex adjoint embedding lives here as well since the
//! factorizations and the test oracles are built on top of it.

use nalgebra::{Complex, DMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;

/// How the Gaussian test matrices are populated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RandomMode {
    /// Real standard normal entries (imaginary planes zero).
    #[default]
    Real,
    /// Independent standard normal entries in all four planes.
    Quaternion,
}

impl std::str::FromStr for RandomMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "real" => Ok(Self::Real),
            "quaternion" | "quat" => Ok(Self::Quaternion),
            other => Err(format!("unknown random mode `{other}` (expected real|quaternion)")),
        }
    }
}

impl std::fmt::Display for RandomMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Real => "real",
            Self::Quaternion => "quaternion",
        })
    }
}

// (sign, lhs plane, rhs plane) contributing to one output plane
type Term<'a> = (f64, &'a DMatrix<f64>, &'a DMatrix<f64>);

#[derive(Debug, Clone, PartialEq)]
pub struct QuatMatrix {
    planes: [DMatrix<f64>; 4],
}

impl QuatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            planes: std::array::from_fn(|_| DMatrix::zeros(rows, cols)),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_real(DMatrix::identity(n, n))
    }

    pub fn from_real(x1: DMatrix<f64>) -> Self {
        let (r, c) = x1.shape();
        Self {
            planes: [
                x1,
                DMatrix::zeros(r, c),
                DMatrix::zeros(r, c),
                DMatrix::zeros(r, c),
            ],
        }
    }

    pub fn from_planes(planes: [DMatrix<f64>; 4]) -> Result<Self> {
        let shape = planes[0].shape();
        if planes.iter().any(|p| p.shape() != shape) {
            return Err(Error::Shape(format!(
                "component planes disagree: {:?}",
                planes.iter().map(|p| p.shape()).collect::<Vec<_>>()
            )));
        }
        Ok(Self { planes })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Quaternion>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Self::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
    }

    /// Builds a matrix from column-major quaternion entries.
    pub fn from_column_major(rows: usize, cols: usize, data: &[Quaternion]) -> Self {
        assert_eq!(data.len(), rows * cols);
        let planes = std::array::from_fn(|c| {
            DMatrix::from_iterator(
                rows,
                cols,
                data.iter().map(|q| match c {
                    0 => q.q0,
                    1 => q.q1,
                    2 => q.q2,
                    _ => q.q3,
                }),
            )
        });
        Self { planes }
    }

    /// Column-major quaternion entries.
    pub fn to_column_major(&self) -> Vec<Quaternion> {
        let [a, b, c, d] = &self.planes;
        a.iter()
            .zip(b.iter())
            .zip(c.iter())
            .zip(d.iter())
            .map(|(((&w, &x), &y), &z)| Quaternion::new(w, x, y, z))
            .collect()
    }

    /// Gaussian test matrix; identical seeds give bitwise-identical output.
    pub fn gaussian(rows: usize, cols: usize, mode: RandomMode, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sample =
            |rng: &mut ChaCha8Rng| DMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng));
        let x1 = sample(&mut rng);
        match mode {
            RandomMode::Real => Self::from_real(x1),
            RandomMode::Quaternion => {
                let x2 = sample(&mut rng);
                let x3 = sample(&mut rng);
                let x4 = sample(&mut rng);
                Self {
                    planes: [x1, x2, x3, x4],
                }
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.planes[0].nrows()
    }

    pub fn cols(&self) -> usize {
        self.planes[0].ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.planes[0].shape()
    }

    pub fn planes(&self) -> &[DMatrix<f64>; 4] {
        &self.planes
    }

    pub fn into_planes(self) -> [DMatrix<f64>; 4] {
        self.planes
    }

    pub fn plane(&self, c: usize) -> &DMatrix<f64> {
        &self.planes[c]
    }

    pub fn plane_mut(&mut self, c: usize) -> &mut DMatrix<f64> {
        &mut self.planes[c]
    }

    pub fn get(&self, i: usize, j: usize) -> Quaternion {
        let [a, b, c, d] = &self.planes;
        Quaternion::new(a[(i, j)], b[(i, j)], c[(i, j)], d[(i, j)])
    }

    pub fn set(&mut self, i: usize, j: usize, q: Quaternion) {
        self.planes[0][(i, j)] = q.q0;
        self.planes[1][(i, j)] = q.q1;
        self.planes[2][(i, j)] = q.q2;
        self.planes[3][(i, j)] = q.q3;
    }

    fn check_same_shape(&self, other: &Self, what: &str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::Shape(format!(
                "{what}: {:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(())
    }

    /// Quaternion product `self * rhs` via the 16 real plane products.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols() != rhs.rows() {
            return Err(Error::Shape(format!(
                "product {:?} x {:?}",
                self.shape(),
                rhs.shape()
            )));
        }
        Ok(self.mul_unchecked(rhs))
    }

    pub(crate) fn mul_unchecked(&self, rhs: &Self) -> Self {
        let [a1, a2, a3, a4] = &self.planes;
        let [b1, b2, b3, b4] = &rhs.planes;
        let (m, n) = (self.rows(), rhs.cols());
        // (sign, lhs plane, rhs plane) per output plane
        let terms: [[Term; 4]; 4] = [
            [(1.0, a1, b1), (-1.0, a2, b2), (-1.0, a3, b3), (-1.0, a4, b4)],
            [(1.0, a1, b2), (1.0, a2, b1), (1.0, a3, b4), (-1.0, a4, b3)],
            [(1.0, a1, b3), (-1.0, a2, b4), (1.0, a3, b1), (1.0, a4, b2)],
            [(1.0, a1, b4), (1.0, a2, b3), (-1.0, a3, b2), (1.0, a4, b1)],
        ];
        let planes = terms.map(|row| {
            let mut c = DMatrix::zeros(m, n);
            for (s, a, b) in row {
                c.gemm(s, a, b, 1.0);
            }
            c
        });
        Self { planes }
    }

    /// `self^H * rhs` without materializing the conjugate transpose.
    pub fn hermitian_mul(&self, rhs: &Self) -> Result<Self> {
        if self.rows() != rhs.rows() {
            return Err(Error::Shape(format!(
                "hermitian product {:?}^H x {:?}",
                self.shape(),
                rhs.shape()
            )));
        }
        Ok(self.hermitian_mul_unchecked(rhs))
    }

    pub(crate) fn hermitian_mul_unchecked(&self, rhs: &Self) -> Self {
        let [x1, x2, x3, x4] = &self.planes;
        let [b1, b2, b3, b4] = &rhs.planes;
        let (m, n) = (self.cols(), rhs.cols());
        let terms: [[Term; 4]; 4] = [
            [(1.0, x1, b1), (1.0, x2, b2), (1.0, x3, b3), (1.0, x4, b4)],
            [(1.0, x1, b2), (-1.0, x2, b1), (-1.0, x3, b4), (1.0, x4, b3)],
            [(1.0, x1, b3), (1.0, x2, b4), (-1.0, x3, b1), (-1.0, x4, b2)],
            [(1.0, x1, b4), (-1.0, x2, b3), (1.0, x3, b2), (-1.0, x4, b1)],
        ];
        let planes = terms.map(|row| {
            let mut c = DMatrix::zeros(m, n);
            for (s, a, b) in row {
                c.gemm_tr(s, a, b, 1.0);
            }
            c
        });
        Self { planes }
    }

    /// Conjugate transpose `X1^T - X2^T i - X3^T j - X4^T k`.
    pub fn hermitian(&self) -> Self {
        let [a, b, c, d] = &self.planes;
        Self {
            planes: [a.transpose(), -b.transpose(), -c.transpose(), -d.transpose()],
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "sum")?;
        Ok(Self {
            planes: std::array::from_fn(|c| &self.planes[c] + &other.planes[c]),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "difference")?;
        Ok(Self {
            planes: std::array::from_fn(|c| &self.planes[c] - &other.planes[c]),
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            planes: std::array::from_fn(|c| &self.planes[c] * s),
        }
    }

    /// Entrywise product with a real matrix, applied to each plane.
    pub fn hadamard_real(&self, weights: &DMatrix<f64>) -> Result<Self> {
        if weights.shape() != self.shape() {
            return Err(Error::Shape(format!(
                "hadamard {:?} vs {:?}",
                self.shape(),
                weights.shape()
            )));
        }
        Ok(Self {
            planes: std::array::from_fn(|c| self.planes[c].component_mul(weights)),
        })
    }

    /// Right-multiplies by the real diagonal `diag(d)`.
    pub fn scale_columns(&self, d: &[f64]) -> Self {
        assert_eq!(d.len(), self.cols());
        let mut out = self.clone();
        for p in &mut out.planes {
            for (j, &s) in d.iter().enumerate() {
                p.column_mut(j).scale_mut(s);
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.planes
            .iter()
            .map(|p| p.iter().map(|v| v * v).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.planes
            .iter()
            .flat_map(|p| p.iter())
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Copy of columns `start..start + count`.
    pub fn columns(&self, start: usize, count: usize) -> Self {
        Self {
            planes: std::array::from_fn(|c| self.planes[c].columns(start, count).into_owned()),
        }
    }

    /// Copy of rows `start..start + count`.
    pub fn row_block(&self, start: usize, count: usize) -> Self {
        Self {
            planes: std::array::from_fn(|c| self.planes[c].rows(start, count).into_owned()),
        }
    }

    /// Horizontal concatenation `[b0 b1 ...]`.
    pub fn hstack(blocks: &[&Self]) -> Result<Self> {
        let rows = blocks
            .first()
            .map(|b| b.rows())
            .ok_or_else(|| Error::Shape("hstack of nothing".into()))?;
        if blocks.iter().any(|b| b.rows() != rows) {
            return Err(Error::Shape("hstack row counts differ".into()));
        }
        let cols: usize = blocks.iter().map(|b| b.cols()).sum();
        let mut out = Self::zeros(rows, cols);
        let mut at = 0;
        for b in blocks {
            for c in 0..4 {
                out.planes[c].columns_mut(at, b.cols()).copy_from(&b.planes[c]);
            }
            at += b.cols();
        }
        Ok(out)
    }

    pub fn to_adjoint(&self) -> ComplexAdjoint {
        let (m, n) = self.shape();
        let [x1, x2, x3, x4] = &self.planes;
        let mut data = DMatrix::zeros(2 * m, 2 * n);
        for j in 0..n {
            for i in 0..m {
                let a = Complex::new(x1[(i, j)], x2[(i, j)]);
                let b = Complex::new(x3[(i, j)], x4[(i, j)]);
                data[(i, j)] = a;
                data[(i, j + n)] = b;
                data[(i + m, j)] = -b.conj();
                data[(i + m, j + n)] = a.conj();
            }
        }
        ComplexAdjoint { data }
    }

    pub fn from_adjoint(adj: &ComplexAdjoint) -> Result<Self> {
        let defect = adj.symmetry_defect();
        let scale = adj.data.iter().fold(1.0_f64, |m, z| m.max(z.norm()));
        if defect > ADJOINT_TOLERANCE * scale {
            return Err(Error::NotAdjoint { defect });
        }
        let (m, n) = (adj.data.nrows() / 2, adj.data.ncols() / 2);
        let mut out = Self::zeros(m, n);
        for j in 0..n {
            for i in 0..m {
                let a = adj.data[(i, j)];
                let b = adj.data[(i, j + n)];
                out.set(i, j, Quaternion::new(a.re, a.im, b.re, b.im));
            }
        }
        Ok(out)
    }
}

/// Relative symplectic-symmetry tolerance accepted by [`QuatMatrix::from_adjoint`].
pub const ADJOINT_TOLERANCE: f64 = 1e-10;

/// Complex `2m x 2n` representation `[[A, B], [-conj(B), conj(A)]]` of
/// `X = A + B j`, where `A = X1 + X2 i` and `B = X3 + X4 i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexAdjoint {
    pub data: DMatrix<Complex<f64>>,
}

impl ComplexAdjoint {
    /// Wraps a complex matrix; fails unless both dimensions are even.
    pub fn new(data: DMatrix<Complex<f64>>) -> Result<Self> {
        if !data.nrows().is_multiple_of(2) || !data.ncols().is_multiple_of(2) {
            return Err(Error::Shape(format!("adjoint must have even dims, got {:?}", data.shape())));
        }
        Ok(Self { data })
    }

    /// Max-abs deviation from `J conj(M) J^T = M` with `J = [[0, I], [-I, 0]]`.
    pub fn symmetry_defect(&self) -> f64 {
        let (m, n) = (self.data.nrows() / 2, self.data.ncols() / 2);
        let mut worst = 0.0_f64;
        for j in 0..2 * n {
            for i in 0..2 * m {
                // (J conj(M) J^T)_{ij} = s_i s_j conj(M_{pi(i), pi(j)})
                let (pi, si) = if i < m { (i + m, 1.0) } else { (i - m, -1.0) };
                let (pj, sj) = if j < n { (j + n, 1.0) } else { (j - n, -1.0) };
                let mirrored = self.data[(pi, pj)].conj() * (si * sj);
                worst = worst.max((mirrored - self.data[(i, j)]).norm());
            }
        }
        worst
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.data.ncols() != rhs.data.nrows() {
            return Err(Error::Shape("adjoint product".into()));
        }
        Ok(Self {
            data: &self.data * &rhs.data,
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}
