//! Exact factorizations of quaternion matrices: economy QR, QSVD, truncated
//! SVD and the spectral norm.
//!
//! The QSVD works on the Hermitian complex adjoint of the Gram matrix
//! `X^H X` of the shorter side. Its eigenvectors come in symplectic pairs
//! `(w, J conj(w))` that represent the same quaternion vector, so one
//! representative per pair is kept by quaternion Gram-Schmidt against the
//! vectors already accepted.

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::matrix::QuatMatrix;
use crate::quaternion::Quaternion;

/// Singular values below `DROP_TOLERANCE * sigma_1` are reported as zero.
pub const DROP_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct QrFactors {
    /// `rows x cols`, orthonormal columns.
    pub q: QuatMatrix,
    /// `cols x cols`, upper triangular with real nonnegative diagonal.
    pub r: QuatMatrix,
}

#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub u: QuatMatrix,
    /// Nonincreasing, nonnegative.
    pub s: Vec<f64>,
    pub v: QuatMatrix,
}

impl SvdFactors {
    pub fn rank(&self) -> usize {
        self.s.len()
    }

    /// `U diag(S) V^H`.
    pub fn reconstruct(&self) -> QuatMatrix {
        self.u
            .scale_columns(&self.s)
            .mul_unchecked(&self.v.hermitian())
    }

    /// Leading `k` triplets.
    pub fn truncate(&self, k: usize) -> Self {
        Self {
            u: self.u.columns(0, k),
            s: self.s[..k].to_vec(),
            v: self.v.columns(0, k),
        }
    }
}

// Column-major dense quaternion workspace used by the elementwise kernels.
struct Work {
    rows: usize,
    data: Vec<Quaternion>,
}

impl Work {
    fn from_matrix(x: &QuatMatrix) -> Self {
        Self {
            rows: x.rows(),
            data: x.to_column_major(),
        }
    }

    fn col(&self, j: usize) -> &[Quaternion] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    fn col_mut(&mut self, j: usize) -> &mut [Quaternion] {
        let r = self.rows;
        &mut self.data[j * r..(j + 1) * r]
    }
}

/// `sum_i conj(a_i) b_i`
fn hdot(a: &[Quaternion], b: &[Quaternion]) -> Quaternion {
    a.iter()
        .zip(b)
        .fold(Quaternion::ZERO, |acc, (&x, &y)| acc + x.conj() * y)
}

fn vnorm(a: &[Quaternion]) -> f64 {
    a.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
}

/// `v <- v - u * t`
fn sub_scaled(v: &mut [Quaternion], u: &[Quaternion], t: Quaternion) {
    for (vi, &ui) in v.iter_mut().zip(u) {
        *vi -= ui * t;
    }
}

/// Two rounds of classical Gram-Schmidt of `v` against orthonormal `basis`.
fn orthogonalize(v: &mut [Quaternion], basis: &[Vec<Quaternion>]) {
    for _ in 0..2 {
        for b in basis {
            let t = hdot(b, v);
            sub_scaled(v, b, t);
        }
    }
}

/// Greedily extends orthonormal `basis` to `count` members from `candidates`,
/// always taking the candidate with the largest residual.
fn extend_greedy(basis: &mut Vec<Vec<Quaternion>>, candidates: Vec<Vec<Quaternion>>, count: usize) {
    if basis.len() >= count {
        return;
    }
    let mut residuals: Vec<Vec<Quaternion>> = candidates
        .into_iter()
        .map(|mut c| {
            orthogonalize(&mut c, basis);
            c
        })
        .collect();
    while basis.len() < count && !residuals.is_empty() {
        let (best, norm) = residuals
            .iter()
            .enumerate()
            .map(|(i, r)| (i, vnorm(r)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        if norm < 1e-8 {
            break;
        }
        let mut v = residuals.swap_remove(best);
        orthogonalize(&mut v, basis);
        let n = vnorm(&v);
        v.iter_mut().for_each(|x| *x = x.scale(1.0 / n));
        for r in &mut residuals {
            let t = hdot(&v, r);
            sub_scaled(r, &v, t);
        }
        basis.push(v);
    }
}

/// Extends `basis` with unit vectors orthogonal to it until it has `count`
/// members, drawing candidates from the standard basis.
fn complete_orthonormal(basis: &mut Vec<Vec<Quaternion>>, dim: usize, count: usize) {
    if basis.len() >= count {
        return;
    }
    let candidates = (0..dim)
        .map(|e| {
            let mut v = vec![Quaternion::ZERO; dim];
            v[e] = Quaternion::ONE;
            v
        })
        .collect();
    extend_greedy(basis, candidates, count);
}

fn matrix_from_columns(rows: usize, cols: &[Vec<Quaternion>]) -> QuatMatrix {
    let data: Vec<Quaternion> = cols.iter().flatten().copied().collect();
    QuatMatrix::from_column_major(rows, cols.len(), &data)
}

/// Economy Householder QR, `X = Q R`.
///
/// Each column is reduced by a quaternion reflector `I - 2 w w^H`; a final
/// unit-quaternion rescaling makes the diagonal of `R` real and nonnegative.
pub fn qr(x: &QuatMatrix) -> Result<QrFactors> {
    let (m, n) = x.shape();
    if m < n {
        return Err(Error::Shape(format!(
            "economy QR needs rows >= cols, got {m}x{n}"
        )));
    }
    let mut a = Work::from_matrix(x);
    let mut reflectors: Vec<Option<Vec<Quaternion>>> = Vec::with_capacity(n);

    for j in 0..n {
        let head = &a.col(j)[j..];
        let norm = vnorm(head);
        if norm == 0.0 {
            reflectors.push(None);
            continue;
        }
        let alpha = -head[0].unit_or_one().scale(norm);
        let mut w = head.to_vec();
        w[0] -= alpha;
        let wn = vnorm(&w);
        if wn == 0.0 {
            reflectors.push(None);
            continue;
        }
        w.iter_mut().for_each(|q| *q = q.scale(1.0 / wn));

        {
            let col = &mut a.col_mut(j)[j..];
            col[0] = alpha;
            col[1..].iter_mut().for_each(|q| *q = Quaternion::ZERO);
        }
        for c in j + 1..n {
            let col = &mut a.col_mut(c)[j..];
            let t = hdot(&w, col).scale(2.0);
            sub_scaled(col, &w, t);
        }
        reflectors.push(Some(w));
    }

    // Q = H_0 H_1 ... H_{n-1} [I; 0]
    let mut q = Work {
        rows: m,
        data: vec![Quaternion::ZERO; m * n],
    };
    for j in 0..n {
        q.col_mut(j)[j] = Quaternion::ONE;
    }
    for (j, w) in reflectors.iter().enumerate().rev() {
        let Some(w) = w else { continue };
        for c in 0..n {
            let col = &mut q.col_mut(c)[j..];
            let t = hdot(w, col).scale(2.0);
            sub_scaled(col, w, t);
        }
    }

    let mut r = QuatMatrix::zeros(n, n);
    for c in 0..n {
        for i in 0..=c {
            r.set(i, c, a.col(c)[i]);
        }
    }
    // Q D, D^H R with D = diag(r_jj / |r_jj|)
    for j in 0..n {
        let rjj = r.get(j, j);
        let d = rjj.unit_or_one();
        for qi in q.col_mut(j) {
            *qi = *qi * d;
        }
        let dc = d.conj();
        for c in j + 1..n {
            r.set(j, c, dc * r.get(j, c));
        }
        r.set(j, j, Quaternion::real(rjj.norm()));
    }

    Ok(QrFactors {
        q: QuatMatrix::from_column_major(m, n, &q.data),
        r,
    })
}

/// Hermitian complex adjoint of a quaternion Gram matrix, symmetrized.
fn hermitian_adjoint(gram: &QuatMatrix) -> DMatrix<Complex<f64>> {
    let a = gram.to_adjoint().data;
    (&a + a.adjoint()).scale(0.5)
}

/// Quaternion vector represented by the complex adjoint column `[a; c]`,
/// namely `a - conj(c) j`.
fn quaternion_from_adjoint_column(col: &[Complex<f64>]) -> Vec<Quaternion> {
    let n = col.len() / 2;
    (0..n)
        .map(|i| {
            let a = col[i];
            let c = col[i + n];
            Quaternion::new(a.re, a.im, -c.re, c.im)
        })
        .collect()
}

/// Economy QSVD `X = U diag(S) V^H` with `r = min(rows, cols)` triplets.
pub fn qsvd(x: &QuatMatrix) -> SvdFactors {
    let (m, n) = x.shape();
    if m < n {
        let t = qsvd(&x.hermitian());
        return SvdFactors {
            u: t.v,
            s: t.s,
            v: t.u,
        };
    }
    if n == 0 {
        return SvdFactors {
            u: QuatMatrix::zeros(m, 0),
            s: Vec::new(),
            v: QuatMatrix::zeros(0, 0),
        };
    }

    let gram = x.hermitian_mul_unchecked(x);
    let eig = SymmetricEigen::new(hermitian_adjoint(&gram));
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let mut right: Vec<Vec<Quaternion>> = Vec::with_capacity(n);
    let mut rejected = Vec::new();
    for idx in order {
        if right.len() == n {
            break;
        }
        let col: Vec<Complex<f64>> = eig.eigenvectors.column(idx).iter().copied().collect();
        let v0 = quaternion_from_adjoint_column(&col);
        let mut v = v0.clone();
        orthogonalize(&mut v, &right);
        let nv = vnorm(&v);
        // the symplectic partner of an accepted vector collapses to ~0 here
        if nv > 0.5 {
            v.iter_mut().for_each(|q| *q = q.scale(1.0 / nv));
            right.push(v);
        } else {
            rejected.push(v0);
        }
    }
    // clustered eigenvalues can mix partners enough to fail the test above
    extend_greedy(&mut right, rejected, n);
    complete_orthonormal(&mut right, n, n);

    let v_mat = matrix_from_columns(n, &right);
    let xv = Work::from_matrix(&x.mul_unchecked(&v_mat));
    let mut triplets: Vec<(f64, usize)> = (0..n).map(|j| (vnorm(xv.col(j)), j)).collect();
    // stable: ties keep eigendecomposition order
    triplets.sort_by(|a, b| b.0.total_cmp(&a.0));

    let sigma_max = triplets[0].0;
    let mut s = Vec::with_capacity(n);
    let mut v_sorted = Vec::with_capacity(n);
    let mut left: Vec<Vec<Quaternion>> = Vec::with_capacity(n);
    for &(sigma, j) in &triplets {
        v_sorted.push(right[j].clone());
        if sigma > 0.0 && sigma >= DROP_TOLERANCE * sigma_max {
            let mut u: Vec<Quaternion> = xv.col(j).iter().map(|q| q.scale(1.0 / sigma)).collect();
            orthogonalize(&mut u, &left);
            let nu = vnorm(&u);
            u.iter_mut().for_each(|q| *q = q.scale(1.0 / nu));
            left.push(u);
            s.push(sigma);
        } else {
            s.push(0.0);
        }
    }
    // zero singular values sit at the tail, so extension keeps column order
    complete_orthonormal(&mut left, m, n);

    SvdFactors {
        u: matrix_from_columns(m, &left),
        s,
        v: matrix_from_columns(n, &v_sorted),
    }
}

/// Leading `k` singular triplets of `x`.
pub fn truncated_svd(x: &QuatMatrix, k: usize) -> Result<SvdFactors> {
    let r = x.rows().min(x.cols());
    if k == 0 || k > r {
        return Err(Error::Rank(format!(
            "truncation rank {k} outside 1..={r}"
        )));
    }
    Ok(qsvd(x).truncate(k))
}

/// Largest singular value, from the eigenvalues of the adjoint Gram matrix.
pub fn spectral_norm(x: &QuatMatrix) -> f64 {
    let (m, n) = x.shape();
    if m == 0 || n == 0 {
        return 0.0;
    }
    let gram = if m >= n {
        x.hermitian_mul_unchecked(x)
    } else {
        let xh = x.hermitian();
        xh.hermitian_mul_unchecked(&xh)
    };
    let lambda = hermitian_adjoint(&gram)
        .symmetric_eigenvalues()
        .iter()
        .fold(0.0_f64, |m, &l| m.max(l));
    lambda.sqrt()
}

/// Singular values of the complex adjoint of `x` (each quaternion singular
/// value appears twice), sorted nonincreasing. Used as an independent oracle.
pub fn adjoint_singular_values(x: &QuatMatrix) -> Vec<f64> {
    let adj = x.to_adjoint().data;
    let mut s: Vec<f64> = adj.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}
