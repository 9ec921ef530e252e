//! Dense complex matrices and the handful of factorizations the rest of the
//! crate needs: LU with partial pivoting, one-sided Jacobi SVD, modified
//! Gram–Schmidt and a Hermitian eigenvalue routine.
//!
//! Everything here targets small matrices (a few dozen rows at most).

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Relative pivot threshold used by [`solve`] and [`inverse`].
pub const PIVOT_TOL: f64 = 1e-13;

const JACOBI_EPS: f64 = 1e-15;
const MAX_SWEEPS: usize = 100;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { C64::new(0.0, 0.0) })
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.iter().flatten().copied().collect() }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.iter().flat_map(|row| row.iter().map(|&x| C64::new(x, 0.0))).collect(),
        }
    }

    /// A single column.
    pub fn column(v: &[C64]) -> Self {
        Self { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<C64>]) -> Self {
        assert!(columns.iter().all(|c| c.len() == rows), "column length mismatch");
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<C64>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Copy of the block `rows r0..r1`, `cols c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)])
    }

    /// `(self | other)`
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                other[(i, j - self.cols)]
            }
        })
    }

    /// `(self ; other)`
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|c| c.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&c| f(c)).collect() }
    }

    pub fn scale(&self, alpha: C64) -> Self {
        self.map(|c| alpha * c)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|c| c.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// `‖M* M − I‖_F`
    pub fn unitarity_defect(&self) -> f64 {
        (&(&self.adjoint() * self) - &Self::identity(self.cols)).frobenius_norm()
    }

    /// `‖M − M*‖_F`
    pub fn hermiticity_defect(&self) -> f64 {
        (self - &self.adjoint()).frobenius_norm()
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for c in self.row(i) {
                write!(f, "{:>+.6e}{:+.6e}i  ", c.re, c.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add dimension mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub dimension mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.map(|c| -c)
    }
}

/// Conjugate-transpose, kept as a free function to mirror the other operations.
pub fn adjoint(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint()
}

struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    sign: f64,
    /// smallest pivot modulus encountered
    min_pivot: f64,
}

fn lu_decompose(m: &ComplexMatrix) -> Result<Lu> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    let mut lu = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let mut min_pivot = f64::INFINITY;
    for k in 0..n {
        let (p, pmax) = (k..n)
            .map(|i| (i, lu[(i, k)].norm()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        min_pivot = min_pivot.min(pmax);
        if p != k {
            for j in 0..n {
                lu.data.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let pivot = lu[(k, k)];
        if pivot.norm() == 0.0 {
            continue;
        }
        for i in k + 1..n {
            let l = lu[(i, k)] / pivot;
            lu[(i, k)] = l;
            if l == C64::new(0.0, 0.0) {
                continue;
            }
            for j in k + 1..n {
                let u = lu[(k, j)];
                lu[(i, j)] -= l * u;
            }
        }
    }
    Ok(Lu { lu, perm, sign, min_pivot })
}

/// Determinant via LU with partial pivoting.
pub fn det(m: &ComplexMatrix) -> Result<C64> {
    let f = lu_decompose(m)?;
    let mut d = C64::new(f.sign, 0.0);
    for k in 0..m.rows {
        d *= f.lu[(k, k)];
    }
    Ok(d)
}

/// Solves `M X = RHS`.
///
/// Fails with [`Error::Singular`] when a pivot drops below `1e-13 · ‖M‖_∞`.
pub fn solve(m: &ComplexMatrix, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows, cols: m.cols });
    }
    if m.rows != rhs.rows {
        return Err(Error::DimensionMismatch(format!(
            "solve: matrix has {} rows, right-hand side {}",
            m.rows, rhs.rows
        )));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(ComplexMatrix::zeros(0, rhs.cols));
    }
    let f = lu_decompose(m)?;
    let threshold = PIVOT_TOL * m.inf_norm();
    if f.min_pivot <= threshold || f.min_pivot == 0.0 {
        return Err(Error::Singular { pivot: f.min_pivot, threshold });
    }
    let mut x = ComplexMatrix::from_fn(n, rhs.cols, |i, j| rhs[(f.perm[i], j)]);
    for c in 0..rhs.cols {
        for i in 0..n {
            let mut s = x[(i, c)];
            for k in 0..i {
                s -= f.lu[(i, k)] * x[(k, c)];
            }
            x[(i, c)] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[(i, c)];
            for k in i + 1..n {
                s -= f.lu[(i, k)] * x[(k, c)];
            }
            x[(i, c)] = s / f.lu[(i, i)];
        }
    }
    Ok(x)
}

pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    solve(m, &ComplexMatrix::identity(m.rows))
}

/// Solves `X M = RHS` for `X`, through `M* X* = RHS*`.
pub fn solve_right(rhs: &ComplexMatrix, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(solve(&m.adjoint(), &rhs.adjoint())?.adjoint())
}

/// Right-hand factors of a one-sided (Hestenes) Jacobi SVD.
///
/// For `M` of shape `m×k`, `work = M·V` has mutually orthogonal columns whose
/// norms are the `k` singular values (padded with zeros when `k > m`). Columns
/// are sorted by decreasing norm.
pub struct JacobiSvd {
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
    pub work: ComplexMatrix,
}

pub fn jacobi_svd(m: &ComplexMatrix) -> JacobiSvd {
    let (rows, k) = (m.rows, m.cols);
    // column-major copies make the column rotations cache friendly
    let mut a: Vec<Vec<C64>> = m.columns();
    let mut v: Vec<Vec<C64>> = ComplexMatrix::identity(k).columns();
    // columns below this are numerical zeros; rotating them only feeds subnormals into v
    let floor = (m.frobenius_norm() * 1e-30).powi(2);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in p + 1..k {
                let alpha: f64 = a[p].iter().map(|c| c.norm_sqr()).sum();
                let beta: f64 = a[q].iter().map(|c| c.norm_sqr()).sum();
                let gamma: C64 = a[p].iter().zip(&a[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if alpha <= floor || beta <= floor || g <= JACOBI_EPS * alpha.sqrt() * beta.sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma.conj() / g;
                let phase = phase / phase.norm();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (lo, hi) = a.split_at_mut(q);
                rotate(&mut lo[p], &mut hi[0], phase, c, s);
                let (lo, hi) = v.split_at_mut(q);
                rotate(&mut lo[p], &mut hi[0], phase, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> =
        a.iter().map(|col| col.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sigma = order.iter().map(|&i| norms[i]).collect();
    let v = ComplexMatrix::from_fn(k, k, |i, j| v[order[j]][i]);
    let work = ComplexMatrix::from_fn(rows, k, |i, j| a[order[j]][i]);
    JacobiSvd { sigma, v, work }
}

fn rotate(xp: &mut [C64], xq: &mut [C64], phase: C64, c: f64, s: f64) {
    for (p, q) in xp.iter_mut().zip(xq.iter_mut()) {
        let ap = *p;
        let aq = *q * phase;
        *p = ap * c - aq * s;
        *q = ap * s + aq * c;
    }
}

/// Singular values in descending order; `min(rows, cols)` of them.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut sigma = if m.rows >= m.cols {
        jacobi_svd(m).sigma
    } else {
        jacobi_svd(&m.adjoint()).sigma
    };
    sigma.truncate(m.rows.min(m.cols));
    sigma
}

pub fn sigma_min(m: &ComplexMatrix) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

/// Effective rank cutoff: `tol` if positive, else `1e-12 · σ_max · max(rows, cols)`.
pub fn effective_tol(m: &ComplexMatrix, sigma_max: f64, tol: f64) -> f64 {
    if tol > 0.0 {
        tol
    } else {
        1e-12 * sigma_max * m.rows.max(m.cols) as f64
    }
}

pub fn rank(m: &ComplexMatrix, tol: f64) -> usize {
    let sigma = singular_values(m);
    let cut = effective_tol(m, sigma.first().copied().unwrap_or(0.0), tol);
    sigma.iter().filter(|&&s| s > cut).count()
}

/// Orthonormal basis (as columns) of `{x : M x = 0}`.
///
/// `tol` follows the same convention as [`rank`].
pub fn null_space(m: &ComplexMatrix, tol: f64) -> ComplexMatrix {
    let svd = jacobi_svd(m);
    let cut = effective_tol(m, svd.sigma.first().copied().unwrap_or(0.0), tol);
    let r = svd.sigma.iter().filter(|&&s| s > cut).count();
    svd.v.block(0, m.cols, r, m.cols)
}

/// Orthonormal basis of the column span, with singular values at or below
/// the cutoff discarded.
pub fn range_basis(m: &ComplexMatrix, tol: f64) -> ComplexMatrix {
    let svd = jacobi_svd(m);
    let cut = effective_tol(m, svd.sigma.first().copied().unwrap_or(0.0), tol);
    let r = svd.sigma.iter().filter(|&&s| s > cut).count();
    let cols: Vec<Vec<C64>> = (0..r)
        .map(|j| svd.work.col(j).into_iter().map(|c| c / svd.sigma[j]).collect())
        .collect();
    orthonormal_columns(&ComplexMatrix::from_columns(m.rows, &cols))
}

/// Modified Gram–Schmidt with one reorthogonalization pass. Columns that
/// become negligible (relative to the largest input column) are dropped.
pub fn orthonormal_columns(m: &ComplexMatrix) -> ComplexMatrix {
    let scale = m.columns().iter().map(|c| vec_norm(c)).fold(0.0, f64::max);
    let drop_below = 1e-10 * scale;
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for mut col in m.columns() {
        for _ in 0..2 {
            for q in &basis {
                let proj: C64 = q.iter().zip(&col).map(|(a, b)| a.conj() * b).sum();
                for (c, qi) in col.iter_mut().zip(q) {
                    *c -= proj * qi;
                }
            }
        }
        let norm = vec_norm(&col);
        if norm > drop_below && norm > 0.0 {
            basis.push(col.into_iter().map(|c| c / norm).collect());
        }
    }
    ComplexMatrix::from_columns(m.rows, &basis)
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Uses cyclic Jacobi on the real symmetric embedding
/// `[[Re H, −Im H], [Im H, Re H]]`, whose spectrum is that of `H` doubled.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    if !h.is_square() {
        return Err(Error::NonSquare { rows: h.rows, cols: h.cols });
    }
    let n = h.rows;
    let m = 2 * n;
    let mut s = vec![vec![0.0; m]; m];
    for i in 0..n {
        for j in 0..n {
            // symmetrize to absorb round-off in the input
            let c = 0.5 * (h[(i, j)] + h[(j, i)].conj());
            s[i][j] = c.re;
            s[i + n][j + n] = c.re;
            s[i][j + n] = -c.im;
            s[i + n][j] = c.im;
        }
    }
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| s[i][j] * s[i][j])
            .sum();
        let diag: f64 = (0..m).map(|i| s[i][i] * s[i][i]).sum();
        if off <= 1e-30 * diag.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = s[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (s[q][q] - s[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for row in s.iter_mut() {
                    let (xp, xq) = (row[p], row[q]);
                    row[p] = c * xp - sn * xq;
                    row[q] = sn * xp + c * xq;
                }
                for k in 0..m {
                    let (xp, xq) = (s[p][k], s[q][k]);
                    s[p][k] = c * xp - sn * xq;
                    s[q][k] = sn * xp + c * xq;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..m).map(|i| s[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev.into_iter().step_by(2).collect())
}
