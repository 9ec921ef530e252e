//! The resolvent engine.
//!
//! For a boundary pair `(A, B)` and a model with Q-function `Q(z)`,
//!
//! ```text
//! R^{A,B}(z) = R⁰(z) − γ_z C(z) γ*_{z̄},
//! C(z) = B*(Q(z)B* − A*)⁻¹ = (BQ(z) − A)⁻¹B.
//! ```
//!
//! Real `z < 0` at which `BQ(z) − A` is singular are eigenvalues of the
//! extension, with eigenvector `γ_z x` for `x ∈ ker(BQ(z) − A)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::BoundaryPair;
use crate::error::{Error, Result};
use crate::linrel;
use crate::matops::{self, ComplexMatrix, C64};
use crate::models::{SpacePoint, SpectralModel};

/// `σ_min(BQ(z) − A)` above this counts as non-degenerate.
pub const NONDEGENERACY_TOL: f64 = 1e-8;

/// Relative residual bound for accepted eigenpairs.
pub const EIGENPAIR_TOL: f64 = 1e-6;

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// `B*(QB* − A*)⁻¹`
pub fn correction_matrix_form1(p: &BoundaryPair, q: &ComplexMatrix) -> Result<ComplexMatrix> {
    let b_star = p.b().adjoint();
    let m = &(q * &b_star) - &p.a().adjoint();
    matops::solve_right(&b_star, &m)
}

/// `(BQ − A)⁻¹B`
pub fn correction_matrix_form2(p: &BoundaryPair, q: &ComplexMatrix) -> Result<ComplexMatrix> {
    let m = &(p.b() * q) - p.a();
    matops::solve(&m, p.b())
}

/// `BQ(z) − A`
pub fn boundary_operator(p: &BoundaryPair, m: &dyn SpectralModel, z: C64) -> Result<ComplexMatrix> {
    check_dims(p, m)?;
    let q = m.q_matrix(z)?;
    Ok(&(p.b() * &q) - p.a())
}

/// `C(z)` for a model, through [`correction_matrix_form2`].
pub fn correction_matrix(p: &BoundaryPair, m: &dyn SpectralModel, z: C64) -> Result<ComplexMatrix> {
    check_dims(p, m)?;
    let q = m.q_matrix(z)?;
    correction_matrix_form2(p, &q).map_err(|e| singular_at(e, z))
}

/// `C(z)` obtained from the linear relation `(gr Q(z) − Λ^{A,B})⁻¹`.
pub fn abstract_correction(p: &BoundaryPair, m: &dyn SpectralModel, z: C64) -> Result<ComplexMatrix> {
    check_dims(p, m)?;
    let q = m.q_matrix(z)?;
    linrel::invert_shifted_graph(&q, &p.relation())
}

#[derive(Clone, Copy, Debug)]
pub struct NondegeneracyReport {
    /// `det(Q(z)B* − A*)`
    pub det1: C64,
    /// `det(BQ(z) − A)`
    pub det2: C64,
    /// `σ_min(BQ(z) − A)`
    pub sigma_min: f64,
}

impl NondegeneracyReport {
    pub fn is_nondegenerate(&self) -> bool {
        self.sigma_min > NONDEGENERACY_TOL
    }
}

pub fn check_nondegeneracy(p: &BoundaryPair, m: &dyn SpectralModel, z: C64) -> Result<NondegeneracyReport> {
    check_dims(p, m)?;
    let q = m.q_matrix(z)?;
    let first = &(&q * &p.b().adjoint()) - &p.a().adjoint();
    let second = &(p.b() * &q) - p.a();
    Ok(NondegeneracyReport {
        det1: matops::det(&first)?,
        det2: matops::det(&second)?,
        sigma_min: matops::sigma_min(&second),
    })
}

/// `G⁰(x, y; z) − Σ_{j,k} C_{jk}(z) g^j_z(x) g^k_z(y)`
pub fn perturbed_green(
    p: &BoundaryPair,
    m: &dyn SpectralModel,
    x: &SpacePoint,
    y: &SpacePoint,
    z: C64,
) -> Result<C64> {
    let c = correction_matrix(p, m, z)?;
    let free = m.free_green(x, y, z)?;
    let n = m.dim();
    let gx = (0..n).map(|j| m.gamma_basis_value(j, x, z)).collect::<Result<Vec<_>>>()?;
    let gy = (0..n).map(|k| m.gamma_basis_value(k, y, z)).collect::<Result<Vec<_>>>()?;
    let mut correction = C64::new(0.0, 0.0);
    for j in 0..n {
        for k in 0..n {
            correction += c[(j, k)] * gx[j] * gy[k];
        }
    }
    Ok(free - correction)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub z_min: f64,
    pub z_max: f64,
    pub grid_points: usize,
    pub refine_tol: f64,
    /// `None` means `1e−4 · median(σ_min over the grid)`.
    pub detect_threshold: Option<f64>,
}

impl ScanConfig {
    pub fn new(z_min: f64, z_max: f64) -> Self {
        Self { z_min, z_max, grid_points: 400, refine_tol: 1e-10, detect_threshold: None }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.z_min.is_finite() && self.z_max.is_finite()) {
            return Err(Error::BadRange("non-finite bounds".into()));
        }
        if !(self.z_min < self.z_max && self.z_max < 0.0) {
            return Err(Error::BadRange(format!(
                "need z_min < z_max < 0, got [{}, {}]",
                self.z_min, self.z_max
            )));
        }
        if self.grid_points < 2 {
            return Err(Error::BadRange("at least two grid points required".into()));
        }
        if !(self.refine_tol > 0.0) {
            return Err(Error::BadRange("refine_tol must be positive".into()));
        }
        if let Some(t) = self.detect_threshold {
            if !(t > 0.0) {
                return Err(Error::BadRange("detect_threshold must be positive".into()));
            }
        }
        Ok(())
    }

    /// Grid points ascending in `z`, geometrically spaced in `|z|`.
    pub fn grid(&self) -> Vec<f64> {
        let (lo, hi) = (-self.z_max, -self.z_min);
        let last = (self.grid_points - 1) as f64;
        let mut g: Vec<f64> = (0..self.grid_points)
            .map(|i| match i {
                0 => -lo,
                _ if i == self.grid_points - 1 => -hi,
                _ => -(lo * (hi / lo).powf(i as f64 / last)),
            })
            .collect();
        g.reverse();
        g
    }
}

/// A real eigenvalue located by [`scan_eigenvalues`].
#[derive(Clone, Debug, PartialEq)]
pub struct EigenvalueHit {
    pub z: f64,
    /// Unit vector in `ker(BQ(z) − A)`, phase-fixed so the largest component is
    /// real and positive.
    pub null_vector: Vec<C64>,
    pub sigma_min: f64,
    /// `‖(BQ(z) − A) x‖`
    pub residual: f64,
    /// Number of singular values at or below the detection threshold.
    pub multiplicity: usize,
}

fn sigma_min_at(p: &BoundaryPair, m: &dyn SpectralModel, z: f64) -> Result<f64> {
    Ok(matops::sigma_min(&boundary_operator(p, m, C64::new(z, 0.0))?))
}

fn golden_section(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c)?;
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d)?;
            if fd < best.1 {
                best = (d, fd);
            }
        }
    }
    Ok(best)
}

/// Locates real eigenvalues of the extension in `[z_min, z_max]`.
///
/// `σ_min(BQ(z) − A)` is sampled on the grid, every grid-local minimum is
/// refined by golden-section search over its two neighbouring cells, and
/// refined minima at or below the detection threshold are reported, sorted
/// by `z`. Grid evaluations run on the current rayon pool.
pub fn scan_eigenvalues(p: &BoundaryPair, m: &dyn SpectralModel, cfg: &ScanConfig) -> Result<Vec<EigenvalueHit>> {
    cfg.validate()?;
    check_dims(p, m)?;
    let grid = cfg.grid();
    let sigma: Vec<f64> = grid.par_iter().map(|&z| sigma_min_at(p, m, z)).collect::<Result<_>>()?;

    let threshold = cfg.detect_threshold.unwrap_or_else(|| 1e-4 * median(&sigma));
    let last = grid.len() - 1;
    let minima: Vec<usize> = (0..grid.len())
        .filter(|&i| (i == 0 || sigma[i] < sigma[i - 1]) && (i == last || sigma[i] <= sigma[i + 1]))
        .collect();

    let refined: Vec<(f64, f64)> = minima
        .par_iter()
        .map(|&i| {
            let a = grid[i.saturating_sub(1)];
            let b = grid[(i + 1).min(last)];
            let (z, s) = golden_section(|z| sigma_min_at(p, m, z), a, b, cfg.refine_tol)?;
            Ok(if sigma[i] < s { (grid[i], sigma[i]) } else { (z, s) })
        })
        .collect::<Result<_>>()?;

    let mut hits: Vec<EigenvalueHit> = Vec::new();
    for (z, s) in refined {
        if s > threshold {
            continue;
        }
        if let Some(prev) = hits.last_mut() {
            if (z - prev.z).abs() <= 10.0 * cfg.refine_tol {
                if s < prev.sigma_min {
                    *prev = make_hit(p, m, z, threshold)?;
                }
                continue;
            }
        }
        hits.push(make_hit(p, m, z, threshold)?);
    }
    Ok(hits)
}

fn make_hit(p: &BoundaryPair, m: &dyn SpectralModel, z: f64, threshold: f64) -> Result<EigenvalueHit> {
    let op = boundary_operator(p, m, C64::new(z, 0.0))?;
    let svd = matops::jacobi_svd(&op);
    let n = op.cols();
    let mut x = svd.v.col(n - 1);
    fix_phase(&mut x);
    let residual = matops::vec_norm(&op.mul_vec(&x));
    Ok(EigenvalueHit {
        z,
        null_vector: x,
        sigma_min: svd.sigma[n - 1],
        residual,
        multiplicity: svd.sigma.iter().filter(|&&s| s <= threshold).count().max(1),
    })
}

fn fix_phase(x: &mut [C64]) {
    let Some(big) = x.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())) else {
        return;
    };
    if big.norm() == 0.0 {
        return;
    }
    let phase = big.conj() / big.norm();
    for c in x.iter_mut() {
        *c *= phase;
    }
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let k = s.len() / 2;
    if s.len() % 2 == 1 {
        s[k]
    } else {
        0.5 * (s[k - 1] + s[k])
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EigenpairReport {
    /// `‖Γ₁(γ_z x) − x‖`
    pub gamma1_defect: f64,
    /// `‖A Γ₁φ − B Γ₂φ‖` for `φ = γ_z x`, `x` normalized
    pub residual: f64,
    /// `1e−6 · (1 + ‖A‖ + ‖B‖‖Q(z)‖)`
    pub tolerance: f64,
}

/// Rebuilds `φ = γ_z x` and checks that it satisfies the boundary condition.
pub fn verify_eigenpair(p: &BoundaryPair, m: &dyn SpectralModel, hit: &EigenvalueHit) -> Result<EigenpairReport> {
    check_dims(p, m)?;
    let z = C64::new(hit.z, 0.0);
    let norm = matops::vec_norm(&hit.null_vector);
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::VerificationFailed("null vector is zero".into()));
    }
    let x: Vec<C64> = hit.null_vector.iter().map(|c| c / norm).collect();
    let q = m.q_matrix(z)?;
    let bv = m.gamma_boundary_values(&x, z)?;
    let gamma1_defect = matops::vec_norm(&bv.gamma1.iter().zip(&x).map(|(a, b)| a - b).collect::<Vec<_>>());
    let lhs = p.a().mul_vec(&bv.gamma1);
    let rhs = p.b().mul_vec(&bv.gamma2);
    let residual = matops::vec_norm(&lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect::<Vec<_>>());
    let tolerance =
        EIGENPAIR_TOL * (1.0 + p.a().frobenius_norm() + p.b().frobenius_norm() * q.frobenius_norm());
    let report = EigenpairReport { gamma1_defect, residual, tolerance };
    if gamma1_defect > 1e-12 {
        return Err(Error::VerificationFailed(format!("Γ₁γ_z x differs from x by {gamma1_defect:e}")));
    }
    if residual > tolerance {
        return Err(Error::VerificationFailed(format!(
            "boundary residual {residual:e} exceeds {tolerance:e} at z = {}",
            hit.z
        )));
    }
    Ok(report)
}

fn check_dims(p: &BoundaryPair, m: &dyn SpectralModel) -> Result<()> {
    if p.n() != m.dim() {
        return Err(Error::DimensionMismatch(format!(
            "boundary pair has n = {}, model has n = {}",
            p.n(),
            m.dim()
        )));
    }
    Ok(())
}

fn singular_at(e: Error, z: C64) -> Error {
    match e {
        Error::Singular { .. } => Error::SingularAtZ(z),
        other => other,
    }
}
