//! Boundary-condition pairs `(A, B)` describing `A Γ₁φ = B Γ₂φ`.
//!
//! A pair defines a self-adjoint extension iff `A B*` is self-adjoint and the
//! `n × 2n` block `(A | B)` has rank `n`. Pairs are stored exactly as given;
//! `(A, B)` and `(MA, MB)` with invertible `M` describe the same extension.

use crate::error::{Error, Result};
use crate::linrel::LinearRelation;
use crate::matops::{self, ComplexMatrix, C64};

/// Relative tolerance on `‖AB* − BA*‖_F`, scaled by `1 + ‖A‖_F ‖B‖_F`.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Tolerance on `‖U*U − I‖_F`.
pub const UNITARY_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct BoundaryPair {
    a: ComplexMatrix,
    b: ComplexMatrix,
    validated: bool,
}

/// Diagnostics recorded while validating a pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidationReport {
    /// `‖AB* − (AB*)*‖_F`
    pub hermiticity_defect: f64,
    pub tolerance: f64,
    /// rank of `(A | B)`
    pub rank: usize,
}

impl BoundaryPair {
    /// Checks both conditions and returns a validated pair.
    pub fn validate(a: ComplexMatrix, b: ComplexMatrix) -> Result<Self> {
        let report = Self::diagnose(&a, &b)?;
        let n = a.rows();
        if report.hermiticity_defect > report.tolerance {
            return Err(Error::NotSelfAdjointCondition {
                defect: report.hermiticity_defect,
                tolerance: report.tolerance,
            });
        }
        if report.rank != n {
            return Err(Error::RankDeficient { rank: report.rank, n });
        }
        Ok(Self { a, b, validated: true })
    }

    /// Shape checks only. Used for diagnostics and negative controls.
    pub fn unchecked(a: ComplexMatrix, b: ComplexMatrix) -> Result<Self> {
        check_shapes(&a, &b)?;
        Ok(Self { a, b, validated: false })
    }

    pub fn diagnose(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ValidationReport> {
        check_shapes(a, b)?;
        let ab = a * &b.adjoint();
        let hermiticity_defect = ab.hermiticity_defect();
        let tolerance = HERMITICITY_TOL * (1.0 + a.frobenius_norm() * b.frobenius_norm());
        let rank = matops::rank(&a.hstack(b), 0.0);
        Ok(ValidationReport { hermiticity_defect, tolerance, rank })
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn b(&self) -> &ComplexMatrix {
        &self.b
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    /// `Λ^{A,B}`
    pub fn relation(&self) -> LinearRelation {
        LinearRelation::lambda_ab(&self.a, &self.b).expect("shapes checked at construction")
    }

    /// `ker A* ∩ ker B* = 0`, tested as `rank (A*; B*) = n`. Always true for
    /// validated pairs.
    pub fn kernel_intersection_trivial(&self) -> bool {
        matops::rank(&self.a.adjoint().vstack(&self.b.adjoint()), 0.0) == self.n()
    }

    /// `{(B*x, A*x) : x ∈ ℂⁿ}`, which coincides with `Λ^{A,B}` for valid pairs.
    pub fn canonical_range_form(&self) -> LinearRelation {
        LinearRelation::from_spanning_matrix(self.n(), &self.b.adjoint().vstack(&self.a.adjoint()))
            .expect("shapes checked at construction")
    }

    /// The unitary `U` with `Λ^{A,B} = Λ^{i(1+U), 1−U}`.
    ///
    /// On `Λ^{A,B} = {(B*x, A*x)}` the map `x₂ + i x₁ ↦ x₂ − i x₁` reads
    /// `(A* + iB*) x ↦ (A* − iB*) x`, so `U = (A* − iB*)(A* + iB*)⁻¹`.
    pub fn to_unitary(&self) -> Result<ComplexMatrix> {
        let i = C64::new(0.0, 1.0);
        let a_star = self.a.adjoint();
        let b_star = self.b.adjoint();
        let w_plus = &a_star + &b_star.scale(i);
        let w_minus = &a_star - &b_star.scale(i);
        let u = matops::solve_right(&w_minus, &w_plus)
            .map_err(|e| Error::NumericallySingular(format!("A* + iB*: {e}")))?;
        let defect = u.unitarity_defect();
        if defect > UNITARY_TOL {
            return Err(Error::NotUnitary { defect });
        }
        Ok(u)
    }

    /// `(A, B) = (i(I + U), I − U)`.
    pub fn from_unitary(u: &ComplexMatrix) -> Result<Self> {
        if !u.is_square() {
            return Err(Error::NonSquare { rows: u.rows(), cols: u.cols() });
        }
        let defect = u.unitarity_defect();
        if defect > UNITARY_TOL {
            return Err(Error::NotUnitary { defect });
        }
        let id = ComplexMatrix::identity(u.rows());
        Self::validate((&id + u).scale(C64::new(0.0, 1.0)), &id - u)
    }

    /// `L = B⁻¹A`, the operator with `Γ₂φ = L Γ₁φ`. Requires `B` invertible.
    pub fn disjoint_operator(&self) -> Result<ComplexMatrix> {
        if matops::rank(&self.b, 0.0) < self.n() {
            return Err(Error::NotDisjoint);
        }
        matops::solve(&self.b, &self.a).map_err(|_| Error::NotDisjoint)
    }
}

fn check_shapes(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::NonSquare { rows: a.rows(), cols: a.cols() });
    }
    if !b.is_square() {
        return Err(Error::NonSquare { rows: b.rows(), cols: b.cols() });
    }
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "A is {0}x{0}, B is {1}x{1}",
            a.rows(),
            b.rows()
        )));
    }
    Ok(())
}

/// δ-type coupling of `n` half-lines: continuity at the vertex plus
/// `Σ φ'_j(0) = θ φ(0)`, written in the `Γ₁ = −φ'(0)`, `Γ₂ = φ(0)` convention.
pub fn delta_coupling(n: usize, theta: f64) -> Result<BoundaryPair> {
    if n == 0 {
        return Err(Error::InvalidModel("delta coupling needs at least one edge".into()));
    }
    let mut a = ComplexMatrix::zeros(n, n);
    let mut b = ComplexMatrix::zeros(n, n);
    for k in 0..n - 1 {
        b[(k, k)] = C64::new(1.0, 0.0);
        b[(k, k + 1)] = C64::new(-1.0, 0.0);
    }
    for j in 0..n {
        a[(n - 1, j)] = C64::new(-1.0, 0.0);
    }
    b[(n - 1, 0)] = C64::new(theta, 0.0);
    BoundaryPair::validate(a, b)
}
