//! Linear relations on `V = ℂⁿ`, i.e. linear subspaces of `V ⊕ V`.
//!
//! A relation is stored as a `2n × d` matrix with orthonormal columns; the
//! first `n` coordinates of each column are the `x₁` part, the last `n` the
//! `x₂` part. Subspace comparisons use the largest principal angle.

use crate::error::{Error, Result};
use crate::matops::{self, ComplexMatrix, C64};

/// Largest principal angle accepted as "equal" or "contained".
pub const ANGLE_TOL: f64 = 1e-9;

/// Singular-value cutoff for intersections and domain projections.
pub const SUBSPACE_CUTOFF: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct LinearRelation {
    n: usize,
    basis: ComplexMatrix,
}

impl LinearRelation {
    /// Span of the stacked columns `(x₁; x₂)` of a `2n × k` matrix.
    pub fn from_spanning_matrix(n: usize, m: &ComplexMatrix) -> Result<Self> {
        if m.rows() != 2 * n {
            return Err(Error::DimensionMismatch(format!(
                "spanning matrix has {} rows, expected {}",
                m.rows(),
                2 * n
            )));
        }
        Ok(Self { n, basis: span_basis(m) })
    }

    pub fn from_spanning_pairs(n: usize, pairs: &[(Vec<C64>, Vec<C64>)]) -> Result<Self> {
        let mut cols = Vec::with_capacity(pairs.len());
        for (x1, x2) in pairs {
            if x1.len() != n || x2.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "pair of lengths ({}, {}) in a relation on C^{n}",
                    x1.len(),
                    x2.len()
                )));
            }
            cols.push(x1.iter().chain(x2).copied().collect::<Vec<_>>());
        }
        Self::from_spanning_matrix(n, &ComplexMatrix::from_columns(2 * n, &cols))
    }

    /// `gr L = {(x, Lx)}`
    pub fn graph(l: &ComplexMatrix) -> Result<Self> {
        if !l.is_square() {
            return Err(Error::NonSquare { rows: l.rows(), cols: l.cols() });
        }
        let n = l.rows();
        Self::from_spanning_matrix(n, &ComplexMatrix::identity(n).vstack(l))
    }

    /// The zero subspace `{(0, 0)}`.
    pub fn zero(n: usize) -> Self {
        Self { n, basis: ComplexMatrix::zeros(2 * n, 0) }
    }

    pub fn full(n: usize) -> Self {
        Self { n, basis: ComplexMatrix::identity(2 * n) }
    }

    /// `Λ^{A,B} = {(x₁, x₂) : A x₁ = B x₂}`, the null space of `(A | −B)`.
    pub fn lambda_ab(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NonSquare { rows: a.rows(), cols: a.cols() });
        }
        if a.rows() != b.rows() || a.cols() != b.cols() {
            return Err(Error::DimensionMismatch(format!(
                "A is {}x{}, B is {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        let n = a.rows();
        let block = a.hstack(&-b);
        Ok(Self { n, basis: matops::null_space(&block, 0.0) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    /// `x₁` rows of the basis.
    pub fn first_block(&self) -> ComplexMatrix {
        self.basis.block(0, self.n, 0, self.dim())
    }

    /// `x₂` rows of the basis.
    pub fn second_block(&self) -> ComplexMatrix {
        self.basis.block(self.n, 2 * self.n, 0, self.dim())
    }

    /// Orthonormal basis of `dom Λ ⊂ V`.
    pub fn domain(&self) -> ComplexMatrix {
        let x1 = self.first_block();
        if x1.cols() == 0 {
            return x1;
        }
        matops::range_basis(&x1, SUBSPACE_CUTOFF)
    }

    /// Multivalued part `{y : (0, y) ∈ Λ}`.
    pub fn multivalued_part(&self) -> ComplexMatrix {
        let coeffs = matops::null_space(&self.first_block(), SUBSPACE_CUTOFF);
        let y = &self.second_block() * &coeffs;
        if y.cols() == 0 {
            return y;
        }
        matops::range_basis(&y, SUBSPACE_CUTOFF)
    }

    /// `Λ⁻¹ = {(x, y) : (y, x) ∈ Λ}`
    pub fn inverse(&self) -> Self {
        Self { n: self.n, basis: self.second_block().vstack(&self.first_block()) }
    }

    /// `αΛ = {(x, αy) : (x, y) ∈ Λ}`
    pub fn scale(&self, alpha: C64) -> Self {
        let m = self.first_block().vstack(&self.second_block().scale(alpha));
        Self { n: self.n, basis: span_basis(&m) }
    }

    /// `Λ' + Λ'' = {(x, y' + y'') : (x, y') ∈ Λ', (x, y'') ∈ Λ''}`.
    ///
    /// Pairs of coefficient vectors `(a, b)` with `X' a = X'' b` parametrize
    /// the common domain; the result is spanned by `(X' a, Y' a + Y'' b)`.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_same_n(other)?;
        let (d1, d2) = (self.dim(), other.dim());
        if d1 == 0 || d2 == 0 {
            return Ok(Self::zero(self.n));
        }
        let stacked = self.first_block().hstack(&-&other.first_block());
        let coeffs = matops::null_space(&stacked, SUBSPACE_CUTOFF);
        if coeffs.cols() == 0 {
            return Ok(Self::zero(self.n));
        }
        let a = coeffs.block(0, d1, 0, coeffs.cols());
        let b = coeffs.block(d1, d1 + d2, 0, coeffs.cols());
        let x = &self.first_block() * &a;
        let y = &(&self.second_block() * &a) + &(&other.second_block() * &b);
        Ok(Self { n: self.n, basis: span_basis(&x.vstack(&y)) })
    }

    /// `Λ* = J Λ^⊥` with `J(x₁, x₂) = (x₂, −x₁)`.
    pub fn adjoint_relation(&self) -> Self {
        let n = self.n;
        let d = self.dim();
        let complement = if d == 0 {
            ComplexMatrix::identity(2 * n)
        } else {
            // the basis is orthonormal, so exactly d singular values are 1
            let svd = matops::jacobi_svd(&self.basis.adjoint());
            svd.v.block(0, 2 * n, d, 2 * n)
        };
        let u1 = complement.block(0, n, 0, complement.cols());
        let u2 = complement.block(n, 2 * n, 0, complement.cols());
        Self { n, basis: u2.vstack(&-&u1) }
    }

    /// Sine of the largest principal angle from `self` into `other`:
    /// `‖(I − P_other) basis_self‖₂`. Zero iff `self ⊂ other`.
    pub fn containment_gap(&self, other: &Self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        let proj = &other.basis * &(&other.basis.adjoint() * &self.basis);
        let resid = &self.basis - &proj;
        matops::singular_values(&resid).first().copied().unwrap_or(0.0)
    }

    /// Largest principal angle between two subspaces of equal dimension;
    /// `π/2` when the dimensions differ.
    pub fn max_principal_angle(&self, other: &Self) -> f64 {
        if self.n != other.n || self.dim() != other.dim() {
            return std::f64::consts::FRAC_PI_2;
        }
        self.containment_gap(other).min(1.0).asin()
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.n == other.n && self.dim() <= other.dim() && self.containment_gap(other).min(1.0).asin() <= ANGLE_TOL
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.max_principal_angle(other) <= ANGLE_TOL
    }

    /// `Λ ⊂ Λ*`
    pub fn is_symmetric(&self) -> bool {
        self.is_subset_of(&self.adjoint_relation())
    }

    /// `Λ = Λ*`, i.e. symmetric of dimension `n`.
    pub fn is_selfadjoint(&self) -> bool {
        self.dim() == self.n && self.is_symmetric()
    }

    fn check_same_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "relations on C^{} and C^{}",
                self.n, other.n
            )));
        }
        Ok(())
    }
}

fn span_basis(m: &ComplexMatrix) -> ComplexMatrix {
    if m.cols() == 0 {
        return m.clone();
    }
    let sigma_max = matops::singular_values(m).first().copied().unwrap_or(0.0);
    if sigma_max == 0.0 {
        return ComplexMatrix::zeros(m.rows(), 0);
    }
    matops::range_basis(m, SUBSPACE_CUTOFF * sigma_max)
}

/// The operator `C` with `gr C = (gr Q − Λ)⁻¹`.
///
/// Fails with [`Error::NotAGraph`] if the inverse relation is multivalued or
/// not defined on all of `V`.
pub fn invert_shifted_graph(q: &ComplexMatrix, lambda: &LinearRelation) -> Result<ComplexMatrix> {
    if !q.is_square() {
        return Err(Error::NonSquare { rows: q.rows(), cols: q.cols() });
    }
    let n = q.rows();
    if lambda.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "Q is {n}x{n}, relation lives on C^{}",
            lambda.n()
        )));
    }
    let shifted = LinearRelation::graph(q)?.sum(&lambda.scale(C64::new(-1.0, 0.0)))?;
    let inv = shifted.inverse();
    if inv.dim() != n {
        return Err(Error::NotAGraph);
    }
    let x = inv.first_block();
    if matops::sigma_min(&x) <= SUBSPACE_CUTOFF {
        return Err(Error::NotAGraph);
    }
    matops::solve_right(&inv.second_block(), &x).map_err(|_| Error::NotAGraph)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows)
    }

    fn vertical() -> LinearRelation {
        // {(0, t)}
        LinearRelation::from_spanning_pairs(1, &[(vec![c(0.0, 0.0)], vec![c(1.0, 0.0)])]).unwrap()
    }

    fn horizontal() -> LinearRelation {
        LinearRelation::from_spanning_pairs(1, &[(vec![c(1.0, 0.0)], vec![c(0.0, 0.0)])]).unwrap()
    }

    #[test]
    fn spanning_pairs() {
        let v = vertical();
        assert_eq!(v.dim(), 1);
        assert!(v.equals(&LinearRelation::lambda_ab(&real(&[&[1.0]]), &real(&[&[0.0]])).unwrap()));
        let q = c(0.3, -2.0);
        let g = LinearRelation::from_spanning_pairs(1, &[(vec![c(1.0, 0.0)], vec![q])]).unwrap();
        assert!(g.equals(&LinearRelation::graph(&ComplexMatrix::from_diag(&[q])).unwrap()));
        let dup = LinearRelation::from_spanning_pairs(
            1,
            &[(vec![c(1.0, 0.0)], vec![q]), (vec![c(1.0, 0.0)], vec![q])],
        )
        .unwrap();
        assert_eq!(dup.dim(), 1);
        assert!(matches!(
            LinearRelation::from_spanning_pairs(2, &[(vec![c(1.0, 0.0)], vec![q])]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn lambda_ab_examples() {
        let l = LinearRelation::lambda_ab(&real(&[&[1.0]]), &real(&[&[0.0]])).unwrap();
        assert_eq!(l.dim(), 1);
        assert!(l.equals(&vertical()));
        let id = ComplexMatrix::identity(2);
        let l = LinearRelation::lambda_ab(&id, &id).unwrap();
        assert_eq!(l.dim(), 2);
        assert!(l.equals(&LinearRelation::graph(&id).unwrap()));
        let l = LinearRelation::lambda_ab(&real(&[&[0.0]]), &real(&[&[0.0]])).unwrap();
        assert_eq!(l.dim(), 2);
        assert!(!l.is_selfadjoint());
        assert!(LinearRelation::lambda_ab(&id, &ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn domain_examples() {
        assert_eq!(vertical().domain().cols(), 0);
        let l = real(&[&[1.0, 2.0], &[0.0, -1.0]]);
        assert_eq!(LinearRelation::graph(&l).unwrap().domain().cols(), 2);
    }

    #[test]
    fn inverse_examples() {
        assert!(vertical().inverse().equals(&horizontal()));
        let d = ComplexMatrix::from_diag(&[c(2.0, 0.0), c(3.0, 0.0)]);
        let dinv = ComplexMatrix::from_diag(&[c(0.5, 0.0), c(1.0 / 3.0, 0.0)]);
        let g = LinearRelation::graph(&d).unwrap();
        assert!(g.inverse().equals(&LinearRelation::graph(&dinv).unwrap()));
        assert!(g.inverse().inverse().equals(&g));
    }

    #[test]
    fn scale_examples() {
        let id = ComplexMatrix::identity(2);
        let g = LinearRelation::graph(&id).unwrap();
        assert!(g.scale(c(1.0, 0.0)).equals(&g));
        let two = LinearRelation::graph(&id.scale(c(2.0, 0.0))).unwrap();
        assert!(g.scale(c(2.0, 0.0)).equals(&two));
        let zero = LinearRelation::graph(&ComplexMatrix::zeros(2, 2)).unwrap();
        assert!(g.scale(c(0.0, 0.0)).equals(&zero));
        // 0·{(0,t)} collapses to the zero subspace
        assert_eq!(vertical().scale(c(0.0, 0.0)).dim(), 0);
    }

    #[test]
    fn sum_examples() {
        let l1 = real(&[&[1.0, 2.0], &[0.5, -1.0]]);
        let l2 = ComplexMatrix::from_rows(&[vec![c(0.0, 1.0), c(1.0, 1.0)], vec![c(3.0, 0.0), c(0.0, 0.0)]]);
        let s = LinearRelation::graph(&l1).unwrap().sum(&LinearRelation::graph(&l2).unwrap()).unwrap();
        assert!(s.equals(&LinearRelation::graph(&(&l1 + &l2)).unwrap()));

        let q = LinearRelation::graph(&ComplexMatrix::from_diag(&[c(0.7, 0.2)])).unwrap();
        assert!(q.sum(&vertical()).unwrap().equals(&vertical()));
        assert_eq!(q.sum(&LinearRelation::zero(1)).unwrap().dim(), 0);
        assert!(q.sum(&LinearRelation::zero(2)).is_err());
    }

    #[test]
    fn adjoint_relation_examples() {
        assert!(vertical().adjoint_relation().equals(&vertical()));
        let h = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(2.0, -1.0)], vec![c(2.0, 1.0), c(-3.0, 0.0)]]);
        let g = LinearRelation::graph(&h).unwrap();
        assert!(g.adjoint_relation().equals(&g));
        assert_eq!(LinearRelation::zero(2).adjoint_relation().dim(), 4);
        // graph of a non-Hermitian operator maps to the graph of its adjoint
        let l = ComplexMatrix::from_rows(&[vec![c(1.0, 1.0), c(2.0, 0.0)], vec![c(0.0, 0.0), c(0.0, -1.0)]]);
        let g = LinearRelation::graph(&l).unwrap();
        assert!(g.adjoint_relation().equals(&LinearRelation::graph(&l.adjoint()).unwrap()));
        assert!(g.adjoint_relation().adjoint_relation().equals(&g));
    }

    #[test]
    fn symmetry_examples() {
        let v = vertical();
        assert!(v.is_symmetric() && v.is_selfadjoint());
        let nilpotent = real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(!LinearRelation::graph(&nilpotent).unwrap().is_selfadjoint());
        // a strict subspace of a self-adjoint relation is symmetric but not self-adjoint
        let id = LinearRelation::graph(&ComplexMatrix::identity(2)).unwrap();
        let half = LinearRelation::from_spanning_pairs(
            2,
            &[(vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)])],
        )
        .unwrap();
        assert!(half.is_subset_of(&id));
        assert!(half.is_symmetric() && !half.is_selfadjoint());
    }

    #[test]
    fn equals_distinguishes() {
        assert!(vertical().equals(&vertical()));
        assert!(!vertical().equals(&horizontal()));
    }

    #[test]
    fn multivalued_part_of_vertical() {
        assert_eq!(vertical().multivalued_part().cols(), 1);
        assert_eq!(horizontal().multivalued_part().cols(), 0);
    }

    #[test]
    fn invert_shifted_graph_examples() {
        let q = ComplexMatrix::from_diag(&[c(0.4, 1.3)]);
        let c0 = invert_shifted_graph(&q, &vertical()).unwrap();
        assert!(c0.max_abs() < 1e-14);

        let l = real(&[&[1.0, 0.5], &[0.5, -2.0]]);
        let q = ComplexMatrix::from_rows(&[vec![c(0.3, 0.9), c(0.1, 0.0)], vec![c(0.1, 0.0), c(-0.2, 0.4)]]);
        let got = invert_shifted_graph(&q, &LinearRelation::graph(&l).unwrap()).unwrap();
        let expect = matops::inverse(&(&q - &l)).unwrap();
        assert!(got.max_abs_diff(&expect) < 1e-12);

        // Q = L makes gr Q − gr L = {(x, 0)}, whose inverse is {(0, x)}
        let err = invert_shifted_graph(&l, &LinearRelation::graph(&l).unwrap());
        assert_eq!(err, Err(Error::NotAGraph));
    }
}
