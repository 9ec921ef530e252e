//! Resolvents of self-adjoint extensions expressed directly through boundary
//! matrices `(A, B)`.
//!
//! An extension is selected by the boundary condition `A Γ₁φ = B Γ₂φ`. Given a
//! model that supplies the Q-function `Q(z)` and the Γ-field `γ_z`, the
//! resolvent of the extension differs from the reference resolvent by the
//! finite-rank correction
//!
//! ```text
//! C(z) = (B Q(z) - A)^{-1} B = B* (Q(z) B* - A*)^{-1}
//! ```
//!
//! sandwiched between `γ_z` and `γ*_{z̄}`. The crate provides
//!
//! - [`matops`]: small dense complex linear algebra (LU, Jacobi SVD, null spaces),
//! - [`linrel`]: linear relations on `ℂⁿ` (sum, inverse, adjoint, self-adjointness),
//! - [`boundary`]: validation and unitary parametrization of `(A, B)`,
//! - [`models`]: the star graph of half-lines and point interactions in `ℝ³`,
//! - [`krein`]: correction matrices, perturbed Green kernels and bound-state search,
//! - [`cli`]: the `krein-bc` command-line front end.
//!
//! ```
//! use krein_bc::boundary::BoundaryPair;
//! use krein_bc::krein::{scan_eigenvalues, ScanConfig};
//! use krein_bc::matops::ComplexMatrix;
//! use krein_bc::models::StarGraph;
//!
//! // Robin half-line, φ'(0) = -2 φ(0): one bound state at z = -4.
//! let pair = BoundaryPair::validate(
//!     ComplexMatrix::from_real_rows(&[&[1.0]]),
//!     ComplexMatrix::from_real_rows(&[&[2.0]]),
//! )
//! .unwrap();
//! let star = StarGraph::new(1).unwrap();
//! let hits = scan_eigenvalues(&pair, &star, &ScanConfig::new(-10.0, -0.01)).unwrap();
//! assert_eq!(hits.len(), 1);
//! assert!((hits[0].z + 4.0).abs() < 1e-8);
//! ```

pub mod boundary;
pub mod cli;
pub mod error;
pub mod krein;
pub mod linrel;
pub mod matops;
pub mod models;
pub mod quadrature;

pub use error::{Error, Result};
pub use matops::{ComplexMatrix, C64};
