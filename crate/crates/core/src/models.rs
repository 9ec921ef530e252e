//! Concrete spectral models: the Q-function `Q(z)`, the Γ-field basis
//! functions `g^j_z` and the reference Green kernel `G⁰`.
//!
//! Both models have `res H⁰ = ℂ ∖ [0, ∞)` and use the branch of `√(−z)` with
//! positive real part.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::matops::{ComplexMatrix, C64};

/// Distance from `[0, ∞)` below which `z` is treated as spectrum of `H⁰`.
pub const CUT_GUARD: f64 = 1e-12;

const BRANCH_GUARD: f64 = 1e-14;

/// Below this distance a point is considered to sit on a center.
pub const POINT_GUARD: f64 = 1e-12;

/// Minimum separation between point-interaction centers.
pub const MIN_CENTER_SEPARATION: f64 = 1e-9;

/// Square root with positive real part; rejects `w` on `(−∞, 0]`.
pub fn sqrt_branch(w: C64) -> Result<C64> {
    if w.im.abs() <= BRANCH_GUARD && w.re <= BRANCH_GUARD {
        return Err(Error::OnBranchCut(w));
    }
    Ok(w.sqrt())
}

/// `√(−z)`, the decay rate of the deficiency elements.
pub fn kappa(z: C64) -> Result<C64> {
    sqrt_branch(-z).map_err(|_| Error::OutsideResolventSet(z))
}

/// `z ∉ [0, ∞)` up to [`CUT_GUARD`].
pub fn in_reference_resolvent_set(z: C64) -> bool {
    let dist = if z.re >= 0.0 { z.im.abs() } else { z.norm() };
    dist > CUT_GUARD
}

/// A point of the configuration space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpacePoint {
    /// Coordinate `x ≥ 0` on half-line `edge`.
    Edge { edge: usize, x: f64 },
    Space([f64; 3]),
}

/// Boundary data `(Γ₁φ, Γ₂φ)` of `φ = γ_z v`.
#[derive(Clone, Debug)]
pub struct BoundaryValues {
    pub gamma1: Vec<C64>,
    pub gamma2: Vec<C64>,
}

/// A symmetric operator with deficiency indices `(n, n)` together with its
/// reference extension `H⁰`, seen through the boundary space `ℂⁿ`.
pub trait SpectralModel: Sync {
    /// Boundary-space dimension.
    fn dim(&self) -> usize;

    fn name(&self) -> &'static str;

    fn resolvent_set_contains(&self, z: C64) -> bool {
        in_reference_resolvent_set(z)
    }

    fn q_matrix(&self, z: C64) -> Result<ComplexMatrix>;

    /// `g^j_z(p)`, the `j`-th Γ-field basis element evaluated at `p`.
    fn gamma_basis_value(&self, j: usize, p: &SpacePoint, z: C64) -> Result<C64>;

    /// `G⁰(p, q; z)`
    fn free_green(&self, p: &SpacePoint, q: &SpacePoint, z: C64) -> Result<C64>;

    /// Boundary values of `γ_z v`, computed from the explicit form of the
    /// deficiency elements rather than from `q_matrix`.
    fn gamma_boundary_values(&self, v: &[C64], z: C64) -> Result<BoundaryValues>;

    /// `(γ_z v)(p) = Σ_j v_j g^j_z(p)`
    fn gamma_apply(&self, v: &[C64], p: &SpacePoint, z: C64) -> Result<C64> {
        let mut s = C64::new(0.0, 0.0);
        for (j, vj) in v.iter().enumerate() {
            s += vj * self.gamma_basis_value(j, p, z)?;
        }
        Ok(s)
    }

    fn check_point(&self, p: &SpacePoint) -> Result<()>;
}

/// `γ*_ζ γ_z = (Q(z) − Q(ζ)*) / (z − ζ̄)`.
pub fn gamma_gram(m: &dyn SpectralModel, z: C64, zeta: C64) -> Result<ComplexMatrix> {
    let denom = z - zeta.conj();
    if denom.norm() < 1e-12 {
        return Err(Error::CoincidentSpectralParams);
    }
    let qz = m.q_matrix(z)?;
    let qzeta = m.q_matrix(zeta)?;
    Ok((&qz - &qzeta.adjoint()).scale(denom.inv()))
}

/// `n` half-lines joined at a vertex; `H⁰` is the direct sum of Neumann
/// Laplacians, `Γ₁φ = −φ'(0)` and `Γ₂φ = φ(0)`.
#[derive(Clone, Debug)]
pub struct StarGraph {
    n: usize,
}

impl StarGraph {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModel("star graph needs at least one edge".into()));
        }
        Ok(Self { n })
    }

    fn edge_coordinate(&self, p: &SpacePoint) -> Result<(usize, f64)> {
        match *p {
            SpacePoint::Edge { edge, x } if edge < self.n && x.is_finite() && x >= 0.0 => Ok((edge, x)),
            SpacePoint::Edge { edge, x } => Err(Error::InvalidPoint(format!(
                "edge {edge}, coordinate {x} on a star with {} edges",
                self.n
            ))),
            SpacePoint::Space(_) => Err(Error::InvalidPoint("3D point given to a star graph".into())),
        }
    }
}

impl SpectralModel for StarGraph {
    fn dim(&self) -> usize {
        self.n
    }

    fn name(&self) -> &'static str {
        "star"
    }

    fn q_matrix(&self, z: C64) -> Result<ComplexMatrix> {
        let k = kappa(z)?;
        Ok(ComplexMatrix::identity(self.n).scale(k.inv()))
    }

    fn gamma_basis_value(&self, j: usize, p: &SpacePoint, z: C64) -> Result<C64> {
        let k = kappa(z)?;
        let (edge, x) = self.edge_coordinate(p)?;
        if edge != j {
            return Ok(C64::new(0.0, 0.0));
        }
        Ok((-k * x).exp() / k)
    }

    fn free_green(&self, p: &SpacePoint, q: &SpacePoint, z: C64) -> Result<C64> {
        let k = kappa(z)?;
        let (ep, x) = self.edge_coordinate(p)?;
        let (eq, y) = self.edge_coordinate(q)?;
        if ep != eq {
            return Ok(C64::new(0.0, 0.0));
        }
        Ok(((-k * (x - y).abs()).exp() + (-k * (x + y)).exp()) / (2.0 * k))
    }

    fn gamma_boundary_values(&self, v: &[C64], z: C64) -> Result<BoundaryValues> {
        let k = kappa(z)?;
        if v.len() != self.n {
            return Err(Error::DimensionMismatch(format!("vector of length {} for n = {}", v.len(), self.n)));
        }
        // φ_j(x) = v_j e^{−κx}/κ, so −φ'_j(0) = v_j e^{0} and φ_j(0) = v_j/κ
        let gamma1 = v.iter().map(|&vj| vj * (-k * 0.0).exp()).collect();
        let gamma2 = v.iter().map(|&vj| vj / k).collect();
        Ok(BoundaryValues { gamma1, gamma2 })
    }

    fn check_point(&self, p: &SpacePoint) -> Result<()> {
        self.edge_coordinate(p).map(|_| ())
    }
}

/// Point interactions at `n` distinct centers in `ℝ³`; `H⁰` is the free
/// Laplacian. Boundary values are the coefficients of
/// `φ(x) = Γ₁φ_j / (4π|x − y_j|) + Γ₂φ_j + o(1)` near each center.
#[derive(Clone, Debug)]
pub struct PointInteractions {
    centers: Vec<[f64; 3]>,
}

fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// `e^{−κr}/(4πr)`
fn free_kernel_3d(k: C64, r: f64) -> C64 {
    (-k * r).exp() / (4.0 * PI * r)
}

impl PointInteractions {
    pub fn new(centers: Vec<[f64; 3]>) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::InvalidModel("at least one center required".into()));
        }
        if centers.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidModel("non-finite center coordinate".into()));
        }
        for i in 0..centers.len() {
            for j in i + 1..centers.len() {
                let d = dist(&centers[i], &centers[j]);
                if d < MIN_CENTER_SEPARATION {
                    return Err(Error::InvalidModel(format!(
                        "centers {i} and {j} are {d:e} apart (minimum {MIN_CENTER_SEPARATION:e})"
                    )));
                }
            }
        }
        Ok(Self { centers })
    }

    pub fn centers(&self) -> &[[f64; 3]] {
        &self.centers
    }

    fn space_coordinate(p: &SpacePoint) -> Result<[f64; 3]> {
        match *p {
            SpacePoint::Space(x) if x.iter().all(|c| c.is_finite()) => Ok(x),
            SpacePoint::Space(x) => Err(Error::InvalidPoint(format!("non-finite point {x:?}"))),
            SpacePoint::Edge { .. } => Err(Error::InvalidPoint("edge point given to a 3D model".into())),
        }
    }
}

impl SpectralModel for PointInteractions {
    fn dim(&self) -> usize {
        self.centers.len()
    }

    fn name(&self) -> &'static str {
        "point3d"
    }

    fn q_matrix(&self, z: C64) -> Result<ComplexMatrix> {
        let k = kappa(z)?;
        let n = self.centers.len();
        Ok(ComplexMatrix::from_fn(n, n, |j, l| {
            if j == l {
                -k / (4.0 * PI)
            } else {
                free_kernel_3d(k, dist(&self.centers[j], &self.centers[l]))
            }
        }))
    }

    fn gamma_basis_value(&self, j: usize, p: &SpacePoint, z: C64) -> Result<C64> {
        let k = kappa(z)?;
        let x = Self::space_coordinate(p)?;
        let center = self
            .centers
            .get(j)
            .ok_or_else(|| Error::InvalidPoint(format!("no center with index {j}")))?;
        let r = dist(&x, center);
        if r < POINT_GUARD {
            return Err(Error::PointAtCenter(j));
        }
        Ok(free_kernel_3d(k, r))
    }

    fn free_green(&self, p: &SpacePoint, q: &SpacePoint, z: C64) -> Result<C64> {
        let k = kappa(z)?;
        let x = Self::space_coordinate(p)?;
        let y = Self::space_coordinate(q)?;
        let r = dist(&x, &y);
        if r < POINT_GUARD {
            return Err(Error::CoincidentPoints);
        }
        Ok(free_kernel_3d(k, r))
    }

    fn gamma_boundary_values(&self, v: &[C64], z: C64) -> Result<BoundaryValues> {
        let k = kappa(z)?;
        let n = self.centers.len();
        if v.len() != n {
            return Err(Error::DimensionMismatch(format!("vector of length {} for n = {n}", v.len())));
        }
        // near y_j: v_j e^{−κr}/(4πr) = v_j/(4πr) − v_j κ/(4π) + O(r); the other
        // terms are regular there
        let gamma1 = v.to_vec();
        let gamma2 = (0..n)
            .map(|j| {
                let mut s = -v[j] * k / (4.0 * PI);
                for l in (0..n).filter(|&l| l != j) {
                    s += v[l] * free_kernel_3d(k, dist(&self.centers[j], &self.centers[l]));
                }
                s
            })
            .collect();
        Ok(BoundaryValues { gamma1, gamma2 })
    }

    fn check_point(&self, p: &SpacePoint) -> Result<()> {
        Self::space_coordinate(p).map(|_| ())
    }
}
