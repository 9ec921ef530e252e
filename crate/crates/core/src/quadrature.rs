//! Adaptive Gauss–Kronrod (7/15) quadrature for complex integrands, and the
//! quadrature route to the Γ-field Gram matrix of the star graph.

use crate::error::Result;
use crate::matops::{ComplexMatrix, C64};
use crate::models::{kappa, SpacePoint, SpectralModel, StarGraph};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: usize = 60;

#[derive(Clone, Copy, Debug)]
pub struct Quadrature {
    pub value: C64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

fn gk15(f: &mut impl FnMut(f64) -> C64, a: f64, b: f64) -> (C64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[i];
        if i % 2 == 1 {
            gauss += pair * WG[i / 2];
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).norm())
}

/// Integrates `f` over `[a, b]` to absolute accuracy `tol` by recursive
/// bisection.
pub fn integrate(mut f: impl FnMut(f64) -> C64, a: f64, b: f64, tol: f64) -> Quadrature {
    let width = b - a;
    let mut value = C64::new(0.0, 0.0);
    let mut error_estimate = 0.0;
    let mut evaluations = 0;
    let mut stack = vec![(a, b, 0usize)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, err) = gk15(&mut f, lo, hi);
        evaluations += 15;
        let local_tol = tol * (hi - lo) / width;
        if err <= local_tol || depth >= MAX_DEPTH {
            value += v;
            error_estimate += err;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    Quadrature { value, error_estimate, evaluations }
}

/// `∫₀^∞ conj(g^j_ζ(t)) g^k_z(t) dt` on every edge of a star graph,
/// truncated where the integrand has decayed below `1e−14` relative.
///
/// Returns the matrix `γ*_ζ γ_z` and the total error bound (quadrature
/// estimate plus analytic tail).
pub fn star_gamma_gram(star: &StarGraph, z: C64, zeta: C64, tol: f64) -> Result<(ComplexMatrix, f64)> {
    let kz = kappa(z)?;
    let kzeta = kappa(zeta)?;
    let decay = kz.re + kzeta.re;
    let cutoff = (1e14f64).ln() / decay;
    let tail = (-decay * cutoff).exp() / (decay * kz.norm() * kzeta.norm());
    let n = star.dim();
    let mut gram = ComplexMatrix::zeros(n, n);
    let mut bound: f64 = 0.0;
    for j in 0..n {
        for k in 0..n {
            let mut failed = None;
            let q = integrate(
                |t| {
                    let gj = star.gamma_basis_value(j, &SpacePoint::Edge { edge: j, x: t }, zeta);
                    let gk = star.gamma_basis_value(k, &SpacePoint::Edge { edge: j, x: t }, z);
                    match (gj, gk) {
                        (Ok(a), Ok(b)) => a.conj() * b,
                        (Err(e), _) | (_, Err(e)) => {
                            failed = Some(e);
                            C64::new(0.0, 0.0)
                        }
                    }
                },
                0.0,
                cutoff,
                tol,
            );
            if let Some(e) = failed {
                return Err(e);
            }
            gram[(j, k)] = q.value;
            bound = bound.max(q.error_estimate + if j == k { tail } else { 0.0 });
        }
    }
    Ok((gram, bound))
}
