#![allow(dead_code)]

use krein_bc::boundary::BoundaryPair;
use krein_bc::{ComplexMatrix, C64};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Gram–Schmidt on a random square matrix, written out here so the generator
/// does not share code with the library under test.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    loop {
        let m = random_matrix(rng, n, n);
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
        let mut ok = true;
        for j in 0..n {
            let mut v = m.col(j);
            for _ in 0..2 {
                for u in &cols {
                    let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (vi, ui) in v.iter_mut().zip(u) {
                        *vi -= proj * ui;
                    }
                }
            }
            let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-3 {
                ok = false;
                break;
            }
            cols.push(v.into_iter().map(|x| x / norm).collect());
        }
        if ok {
            return ComplexMatrix::from_columns(n, &cols);
        }
    }
}

/// Well-conditioned random invertible matrix: identity plus a small random part.
pub fn random_invertible(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    &ComplexMatrix::identity(n) + &random_matrix(rng, n, n).scale(c(0.4 / n as f64, 0.0))
}

/// `(M·i(I+U), M·(I−U))` for a random unitary `U` and invertible `M`.
pub fn random_pair_matrices(rng: &mut impl Rng, n: usize) -> (ComplexMatrix, ComplexMatrix) {
    let u = random_unitary(rng, n);
    let m = random_invertible(rng, n);
    let id = ComplexMatrix::identity(n);
    let a = &m * &(&id + &u).scale(c(0.0, 1.0));
    let b = &m * &(&id - &u);
    (a, b)
}

pub fn random_pair(rng: &mut impl Rng, n: usize) -> BoundaryPair {
    let (a, b) = random_pair_matrices(rng, n);
    BoundaryPair::validate(a, b).expect("generated pair must validate")
}

/// Nonreal `z` with `Re z ∈ [−5, 5]`, `|Im z| ∈ [0.1, 3]`.
pub fn random_nonreal(rng: &mut impl Rng) -> C64 {
    let im = rng.gen_range(0.1..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    c(rng.gen_range(-5.0..5.0), im)
}

pub fn random_centers(rng: &mut impl Rng, n: usize) -> Vec<[f64; 3]> {
    let mut centers: Vec<[f64; 3]> = Vec::with_capacity(n);
    while centers.len() < n {
        let p = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        if centers.iter().all(|q| dist(&p, q) > 0.3) {
            centers.push(p);
        }
    }
    centers
}

pub fn dist(p: &[f64; 3], q: &[f64; 3]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// Root of a continuous `f` on `[a, b]` with a sign change, by plain bisection.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    assert!(fa * f(b) < 0.0, "no sign change on [{a}, {b}]");
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    0.5 * (a + b)
}
