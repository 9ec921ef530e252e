//! The correction matrix three ways, and the free vs perturbed Green kernel.

use krein_bc::boundary::BoundaryPair;
use krein_bc::krein;
use krein_bc::models::{SpacePoint, SpectralModel, StarGraph};
use krein_bc::{ComplexMatrix, C64};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = C64::new;
    // A = ML, B = M with L Hermitian, so AB* = MLM* is Hermitian
    let l = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.5, 0.5)], vec![c(0.5, -0.5), c(-1.0, 0.0)]]);
    let b = ComplexMatrix::from_rows(&[vec![c(2.0, 0.0), c(1.0, 0.0)], vec![c(0.5, 0.0), c(0.5, 0.0)]]);
    let a = &b * &l;
    let pair = BoundaryPair::validate(a, b)?;
    let star = StarGraph::new(2)?;

    let z = c(-1.5, 0.75);
    let q = star.q_matrix(z)?;
    let c1 = krein::correction_matrix_form1(&pair, &q)?;
    let c2 = krein::correction_matrix_form2(&pair, &q)?;
    let c3 = krein::abstract_correction(&pair, &star, z)?;
    println!("C(z) = {c2:?}");
    println!("|form1 - form2| = {:.1e}", c1.max_abs_diff(&c2));
    println!("|relation route - form1| = {:.1e}", c3.max_abs_diff(&c1));

    let rep = krein::check_nondegeneracy(&pair, &star, z)?;
    println!("sigma_min(BQ - A) = {:.3e}, det = {:.4}", rep.sigma_min, rep.det2);

    let x = SpacePoint::Edge { edge: 0, x: 0.5 };
    let y = SpacePoint::Edge { edge: 1, x: 1.0 };
    println!("G0(x, y) = {:.6}", star.free_green(&x, &y, z)?);
    println!("G(x, y)  = {:.6}", krein::perturbed_green(&pair, &star, &x, &y, z)?);
    Ok(())
}
