//! Linear relations on ℂ²: graphs, sums, inverses and adjoints.

use krein_bc::linrel::LinearRelation;
use krein_bc::{ComplexMatrix, C64};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let l = ComplexMatrix::from_rows(&[
        vec![C64::new(1.0, 0.0), C64::new(0.0, 2.0)],
        vec![C64::new(0.0, 0.0), C64::new(-1.0, 0.5)],
    ]);
    let gr = LinearRelation::graph(&l)?;
    println!("dim gr L = {}", gr.dim());

    let adj = gr.adjoint_relation();
    let expected = LinearRelation::graph(&l.adjoint())?;
    println!("(gr L)* = gr L*: {}", adj.equals(&expected));

    let sum = gr.sum(&LinearRelation::graph(&ComplexMatrix::identity(2))?)?;
    println!("gr L + gr I = gr (L + I): {}", sum.equals(&LinearRelation::graph(&(&l + &ComplexMatrix::identity(2)))?));

    // {0} ⊕ ℂ² is the inverse of the zero operator: defined nowhere, all of ℂ² multivalued
    let z = LinearRelation::graph(&ComplexMatrix::zeros(2, 2))?.inverse();
    println!("dim dom = {}, dim mul = {}", z.domain().cols(), z.multivalued_part().cols());
    println!("selfadjoint: {}", z.is_selfadjoint());

    // Λ for the condition x₁ = 3x₂ is the graph of 1/3
    let lambda = LinearRelation::lambda_ab(
        &ComplexMatrix::from_real_rows(&[&[1.0]]),
        &ComplexMatrix::from_real_rows(&[&[3.0]]),
    )?;
    let third = LinearRelation::graph(&ComplexMatrix::from_real_rows(&[&[1.0 / 3.0]]))?;
    println!("max principal angle to gr(1/3): {:.1e}", lambda.max_principal_angle(&third));
    Ok(())
}
