//! Validating boundary matrices and moving between (A, B) and the unitary U.

use krein_bc::boundary::{delta_coupling, BoundaryPair};
use krein_bc::{ComplexMatrix, Error, C64};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let i = C64::new(0.0, 1.0);

    let pair = delta_coupling(3, 1.5)?;
    let report = BoundaryPair::diagnose(pair.a(), pair.b())?;
    println!("delta coupling: defect {:.1e}, rank {}", report.hermiticity_defect, report.rank);

    let u = pair.to_unitary()?;
    println!("U unitary to {:.1e}", u.unitarity_defect());
    let back = BoundaryPair::from_unitary(&u)?;
    println!("same extension after round trip: {}", back.relation().equals(&pair.relation()));
    println!("range form agrees: {}", pair.relation().equals(&pair.canonical_range_form()));

    match BoundaryPair::validate(ComplexMatrix::identity(2), ComplexMatrix::identity(2).scale(i)) {
        Err(Error::NotSelfAdjointCondition { defect, .. }) => println!("A = I, B = iI rejected, defect {defect:.3}"),
        other => println!("unexpected: {other:?}"),
    }
    match BoundaryPair::validate(ComplexMatrix::zeros(2, 2), ComplexMatrix::zeros(2, 2)) {
        Err(Error::RankDeficient { rank, n }) => println!("A = B = 0 rejected, rank {rank}/{n}"),
        other => println!("unexpected: {other:?}"),
    }

    // B invertible: the condition reads Γ₂φ = L Γ₁φ
    let l = pair.disjoint_operator()?;
    println!("L hermitian to {:.1e}", l.hermiticity_defect());
    Ok(())
}
