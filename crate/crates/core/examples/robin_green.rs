//! The Robin half-line φ'(0) = θφ(0): Green function against the image-charge
//! formula, and the bound state at z = −θ² for θ < 0.

use krein_bc::boundary::BoundaryPair;
use krein_bc::krein::{self, ScanConfig};
use krein_bc::models::{SpacePoint, StarGraph};
use krein_bc::quadrature;
use krein_bc::{ComplexMatrix, C64};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let theta = -2.0;
    let pair = BoundaryPair::validate(
        ComplexMatrix::from_real_rows(&[&[1.0]]),
        ComplexMatrix::from_real_rows(&[&[-theta]]),
    )?;
    let star = StarGraph::new(1)?;

    let hits = krein::scan_eigenvalues(&pair, &star, &ScanConfig::new(-10.0, -0.01))?;
    println!("bound states: {:?}", hits.iter().map(|h| h.z).collect::<Vec<_>>());

    let z = C64::new(-0.5, 1.0);
    let k = (-z).sqrt();
    let r = (k - theta) / (k + theta);
    for (x, y) in [(0.0, 0.0), (0.2, 1.0), (1.5, 0.7), (3.0, 3.0)] {
        let g = krein::perturbed_green(&pair, &star, &SpacePoint::Edge { edge: 0, x }, &SpacePoint::Edge { edge: 0, x: y }, z)?;
        let image = ((-k * f64::abs(x - y)).exp() + r * (-k * (x + y)).exp()) / (2.0 * k);
        println!("G({x}, {y}) = {g:.10}   |diff| = {:.1e}", (g - image).norm());
    }

    // Q(z) - Q(ζ)* = (z - conj ζ) ∫ conj(g_ζ) g_z, checked by quadrature
    let zeta = C64::new(1.0, -0.3);
    let (gram, bound) = quadrature::star_gamma_gram(&star, z, zeta, 1e-12)?;
    let exact = krein_bc::models::gamma_gram(&star, z, zeta)?;
    println!("gram by quadrature {:.12} (error bound {bound:.1e}), closed form {:.12}", gram[(0, 0)], exact[(0, 0)]);
    Ok(())
}
