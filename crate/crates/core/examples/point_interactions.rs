//! Point interactions in three dimensions: bound states of two centers and
//! the Green kernel near them.

use krein_bc::boundary::BoundaryPair;
use krein_bc::krein::{self, ScanConfig};
use krein_bc::models::{PointInteractions, SpacePoint, SpectralModel};
use krein_bc::{ComplexMatrix, C64};
use std::f64::consts::PI;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alpha = -1.0 / (2.0 * PI);
    let pair = BoundaryPair::validate(ComplexMatrix::identity(2).scale(C64::new(alpha, 0.0)), ComplexMatrix::identity(2))?;

    for d in [0.5, 1.0, 2.0, 4.0] {
        let model = PointInteractions::new(vec![[0.0, 0.0, 0.0], [d, 0.0, 0.0]])?;
        let hits = krein::scan_eigenvalues(&pair, &model, &ScanConfig::new(-20.0, -0.01))?;
        let zs: Vec<String> = hits.iter().map(|h| format!("{:.8}", h.z)).collect();
        println!("d = {d}: {}", zs.join(", "));
    }

    let model = PointInteractions::new(vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])?;
    let z = C64::new(-1.0, 0.0);
    let y = SpacePoint::Space([0.5, 1.0, 0.0]);
    println!("\n    x      G0            G");
    for x in [0.25, 0.5, 1.5, 3.0] {
        let p = SpacePoint::Space([x, 0.0, 0.0]);
        let g0 = model.free_green(&p, &y, z)?;
        let g = krein::perturbed_green(&pair, &model, &p, &y, z)?;
        println!("{x:>5}  {:>12.6}  {:>12.6}", g0.re, g.re);
    }
    Ok(())
}
