//! Bound states of a star graph with an attractive δ coupling at the vertex.

use krein_bc::boundary::delta_coupling;
use krein_bc::krein::{scan_eigenvalues, verify_eigenpair, ScanConfig};
use krein_bc::models::StarGraph;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (n, theta) in [(2, -2.0), (3, -3.0), (5, -4.0), (3, 1.0)] {
        let pair = delta_coupling(n, theta)?;
        let star = StarGraph::new(n)?;
        let hits = scan_eigenvalues(&pair, &star, &ScanConfig::new(-10.0, -0.01))?;
        print!("n = {n}, theta = {theta:>4}: ");
        if hits.is_empty() {
            println!("no bound state");
        }
        for h in &hits {
            let check = verify_eigenpair(&pair, &star, h)?;
            println!(
                "z = {:.12} (expected {:.12}), residual {:.1e}",
                h.z,
                -theta * theta / (n * n) as f64,
                check.residual
            );
        }
    }
    Ok(())
}
