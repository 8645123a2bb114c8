//! Maximization over a compact convex set through a projected extension.

use macap::optimize::{maximize_compact_convex, project_onto_simplex, ExtensionSpec};
use macap::Modulus;

fn main() -> macap::Result<()> {
    // Maximize the concave function -Σ (x_i - 1/3)² on Δ_3.
    let f = |x: &[f64]| -x.iter().map(|v| (v - 1.0 / 3.0).powi(2)).sum::<f64>();
    let spec = ExtensionSpec::new(
        f,
        project_onto_simplex,
        Modulus::Linear(2.0),
        Modulus::Linear(1.0),
    );
    let bounds = vec![(0.0, 1.0); 3];
    let out = maximize_compact_convex(&spec, &bounds, 0.5, None)?;
    println!(
        "max {:.4} at {:?} (upper bound {:.4}, {} iterations)",
        out.best_value, out.best_point, out.upper_bound, out.iterations
    );
    Ok(())
}
