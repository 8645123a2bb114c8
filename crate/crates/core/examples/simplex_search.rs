//! Grid search and dense-curve search over the probability simplex.

use macap::optimize::{maximize_dense_curve, maximize_grid};
use macap::{Modulus, SimplexCurve, SimplexGrid};

fn norm_sin(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt().sin()
}

fn main() -> macap::Result<()> {
    let grid = SimplexGrid::new(3, 3)?;
    println!("Δ_(3,3) has {} points in equidistant order:", grid.size());
    for i in 0..grid.size() {
        println!("  {:?}", grid.counts(i)?);
    }

    let curve = SimplexCurve::new(SimplexGrid::new(3, 4)?)?;
    println!("curve length {:.3}, midpoint {:?}", curve.length(), curve.point(curve.length() / 2.0)?.entries());

    let beta = Modulus::Linear(1.0);
    let g = maximize_grid(norm_sin, &beta, 3, 0.15)?;
    let c = maximize_dense_curve(norm_sin, &beta, 3, 0.15, None)?;
    println!("grid:        {:.4} after {} evaluations", g.best_value, g.iterations);
    println!("dense curve: {:.4} after {} evaluations", c.best_value, c.iterations);
    Ok(())
}
