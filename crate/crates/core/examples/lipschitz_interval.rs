//! Certified maximization on an interval with a modulus of continuity.

use macap::optimize::{maximize_1d, SawtoothSearch, StepStatus};
use macap::optimize::Bracket;
use macap::{Modulus, Stop};

fn main() -> macap::Result<()> {
    let beta = Modulus::Linear(6.0);
    let out = maximize_1d(|x| (6.0 * x).sin(), &beta, 0.0, 1.0, Stop::Precision(0.01))?;
    println!(
        "max sin(6x) on [0, 1]: {:.6} at x = {:.6} (upper bound {:.6}, {} iterations)",
        out.best_value, out.best_point[0], out.upper_bound, out.iterations
    );

    // Driving the search step by step exposes the shrinking gap.
    let sqrt_modulus = Modulus::custom(|x: f64| 2.0 * x.sqrt());
    let mut search = SawtoothSearch::new(
        |x: f64| Ok(Bracket::exact(2.0 * (x * (1.0 - x)).sqrt())),
        &sqrt_modulus,
        0.0,
        1.0,
        None,
    )?;
    for _ in 0..8 {
        match search.step()? {
            StepStatus::Advanced { gap } => println!("iteration {:2}: gap {gap:.5}", search.iterations()),
            StepStatus::Exhausted => break,
        }
    }
    let (at, value) = search.best();
    println!("best so far {value:.6} at {at:.6}");
    Ok(())
}
