use super::grid::SimplexGrid;
use super::interval::maximize_1d_bracketed;
use super::{Bracket, OptimizationOutcome, Stop};
use crate::entropy::ProbabilityVector;
use crate::error::{Error, Result};
use crate::modulus::{largest_step, Modulus};

/// Piecewise-linear curve through the ordered points of a [`SimplexGrid`],
/// parametrized by l1 arc length.
///
/// Every point of `Δ_d` lies within `2(d-1)/N` of the curve, and the curve
/// is `min(x, 2)`-Lipschitz-like in the l1 norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexCurve {
    grid: SimplexGrid,
    length: f64,
}

impl SimplexCurve {
    pub fn new(grid: SimplexGrid) -> Result<Self> {
        if grid.size() < 2 {
            return Err(Error::Domain("curve needs at least two grid points".into()));
        }
        let length = 2.0 / grid.resolution() as f64 * grid.size() as f64;
        Ok(Self { grid, length })
    }

    pub fn grid(&self) -> &SimplexGrid {
        &self.grid
    }

    /// Parameter range `[0, (2/N)·N_grid]`.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// `γ(θ)`; parameters past the last grid point map to that point.
    pub fn point(&self, theta: f64) -> Result<ProbabilityVector> {
        if !(0.0..=self.length).contains(&theta) {
            return Err(Error::Range(format!(
                "curve parameter {theta} outside [0, {}]",
                self.length
            )));
        }
        let s = theta * self.grid.resolution() as f64 / 2.0;
        let k = s.floor() as u128;
        let last = self.grid.size() - 1;
        if k >= last {
            return self.grid.point(last);
        }
        let t = 1.0 + k as f64 - s;
        let (x, y) = (self.grid.point(k)?, self.grid.point(k + 1)?);
        Ok(ProbabilityVector::from_trusted(
            x.iter().zip(y.iter()).map(|(a, b)| t * a + (1.0 - t) * b).collect(),
        ))
    }
}

/// Dense-curve search for an objective known up to a [`Bracket`].
///
/// Stops at precision `eps` or after `max_iterations` interval steps.
/// Refuses when the worst-case step count exceeds `ceiling`.
pub fn maximize_dense_curve_bracketed<F>(
    mut f: F,
    beta: &Modulus,
    d: usize,
    eps: f64,
    max_iterations: Option<usize>,
    ceiling: u128,
) -> Result<OptimizationOutcome>
where
    F: FnMut(&[f64]) -> Result<Bracket>,
{
    if d < 2 {
        return Err(Error::Domain(format!("simplex search needs d >= 2, got {d}")));
    }
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("precision must be positive, got {eps}")));
    }
    let alpha = largest_step(beta, eps / 2.0, 2.0)?;
    let n = (2.0 * (d as f64 - 1.0) / alpha).ceil();
    if !(n < 1e18) {
        return Err(Error::Domain(format!("curve resolution {n} is too large")));
    }
    let curve = SimplexCurve::new(SimplexGrid::new(d, n as u64)?)?;
    let along = beta.clone().compose(Modulus::Saturating(2.0));
    let step = largest_step(&along, eps / 4.0, curve.length())?;
    let estimate = (curve.length() / step).ceil();
    let estimate = if estimate < 1e30 { estimate as u128 } else { u128::MAX };
    if estimate > ceiling {
        return Err(Error::Refusal {
            what: format!("dense-curve search (d={d}, N={n})"),
            estimate,
            ceiling,
        });
    }
    let stop = match max_iterations {
        Some(k) => Stop::MaxIterations(k),
        None => Stop::Precision(eps / 2.0),
    };
    let inner = maximize_1d_bracketed(
        |theta| f(&curve.point(theta)?),
        &along,
        0.0,
        curve.length(),
        stop,
    )?;
    let slack = beta.eval(2.0 * (d as f64 - 1.0) / n);
    Ok(OptimizationOutcome {
        best_value: inner.best_value,
        best_point: curve.point(inner.best_point[0])?.into_inner(),
        upper_bound: inner.upper_bound + slack,
        iterations: inner.iterations,
        converged: inner.converged,
    })
}

/// Maximizes a `β`-Lipschitz-like function (l1 norm) on `Δ_d` by running
/// the interval search along an `α`-dense curve.
pub fn maximize_dense_curve<F>(
    mut f: F,
    beta: &Modulus,
    d: usize,
    eps: f64,
    max_iterations: Option<usize>,
) -> Result<OptimizationOutcome>
where
    F: FnMut(&[f64]) -> f64,
{
    maximize_dense_curve_bracketed(
        |x| Ok(Bracket::exact(f(x))),
        beta,
        d,
        eps,
        max_iterations,
        u128::MAX,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_points() {
        let c = SimplexCurve::new(SimplexGrid::new(3, 3).unwrap()).unwrap();
        assert_eq!(c.point(0.0).unwrap().entries(), &[1.0, 0.0, 0.0]);
        let p = c.point(2.0 / 3.0).unwrap();
        for (a, b) in p.iter().zip([2.0 / 3.0, 1.0 / 3.0, 0.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        let p = c.point(1.0 / 3.0).unwrap();
        for (a, b) in p.iter().zip([5.0 / 6.0, 1.0 / 6.0, 0.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(c.point(c.length()).unwrap().entries(), &[0.0, 0.0, 1.0]);
        assert!(c.point(-0.1).is_err());
        assert!(c.point(c.length() + 0.1).is_err());
    }

    #[test]
    fn linear_objective() {
        let c = [0.2, -1.0, 0.9];
        let out = maximize_dense_curve(
            |x| x.iter().zip(&c).map(|(a, b)| a * b).sum(),
            &Modulus::Linear(1.0),
            3,
            0.1,
            None,
        )
        .unwrap();
        assert!(out.converged);
        assert!(out.best_value >= 0.8 && out.best_value <= 0.9 + 1e-12);
        assert!(out.upper_bound >= 0.9);
    }

    #[test]
    fn constant_objective() {
        let out = maximize_dense_curve(|_| 3.0, &Modulus::Linear(1.0), 4, 0.2, None).unwrap();
        assert!(out.converged);
        assert_eq!(out.best_value, 3.0);
    }
}
