use rayon::prelude::*;

use super::{Bracket, OptimizationOutcome};
use crate::entropy::ProbabilityVector;
use crate::error::{Error, Result};
use crate::modulus::{largest_step, Modulus};

/// `C(n, k)`, or `None` on overflow.
pub fn binomial(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc.checked_mul(n - k + i)? / i;
    }
    Some(acc)
}

/// The grid `Δ_{d,N} = {n/N : n ∈ ℕ^d, Σ n = N}` in its equidistant order.
///
/// The order lists points by decreasing first coordinate `N - ℓ`; within
/// each block the remaining `d - 1` coordinates run through `Δ_{d-1,ℓ}`
/// forwards when `N - ℓ` is even and backwards otherwise. Every forward
/// order then ends at `(0, ..., 0, N)`, so consecutive points are exactly
/// `2/N` apart in the l1 norm in every dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimplexGrid {
    d: usize,
    n: u64,
    size: u128,
}

impl SimplexGrid {
    pub fn new(d: usize, n: u64) -> Result<Self> {
        if d < 1 || n < 1 {
            return Err(Error::Domain(format!("grid needs d >= 1 and N >= 1, got d={d}, N={n}")));
        }
        let size = binomial(u128::from(n) + d as u128 - 1, d as u128 - 1)
            .ok_or_else(|| Error::Domain(format!("grid size overflows for d={d}, N={n}")))?;
        Ok(Self { d, n, size })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn resolution(&self) -> u64 {
        self.n
    }

    /// Number of grid points, `C(N + d - 1, d - 1)`.
    pub fn size(&self) -> u128 {
        self.size
    }

    /// Integer coordinates `n` of the `index`-th point, in O(d log N) time
    /// and O(d) memory.
    pub fn counts(&self, index: u128) -> Result<Vec<u64>> {
        if index >= self.size {
            return Err(Error::Range(format!("grid index {index} (size {})", self.size)));
        }
        let mut out = Vec::with_capacity(self.d);
        let mut rank = index;
        let mut total = self.n;
        for dim in (2..=self.d as u128).rev() {
            // Blocks ℓ' < ℓ hold C(ℓ + dim - 2, dim - 1) points in total.
            let before = |l: u64| binomial(u128::from(l) + dim - 2, dim - 1).unwrap_or(u128::MAX);
            let (mut lo, mut hi) = (0u64, total);
            while lo < hi {
                let mid = lo + (hi - lo + 1) / 2;
                if before(mid) <= rank {
                    lo = mid;
                } else {
                    hi = mid - 1;
                }
            }
            let layer = lo;
            rank -= before(layer);
            if (total - layer) % 2 == 1 {
                let block = binomial(u128::from(layer) + dim - 2, dim - 2).unwrap_or(u128::MAX);
                rank = block - 1 - rank;
            }
            out.push(total - layer);
            total = layer;
        }
        out.push(total);
        Ok(out)
    }

    /// The `index`-th grid point.
    pub fn point(&self, index: u128) -> Result<ProbabilityVector> {
        let n = self.n as f64;
        let counts = self.counts(index)?;
        Ok(ProbabilityVector::from_trusted(
            counts.into_iter().map(|c| c as f64 / n).collect(),
        ))
    }
}

/// Grid resolution `N = ⌈1/δ²⌉` with `δ` the largest step where `β ≤ ε/2`.
pub fn grid_for_precision(beta: &Modulus, d: usize, eps: f64) -> Result<SimplexGrid> {
    if d < 2 {
        return Err(Error::Domain(format!("simplex search needs d >= 2, got {d}")));
    }
    let delta = largest_step(beta, eps / 2.0, 2.0)?;
    let n = (1.0 / (delta * delta)).ceil();
    if !(n < 1e18) {
        return Err(Error::Domain(format!("grid resolution {n} is too large")));
    }
    SimplexGrid::new(d, n as u64)
}

/// Grid search for an objective known up to a [`Bracket`].
///
/// Refuses when the grid has more than `ceiling` points.
pub fn maximize_grid_bracketed<F>(
    f: F,
    beta: &Modulus,
    d: usize,
    eps: f64,
    ceiling: u128,
) -> Result<OptimizationOutcome>
where
    F: Fn(&[f64]) -> Result<Bracket> + Sync,
{
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("precision must be positive, got {eps}")));
    }
    let grid = grid_for_precision(beta, d, eps)?;
    if grid.size() > ceiling {
        return Err(Error::Refusal {
            what: format!("grid search (d={d}, N={})", grid.resolution()),
            estimate: grid.size(),
            ceiling,
        });
    }
    let size = u64::try_from(grid.size()).map_err(|_| Error::Domain("grid too large".into()))?;
    let best = (0..size)
        .into_par_iter()
        .map(|i| {
            let x = grid.point(u128::from(i))?;
            let v = f(&x)?;
            if !v.lower.is_finite() || !v.upper.is_finite() {
                return Err(Error::Evaluation { point: x.into_inner(), value: v.lower });
            }
            Ok((v.lower, i, v.upper))
        })
        .try_reduce_with(|a, b| {
            let upper = a.2.max(b.2);
            let pick = match a.0.total_cmp(&b.0) {
                std::cmp::Ordering::Less => (b.0, b.1),
                std::cmp::Ordering::Greater => (a.0, a.1),
                std::cmp::Ordering::Equal => (a.0, a.1.min(b.1)),
            };
            Ok((pick.0, pick.1, upper))
        })
        .expect("grid is nonempty")?;
    Ok(OptimizationOutcome {
        best_value: best.0,
        best_point: grid.point(u128::from(best.1))?.into_inner(),
        upper_bound: best.2 + eps,
        iterations: size as usize,
        converged: true,
    })
}

/// Maximizes a `β`-Lipschitz-like function (l1 norm) on the simplex `Δ_d`
/// by evaluating it on every point of `Δ_{d,N}` with `N = ⌈1/δ²⌉`.
pub fn maximize_grid<F>(f: F, beta: &Modulus, d: usize, eps: f64) -> Result<OptimizationOutcome>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    maximize_grid_bracketed(|x| Ok(Bracket::exact(f(x))), beta, d, eps, u128::from(u64::MAX))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_for_three_by_three() {
        let g = SimplexGrid::new(3, 3).unwrap();
        assert_eq!(g.size(), 10);
        let expected = [
            [3, 0, 0], [2, 1, 0], [2, 0, 1], [1, 0, 2], [1, 1, 1],
            [1, 2, 0], [0, 3, 0], [0, 2, 1], [0, 1, 2], [0, 0, 3],
        ];
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(g.counts(i as u128).unwrap(), e.to_vec());
        }
        assert!(g.counts(10).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(180, 2), Some(16110));
        assert_eq!(binomial(200, 2), Some(19900));
    }

    #[test]
    fn constant_objective() {
        let out = maximize_grid(|_| 0.7, &Modulus::Linear(1.0), 3, 0.5).unwrap();
        assert_eq!(out.best_value, 0.7);
        assert!((out.upper_bound - 1.2).abs() < 1e-15);
        assert!(maximize_grid(|_| 0.7, &Modulus::Linear(1.0), 1, 0.5).is_err());
    }
}
