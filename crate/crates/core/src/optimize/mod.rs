//! Global maximization of Lipschitz-like functions.
//!
//! * [`maximize_1d`]: sawtooth (Piyavskii-Shubert) search on an interval.
//! * [`maximize_grid`]: exhaustive search on the rational simplex grid.
//! * [`maximize_dense_curve`]: interval search along a simplex-filling curve.
//! * [`maximize_compact_convex`]: extension to a hypercube plus a cosine curve.

mod convex;
mod curve;
mod grid;
mod interval;

pub use convex::{
    extend, maximize_compact_convex, project_onto_box, project_onto_simplex, ExtensionSpec,
    HypercubeCurve, Norm,
};
pub use curve::{maximize_dense_curve, maximize_dense_curve_bracketed, SimplexCurve};
pub use grid::{binomial, maximize_grid, maximize_grid_bracketed, SimplexGrid};
pub use interval::{maximize_1d, maximize_1d_bracketed, SawtoothSearch, StepStatus};

/// When an optimizer stops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stop {
    /// Stop once the certified gap is at most this value.
    Precision(f64),
    /// Stop after this many iterations and report the certified bound.
    MaxIterations(usize),
}

/// Enclosure `[lower, upper]` of an objective value that is only known
/// approximately; exact evaluations have `lower == upper`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
}

impl Bracket {
    pub fn exact(value: f64) -> Self {
        Self {
            lower: value,
            upper: value,
        }
    }
}

/// Result of a maximization.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationOutcome {
    /// Largest objective value found (a certified lower bound on the maximum).
    pub best_value: f64,
    /// Where `best_value` was attained.
    pub best_point: Vec<f64>,
    /// Certified upper bound on the maximum.
    pub upper_bound: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl OptimizationOutcome {
    pub fn gap(&self) -> f64 {
        self.upper_bound - self.best_value
    }
}
