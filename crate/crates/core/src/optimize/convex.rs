use std::f64::consts::PI;

use super::interval::maximize_1d_bracketed;
use super::{Bracket, OptimizationOutcome, Stop};
use crate::error::{Error, Result};
use crate::modulus::{largest_step, Modulus};

/// Norm used to measure distances in the ambient space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Norm {
    #[default]
    L1,
    L2,
}

impl Norm {
    pub fn length(self, v: &[f64]) -> f64 {
        match self {
            Norm::L1 => v.iter().map(|x| x.abs()).sum(),
            Norm::L2 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
        }
    }

    /// Largest `c1` with `c1‖x‖ ≤ ‖x‖₂` in dimension `d`.
    pub fn lower_equivalence(self, d: usize) -> f64 {
        match self {
            Norm::L1 => 1.0 / (d as f64).sqrt(),
            Norm::L2 => 1.0,
        }
    }

    /// Smallest `c2` with `‖x‖₂ ≤ c2‖x‖`.
    pub fn upper_equivalence(self) -> f64 {
        1.0
    }
}

/// A function on a compact convex set `D` together with what is needed to
/// extend it to the whole space: its modulus `β`, a modulus `κ` of `β`
/// itself, and the Euclidean projection onto `D`.
pub struct ExtensionSpec<F, P> {
    pub f: F,
    pub projector: P,
    pub beta: Modulus,
    pub kappa: Modulus,
    pub norm: Norm,
}

impl<F, P> ExtensionSpec<F, P>
where
    F: Fn(&[f64]) -> f64,
    P: Fn(&[f64]) -> Vec<f64>,
{
    pub fn new(f: F, projector: P, beta: Modulus, kappa: Modulus) -> Self {
        Self { f, projector, beta, kappa, norm: Norm::L1 }
    }

    pub fn with_norm(mut self, norm: Norm) -> Self {
        self.norm = norm;
        self
    }

    /// `C = c2/c1` from the norm equivalence in dimension `d`.
    pub fn norm_equiv_c(&self, d: usize) -> f64 {
        self.norm.upper_equivalence() / self.norm.lower_equivalence(d)
    }

    /// `β̄(x) = β(Cx) + κ((C+1)x)`, the modulus of the extension.
    pub fn extended_modulus(&self, d: usize) -> Modulus {
        let c = self.norm_equiv_c(d);
        self.beta.clone().scaled(c).plus(self.kappa.clone().scaled(c + 1.0))
    }

    /// `Π_D(x)`, checked for shape and finiteness.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        let y = (self.projector)(x);
        if y.len() != x.len() {
            return Err(Error::Evaluation { point: x.to_vec(), value: f64::NAN });
        }
        if let Some(bad) = y.iter().find(|v| !v.is_finite()) {
            return Err(Error::Evaluation { point: x.to_vec(), value: *bad });
        }
        Ok(y)
    }
}

/// `f̄(x) = f(Π_D x) - β(‖x - Π_D x‖)`.
pub fn extend<F, P>(spec: &ExtensionSpec<F, P>, x: &[f64]) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
    P: Fn(&[f64]) -> Vec<f64>,
{
    let y = spec.project(x)?;
    let diff: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
    let value = (spec.f)(&y) - spec.beta.eval(spec.norm.length(&diff));
    if !value.is_finite() {
        return Err(Error::Evaluation { point: x.to_vec(), value });
    }
    Ok(value)
}

/// Cosine curve `γ_i(θ) = ((a_i - b_i)/2) cos(η_i θ) + (a_i + b_i)/2` that
/// comes within `√(d-1)·η` (Euclidean) of every point of the box
/// `Π [a_i, b_i]` for `θ ∈ [0, π/η_d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypercubeCurve {
    bounds: Vec<(f64, f64)>,
    eta: f64,
    frequencies: Vec<f64>,
    lip_const: f64,
}

impl HypercubeCurve {
    pub fn new(bounds: Vec<(f64, f64)>, eta: f64) -> Result<Self> {
        if bounds.len() < 2 {
            return Err(Error::Domain(format!(
                "hypercube curve needs dimension >= 2, got {}",
                bounds.len()
            )));
        }
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(Error::Domain(format!("density parameter must be positive, got {eta}")));
        }
        for (i, &(a, b)) in bounds.iter().enumerate() {
            if !(a <= b) || !a.is_finite() || !b.is_finite() {
                return Err(Error::Domain(format!("axis {i} has invalid bounds [{a}, {b}]")));
            }
            if i > 0 && a.abs() + b.abs() == 0.0 {
                return Err(Error::Domain(format!("axis {i} collapses to the origin")));
            }
        }
        let mut frequencies = vec![1.0];
        for &(a, b) in &bounds[1..] {
            let prev = *frequencies.last().expect("nonempty");
            frequencies.push(prev * eta / PI / (a.abs() + b.abs()));
        }
        let lip_const = 0.5
            * bounds
                .iter()
                .zip(&frequencies)
                .map(|(&(a, b), w)| ((a.abs() + b.abs()) * w).powi(2))
                .sum::<f64>()
                .sqrt();
        Ok(Self { bounds, eta, frequencies, lip_const })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Per-axis frequencies `η_i`.
    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    /// Euclidean Lipschitz constant `L_γ`.
    pub fn lip_const(&self) -> f64 {
        self.lip_const
    }

    /// Parameter range `[0, π/η_d]`.
    pub fn domain(&self) -> (f64, f64) {
        (0.0, PI / self.frequencies.last().expect("d >= 2"))
    }

    pub fn point(&self, theta: f64) -> Vec<f64> {
        self.bounds
            .iter()
            .zip(&self.frequencies)
            .map(|(&(a, b), w)| 0.5 * (a - b) * (w * theta).cos() + 0.5 * (a + b))
            .collect()
    }
}

/// Maximizes `f` over a compact convex `D ⊆ bounds` by running the interval
/// search on `f̄ ∘ γ` for a cosine curve `γ` filling the box.
pub fn maximize_compact_convex<F, P>(
    spec: &ExtensionSpec<F, P>,
    bounds: &[(f64, f64)],
    eps: f64,
    max_iterations: Option<usize>,
) -> Result<OptimizationOutcome>
where
    F: Fn(&[f64]) -> f64,
    P: Fn(&[f64]) -> Vec<f64>,
{
    let d = bounds.len();
    if d < 2 {
        return Err(Error::Domain(format!("compact convex search needs d >= 2, got {d}")));
    }
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("precision must be positive, got {eps}")));
    }
    let c1 = spec.norm.lower_equivalence(d);
    let beta_bar = spec.extended_modulus(d);
    let diameter = spec.norm.length(
        &bounds.iter().map(|(a, b)| b - a).collect::<Vec<_>>(),
    );
    let alpha = largest_step(&beta_bar, eps / 2.0, diameter.max(f64::MIN_POSITIVE))?;
    let eta = c1 * alpha / (d as f64 - 1.0).sqrt();
    let curve = HypercubeCurve::new(bounds.to_vec(), eta)?;
    let along = beta_bar.clone().compose(Modulus::Linear(curve.lip_const() / c1));
    let (lo, hi) = curve.domain();
    let stop = match max_iterations {
        Some(k) => Stop::MaxIterations(k),
        None => Stop::Precision(eps / 2.0),
    };
    let inner = maximize_1d_bracketed(
        |theta| extend(spec, &curve.point(theta)).map(Bracket::exact),
        &along,
        lo,
        hi,
        stop,
    )?;
    let best = spec.project(&curve.point(inner.best_point[0]))?;
    let slack = beta_bar.eval((d as f64 - 1.0).sqrt() * eta / c1);
    Ok(OptimizationOutcome {
        best_value: inner.best_value,
        best_point: best,
        upper_bound: inner.upper_bound + slack,
        iterations: inner.iterations,
        converged: inner.converged,
    })
}

/// Euclidean projection onto the box `Π [a_i, b_i]`.
pub fn project_onto_box(x: &[f64], bounds: &[(f64, f64)]) -> Vec<f64> {
    x.iter().zip(bounds).map(|(v, &(a, b))| v.clamp(a, b)).collect()
}

/// Euclidean projection onto the probability simplex.
pub fn project_onto_simplex(x: &[f64]) -> Vec<f64> {
    let mut sorted = x.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut shift = 0.0;
    for (i, &v) in sorted.iter().enumerate() {
        cumulative += v;
        let candidate = (cumulative - 1.0) / (i as f64 + 1.0);
        if v - candidate > 0.0 {
            shift = candidate;
        }
    }
    x.iter().map(|v| (v - shift).max(0.0)).collect()
}
