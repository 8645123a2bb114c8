//! Sum capacity of two-sender MACs and the relaxed (joint-input) capacity.
//!
//! For a fixed second-sender distribution `q`, the inner problem
//! `I*(q) = max_p H(A_q p) - ⟨b_q, p⟩` is concave and is solved by a
//! multiplicative fixed-point iteration with a duality-gap certificate. The
//! outer problem over `q` is handled by the Lipschitz-like optimizers in
//! [`crate::optimize`] with the modulus `β_I`.

use crate::entropy::{entropy_nats, Base, ProbabilityVector};
use crate::error::{Error, Result};
use crate::mac::{effective_channel, EffectiveChannel, Mac};
use crate::modulus::largest_step;
use crate::optimize::{
    maximize_1d_bracketed, maximize_dense_curve_bracketed, maximize_grid_bracketed, Bracket, Stop,
};
use crate::DEFAULT_EVAL_CEILING;

/// Default iteration cap for the inner solver.
pub const DEFAULT_INNER_MAX_ITERATIONS: usize = 200_000;

/// Result of the inner maximization over the first sender's distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerSolveReport {
    /// Best objective value found, in nats (a lower bound on the maximum).
    pub value: f64,
    pub optimizer_p: ProbabilityVector,
    /// Certified gap: `value + gap` bounds the maximum from above.
    pub gap: f64,
    pub iterations: usize,
}

impl InnerSolveReport {
    pub fn upper_bound(&self) -> f64 {
        self.value + self.gap
    }

    fn bracket(&self) -> Bracket {
        Bracket { lower: self.value, upper: self.upper_bound() }
    }
}

/// Settings for the inner solver.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerOptions {
    pub max_iterations: usize,
    /// Starting point; uniform when absent. Must have full support.
    pub initial: Option<Vec<f64>>,
}

impl Default for InnerOptions {
    fn default() -> Self {
        Self { max_iterations: DEFAULT_INNER_MAX_ITERATIONS, initial: None }
    }
}

/// Runs the fixed-point iteration on `H(Ap) - ⟨b, p⟩`.
///
/// Returns the report together with a flag telling whether the gap reached
/// `tolerance`; `observer` sees `(iteration, gap)` after every iteration.
pub fn solve_with_observer(
    channel: &EffectiveChannel,
    tolerance: f64,
    options: &InnerOptions,
    mut observer: impl FnMut(usize, f64),
) -> Result<(InnerSolveReport, bool)> {
    if !(tolerance > 0.0) {
        return Err(Error::Domain(format!("inner precision must be positive, got {tolerance}")));
    }
    let (dout, n) = (channel.dout(), channel.inputs());
    let a = channel.aq_matrix();
    let b = channel.bq();
    let mut p = match &options.initial {
        Some(init) if init.len() == n => {
            let total: f64 = init.iter().sum();
            init.iter().map(|v| v / total).collect()
        }
        Some(init) => {
            return Err(Error::Validation(format!(
                "initial point has dimension {}, expected {n}",
                init.len()
            )))
        }
        None => vec![1.0 / n as f64; n],
    };
    let mut best_lower = f64::NEG_INFINITY;
    let mut best_upper = f64::INFINITY;
    let mut best_p = p.clone();
    let mut gap = f64::INFINITY;
    let mut scores = vec![0.0; n];
    let mut iterations = 0;
    while iterations < options.max_iterations {
        iterations += 1;
        let out = channel.output(&p);
        let logs: Vec<f64> = out.iter().map(|o| o.max(f64::MIN_POSITIVE).ln()).collect();
        scores.iter_mut().zip(b).for_each(|(s, bj)| *s = -bj);
        for z in 0..dout {
            let row = &a[z * n..(z + 1) * n];
            for (s, &az) in scores.iter_mut().zip(row) {
                if az > 0.0 {
                    *s -= az * logs[z];
                }
            }
        }
        let average: f64 = scores.iter().zip(&p).map(|(s, x)| s * x).sum();
        let top = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if average > best_lower {
            best_lower = average;
            best_p.copy_from_slice(&p);
        }
        best_upper = best_upper.min(top);
        gap = (best_upper - best_lower).max(0.0);
        observer(iterations, gap);
        if gap <= tolerance {
            break;
        }
        let mut total = 0.0;
        for (x, s) in p.iter_mut().zip(&scores) {
            *x *= (s - top).exp();
            total += *x;
        }
        p.iter_mut().for_each(|x| *x /= total);
    }
    let report = InnerSolveReport {
        value: best_lower,
        optimizer_p: ProbabilityVector::from_trusted(best_p),
        gap,
        iterations,
    };
    Ok((report, gap <= tolerance))
}

fn solve(channel: &EffectiveChannel, tolerance: f64, options: &InnerOptions) -> Result<InnerSolveReport> {
    let (report, converged) = solve_with_observer(channel, tolerance, options, |_, _| {})?;
    if converged {
        Ok(report)
    } else {
        Err(Error::NonConvergence { iterations: report.iterations, gap: report.gap })
    }
}

/// `I*(q) = max_p I(p, q)` to within `eps_inner`, in nats.
pub fn inner_capacity(mac: &Mac, q: &ProbabilityVector, eps_inner: f64) -> Result<InnerSolveReport> {
    inner_capacity_with(mac, q, eps_inner, &InnerOptions::default())
}

pub fn inner_capacity_with(
    mac: &Mac,
    q: &ProbabilityVector,
    eps_inner: f64,
    options: &InnerOptions,
) -> Result<InnerSolveReport> {
    solve(&effective_channel(mac, q)?, eps_inner, options)
}

/// Enclosure of `I*(q)`; a solve that hits the iteration cap still yields a
/// valid (wider) enclosure.
fn inner_bracket(mac: &Mac, q: &ProbabilityVector, eps_inner: f64, options: &InnerOptions)
    -> Result<InnerSolveReport>
{
    let channel = effective_channel(mac, q)?;
    Ok(solve_with_observer(&channel, eps_inner, options, |_, _| {})?.0)
}

/// How the outer maximization over `q` was carried out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    PiyavskiiShubertD2,
    Grid,
    DenseCurve,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::PiyavskiiShubertD2 => "piyavskii_shubert_d2",
            Method::Grid => "grid",
            Method::DenseCurve => "dense_curve",
        }
    }
}

/// Sum-capacity estimate with a certified upper bound, in nats.
#[derive(Debug, Clone, PartialEq)]
pub struct SumCapacityReport {
    /// Achieved sum rate (a lower bound on the sum capacity).
    pub value: f64,
    pub method: Method,
    /// Requested precision, or `None` in bounded-iteration mode.
    pub precision: Option<f64>,
    pub upper_bound: f64,
    /// Distribution of the second sender.
    pub outer_point: ProbabilityVector,
    /// Distribution of the first sender.
    pub inner_point: ProbabilityVector,
    pub iterations: usize,
    pub converged: bool,
}

impl SumCapacityReport {
    pub fn value_in(&self, base: Base) -> f64 {
        base.from_nats(self.value)
    }
}

/// Sum capacity of a two-sender MAC in which one sender is binary, by the
/// sawtooth search over `q = (s, 1 - s)` with modulus `β_I(2x)`.
///
/// ```
/// use macap::{capacity::sum_capacity_d2_binary, mac::examples, Stop};
///
/// let r = sum_capacity_d2_binary(&examples::noise_free_two(), Stop::Precision(0.01)).unwrap();
/// assert!((r.value - 0.5 * 2f64.ln()).abs() < 0.01);
/// ```
pub fn sum_capacity_d2_binary(mac: &Mac, stop: Stop) -> Result<SumCapacityReport> {
    let (d1, d2) = mac.two_sender_sizes()?;
    let swapped = d2 != 2;
    let mac = match (d1, d2) {
        (_, 2) => mac.clone(),
        (2, _) => mac.swapped()?,
        _ => {
            return Err(Error::UnsupportedShape(format!(
                "neither input alphabet is binary ({d1} x {d2}); use the grid or dense-curve method"
            )))
        }
    };
    let d1 = mac.input_sizes()[0];
    let beta = mac.beta_i_modulus().scaled(2.0);
    let eps_inner = match stop {
        Stop::Precision(eps) if eps > 0.0 => {
            let delta = largest_step(&beta, eps / 2.0, 1.0)?;
            eps / (8.0 * (1.0 / delta).ceil())
        }
        Stop::Precision(eps) => {
            return Err(Error::Domain(format!("precision must be positive, got {eps}")))
        }
        Stop::MaxIterations(_) => 1e-9,
    };
    let mut cache: Vec<(f64, ProbabilityVector)> = Vec::new();
    let outcome = maximize_1d_bracketed(
        |s| {
            let q = ProbabilityVector::from_trusted(vec![s, 1.0 - s]);
            let initial = cache
                .iter()
                .min_by(|x, y| (x.0 - s).abs().total_cmp(&(y.0 - s).abs()))
                .map(|(_, p)| p.iter().map(|v| 0.9 * v + 0.1 / d1 as f64).collect());
            let options = InnerOptions { initial, ..InnerOptions::default() };
            let report = inner_bracket(&mac, &q, eps_inner, &options)?;
            cache.push((s, report.optimizer_p.clone()));
            Ok(report.bracket())
        },
        &beta,
        0.0,
        1.0,
        stop,
    )?;
    let s = outcome.best_point[0];
    let q = ProbabilityVector::from_trusted(vec![s, 1.0 - s]);
    let p = cache
        .iter()
        .find(|(t, _)| *t == s)
        .map(|(_, p)| p.clone())
        .expect("best point was evaluated");
    let (outer_point, inner_point) = if swapped { (p, q) } else { (q, p) };
    Ok(SumCapacityReport {
        value: outcome.best_value,
        method: Method::PiyavskiiShubertD2,
        precision: match stop {
            Stop::Precision(eps) => Some(eps),
            Stop::MaxIterations(_) => None,
        },
        upper_bound: outcome.upper_bound,
        outer_point,
        inner_point,
        iterations: outcome.iterations,
        converged: outcome.converged,
    })
}

/// Sum capacity of any two-sender MAC by grid or dense-curve search over the
/// second sender's simplex, refusing when the estimated evaluation count
/// exceeds `ceiling`.
pub fn sum_capacity_general(
    mac: &Mac,
    method: Method,
    eps: f64,
    ceiling: u128,
) -> Result<SumCapacityReport> {
    let (_, d2) = mac.two_sender_sizes()?;
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("precision must be positive, got {eps}")));
    }
    let beta = mac.beta_i_modulus();
    let outer = eps / 2.0;
    let options = InnerOptions::default();
    let evaluate = |x: &[f64], eps_inner: f64| -> Result<Bracket> {
        let q = ProbabilityVector::from_trusted(x.to_vec());
        Ok(inner_bracket(mac, &q, eps_inner, &options)?.bracket())
    };
    let (outcome, eps_inner) = match method {
        Method::Grid => {
            let eps_inner = eps / 2.0;
            let out = maximize_grid_bracketed(|x| evaluate(x, eps_inner), &beta, d2, outer, ceiling)?;
            (out, eps_inner)
        }
        Method::DenseCurve => {
            let eps_inner = eps / 16.0;
            let out = maximize_dense_curve_bracketed(
                |x| evaluate(x, eps_inner),
                &beta,
                d2,
                outer,
                None,
                ceiling,
            )?;
            (out, eps_inner)
        }
        Method::PiyavskiiShubertD2 => return sum_capacity_d2_binary(mac, Stop::Precision(eps)),
    };
    let q = ProbabilityVector::from_trusted(outcome.best_point.clone());
    let inner = inner_bracket(mac, &q, eps_inner, &options)?;
    Ok(SumCapacityReport {
        value: outcome.best_value,
        method,
        precision: Some(eps),
        upper_bound: outcome.upper_bound,
        outer_point: q,
        inner_point: inner.optimizer_p,
        iterations: outcome.iterations,
        converged: outcome.converged,
    })
}

/// [`sum_capacity_general`] with the default evaluation ceiling.
pub fn sum_capacity_general_default(mac: &Mac, method: Method, eps: f64) -> Result<SumCapacityReport> {
    sum_capacity_general(mac, method, eps, DEFAULT_EVAL_CEILING)
}

/// Capacity of the MAC viewed as a point-to-point channel from the joint
/// input tuple, in nats; an upper bound on the sum capacity.
pub fn relaxed_sum_capacity(mac: &Mac, eps: f64) -> Result<InnerSolveReport> {
    relaxed_sum_capacity_with(mac, eps, &InnerOptions::default())
}

/// [`relaxed_sum_capacity`] with explicit solver settings.
pub fn relaxed_sum_capacity_with(mac: &Mac, eps: f64, options: &InnerOptions) -> Result<InnerSolveReport> {
    let joint = mac.joint_inputs();
    let costs = (0..joint).map(|c| entropy_nats(&mac.column(c))).collect();
    let channel = EffectiveChannel::from_parts(mac.dout(), joint, mac.transition().to_vec(), costs);
    solve(&channel, eps, options)
}
