use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{Bracket, OptimizationOutcome, Stop};
use crate::error::{Error, Result};
use crate::modulus::{largest_step, Modulus};

#[derive(Debug, Clone, Copy)]
struct Sample {
    at: f64,
    value: Bracket,
}

/// Peak of `min(F_left, F_right)` on one interval between adjacent samples.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    bound: f64,
    at: f64,
    left: Sample,
    right: Sample,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .total_cmp(&other.bound)
            .then_with(|| other.left.at.total_cmp(&self.left.at))
    }
}

/// Outcome of one [`SawtoothSearch::step`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepStatus {
    /// A new sample was taken; `gap` is the bound at the selected crossing
    /// minus the value found there.
    Advanced { gap: f64 },
    /// No interval is left to split.
    Exhausted,
}

/// Incremental sawtooth search for the maximum of a `β`-Lipschitz-like
/// function on `[a, b]`.
///
/// Each sample `q_i` contributes the cone `F_i(q) = f(q_i) + β(|q - q_i|)`.
/// Between adjacent samples the peak of `min(F_i, F_{i+1})` is found by
/// bisection, and the highest peak (leftmost on ties) is sampled next.
pub struct SawtoothSearch<'m, F> {
    objective: F,
    beta: &'m Modulus,
    a: f64,
    b: f64,
    precision: Option<f64>,
    samples: Vec<Sample>,
    queue: BinaryHeap<Candidate>,
    best: Sample,
    last_bound: f64,
    iterations: usize,
    initial_gap: f64,
}

impl<'m, F> SawtoothSearch<'m, F>
where
    F: FnMut(f64) -> Result<Bracket>,
{
    /// Samples both endpoints. `precision`, when known, tightens the
    /// crossing-point tolerance.
    pub fn new(
        mut objective: F,
        beta: &'m Modulus,
        a: f64,
        b: f64,
        precision: Option<f64>,
    ) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::Domain(format!("need a < b, got [{a}, {b}]")));
        }
        let left = sample(&mut objective, a)?;
        let right = sample(&mut objective, b)?;
        let best = if right.value.lower > left.value.lower { right } else { left };
        let initial_gap = left.value.upper + beta.eval(b - a) - right.value.lower;
        let mut search = Self {
            objective,
            beta,
            a,
            b,
            precision,
            samples: vec![left, right],
            queue: BinaryHeap::new(),
            best,
            last_bound: f64::INFINITY,
            iterations: 1,
            initial_gap,
        };
        let first = search.candidate(left, right);
        search.queue.push(first);
        Ok(search)
    }

    /// `F_0(b) - f(b)`, the gap checked before the first step.
    pub fn initial_gap(&self) -> f64 {
        self.initial_gap
    }

    /// Number of samples taken beyond the left endpoint.
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Certified upper bound on `max f` over `[a, b]`.
    pub fn upper_bound(&self) -> f64 {
        let top = self.queue.peek().map_or(self.last_bound, |c| c.bound);
        top.max(self.best.value.lower)
    }

    pub fn best(&self) -> (f64, f64) {
        (self.best.at, self.best.value.lower)
    }

    /// The sawtooth envelope `min_i F_i(q)`, an upper bound on `f(q)`.
    pub fn envelope(&self, q: f64) -> f64 {
        self.samples
            .iter()
            .map(|s| s.value.upper + self.beta.eval((q - s.at).abs()))
            .fold(f64::INFINITY, f64::min)
    }

    fn tolerance(&self) -> f64 {
        let width = 1e-10 * (self.b - self.a);
        match self.precision {
            Some(eps) => width.min(eps / (8.0 * self.iterations as f64)),
            None => width,
        }
    }

    fn candidate(&self, left: Sample, right: Sample) -> Candidate {
        let cone_left = |x: f64| left.value.upper + self.beta.eval(x - left.at);
        let cone_right = |x: f64| right.value.upper + self.beta.eval(right.at - x);
        if cone_left(left.at) >= cone_right(left.at) {
            return Candidate { bound: cone_right(left.at), at: left.at, left, right };
        }
        if cone_left(right.at) <= cone_right(right.at) {
            return Candidate { bound: cone_left(right.at), at: right.at, left, right };
        }
        let tol = self.tolerance();
        let (mut lo, mut hi) = (left.at, right.at);
        for _ in 0..200 {
            if hi - lo <= tol {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if cone_left(mid) <= cone_right(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Candidate {
            bound: cone_left(hi).max(cone_right(lo)),
            at: 0.5 * (lo + hi),
            left,
            right,
        }
    }

    /// Samples the highest crossing point and splits its interval.
    pub fn step(&mut self) -> Result<StepStatus> {
        let Some(top) = self.queue.pop() else {
            return Ok(StepStatus::Exhausted);
        };
        self.last_bound = top.bound;
        let fresh = if top.at == top.left.at {
            top.left
        } else if top.at == top.right.at {
            top.right
        } else {
            let s = sample(&mut self.objective, top.at)?;
            self.samples.push(s);
            let (l, r) = (self.candidate(top.left, s), self.candidate(s, top.right));
            self.queue.push(l);
            self.queue.push(r);
            s
        };
        self.iterations += 1;
        if fresh.value.lower > self.best.value.lower {
            self.best = fresh;
        }
        Ok(StepStatus::Advanced {
            gap: top.bound - fresh.value.lower,
        })
    }

    pub fn outcome(&self, converged: bool) -> OptimizationOutcome {
        OptimizationOutcome {
            best_value: self.best.value.lower,
            best_point: vec![self.best.at],
            upper_bound: self.upper_bound(),
            iterations: self.iterations,
            converged,
        }
    }
}

fn sample<F: FnMut(f64) -> Result<Bracket>>(objective: &mut F, at: f64) -> Result<Sample> {
    let value = objective(at)?;
    for v in [value.lower, value.upper] {
        if !v.is_finite() {
            return Err(Error::Evaluation { point: vec![at], value: v });
        }
    }
    Ok(Sample { at, value })
}

/// Maximizes an objective known up to a [`Bracket`] on `[a, b]`.
pub fn maximize_1d_bracketed<F>(
    objective: F,
    beta: &Modulus,
    a: f64,
    b: f64,
    stop: Stop,
) -> Result<OptimizationOutcome>
where
    F: FnMut(f64) -> Result<Bracket>,
{
    let precision = match stop {
        Stop::Precision(eps) if !(eps > 0.0) || !eps.is_finite() => {
            return Err(Error::Domain(format!("precision must be positive, got {eps}")));
        }
        Stop::Precision(eps) => Some(eps),
        Stop::MaxIterations(_) => None,
    };
    let mut search = SawtoothSearch::new(objective, beta, a, b, precision)?;
    let mut gap = search.initial_gap();
    let (limit, target) = match stop {
        Stop::Precision(eps) => {
            let delta = largest_step(beta, eps / 2.0, b - a)?;
            let ceiling = ((b - a) / delta).ceil();
            let limit = if ceiling < 1e15 { 4 * ceiling as usize + 64 } else { usize::MAX };
            (limit, eps)
        }
        Stop::MaxIterations(k) => (k, 0.0),
    };
    while gap > target && search.iterations() < limit {
        match search.step()? {
            StepStatus::Advanced { gap: g } => gap = g,
            StepStatus::Exhausted => break,
        }
    }
    Ok(search.outcome(gap <= target))
}

/// Maximizes a `β`-Lipschitz-like `f` on `[a, b]`.
///
/// ```
/// use macap::{optimize::maximize_1d, Modulus, Stop};
///
/// let out = maximize_1d(|x| -(x - 0.3) * (x - 0.3), &Modulus::Linear(1.4), 0.0, 1.0,
///     Stop::Precision(1e-3)).unwrap();
/// assert!(out.best_value >= -1e-3);
/// ```
pub fn maximize_1d<F>(
    mut f: F,
    beta: &Modulus,
    a: f64,
    b: f64,
    stop: Stop,
) -> Result<OptimizationOutcome>
where
    F: FnMut(f64) -> f64,
{
    maximize_1d_bracketed(|x| Ok(Bracket::exact(f(x))), beta, a, b, stop)
}
