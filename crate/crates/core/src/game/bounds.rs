use super::{ClassicalStrategy, NonlocalGame};
use crate::entropy::{entropy_nats, ProbabilityVector};
use crate::error::{Error, Result};

/// Known optimal quantum winning probabilities of the built-in games.
pub mod quantum {
    /// Magic square: a perfect quantum strategy exists.
    pub const MAGIC_SQUARE: f64 = 1.0;
    /// CHSH: Tsirelson's bound `(1 + 1/√2)/2`.
    pub const CHSH: f64 = 0.5 + std::f64::consts::FRAC_1_SQRT_2 / 2.0;
    /// Multiparty parity: a perfect quantum strategy exists.
    pub const MULTIPARTY_PARITY: f64 = 1.0;
}

/// Per-question winning probabilities `w_x` of a strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct WinningVector(Vec<f64>);

impl WinningVector {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::Validation("winning vector is empty".into()));
        }
        if let Some((i, v)) = w.iter().enumerate().find(|(_, v)| !(**v >= 0.0 && **v <= 1.0)) {
            return Err(Error::Validation(format!("winning vector entry {i} is {v}")));
        }
        Ok(Self(w))
    }

    /// Winning vector of a deterministic strategy.
    pub fn from_deterministic(game: &NonlocalGame, strategy: &ClassicalStrategy) -> Result<Self> {
        let w = (0..game.d())
            .map(|q| {
                let x = game.question_tuple(q);
                let y: Vec<usize> =
                    x.iter().zip(&strategy.answers).map(|(&xi, f)| f[xi]).collect();
                f64::from(u8::from(game.is_winning(q, game.answer_index(&y))))
            })
            .collect();
        Self::new(w)
    }

    /// Winning vector of a behaviour `v` laid out as one block of answer
    /// probabilities per question tuple.
    pub fn from_behaviour(game: &NonlocalGame, v: &[f64]) -> Result<Self> {
        let answers = game.answer_tuples();
        if v.len() != game.d() * answers {
            return Err(Error::Validation(format!(
                "behaviour has {} entries, expected {}",
                v.len(),
                game.d() * answers
            )));
        }
        let w = (0..game.d())
            .map(|q| {
                (0..answers)
                    .filter(|&a| game.is_winning(q, a))
                    .map(|a| v[q * answers + a])
                    .sum::<f64>()
                    .clamp(0.0, 1.0)
            })
            .collect();
        Self::new(w)
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn d(&self) -> usize {
        self.0.len()
    }

    /// Average winning probability under uniform questions.
    pub fn mean(&self) -> f64 {
        self.0.iter().sum::<f64>() / self.d() as f64
    }

    /// `W̄_ij = w_i δ_ij + (1 - w_j)/d`.
    pub fn w_bar(&self, i: usize, j: usize) -> f64 {
        let diag = if i == j { self.0[i] } else { 0.0 };
        diag + (1.0 - self.0[j]) / self.d() as f64
    }
}

/// `𝓘_w(π) = H(W̄π) + ⟨π, w⟩ ln d - ln d`, in nats.
pub fn mi_given_winning_vector(w: &WinningVector, pi: &ProbabilityVector) -> Result<f64> {
    let d = w.d();
    if pi.dim() != d {
        return Err(Error::Validation(format!("π has dimension {}, expected {d}", pi.dim())));
    }
    let win: f64 = pi.iter().zip(w.entries()).map(|(p, w)| p * w).sum();
    let out: Vec<f64> = (0..d).map(|i| w.entries()[i] * pi[i] + (1.0 - win) / d as f64).collect();
    let ln_d = (d as f64).ln();
    Ok(entropy_nats(&out) + win * ln_d - ln_d)
}

/// `max_π 𝓘_w(π)` for a 0/1 winning vector with `k` ones:
/// `ln(k + (d - k) d^{-d/(d-k)})`.
pub fn deterministic_max_mi(d: usize, k: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::Domain("d must be positive".into()));
    }
    if k > d {
        return Err(Error::Domain(format!("K = {k} exceeds d = {d}")));
    }
    let df = d as f64;
    Ok(match k {
        0 => 0.0,
        k if k == d => df.ln(),
        k => {
            let rest = (d - k) as f64;
            (k as f64 + rest * (-(df / rest) * df.ln()).exp()).ln()
        }
    })
}

/// `𝓘*(w) = ln Σ_j exp[d · w_eff · ln d · (1 - 1/w_j)]` with
/// `w_eff = (Σ 1/w_i)^{-1}`, for strictly positive `w`.
pub fn istar_positive_w(w: &WinningVector) -> Result<f64> {
    if let Some(i) = w.entries().iter().position(|&v| v <= 0.0) {
        return Err(Error::Domain(format!("winning vector entry {i} is zero")));
    }
    let d = w.d() as f64;
    let w_eff = 1.0 / w.entries().iter().map(|v| 1.0 / v).sum::<f64>();
    let scale = d * w_eff * d.ln();
    let terms: Vec<f64> = w.entries().iter().map(|v| scale * (1.0 - 1.0 / v)).collect();
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln())
}

/// Upper bound `ln(d - 1 + d^{-(1-ω)d})` on the sum capacity of a game MAC
/// assisted by correlations winning with probability at most `ω`, in nats.
pub fn correlation_bound(d: usize, omega: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::Domain(format!("d must be at least 2, got {d}")));
    }
    if !(0.0..=1.0).contains(&omega) {
        return Err(Error::Domain(format!("ω must lie in [0, 1], got {omega}")));
    }
    let df = d as f64;
    Ok((df - 1.0 + (-(1.0 - omega) * df * df.ln()).exp()).ln())
}

/// Winning probability of the promise-free version of a promise game:
/// `(|P|/|X|) ω_P + (1 - |P|/|X|)`.
pub fn promise_free_winning_prob(omega_promise: f64, promise_size: usize, question_space: usize) -> Result<f64> {
    if question_space == 0 || promise_size > question_space {
        return Err(Error::Domain(format!(
            "promise of size {promise_size} does not fit in {question_space} questions"
        )));
    }
    if !(0.0..=1.0).contains(&omega_promise) {
        return Err(Error::Domain(format!("ω must lie in [0, 1], got {omega_promise}")));
    }
    let ratio = promise_size as f64 / question_space as f64;
    Ok(ratio * omega_promise + (1.0 - ratio))
}
