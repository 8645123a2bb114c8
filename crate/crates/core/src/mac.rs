//! Multiple access channels and the mutual-information reformulation.
//!
//! For two senders, fixing the second input distribution `q` turns the
//! channel into a point-to-point channel `A_q` with an input cost `b_q`, and
//! `I(p, q) = H(A_q p) - ⟨b_q, p⟩`.

use crate::entropy::{entropy_nats, neg_xlnx, Base, ProbabilityVector, PROB_TOL};
use crate::error::{Error, Result};
use crate::modulus::Modulus;

/// Transition tensor `N(z | b1, ..., bN)` of a discrete memoryless MAC.
///
/// Entries are stored row-major over `(z, b1, ..., bN)` with the first
/// sender slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct Mac {
    input_sizes: Vec<usize>,
    dout: usize,
    transition: Vec<f64>,
}

impl Mac {
    /// Validates sizes, entry ranges and column stochasticity. Entries within
    /// the probability tolerance of `[0, 1]` are clamped into it.
    pub fn new(input_sizes: Vec<usize>, dout: usize, mut transition: Vec<f64>) -> Result<Self> {
        if input_sizes.is_empty() || input_sizes.contains(&0) || dout == 0 {
            return Err(Error::Validation(format!(
                "alphabet sizes must be positive (inputs {input_sizes:?}, output {dout})"
            )));
        }
        let inputs = input_sizes
            .iter()
            .try_fold(1usize, |acc, &s| acc.checked_mul(s))
            .ok_or_else(|| Error::Validation("input alphabet product overflows".into()))?;
        if transition.len() != inputs * dout {
            return Err(Error::Validation(format!(
                "transition has {} entries, expected {}",
                transition.len(),
                inputs * dout
            )));
        }
        if let Some(pos) = transition
            .iter()
            .position(|v| !v.is_finite() || *v < -PROB_TOL || *v > 1.0 + PROB_TOL)
        {
            return Err(Error::Validation(format!(
                "transition entry {} at output {} input {:?} is outside [0, 1]",
                transition[pos],
                pos / inputs,
                unflatten(pos % inputs, &input_sizes)
            )));
        }
        transition.iter_mut().for_each(|v| *v = v.clamp(0.0, 1.0));
        for col in 0..inputs {
            let total: f64 = (0..dout).map(|z| transition[z * inputs + col]).sum();
            if (total - 1.0).abs() > PROB_TOL {
                return Err(Error::Validation(format!(
                    "transition column for input {:?} sums to {total}",
                    unflatten(col, &input_sizes)
                )));
            }
        }
        Ok(Self {
            input_sizes,
            dout,
            transition,
        })
    }

    /// Two-sender channel with entries laid out as `[z][b1][b2]`.
    pub fn two_sender(d1: usize, d2: usize, dout: usize, transition: Vec<f64>) -> Result<Self> {
        Self::new(vec![d1, d2], dout, transition)
    }

    /// Builds a two-sender channel from `n(z, b1, b2)`.
    pub fn from_fn(
        d1: usize,
        d2: usize,
        dout: usize,
        n: impl Fn(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut t = Vec::with_capacity(d1 * d2 * dout);
        for z in 0..dout {
            for b1 in 0..d1 {
                for b2 in 0..d2 {
                    t.push(n(z, b1, b2));
                }
            }
        }
        Self::two_sender(d1, d2, dout, t)
    }

    pub fn input_sizes(&self) -> &[usize] {
        &self.input_sizes
    }

    pub fn senders(&self) -> usize {
        self.input_sizes.len()
    }

    pub fn dout(&self) -> usize {
        self.dout
    }

    /// Number of joint input tuples.
    pub fn joint_inputs(&self) -> usize {
        self.input_sizes.iter().product()
    }

    /// Raw row-major transition entries.
    pub fn transition(&self) -> &[f64] {
        &self.transition
    }

    /// `N(z | joint input)`.
    pub fn entry(&self, z: usize, joint_input: usize) -> f64 {
        self.transition[z * self.joint_inputs() + joint_input]
    }

    /// Output distribution for one joint input tuple.
    pub fn column(&self, joint_input: usize) -> Vec<f64> {
        (0..self.dout).map(|z| self.entry(z, joint_input)).collect()
    }

    fn require_two(&self) -> Result<(usize, usize)> {
        match self.input_sizes[..] {
            [d1, d2] => Ok((d1, d2)),
            _ => Err(Error::UnsupportedShape(format!(
                "operation needs a two-sender channel, this one has {} senders",
                self.senders()
            ))),
        }
    }

    /// `(d1, d2)` for a two-sender channel.
    pub fn two_sender_sizes(&self) -> Result<(usize, usize)> {
        self.require_two()
    }

    /// `N(z | b1, b2)` for a two-sender channel.
    pub fn get(&self, z: usize, b1: usize, b2: usize) -> f64 {
        let d2 = self.input_sizes[1];
        self.entry(z, b1 * d2 + b2)
    }

    /// The same channel with the two inputs exchanged.
    pub fn swapped(&self) -> Result<Self> {
        let (d1, d2) = self.require_two()?;
        Mac::from_fn(d2, d1, self.dout, |z, b2, b1| self.get(z, b1, b2))
    }

    /// Largest output-column entropy `H_N^max` in nats.
    pub fn h_n_max(&self) -> f64 {
        (0..self.joint_inputs())
            .map(|c| entropy_nats(&self.column(c)))
            .fold(0.0, f64::max)
    }

    /// The continuity modulus `β_I` of `q ↦ max_p I(p, q)` in the l1 norm.
    pub fn beta_i_modulus(&self) -> Modulus {
        Modulus::MacBetaI {
            dout: self.dout.max(2),
            h_max: self.h_n_max(),
        }
    }
}

pub(crate) fn unflatten(mut index: usize, sizes: &[usize]) -> Vec<usize> {
    let mut out = vec![0; sizes.len()];
    for (slot, &s) in out.iter_mut().zip(sizes).rev() {
        *slot = index % s;
        index /= s;
    }
    out
}

pub(crate) fn flatten(digits: &[usize], sizes: &[usize]) -> usize {
    digits.iter().zip(sizes).fold(0, |acc, (&d, &s)| acc * s + d)
}

/// The point-to-point channel `A_q` (dout × d1, column-stochastic) and the
/// cost vector `b_q` obtained by averaging out the second sender.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveChannel {
    dout: usize,
    d1: usize,
    aq: Vec<f64>,
    bq: Vec<f64>,
}

impl EffectiveChannel {
    /// Builds from a column-stochastic `dout × inputs` matrix (row-major) and
    /// a cost vector.
    pub(crate) fn from_parts(dout: usize, d1: usize, aq: Vec<f64>, bq: Vec<f64>) -> Self {
        Self { dout, d1, aq, bq }
    }

    pub fn dout(&self) -> usize {
        self.dout
    }

    pub fn inputs(&self) -> usize {
        self.d1
    }

    /// `A_q(z, b1)`.
    pub fn aq(&self, z: usize, b1: usize) -> f64 {
        self.aq[z * self.d1 + b1]
    }

    pub fn aq_matrix(&self) -> &[f64] {
        &self.aq
    }

    /// `b_q`, in nats.
    pub fn bq(&self) -> &[f64] {
        &self.bq
    }

    /// `A_q p`.
    pub fn output(&self, p: &[f64]) -> Vec<f64> {
        (0..self.dout)
            .map(|z| {
                let row = &self.aq[z * self.d1..(z + 1) * self.d1];
                row.iter().zip(p).map(|(a, x)| a * x).sum()
            })
            .collect()
    }

    /// `H(A_q p) - ⟨b_q, p⟩` in nats.
    pub fn objective(&self, p: &[f64]) -> f64 {
        let cost: f64 = self.bq.iter().zip(p).map(|(b, x)| b * x).sum();
        entropy_nats(&self.output(p)) - cost
    }
}

fn check_dim(what: &str, got: usize, expected: usize) -> Result<()> {
    if got != expected {
        return Err(Error::Validation(format!(
            "{what} has dimension {got}, expected {expected}"
        )));
    }
    Ok(())
}

/// `A_q(z, b1) = Σ_{b2} N(z|b1,b2) q(b2)` and
/// `b_q(b1) = -Σ_{b2} q(b2) Σ_z N ln N`.
pub fn effective_channel(mac: &Mac, q: &ProbabilityVector) -> Result<EffectiveChannel> {
    let (d1, d2) = mac.require_two()?;
    check_dim("q", q.dim(), d2)?;
    let dout = mac.dout();
    let mut aq = vec![0.0; dout * d1];
    let mut bq = vec![0.0; d1];
    for z in 0..dout {
        for b1 in 0..d1 {
            for (b2, &w) in q.iter().enumerate() {
                let n = mac.get(z, b1, b2);
                aq[z * d1 + b1] += w * n;
                bq[b1] += w * neg_xlnx(n);
            }
        }
    }
    Ok(EffectiveChannel::from_parts(dout, d1, aq, bq))
}

/// `I(p, q) = H(A_q p) - ⟨b_q, p⟩` for product inputs, in `base`.
pub fn mutual_information(
    mac: &Mac,
    p: &ProbabilityVector,
    q: &ProbabilityVector,
    base: Base,
) -> Result<f64> {
    let (d1, _) = mac.require_two()?;
    check_dim("p", p.dim(), d1)?;
    let ch = effective_channel(mac, q)?;
    Ok(base.from_nats(ch.objective(p)))
}

/// Mutual information `I(B1..BN; Z)` of an N-sender channel under independent
/// inputs, in nats.
pub fn mutual_information_product(mac: &Mac, inputs: &[ProbabilityVector]) -> Result<f64> {
    check_dim("input list", inputs.len(), mac.senders())?;
    for (i, (p, &s)) in inputs.iter().zip(mac.input_sizes()).enumerate() {
        check_dim(&format!("input {i}"), p.dim(), s)?;
    }
    let joint = mac.joint_inputs();
    let mut out = vec![0.0; mac.dout()];
    let mut conditional = 0.0;
    for col in 0..joint {
        let digits = unflatten(col, mac.input_sizes());
        let weight: f64 = digits.iter().zip(inputs).map(|(&d, p)| p[d]).product();
        if weight == 0.0 {
            continue;
        }
        let column = mac.column(col);
        conditional += weight * entropy_nats(&column);
        for (o, n) in out.iter_mut().zip(&column) {
            *o += weight * n;
        }
    }
    Ok(entropy_nats(&out) - conditional)
}

/// The two example channels whose noise-free subspaces make the sum capacity
/// hand-computable.
pub mod examples {
    use super::Mac;

    /// One noiseless input pair, all others uniform noise.
    pub fn noise_free_one() -> Mac {
        Mac::two_sender(2, 2, 2, vec![1.0, 0.5, 0.5, 0.5, 0.0, 0.5, 0.5, 0.5])
            .expect("valid channel")
    }

    /// Two noiseless input pairs on the diagonal, off-diagonal uniform noise.
    pub fn noise_free_two() -> Mac {
        Mac::two_sender(2, 2, 2, vec![1.0, 0.5, 0.5, 0.0, 0.0, 0.5, 0.5, 1.0])
            .expect("valid channel")
    }
}
