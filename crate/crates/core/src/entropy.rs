//! Probability vectors and Shannon entropy.

use std::f64::consts::LN_2;
use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};

/// Tolerance used when validating probability vectors and stochastic tensors.
pub const PROB_TOL: f64 = 1e-9;

/// Logarithm base used when presenting entropies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Base {
    Nats,
    #[default]
    Bits,
}

impl Base {
    /// Converts a quantity measured in nats to this base.
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            Base::Nats => nats,
            Base::Bits => nats / LN_2,
        }
    }

    /// Converts a quantity measured in this base to nats.
    pub fn to_nats(self, value: f64) -> f64 {
        match self {
            Base::Nats => value,
            Base::Bits => value * LN_2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Base::Nats => "nats",
            Base::Bits => "bits",
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A point of the probability simplex: nonnegative entries summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    /// Validates `entries`; rejects rather than renormalizes.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Validation("probability vector is empty".into()));
        }
        if let Some((i, &v)) = entries
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < -PROB_TOL)
        {
            return Err(Error::Validation(format!(
                "probability entry {i} is {v}"
            )));
        }
        let total: f64 = entries.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::Validation(format!(
                "probability entries sum to {total}"
            )));
        }
        Ok(Self(entries.into_iter().map(|v| v.max(0.0)).collect()))
    }

    /// The uniform distribution on `dim` outcomes.
    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Validation("probability vector is empty".into()));
        }
        Ok(Self(vec![1.0 / dim as f64; dim]))
    }

    /// The point mass on `index`.
    pub fn point_mass(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::Range(format!("index {index} in dimension {dim}")));
        }
        let mut v = vec![0.0; dim];
        v[index] = 1.0;
        Ok(Self(v))
    }

    pub(crate) fn from_trusted(entries: Vec<f64>) -> Self {
        Self(entries)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for ProbabilityVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// `-x ln x` with the convention `0 ln 0 = 0`.
#[inline]
pub(crate) fn neg_xlnx(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.ln()
    } else {
        0.0
    }
}

/// Entropy in nats of a nonnegative slice, no validation.
pub(crate) fn entropy_nats(p: &[f64]) -> f64 {
    p.iter().map(|&x| neg_xlnx(x)).sum()
}

/// Shannon entropy `-Σ p_i log p_i` in the requested base.
pub fn shannon_entropy(p: &ProbabilityVector, base: Base) -> f64 {
    base.from_nats(entropy_nats(p))
}

/// Binary entropy for `x ≤ 1/2`, saturated at `ln 2` beyond, in nats.
pub fn modified_binary_entropy(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!(
            "modified binary entropy needs x >= 0, got {x}"
        )));
    }
    Ok(modified_binary_entropy_unchecked(x))
}

pub(crate) fn modified_binary_entropy_unchecked(x: f64) -> f64 {
    if x >= 0.5 {
        LN_2
    } else {
        neg_xlnx(x) + neg_xlnx(1.0 - x)
    }
}
