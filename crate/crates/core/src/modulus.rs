use std::fmt;
use std::sync::Arc;

use crate::entropy::modified_binary_entropy_unchecked;
use crate::error::{Error, Result};

/// A monotone continuity bound `β` with `β(0) = 0`.
///
/// A function `f` is `β`-Lipschitz-like when `|f(x) - f(y)| ≤ β(‖x - y‖)`.
#[derive(Clone)]
pub enum Modulus {
    /// `L·x`.
    Linear(f64),
    /// `min(x, cap)`.
    Saturating(f64),
    /// The mutual-information modulus `(½ ln(dout-1) + H_max)·x + h̄(x/2)`.
    MacBetaI { dout: usize, h_max: f64 },
    /// `inner(factor·x)`.
    Scaled { inner: Box<Modulus>, factor: f64 },
    /// `outer(inner(x))`.
    Composed {
        outer: Box<Modulus>,
        inner: Box<Modulus>,
    },
    /// `first(x) + second(x)`.
    Sum(Box<Modulus>, Box<Modulus>),
    /// Any caller-supplied monotone map.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modulus::Linear(l) => write!(f, "Linear({l})"),
            Modulus::Saturating(c) => write!(f, "Saturating({c})"),
            Modulus::MacBetaI { dout, h_max } => {
                write!(f, "MacBetaI {{ dout: {dout}, h_max: {h_max} }}")
            }
            Modulus::Scaled { inner, factor } => write!(f, "Scaled({inner:?}, {factor})"),
            Modulus::Composed { outer, inner } => write!(f, "Composed({outer:?}, {inner:?})"),
            Modulus::Sum(a, b) => write!(f, "Sum({a:?}, {b:?})"),
            Modulus::Custom(_) => f.write_str("Custom"),
        }
    }
}

impl Modulus {
    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Modulus::Custom(Arc::new(f))
    }

    /// `self(factor·x)`.
    pub fn scaled(self, factor: f64) -> Self {
        Modulus::Scaled {
            inner: Box::new(self),
            factor,
        }
    }

    /// `self(inner(x))`.
    pub fn compose(self, inner: Modulus) -> Self {
        Modulus::Composed {
            outer: Box::new(self),
            inner: Box::new(inner),
        }
    }

    pub fn plus(self, other: Modulus) -> Self {
        Modulus::Sum(Box::new(self), Box::new(other))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Modulus::Linear(l) => l * x,
            Modulus::Saturating(cap) => x.min(*cap),
            Modulus::MacBetaI { dout, h_max } => {
                let slope = 0.5 * ((*dout as f64) - 1.0).ln() + h_max;
                slope * x + modified_binary_entropy_unchecked(0.5 * x)
            }
            Modulus::Scaled { inner, factor } => inner.eval(factor * x),
            Modulus::Composed { outer, inner } => outer.eval(inner.eval(x)),
            Modulus::Sum(a, b) => a.eval(x) + b.eval(x),
            Modulus::Custom(f) => f(x),
        }
    }
}

/// Largest `δ ∈ (0, diameter]` with `β(δ) ≤ target`, by bisection.
///
/// Returns `diameter` when `β` stays below `target` on the whole range.
pub fn largest_step(beta: &Modulus, target: f64, diameter: f64) -> Result<f64> {
    if !(target > 0.0) || !target.is_finite() {
        return Err(Error::Domain(format!("step target must be positive, got {target}")));
    }
    if !(diameter > 0.0) || !diameter.is_finite() {
        return Err(Error::Domain(format!("diameter must be positive, got {diameter}")));
    }
    if beta.eval(diameter) <= target {
        return Ok(diameter);
    }
    if let Modulus::Linear(l) = beta {
        let mut step = target / l;
        while l * step > target {
            step = f64::from_bits(step.to_bits() - 1);
        }
        return Ok(step);
    }
    let (mut lo, mut hi) = (0.0f64, diameter);
    for _ in 0..400 {
        if lo > 0.0 && hi - lo <= 1e-7 * lo {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if beta.eval(mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo == 0.0 {
        return Err(Error::Domain(format!(
            "modulus exceeds {target} at every positive step"
        )));
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_step_is_exact() {
        let d = largest_step(&Modulus::Linear(1.0), 0.075, 2.0).unwrap();
        assert_eq!(d, 0.075);
    }

    #[test]
    fn unattained_target_returns_diameter() {
        let d = largest_step(&Modulus::Saturating(0.01), 0.5, 2.0).unwrap();
        assert_eq!(d, 2.0);
    }

    #[test]
    fn beta_i_step_is_tight() {
        let beta = Modulus::MacBetaI { dout: 2, h_max: std::f64::consts::LN_2 };
        let d = largest_step(&beta, 0.05, 2.0).unwrap();
        let v = beta.eval(d);
        assert!(v <= 0.05 && v >= 0.05 - 1e-6, "{v}");
        assert!(beta.eval(d * (1.0 + 1e-6)) > 0.05);
    }

    #[test]
    fn rejects_nonpositive_target() {
        assert!(largest_step(&Modulus::Linear(1.0), 0.0, 1.0).is_err());
        assert!(largest_step(&Modulus::Linear(1.0), -1.0, 1.0).is_err());
    }

    #[test]
    fn combinators() {
        let m = Modulus::Linear(2.0).scaled(3.0).plus(Modulus::Saturating(1.0));
        assert_eq!(m.eval(0.5), 3.5);
        assert_eq!(m.eval(2.0), 13.0);
        let c = Modulus::Linear(2.0).compose(Modulus::Saturating(2.0));
        assert_eq!(c.eval(5.0), 4.0);
        assert_eq!(c.eval(0.0), 0.0);
    }
}
