//! Weight summaries: Kish's effective sample size, the design effect, the
//! relvariance of the weights, and the population-style weighted moments.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sum::sum;

/// Relative slack below zero that [`weighted_variance`] treats as rounding.
const NEGATIVE_VARIANCE_TOLERANCE: f64 = 1e-12;

/// Nonnegative weights with a positive total.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightVector {
    weights: Vec<f64>,
    total: f64,
}

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("weight vector is empty"));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::invalid(format!(
                "weights must be finite and nonnegative, got {w}"
            )));
        }
        let total = sum(weights.iter().copied());
        if total <= 0.0 {
            return Err(Error::AllZeroWeights);
        }
        Ok(Self { weights, total })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn into_weights(self) -> Vec<f64> {
        self.weights
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn mean(&self) -> f64 {
        self.total / self.weights.len() as f64
    }

    /// Number of strictly positive weights.
    pub fn positive_count(&self) -> usize {
        self.weights.iter().filter(|w| **w > 0.0).count()
    }

    fn sum_of_squares(&self) -> f64 {
        sum(self.weights.iter().map(|w| w * w))
    }
}

/// Kish's effective sample size `(Σ w)² / Σ w²`.
pub fn kish_neff(w: &WeightVector) -> f64 {
    w.total * w.total / w.sum_of_squares()
}

/// `1 + relvariance(w)`, which equals `N / n_eff`.
pub fn design_effect(w: &WeightVector) -> f64 {
    1.0 + relvariance(w)
}

/// `(1/N) Σ (w_k / w̄ − 1)²`.
pub fn relvariance(w: &WeightVector) -> f64 {
    let mean = w.mean();
    let n = w.len() as f64;
    sum(w.weights.iter().map(|x| {
        let d = x / mean - 1.0;
        d * d
    })) / n
}

/// `Σ w y / Σ w`.
pub fn weighted_mean(values: &[f64], w: &WeightVector) -> Result<f64> {
    check_lengths(values, w)?;
    Ok(sum(values.iter().zip(&w.weights).map(|(y, w)| w * y)) / w.total)
}

/// Weighted second moment minus the squared weighted mean (divides by the
/// total weight, no small-sample factor).
///
/// Results in `[-1e-12 · m2, 0)` are rounding and clamp to zero; anything
/// more negative is reported as an error.
pub fn weighted_variance(values: &[f64], w: &WeightVector) -> Result<f64> {
    let mean = weighted_mean(values, w)?;
    let second = sum(values.iter().zip(&w.weights).map(|(y, w)| w * y * y)) / w.total;
    let var = second - mean * mean;
    if var >= 0.0 {
        Ok(var)
    } else if var >= -NEGATIVE_VARIANCE_TOLERANCE * second {
        Ok(0.0)
    } else {
        Err(Error::invalid(format!(
            "weighted variance {var} is negative beyond rounding (second moment {second})"
        )))
    }
}

fn check_lengths(values: &[f64], w: &WeightVector) -> Result<()> {
    if values.len() != w.len() {
        return Err(Error::LengthMismatch {
            values: values.len(),
            weights: w.len(),
        });
    }
    Ok(())
}
