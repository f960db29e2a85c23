//! The corrected estimator applied to three common settings: jackknife
//! pseudo-values, multiple-imputation total variance, and the Welch
//! two-sample test.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::{corrected_df, satterthwaite_df, ComponentSet};
use crate::sum::sum;

/// Jackknife pseudo-values `T_k`, at least two and not all equal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PseudoValueSet {
    values: Vec<f64>,
}

impl PseudoValueSet {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::invalid(format!(
                "need at least 2 pseudo-values, got {}",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("pseudo-value {v} is not finite")));
        }
        if values.iter().all(|v| *v == values[0]) {
            return Err(Error::degenerate("all pseudo-values are identical"));
        }
        Ok(Self { values })
    }

    /// Leave-one-out values `T_k = T(x_1, .., x_{k-1}, x_{k+1}, .., x_K)`.
    pub fn leave_one_out<T, F>(observations: &[T], statistic: F) -> Result<Self>
    where
        T: Clone,
        F: Fn(&[T]) -> f64,
    {
        let mut rest = Vec::with_capacity(observations.len().saturating_sub(1));
        let values = (0..observations.len())
            .map(|k| {
                rest.clear();
                rest.extend_from_slice(&observations[..k]);
                rest.extend_from_slice(&observations[k + 1..]);
                statistic(&rest)
            })
            .collect();
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        sum(self.values.iter().copied()) / self.values.len() as f64
    }

    /// `d_k = T_k − T·`.
    pub fn deviations(&self) -> Vec<f64> {
        let mean = self.mean();
        self.values.iter().map(|t| t - mean).collect()
    }

    /// `(K−1)/K · Σ d_k²`.
    pub fn jackknife_variance(&self) -> f64 {
        let k = self.values.len() as f64;
        (k - 1.0) / k * sum(self.deviations().iter().map(|d| d * d))
    }

    /// Components `(1, d_k², 1)`; the common `(K−1)/K` factor cancels in
    /// the df ratio and is left out.
    pub fn component_set(&self) -> Result<ComponentSet> {
        ComponentSet::from_triples(self.deviations().into_iter().map(|d| (1.0, d * d, 1.0)))
    }
}

/// `3 (Σ d²)² / Σ d⁴ − 2`: the corrected estimator with every `ν_k = 1`.
pub fn jackknife_df(pv: &PseudoValueSet) -> Result<f64> {
    Ok(corrected_df(&pv.component_set()?)?.value)
}

/// Sampling and between-imputation variances from `M` imputations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MiVariance {
    sampling_variance: f64,
    sampling_dof: f64,
    imputation_variance: f64,
    num_imputations: u32,
}

impl MiVariance {
    pub fn new(
        sampling_variance: f64,
        sampling_dof: f64,
        imputation_variance: f64,
        num_imputations: u32,
    ) -> Result<Self> {
        if !(sampling_variance.is_finite() && sampling_variance >= 0.0) {
            return Err(Error::invalid(format!(
                "sampling variance must be nonnegative, got {sampling_variance}"
            )));
        }
        if !(imputation_variance.is_finite() && imputation_variance >= 0.0) {
            return Err(Error::invalid(format!(
                "imputation variance must be nonnegative, got {imputation_variance}"
            )));
        }
        if !(sampling_dof.is_finite() && sampling_dof > 0.0) {
            return Err(Error::invalid(format!(
                "sampling dof must be positive, got {sampling_dof}"
            )));
        }
        if num_imputations < 2 {
            return Err(Error::invalid(format!(
                "need at least 2 imputations, got {num_imputations}"
            )));
        }
        if sampling_variance + imputation_variance <= 0.0 {
            return Err(Error::degenerate(
                "sampling and imputation variances are both zero",
            ));
        }
        Ok(Self {
            sampling_variance,
            sampling_dof,
            imputation_variance,
            num_imputations,
        })
    }

    pub fn sampling_variance(&self) -> f64 {
        self.sampling_variance
    }

    pub fn sampling_dof(&self) -> f64 {
        self.sampling_dof
    }

    pub fn imputation_variance(&self) -> f64 {
        self.imputation_variance
    }

    pub fn num_imputations(&self) -> u32 {
        self.num_imputations
    }

    /// `(M+1)/M`, the same as `1 + 1/M`.
    pub fn imputation_weight(&self) -> f64 {
        let m = f64::from(self.num_imputations);
        (m + 1.0) / m
    }

    /// `M − 1`.
    pub fn imputation_dof(&self) -> f64 {
        f64::from(self.num_imputations) - 1.0
    }

    /// `{(1, Var_s, ν_s), ((M+1)/M, Var_imp, M−1)}`.
    pub fn component_set(&self) -> Result<ComponentSet> {
        ComponentSet::from_triples([
            (1.0, self.sampling_variance, self.sampling_dof),
            (
                self.imputation_weight(),
                self.imputation_variance,
                self.imputation_dof(),
            ),
        ])
    }
}

/// `Var_s + (M+1)/M · Var_imp`.
pub fn mi_total_variance(mi: &MiVariance) -> f64 {
    mi.sampling_variance + mi.imputation_weight() * mi.imputation_variance
}

pub fn mi_total_df(mi: &MiVariance) -> Result<f64> {
    Ok(corrected_df(&mi.component_set()?)?.value)
}

/// Sizes and sample variances of two independent samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoSampleSummary {
    n1: u64,
    n2: u64,
    s1_sq: f64,
    s2_sq: f64,
}

impl TwoSampleSummary {
    pub fn new(n1: u64, n2: u64, s1_sq: f64, s2_sq: f64) -> Result<Self> {
        if n1 < 2 || n2 < 2 {
            return Err(Error::invalid(format!(
                "sample sizes must be at least 2, got n1={n1}, n2={n2}"
            )));
        }
        for (name, v) in [("s1_sq", s1_sq), ("s2_sq", s2_sq)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(format!(
                    "{name} must be nonnegative, got {v}"
                )));
            }
        }
        if s1_sq + s2_sq <= 0.0 {
            return Err(Error::degenerate("both sample variances are zero"));
        }
        Ok(Self {
            n1,
            n2,
            s1_sq,
            s2_sq,
        })
    }

    pub fn n1(&self) -> u64 {
        self.n1
    }

    pub fn n2(&self) -> u64 {
        self.n2
    }

    pub fn s1_sq(&self) -> f64 {
        self.s1_sq
    }

    pub fn s2_sq(&self) -> f64 {
        self.s2_sq
    }

    pub fn swapped(&self) -> Self {
        Self {
            n1: self.n2,
            n2: self.n1,
            s1_sq: self.s2_sq,
            s2_sq: self.s1_sq,
        }
    }

    /// `{(1/N₁, S₁², N₁−1), (1/N₂, S₂², N₂−1)}`.
    pub fn component_set(&self) -> Result<ComponentSet> {
        let (n1, n2) = (self.n1 as f64, self.n2 as f64);
        ComponentSet::from_triples([
            (1.0 / n1, self.s1_sq, n1 - 1.0),
            (1.0 / n2, self.s2_sq, n2 - 1.0),
        ])
    }
}

pub fn welch_corrected_df(ts: &TwoSampleSummary) -> Result<f64> {
    Ok(corrected_df(&ts.component_set()?)?.value)
}

/// The classic Welch–Satterthwaite df on the same components.
pub fn welch_satterthwaite_df(ts: &TwoSampleSummary) -> Result<f64> {
    Ok(satterthwaite_df(&ts.component_set()?)?.value)
}
