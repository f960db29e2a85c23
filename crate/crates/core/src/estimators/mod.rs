//! Degrees-of-freedom estimators for a weighted sum `S² = Σ w_k S_k²` of
//! independent variance components, each with `ν_k S_k² / σ_k² ~ χ²(ν_k)`.

mod weights;

pub use weights::{
    design_effect, kish_neff, relvariance, weighted_mean, weighted_variance, WeightVector,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::sum;

/// One `(weight, variance, dof)` triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceComponent {
    weight: f64,
    variance: f64,
    dof: f64,
}

impl VarianceComponent {
    pub fn new(weight: f64, variance: f64, dof: f64) -> Result<Self> {
        if !(weight.is_finite() && weight >= 0.0) {
            return Err(Error::invalid(format!(
                "weight must be finite and nonnegative, got {weight}"
            )));
        }
        if !(variance.is_finite() && variance >= 0.0) {
            return Err(Error::invalid(format!(
                "variance must be finite and nonnegative, got {variance}"
            )));
        }
        if !(dof.is_finite() && dof > 0.0) {
            return Err(Error::invalid(format!(
                "dof must be finite and positive, got {dof}"
            )));
        }
        Ok(Self {
            weight,
            variance,
            dof,
        })
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn dof(&self) -> f64 {
        self.dof
    }

    /// `w_k S_k²`, the contribution of this component to `S²`.
    pub fn weighted_variance(&self) -> f64 {
        self.weight * self.variance
    }
}

/// A nonempty list of components, at least one of which carries a positive
/// weighted variance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentSet {
    components: Vec<VarianceComponent>,
}

impl ComponentSet {
    pub fn new(components: Vec<VarianceComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::invalid("component set is empty"));
        }
        if !components.iter().any(|c| c.weighted_variance() > 0.0) {
            return Err(Error::degenerate(
                "every component has weight * variance = 0",
            ));
        }
        Ok(Self { components })
    }

    /// Builds a set from `(weight, variance, dof)` triples.
    pub fn from_triples<I>(triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64, f64)>,
    {
        let components = triples
            .into_iter()
            .map(|(w, s, nu)| VarianceComponent::new(w, s, nu))
            .collect::<Result<Vec<_>>>()?;
        Self::new(components)
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[VarianceComponent] {
        &self.components
    }

    pub fn into_components(self) -> Vec<VarianceComponent> {
        self.components
    }

    /// `S² = Σ w_k S_k²`.
    pub fn total_variance(&self) -> f64 {
        sum(self
            .components
            .iter()
            .map(VarianceComponent::weighted_variance))
    }

    pub fn min_dof(&self) -> f64 {
        self.components
            .iter()
            .map(VarianceComponent::dof)
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DfVariant {
    /// `(Σ w S²)² / Σ w² S⁴ / ν`
    Satterthwaite,
    /// `(Σ w S²)² / Σ w² S⁴ / (ν + 2) − 2`
    Corrected,
    /// `(Σ w S²)² / Σ w² S⁴ / (ν + 2)`
    Boardman,
}

impl DfVariant {
    pub const ALL: [DfVariant; 3] = [
        DfVariant::Satterthwaite,
        DfVariant::Boardman,
        DfVariant::Corrected,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DfVariant::Satterthwaite => "satterthwaite",
            DfVariant::Corrected => "corrected",
            DfVariant::Boardman => "boardman",
        }
    }

    /// Added to each `ν_k` in the denominator.
    fn dof_offset(self) -> f64 {
        match self {
            DfVariant::Satterthwaite => 0.0,
            DfVariant::Corrected | DfVariant::Boardman => 2.0,
        }
    }

    /// Subtracted from the ratio.
    pub fn shift(self) -> f64 {
        match self {
            DfVariant::Corrected => 2.0,
            DfVariant::Satterthwaite | DfVariant::Boardman => 0.0,
        }
    }

    pub fn estimate(self, set: &ComponentSet) -> Result<DfEstimate> {
        ratio_estimate(set, self)
    }
}

impl std::fmt::Display for DfVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// An effective-dof estimate with the two sums it was formed from.
///
/// `value == numerator / denominator - variant.shift()` up to rounding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DfEstimate {
    pub variant: DfVariant,
    pub value: f64,
    pub numerator: f64,
    pub denominator: f64,
}

pub fn satterthwaite_df(set: &ComponentSet) -> Result<DfEstimate> {
    ratio_estimate(set, DfVariant::Satterthwaite)
}

pub fn corrected_df(set: &ComponentSet) -> Result<DfEstimate> {
    ratio_estimate(set, DfVariant::Corrected)
}

pub fn boardman_df(set: &ComponentSet) -> Result<DfEstimate> {
    ratio_estimate(set, DfVariant::Boardman)
}

fn ratio_estimate(set: &ComponentSet, variant: DfVariant) -> Result<DfEstimate> {
    let offset = variant.dof_offset();
    let comps = set.components();

    let numerator = set.total_variance().powi(2);
    let denominator = sum(comps.iter().map(|c| {
        let a = c.weighted_variance();
        a * a / (c.dof + offset)
    }));

    // The ratio is evaluated on weighted variances scaled by their maximum
    // so that tiny or huge inputs neither underflow nor overflow.
    let scale = comps
        .iter()
        .map(VarianceComponent::weighted_variance)
        .fold(0.0, f64::max);
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::degenerate("weighted variances sum to zero"));
    }

    let mut contributing = comps.iter().filter(|c| c.weighted_variance() > 0.0);
    let only = match (contributing.next(), contributing.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    };

    let value = if let Some(c) = only {
        // A single effective component: the ratio is exactly ν + offset.
        match variant {
            DfVariant::Corrected | DfVariant::Satterthwaite => c.dof,
            DfVariant::Boardman => c.dof + offset,
        }
    } else {
        let scaled_total = sum(comps.iter().map(|c| c.weighted_variance() / scale));
        let scaled_denominator = sum(comps.iter().map(|c| {
            let a = c.weighted_variance() / scale;
            a * a / (c.dof + offset)
        }));
        scaled_total * scaled_total / scaled_denominator - variant.shift()
    };

    if !(value > 0.0 && value.is_finite()) {
        return Err(Error::degenerate(format!(
            "{variant} estimate {value} is not positive"
        )));
    }

    Ok(DfEstimate {
        variant,
        value,
        numerator,
        denominator,
    })
}

/// The Satterthwaite value written as `K` times the harmonic mean of
/// `q_k = ν_k (mean(wS²) / (w_k S_k²))²`.
///
/// Algebraically identical to [`satterthwaite_df`]; kept as an independent
/// route for cross-checking. Every weighted variance must be positive.
pub fn satterthwaite_df_harmonic(set: &ComponentSet) -> Result<f64> {
    let comps = set.components();
    if let Some(i) = comps.iter().position(|c| c.weighted_variance() <= 0.0) {
        return Err(Error::degenerate(format!(
            "component {i} has weight * variance = 0; the harmonic form needs all positive"
        )));
    }
    let k = comps.len() as f64;
    let mean = set.total_variance() / k;
    let inverse_sum = sum(comps.iter().map(|c| {
        let r = mean / c.weighted_variance();
        1.0 / (c.dof * r * r)
    }));
    let harmonic = k / inverse_sum;
    Ok(k * harmonic)
}
