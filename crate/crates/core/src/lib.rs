//! Effective degrees of freedom for weighted sums of independent variance
//! components.
//!
//! The crate provides the Satterthwaite estimator, its small-sample
//! corrected form (and Boardman's unshifted variant), Kish's effective
//! sample size with the related design-effect summaries, wrappers for the
//! jackknife, multiple-imputation and Welch settings, and a chi-square
//! Monte Carlo harness for studying the bias of each estimator.

pub mod applications;
pub mod error;
pub mod estimators;
pub mod montecarlo;
mod sum;

pub use error::{Error, Result};
pub use estimators::{
    boardman_df, corrected_df, design_effect, kish_neff, relvariance, satterthwaite_df,
    satterthwaite_df_harmonic, weighted_mean, weighted_variance, ComponentSet, DfEstimate,
    DfVariant, VarianceComponent, WeightVector,
};
