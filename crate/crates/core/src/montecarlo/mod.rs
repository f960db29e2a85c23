//! Chi-square Monte Carlo harness comparing the uncorrected and corrected
//! df estimators (and Kish's `n_eff`) over a grid of component counts `K`
//! and common component dof `ν̄`.
//!
//! Every cell is split into fixed-size replicate blocks. Block `b` of cell
//! `c` draws from its own ChaCha8 stream `(c << 32) | b` under the run seed,
//! and block summaries are merged in block order, so the output does not
//! depend on how many threads run the blocks.

mod gamma;
mod stats;

pub use gamma::{sample_component_variance, ComponentVarianceSampler, GammaSampler};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{
    corrected_df, kish_neff, satterthwaite_df, ComponentSet, VarianceComponent, WeightVector,
};
use stats::RunningStats;

/// Generator behind every simulation stream.
pub type SimRng = ChaCha8Rng;

/// Replicates per independently seeded block.
pub const BLOCK_SIZE: u64 = 4096;

pub const RNG_DESCRIPTION: &str = "ChaCha8 (rand_chacha), stream (cell << 32 | block), \
    4096 replicates per block; gamma: Marsaglia-Tsang with U^(1/a) boost for shape < 1; \
    normals: rand_distr ziggurat";

const FIXED_WEIGHTS_BLOCK: u64 = 0xFFFF_FFFF;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightMode {
    /// Every `w_k = 1/K`, so that `K w_k = 1`.
    EqualInverseK,
    /// Every `w_k = 1`.
    EqualUnit,
    /// `w_k ~ Normal(1, sd)`, redrawn while `≤ 0`.
    RandomNormal {
        sd: f64,
        /// Draw one weight vector per cell instead of one per replicate.
        fixed_across_replicates: bool,
    },
}

impl WeightMode {
    pub fn random(sd: f64) -> Self {
        WeightMode::RandomNormal {
            sd,
            fixed_across_replicates: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub k_values: Vec<usize>,
    pub nu_values: Vec<f64>,
    pub weight_mode: WeightMode,
    pub sigma_sq: f64,
    pub replicates: u64,
    pub seed: u64,
}

impl SimConfig {
    pub const DEFAULT_REPLICATES: u64 = 100_000;

    /// K ∈ {2,..,64} by ν̄ ∈ {1,..,32}, `w_k = 1/K`.
    pub fn tables_ideal(replicates: u64, seed: u64) -> Self {
        Self {
            k_values: vec![2, 4, 8, 16, 32, 64],
            nu_values: vec![1.0, 2.0, 4.0, 8.0, 16.0, 32.0],
            weight_mode: WeightMode::EqualInverseK,
            sigma_sq: 1.0,
            replicates,
            seed,
        }
    }

    /// K ∈ {16,32,64} by ν̄ ∈ {1,5,50,500} with the given weight mode.
    pub fn tables_weighted(weight_mode: WeightMode, replicates: u64, seed: u64) -> Self {
        Self {
            k_values: vec![16, 32, 64],
            nu_values: vec![1.0, 5.0, 50.0, 500.0],
            weight_mode,
            sigma_sq: 1.0,
            replicates,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_values.is_empty() || self.nu_values.is_empty() {
            return Err(Error::invalid("k_values and nu_values must be nonempty"));
        }
        if self.k_values.contains(&0) {
            return Err(Error::invalid("every K must be at least 1"));
        }
        if self.k_values.len() as u64 > FIXED_WEIGHTS_BLOCK
            || self.nu_values.len() as u64 > FIXED_WEIGHTS_BLOCK
        {
            return Err(Error::invalid("grid is too large"));
        }
        if let Some(nu) = self
            .nu_values
            .iter()
            .find(|nu| !(nu.is_finite() && **nu > 0.0))
        {
            return Err(Error::invalid(format!("nu must be positive, got {nu}")));
        }
        if !(self.sigma_sq.is_finite() && self.sigma_sq > 0.0) {
            return Err(Error::invalid(format!(
                "sigma_sq must be positive, got {}",
                self.sigma_sq
            )));
        }
        if self.replicates == 0 {
            return Err(Error::invalid("replicates must be at least 1"));
        }
        if self.replicates.div_ceil(BLOCK_SIZE) >= FIXED_WEIGHTS_BLOCK {
            return Err(Error::invalid("too many replicates"));
        }
        if let WeightMode::RandomNormal { sd, .. } = self.weight_mode {
            if !(sd.is_finite() && sd >= 0.0) {
                return Err(Error::invalid(format!("sd must be nonnegative, got {sd}")));
            }
        }
        Ok(())
    }

    /// `(K, ν̄)` pairs in output order.
    pub fn grid(&self) -> Vec<(usize, f64)> {
        let mut cells: Vec<(usize, f64)> = self
            .k_values
            .iter()
            .flat_map(|&k| self.nu_values.iter().map(move |&nu| (k, nu)))
            .collect();
        cells.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
        cells
    }
}

/// Aggregated results for one `(K, ν̄)` cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimCell {
    pub k: usize,
    pub nu_bar: f64,
    pub replicates: u64,
    pub mean_satt: f64,
    pub sd_satt: f64,
    pub mean_corr: f64,
    pub sd_corr: f64,
    pub mean_kish: f64,
    /// `K ν̄`.
    pub expected: f64,
    pub ratio_kish_k: f64,
    pub ratio_satt: f64,
    pub ratio_corr: f64,
    /// Nonpositive normal weight draws that were redrawn.
    pub weight_rejections: u64,
}

impl SimCell {
    /// `sd / √R`, the Monte Carlo standard error of `mean_corr`.
    pub fn se_corr(&self) -> f64 {
        self.sd_corr / (self.replicates as f64).sqrt()
    }

    pub fn se_satt(&self) -> f64 {
        self.sd_satt / (self.replicates as f64).sqrt()
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct BlockSummary {
    satt: RunningStats,
    corr: RunningStats,
    kish: RunningStats,
    rejections: u64,
}

impl BlockSummary {
    fn merge(&mut self, other: &BlockSummary) {
        self.satt.merge(&other.satt);
        self.corr.merge(&other.corr);
        self.kish.merge(&other.kish);
        self.rejections += other.rejections;
    }
}

/// The stream for block `block` of cell `cell` under `seed`.
pub fn block_rng(seed: u64, cell: u64, block: u64) -> SimRng {
    let mut rng = SimRng::seed_from_u64(seed);
    rng.set_stream((cell << 32) | block);
    rng
}

fn draw_positive_normal<R: Rng + ?Sized>(sd: f64, rng: &mut R, rejections: &mut u64) -> f64 {
    loop {
        let z: f64 = StandardNormal.sample(rng);
        let w = 1.0 + sd * z;
        if w > 0.0 {
            return w;
        }
        *rejections += 1;
    }
}

fn fill_weights<R: Rng + ?Sized>(weights: &mut [f64], sd: f64, rng: &mut R, rejections: &mut u64) {
    for w in weights.iter_mut() {
        *w = draw_positive_normal(sd, rng, rejections);
    }
}

struct CellPlan {
    k: usize,
    nu_bar: f64,
    sampler: ComponentVarianceSampler,
    /// Weights shared by every replicate, when they do not vary.
    shared_weights: Option<Vec<f64>>,
    random_sd: Option<f64>,
}

fn run_block(plan: &CellPlan, rng: &mut SimRng, replicates: u64) -> Result<BlockSummary> {
    let mut summary = BlockSummary::default();
    let mut weights = plan
        .shared_weights
        .clone()
        .unwrap_or_else(|| vec![0.0; plan.k]);
    let mut components = Vec::with_capacity(plan.k);

    for _ in 0..replicates {
        if let Some(sd) = plan.random_sd {
            fill_weights(&mut weights, sd, rng, &mut summary.rejections);
        }
        components.clear();
        for &w in &weights {
            let s2 = plan.sampler.sample(rng);
            components.push(VarianceComponent::new(w, s2, plan.nu_bar)?);
        }
        let set = ComponentSet::new(std::mem::take(&mut components))?;
        summary.satt.push(satterthwaite_df(&set)?.value);
        summary.corr.push(corrected_df(&set)?.value);
        components = set.into_components();

        let wv = WeightVector::new(weights.clone())?;
        summary.kish.push(kish_neff(&wv));
        weights = wv.into_weights();
    }
    Ok(summary)
}

/// Simulates one cell. `cell_index` selects the cell's family of random
/// streams; [`run_grid`] passes the cell's position in [`SimConfig::grid`].
pub fn run_cell(k: usize, nu_bar: f64, cfg: &SimConfig, cell_index: u64) -> Result<SimCell> {
    cfg.validate()?;
    if k == 0 {
        return Err(Error::invalid("K must be at least 1"));
    }
    if !(nu_bar.is_finite() && nu_bar > 0.0) {
        return Err(Error::invalid(format!("nu must be positive, got {nu_bar}")));
    }

    let mut fixed_rejections = 0;
    let (shared_weights, random_sd) = match cfg.weight_mode {
        WeightMode::EqualInverseK => (Some(vec![1.0 / k as f64; k]), None),
        WeightMode::EqualUnit => (Some(vec![1.0; k]), None),
        WeightMode::RandomNormal {
            sd,
            fixed_across_replicates: true,
        } => {
            let mut rng = block_rng(cfg.seed, cell_index, FIXED_WEIGHTS_BLOCK);
            let mut w = vec![0.0; k];
            fill_weights(&mut w, sd, &mut rng, &mut fixed_rejections);
            (Some(w), None)
        }
        WeightMode::RandomNormal {
            sd,
            fixed_across_replicates: false,
        } => (None, Some(sd)),
    };

    let plan = CellPlan {
        k,
        nu_bar,
        sampler: ComponentVarianceSampler::new(nu_bar, cfg.sigma_sq),
        shared_weights,
        random_sd,
    };

    let blocks = cfg.replicates.div_ceil(BLOCK_SIZE);
    let summaries = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let n = BLOCK_SIZE.min(cfg.replicates - b * BLOCK_SIZE);
            let mut rng = block_rng(cfg.seed, cell_index, b);
            run_block(&plan, &mut rng, n)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut total = BlockSummary::default();
    for s in &summaries {
        total.merge(s);
    }

    let kf = k as f64;
    let expected = kf * nu_bar;
    Ok(SimCell {
        k,
        nu_bar,
        replicates: cfg.replicates,
        mean_satt: total.satt.mean(),
        sd_satt: total.satt.sd(),
        mean_corr: total.corr.mean(),
        sd_corr: total.corr.sd(),
        mean_kish: total.kish.mean(),
        expected,
        ratio_kish_k: total.kish.mean() / kf,
        ratio_satt: total.satt.mean() / expected,
        ratio_corr: total.corr.mean() / expected,
        weight_rejections: total.rejections + fixed_rejections,
    })
}

/// Runs every cell of the grid, ordered by `(K, ν̄)`.
pub fn run_grid(cfg: &SimConfig) -> Result<Vec<SimCell>> {
    cfg.validate()?;
    cfg.grid()
        .into_par_iter()
        .enumerate()
        .map(|(i, (k, nu))| run_cell(k, nu, cfg, i as u64))
        .collect()
}
