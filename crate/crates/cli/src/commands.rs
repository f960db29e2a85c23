//! Subcommand bodies. Each returns the text written to stdout.

use std::path::PathBuf;
use std::time::Instant;

use clap::ValueEnum;
use effdof_core::applications::{
    jackknife_df, mi_total_df, mi_total_variance, welch_corrected_df, welch_satterthwaite_df,
    MiVariance, PseudoValueSet, TwoSampleSummary,
};
use effdof_core::montecarlo::{run_grid, SimCell, SimConfig, WeightMode};
use effdof_core::{design_effect, kish_neff, DfEstimate, DfVariant, WeightVector};
use serde::Serialize;

use crate::error::CliError;
use crate::input::{parse_components, parse_values};
use crate::manifest::{RunManifest, SeedSource};
use crate::render::{Cell, Format, Rendering, Table, MAX_PRECISION};

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes") + "\n"
}

#[derive(Debug, Serialize)]
struct EstimateReport {
    components: usize,
    total_variance: f64,
    estimates: Vec<DfEstimate>,
    kish_neff: f64,
    design_effect: f64,
}

/// All three df variants for a components CSV, plus Kish's `n_eff` and the
/// design effect of its weight column.
pub fn cmd_estimate(input: &str, rendering: Rendering) -> Result<String, CliError> {
    let set = parse_components(input)?;
    let estimates = DfVariant::ALL
        .iter()
        .map(|v| v.estimate(&set))
        .collect::<Result<Vec<_>, _>>()?;
    let weights = WeightVector::new(set.components().iter().map(|c| c.weight()).collect())?;
    let report = EstimateReport {
        components: set.len(),
        total_variance: set.total_variance(),
        estimates,
        kish_neff: kish_neff(&weights),
        design_effect: design_effect(&weights),
    };

    if rendering.format == Format::Json {
        return Ok(json(&report));
    }
    let mut table = Table::new(["estimator", "value", "numerator", "denominator"]);
    for e in &report.estimates {
        table.push(vec![
            e.variant.name().into(),
            e.value.into(),
            e.numerator.into(),
            e.denominator.into(),
        ]);
    }
    table.push(vec![
        "kish_neff".into(),
        report.kish_neff.into(),
        Cell::Empty,
        Cell::Empty,
    ]);
    table.push(vec![
        "design_effect".into(),
        report.design_effect.into(),
        Cell::Empty,
        Cell::Empty,
    ]);
    Ok(table.render(rendering))
}

fn quantity_table(rows: &[(&str, Cell)], rendering: Rendering) -> String {
    let mut table = Table::new(["quantity", "value"]);
    for (name, value) in rows {
        table.push(vec![(*name).into(), value.clone()]);
    }
    table.render(rendering)
}

#[derive(Debug, Serialize)]
struct JackknifeReport {
    k: usize,
    mean: f64,
    jackknife_variance: f64,
    jackknife_df: f64,
}

/// Corrected df for a list of jackknife pseudo-values.
pub fn cmd_jackknife(input: &str, rendering: Rendering) -> Result<String, CliError> {
    let values = parse_values(input)?;
    let pv = PseudoValueSet::new(values)?;
    let report = JackknifeReport {
        k: pv.values().len(),
        mean: pv.mean(),
        jackknife_variance: pv.jackknife_variance(),
        jackknife_df: jackknife_df(&pv)?,
    };
    Ok(match rendering.format {
        Format::Json => json(&report),
        _ => quantity_table(
            &[
                ("k", report.k.into()),
                ("mean", report.mean.into()),
                ("jackknife_variance", report.jackknife_variance.into()),
                ("jackknife_df", report.jackknife_df.into()),
            ],
            rendering,
        ),
    })
}

#[derive(Debug, Serialize)]
struct WelchReport {
    n1: u64,
    n2: u64,
    s1_sq: f64,
    s2_sq: f64,
    satterthwaite: f64,
    corrected: f64,
}

/// Uncorrected and corrected Welch df side by side.
pub fn cmd_welch(
    n1: u64,
    n2: u64,
    s1_sq: f64,
    s2_sq: f64,
    rendering: Rendering,
) -> Result<String, CliError> {
    let ts = TwoSampleSummary::new(n1, n2, s1_sq, s2_sq)?;
    let report = WelchReport {
        n1,
        n2,
        s1_sq,
        s2_sq,
        satterthwaite: welch_satterthwaite_df(&ts)?,
        corrected: welch_corrected_df(&ts)?,
    };
    Ok(match rendering.format {
        Format::Json => json(&report),
        _ => {
            let mut table = Table::new(["estimator", "value"]);
            table.push(vec!["satterthwaite".into(), report.satterthwaite.into()]);
            table.push(vec!["corrected".into(), report.corrected.into()]);
            table.render(rendering)
        }
    })
}

#[derive(Debug, Serialize)]
struct MiReport {
    sampling_variance: f64,
    sampling_dof: f64,
    imputation_variance: f64,
    num_imputations: u32,
    /// `(M+1)/M`, equivalently `1 + 1/M`.
    imputation_weight: f64,
    imputation_dof: f64,
    total_variance: f64,
    total_df: f64,
}

/// Total variance and its corrected df under multiple imputation.
pub fn cmd_mi(
    var_sampling: f64,
    nu_sampling: f64,
    var_imputation: f64,
    m: u32,
    rendering: Rendering,
) -> Result<String, CliError> {
    let mi = MiVariance::new(var_sampling, nu_sampling, var_imputation, m)?;
    let report = MiReport {
        sampling_variance: var_sampling,
        sampling_dof: nu_sampling,
        imputation_variance: var_imputation,
        num_imputations: m,
        imputation_weight: mi.imputation_weight(),
        imputation_dof: mi.imputation_dof(),
        total_variance: mi_total_variance(&mi),
        total_df: mi_total_df(&mi)?,
    };
    Ok(match rendering.format {
        Format::Json => json(&report),
        _ => quantity_table(
            &[
                ("total_variance", report.total_variance.into()),
                ("imputation_weight", report.imputation_weight.into()),
                ("imputation_dof", report.imputation_dof.into()),
                ("total_df", report.total_df.into()),
            ],
            rendering,
        ),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// K ∈ {2..64} × ν̄ ∈ {1..32}, equal weights 1/K.
    Tables123,
    /// K ∈ {16,32,64} × ν̄ ∈ {1,5,50,500}, weights Normal(1, sd).
    #[value(name = "tables45-random")]
    Tables45Random,
    /// K ∈ {16,32,64} × ν̄ ∈ {1,5,50,500}, unit weights.
    #[value(name = "tables45-equal")]
    Tables45Equal,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Tables123 => "tables123",
            Preset::Tables45Random => "tables45-random",
            Preset::Tables45Equal => "tables45-equal",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Preset::value_variants()
            .iter()
            .copied()
            .find(|p| p.name() == name)
    }

    pub fn config(self, replicates: u64, seed: u64, sd: f64) -> SimConfig {
        match self {
            Preset::Tables123 => SimConfig::tables_ideal(replicates, seed),
            Preset::Tables45Random => {
                SimConfig::tables_weighted(WeightMode::random(sd), replicates, seed)
            }
            Preset::Tables45Equal => {
                SimConfig::tables_weighted(WeightMode::EqualUnit, replicates, seed)
            }
        }
    }
}

/// Which column set the markdown table uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    /// Mean and SD of each estimator next to `K ν̄`.
    Ideal,
    /// Kish, Satterthwaite and corrected means with their ratios.
    Ratios,
}

fn layout_for(preset: Option<Preset>, mode: &WeightMode) -> Layout {
    match preset {
        Some(Preset::Tables123) => Layout::Ideal,
        Some(_) => Layout::Ratios,
        None => match mode {
            WeightMode::RandomNormal { .. } => Layout::Ratios,
            _ => Layout::Ideal,
        },
    }
}

const CELL_COLUMNS: [&str; 13] = [
    "k",
    "nu_bar",
    "replicates",
    "mean_satt",
    "sd_satt",
    "mean_corr",
    "sd_corr",
    "mean_kish",
    "expected",
    "ratio_kish_k",
    "ratio_satt",
    "ratio_corr",
    "weight_rejections",
];

/// Every [`SimCell`] field, in declaration order.
pub fn cells_table(cells: &[SimCell]) -> Table {
    let mut table = Table::new(CELL_COLUMNS);
    for c in cells {
        table.push(vec![
            c.k.into(),
            c.nu_bar.into(),
            c.replicates.into(),
            c.mean_satt.into(),
            c.sd_satt.into(),
            c.mean_corr.into(),
            c.sd_corr.into(),
            c.mean_kish.into(),
            c.expected.into(),
            c.ratio_kish_k.into(),
            c.ratio_satt.into(),
            c.ratio_corr.into(),
            c.weight_rejections.into(),
        ]);
    }
    table
}

fn layout_table(cells: &[SimCell], layout: Layout) -> Table {
    match layout {
        Layout::Ideal => {
            let mut t = Table::new([
                "K",
                "df",
                "mean unc",
                "SD unc",
                "mean corr",
                "SD corr",
                "K*nu",
            ]);
            for c in cells {
                t.push(vec![
                    c.k.into(),
                    c.nu_bar.into(),
                    c.mean_satt.into(),
                    c.sd_satt.into(),
                    c.mean_corr.into(),
                    c.sd_corr.into(),
                    c.expected.into(),
                ]);
            }
            t
        }
        Layout::Ratios => {
            let mut t = Table::new([
                "K", "nu", "M(Kish)", "M(Satt)", "M(Corr)", "K*nu", "Kish/K", "Satt/Knu",
                "Corr/Knu",
            ]);
            for c in cells {
                t.push(vec![
                    c.k.into(),
                    c.nu_bar.into(),
                    c.mean_kish.into(),
                    c.mean_satt.into(),
                    c.mean_corr.into(),
                    c.expected.into(),
                    c.ratio_kish_k.into(),
                    c.ratio_satt.into(),
                    c.ratio_corr.into(),
                ]);
            }
            t
        }
    }
}

/// Everything `simulate` needs besides the grid itself.
#[derive(Debug, Clone)]
pub struct SimulateRequest {
    pub config: SimConfig,
    pub preset: Option<Preset>,
    pub seed_source: SeedSource,
    pub rendering: Rendering,
    /// Directory for `cells.csv`, `table.md` and `manifest.json`.
    pub out: Option<PathBuf>,
    /// Worker threads; `None` uses rayon's default pool.
    pub threads: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct SimulateOutput {
    pub stdout: String,
    pub cells: Vec<SimCell>,
    pub manifest: RunManifest,
}

#[derive(Serialize)]
struct SimulateJson<'a> {
    preset: Option<&'a str>,
    config: &'a SimConfig,
    cells: &'a [SimCell],
}

pub fn cmd_simulate(req: &SimulateRequest) -> Result<SimulateOutput, CliError> {
    req.config.validate()?;
    let started = Instant::now();
    let cells = match req.threads {
        Some(0) => return Err(CliError::Validation("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Validation(format!("cannot build thread pool: {e}")))?
            .install(|| run_grid(&req.config))?,
        None => run_grid(&req.config)?,
    };

    let mut manifest = RunManifest::new(
        req.preset.map(|p| p.name().to_string()),
        req.config.clone(),
        req.seed_source,
        req.rendering,
    );
    manifest.weight_rejections = cells.iter().map(|c| c.weight_rejections).sum();
    manifest.threads = req.threads.unwrap_or_else(rayon::current_num_threads);
    manifest.duration_secs = started.elapsed().as_secs_f64();

    let layout = layout_for(req.preset, &req.config.weight_mode);
    let stdout = match req.rendering.format {
        Format::Json => json(&SimulateJson {
            preset: req.preset.map(Preset::name),
            config: &req.config,
            cells: &cells,
        }),
        Format::Csv => cells_table(&cells).to_csv(req.rendering.precision),
        Format::Markdown => layout_table(&cells, layout).to_markdown(req.rendering.precision),
    };

    if let Some(dir) = &req.out {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
        let write = |name: &str, contents: String| {
            let path = dir.join(name);
            std::fs::write(&path, contents)
                .map_err(|e| CliError::io(format!("writing {}", path.display()), e))
        };
        write("cells.csv", cells_table(&cells).to_csv(MAX_PRECISION))?;
        write(
            "table.md",
            layout_table(&cells, layout).to_markdown(req.rendering.precision),
        )?;
        write("manifest.json", manifest.to_json())?;
    }

    Ok(SimulateOutput {
        stdout,
        cells,
        manifest,
    })
}
