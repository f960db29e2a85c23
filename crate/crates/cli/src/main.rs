use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use effdof::commands::{Preset, SimulateRequest};
use effdof::manifest::{RunManifest, SeedSource};
use effdof::render::DEFAULT_PRECISION;
use effdof::{cmd_estimate, cmd_jackknife, cmd_mi, cmd_simulate, cmd_welch, CliError};
use effdof::{Format, Rendering};
use effdof_core::montecarlo::{SimConfig, WeightMode};

/// Effective degrees of freedom for weighted sums of variance components.
#[derive(Debug, Parser)]
#[command(name = "effdof", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Markdown)]
    format: Format,

    /// Decimals for numeric cells (0 to 12).
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: usize,
}

impl Output {
    fn rendering(&self) -> Result<Rendering, CliError> {
        Rendering::new(self.format, self.precision)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Weights {
    /// Every weight 1 (or 1/K under the tables123 preset).
    Equal,
    /// Normal(1, sd), redrawn while nonpositive.
    Random,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Satterthwaite, Boardman and corrected df for a `weight,variance,dof` CSV.
    Estimate {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Chi-square Monte Carlo over a K × ν̄ grid.
    Simulate(SimulateArgs),
    /// Corrected df from jackknife pseudo-values, one per line.
    Jackknife {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Welch two-sample df, uncorrected and corrected.
    Welch {
        #[arg(long)]
        n1: u64,
        #[arg(long)]
        n2: u64,
        #[arg(long = "s1sq")]
        s1_sq: f64,
        #[arg(long = "s2sq")]
        s2_sq: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Multiple-imputation total variance and df. The imputation weight
    /// (M+1)/M is the same as Rubin's 1 + 1/M.
    Mi {
        #[arg(long)]
        var_sampling: f64,
        #[arg(long)]
        nu_sampling: f64,
        #[arg(long)]
        var_imputation: f64,
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Predefined grid; --k and --nu override its lists.
    #[arg(long, value_enum)]
    preset: Option<Preset>,

    /// Component counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    k: Vec<usize>,

    /// Component dof values, comma separated.
    #[arg(long, value_delimiter = ',')]
    nu: Vec<f64>,

    #[arg(long, value_enum)]
    weights: Option<Weights>,

    /// SD of random weights.
    #[arg(long, default_value_t = 0.3)]
    sd: f64,

    /// Draw random weights once per cell instead of once per replicate.
    #[arg(long)]
    fixed_weights: bool,

    /// True component variance.
    #[arg(long = "sigma2", default_value_t = 1.0)]
    sigma_sq: f64,

    #[arg(long, default_value_t = SimConfig::DEFAULT_REPLICATES)]
    replicates: u64,

    /// Run seed; drawn from system entropy when absent.
    #[arg(long)]
    seed: Option<u64>,

    /// Directory for cells.csv, table.md and manifest.json.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads (results do not depend on this).
    #[arg(long)]
    threads: Option<usize>,

    /// Repeat the run recorded in a manifest.json.
    #[arg(long, conflicts_with_all = ["preset", "k", "nu", "weights", "seed", "replicates"])]
    from_manifest: Option<PathBuf>,

    #[command(flatten)]
    output: Output,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("reading {}", path.display()), e))
}

fn simulate_request(args: SimulateArgs) -> Result<SimulateRequest, CliError> {
    if let Some(path) = &args.from_manifest {
        let manifest = RunManifest::read(path)?;
        let preset = match &manifest.preset {
            Some(name) => Some(Preset::from_name(name).ok_or_else(|| {
                CliError::Validation(format!("unknown preset `{name}` in manifest"))
            })?),
            None => None,
        };
        return Ok(SimulateRequest {
            config: manifest.config,
            preset,
            seed_source: SeedSource::Manifest,
            rendering: manifest.rendering,
            out: args.out,
            threads: args.threads,
        });
    }

    let (seed, seed_source) = match args.seed {
        Some(s) => (s, SeedSource::Flag),
        None => (rand::random(), SeedSource::Entropy),
    };

    let random_mode = WeightMode::RandomNormal {
        sd: args.sd,
        fixed_across_replicates: args.fixed_weights,
    };
    let mut config = match args.preset {
        Some(p) => p.config(args.replicates, seed, args.sd),
        None => {
            if args.k.is_empty() || args.nu.is_empty() {
                return Err(CliError::Validation(
                    "either --preset or both --k and --nu are required".into(),
                ));
            }
            SimConfig {
                k_values: Vec::new(),
                nu_values: Vec::new(),
                weight_mode: WeightMode::EqualUnit,
                sigma_sq: 1.0,
                replicates: args.replicates,
                seed,
            }
        }
    };
    if !args.k.is_empty() {
        config.k_values = args.k;
    }
    if !args.nu.is_empty() {
        config.nu_values = args.nu;
    }
    config.sigma_sq = args.sigma_sq;
    match args.weights {
        Some(Weights::Random) => config.weight_mode = random_mode,
        Some(Weights::Equal) if args.preset != Some(Preset::Tables123) => {
            config.weight_mode = WeightMode::EqualUnit
        }
        _ => {}
    }
    if args.fixed_weights {
        if let WeightMode::RandomNormal { sd, .. } = config.weight_mode {
            config.weight_mode = WeightMode::RandomNormal {
                sd,
                fixed_across_replicates: true,
            };
        }
    }

    Ok(SimulateRequest {
        config,
        preset: args.preset,
        seed_source,
        rendering: args.output.rendering()?,
        out: args.out,
        threads: args.threads,
    })
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Estimate { input, output } => cmd_estimate(&read(&input)?, output.rendering()?),
        Command::Jackknife { input, output } => cmd_jackknife(&read(&input)?, output.rendering()?),
        Command::Welch {
            n1,
            n2,
            s1_sq,
            s2_sq,
            output,
        } => cmd_welch(n1, n2, s1_sq, s2_sq, output.rendering()?),
        Command::Mi {
            var_sampling,
            nu_sampling,
            var_imputation,
            m,
            output,
        } => cmd_mi(
            var_sampling,
            nu_sampling,
            var_imputation,
            m,
            output.rendering()?,
        ),
        Command::Simulate(args) => {
            let request = simulate_request(args)?;
            let result = cmd_simulate(&request)?;
            if request.out.is_none() {
                eprint!("{}", result.manifest.to_json());
            }
            Ok(result.stdout)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(4)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
