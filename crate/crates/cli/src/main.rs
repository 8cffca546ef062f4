use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use log::{info, warn};
use netcomplexity::generators::{Family, ModelSpec, Target};
use netcomplexity::theory::{nhc_global_approx_with, RangeBounds, RangeDivisor, TheoryOptions};
use netcomplexity::workbench::experiments::{Fig2Config, Fig3Config, Fig4Config, Fig5Config};
use netcomplexity::workbench::io::write_edgelist;
use netcomplexity::workbench::{
    analyze_directory, analyze_path, ranking_csv, run_manifest, Experiment, FormatHint, NetworkRecord, RunManifest,
};

/// Worker count for experiment fan-out; defaults to all cores.
const WORKERS_ENV: &str = "NETCX_WORKERS";

#[derive(Parser)]
#[command(name = "netcx", version, about = "Hierarchical complexity of undirected graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Auto,
    Edgelist,
    Mtx,
}

impl From<InputFormat> for FormatHint {
    fn from(f: InputFormat) -> Self {
        match f {
            InputFormat::Auto => FormatHint::Auto,
            InputFormat::Edgelist => FormatHint::EdgeList,
            InputFormat::Mtx => FormatHint::MatrixMarket,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Figure {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

#[derive(Subcommand)]
enum Command {
    /// Complexity summary of an edge list.
    Analyze {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
        #[arg(long, value_enum, default_value = "auto")]
        input_format: InputFormat,
    },
    /// Sample a random graph and write it as an edge list.
    Generate {
        /// JSON model spec. When given, the model flags are ignored.
        spec: Option<PathBuf>,
        #[arg(long, default_value = "er")]
        family: String,
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Edge probability (ER).
        #[arg(long, conflicts_with = "density")]
        p: Option<f64>,
        /// Target density (geometric families).
        #[arg(long)]
        density: Option<f64>,
        #[arg(long, default_value_t = 3)]
        dims: usize,
        #[arg(long, default_value_t = 0.0)]
        mu: f64,
        #[arg(long, default_value_t = 0.2)]
        sigma_h: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Binomial order-statistic approximation for G(n, p), per degree.
    Theory {
        n: usize,
        p: f64,
        /// Use the 1/(n+1), n/(n+1) quantile bounds.
        #[arg(long)]
        general_bounds: bool,
        /// Divide by the number of terms instead of the span.
        #[arg(long)]
        term_count: bool,
    },
    /// Run a figure experiment and write its CSVs.
    Sweep {
        #[arg(value_enum)]
        figure: Figure,
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Reduced realisation counts when no manifest is given.
        #[arg(long)]
        desk: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rank every edge list in a directory by R and by R_hat.
    Rank { dir: PathBuf },
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(e) = configure_workers().and_then(|_| run(Cli::parse())) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn configure_workers() -> Result<()> {
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v.parse().with_context(|| format!("{WORKERS_ENV}={v} is not a count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Analyze { path, format, input_format } => {
            let record = analyze_path(&path, input_format.into())?;
            match format {
                OutputFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&record)?)?,
                OutputFormat::Csv => writeln!(out, "{}\n{}", NetworkRecord::CSV_HEADER, record.csv_row())?,
            }
        }
        Command::Generate { spec, family, n, p, density, dims, mu, sigma_h, seed, out: path } => {
            let spec = match spec {
                Some(file) => {
                    let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
                    serde_json::from_str::<ModelSpec>(&text).with_context(|| format!("parsing {}", file.display()))?
                }
                None => {
                    let family: Family = family.parse()?;
                    let target = match (p, density) {
                        (Some(p), None) => Target::P(p),
                        (None, Some(d)) => Target::Density(d),
                        _ => bail!("give one of --p or --density"),
                    };
                    ModelSpec { target, dims, mu, sigma_h, ..ModelSpec::new(family, n, 0.0, seed) }
                }
            };
            let g = spec.generate()?;
            if g.edge_count() == 0 {
                warn!("generated graph has no edges");
            }
            info!("{} nodes, {} edges", g.node_count(), g.edge_count());
            match path {
                Some(path) => {
                    let file = std::fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                    write_edgelist(&g, None, std::io::BufWriter::new(file))?;
                }
                None => write_edgelist(&g, None, &mut out)?,
            }
        }
        Command::Theory { n, p, general_bounds, term_count } => {
            let options = TheoryOptions {
                bounds: if general_bounds { RangeBounds::GeneralForm } else { RangeBounds::ErForm },
                divisor: if term_count { RangeDivisor::TermCount } else { RangeDivisor::Span },
            };
            let approx = nhc_global_approx_with(n, p, options)?;
            write!(out, "{}", approx.to_csv())?;
            eprintln!("global {} over k = {}..{}", approx.global, approx.a, approx.b);
        }
        Command::Sweep { figure, manifest, out: out_dir, desk, seed } => {
            let manifest = load_manifest(figure, manifest.as_deref(), desk, seed)?;
            let dir = out_dir
                .or_else(|| manifest.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("out").join(manifest.experiment.id()));
            for path in run_manifest(&manifest, &dir)? {
                writeln!(out, "{}", path.display())?;
            }
        }
        Command::Rank { dir } => {
            let records = analyze_directory(&dir, FormatHint::Auto)?;
            if records.is_empty() {
                bail!("no edge lists in {}", dir.display());
            }
            write!(out, "{}", ranking_csv(&records))?;
        }
    }
    Ok(())
}

fn load_manifest(figure: Figure, path: Option<&Path>, desk: bool, seed: u64) -> Result<RunManifest> {
    let expected = match figure {
        Figure::Fig2 => "fig2",
        Figure::Fig3 => "fig3",
        Figure::Fig4 => "fig4",
        Figure::Fig5 => "fig5",
    };
    let manifest = match path {
        Some(path) => RunManifest::load(path).with_context(|| format!("loading {}", path.display()))?,
        None => {
            let experiment = match figure {
                Figure::Fig2 => Experiment::Fig2(Fig2Config::default()),
                Figure::Fig3 => Experiment::Fig3(Fig3Config::default()),
                Figure::Fig4 if desk => Experiment::Fig4(Fig4Config::desk()),
                Figure::Fig4 => Experiment::Fig4(Fig4Config::default()),
                Figure::Fig5 => Experiment::Fig5(Fig5Config::default()),
            };
            RunManifest::new(experiment, seed)
        }
    };
    if manifest.experiment.id() != expected {
        bail!("manifest describes {}, not {expected}", manifest.experiment.id());
    }
    Ok(manifest)
}
