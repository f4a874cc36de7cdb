//! Command-line interface.

use std::ffi::OsString;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use dmnn_core::harness::{
    self, fit_filter, format_snr, train_with_filter, trial_channel, trial_method_config, trial_seed, ExperimentConfig,
    Method,
};

use crate::config::ConfigFile;
use crate::experiment::{run_experiment, summary_table};
use crate::formats;
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "dmnn", version, about = "CIR fingerprint localization benchmark")]
pub struct Cli {
    /// TOML experiment config; built-in defaults when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed, overriding the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Split {
    Train,
    Test,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FilterKind {
    Whitening,
    Quantizer,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a dataset and write it as CSV.
    Generate {
        #[arg(long, value_enum, default_value = "train")]
        split: Split,
        /// Test SNR in dB (`inf` for no noise); test split only. Defaults to
        /// the first point of the SNR grid.
        #[arg(long, allow_hyphen_values = true)]
        snr_db: Option<f64>,
        #[arg(long, default_value_t = 0)]
        trial: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit a whitening filter or quantizer on a training set.
    FitFilter {
        #[arg(long, value_enum)]
        kind: FilterKind,
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train one method and write the pipeline (filter + classifier).
    Train {
        #[arg(long)]
        method: Method,
        #[arg(long)]
        train: PathBuf,
        /// Previously fitted filter; fitted from the training set when omitted.
        #[arg(long)]
        filter: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        trial: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a trained pipeline on a test set.
    Evaluate {
        #[arg(long)]
        pipeline: PathBuf,
        #[arg(long)]
        test: PathBuf,
        /// Also write the result as a one-record CSV in the sweep schema.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full experiment and write the results CSV.
    Sweep {
        /// Results CSV; defaults to the config's `output`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (config, output) = match load_config(cli.config.as_deref(), cli.seed) {
        Ok(loaded) => loaded,
        Err(e) => {
            eprintln!("dmnn: {e}");
            return EXIT_USAGE;
        }
    };
    let command = match cli.command {
        Command::Sweep { out: None } if output.is_none() => {
            eprintln!("dmnn: sweep needs --out or an `output` key in the config");
            return EXIT_USAGE;
        }
        Command::Sweep { out: None } => Command::Sweep { out: output },
        command => command,
    };
    match execute(&config, command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("dmnn: {e}");
            EXIT_RUNTIME
        }
    }
}

/// Loads the experiment config and its `output` path.
pub fn load_config(path: Option<&Path>, seed: Option<u64>) -> Result<(ExperimentConfig, Option<PathBuf>)> {
    let file = match path {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let mut config = file.to_experiment()?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    Ok((config, file.output.map(PathBuf::from)))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn execute(config: &ExperimentConfig, command: Command) -> Result<()> {
    match command {
        Command::Generate {
            split,
            snr_db,
            trial,
            out,
        } => {
            let seed = trial_seed(config.seed, trial);
            let channel = trial_channel(config, seed)?;
            let data = match split {
                Split::Train => harness::trial_train_set(config, &channel, seed)?,
                Split::Test => {
                    let mut config = config.clone();
                    let grid_index = match snr_db {
                        None => 0,
                        Some(snr) => match config.snr_grid_db.iter().position(|&s| s == snr) {
                            Some(i) => i,
                            None => {
                                config.snr_grid_db.push(snr);
                                config.snr_grid_db.len() - 1
                            }
                        },
                    };
                    harness::trial_test_set(&config, &channel, seed, grid_index)?
                }
            };
            formats::write_dataset(&out, &data)?;
            println!(
                "wrote {} samples of dimension {} to {}",
                data.len(),
                data.dim(),
                out.display()
            );
        }
        Command::FitFilter { kind, train, out } => {
            let data = formats::read_dataset(&train)?;
            let method = match kind {
                FilterKind::Whitening => Method::Wmnn,
                FilterKind::Quantizer => Method::Qmnn,
            };
            let filter = fit_filter(method, &data, &config.method_config)?;
            formats::write_filter(&out, method, &filter)?;
            println!("wrote {} filter to {}", method, out.display());
        }
        Command::Train {
            method,
            train,
            filter,
            trial,
            out,
        } => {
            let data = formats::read_dataset(&train)?;
            let method_config = trial_method_config(config, trial_seed(config.seed, trial));
            let filter = match filter {
                Some(path) => {
                    let (filter_method, filter) = formats::read_filter(&path)?;
                    if filter_method != method {
                        return Err(Error::format(
                            "filter file",
                            format!("fitted for {filter_method}, not {method}"),
                        ));
                    }
                    filter
                }
                None => fit_filter(method, &data, &method_config)?,
            };
            let pipeline = train_with_filter(method, filter, &data, &method_config)?;
            formats::write_pipeline(&out, &pipeline)?;
            println!("wrote {} pipeline to {}", method, out.display());
        }
        Command::Evaluate { pipeline, test, out } => {
            let pipeline = formats::read_pipeline(&pipeline)?;
            let data = formats::read_dataset(&test)?;
            let errors = pipeline.count_errors(&data)?;
            if data.is_empty() {
                return Err(Error::format("dataset", "test set is empty"));
            }
            let rate = errors as f64 / data.len() as f64;
            let snr = data.meta.map_or(f64::NAN, |m| m.snr_db);
            println!(
                "{}: {errors}/{} misclassified (rate {rate}) at {} dB",
                pipeline.method,
                data.len(),
                format_snr(snr)
            );
            if let Some(out) = out {
                let seed = data.meta.map_or(String::new(), |m| m.seed.to_string());
                let mut writer = csv::Writer::from_writer(create(&out)?);
                writer.write_record(crate::experiment::CSV_HEADER.split(','))?;
                writer.write_record([
                    pipeline.method.name().to_owned(),
                    format_snr(snr),
                    seed,
                    rate.to_string(),
                    data.len().to_string(),
                ])?;
                writer.flush().map_err(|e| Error::io(&out, e))?;
            }
        }
        Command::Sweep { out } => {
            let out = out.expect("sweep output resolved before execution");
            let records = run_experiment(config, create(&out)?)?;
            print!("{}", summary_table(config, &records));
            println!("wrote {} records to {}", records.len(), out.display());
        }
    }
    Ok(())
}
