//! Multi-trial sweeps and the results table.

use std::io::Write;

use rayon::prelude::*;

use dmnn_core::harness::{format_snr, mean_rate, run_trial, ExperimentConfig, ResultRecord};

use crate::Result;

pub const CSV_HEADER: &str = "method,snr_db,seed,misclass_rate,n_test";

/// Runs every trial (in parallel) and writes the records to `out` in trial
/// order. If a trial fails, the records of the trials before it are written
/// and flushed before the error is returned.
pub fn run_experiment<W: Write>(config: &ExperimentConfig, out: W) -> Result<Vec<ResultRecord>> {
    config.validate()?;
    let trials: Vec<_> = (0..config.num_trials)
        .into_par_iter()
        .map(|trial| run_trial(config, trial))
        .collect();

    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_HEADER.split(','))?;
    let mut records = Vec::new();
    let mut failure = None;
    for trial in trials {
        match trial {
            Ok(rs) => {
                for r in &rs {
                    write_record(&mut writer, r)?;
                }
                records.extend(rs);
            }
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }
    writer.flush().map_err(csv::Error::from)?;
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(records),
    }
}

fn write_record<W: Write>(writer: &mut csv::Writer<W>, r: &ResultRecord) -> Result<()> {
    writer.write_record([
        r.method.name().to_owned(),
        format_snr(r.snr_db),
        r.trial_seed.to_string(),
        r.misclass_rate.to_string(),
        r.n_test.to_string(),
    ])?;
    Ok(())
}

/// Mean misclassification rate per method (rows) and SNR (columns).
pub fn summary_table(config: &ExperimentConfig, records: &[ResultRecord]) -> String {
    let mut out = format!("{:<8}", "snr_db");
    for &snr in &config.snr_grid_db {
        out.push_str(&format!("{:>8}", format_snr(snr)));
    }
    out.push('\n');
    for &method in &config.methods {
        out.push_str(&format!("{:<8}", method.name()));
        for &snr in &config.snr_grid_db {
            match mean_rate(records, method, snr) {
                Some(rate) => out.push_str(&format!("{:>8.3}", rate)),
                None => out.push_str(&format!("{:>8}", "-")),
            }
        }
        out.push('\n');
    }
    out
}
