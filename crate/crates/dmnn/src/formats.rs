//! On-disk formats.
//!
//! Datasets are CSV (`office,sample,feat_0,...`, offices and samples
//! numbered from 1) with an optional `<name>.meta.toml` sidecar. Filters and
//! trained pipelines are line-oriented text files; floats are written in
//! shortest round-trip form so loading gives back the exact bits.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use dmnn_core::baselines::SvmModel;
use dmnn_core::channel::{Dataset, DatasetMeta};
use dmnn_core::decorrelation::{Quantizer, WhiteningFilter};
use dmnn_core::harness::{Classifier, Filter, Method, Pipeline};
use dmnn_core::mlp::{Activation, Dense, MlpModel};

use crate::{Error, Result};

pub const FILTER_MAGIC: &str = "dmnn-filter v1";
pub const PIPELINE_MAGIC: &str = "dmnn-pipeline v1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetaFile {
    #[serde(rename = "K")]
    num_offices: usize,
    #[serde(rename = "L")]
    num_sensors: usize,
    #[serde(rename = "D")]
    num_paths: usize,
    #[serde(rename = "N")]
    per_office: usize,
    snr_db: f64,
    seed: u64,
}

/// `data.csv` -> `data.meta.toml`.
pub fn meta_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("meta.toml")
}

pub fn write_dataset(path: &Path, data: &Dataset) -> Result<()> {
    let mut out = csv::Writer::from_path(path)?;
    let mut header = vec!["office".to_owned(), "sample".to_owned()];
    header.extend((0..data.dim()).map(|j| format!("feat_{j}")));
    out.write_record(&header)?;

    let mut seen = vec![0usize; data.num_classes()];
    let mut row = Vec::with_capacity(data.dim() + 2);
    for (x, &label) in data.inputs().zip(data.labels()) {
        seen[label] += 1;
        row.clear();
        row.push((label + 1).to_string());
        row.push(seen[label].to_string());
        row.extend(x.iter().map(f64::to_string));
        out.write_record(&row)?;
    }
    out.flush().map_err(|e| Error::io(path, e))?;

    if let Some(m) = data.meta {
        let meta = MetaFile {
            num_offices: m.num_offices,
            num_sensors: m.num_sensors,
            num_paths: m.num_paths,
            per_office: m.per_office,
            snr_db: m.snr_db,
            seed: m.seed,
        };
        let text = toml::to_string(&meta).map_err(|e| Error::format("dataset metadata", e.to_string()))?;
        let meta_path = meta_path(path);
        fs::write(&meta_path, text).map_err(|e| Error::io(meta_path, e))?;
    }
    Ok(())
}

/// Reads a dataset written by [`write_dataset`]. The class count comes from
/// the sidecar when there is one and from the largest office id otherwise.
pub fn read_dataset(path: &Path) -> Result<Dataset> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    if headers.len() < 3 || &headers[0] != "office" || &headers[1] != "sample" {
        return Err(Error::format(
            "dataset",
            "header must start with office,sample and have features",
        ));
    }
    let dim = headers.len() - 2;
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let line = i + 2;
        let office: usize = record[0]
            .parse()
            .map_err(|_| Error::format("dataset", format!("line {line}: bad office id {:?}", &record[0])))?;
        if office == 0 {
            return Err(Error::format("dataset", format!("line {line}: office ids start at 1")));
        }
        labels.push(office - 1);
        for field in record.iter().skip(2) {
            features.push(
                field
                    .parse::<f64>()
                    .map_err(|_| Error::format("dataset", format!("line {line}: bad feature {field:?}")))?,
            );
        }
    }

    let meta_path = meta_path(path);
    let meta = match fs::read_to_string(&meta_path) {
        Ok(text) => Some(toml::from_str::<MetaFile>(&text).map_err(|source| Error::Config {
            path: meta_path.clone(),
            source,
        })?),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => None,
        Err(e) => return Err(Error::io(meta_path, e)),
    };
    let num_classes = match meta {
        Some(m) => m.num_offices,
        None => labels.iter().max().map_or(0, |&l| l + 1),
    };
    let mut data = Dataset::new(features, dim, labels, num_classes)?;
    data.meta = meta.map(|m| DatasetMeta {
        num_offices: m.num_offices,
        num_sensors: m.num_sensors,
        num_paths: m.num_paths,
        per_office: m.per_office,
        snr_db: m.snr_db,
        seed: m.seed,
    });
    Ok(data)
}

fn push_values(out: &mut String, key: &str, values: &[f64]) {
    out.push_str(key);
    for v in values {
        write!(out, " {v}").unwrap();
    }
    out.push('\n');
}

fn write_filter_body(out: &mut String, method: Method, filter: &Filter) {
    writeln!(out, "method {method}").unwrap();
    match filter {
        Filter::Identity => out.push_str("filter identity\n"),
        Filter::Whitening(w) => {
            writeln!(out, "filter whitening {}", w.dim()).unwrap();
            writeln!(out, "eig_floor {}", w.eig_floor).unwrap();
            push_values(out, "mean", &w.mean);
            push_values(out, "eigenvalues", &w.eigenvalues);
            for row in w.transform.chunks_exact(w.dim()) {
                push_values(out, "row", row);
            }
        }
        Filter::Quantizer(q) => {
            writeln!(out, "filter quantizer {}", q.num_levels()).unwrap();
            writeln!(out, "source {} {}", q.source_mean, q.source_var).unwrap();
            writeln!(out, "distortion {}", q.distortion).unwrap();
            push_values(out, "levels", &q.levels);
        }
    }
}

pub fn filter_to_string(method: Method, filter: &Filter) -> String {
    let mut out = format!("{FILTER_MAGIC}\n");
    write_filter_body(&mut out, method, filter);
    out
}

pub fn pipeline_to_string(pipeline: &Pipeline) -> String {
    let mut out = format!("{PIPELINE_MAGIC}\n");
    write_filter_body(&mut out, pipeline.method, &pipeline.filter);
    match &pipeline.classifier {
        Classifier::Mlp(model) => {
            writeln!(out, "classifier mlp {}", model.layers.len()).unwrap();
            for layer in &model.layers {
                writeln!(
                    out,
                    "layer {} {} {}",
                    layer.inputs,
                    layer.outputs,
                    layer.activation.name()
                )
                .unwrap();
                push_values(&mut out, "bias", &layer.bias);
                for row in layer.weights.chunks_exact(layer.inputs) {
                    push_values(&mut out, "row", row);
                }
            }
        }
        Classifier::Svm(svm) => {
            writeln!(out, "classifier svm {} {}", svm.num_classes(), svm.dim).unwrap();
            writeln!(out, "c {}", svm.c).unwrap();
            push_values(&mut out, "bias", &svm.bias);
            for row in svm.weights.chunks_exact(svm.dim.max(1)) {
                push_values(&mut out, "row", row);
            }
        }
    }
    out
}

/// Cursor over the non-empty lines of a text model file.
struct Lines<'a> {
    what: &'static str,
    iter: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> Lines<'a> {
    fn new(what: &'static str, text: &'a str) -> Self {
        Self {
            what,
            iter: text.lines().enumerate().peekable(),
        }
    }

    fn err(&self, line: usize, message: impl std::fmt::Display) -> Error {
        Error::format(self.what, format!("line {}: {message}", line + 1))
    }

    fn next_line(&mut self) -> Result<(usize, &'a str)> {
        for (n, line) in self.iter.by_ref() {
            let line = line.trim();
            if !line.is_empty() {
                return Ok((n, line));
            }
        }
        Err(Error::format(self.what, "unexpected end of file"))
    }

    /// Next line, which must start with `key`; returns the remaining tokens.
    fn expect(&mut self, key: &str) -> Result<(usize, Vec<&'a str>)> {
        let (n, line) = self.next_line()?;
        let mut tokens = line.split_whitespace();
        if tokens.next() != Some(key) {
            return Err(self.err(n, format!("expected `{key}`")));
        }
        Ok((n, tokens.collect()))
    }

    fn parse<T: std::str::FromStr>(&self, n: usize, token: &str) -> Result<T> {
        token
            .parse()
            .map_err(|_| self.err(n, format!("cannot parse {token:?}")))
    }

    fn values(&mut self, key: &str, len: usize) -> Result<Vec<f64>> {
        let (n, tokens) = self.expect(key)?;
        if tokens.len() != len {
            return Err(self.err(n, format!("`{key}` needs {len} values, found {}", tokens.len())));
        }
        tokens.iter().map(|t| self.parse(n, t)).collect()
    }

    fn scalars<const N: usize>(&mut self, key: &str) -> Result<(usize, [&'a str; N])> {
        let (n, tokens) = self.expect(key)?;
        let arr: [&str; N] = tokens
            .try_into()
            .map_err(|_| self.err(n, format!("`{key}` needs {N} fields")))?;
        Ok((n, arr))
    }

    fn magic(&mut self, magic: &str) -> Result<()> {
        let (n, line) = self.next_line()?;
        if line != magic {
            return Err(self.err(n, format!("expected header `{magic}`, found {line:?}")));
        }
        Ok(())
    }

    fn finish(mut self) -> Result<()> {
        match self.next_line() {
            Ok((n, _)) => Err(self.err(n, "trailing content")),
            Err(_) => Ok(()),
        }
    }
}

fn read_filter_body(lines: &mut Lines<'_>) -> Result<(Method, Filter)> {
    let (n, [method]) = lines.scalars::<1>("method")?;
    let method: Method = method.parse().map_err(|e| lines.err(n, e))?;
    let (n, tokens) = lines.expect("filter")?;
    let filter = match tokens.as_slice() {
        ["identity"] => Filter::Identity,
        ["whitening", dim] => {
            let dim: usize = lines.parse(n, dim)?;
            let (n, [floor]) = lines.scalars::<1>("eig_floor")?;
            let eig_floor = lines.parse(n, floor)?;
            let mean = lines.values("mean", dim)?;
            let eigenvalues = lines.values("eigenvalues", dim)?;
            let mut transform = Vec::with_capacity(dim * dim);
            for _ in 0..dim {
                transform.extend(lines.values("row", dim)?);
            }
            Filter::Whitening(WhiteningFilter {
                mean,
                transform,
                eigenvalues,
                eig_floor,
            })
        }
        ["quantizer", levels] => {
            let count: usize = lines.parse(n, levels)?;
            let (n, [mean, var]) = lines.scalars::<2>("source")?;
            let (source_mean, source_var) = (lines.parse(n, mean)?, lines.parse(n, var)?);
            let (n, [d]) = lines.scalars::<1>("distortion")?;
            let distortion = lines.parse(n, d)?;
            let levels = lines.values("levels", count)?;
            if count == 0 || !levels.windows(2).all(|w| w[0] < w[1]) {
                return Err(lines.err(n, "quantizer levels must be non-empty and strictly increasing"));
            }
            Filter::Quantizer(Quantizer {
                levels,
                source_mean,
                source_var,
                distortion,
            })
        }
        _ => return Err(lines.err(n, "unknown filter kind")),
    };
    Ok((method, filter))
}

pub fn filter_from_str(text: &str) -> Result<(Method, Filter)> {
    let mut lines = Lines::new("filter file", text);
    lines.magic(FILTER_MAGIC)?;
    let out = read_filter_body(&mut lines)?;
    lines.finish()?;
    Ok(out)
}

pub fn pipeline_from_str(text: &str) -> Result<Pipeline> {
    let mut lines = Lines::new("pipeline file", text);
    lines.magic(PIPELINE_MAGIC)?;
    let (method, filter) = read_filter_body(&mut lines)?;
    let (n, tokens) = lines.expect("classifier")?;
    let classifier = match tokens.as_slice() {
        ["mlp", count] => {
            let count: usize = lines.parse(n, count)?;
            let mut layers = Vec::with_capacity(count);
            for _ in 0..count {
                let (n, [inputs, outputs, act]) = lines.scalars::<3>("layer")?;
                let inputs: usize = lines.parse(n, inputs)?;
                let outputs: usize = lines.parse(n, outputs)?;
                let activation =
                    Activation::from_name(act).ok_or_else(|| lines.err(n, format!("unknown activation {act:?}")))?;
                let bias = lines.values("bias", outputs)?;
                let mut weights = Vec::with_capacity(inputs * outputs);
                for _ in 0..outputs {
                    weights.extend(lines.values("row", inputs)?);
                }
                layers.push(Dense {
                    inputs,
                    outputs,
                    weights,
                    bias,
                    activation,
                });
            }
            Classifier::Mlp(MlpModel::from_layers(layers)?)
        }
        ["svm", classes, dim] => {
            let classes: usize = lines.parse(n, classes)?;
            let dim: usize = lines.parse(n, dim)?;
            let (n, [c]) = lines.scalars::<1>("c")?;
            let c = lines.parse(n, c)?;
            let bias = lines.values("bias", classes)?;
            let mut weights = Vec::with_capacity(classes * dim);
            for _ in 0..classes {
                weights.extend(lines.values("row", dim)?);
            }
            Classifier::Svm(SvmModel { dim, weights, bias, c })
        }
        _ => return Err(lines.err(n, "unknown classifier kind")),
    };
    lines.finish()?;
    Ok(Pipeline {
        method,
        filter,
        classifier,
    })
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn write_filter(path: &Path, method: Method, filter: &Filter) -> Result<()> {
    write_text(path, &filter_to_string(method, filter))
}

pub fn read_filter(path: &Path) -> Result<(Method, Filter)> {
    filter_from_str(&read_text(path)?)
}

pub fn write_pipeline(path: &Path, pipeline: &Pipeline) -> Result<()> {
    write_text(path, &pipeline_to_string(pipeline))
}

pub fn read_pipeline(path: &Path) -> Result<Pipeline> {
    pipeline_from_str(&read_text(path)?)
}
