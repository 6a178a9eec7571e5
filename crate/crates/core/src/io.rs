//! `.ts` dataset files, seeded resampling and result tables.
//!
//! A `.ts` file holds `@key value` header lines, then an `@data` line, then
//! one series per line. Dimensions are separated by `:`, values within a
//! dimension by `,`, and the final `:` field is the class label:
//!
//! ```text
//! @problemName toy
//! @classLabel true up down
//! @data
//! 1,2,3:4,5,6:up
//! ```
//!
//! Lines starting with `#` are comments. Only equal-length series without
//! missing values are accepted.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::measure::MeasureId;
use crate::series::{LabeledDataset, MultivariateSeries};

/// A parsed `.ts` file.
#[derive(Debug, Clone, PartialEq)]
pub struct TsFile {
    /// Header directives in file order, key without the `@`, value verbatim.
    pub directives: Vec<(String, String)>,
    pub data: LabeledDataset,
}

impl TsFile {
    /// Value of the first directive named `key`, compared case-insensitively.
    pub fn directive(&self, key: &str) -> Option<&str> {
        self.directives.iter().find(|(k, _)| k.eq_ignore_ascii_case(key)).map(|(_, v)| v.as_str())
    }
}

/// Parses the text of a `.ts` file.
///
/// Class ids follow the order of the `@classLabel true ...` directive when it
/// is present, and order of first appearance otherwise.
pub fn parse_ts_file(text: &str) -> Result<TsFile> {
    let mut directives = Vec::new();
    let mut lines = text.lines().enumerate();
    let mut found_data = false;
    for (_, raw) in lines.by_ref() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('@') {
            let (key, value) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            if key.eq_ignore_ascii_case("data") {
                found_data = true;
                break;
            }
            directives.push((key.to_string(), value.trim().to_string()));
        }
    }
    if !found_data {
        return Err(Error::MissingDataSection);
    }

    let mut series = Vec::new();
    let mut labels = Vec::new();
    let mut shape: Option<(usize, usize)> = None;
    for (idx, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let line_no = idx + 1;
        let mut fields: Vec<&str> = line.split(':').collect();
        if fields.len() < 2 {
            return Err(Error::MissingLabel { line: line_no });
        }
        let label = fields.pop().unwrap().trim();
        if label.is_empty() {
            return Err(Error::MissingLabel { line: line_no });
        }
        let dims: Vec<Vec<f64>> = fields
            .iter()
            .enumerate()
            .map(|(d, field)| {
                field
                    .split(',')
                    .enumerate()
                    .map(|(pos, tok)| {
                        let tok = tok.trim();
                        tok.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::UnparsableValue {
                            line: line_no,
                            dim: d,
                            position: pos,
                            token: tok.to_string(),
                        })
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let found = (dims[0].len(), dims.len());
        let expected = *shape.get_or_insert(found);
        if dims.iter().any(|d| d.len() != expected.0) || found != expected {
            let longest = dims.iter().map(Vec::len).find(|&l| l != expected.0).unwrap_or(found.0);
            return Err(Error::RaggedSeries {
                line: line_no,
                expected_len: expected.0,
                expected_dims: expected.1,
                found_len: longest,
                found_dims: found.1,
            });
        }
        series.push(MultivariateSeries::from_dimensions(&dims)?);
        labels.push(label.to_string());
    }
    let mut data = LabeledDataset::from_named(series, &labels)?;
    let declared = directives
        .iter()
        .find(|(k, _)| k.eq_ignore_ascii_case("classLabel"))
        .map(|(_, v)| v.split_whitespace().collect::<Vec<_>>());
    if let Some(words) = declared {
        if words.first().is_some_and(|w| w.eq_ignore_ascii_case("true")) {
            let names: Vec<String> = words[1..].iter().map(|s| s.to_string()).collect();
            data = data.align_classes(&names);
        }
    }
    Ok(TsFile { directives, data })
}

/// Reads and parses a `.ts` file from disk.
pub fn read_ts_file(path: impl AsRef<Path>) -> std::io::Result<TsFile> {
    let text = std::fs::read_to_string(path)?;
    parse_ts_file(&text).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
}

/// Renders a dataset as `.ts` text that [`parse_ts_file`] reads back exactly.
pub fn write_ts_file(problem_name: &str, data: &LabeledDataset) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "@problemName {problem_name}");
    let _ = writeln!(out, "@timeStamps false");
    let _ = writeln!(out, "@missing false");
    let _ = writeln!(out, "@univariate {}", data.dims() == 1);
    let _ = writeln!(out, "@dimensions {}", data.dims());
    let _ = writeln!(out, "@equalLength true");
    let _ = writeln!(out, "@seriesLength {}", data.series_len());
    let _ = writeln!(out, "@classLabel true {}", data.class_names().join(" "));
    out.push_str("@data\n");
    for (s, &label) in data.series().iter().zip(data.labels()) {
        for d in 0..s.dims() {
            let values: Vec<String> = s.dimension(d).iter().map(|v| format!("{v:?}")).collect();
            out.push_str(&values.join(","));
            out.push(':');
        }
        out.push_str(&data.class_names()[label]);
        out.push('\n');
    }
    out
}

/// Which train/test split to evaluate.
///
/// Fold 0 is the split shipped with the data. Any other fold pools both
/// sets, shuffles each class with a generator derived from `(seed, fold)`,
/// and deals the class back out. With `train_fraction` unset every class
/// keeps its original train count, so the split sizes match the originals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResamplePlan {
    pub seed: u64,
    pub fold: u64,
    pub train_fraction: Option<f64>,
}

impl ResamplePlan {
    pub fn new(seed: u64, fold: u64) -> Self {
        Self { seed, fold, train_fraction: None }
    }
}

/// Produces the train/test pair for `plan`.
pub fn resample_split(
    train: &LabeledDataset,
    test: &LabeledDataset,
    plan: ResamplePlan,
) -> Result<(LabeledDataset, LabeledDataset)> {
    let test = test.align_classes(train.class_names());
    if test.class_count() != train.class_count() {
        return Err(Error::IncompatibleDatasets(format!(
            "test set has classes missing from the training set: {:?}",
            &test.class_names()[train.class_count()..]
        )));
    }
    if train.series_len() != test.series_len() || train.dims() != test.dims() {
        return Err(Error::IncompatibleDatasets(format!(
            "train series are {}x{}, test series are {}x{}",
            train.series_len(),
            train.dims(),
            test.series_len(),
            test.dims()
        )));
    }
    if plan.fold == 0 {
        return Ok((train.clone(), test));
    }
    if let Some(f) = plan.train_fraction {
        if !(f > 0.0 && f < 1.0) {
            return Err(Error::InvalidParameter(format!("train fraction must be in (0, 1), got {f}")));
        }
    }

    let pooled_series: Vec<MultivariateSeries> = train.series().iter().chain(test.series()).cloned().collect();
    let pooled_labels: Vec<usize> = train.labels().iter().chain(test.labels()).copied().collect();
    let train_counts = train.class_counts();

    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    rng.set_stream(plan.fold);
    let mut train_idx = Vec::new();
    let mut test_idx = Vec::new();
    for (class, &count) in train_counts.iter().enumerate() {
        let mut members: Vec<usize> = (0..pooled_labels.len()).filter(|&i| pooled_labels[i] == class).collect();
        members.shuffle(&mut rng);
        let keep = match plan.train_fraction {
            None => count,
            Some(f) => ((f * members.len() as f64).round() as usize).clamp(1.min(members.len()), members.len()),
        };
        train_idx.extend_from_slice(&members[..keep]);
        test_idx.extend_from_slice(&members[keep..]);
    }
    train_idx.sort_unstable();
    test_idx.sort_unstable();
    let pooled = LabeledDataset::new(pooled_series, pooled_labels, train.class_names().to_vec())?;
    Ok((pooled.subset(&train_idx)?, pooled.subset(&test_idx)?))
}

/// Header of every results table.
pub const RESULTS_HEADER: [&str; 9] =
    ["dataset", "measure", "strategy", "fold", "params", "train_acc", "test_acc", "elapsed_ms", "seed"];

/// One evaluation of one classifier on one fold.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub dataset: String,
    /// A catalog measure name or an ensemble name such as `MEE_A`.
    pub measure: String,
    /// `I`, `D`, or `-` for ensembles.
    pub strategy: String,
    pub fold: u64,
    pub params: String,
    pub train_acc: f64,
    pub test_acc: f64,
    /// Left empty unless timing was requested, so that reruns stay byte-identical.
    pub elapsed_ms: Option<u64>,
    pub seed: u64,
}

fn measure_order(name: &str) -> (usize, &str) {
    match name.parse::<MeasureId>() {
        Ok(m) => (m.catalog_index(), ""),
        Err(_) => (MeasureId::ALL.len(), name),
    }
}

fn row_order(a: &ResultRow, b: &ResultRow) -> Ordering {
    a.dataset
        .cmp(&b.dataset)
        .then_with(|| measure_order(&a.measure).cmp(&measure_order(&b.measure)))
        .then_with(|| a.strategy.cmp(&b.strategy))
        .then_with(|| a.fold.cmp(&b.fold))
}

/// Renders rows as CSV, sorted by dataset, measure (catalog order), strategy and fold.
pub fn write_results(rows: &[ResultRow]) -> String {
    let mut sorted: Vec<&ResultRow> = rows.iter().collect();
    sorted.sort_by(|a, b| row_order(a, b));
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(RESULTS_HEADER).expect("writing to memory");
    for r in sorted {
        w.write_record([
            r.dataset.clone(),
            r.measure.clone(),
            r.strategy.clone(),
            r.fold.to_string(),
            r.params.clone(),
            format!("{:.6}", r.train_acc),
            format!("{:.6}", r.test_acc),
            r.elapsed_ms.map(|t| t.to_string()).unwrap_or_default(),
            r.seed.to_string(),
        ])
        .expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing memory buffer")).expect("CSV output is UTF-8")
}

/// Reads a results table back; `#` comment lines are skipped.
pub fn parse_results(text: &str) -> Result<Vec<ResultRow>> {
    let bad = |what: &str| Error::InvalidParameter(format!("malformed results table: {what}"));
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| bad(&e.to_string()))?;
    if header.iter().ne(RESULTS_HEADER) {
        return Err(bad("unexpected header"));
    }
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| bad(&e.to_string()))?;
        let num = |i: usize| rec[i].parse::<f64>().map_err(|_| bad(&rec[i]));
        let int = |i: usize| rec[i].parse::<u64>().map_err(|_| bad(&rec[i]));
        rows.push(ResultRow {
            dataset: rec[0].to_string(),
            measure: rec[1].to_string(),
            strategy: rec[2].to_string(),
            fold: int(3)?,
            params: rec[4].to_string(),
            train_acc: num(5)?,
            test_acc: num(6)?,
            elapsed_ms: if rec[7].is_empty() { None } else { Some(int(7)?) },
            seed: int(8)?,
        });
    }
    Ok(rows)
}
