//! Series, labelled datasets and the training-set statistics used to scale parameter grids.

use std::fmt;

use crate::error::{Error, Result};

/// How a univariate measure is lifted to several dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    /// Run the univariate measure on every dimension and combine the results with a p-norm.
    Independent,
    /// Run one alignment over whole D-dimensional points.
    Dependent,
}

impl Strategy {
    pub const ALL: [Strategy; 2] = [Strategy::Independent, Strategy::Dependent];

    pub fn short_name(self) -> &'static str {
        match self {
            Strategy::Independent => "I",
            Strategy::Dependent => "D",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

/// An `L x D` grid of finite observations.
///
/// Values are kept twice: row-major for point-wise (dependent) costs and
/// dimension-major so every dimension is a contiguous slice for the
/// independent kernels.
#[derive(Clone, PartialEq)]
pub struct MultivariateSeries {
    len: usize,
    dims: usize,
    rows: Vec<f64>,
    cols: Vec<f64>,
}

impl MultivariateSeries {
    /// Validates a grid given as rows (time index major).
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let len = rows.len();
        if len == 0 {
            return Err(Error::Empty);
        }
        let dims = rows[0].as_ref().len();
        if dims == 0 {
            return Err(Error::Empty);
        }
        let mut flat = Vec::with_capacity(len * dims);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dims {
                return Err(Error::RaggedDimensions { row: i, expected: dims, found: row.len() });
            }
            flat.extend_from_slice(row);
        }
        Self::from_row_major(len, dims, flat)
    }

    /// Builds a series from one slice per dimension.
    pub fn from_dimensions<R: AsRef<[f64]>>(dimensions: &[R]) -> Result<Self> {
        let dims = dimensions.len();
        if dims == 0 {
            return Err(Error::Empty);
        }
        let len = dimensions[0].as_ref().len();
        if len == 0 {
            return Err(Error::Empty);
        }
        let mut cols = Vec::with_capacity(len * dims);
        for values in dimensions {
            let values = values.as_ref();
            if values.len() != len {
                return Err(Error::LengthMismatch { left: len, right: values.len() });
            }
            cols.extend_from_slice(values);
        }
        let mut rows = vec![0.0; len * dims];
        for d in 0..dims {
            for i in 0..len {
                rows[i * dims + d] = cols[d * len + i];
            }
        }
        Self::checked(len, dims, rows, cols)
    }

    /// A univariate series.
    pub fn univariate(values: &[f64]) -> Result<Self> {
        Self::from_dimensions(&[values])
    }

    /// Builds a series from a flat row-major buffer of `len * dims` values.
    pub fn from_row_major(len: usize, dims: usize, rows: Vec<f64>) -> Result<Self> {
        if len == 0 || dims == 0 || rows.is_empty() {
            return Err(Error::Empty);
        }
        if rows.len() != len * dims {
            return Err(Error::RaggedDimensions { row: rows.len() / dims, expected: dims, found: rows.len() % dims });
        }
        let mut cols = vec![0.0; len * dims];
        for i in 0..len {
            for d in 0..dims {
                cols[d * len + i] = rows[i * dims + d];
            }
        }
        Self::checked(len, dims, rows, cols)
    }

    fn checked(len: usize, dims: usize, rows: Vec<f64>, cols: Vec<f64>) -> Result<Self> {
        if let Some(pos) = rows.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { row: pos / dims, dim: pos % dims, value: rows[pos] });
        }
        Ok(Self { len, dims, rows, cols })
    }

    /// Number of time points `L`.
    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; kept for API symmetry with `len`.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of dimensions `D`.
    #[inline]
    pub fn dims(&self) -> usize {
        self.dims
    }

    /// The D-dimensional point at time index `i` (0-based).
    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.rows[i * self.dims..(i + 1) * self.dims]
    }

    /// All `L` values of dimension `d`.
    #[inline]
    pub fn dimension(&self, d: usize) -> &[f64] {
        &self.cols[d * self.len..(d + 1) * self.len]
    }

    #[inline]
    pub fn get(&self, i: usize, d: usize) -> f64 {
        self.rows[i * self.dims + d]
    }

    /// Row-major values.
    pub fn as_row_major(&self) -> &[f64] {
        &self.rows
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.len == other.len && self.dims == other.dims
    }

    pub(crate) fn check_shape(&self, other: &Self) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                left_len: self.len,
                left_dims: self.dims,
                right_len: other.len,
                right_dims: other.dims,
            })
        }
    }

    /// Applies `f` to every dimension independently, producing a series of the same shape.
    pub(crate) fn map_dimensions<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&[f64]) -> Vec<f64>,
    {
        let columns: Vec<Vec<f64>> = (0..self.dims).map(|d| f(self.dimension(d))).collect();
        Self::from_dimensions(&columns)
    }
}

impl fmt::Debug for MultivariateSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[f64]> = (0..self.len).map(|i| self.point(i)).collect();
        f.debug_struct("MultivariateSeries")
            .field("len", &self.len)
            .field("dims", &self.dims)
            .field("rows", &rows)
            .finish()
    }
}

/// Validates a raw grid, rows indexed by time.
pub fn validate_series<R: AsRef<[f64]>>(raw: &[R]) -> Result<MultivariateSeries> {
    MultivariateSeries::from_rows(raw)
}

/// Equal-shape series with dense integer class ids.
///
/// Labels are kept as ids `0..class_count`; `class_names[id]` is the label
/// string found in the source file.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    series: Vec<MultivariateSeries>,
    labels: Vec<usize>,
    class_names: Vec<String>,
}

impl LabeledDataset {
    /// Builds a dataset from series and string labels, assigning ids in order of first appearance.
    pub fn from_named(series: Vec<MultivariateSeries>, labels: &[impl AsRef<str>]) -> Result<Self> {
        let mut class_names: Vec<String> = Vec::new();
        let ids = labels
            .iter()
            .map(|l| {
                let l = l.as_ref();
                match class_names.iter().position(|c| c == l) {
                    Some(id) => id,
                    None => {
                        class_names.push(l.to_string());
                        class_names.len() - 1
                    }
                }
            })
            .collect();
        Self::new(series, ids, class_names)
    }

    /// Builds a dataset from integer ids and the names of every class.
    pub fn new(series: Vec<MultivariateSeries>, labels: Vec<usize>, class_names: Vec<String>) -> Result<Self> {
        if series.is_empty() {
            return Err(Error::Empty);
        }
        if series.len() != labels.len() {
            return Err(Error::IncompatibleDatasets(format!("{} series but {} labels", series.len(), labels.len())));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= class_names.len()) {
            return Err(Error::IncompatibleDatasets(format!("label id {bad} outside {} classes", class_names.len())));
        }
        let first = &series[0];
        for s in &series[1..] {
            first.check_shape(s)?;
        }
        Ok(Self { series, labels, class_names })
    }

    /// Convenience constructor for integer-labelled data; class names are the ids.
    pub fn from_ids(series: Vec<MultivariateSeries>, labels: Vec<usize>) -> Result<Self> {
        let count = labels.iter().copied().max().map_or(0, |m| m + 1);
        Self::new(series, labels, (0..count).map(|c| c.to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    pub fn series(&self) -> &[MultivariateSeries] {
        &self.series
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    /// Series length `L`.
    pub fn series_len(&self) -> usize {
        self.series[0].len()
    }

    /// Dimension count `D`.
    pub fn dims(&self) -> usize {
        self.series[0].dims()
    }

    /// Re-expresses labels against `names`, appending unseen class names at the end.
    pub fn align_classes(&self, names: &[String]) -> Self {
        let mut class_names = names.to_vec();
        let labels = self
            .labels
            .iter()
            .map(|&l| {
                let name = &self.class_names[l];
                match class_names.iter().position(|c| c == name) {
                    Some(id) => id,
                    None => {
                        class_names.push(name.clone());
                        class_names.len() - 1
                    }
                }
            })
            .collect();
        Self { series: self.series.clone(), labels, class_names }
    }

    /// Applies a series-level transform to every instance.
    pub fn map_series<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(&MultivariateSeries) -> Result<MultivariateSeries>,
    {
        let series = self.series.iter().map(f).collect::<Result<Vec<_>>>()?;
        Self::new(series, self.labels.clone(), self.class_names.clone())
    }

    /// Keeps the instances at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        Self::new(
            indices.iter().map(|&i| self.series[i].clone()).collect(),
            indices.iter().map(|&i| self.labels[i]).collect(),
            self.class_names.clone(),
        )
    }

    /// Number of instances per class id.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.class_count()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }
}

/// Population standard deviations of a training set.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetStats {
    /// Pooled over every scalar of every series.
    pub sigma_global: f64,
    /// One entry per dimension, pooled over all series and time points.
    pub sigma_per_dim: Vec<f64>,
}

/// Population (divide-by-N) standard deviations, globally and per dimension.
pub fn compute_stats(train: &LabeledDataset) -> DatasetStats {
    let dims = train.dims();
    let sigma_per_dim =
        (0..dims).map(|d| population_std(train.series().iter().flat_map(|s| s.dimension(d).iter().copied()))).collect();
    let sigma_global = population_std(train.series().iter().flat_map(|s| s.as_row_major().iter().copied()));
    DatasetStats { sigma_global, sigma_per_dim }
}

pub(crate) fn population_std<I>(values: I) -> f64
where
    I: Iterator<Item = f64> + Clone,
{
    let (n, sum) = values.clone().fold((0usize, 0.0), |(n, s), v| (n + 1, s + v));
    if n == 0 {
        return 0.0;
    }
    let mean = sum / n as f64;
    let ss: f64 = values.map(|v| (v - mean) * (v - mean)).sum();
    (ss / n as f64).sqrt()
}
