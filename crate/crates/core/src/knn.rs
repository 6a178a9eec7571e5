//! One-nearest-neighbour classification and leave-one-out tuning.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::{MeasureConfig, MeasureId};
use crate::params::grid_for;
use crate::series::{DatasetStats, LabeledDataset, MultivariateSeries, Strategy};

/// A measure configuration chosen by leave-one-out cross-validation.
#[derive(Debug, Clone)]
pub struct TunedModel {
    pub config: MeasureConfig,
    pub train_accuracy: f64,
    train: Arc<LabeledDataset>,
    prepared: Arc<Vec<MultivariateSeries>>,
}

impl TunedModel {
    /// Wraps a fixed configuration, computing its LOOCV accuracy.
    pub fn fit(train: Arc<LabeledDataset>, config: MeasureConfig) -> Result<Self> {
        let prepared = prepare_all(&train, &config)?;
        let correct = loocv_correct(&train, &prepared, &config)?;
        Ok(Self { train_accuracy: correct as f64 / train.len() as f64, config, train, prepared: Arc::new(prepared) })
    }

    pub fn train(&self) -> &LabeledDataset {
        &self.train
    }

    pub fn predict(&self, query: &MultivariateSeries) -> Result<usize> {
        let q = self.config.prepare(query)?;
        self.predict_prepared(&q)
    }

    pub(crate) fn predict_prepared(&self, q: &MultivariateSeries) -> Result<usize> {
        let mut best = (f64::INFINITY, 0);
        for (k, s) in self.prepared.iter().enumerate() {
            let d = self.config.distance_prepared(q, s)?;
            if d < best.0 || k == 0 {
                best = (d, k);
            }
        }
        Ok(self.train.labels()[best.1])
    }

    /// Predictions for every query, in order.
    pub fn predict_batch(&self, queries: &[MultivariateSeries]) -> Result<Vec<usize>> {
        queries.par_iter().map(|q| self.predict(q)).collect()
    }

    /// Fraction of `test` classified correctly.
    pub fn accuracy(&self, test: &LabeledDataset) -> Result<f64> {
        let predicted = self.predict_batch(test.series())?;
        Ok(fraction_correct(&predicted, test.labels()))
    }
}

pub(crate) fn fraction_correct(predicted: &[usize], truth: &[usize]) -> f64 {
    let hits = predicted.iter().zip(truth).filter(|(a, b)| a == b).count();
    hits as f64 / truth.len().max(1) as f64
}

fn prepare_all(train: &LabeledDataset, config: &MeasureConfig) -> Result<Vec<MultivariateSeries>> {
    train.series().iter().map(|s| config.prepare(s)).collect()
}

/// Label of the training series closest to `query`; ties go to the lowest index.
pub fn nn_predict(train: &LabeledDataset, query: &MultivariateSeries, config: &MeasureConfig) -> Result<usize> {
    if train.is_empty() {
        return Err(Error::TooFewInstances { min: 1, found: 0 });
    }
    let q = config.prepare(query)?;
    let mut best = (f64::INFINITY, 0);
    for (k, s) in train.series().iter().enumerate() {
        let d = config.distance_prepared(&q, &config.prepare(s)?)?;
        if d < best.0 || k == 0 {
            best = (d, k);
        }
    }
    Ok(train.labels()[best.1])
}

/// Leave-one-out accuracy of 1-NN under `config` on `train`.
pub fn loocv_accuracy(train: &LabeledDataset, config: &MeasureConfig) -> Result<f64> {
    let prepared = prepare_all(train, config)?;
    Ok(loocv_correct(train, &prepared, config)? as f64 / train.len() as f64)
}

/// Number of instances whose nearest other instance shares their label.
fn loocv_correct(train: &LabeledDataset, prepared: &[MultivariateSeries], config: &MeasureConfig) -> Result<usize> {
    Ok(loocv_scan(train, prepared, config, None)?.expect("no bound, no abandon"))
}

/// Leave-one-out scan that gives up, returning `None`, as soon as the count
/// can no longer exceed `beat`.
fn loocv_scan(
    train: &LabeledDataset,
    prepared: &[MultivariateSeries],
    config: &MeasureConfig,
    beat: Option<usize>,
) -> Result<Option<usize>> {
    let n = train.len();
    if n < 2 {
        return Err(Error::TooFewInstances { min: 2, found: n });
    }
    let labels = train.labels();
    let mut matrix = vec![0.0; n * n];
    let mut correct = 0;
    for i in 0..n {
        let row: Vec<f64> = (i + 1..n)
            .into_par_iter()
            .map(|j| config.distance_prepared(&prepared[i], &prepared[j]))
            .collect::<Result<_>>()?;
        for (j, d) in (i + 1..n).zip(row) {
            matrix[i * n + j] = d;
            matrix[j * n + i] = d;
        }
        let mut best = (f64::INFINITY, usize::MAX);
        for j in (0..n).filter(|&j| j != i) {
            let d = matrix[i * n + j];
            if d < best.0 || best.1 == usize::MAX {
                best = (d, j);
            }
        }
        if labels[best.1] == labels[i] {
            correct += 1;
        }
        if let Some(beat) = beat {
            if correct + (n - i - 1) <= beat {
                return Ok(None);
            }
        }
    }
    Ok(Some(correct))
}

/// Tunes one measure over its grid; accuracy ties go to the earliest configuration.
pub fn tune_measure(
    train: Arc<LabeledDataset>,
    measure: MeasureId,
    strategy: Strategy,
    stats: &DatasetStats,
    p: f64,
) -> Result<TunedModel> {
    let n = train.len();
    if n < 2 {
        return Err(Error::TooFewInstances { min: 2, found: n });
    }
    let grid = grid_for(measure, strategy, stats, train.series_len(), train.dims())?.with_norm(p)?;
    // All configurations of one measure share the same input transform.
    let prepared = prepare_all(&train, &grid.configs[0])?;
    // Configurations run in grid order so that the incumbent, and with it
    // every abandoned scan, is the same at any thread count.
    let mut best: Option<(usize, usize)> = None;
    for (k, cfg) in grid.configs.iter().enumerate() {
        if best.is_some_and(|(_, c)| c == n) {
            break;
        }
        if let Some(c) = loocv_scan(&train, &prepared, cfg, best.map(|(_, c)| c))? {
            best = Some((k, c));
        }
    }
    let (best, count) = best.expect("grids are never empty");
    log::debug!("{measure}_{strategy}: {} at LOOCV {}/{n}", grid.configs[best].param_string(), count);
    Ok(TunedModel {
        config: grid.configs[best].clone(),
        train_accuracy: count as f64 / n as f64,
        train,
        prepared: Arc::new(prepared),
    })
}
