//! The evaluation protocol: resample, normalize, tune on train, score on test.

use std::sync::Arc;
use std::time::Instant;

use crate::error::Result;
use crate::io::{resample_split, ResamplePlan, ResultRow};
use crate::knn::{tune_measure, TunedModel};
use crate::measure::{MeasureConfig, MeasureId};
use crate::mee::{build_mee, MeeVariant};
use crate::series::{compute_stats, LabeledDataset, Strategy};
use crate::transforms::NormPolicy;

/// What to train on each fold.
#[derive(Debug, Clone, PartialEq)]
pub enum Classifier {
    /// 1-NN with the measure's parameters chosen by leave-one-out CV.
    Tuned {
        measure: MeasureId,
        strategy: Strategy,
    },
    /// 1-NN with fixed parameters.
    Fixed(MeasureConfig),
    Ensemble(MeeVariant),
}

/// Settings shared by every fold of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub dataset: String,
    pub norm: NormPolicy,
    pub seed: u64,
    /// Order of the independent combinator.
    pub p: f64,
    /// Record wall-clock time per fold in the results.
    pub timing: bool,
}

/// Result of one fold.
#[derive(Debug, Clone)]
pub struct FoldOutcome {
    pub row: ResultRow,
    /// Per-member description for ensembles.
    pub summary: Option<String>,
}

/// Runs `classifier` on resample `fold` of `(train, test)`.
pub fn run_fold(
    train: &LabeledDataset,
    test: &LabeledDataset,
    classifier: &Classifier,
    exp: &Experiment,
    fold: u64,
) -> Result<FoldOutcome> {
    let start = Instant::now();
    let (train, test) = resample_split(train, test, ResamplePlan::new(exp.seed, fold))?;
    let train = Arc::new(exp.norm.apply_dataset(&train)?);
    let test = exp.norm.apply_dataset(&test)?;
    let stats = compute_stats(&train);

    let (measure, strategy, params, train_acc, test_acc, summary) = match classifier {
        Classifier::Tuned { measure, strategy } => {
            let model = tune_measure(train, *measure, *strategy, &stats, exp.p)?;
            single(&model, &test)?
        }
        Classifier::Fixed(config) => {
            let mut config = config.clone();
            config.p = exp.p;
            single(&TunedModel::fit(train, config)?, &test)?
        }
        Classifier::Ensemble(variant) => {
            let mut model = build_mee(train, *variant, &stats, exp.p, exp.seed ^ fold)?;
            let test_acc = model.accuracy(&test)?;
            let mean_train = model.weights().iter().sum::<f64>() / model.members.len() as f64;
            (
                variant.name().to_string(),
                "-".to_string(),
                format!("members={}", model.members.len()),
                mean_train,
                test_acc,
                Some(format!("# fold {fold}\n{}", model.summary())),
            )
        }
    };
    let elapsed = start.elapsed().as_millis() as u64;
    log::info!("{} {measure}_{strategy} fold {fold}: test {test_acc:.4} ({elapsed} ms)", exp.dataset);
    Ok(FoldOutcome {
        row: ResultRow {
            dataset: exp.dataset.clone(),
            measure,
            strategy,
            fold,
            params,
            train_acc,
            test_acc,
            elapsed_ms: exp.timing.then_some(elapsed),
            seed: exp.seed,
        },
        summary,
    })
}

type Scored = (String, String, String, f64, f64, Option<String>);

fn single(model: &TunedModel, test: &LabeledDataset) -> Result<Scored> {
    let c = &model.config;
    Ok((
        c.measure.name().to_string(),
        c.strategy.short_name().to_string(),
        c.param_string(),
        model.train_accuracy,
        model.accuracy(test)?,
        None,
    ))
}
