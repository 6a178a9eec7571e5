//! The multivariate elastic ensemble.
//!
//! Each member is a tuned 1-NN classifier. A member votes for its predicted
//! class with weight equal to its leave-one-out training accuracy, and the
//! class with the largest summed weight wins. Exact ties are broken uniformly
//! at random from a generator seeded once per model.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::knn::{fraction_correct, tune_measure, TunedModel};
use crate::measure::MeasureId;
use crate::series::{DatasetStats, LabeledDataset, MultivariateSeries, Strategy};

/// Which strategies the ensemble draws its members from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeeVariant {
    /// Eleven independent members.
    I,
    /// Eleven dependent members.
    D,
    /// All twenty-two members.
    ID,
    /// Per measure, whichever strategy has the higher training accuracy.
    A,
}

impl MeeVariant {
    pub const ALL: [MeeVariant; 4] = [MeeVariant::I, MeeVariant::D, MeeVariant::ID, MeeVariant::A];

    pub fn member_count(self) -> usize {
        match self {
            MeeVariant::ID => 22,
            _ => 11,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MeeVariant::I => "MEE_I",
            MeeVariant::D => "MEE_D",
            MeeVariant::ID => "MEE_ID",
            MeeVariant::A => "MEE_A",
        }
    }
}

impl fmt::Display for MeeVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeeVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().trim_start_matches("mee_") {
            "i" => Ok(MeeVariant::I),
            "d" => Ok(MeeVariant::D),
            "id" => Ok(MeeVariant::ID),
            "a" => Ok(MeeVariant::A),
            _ => Err(Error::InvalidParameter(format!("unknown ensemble variant {s:?}"))),
        }
    }
}

/// A trained ensemble.
#[derive(Debug, Clone)]
pub struct MeeModel {
    pub variant: MeeVariant,
    pub members: Vec<TunedModel>,
    pub seed: u64,
    class_count: usize,
    rng: ChaCha8Rng,
}

/// Tunes every member of `variant` on `train`.
pub fn build_mee(
    train: Arc<LabeledDataset>,
    variant: MeeVariant,
    stats: &DatasetStats,
    p: f64,
    seed: u64,
) -> Result<MeeModel> {
    let jobs: Vec<(MeasureId, Strategy)> = match variant {
        MeeVariant::I => MeasureId::ALL.iter().map(|&m| (m, Strategy::Independent)).collect(),
        MeeVariant::D => MeasureId::ALL.iter().map(|&m| (m, Strategy::Dependent)).collect(),
        MeeVariant::ID | MeeVariant::A => MeasureId::ALL.iter().flat_map(|&m| Strategy::ALL.map(|s| (m, s))).collect(),
    };
    let tuned: Vec<TunedModel> =
        jobs.par_iter().map(|&(m, s)| tune_measure(train.clone(), m, s, stats, p)).collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let members = if variant == MeeVariant::A {
        let mut kept = Vec::with_capacity(11);
        let mut it = tuned.into_iter();
        while let (Some(indep), Some(dep)) = (it.next(), it.next()) {
            let keep_dep = match dep.train_accuracy.partial_cmp(&indep.train_accuracy) {
                Some(std::cmp::Ordering::Greater) => true,
                Some(std::cmp::Ordering::Less) => false,
                _ => rng.gen_bool(0.5),
            };
            kept.push(if keep_dep { dep } else { indep });
        }
        kept
    } else {
        tuned
    };
    Ok(MeeModel { variant, members, seed, class_count: train.class_count(), rng })
}

impl MeeModel {
    /// Builds an ensemble from already tuned members.
    pub fn from_members(members: Vec<TunedModel>, seed: u64) -> Result<Self> {
        let first =
            members.first().ok_or_else(|| Error::InvalidParameter("an ensemble needs at least one member".into()))?;
        Ok(Self {
            variant: MeeVariant::ID,
            class_count: first.train().class_count(),
            members,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn weights(&self) -> Vec<f64> {
        self.members.iter().map(|m| m.train_accuracy).collect()
    }

    /// Predicts one query, advancing the tie-breaking generator on ties.
    pub fn predict(&mut self, query: &MultivariateSeries) -> Result<usize> {
        let votes: Vec<usize> = self.members.par_iter().map(|m| m.predict(query)).collect::<Result<_>>()?;
        Ok(self.aggregate(&votes))
    }

    /// Predicts every query in order. Member votes run in parallel and ties
    /// are resolved serially, so the result does not depend on the thread count.
    pub fn predict_batch(&mut self, queries: &[MultivariateSeries]) -> Result<Vec<usize>> {
        let votes: Vec<Vec<usize>> =
            self.members.par_iter().map(|m| m.predict_batch(queries)).collect::<Result<_>>()?;
        Ok((0..queries.len())
            .map(|q| {
                let column: Vec<usize> = votes.iter().map(|v| v[q]).collect();
                self.aggregate(&column)
            })
            .collect())
    }

    pub fn accuracy(&mut self, test: &LabeledDataset) -> Result<f64> {
        let predicted = self.predict_batch(test.series())?;
        Ok(fraction_correct(&predicted, test.labels()))
    }

    fn aggregate(&mut self, votes: &[usize]) -> usize {
        let mut totals = vec![0.0; self.class_count];
        let mut voted = vec![false; self.class_count];
        for (m, &label) in self.members.iter().zip(votes) {
            totals[label] += m.train_accuracy;
            voted[label] = true;
        }
        let best = totals.iter().zip(&voted).filter(|(_, &v)| v).map(|(&t, _)| t).fold(f64::NEG_INFINITY, f64::max);
        let tied: Vec<usize> = (0..self.class_count).filter(|&k| voted[k] && totals[k] == best).collect();
        if tied.len() == 1 {
            tied[0]
        } else {
            *tied.choose(&mut self.rng).expect("at least one member votes")
        }
    }

    /// One line per member: measure, strategy, parameters, training accuracy.
    pub fn summary(&self) -> String {
        let mut out = format!("# {} seed={}\n", self.variant, self.seed);
        out.push_str("measure,strategy,params,train_acc\n");
        for m in &self.members {
            out.push_str(&format!(
                "{},{},\"{}\",{:.6}\n",
                m.config.measure,
                m.config.strategy.short_name(),
                m.config.param_string(),
                m.train_accuracy
            ));
        }
        out
    }
}
