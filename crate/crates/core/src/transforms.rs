//! Series-level preprocessing and the p-norm combinator behind every independent measure.

use crate::error::{Error, Result};
use crate::series::{population_std, LabeledDataset, MultivariateSeries};

/// Whether series are z-normalized before any distance is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormPolicy {
    #[default]
    None,
    /// Each dimension of each series independently to mean 0, std-dev 1.
    ZNormPerSeriesPerDimension,
}

impl NormPolicy {
    pub fn apply(self, s: &MultivariateSeries) -> Result<MultivariateSeries> {
        match self {
            NormPolicy::None => Ok(s.clone()),
            NormPolicy::ZNormPerSeriesPerDimension => z_normalize(s),
        }
    }

    pub fn apply_dataset(self, data: &LabeledDataset) -> Result<LabeledDataset> {
        match self {
            NormPolicy::None => Ok(data.clone()),
            NormPolicy::ZNormPerSeriesPerDimension => data.map_series(z_normalize),
        }
    }
}

/// First-derivative estimate of one dimension.
///
/// Interior points use the average of the left difference and half the
/// central difference. The first and last points have no estimate of their
/// own and copy their neighbour's, so the output keeps length `L`.
pub fn derivative_univariate(values: &[f64]) -> Result<Vec<f64>> {
    let n = values.len();
    if n < 3 {
        return Err(Error::TooShort { len: n, min: 3 });
    }
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        out[i] = ((values[i] - values[i - 1]) + (values[i + 1] - values[i - 1]) / 2.0) / 2.0;
    }
    out[0] = out[1];
    out[n - 1] = out[n - 2];
    Ok(out)
}

/// Applies [`derivative_univariate`] to every dimension.
pub fn derivative_transform(s: &MultivariateSeries) -> Result<MultivariateSeries> {
    if s.len() < 3 {
        return Err(Error::TooShort { len: s.len(), min: 3 });
    }
    s.map_dimensions(|dim| derivative_univariate(dim).expect("length checked above"))
}

/// Z-normalizes each dimension; a constant dimension becomes all zeros.
pub fn z_normalize(s: &MultivariateSeries) -> Result<MultivariateSeries> {
    s.map_dimensions(|dim| {
        let mean = dim.iter().sum::<f64>() / dim.len() as f64;
        let std = population_std(dim.iter().copied());
        if std == 0.0 || dim.iter().all(|&v| v == dim[0]) {
            vec![0.0; dim.len()]
        } else {
            dim.iter().map(|v| (v - mean) / std).collect()
        }
    })
}

/// `(sum_d |v_d|^p)^(1/p)` over per-dimension measure values.
pub fn combine_independent(per_dim_values: &[f64], p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidP(p));
    }
    Ok(p_norm(per_dim_values.iter().copied(), p))
}

#[inline]
pub(crate) fn p_norm<I: Iterator<Item = f64>>(values: I, p: f64) -> f64 {
    if p == 1.0 {
        values.map(f64::abs).sum()
    } else if p == 2.0 {
        values.map(|v| v * v).sum::<f64>().sqrt()
    } else {
        values.map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

pub(crate) fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidP(p))
    }
}
