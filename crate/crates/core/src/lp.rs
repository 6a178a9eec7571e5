//! Lock-step Minkowski distances.

use crate::error::Result;
use crate::series::{MultivariateSeries, Strategy};
use crate::transforms::{check_p, p_norm};

/// Minkowski distance of order `order` between two univariate series of equal length.
pub fn lp_univariate(q: &[f64], c: &[f64], order: f64) -> f64 {
    p_norm(q.iter().zip(c).map(|(a, b)| a - b), order)
}

/// Multivariate Minkowski distance where the same order is used inside and across dimensions.
///
/// Independent: the order-`order` norm of the per-dimension distances.
/// Dependent: the order-`order` norm of the per-time-point distances.
/// Both reduce to the same double sum.
pub fn lp(q: &MultivariateSeries, c: &MultivariateSeries, order: f64, strategy: Strategy) -> Result<f64> {
    q.check_shape(c)?;
    check_p(order)?;
    Ok(match strategy {
        Strategy::Independent => {
            p_norm((0..q.dims()).map(|d| lp_univariate(q.dimension(d), c.dimension(d), order)), order)
        }
        Strategy::Dependent => p_norm((0..q.len()).map(|i| lp_univariate(q.point(i), c.point(i), order)), order),
    })
}

/// Euclidean distance as used by the classifier catalog.
///
/// Independent: per-dimension Euclidean distances combined with the norm of
/// order `p` (a plain sum at the default `p = 1`). Dependent: Euclidean
/// distance over all points.
pub fn euclidean(q: &MultivariateSeries, c: &MultivariateSeries, strategy: Strategy, p: f64) -> Result<f64> {
    q.check_shape(c)?;
    check_p(p)?;
    Ok(match strategy {
        Strategy::Independent => p_norm((0..q.dims()).map(|d| lp_univariate(q.dimension(d), c.dimension(d), 2.0)), p),
        Strategy::Dependent => lp_univariate(q.as_row_major(), c.as_row_major(), 2.0),
    })
}
