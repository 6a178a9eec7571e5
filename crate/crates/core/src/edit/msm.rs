use super::edit_core;
use crate::dtw::sq_euclid;
use crate::error::{Error, Result};
use crate::series::{MultivariateSeries, Strategy};
use crate::transforms::{check_p, p_norm};

/// Split/merge cost of Move-Split-Merge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MsmParams {
    pub c: f64,
}

impl MsmParams {
    pub fn new(c: f64) -> Result<Self> {
        if c > 0.0 && c.is_finite() {
            Ok(Self { c })
        } else {
            Err(Error::InvalidParameter(format!("MSM cost must be > 0, got {c}")))
        }
    }
}

/// Cost of a split or merge that introduces `new` next to `x`, given neighbour `y`.
///
/// Just `c` when `new` lies between `x` and `y` (inclusive), otherwise `c`
/// plus the distance to the nearer of the two.
#[inline]
pub fn msm_cost_univariate(new: f64, x: f64, y: f64, c: f64) -> f64 {
    // Outside the interval, the nearer endpoint is the interval's distance.
    c + (x.min(y) - new).max(new - x.max(y)).max(0.0)
}

/// Multivariate split/merge cost.
///
/// A point counts as between `x` and `y` when it lies inside the ball whose
/// diameter is the segment `x..y`.
pub fn msm_cost_multivariate(new: &[f64], x: &[f64], y: &[f64], c: f64) -> Result<f64> {
    if new.len() != x.len() || x.len() != y.len() {
        let bad = if new.len() != x.len() { x.len() } else { y.len() };
        return Err(Error::DimensionMismatch(new.len(), bad));
    }
    Ok(msm_cost_points(new, x, y, c))
}

#[inline]
fn msm_cost_points(new: &[f64], x: &[f64], y: &[f64], c: f64) -> f64 {
    let diameter = sq_euclid(x, y).sqrt();
    let to_mid = x
        .iter()
        .zip(y)
        .zip(new)
        .map(|((a, b), n)| {
            let d = (a + b) / 2.0 - n;
            d * d
        })
        .sum::<f64>()
        .sqrt();
    if to_mid <= diameter / 2.0 {
        c
    } else {
        let to_x = sq_euclid(x, new).sqrt();
        let to_y = sq_euclid(y, new).sqrt();
        if to_x < to_y {
            c + to_x
        } else {
            c + to_y
        }
    }
}

#[inline]
fn msm_uni_unchecked(q: &[f64], cs: &[f64], cost: f64) -> f64 {
    let n = q.len();
    edit_core(
        n,
        n,
        |i, j| (q[i] - cs[j]).abs(),
        |i, j| msm_cost_univariate(q[i], q[i - 1], cs[j], cost),
        |i, j| msm_cost_univariate(cs[j], q[i], cs[j - 1], cost),
    )
}

/// Univariate MSM.
pub fn msm_univariate(q: &[f64], c: &[f64], params: MsmParams) -> Result<f64> {
    if q.len() != c.len() {
        return Err(Error::LengthMismatch { left: q.len(), right: c.len() });
    }
    Ok(msm_uni_unchecked(q, c, params.c))
}

/// Multivariate MSM.
///
/// The dependent move cost is the squared Euclidean distance between points,
/// while the univariate move cost is the absolute difference.
pub fn msm(
    q: &MultivariateSeries,
    c: &MultivariateSeries,
    params: MsmParams,
    strategy: Strategy,
    p: f64,
) -> Result<f64> {
    q.check_shape(c)?;
    check_p(p)?;
    let cost = params.c;
    Ok(match strategy {
        Strategy::Independent => {
            p_norm((0..q.dims()).map(|d| msm_uni_unchecked(q.dimension(d), c.dimension(d), cost)), p)
        }
        Strategy::Dependent => edit_core(
            q.len(),
            q.len(),
            |i, j| sq_euclid(q.point(i), c.point(j)),
            |i, j| msm_cost_points(q.point(i), q.point(i - 1), c.point(j), cost),
            |i, j| msm_cost_points(c.point(j), q.point(i), c.point(j - 1), cost),
        ),
    })
}
