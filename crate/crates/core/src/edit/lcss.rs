use crate::dtw::{sq_euclid, Window};
use crate::error::{Error, Result};
use crate::series::{MultivariateSeries, Strategy};
use crate::transforms::{check_p, p_norm};

/// LCSS match thresholds and band.
///
/// The independent strategy needs one threshold per dimension; the
/// dependent strategy compares the squared Euclidean distance between
/// points against a single threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct LcssParams {
    pub epsilon: Vec<f64>,
    pub window: Window,
}

impl LcssParams {
    pub fn new(epsilon: Vec<f64>, window: Window) -> Result<Self> {
        if epsilon.is_empty() || epsilon.iter().any(|e| !e.is_finite() || *e < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "LCSS thresholds must be finite and non-negative, got {epsilon:?}"
            )));
        }
        Ok(Self { epsilon, window })
    }
}

/// Longest common subsequence length under a band.
///
/// Out-of-band cells never match but still carry the best count of their
/// in-band neighbourhood, which is what the clamped reads reproduce.
#[inline]
pub(crate) fn lcss_core<M>(n: usize, band: usize, matches: M) -> usize
where
    M: Fn(usize, usize) -> bool,
{
    let mut prev = vec![0usize; n + 1];
    let mut cur = vec![0usize; n + 1];
    for i in 1..=n {
        let lo = if i > band { i - band } else { 1 };
        let hi = (i + band).min(n);
        cur[lo - 1] = prev[lo - 1];
        for j in lo..=hi {
            cur[j] = if matches(i - 1, j - 1) { prev[j - 1] + 1 } else { prev[j].max(cur[j - 1]) };
        }
        if hi < n {
            cur[hi + 1] = cur[hi];
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[n]
}

fn check_lengths(q: &[f64], c: &[f64]) -> Result<()> {
    if q.len() == c.len() {
        Ok(())
    } else {
        Err(Error::LengthMismatch { left: q.len(), right: c.len() })
    }
}

/// Number of matched points between two univariate series.
pub fn lcss_count_univariate(q: &[f64], c: &[f64], epsilon: f64, window: Window) -> Result<usize> {
    check_lengths(q, c)?;
    let n = q.len();
    Ok(lcss_core(n, window.band(n), |i, j| (q[i] - c[j]).abs() <= epsilon))
}

/// Univariate LCSS distance `1 - count / L`.
pub fn lcss_univariate(q: &[f64], c: &[f64], epsilon: f64, window: Window) -> Result<f64> {
    let count = lcss_count_univariate(q, c, epsilon, window)?;
    Ok(1.0 - count as f64 / q.len() as f64)
}

/// Number of matched points when whole points are compared: `|q_i - c_j|^2 <= epsilon`.
pub fn lcss_count_dependent(
    q: &MultivariateSeries,
    c: &MultivariateSeries,
    epsilon: f64,
    window: Window,
) -> Result<usize> {
    q.check_shape(c)?;
    let n = q.len();
    Ok(lcss_core(n, window.band(n), |i, j| sq_euclid(q.point(i), c.point(j)) <= epsilon))
}

/// Multivariate LCSS distance.
///
/// Independent: `params.epsilon` holds one threshold per dimension.
/// Dependent: `params.epsilon` holds exactly one threshold.
pub fn lcss(
    q: &MultivariateSeries,
    c: &MultivariateSeries,
    params: &LcssParams,
    strategy: Strategy,
    p: f64,
) -> Result<f64> {
    q.check_shape(c)?;
    check_p(p)?;
    let n = q.len();
    let band = params.window.band(n);
    match strategy {
        Strategy::Independent => {
            if params.epsilon.len() != q.dims() {
                return Err(Error::InvalidParameter(format!(
                    "independent LCSS needs {} thresholds, got {}",
                    q.dims(),
                    params.epsilon.len()
                )));
            }
            Ok(p_norm(
                (0..q.dims()).map(|d| {
                    let (qd, cd, eps) = (q.dimension(d), c.dimension(d), params.epsilon[d]);
                    let count = lcss_core(n, band, |i, j| (qd[i] - cd[j]).abs() <= eps);
                    1.0 - count as f64 / n as f64
                }),
                p,
            ))
        }
        Strategy::Dependent => {
            let [eps] = params.epsilon[..] else {
                return Err(Error::InvalidParameter(format!(
                    "dependent LCSS needs one threshold, got {}",
                    params.epsilon.len()
                )));
            };
            let count = lcss_core(n, band, |i, j| sq_euclid(q.point(i), c.point(j)) <= eps);
            Ok(1.0 - count as f64 / n as f64)
        }
    }
}
