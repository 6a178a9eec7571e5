//! Dynamic time warping and its derivative and weighted variants.
//!
//! Every kernel fills an `(L+1) x (L+1)` cumulative cost grid with
//! `grid[0][0] = 0` and `+inf` on the remaining borders. Only two rows are
//! kept alive. Ground costs are squared differences for univariate inputs and
//! squared Euclidean distances between whole points for the dependent
//! strategy; no square root is taken at the end.

use std::fmt;

use crate::error::{Error, Result};
use crate::series::{MultivariateSeries, Strategy};
use crate::transforms::{check_p, derivative_transform, p_norm};

/// Sakoe-Chiba band: cell `(i, j)` is reachable iff `|i - j| <= band`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Window {
    Band(usize),
    Full,
}

impl Window {
    /// Half-width to use for series of length `len`.
    #[inline]
    pub fn band(self, len: usize) -> usize {
        match self {
            Window::Full => len,
            Window::Band(b) => b.min(len),
        }
    }

    #[inline]
    pub fn allows(self, i: usize, j: usize) -> bool {
        match self {
            Window::Full => true,
            Window::Band(b) => i.abs_diff(j) <= b,
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Window::Full => f.write_str("full"),
            Window::Band(b) => write!(f, "{b}"),
        }
    }
}

/// Parameters of weighted DTW. The upper weight bound is fixed at 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WdtwParams {
    pub g: f64,
}

impl WdtwParams {
    pub const WEIGHT_MAX: f64 = 1.0;
}

#[inline]
pub(crate) fn sq_euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Rolling-row DTW recurrence over an `n x n` grid.
///
/// `cost(i, j)` takes 0-based indices. Cells outside the band read as `+inf`.
#[inline]
pub(crate) fn dtw_core<F>(n: usize, band: usize, cost: F) -> f64
where
    F: Fn(usize, usize) -> f64,
{
    let mut prev = vec![f64::INFINITY; n + 1];
    let mut cur = vec![f64::INFINITY; n + 1];
    prev[0] = 0.0;
    for i in 1..=n {
        let lo = if i > band { i - band } else { 1 };
        let hi = (i + band).min(n);
        cur[lo - 1] = f64::INFINITY;
        for j in lo..=hi {
            let best = prev[j - 1].min(prev[j]).min(cur[j - 1]);
            cur[j] = cost(i - 1, j - 1) + best;
        }
        if hi < n {
            cur[hi + 1] = f64::INFINITY;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[n]
}

/// The full `(n+1) x (n+1)` cumulative grid, for inspection and tests.
pub fn dtw_cost_matrix<F>(n: usize, window: Window, cost: F) -> Vec<Vec<f64>>
where
    F: Fn(usize, usize) -> f64,
{
    let mut grid = vec![vec![f64::INFINITY; n + 1]; n + 1];
    grid[0][0] = 0.0;
    for i in 1..=n {
        for j in 1..=n {
            if window.allows(i, j) {
                let best = grid[i - 1][j - 1].min(grid[i - 1][j]).min(grid[i][j - 1]);
                grid[i][j] = cost(i - 1, j - 1) + best;
            }
        }
    }
    grid
}

fn check_lengths(q: &[f64], c: &[f64]) -> Result<()> {
    if q.len() == c.len() {
        Ok(())
    } else {
        Err(Error::LengthMismatch { left: q.len(), right: c.len() })
    }
}

/// Univariate DTW with squared point differences.
pub fn dtw_univariate(q: &[f64], c: &[f64], window: Window) -> Result<f64> {
    check_lengths(q, c)?;
    Ok(dtw_uni_unchecked(q, c, window))
}

#[inline]
fn dtw_uni_unchecked(q: &[f64], c: &[f64], window: Window) -> f64 {
    let n = q.len();
    dtw_core(n, window.band(n), |i, j| {
        let d = q[i] - c[j];
        d * d
    })
}

/// Multivariate DTW under either strategy.
///
/// `p` is the order of the norm combining per-dimension values and is only
/// used by the independent strategy.
pub fn dtw(q: &MultivariateSeries, c: &MultivariateSeries, window: Window, strategy: Strategy, p: f64) -> Result<f64> {
    q.check_shape(c)?;
    check_p(p)?;
    let n = q.len();
    Ok(match strategy {
        Strategy::Independent => {
            p_norm((0..q.dims()).map(|d| dtw_uni_unchecked(q.dimension(d), c.dimension(d), window)), p)
        }
        Strategy::Dependent => dtw_core(n, window.band(n), |i, j| sq_euclid(q.point(i), c.point(j))),
    })
}

/// Modified logistic weight for a warping offset `delta` in series of length `len`.
///
/// Evaluates `1 / (1 + exp(-g * (delta - len) / 2))`.
pub fn wdtw_weight(delta: usize, len: usize, g: f64) -> f64 {
    let offset = (delta as f64 - len as f64) / 2.0;
    WdtwParams::WEIGHT_MAX / (1.0 + (-g * offset).exp())
}

/// Weights for every offset `0..len`.
pub fn wdtw_weights(len: usize, g: f64) -> Vec<f64> {
    (0..len).map(|delta| wdtw_weight(delta, len, g)).collect()
}

#[inline]
fn wdtw_uni_unchecked(q: &[f64], c: &[f64], weights: &[f64]) -> f64 {
    let n = q.len();
    dtw_core(n, n, |i, j| {
        let d = q[i] - c[j];
        weights[i.abs_diff(j)] * d * d
    })
}

/// Univariate weighted DTW (no band).
pub fn wdtw_univariate(q: &[f64], c: &[f64], g: f64) -> Result<f64> {
    check_lengths(q, c)?;
    Ok(wdtw_uni_unchecked(q, c, &wdtw_weights(q.len(), g)))
}

/// Multivariate weighted DTW.
pub fn wdtw(q: &MultivariateSeries, c: &MultivariateSeries, g: f64, strategy: Strategy, p: f64) -> Result<f64> {
    q.check_shape(c)?;
    check_p(p)?;
    let n = q.len();
    let weights = wdtw_weights(n, g);
    Ok(match strategy {
        Strategy::Independent => {
            p_norm((0..q.dims()).map(|d| wdtw_uni_unchecked(q.dimension(d), c.dimension(d), &weights)), p)
        }
        Strategy::Dependent => dtw_core(n, n, |i, j| weights[i.abs_diff(j)] * sq_euclid(q.point(i), c.point(j))),
    })
}

/// DTW on the derivative transforms of both series.
pub fn ddtw(q: &MultivariateSeries, c: &MultivariateSeries, window: Window, strategy: Strategy, p: f64) -> Result<f64> {
    q.check_shape(c)?;
    dtw(&derivative_transform(q)?, &derivative_transform(c)?, window, strategy, p)
}

/// Weighted DTW on the derivative transforms of both series.
pub fn wddtw(q: &MultivariateSeries, c: &MultivariateSeries, g: f64, strategy: Strategy, p: f64) -> Result<f64> {
    q.check_shape(c)?;
    wdtw(&derivative_transform(q)?, &derivative_transform(c)?, g, strategy, p)
}
