use super::edit_core;
use crate::dtw::{sq_euclid, Window};
use crate::error::{Error, Result};
use crate::series::{MultivariateSeries, Strategy};
use crate::transforms::{check_p, p_norm};

/// Gap reference values and band for ERP.
///
/// `gap` holds one value per dimension under both strategies: the
/// independent strategy uses `gap[d]` for dimension `d`, the dependent one
/// treats the whole vector as the gap point.
#[derive(Debug, Clone, PartialEq)]
pub struct ErpParams {
    pub gap: Vec<f64>,
    pub window: Window,
}

impl ErpParams {
    pub fn new(gap: Vec<f64>, window: Window) -> Result<Self> {
        if gap.is_empty() || gap.iter().any(|g| !g.is_finite()) {
            return Err(Error::InvalidParameter(format!("invalid ERP gap vector {gap:?}")));
        }
        Ok(Self { gap, window })
    }
}

#[inline]
fn erp_uni_unchecked(q: &[f64], c: &[f64], gap: f64, band: usize) -> f64 {
    edit_core(q.len(), band, |i, j| (q[i] - c[j]).powi(2), |i, _| (q[i] - gap).powi(2), |_, j| (c[j] - gap).powi(2))
}

/// Univariate ERP with gap value `gap`.
pub fn erp_univariate(q: &[f64], c: &[f64], gap: f64, window: Window) -> Result<f64> {
    if q.len() != c.len() {
        return Err(Error::LengthMismatch { left: q.len(), right: c.len() });
    }
    Ok(erp_uni_unchecked(q, c, gap, window.band(q.len())))
}

/// Multivariate ERP.
pub fn erp(
    q: &MultivariateSeries,
    c: &MultivariateSeries,
    params: &ErpParams,
    strategy: Strategy,
    p: f64,
) -> Result<f64> {
    q.check_shape(c)?;
    check_p(p)?;
    if params.gap.len() != q.dims() {
        return Err(Error::GapDimensionMismatch { expected: q.dims(), found: params.gap.len() });
    }
    let n = q.len();
    let band = params.window.band(n);
    Ok(match strategy {
        Strategy::Independent => {
            p_norm((0..q.dims()).map(|d| erp_uni_unchecked(q.dimension(d), c.dimension(d), params.gap[d], band)), p)
        }
        Strategy::Dependent => {
            let gap = &params.gap[..];
            let q_gap: Vec<f64> = (0..n).map(|i| sq_euclid(q.point(i), gap)).collect();
            let c_gap: Vec<f64> = (0..n).map(|j| sq_euclid(c.point(j), gap)).collect();
            edit_core(n, band, |i, j| sq_euclid(q.point(i), c.point(j)), |i, _| q_gap[i], |_, j| c_gap[j])
        }
    })
}
