use super::edit_core;
use crate::dtw::sq_euclid;
use crate::error::{Error, Result};
use crate::series::{MultivariateSeries, Strategy};
use crate::transforms::{check_p, p_norm};

/// Stiffness `nu` and delete penalty `lambda` of Time Warp Edit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TweParams {
    pub nu: f64,
    pub lambda: f64,
}

impl TweParams {
    pub fn new(nu: f64, lambda: f64) -> Result<Self> {
        if nu >= 0.0 && lambda >= 0.0 && nu.is_finite() && lambda.is_finite() {
            Ok(Self { nu, lambda })
        } else {
            Err(Error::InvalidParameter(format!("TWE needs nu >= 0 and lambda >= 0, got nu={nu} lambda={lambda}")))
        }
    }
}

// Time stamps are unit spaced and both series start from an implicit zero point.

#[inline]
fn twe_uni_unchecked(q: &[f64], c: &[f64], params: TweParams) -> f64 {
    let prev = |s: &[f64], i: usize| if i == 0 { 0.0 } else { s[i - 1] };
    let delete = params.nu + params.lambda;
    edit_core(
        q.len(),
        q.len(),
        |i, j| (q[i] - c[j]).powi(2) + (prev(q, i) - prev(c, j)).powi(2) + 2.0 * params.nu,
        |i, _| (q[i] - q[i - 1]).powi(2) + delete,
        |_, j| (c[j] - c[j - 1]).powi(2) + delete,
    )
}

/// Univariate TWE.
pub fn twe_univariate(q: &[f64], c: &[f64], params: TweParams) -> Result<f64> {
    if q.len() != c.len() {
        return Err(Error::LengthMismatch { left: q.len(), right: c.len() });
    }
    Ok(twe_uni_unchecked(q, c, params))
}

/// Multivariate TWE.
pub fn twe(
    q: &MultivariateSeries,
    c: &MultivariateSeries,
    params: TweParams,
    strategy: Strategy,
    p: f64,
) -> Result<f64> {
    q.check_shape(c)?;
    check_p(p)?;
    Ok(match strategy {
        Strategy::Independent => {
            p_norm((0..q.dims()).map(|d| twe_uni_unchecked(q.dimension(d), c.dimension(d), params)), p)
        }
        Strategy::Dependent => {
            let zero = vec![0.0; q.dims()];
            fn prev<'a>(s: &'a MultivariateSeries, zero: &'a [f64], i: usize) -> &'a [f64] {
                if i == 0 {
                    zero
                } else {
                    s.point(i - 1)
                }
            }
            let delete = params.nu + params.lambda;
            edit_core(
                q.len(),
                q.len(),
                |i, j| {
                    sq_euclid(q.point(i), c.point(j))
                        + sq_euclid(prev(q, &zero, i), prev(c, &zero, j))
                        + 2.0 * params.nu
                },
                |i, _| sq_euclid(q.point(i), q.point(i - 1)) + delete,
                |_, j| sq_euclid(c.point(j), c.point(j - 1)) + delete,
            )
        }
    })
}
