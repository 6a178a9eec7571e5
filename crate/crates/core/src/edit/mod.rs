//! Edit-distance style kernels: LCSS, ERP, MSM and TWE.
//!
//! ERP, MSM and TWE share one three-move recurrence. Borders are `+inf`
//! except the origin, so every alignment starts with a diagonal step into
//! `(1, 1)`. LCSS maximizes a match count instead and has zero borders.

mod erp;
mod lcss;
mod msm;
mod twe;

pub use erp::{erp, erp_univariate, ErpParams};
pub use lcss::{lcss, lcss_count_dependent, lcss_count_univariate, lcss_univariate, LcssParams};
pub use msm::{msm, msm_cost_multivariate, msm_cost_univariate, msm_univariate, MsmParams};
pub use twe::{twe, twe_univariate, TweParams};

/// Min-of-three-moves recurrence on an `n x n` grid with rolling rows.
///
/// Cost closures take the 0-based coordinates of the cell being entered.
/// `vert` is never called with `i == 0` and `horiz` never with `j == 0`,
/// since those moves would leave an infinite border cell.
#[inline]
pub(crate) fn edit_core<Diag, Vert, Horiz>(n: usize, band: usize, diag: Diag, vert: Vert, horiz: Horiz) -> f64
where
    Diag: Fn(usize, usize) -> f64,
    Vert: Fn(usize, usize) -> f64,
    Horiz: Fn(usize, usize) -> f64,
{
    let mut prev = vec![f64::INFINITY; n + 1];
    let mut cur = vec![f64::INFINITY; n + 1];
    prev[0] = 0.0;
    for i in 1..=n {
        let lo = if i > band { i - band } else { 1 };
        let hi = (i + band).min(n);
        cur[lo - 1] = f64::INFINITY;
        for j in lo..=hi {
            let mut best = prev[j - 1] + diag(i - 1, j - 1);
            if i > 1 && prev[j].is_finite() {
                best = best.min(prev[j] + vert(i - 1, j - 1));
            }
            if j > 1 && cur[j - 1].is_finite() {
                best = best.min(cur[j - 1] + horiz(i - 1, j - 1));
            }
            cur[j] = best;
        }
        if hi < n {
            cur[hi + 1] = f64::INFINITY;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[n]
}
