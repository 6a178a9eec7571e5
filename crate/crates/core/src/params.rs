//! Cross-validation grids.
//!
//! Every parameterized measure gets exactly 100 candidate configurations,
//! scaled by the training-set standard deviations and the series shape.
//! The conventions (spacing, ordering) are fixed and versioned by
//! [`GRID_CONVENTIONS`]:
//!
//! | measure      | grid                                                                  |
//! |--------------|-----------------------------------------------------------------------|
//! | L2, DTWF, DDTWF | single configuration                                               |
//! | DTW, DDTW    | band `floor(r * L / 100)`, `r = 0..99`                                |
//! | WDTW, WDDTW  | `g = r / 100`, `r = 0..99`                                            |
//! | LCSS         | 10 thresholds x 10 bands `floor(k * L / 36)`, `k = 0..9`              |
//! | ERP          | 10 gap vectors x the same 10 bands                                    |
//! | MSM          | 25 evenly spaced costs per decade over `[0.01, 100]`                  |
//! | TWE          | 10 stiffness values x 10 delete penalties                             |
//!
//! Thresholds and gaps are 10 evenly spaced values in `[sigma / 5, sigma]`,
//! per dimension for the independent strategy. Dependent LCSS uses
//! `[2 D sigma / 5, 2 D sigma]` with the pooled sigma, and dependent TWE
//! scales both of its ranges by the dimension count.

use crate::dtw::Window;
use crate::edit::{ErpParams, LcssParams, MsmParams, TweParams};
use crate::error::Result;
use crate::measure::{MeasureConfig, MeasureId, Params};
use crate::series::{DatasetStats, Strategy};

/// Identifies the grid conventions above; embedded in result files.
pub const GRID_CONVENTIONS: &str = "grid-v1";

/// An ordered list of candidate configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub configs: Vec<MeasureConfig>,
    /// Set when every scale-dependent parameter collapsed to zero because the
    /// relevant standard deviations are zero; the grid then holds duplicates.
    pub degenerate: bool,
}

impl Grid {
    /// Sets the independent combinator order on every configuration.
    pub fn with_norm(mut self, p: f64) -> Result<Self> {
        crate::transforms::check_p(p)?;
        for c in &mut self.configs {
            c.p = p;
        }
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }
}

/// `count` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (count - 1) as f64;
    (0..count).map(|k| if k == count - 1 { hi } else { lo + step * k as f64 }).collect()
}

/// Ten bands evenly spread over `[0, L/4]`, floored.
pub fn quarter_bands(len: usize) -> Vec<Window> {
    (0..10).map(|k| Window::Band(k * len / 36)).collect()
}

/// The 100 MSM costs: 0.01 to 0.1 inclusive, then 25 values closing each later decade.
pub fn msm_costs() -> Vec<f64> {
    let mut out = linspace(0.01, 0.1, 25);
    for e in -1..=1 {
        let lo = 10f64.powi(e);
        let step = (10.0 * lo - lo) / 25.0;
        out.extend((1..=25).map(|k| if k == 25 { 10.0 * lo } else { lo + step * k as f64 }));
    }
    out
}

/// TWE stiffness values for independent measures.
pub const TWE_NU: [f64; 10] = [1e-5, 5e-5, 1e-4, 5e-4, 1e-3, 5e-3, 1e-2, 5e-2, 1e-1, 5e-1];

/// TWE stiffness values for dependent measures with `dims` dimensions.
pub fn twe_nu_dependent(dims: usize) -> [f64; 10] {
    let d = dims as f64;
    [
        2.0 * d * 1e-5,
        d * 1e-4,
        2.0 * d * 1e-4,
        d * 1e-3,
        2.0 * d * 1e-3,
        d * 1e-2,
        2.0 * d * 1e-2,
        d * 1e-1,
        2.0 * d * 1e-1,
        2.0 * d,
    ]
}

fn config(measure: MeasureId, strategy: Strategy, params: Params) -> MeasureConfig {
    MeasureConfig { measure, strategy, params, p: 1.0 }
}

/// Builds the deterministic grid for one measure and strategy.
///
/// `stats` must come from the training split only.
pub fn grid_for(measure: MeasureId, strategy: Strategy, stats: &DatasetStats, len: usize, dims: usize) -> Result<Grid> {
    let mut degenerate = false;
    let configs = match measure {
        MeasureId::L2 | MeasureId::Dtwf | MeasureId::Ddtwf => vec![config(measure, strategy, Params::None)],
        MeasureId::Dtw | MeasureId::Ddtw => {
            (0..100).map(|r| config(measure, strategy, Params::Window(Window::Band(r * len / 100)))).collect()
        }
        MeasureId::Wdtw | MeasureId::Wddtw => {
            (0..100).map(|r| config(measure, strategy, Params::Weight { g: r as f64 / 100.0 })).collect()
        }
        MeasureId::Lcss => {
            let thresholds: Vec<Vec<f64>> = match strategy {
                Strategy::Independent => {
                    degenerate = stats.sigma_per_dim.iter().all(|&s| s == 0.0);
                    per_dim_ranges(&stats.sigma_per_dim)
                }
                Strategy::Dependent => {
                    degenerate = stats.sigma_global == 0.0;
                    let hi = 2.0 * dims as f64 * stats.sigma_global;
                    linspace(hi / 5.0, hi, 10).into_iter().map(|e| vec![e]).collect()
                }
            };
            let mut out = Vec::with_capacity(100);
            for eps in &thresholds {
                for &w in &quarter_bands(len) {
                    let params = LcssParams::new(eps.clone(), w)?;
                    out.push(config(measure, strategy, Params::Lcss(params)));
                }
            }
            out
        }
        MeasureId::Erp => {
            degenerate = stats.sigma_per_dim.iter().all(|&s| s == 0.0);
            let mut out = Vec::with_capacity(100);
            for gap in per_dim_ranges(&stats.sigma_per_dim) {
                for &w in &quarter_bands(len) {
                    out.push(config(measure, strategy, Params::Erp(ErpParams::new(gap.clone(), w)?)));
                }
            }
            out
        }
        MeasureId::Msm => msm_costs()
            .into_iter()
            .map(|c| Ok(config(measure, strategy, Params::Msm(MsmParams::new(c)?))))
            .collect::<Result<_>>()?,
        MeasureId::Twe => {
            let (nus, lambdas): ([f64; 10], Vec<f64>) = match strategy {
                Strategy::Independent => (TWE_NU, (0..10).map(|i| i as f64 / 9.0).collect()),
                Strategy::Dependent => {
                    let d = dims as f64;
                    (twe_nu_dependent(dims), (0..10).map(|i| 2.0 * d * i as f64 / 9.0).collect())
                }
            };
            let mut out = Vec::with_capacity(100);
            for &nu in &nus {
                for &lambda in &lambdas {
                    out.push(config(measure, strategy, Params::Twe(TweParams::new(nu, lambda)?)));
                }
            }
            out
        }
    };
    if degenerate {
        log::warn!("{measure}_{strategy}: zero standard deviation, parameter grid collapses to duplicates");
    }
    Ok(Grid { configs, degenerate })
}

/// Ten vectors; entry `k` holds the k-th value of `[s/5, s]` for every dimension.
fn per_dim_ranges(sigmas: &[f64]) -> Vec<Vec<f64>> {
    let ranges: Vec<Vec<f64>> = sigmas.iter().map(|&s| linspace(s / 5.0, s, 10)).collect();
    (0..10).map(|k| ranges.iter().map(|r| r[k]).collect()).collect()
}
