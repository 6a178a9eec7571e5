//! Multivariate elastic distances and nearest-neighbour classification.
//!
//! Every elastic measure comes in two flavours. The *independent* strategy
//! runs the univariate measure on each dimension separately and combines the
//! per-dimension results with a p-norm (a plain sum by default). The
//! *dependent* strategy warps all dimensions together, using the squared
//! Euclidean distance between whole time points as the local cost.
//!
//! ```
//! use mvelastic::{dtw, MultivariateSeries, Strategy, Window};
//!
//! let q = MultivariateSeries::from_rows(&[[0.0, 1.0], [1.0, 2.0], [2.0, 3.0]])?;
//! let c = MultivariateSeries::from_rows(&[[0.0, 1.0], [2.0, 3.0], [2.0, 3.0]])?;
//! let i = dtw(&q, &c, Window::Full, Strategy::Independent, 1.0)?;
//! let d = dtw(&q, &c, Window::Full, Strategy::Dependent, 1.0)?;
//! assert_eq!((i, d), (2.0, 2.0));
//! # Ok::<(), mvelastic::Error>(())
//! ```
//!
//! On top of the kernels sit leave-one-out tuning over fixed 100-point
//! parameter grids ([`tune_measure`]), the weighted-vote ensemble
//! ([`build_mee`]), and `.ts` file IO with seeded resampling ([`io`]).

pub mod dtw;
pub mod edit;
pub mod error;
pub mod io;
pub mod knn;
pub mod lp;
pub mod measure;
pub mod mee;
pub mod params;
pub mod protocol;
pub mod series;
pub mod transforms;

pub use dtw::{ddtw, dtw, dtw_univariate, wddtw, wdtw, wdtw_univariate, wdtw_weight, Window};
pub use edit::{
    erp, erp_univariate, lcss, lcss_univariate, msm, msm_univariate, twe, twe_univariate, ErpParams, LcssParams,
    MsmParams, TweParams,
};
pub use error::{Error, Result};
pub use io::{parse_ts_file, resample_split, write_results, ResamplePlan, ResultRow, TsFile};
pub use knn::{loocv_accuracy, nn_predict, tune_measure, TunedModel};
pub use lp::{euclidean, lp};
pub use measure::{MeasureConfig, MeasureId, Params};
pub use mee::{build_mee, MeeModel, MeeVariant};
pub use params::{grid_for, Grid, GRID_CONVENTIONS};
pub use series::{compute_stats, DatasetStats, LabeledDataset, MultivariateSeries, Strategy};
pub use transforms::{combine_independent, derivative_transform, z_normalize, NormPolicy};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
pub mod book_introduction {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/series.md")]
pub mod book_series {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/warping.md")]
pub mod book_warping {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/edit.md")]
pub mod book_edit {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/grids.md")]
pub mod book_grids {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/classification.md")]
pub mod book_classification {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/data.md")]
pub mod book_data {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
pub mod book_cli {}
#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
pub mod readme {}
