//! The eleven-measure catalog and a single dispatch point from a configuration to a kernel.

use std::fmt;
use std::str::FromStr;

use crate::dtw::{self, Window};
use crate::edit::{self, ErpParams, LcssParams, MsmParams, TweParams};
use crate::error::{Error, Result};
use crate::lp;
use crate::series::{MultivariateSeries, Strategy};
use crate::transforms::{check_p, derivative_transform};

/// The measures of the elastic ensemble, in catalog order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeasureId {
    L2,
    Dtwf,
    Dtw,
    Ddtwf,
    Ddtw,
    Wdtw,
    Wddtw,
    Lcss,
    Erp,
    Msm,
    Twe,
}

impl MeasureId {
    pub const ALL: [MeasureId; 11] = [
        MeasureId::L2,
        MeasureId::Dtwf,
        MeasureId::Dtw,
        MeasureId::Ddtwf,
        MeasureId::Ddtw,
        MeasureId::Wdtw,
        MeasureId::Wddtw,
        MeasureId::Lcss,
        MeasureId::Erp,
        MeasureId::Msm,
        MeasureId::Twe,
    ];

    /// The ten elastic measures, i.e. everything but L2.
    pub const ELASTIC: [MeasureId; 10] = [
        MeasureId::Dtwf,
        MeasureId::Dtw,
        MeasureId::Ddtwf,
        MeasureId::Ddtw,
        MeasureId::Wdtw,
        MeasureId::Wddtw,
        MeasureId::Lcss,
        MeasureId::Erp,
        MeasureId::Msm,
        MeasureId::Twe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureId::L2 => "L2",
            MeasureId::Dtwf => "DTWF",
            MeasureId::Dtw => "DTW",
            MeasureId::Ddtwf => "DDTWF",
            MeasureId::Ddtw => "DDTW",
            MeasureId::Wdtw => "WDTW",
            MeasureId::Wddtw => "WDDTW",
            MeasureId::Lcss => "LCSS",
            MeasureId::Erp => "ERP",
            MeasureId::Msm => "MSM",
            MeasureId::Twe => "TWE",
        }
    }

    /// Position in [`MeasureId::ALL`].
    pub fn catalog_index(self) -> usize {
        MeasureId::ALL.iter().position(|&m| m == self).unwrap()
    }

    /// Measures computed on the derivative transform of each series.
    pub fn uses_derivative(self) -> bool {
        matches!(self, MeasureId::Ddtwf | MeasureId::Ddtw | MeasureId::Wddtw)
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.to_ascii_uppercase();
        let upper = match upper.as_str() {
            "EUCLIDEAN" | "ED" => "L2",
            "DTWCV" => "DTW",
            "DDTWCV" => "DDTW",
            other => other,
        };
        MeasureId::ALL
            .into_iter()
            .find(|m| m.name() == upper)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown measure {s:?}")))
    }
}

/// One concrete parameterization; the variant must suit the measure.
#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    /// L2, DTWF and DDTWF.
    None,
    /// DTW and DDTW.
    Window(Window),
    /// WDTW and WDDTW.
    Weight {
        g: f64,
    },
    Lcss(LcssParams),
    Erp(ErpParams),
    Msm(MsmParams),
    Twe(TweParams),
}

/// A measure, a strategy, its parameters and the order of the independent combinator.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureConfig {
    pub measure: MeasureId,
    pub strategy: Strategy,
    pub params: Params,
    pub p: f64,
}

impl MeasureConfig {
    pub fn new(measure: MeasureId, strategy: Strategy, params: Params, p: f64) -> Result<Self> {
        check_p(p)?;
        let ok = matches!(
            (measure, &params),
            (MeasureId::L2 | MeasureId::Dtwf | MeasureId::Ddtwf, Params::None)
                | (MeasureId::Dtw | MeasureId::Ddtw, Params::Window(_))
                | (MeasureId::Wdtw | MeasureId::Wddtw, Params::Weight { .. })
                | (MeasureId::Lcss, Params::Lcss(_))
                | (MeasureId::Erp, Params::Erp(_))
                | (MeasureId::Msm, Params::Msm(_))
                | (MeasureId::Twe, Params::Twe(_))
        );
        if !ok {
            return Err(Error::InvalidParameter(format!("{params:?} is not a parameterization of {measure}")));
        }
        if let Params::Weight { g } = params {
            if !g.is_finite() || g < 0.0 {
                return Err(Error::InvalidParameter(format!("WDTW needs g >= 0, got {g}")));
            }
        }
        if let (Strategy::Dependent, Params::Lcss(lcss)) = (strategy, &params) {
            if lcss.epsilon.len() != 1 {
                return Err(Error::InvalidParameter("dependent LCSS takes a single threshold".into()));
            }
        }
        Ok(Self { measure, strategy, params, p })
    }

    /// Distance between two raw series.
    pub fn distance(&self, q: &MultivariateSeries, c: &MultivariateSeries) -> Result<f64> {
        q.check_shape(c)?;
        if self.measure.uses_derivative() {
            self.distance_prepared(&derivative_transform(q)?, &derivative_transform(c)?)
        } else {
            self.distance_prepared(q, c)
        }
    }

    /// Transform applied to each series before [`Self::distance_prepared`].
    pub fn prepare(&self, s: &MultivariateSeries) -> Result<MultivariateSeries> {
        if self.measure.uses_derivative() {
            derivative_transform(s)
        } else {
            Ok(s.clone())
        }
    }

    /// Distance between series that already went through [`Self::prepare`].
    pub fn distance_prepared(&self, q: &MultivariateSeries, c: &MultivariateSeries) -> Result<f64> {
        let (s, p) = (self.strategy, self.p);
        match (&self.params, self.measure) {
            (Params::None, MeasureId::L2) => lp::euclidean(q, c, s, p),
            (Params::None, _) => dtw::dtw(q, c, Window::Full, s, p),
            (Params::Window(w), _) => dtw::dtw(q, c, *w, s, p),
            (Params::Weight { g }, _) => dtw::wdtw(q, c, *g, s, p),
            (Params::Lcss(params), _) => edit::lcss(q, c, params, s, p),
            (Params::Erp(params), _) => edit::erp(q, c, params, s, p),
            (Params::Msm(params), _) => edit::msm(q, c, *params, s, p),
            (Params::Twe(params), _) => edit::twe(q, c, *params, s, p),
        }
    }

    /// Human-readable parameter string used in result tables.
    pub fn param_string(&self) -> String {
        fn list(v: &[f64]) -> String {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
        }
        match &self.params {
            Params::None => "none".to_string(),
            Params::Window(w) => format!("w={w}"),
            Params::Weight { g } => format!("g={g}"),
            Params::Lcss(l) => format!("e={},band={}", list(&l.epsilon), l.window),
            Params::Erp(e) => format!("g={},band={}", list(&e.gap), e.window),
            Params::Msm(m) => format!("c={}", m.c),
            Params::Twe(t) => format!("nu={},lambda={}", t.nu, t.lambda),
        }
    }
}

impl fmt::Display for MeasureConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}({})", self.measure, self.strategy, self.param_string())?;
        if self.p != 1.0 {
            write!(f, " p={}", self.p)?;
        }
        Ok(())
    }
}
