use serde::Serialize;

use crate::closedform::BranchChoice;
use crate::model::{Family, RawParams};
use crate::numeric::Method;

/// One named comparison of a measured value against its tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckOutcome {
    pub fn new(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tol,
            passed: value.is_finite() && value <= tol,
            detail: None,
        }
    }

    /// A check that could not be evaluated.
    pub fn failed(name: impl Into<String>, tol: f64, why: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            value: f64::NAN,
            tol,
            passed: false,
            detail: Some(why.into()),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairDeviation {
    pub first: Method,
    pub second: Method,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub family: Family,
    pub params: RawParams<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<BranchChoice>,
    pub window: Option<[f64; 2]>,
    pub n_samples: usize,
    pub methods: Vec<Method>,
    pub max_friedmann_residual: f64,
    pub max_ode_residual: Option<f64>,
    pub max_cross_method_deviation: f64,
    pub deviations: Vec<PairDeviation>,
    pub ermakov_drift: Option<f64>,
    pub checks: Vec<CheckOutcome>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Deviation recorded for a pair of methods, in either order.
    pub fn deviation(&self, a: Method, b: Method) -> Option<f64> {
        self.deviations
            .iter()
            .find(|d| (d.first == a && d.second == b) || (d.first == b && d.second == a))
            .map(|d| d.value)
    }
}
