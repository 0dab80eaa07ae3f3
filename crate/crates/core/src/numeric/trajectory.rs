use std::fmt;

use serde::Serialize;

use crate::model::{z_of_a, CosmoParams};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Ode,
    Quadrature,
    Hypergeometric,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed",
            Method::Ode => "ode",
            Method::Quadrature => "quadrature",
            Method::Hypergeometric => "hypergeometric",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample<T> {
    pub t: T,
    pub a: T,
    pub adot: T,
}

/// Sampled `(t, a, ȧ)` with the raw constraint residual `ȧ² − z(a)` per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub samples: Vec<Sample<T>>,
    pub residual_friedmann: Vec<T>,
    pub params: CosmoParams<T>,
    pub method: Method,
}

impl<T: Scalar> Trajectory<T> {
    pub fn new(params: CosmoParams<T>, method: Method, samples: Vec<Sample<T>>) -> Self {
        let residual_friedmann = samples
            .iter()
            .map(|s| s.adot * s.adot - z_of_a(&params, s.a))
            .collect();
        Self {
            samples,
            residual_friedmann,
            params,
            method,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> Vec<T> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn scale_factors(&self) -> Vec<T> {
        self.samples.iter().map(|s| s.a).collect()
    }

    /// Largest `|a_i − b_i| / max(1, |a_i|)` against another trajectory on the
    /// same grid. Symmetric up to the normalisation choice, which uses the
    /// larger magnitude of the pair.
    pub fn max_deviation(&self, other: &Trajectory<T>) -> T {
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(x, y)| (x.a - y.a).abs() / T::one().max(x.a.abs().max(y.a.abs())))
            .fold(T::zero(), T::max)
    }
}
