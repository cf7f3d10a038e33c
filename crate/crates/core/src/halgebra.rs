//! Value types for the abelian symmetry algebra, its dual, and weighted
//! point configurations.
//!
//! The algebra is represented by the real dimension `d` of its torus part.
//! Flows are parameterized by the imaginary directions only: the Killing
//! directions preserve every normalized Hamiltonian and never move a
//! moment vector.

use std::collections::HashSet;
use std::ops::Index;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::Model;

/// Default tolerance for deciding that two model points coincide.
pub const DEFAULT_POINT_TOL: f64 = 1e-12;

fn check_finite(what: &str, v: &[f64]) -> Result<()> {
    match v.iter().position(|x| !x.is_finite()) {
        Some(i) => Err(Error::Domain(format!("{what}: entry {i} is not finite"))),
        None => Ok(()),
    }
}

/// Basis of the torus part of the algebra of Hamiltonian holomorphic fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryBasis {
    labels: Vec<String>,
}

impl SymmetryBasis {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Domain("symmetry basis must have dimension >= 1".into()));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::Domain(format!("duplicate basis label {l:?}")));
            }
        }
        Ok(Self { labels })
    }

    /// Basis labelled `prefix0 .. prefix{d-1}`.
    pub fn indexed(prefix: &str, dim: usize) -> Result<Self> {
        Self::new((0..dim).map(|k| format!("{prefix}{k}")).collect())
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// Coordinates of an imaginary-direction flow `exp(sum_k s_k (-J X_k))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct FlowParameter(Vec<f64>);

impl FlowParameter {
    pub fn new(s: Vec<f64>) -> Result<Self> {
        check_finite("flow parameter", &s)?;
        Ok(Self(s))
    }

    pub fn zeros(d: usize) -> Self {
        Self(vec![0.0; d])
    }

    pub fn from_vector(v: &DVector<f64>) -> Result<Self> {
        Self::new(v.iter().copied().collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn to_vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.0)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Componentwise sum. Flows of an abelian algebra compose additively.
    pub fn add(&self, other: &FlowParameter) -> Result<FlowParameter> {
        if self.dim() != other.dim() {
            return Err(Error::Contract(format!(
                "flow parameter dimensions differ: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        FlowParameter::new(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl TryFrom<Vec<f64>> for FlowParameter {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<FlowParameter> for Vec<f64> {
    fn from(s: FlowParameter) -> Self {
        s.0
    }
}

impl Index<usize> for FlowParameter {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Element of the dual algebra: the normalized Hamiltonians at a point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct MomentVector(Vec<f64>);

impl MomentVector {
    pub fn new(v: Vec<f64>) -> Result<Self> {
        check_finite("moment vector", &v)?;
        Ok(Self(v))
    }

    pub fn zeros(d: usize) -> Self {
        Self(vec![0.0; d])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn to_vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.0)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

impl TryFrom<Vec<f64>> for MomentVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<MomentVector> for Vec<f64> {
    fn from(v: MomentVector) -> Self {
        v.0
    }
}

impl Index<usize> for MomentVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// The exponents `c_j = a_j^(m-1)` that enter the balancing condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectiveWeights(Vec<f64>);

impl EffectiveWeights {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Raw coefficients. Only positivity is checked; use
    /// [`effective_weights`] to derive them from a configuration.
    pub fn from_coefficients(c: Vec<f64>) -> Result<Self> {
        check_finite("effective weights", &c)?;
        if c.iter().any(|&x| x <= 0.0) {
            return Err(Error::Domain("effective weights must be positive".into()));
        }
        Ok(Self(c))
    }
}

/// `n` distinct points of a model with positive weights, on a manifold of
/// complex dimension `m >= 2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Configuration<P> {
    m: u32,
    points: Vec<P>,
    weights: Vec<f64>,
}

impl<P: Clone> Configuration<P> {
    pub fn new<M>(model: &M, m: u32, points: Vec<P>, weights: Vec<f64>) -> Result<Self>
    where
        M: Model<Point = P> + ?Sized,
    {
        Self::with_tolerance(model, m, points, weights, DEFAULT_POINT_TOL)
    }

    /// Like [`Configuration::new`] with an explicit coincidence tolerance
    /// (in model coordinates) for the diagonal check.
    pub fn with_tolerance<M>(model: &M, m: u32, points: Vec<P>, weights: Vec<f64>, tol: f64) -> Result<Self>
    where
        M: Model<Point = P> + ?Sized,
    {
        if m < 2 {
            return Err(Error::Domain(format!("complex dimension must be >= 2, got {m}")));
        }
        if points.is_empty() {
            return Err(Error::Domain("configuration needs at least one point".into()));
        }
        if points.len() != weights.len() {
            return Err(Error::Contract(format!("{} points but {} weights", points.len(), weights.len())));
        }
        for (j, &a) in weights.iter().enumerate() {
            if !(a.is_finite() && a > 0.0) {
                return Err(Error::Domain(format!("weight {j} must be positive, got {a}")));
            }
        }
        for p in &points {
            model.validate_point(p)?;
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if model.point_eq(&points[i], &points[j], tol) {
                    return Err(Error::Domain(format!(
                        "points {i} and {j} coincide (configuration meets the diagonal)"
                    )));
                }
            }
        }
        Ok(Self { m, points, weights })
    }

    /// Same points with new weights. The diagonal check is not repeated.
    pub fn reweighted(&self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.points.len() {
            return Err(Error::Contract(format!("{} points but {} weights", self.points.len(), weights.len())));
        }
        if weights.iter().any(|&a| !(a.is_finite() && a > 0.0)) {
            return Err(Error::Domain("weights must be positive".into()));
        }
        Ok(Self { m: self.m, points: self.points.clone(), weights })
    }

    /// Same weights with the points replaced, e.g. by their images under a
    /// flow. The caller guarantees the new points are valid and distinct.
    pub(crate) fn with_points_unchecked(&self, points: Vec<P>) -> Self {
        Self { m: self.m, points, weights: self.weights.clone() }
    }
}

impl<P> Configuration<P> {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `(a_1^(m-1), ..., a_n^(m-1))`.
pub fn effective_weights<P>(config: &Configuration<P>) -> EffectiveWeights {
    let e = (config.m - 1) as i32;
    EffectiveWeights(config.weights.iter().map(|a| a.powi(e)).collect())
}

/// `sum_j c_j * moments[j]`.
pub fn weighted_moment_sum(moments: &[MomentVector], eff: &EffectiveWeights) -> Result<MomentVector> {
    if moments.is_empty() || moments.len() != eff.len() {
        return Err(Error::Contract(format!("{} moment vectors but {} weights", moments.len(), eff.len())));
    }
    let d = moments[0].dim();
    let mut acc = vec![0.0; d];
    for (v, &c) in moments.iter().zip(eff.as_slice()) {
        if v.dim() != d {
            return Err(Error::Contract(format!("moment vector dimension {} differs from {d}", v.dim())));
        }
        for (a, x) in acc.iter_mut().zip(v.as_slice()) {
            *a += c * x;
        }
    }
    MomentVector::new(acc)
}
