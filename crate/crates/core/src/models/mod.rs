//! Manifold models: anything that can report moment vectors, the Gram
//! matrix of the symmetry fields at a point, and the complexified flow.

mod descriptor;
mod lebrun;
mod projective;

use std::fmt::Debug;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::halgebra::{FlowParameter, MomentVector, SymmetryBasis};
use crate::linalg;

pub use descriptor::{ModelDescriptor, ProfileKind};
pub use lebrun::{LeBrunPoint, LeBrunProfileModel, Profile};
pub use projective::{ProjectivePoint, ProjectiveTorusModel};

/// A manifold with an abelian group of Hamiltonian symmetries.
///
/// Implementations must satisfy, for every valid point `p`:
///
/// * `gram_at(p)` is symmetric positive semidefinite;
/// * `flow(p, 0) == p` and `flow(flow(p, s), t) == flow(p, s + t)`;
/// * `d/de moment_at(flow(p, e * e_k))_j` at `e = 0` equals
///   `kappa() * gram_at(p)[(j, k)]`;
/// * `kempf_ness_at(p, .)` is convex, vanishes at `s = 0`, and its gradient
///   is `moment_at(flow(p, s))`.
pub trait Model: Send + Sync {
    type Point: Clone + Debug + PartialEq + Serialize + Send + Sync;

    /// Real dimension `d` of the torus part of the symmetry algebra.
    fn algebra_dim(&self) -> usize;

    /// Number of coordinates of a model point.
    fn point_dim(&self) -> usize;

    fn basis(&self) -> SymmetryBasis;

    /// Constant relating the flow derivative of the moment map to the Gram
    /// matrix. It absorbs the factor conventions of the pairing.
    fn kappa(&self) -> f64;

    fn validate_point(&self, p: &Self::Point) -> Result<()>;

    fn moment_at(&self, p: &Self::Point) -> Result<MomentVector>;

    fn gram_at(&self, p: &Self::Point) -> Result<DMatrix<f64>>;

    fn flow(&self, p: &Self::Point, s: &FlowParameter) -> Result<Self::Point>;

    fn point_eq(&self, a: &Self::Point, b: &Self::Point, tol: f64) -> bool;

    fn kempf_ness_at(&self, p: &Self::Point, s: &FlowParameter) -> Result<f64>;

    /// Directions of the algebra that act trivially on the whole manifold.
    fn trivial_directions(&self) -> Vec<DVector<f64>> {
        Vec::new()
    }

    /// Dimension of the space the moment vectors can span.
    fn span_dim(&self) -> usize {
        self.algebra_dim() - self.trivial_directions().len()
    }

    /// Orthonormal basis (columns) of the complement of the trivial
    /// directions. Solvers and eigenvalue tests work in these coordinates.
    fn nontrivial_basis(&self) -> DMatrix<f64> {
        linalg::complement_basis(self.algebra_dim(), &self.trivial_directions())
    }

    /// Draw a point from the model's reference sampling measure.
    fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R, label: usize) -> Self::Point;
}

pub(crate) fn check_flow_dim<M: Model + ?Sized>(model: &M, s: &FlowParameter) -> Result<()> {
    if s.dim() != model.algebra_dim() {
        return Err(crate::Error::Contract(format!(
            "flow parameter has dimension {}, model algebra has {}",
            s.dim(),
            model.algebra_dim()
        )));
    }
    Ok(())
}
