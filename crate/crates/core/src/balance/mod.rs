//! Decision procedures and solvers for the balancing problem.
//!
//! A weighted configuration `(p_j, a_j)` is balanced when
//! `sum_j a_j^(m-1) xi(p_j) = 0`. Balancing is attacked by flowing all
//! points along the imaginary directions of the symmetry algebra: the
//! flowed moment sum is the gradient of a convex potential (a sum of
//! Kempf-Ness functions), so balanced orbit representatives are exactly
//! its minimizers.

mod conditions;
mod smap;
mod solver;
mod two_point;

use serde::{Deserialize, Serialize};

use crate::halgebra::FlowParameter;

pub use conditions::{check_conditions, Balancing, ConditionReport, GeneralPosition, Genericity, Tolerances};
pub use smap::{s_jacobian, s_map, total_potential};
pub use solver::{rebalance_orbit, solve_balance, RebalanceOutcome};
pub use two_point::{bisect_two_points, section3_target_heights};

/// Tolerances and limits shared by the checkers and solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveOptions {
    /// Balancing residual accepted as zero.
    pub tol_res: f64,
    /// Relative nondegeneracy threshold: an eigenvalue counts as zero when
    /// it is at most `tol_pd` times the trace of the matrix.
    pub tol_pd: f64,
    /// Relative singular-value cutoff for the genericity rank.
    pub tol_rank: f64,
    pub max_iter: usize,
    /// Flows longer than this are treated as escaping to infinity.
    pub divergence_bound: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { tol_res: 1e-10, tol_pd: 1e-9, tol_rank: 1e-9, max_iter: 100, divergence_bound: 50.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SolveStatus {
    Balanced,
    DivergedUnstable,
    SingularJacobian,
    MaxIter,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport<P> {
    pub status: SolveStatus,
    pub s_star: FlowParameter,
    pub flowed_points: Vec<P>,
    /// Norm of the flowed moment sum at every iterate, starting at `s = 0`.
    pub residual_history: Vec<f64>,
    /// Accepted Newton (or bisection) steps.
    pub iterations: usize,
    /// Least eigenvalue of the restricted Jacobian at the last iterate where
    /// it was evaluated.
    pub min_eigenvalue: Option<f64>,
}

impl<P> SolveReport<P> {
    pub fn final_residual(&self) -> f64 {
        self.residual_history.last().copied().unwrap_or(f64::NAN)
    }

    pub fn is_balanced(&self) -> bool {
        self.status == SolveStatus::Balanced
    }
}
