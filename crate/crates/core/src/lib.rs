//! Admissibility of weighted point blow-ups: genericity, balancing and
//! general-position checks, convex balancing solvers, and sampling
//! experiments over configurations and weights.
//!
//! The main entry points are [`balance::check_conditions`],
//! [`balance::solve_balance`] and the two built-in models
//! [`ProjectiveTorusModel`] and [`LeBrunProfileModel`].

pub mod balance;
mod error;
pub mod explorer;
pub mod halgebra;
pub mod linalg;
pub mod models;

pub use balance::{
    bisect_two_points, check_conditions, rebalance_orbit, s_jacobian, s_map, section3_target_heights, solve_balance,
    ConditionReport, SolveOptions, SolveReport, SolveStatus,
};
pub use error::{Error, Result};
pub use explorer::{
    certify_weight_openness, classify_lebrun_pair, sample_point_density, ExperimentReport, ExperimentSpec, PairClass,
    Verdict,
};
pub use halgebra::{
    effective_weights, weighted_moment_sum, Configuration, EffectiveWeights, FlowParameter, MomentVector, SymmetryBasis,
};
pub use models::{
    LeBrunPoint, LeBrunProfileModel, Model, ModelDescriptor, Profile, ProfileKind, ProjectivePoint,
    ProjectiveTorusModel,
};
