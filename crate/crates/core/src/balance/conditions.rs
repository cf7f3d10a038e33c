use nalgebra::DMatrix;
use serde::Serialize;

use super::SolveOptions;
use crate::error::Result;
use crate::halgebra::{effective_weights, weighted_moment_sum, Configuration, MomentVector};
use crate::linalg;
use crate::models::Model;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Genericity {
    pub holds: bool,
    /// Rank of the `d x n` matrix of moment vectors.
    pub rank: usize,
    /// Dimension of the space the moment vectors live in.
    pub expected_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Balancing {
    pub holds: bool,
    pub residual_norm: f64,
    pub residual: MomentVector,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralPosition {
    pub holds: bool,
    /// Least eigenvalue of `sum_j c_j G(p_j)` on the nontrivial subspace.
    pub min_eigenvalue: f64,
    /// `tol_pd` times the trace of the restricted matrix.
    pub threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub tol_res: f64,
    pub tol_pd: f64,
    pub tol_rank: f64,
}

/// Independent verdicts on the three admissibility conditions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub genericity: Genericity,
    pub balancing: Balancing,
    pub general_position: GeneralPosition,
    pub tolerances: Tolerances,
}

impl ConditionReport {
    pub fn all_hold(&self) -> bool {
        self.genericity.holds && self.balancing.holds && self.general_position.holds
    }
}

/// Least restricted eigenvalue of a symmetric PSD matrix and the threshold
/// it has to clear.
pub(crate) fn nondegeneracy(mat: &DMatrix<f64>, basis: &DMatrix<f64>, tol_pd: f64) -> (f64, f64) {
    let r = linalg::restrict(mat, basis);
    let threshold = tol_pd * r.trace().max(0.0);
    (linalg::min_eigenvalue(&r), threshold)
}

/// Check genericity (the moment vectors span), balancing (the weighted sum
/// vanishes) and general position (no nontrivial field vanishes at every
/// point).
pub fn check_conditions<M: Model>(
    model: &M,
    config: &Configuration<M::Point>,
    opts: &SolveOptions,
) -> Result<ConditionReport> {
    let d = model.algebra_dim();
    let moments = config.points().iter().map(|p| model.moment_at(p)).collect::<Result<Vec<_>>>()?;

    let mut mat = DMatrix::zeros(d, moments.len());
    for (j, v) in moments.iter().enumerate() {
        mat.column_mut(j).copy_from_slice(v.as_slice());
    }
    let rank = linalg::numerical_rank(&mat, opts.tol_rank);
    let expected_rank = model.span_dim();

    let eff = effective_weights(config);
    let residual = weighted_moment_sum(&moments, &eff)?;
    let residual_norm = residual.norm();

    let mut gram = DMatrix::zeros(d, d);
    for (p, &c) in config.points().iter().zip(eff.as_slice()) {
        gram += model.gram_at(p)? * c;
    }
    let (min_eigenvalue, threshold) = nondegeneracy(&gram, &model.nontrivial_basis(), opts.tol_pd);

    Ok(ConditionReport {
        genericity: Genericity { holds: rank == expected_rank, rank, expected_rank },
        balancing: Balancing { holds: residual_norm <= opts.tol_res, residual_norm, residual },
        general_position: GeneralPosition { holds: min_eigenvalue > threshold, min_eigenvalue, threshold },
        tolerances: Tolerances { tol_res: opts.tol_res, tol_pd: opts.tol_pd, tol_rank: opts.tol_rank },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{LeBrunPoint, LeBrunProfileModel, ProjectivePoint, ProjectiveTorusModel};

    #[test]
    fn fixed_point_triple() {
        let model = ProjectiveTorusModel::new(2).unwrap();
        let pts = (0..3).map(|k| ProjectivePoint::vertex(2, k)).collect();
        let cfg = Configuration::new(&model, 2, pts, vec![1.0; 3]).unwrap();
        let r = check_conditions(&model, &cfg, &SolveOptions::default()).unwrap();
        assert!(r.genericity.holds);
        assert_eq!(r.genericity.rank, 2);
        assert!(r.balancing.holds);
        assert!(!r.general_position.holds);
        assert!(!r.all_hold());
    }

    #[test]
    fn balanced_lebrun_pair() {
        let model = LeBrunProfileModel::default();
        let h = 1.0 / 2f64.sqrt();
        let cfg =
            Configuration::new(&model, 2, vec![LeBrunPoint::new(-h), LeBrunPoint::new(h)], vec![1.0, 1.0]).unwrap();
        let r = check_conditions(&model, &cfg, &SolveOptions::default()).unwrap();
        assert!(r.all_hold(), "{r:?}");
    }

    #[test]
    fn both_points_on_infinity_section() {
        let model = LeBrunProfileModel::default();
        let cfg = Configuration::new(
            &model,
            2,
            vec![LeBrunPoint::with_base(1.0, "x"), LeBrunPoint::with_base(1.0, "y")],
            vec![1.0, 1.0],
        )
        .unwrap();
        let r = check_conditions(&model, &cfg, &SolveOptions::default()).unwrap();
        assert!(!r.general_position.holds);
        assert!(!r.balancing.holds);
    }

    #[test]
    fn zero_heights_are_not_generic() {
        let model = LeBrunProfileModel::default();
        let cfg = Configuration::new(
            &model,
            2,
            vec![LeBrunPoint::with_base(0.0, "x"), LeBrunPoint::with_base(0.0, "y")],
            vec![1.0, 3.0],
        )
        .unwrap();
        let r = check_conditions(&model, &cfg, &SolveOptions::default()).unwrap();
        assert!(!r.genericity.holds);
        assert!(r.balancing.holds);
        assert!(r.general_position.holds);
    }
}
