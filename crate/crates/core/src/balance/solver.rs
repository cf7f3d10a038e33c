use nalgebra::DVector;

use super::{s_jacobian, s_map, total_potential, SolveOptions, SolveReport, SolveStatus};
use crate::error::Result;
use crate::halgebra::{Configuration, FlowParameter};
use crate::linalg;
use crate::models::Model;

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-12;

/// Minimize the total Kempf-Ness potential by damped Newton with
/// backtracking, starting from `s = 0`.
///
/// Steps live in the complement of the model's trivial directions. When the
/// restricted Hessian has a numerical kernel the outcome depends on the
/// gradient: a gradient orthogonal to the kernel is reported as
/// [`SolveStatus::SingularJacobian`]; otherwise the potential decreases
/// linearly along the kernel and the iterate follows that direction with a
/// step proportional to `max(1, |s|)` until the divergence bound is crossed.
pub fn solve_balance<M: Model>(
    model: &M,
    config: &Configuration<M::Point>,
    opts: &SolveOptions,
) -> Result<SolveReport<M::Point>> {
    let basis = model.nontrivial_basis();
    let mut y = DVector::zeros(basis.ncols());
    let mut history = Vec::new();
    let mut iterations = 0;
    let mut min_eigenvalue = None;

    let status = loop {
        let s = FlowParameter::from_vector(&(&basis * &y))?;
        let grad_full = s_map(model, config, &s)?.to_vector();
        let residual = grad_full.norm();
        history.push(residual);
        if residual <= opts.tol_res {
            break SolveStatus::Balanced;
        }
        if s.norm() > opts.divergence_bound {
            break SolveStatus::DivergedUnstable;
        }
        if iterations >= opts.max_iter {
            break SolveStatus::MaxIter;
        }

        let grad = basis.transpose() * &grad_full;
        let hess = linalg::restrict(&s_jacobian(model, config, &s)?, &basis);
        let (values, vectors) = linalg::sorted_eigen(&hess);
        let threshold = opts.tol_pd * hess.trace().max(0.0);
        min_eigenvalue = values.first().copied();

        let mut step = DVector::zeros(y.len());
        let mut kernel_grad = DVector::zeros(y.len());
        for (i, &lambda) in values.iter().enumerate() {
            let v = vectors.column(i);
            let c = v.dot(&grad);
            if lambda > threshold {
                step.axpy(-c / lambda, &v, 1.0);
            } else {
                kernel_grad.axpy(c, &v, 1.0);
            }
        }
        let kernel_norm = kernel_grad.norm();
        if values.iter().any(|&l| l <= threshold) {
            if kernel_norm <= opts.tol_res {
                break SolveStatus::SingularJacobian;
            }
            step.axpy(-y.norm().max(1.0) / kernel_norm, &kernel_grad, 1.0);
        }

        let f0 = total_potential(model, config, &s)?;
        let slope = grad.dot(&step);
        let slack = 8.0 * f64::EPSILON * (1.0 + f0.abs());
        let mut alpha = 1.0;
        let accepted = loop {
            let trial = &y + &step * alpha;
            let f1 = total_potential(model, config, &FlowParameter::from_vector(&(&basis * &trial))?)?;
            if f1 <= f0 + ARMIJO * alpha * slope + slack {
                break Some(trial);
            }
            alpha *= 0.5;
            if alpha < MIN_STEP {
                break None;
            }
        };
        match accepted {
            Some(trial) => y = trial,
            None => break SolveStatus::MaxIter,
        }
        iterations += 1;
    };

    let s_star = FlowParameter::from_vector(&(&basis * &y))?;
    let flowed_points = config.points().iter().map(|p| model.flow(p, &s_star)).collect::<Result<Vec<_>>>()?;
    Ok(SolveReport { status, s_star, flowed_points, residual_history: history, iterations, min_eigenvalue })
}

/// Result of moving a configuration along its complexified orbit.
#[derive(Debug, Clone)]
pub struct RebalanceOutcome<P> {
    pub report: SolveReport<P>,
    /// The flowed configuration `q_j = flow(p_j, s*)`, present when it is
    /// balanced.
    pub representative: Option<Configuration<P>>,
}

/// Find a balanced configuration in the complexified orbit of `config`.
/// [`SolveStatus::DivergedUnstable`] marks configurations whose orbit
/// misses the zero set of the weighted moment map.
pub fn rebalance_orbit<M: Model>(
    model: &M,
    config: &Configuration<M::Point>,
    opts: &SolveOptions,
) -> Result<RebalanceOutcome<M::Point>> {
    let report = solve_balance(model, config, opts)?;
    // Flows are diffeomorphisms, so distinct points stay distinct.
    let representative = report.is_balanced().then(|| config.with_points_unchecked(report.flowed_points.clone()));
    Ok(RebalanceOutcome { report, representative })
}
