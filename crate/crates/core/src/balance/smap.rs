use nalgebra::DMatrix;

use crate::error::Result;
use crate::halgebra::{effective_weights, weighted_moment_sum, Configuration, FlowParameter, MomentVector};
use crate::models::Model;

/// Flowed moment sum `sum_j c_j xi(flow(p_j, s))`.
pub fn s_map<M: Model>(model: &M, config: &Configuration<M::Point>, s: &FlowParameter) -> Result<MomentVector> {
    let moments = config.points().iter().map(|p| model.moment_at(&model.flow(p, s)?)).collect::<Result<Vec<_>>>()?;
    weighted_moment_sum(&moments, &effective_weights(config))
}

/// Derivative of [`s_map`] in `s`: `kappa * sum_j c_j G(flow(p_j, s))`.
pub fn s_jacobian<M: Model>(model: &M, config: &Configuration<M::Point>, s: &FlowParameter) -> Result<DMatrix<f64>> {
    let d = model.algebra_dim();
    let eff = effective_weights(config);
    let mut jac = DMatrix::zeros(d, d);
    for (p, &c) in config.points().iter().zip(eff.as_slice()) {
        let g = model.gram_at(&model.flow(p, s)?)?;
        jac += g * (c * model.kappa());
    }
    Ok(jac)
}

/// `F(s) = sum_j c_j K(p_j, s)`; gradient [`s_map`], Hessian [`s_jacobian`].
pub fn total_potential<M: Model>(model: &M, config: &Configuration<M::Point>, s: &FlowParameter) -> Result<f64> {
    let eff = effective_weights(config);
    let mut total = 0.0;
    for (p, &c) in config.points().iter().zip(eff.as_slice()) {
        total += c * model.kempf_ness_at(p, s)?;
    }
    Ok(total)
}
