use super::{SolveOptions, SolveReport, SolveStatus};
use crate::error::{Error, Result};
use crate::halgebra::FlowParameter;
use crate::models::{LeBrunPoint, LeBrunProfileModel};

const MAX_BISECTIONS: usize = 200;

fn check_weights(a1: f64, a2: f64, m: u32) -> Result<(f64, f64)> {
    if m < 2 {
        return Err(Error::Domain(format!("complex dimension must be >= 2, got {m}")));
    }
    for a in [a1, a2] {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::Domain(format!("weights must be positive, got {a}")));
        }
    }
    let e = (m - 1) as i32;
    Ok((a1.powi(e), a2.powi(e)))
}

/// Heights at which two points of weights `a1, a2` balance on a model with
/// height range `[a_minus, a_plus]`:
///
/// `zeta1 = a_minus a_plus c2 / r`, `zeta2 = -a_plus a_minus c1 / r`,
/// `r = sqrt((a_minus c1)^2 + (a_plus c2)^2)`, `c_j = a_j^(m-1)`.
///
/// They satisfy `a_minus < zeta1 < 0 < zeta2 < a_plus` and
/// `c1 zeta1 + c2 zeta2 = 0`.
pub fn section3_target_heights(a_minus: f64, a_plus: f64, a1: f64, a2: f64, m: u32) -> Result<(f64, f64)> {
    if !(a_minus.is_finite() && a_plus.is_finite() && a_minus < 0.0 && a_plus > 0.0) {
        return Err(Error::Domain(format!("need a_minus < 0 < a_plus, got [{a_minus}, {a_plus}]")));
    }
    let (c1, c2) = check_weights(a1, a2, m)?;
    let r = (a_minus * c1).hypot(a_plus * c2);
    let k = a_minus * a_plus / r;
    Ok((k * c2, -k * c1))
}

/// Solve `c1 zeta(p1(t)) + c2 zeta(p2(t)) = 0` for the flow time `t` by
/// bisection. The left side is nondecreasing in `t` with derivative
/// `c1 psi(zeta1(t)) + c2 psi(zeta2(t))`; a bracket is found by doubling.
///
/// Two heights on the same endpoint never balance and are reported as
/// [`SolveStatus::DivergedUnstable`], as is any bracket search that leaves
/// the divergence bound.
pub fn bisect_two_points(
    model: &LeBrunProfileModel,
    zeta1: f64,
    zeta2: f64,
    a1: f64,
    a2: f64,
    m: u32,
    opts: &SolveOptions,
) -> Result<SolveReport<LeBrunPoint>> {
    let (c1, c2) = check_weights(a1, a2, m)?;
    for z in [zeta1, zeta2] {
        if !(z.is_finite() && z >= model.a_minus() && z <= model.a_plus()) {
            return Err(Error::Domain(format!("height {z} outside [{}, {}]", model.a_minus(), model.a_plus())));
        }
    }
    let heights = |t: f64| (model.flow_height(zeta1, t).0, model.flow_height(zeta2, t).0);
    let residual = |t: f64| {
        let (h1, h2) = heights(t);
        c1 * h1 + c2 * h2
    };
    let report = |status, t: f64, history: Vec<f64>, iterations| -> Result<SolveReport<LeBrunPoint>> {
        let (h1, h2) = heights(t);
        let min_eigenvalue = Some(c1 * model.psi(h1) + c2 * model.psi(h2));
        Ok(SolveReport {
            status,
            s_star: FlowParameter::new(vec![t])?,
            flowed_points: vec![LeBrunPoint::with_base(h1, "p1"), LeBrunPoint::with_base(h2, "p2")],
            residual_history: history,
            iterations,
            min_eigenvalue,
        })
    };

    let r0 = residual(0.0);
    let mut history = vec![r0.abs()];
    if r0.abs() <= opts.tol_res {
        return report(SolveStatus::Balanced, 0.0, history, 0);
    }
    if model.is_endpoint(zeta1) && model.is_endpoint(zeta2) {
        return report(SolveStatus::DivergedUnstable, 0.0, history, 0);
    }

    // the residual increases with t, so walk against its sign
    let dir = -r0.signum();
    let mut inner = 0.0;
    let mut reach = 1.0;
    let outer = loop {
        let t = dir * reach;
        let r = residual(t);
        history.push(r.abs());
        if r == 0.0 || r.signum() != r0.signum() {
            break t;
        }
        if reach > opts.divergence_bound {
            return report(SolveStatus::DivergedUnstable, t, history, 0);
        }
        inner = t;
        reach *= 2.0;
    };

    // invariant: residual(lo) < 0 <= residual(hi)
    let (mut lo, mut hi) = if dir > 0.0 { (inner, outer) } else { (outer, inner) };
    let mut iterations = 0;
    let mut best = (outer, residual(outer).abs());
    while iterations < MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let r = residual(mid);
        history.push(r.abs());
        if r.abs() < best.1 {
            best = (mid, r.abs());
        }
        if r == 0.0 {
            break;
        }
        if r < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let status = if best.1 <= opts.tol_res { SolveStatus::Balanced } else { SolveStatus::MaxIter };
    history.push(best.1);
    report(status, best.0, history, iterations)
}
