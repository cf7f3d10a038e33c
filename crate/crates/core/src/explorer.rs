//! Experiments that witness, at desk scale, the openness of admissible
//! weights and the density of balanceable point configurations.
//!
//! Density is witnessed statistically. Every sample draws from its own
//! ChaCha stream selected by `(seed, sample index)`, so serial and parallel
//! runs produce the same report.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::balance::{check_conditions, rebalance_orbit, solve_balance, SolveOptions, SolveStatus};
use crate::error::{Error, Result};
use crate::halgebra::Configuration;
use crate::models::{LeBrunProfileModel, Model};

/// How many failing samples are copied into a report.
pub const MAX_EXEMPLARS: usize = 10;

/// Parameters of a sampling or certification run, echoed into reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub samples: usize,
    pub seed: u64,
    pub grid: usize,
    pub radius: f64,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self { samples: 1000, seed: 42, grid: 9, radius: 0.1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Balanced,
    DivergedUnstable,
    SingularJacobian,
    MaxIter,
    /// Sample could not be formed (weights left `(0, inf)`, or points met
    /// the diagonal).
    Infeasible,
}

impl From<SolveStatus> for Verdict {
    fn from(s: SolveStatus) -> Self {
        match s {
            SolveStatus::Balanced => Verdict::Balanced,
            SolveStatus::DivergedUnstable => Verdict::DivergedUnstable,
            SolveStatus::SingularJacobian => Verdict::SingularJacobian,
            SolveStatus::MaxIter => Verdict::MaxIter,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleVerdict {
    pub index: usize,
    pub verdict: Verdict,
    pub residual: f64,
    pub s_norm: f64,
    pub iterations: usize,
    /// Genericity of the drawn configuration (density runs only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generic: Option<bool>,
    /// Weights tried (certification runs only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub seed: u64,
    pub samples: usize,
    pub successes: usize,
    pub success_fraction: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genericity_fraction: Option<f64>,
    /// Largest relative radius on which every grid node balanced.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified_radius: Option<f64>,
    pub failure_exemplars: Vec<SampleVerdict>,
    pub verdicts: Vec<SampleVerdict>,
    /// Not serialized: reports must be byte-identical across runs.
    #[serde(skip)]
    pub wall_clock: Duration,
}

impl ExperimentReport {
    fn assemble(seed: u64, verdicts: Vec<SampleVerdict>, started: Instant) -> Self {
        let samples = verdicts.len();
        let successes = verdicts.iter().filter(|v| v.verdict == Verdict::Balanced).count();
        let failure_exemplars =
            verdicts.iter().filter(|v| v.verdict != Verdict::Balanced).take(MAX_EXEMPLARS).cloned().collect();
        Self {
            seed,
            samples,
            successes,
            success_fraction: successes as f64 / samples as f64,
            genericity_fraction: None,
            certified_radius: None,
            failure_exemplars,
            verdicts,
            wall_clock: started.elapsed(),
        }
    }

    /// One row per sample: `index,verdict,residual,s_norm,iterations`.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "verdict", "residual", "s_norm", "iterations"])?;
        for v in &self.verdicts {
            let verdict = verdict_label(v.verdict);
            w.write_record([
                v.index.to_string(),
                verdict.to_string(),
                format!("{:.16e}", v.residual),
                format!("{:.16e}", v.s_norm),
                v.iterations.to_string(),
            ])?;
        }
        w.flush()
    }
}

fn verdict_label(v: Verdict) -> &'static str {
    match v {
        Verdict::Balanced => "BALANCED",
        Verdict::DivergedUnstable => "DIVERGED_UNSTABLE",
        Verdict::SingularJacobian => "SINGULAR_JACOBIAN",
        Verdict::MaxIter => "MAX_ITER",
        Verdict::Infeasible => "INFEASIBLE",
    }
}

fn infeasible(index: usize, weights: Option<Vec<f64>>) -> SampleVerdict {
    SampleVerdict {
        index,
        verdict: Verdict::Infeasible,
        residual: f64::NAN,
        s_norm: f64::NAN,
        iterations: 0,
        generic: None,
        weights,
    }
}

const REFINEMENTS: usize = 30;

/// Scan a grid over the relative box `a_j (1 + radius u_j)`, `u_j` in
/// `[-1, 1]` with `grid` nodes per axis, and solve the balancing problem
/// from the same points at every node.
///
/// The base configuration must satisfy all three admissibility conditions.
/// `certified_radius` is the full radius when every node balanced.
/// Otherwise it is the larger of the biggest all-balanced grid shell and
/// the biggest `radius / 2^k` whose whole grid balanced.
pub fn certify_weight_openness<M: Model>(
    model: &M,
    config: &Configuration<M::Point>,
    radius: f64,
    grid: usize,
    opts: &SolveOptions,
) -> Result<ExperimentReport> {
    let started = Instant::now();
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::Domain(format!("radius must be positive, got {radius}")));
    }
    if grid < 2 {
        return Err(Error::Domain("grid needs at least two nodes per axis".into()));
    }
    let base = check_conditions(model, config, opts)?;
    if !base.all_hold() {
        return Err(Error::Precondition(format!(
            "base configuration fails: genericity={}, balancing={}, general_position={}",
            base.genericity.holds, base.balancing.holds, base.general_position.holds
        )));
    }

    let results = scan_weight_grid(model, config, radius, grid, opts)?;
    let failed_at = |rs: &[(SampleVerdict, f64)]| {
        rs.iter().filter(|(v, _)| v.verdict != Verdict::Balanced).map(|(_, shell)| *shell).fold(f64::INFINITY, f64::min)
    };
    let worst_failure = failed_at(&results);
    let mut certified = results.iter().map(|(_, shell)| *shell).filter(|&r| r < worst_failure).fold(0.0, f64::max);
    if worst_failure.is_finite() {
        // shrink the whole grid until it passes
        let mut sub = radius;
        for _ in 0..REFINEMENTS {
            sub *= 0.5;
            if sub <= certified {
                break;
            }
            if failed_at(&scan_weight_grid(model, config, sub, grid, opts)?).is_infinite() {
                certified = sub;
                break;
            }
        }
    }

    let mut report = ExperimentReport::assemble(0, results.into_iter().map(|(v, _)| v).collect(), started);
    report.certified_radius = Some(certified);
    Ok(report)
}

/// Verdict and shell radius `max_j |u_j| * radius` of every grid node.
fn scan_weight_grid<M: Model>(
    model: &M,
    config: &Configuration<M::Point>,
    radius: f64,
    grid: usize,
    opts: &SolveOptions,
) -> Result<Vec<(SampleVerdict, f64)>> {
    let n = config.len();
    let nodes = grid.checked_pow(n as u32).ok_or_else(|| Error::Domain("grid too large".into()))?;
    let axis: Vec<f64> = (0..grid).map(|i| -1.0 + 2.0 * i as f64 / (grid - 1) as f64).collect();
    let base_w = config.weights();

    let run = |index: usize| -> (SampleVerdict, f64) {
        let mut rest = index;
        let mut shell: f64 = 0.0;
        let mut w = Vec::with_capacity(n);
        for a in base_w {
            let u = axis[rest % grid];
            rest /= grid;
            shell = shell.max(u.abs() * radius);
            w.push(a * (1.0 + radius * u));
        }
        let verdict = match config.reweighted(w.clone()) {
            Err(_) => infeasible(index, Some(w)),
            Ok(cfg) => match solve_balance(model, &cfg, opts) {
                Ok(r) => SampleVerdict {
                    index,
                    verdict: r.status.into(),
                    residual: r.final_residual(),
                    s_norm: r.s_star.norm(),
                    iterations: r.iterations,
                    generic: None,
                    weights: Some(w),
                },
                Err(_) => infeasible(index, Some(w)),
            },
        };
        (verdict, shell)
    };
    Ok((0..nodes).into_par_iter().map(run).collect())
}

/// Draw `samples` random `n`-point configurations from the model's sampling
/// measure, with the given weights, and move each along its complexified
/// orbit towards a balanced one.
///
/// Also reports the fraction of draws that satisfy genericity.
pub fn sample_point_density<M: Model>(
    model: &M,
    m: u32,
    weights: &[f64],
    samples: usize,
    seed: u64,
    opts: &SolveOptions,
) -> Result<ExperimentReport> {
    let started = Instant::now();
    if samples == 0 {
        return Err(Error::Domain("sample count must be >= 1".into()));
    }
    if weights.is_empty() || weights.iter().any(|&a| !(a.is_finite() && a > 0.0)) {
        return Err(Error::Domain("weights must be a nonempty list of positive numbers".into()));
    }
    let run = |index: usize| -> SampleVerdict {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index as u64);
        let points: Vec<_> = (0..weights.len()).map(|j| model.sample_point(&mut rng, j + 1)).collect();
        let Ok(cfg) = Configuration::new(model, m, points, weights.to_vec()) else {
            return infeasible(index, None);
        };
        let generic = check_conditions(model, &cfg, opts).map(|r| r.genericity.holds).ok();
        match rebalance_orbit(model, &cfg, opts) {
            Ok(out) => SampleVerdict {
                index,
                verdict: out.report.status.into(),
                residual: out.report.final_residual(),
                s_norm: out.report.s_star.norm(),
                iterations: out.report.iterations,
                generic,
                weights: None,
            },
            Err(_) => infeasible(index, None),
        }
    };
    let verdicts: Vec<SampleVerdict> = (0..samples).into_par_iter().map(run).collect();
    let generic = verdicts.iter().filter(|v| v.generic == Some(true)).count();
    let mut report = ExperimentReport::assemble(seed, verdicts, started);
    report.genericity_fraction = Some(generic as f64 / samples as f64);
    Ok(report)
}

/// Where a pair of heights falls in the two-point analysis of the Euler
/// field on `P(L + O)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PairClass {
    /// Distinct interior heights: the monotone flow balances the pair for
    /// every choice of weights, so it lies in the admissible point set.
    InApWitnessed,
    /// Equal interior heights: balancing and genericity cannot hold
    /// together. Inconclusive; membership is not decided.
    InCalM,
    /// Both points on the zero section or both on the infinity section:
    /// no constant-scalar-curvature representative.
    EndpointCase,
    /// At least one endpoint but not both on the same one. Not covered by
    /// the two-point analysis.
    Unclassified,
}

/// Classify a height pair; heights within `tol` count as equal.
pub fn classify_lebrun_pair(model: &LeBrunProfileModel, zeta1: f64, zeta2: f64, tol: f64) -> Result<PairClass> {
    for z in [zeta1, zeta2] {
        if !(z.is_finite() && z >= model.a_minus() && z <= model.a_plus()) {
            return Err(Error::Domain(format!("height {z} outside [{}, {}]", model.a_minus(), model.a_plus())));
        }
    }
    let at_minus = |z: f64| z - model.a_minus() <= tol;
    let at_plus = |z: f64| model.a_plus() - z <= tol;
    let interior = |z: f64| !at_minus(z) && !at_plus(z);
    Ok(if (at_minus(zeta1) && at_minus(zeta2)) || (at_plus(zeta1) && at_plus(zeta2)) {
        PairClass::EndpointCase
    } else if interior(zeta1) && interior(zeta2) {
        if (zeta1 - zeta2).abs() <= tol {
            PairClass::InCalM
        } else {
            PairClass::InApWitnessed
        }
    } else {
        PairClass::Unclassified
    })
}
