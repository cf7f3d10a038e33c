use std::time::Duration;

use balpoint::explorer::ExperimentReport;
use balpoint::{
    bisect_two_points, certify_weight_openness, check_conditions, classify_lebrun_pair, sample_point_density,
    section3_target_heights, solve_balance, Error, Model, SolveStatus,
};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::document::{BuiltModel, InputError, LoadedDocument, Settings};
use crate::output::{to_json, Envelope};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CONDITION: i32 = 2;
pub const EXIT_UNSTABLE: i32 = 3;
pub const EXIT_INCOMPLETE: i32 = 4;

pub fn solve_exit_code(status: SolveStatus) -> i32 {
    match status {
        SolveStatus::Balanced => EXIT_OK,
        SolveStatus::DivergedUnstable => EXIT_UNSTABLE,
        SolveStatus::SingularJacobian | SolveStatus::MaxIter => EXIT_INCOMPLETE,
    }
}

/// What a command produced: the JSON document, its exit code, and for
/// experiments the full report (for CSV traces and timing).
pub struct Outcome {
    pub json: String,
    pub exit: i32,
    pub experiment: Option<ExperimentReport>,
}

impl Outcome {
    fn new<T: Serialize>(command: &str, doc: &LoadedDocument, report: T, exit: i32) -> Self {
        Self { json: to_json(&Envelope::new(command, &doc.sha256, report)), exit, experiment: None }
    }

    pub fn wall_clock(&self) -> Option<Duration> {
        self.experiment.as_ref().map(|r| r.wall_clock)
    }
}

#[derive(Serialize)]
struct PreconditionFailure<T: Serialize> {
    status: &'static str,
    message: String,
    conditions: T,
}

pub fn check(doc: &LoadedDocument, settings: &Settings) -> Result<Outcome, InputError> {
    fn run<M: Model>(m: &M, doc: &LoadedDocument, s: &Settings) -> Result<Outcome, InputError>
    where
        M::Point: DeserializeOwned,
    {
        let cfg = doc.configuration(m)?;
        let report = check_conditions(m, &cfg, &s.solve)?;
        let exit = if report.all_hold() { EXIT_OK } else { EXIT_CONDITION };
        Ok(Outcome::new("check", doc, report, exit))
    }
    match doc.model()? {
        BuiltModel::Projective(m) => run(&m, doc, settings),
        BuiltModel::LeBrun(m) => run(&m, doc, settings),
    }
}

pub fn solve(doc: &LoadedDocument, settings: &Settings) -> Result<Outcome, InputError> {
    fn run<M: Model>(m: &M, doc: &LoadedDocument, s: &Settings) -> Result<Outcome, InputError>
    where
        M::Point: DeserializeOwned,
    {
        let cfg = doc.configuration(m)?;
        let report = solve_balance(m, &cfg, &s.solve)?;
        let exit = solve_exit_code(report.status);
        Ok(Outcome::new("solve", doc, report, exit))
    }
    match doc.model()? {
        BuiltModel::Projective(m) => run(&m, doc, settings),
        BuiltModel::LeBrun(m) => run(&m, doc, settings),
    }
}

fn lebrun(doc: &LoadedDocument, command: &str) -> Result<balpoint::LeBrunProfileModel, InputError> {
    match doc.model()? {
        BuiltModel::LeBrun(m) => Ok(m),
        BuiltModel::Projective(_) => Err(InputError(format!("{command} needs a lebrun_profile model"))),
    }
}

fn weight_pair(doc: &LoadedDocument) -> Result<(f64, f64), InputError> {
    match doc.doc.weights.as_slice() {
        &[a1, a2] => Ok((a1, a2)),
        w => Err(InputError(format!("expected exactly two weights, got {}", w.len()))),
    }
}

fn height_pair(doc: &LoadedDocument) -> Result<(f64, f64), InputError> {
    match doc.lebrun_heights()?.as_slice() {
        &[z1, z2] => Ok((z1, z2)),
        h => Err(InputError(format!("expected exactly two points, got {}", h.len()))),
    }
}

#[derive(Serialize)]
struct HeightsReport {
    zeta1: f64,
    zeta2: f64,
    /// `c1 zeta1 + c2 zeta2`
    residual: f64,
}

pub fn heights(doc: &LoadedDocument, _settings: &Settings) -> Result<Outcome, InputError> {
    let model = lebrun(doc, "heights")?;
    let (a1, a2) = weight_pair(doc)?;
    let m = doc.complex_dim()?;
    let (zeta1, zeta2) = section3_target_heights(model.a_minus(), model.a_plus(), a1, a2, m)?;
    let e = (m - 1) as i32;
    let residual = a1.powi(e) * zeta1 + a2.powi(e) * zeta2;
    Ok(Outcome::new("heights", doc, HeightsReport { zeta1, zeta2, residual }, EXIT_OK))
}

pub fn bisect(doc: &LoadedDocument, settings: &Settings) -> Result<Outcome, InputError> {
    let model = lebrun(doc, "bisect")?;
    let (a1, a2) = weight_pair(doc)?;
    let (z1, z2) = height_pair(doc)?;
    let report = bisect_two_points(&model, z1, z2, a1, a2, doc.complex_dim()?, &settings.solve)?;
    let exit = solve_exit_code(report.status);
    Ok(Outcome::new("bisect", doc, report, exit))
}

#[derive(Serialize)]
struct ClassifyReport {
    classification: balpoint::PairClass,
    zeta1: f64,
    zeta2: f64,
}

pub fn classify(doc: &LoadedDocument, _settings: &Settings) -> Result<Outcome, InputError> {
    let model = lebrun(doc, "classify")?;
    let (zeta1, zeta2) = height_pair(doc)?;
    let classification = classify_lebrun_pair(&model, zeta1, zeta2, balpoint::halgebra::DEFAULT_POINT_TOL)?;
    Ok(Outcome::new("classify", doc, ClassifyReport { classification, zeta1, zeta2 }, EXIT_OK))
}

pub fn certify(doc: &LoadedDocument, settings: &Settings) -> Result<Outcome, InputError> {
    fn run<M: Model>(m: &M, doc: &LoadedDocument, s: &Settings) -> Result<Outcome, InputError>
    where
        M::Point: DeserializeOwned,
    {
        let cfg = doc.configuration(m)?;
        match certify_weight_openness(m, &cfg, s.radius, s.grid, &s.solve) {
            Ok(report) => {
                let exit = if report.successes == report.samples { EXIT_OK } else { EXIT_UNSTABLE };
                let mut out = Outcome::new("certify", doc, &report, exit);
                out.experiment = Some(report);
                Ok(out)
            }
            Err(Error::Precondition(message)) => {
                let conditions = check_conditions(m, &cfg, &s.solve)?;
                let report = PreconditionFailure { status: "PRECONDITION_FAILED", message, conditions };
                Ok(Outcome::new("certify", doc, report, EXIT_CONDITION))
            }
            Err(e) => Err(e.into()),
        }
    }
    match doc.model()? {
        BuiltModel::Projective(m) => run(&m, doc, settings),
        BuiltModel::LeBrun(m) => run(&m, doc, settings),
    }
}

pub fn sample(doc: &LoadedDocument, settings: &Settings) -> Result<Outcome, InputError> {
    fn run<M: Model>(m: &M, doc: &LoadedDocument, s: &Settings) -> Result<Outcome, InputError> {
        let report = sample_point_density(m, doc.complex_dim()?, &doc.doc.weights, s.samples, s.seed, &s.solve)?;
        let mut out = Outcome::new("sample", doc, &report, EXIT_OK);
        out.experiment = Some(report);
        Ok(out)
    }
    match doc.model()? {
        BuiltModel::Projective(m) => run(&m, doc, settings),
        BuiltModel::LeBrun(m) => run(&m, doc, settings),
    }
}
