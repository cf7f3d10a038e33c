//! Input documents: one JSON object per run.
//!
//! ```json
//! {
//!   "model": {"type": "lebrun_profile", "a_minus": -1.0, "a_plus": 1.0},
//!   "points": [-0.5, 0.2],
//!   "weights": [1.0, 1.0],
//!   "m": 2,
//!   "options": {"tol_res": 1e-10}
//! }
//! ```

use std::fmt;

use balpoint::{
    Configuration, LeBrunPoint, LeBrunProfileModel, ModelDescriptor, ProjectivePoint, ProjectiveTorusModel,
    SolveOptions,
};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use sha2::{Digest, Sha256};

/// Anything wrong with the input; maps to exit code 1.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<balpoint::Error> for InputError {
    fn from(e: balpoint::Error) -> Self {
        InputError(e.to_string())
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocumentOptions {
    pub tol_res: Option<f64>,
    pub tol_pd: Option<f64>,
    pub tol_rank: Option<f64>,
    pub max_iter: Option<usize>,
    pub divergence_bound: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub radius: Option<f64>,
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigDocument {
    pub model: ModelDescriptor,
    #[serde(default)]
    pub points: Option<serde_json::Value>,
    #[serde(default)]
    pub weights: Vec<f64>,
    #[serde(default)]
    pub m: Option<u32>,
    #[serde(default)]
    pub options: DocumentOptions,
}

/// A parsed document together with the SHA-256 of its raw bytes.
#[derive(Debug, Clone)]
pub struct LoadedDocument {
    pub doc: RunConfigDocument,
    pub sha256: String,
}

pub enum BuiltModel {
    Projective(ProjectiveTorusModel),
    LeBrun(LeBrunProfileModel),
}

impl LoadedDocument {
    pub fn parse(source: &str, bytes: &[u8]) -> Result<Self, InputError> {
        let text = std::str::from_utf8(bytes).map_err(|e| InputError(format!("{source}: not UTF-8: {e}")))?;
        let doc: RunConfigDocument = serde_json::from_str(text)
            .map_err(|e| InputError(format!("{source}:{}:{}: {}", e.line(), e.column(), e)))?;
        let sha256 = hex::encode(Sha256::digest(bytes));
        Ok(Self { doc, sha256 })
    }

    pub fn read(path: &str) -> Result<Self, InputError> {
        let bytes = std::fs::read(path).map_err(|e| InputError(format!("{path}: {e}")))?;
        Self::parse(path, &bytes)
    }

    pub fn model(&self) -> Result<BuiltModel, InputError> {
        if let Some(m) = self.doc.model.projective() {
            return Ok(BuiltModel::Projective(m?));
        }
        if let Some(m) = self.doc.model.lebrun() {
            return Ok(BuiltModel::LeBrun(m?));
        }
        unreachable!("every descriptor builds one of the two models")
    }

    /// Complex dimension: the model's own for projective space (a
    /// mismatching `m` is an error), `m` or 2 for the ruled surface.
    pub fn complex_dim(&self) -> Result<u32, InputError> {
        match (&self.doc.model, self.doc.m) {
            (ModelDescriptor::ProjectiveTorus { m }, Some(doc_m)) if *m != doc_m => {
                Err(InputError(format!("document m = {doc_m} does not match the projective model's m = {m}")))
            }
            (ModelDescriptor::ProjectiveTorus { m }, _) => Ok(*m),
            (_, Some(m)) => Ok(m),
            (_, None) => Ok(2),
        }
    }

    pub fn points<P: DeserializeOwned>(&self) -> Result<Vec<P>, InputError> {
        let value = self.doc.points.clone().ok_or_else(|| InputError("document has no \"points\"".into()))?;
        serde_json::from_value(value).map_err(|e| InputError(format!("points: {e}")))
    }

    pub fn configuration<M>(&self, model: &M) -> Result<Configuration<M::Point>, InputError>
    where
        M: balpoint::Model,
        M::Point: DeserializeOwned,
    {
        let points = self.points::<M::Point>()?;
        Ok(Configuration::new(model, self.complex_dim()?, points, self.doc.weights.clone())?)
    }

    pub fn lebrun_heights(&self) -> Result<Vec<f64>, InputError> {
        Ok(self.points::<LeBrunPoint>()?.into_iter().map(|p| p.height).collect())
    }

    pub fn projective_points(&self) -> Result<Vec<ProjectivePoint>, InputError> {
        self.points()
    }
}

/// Command-line overrides, applied on top of the document's options.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub tol_res: Option<f64>,
    pub tol_pd: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub radius: Option<f64>,
    pub grid: Option<usize>,
}

/// Effective settings after merging defaults, document and flags.
#[derive(Debug, Clone)]
pub struct Settings {
    pub solve: SolveOptions,
    pub seed: u64,
    pub samples: usize,
    pub radius: f64,
    pub grid: usize,
}

impl Settings {
    pub fn resolve(doc: &DocumentOptions, flags: &Overrides) -> Result<Self, InputError> {
        let d = SolveOptions::default();
        let solve = SolveOptions {
            tol_res: flags.tol_res.or(doc.tol_res).unwrap_or(d.tol_res),
            tol_pd: flags.tol_pd.or(doc.tol_pd).unwrap_or(d.tol_pd),
            tol_rank: doc.tol_rank.unwrap_or(d.tol_rank),
            max_iter: doc.max_iter.unwrap_or(d.max_iter),
            divergence_bound: doc.divergence_bound.unwrap_or(d.divergence_bound),
        };
        for (name, v) in [
            ("tol_res", solve.tol_res),
            ("tol_pd", solve.tol_pd),
            ("tol_rank", solve.tol_rank),
            ("divergence_bound", solve.divergence_bound),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(InputError(format!("{name} must be a nonnegative number, got {v}")));
            }
        }
        Ok(Self {
            solve,
            seed: flags.seed.or(doc.seed).unwrap_or(42),
            samples: flags.samples.or(doc.samples).unwrap_or(1000),
            radius: flags.radius.or(doc.radius).unwrap_or(0.1),
            grid: flags.grid.or(doc.grid).unwrap_or(9),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_named() {
        let err = LoadedDocument::parse("doc", br#"{"model": {"type": "projective_torus", "m": 2}, "pointz": []}"#)
            .unwrap_err();
        assert!(err.0.contains("pointz"), "{}", err.0);
        let err = LoadedDocument::parse(
            "doc",
            br#"{"model": {"type": "projective_torus", "m": 2}, "options": {"speed": 1}}"#,
        )
        .unwrap_err();
        assert!(err.0.contains("speed"), "{}", err.0);
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = LoadedDocument::parse("doc.json", b"{\n  \"model\": {\"type\": ").unwrap_err();
        assert!(err.0.starts_with("doc.json:2:"), "{}", err.0);
    }

    #[test]
    fn projective_dimension_must_agree() {
        let d = LoadedDocument::parse("d", br#"{"model": {"type": "projective_torus", "m": 2}, "m": 3}"#).unwrap();
        assert!(d.complex_dim().is_err());
        let d = LoadedDocument::parse("d", br#"{"model": {"type": "projective_torus", "m": 2}}"#).unwrap();
        assert_eq!(d.complex_dim().unwrap(), 2);
    }

    #[test]
    fn flags_override_document() {
        let doc = DocumentOptions { seed: Some(1), tol_res: Some(1e-6), ..Default::default() };
        let s = Settings::resolve(&doc, &Overrides { seed: Some(7), ..Default::default() }).unwrap();
        assert_eq!(s.seed, 7);
        assert_eq!(s.solve.tol_res, 1e-6);
        assert_eq!(s.grid, 9);
    }
}
