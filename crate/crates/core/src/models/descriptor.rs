use serde::{Deserialize, Serialize};

use super::{LeBrunProfileModel, Profile, ProjectiveTorusModel};
use crate::error::Result;

/// JSON description of a built-in model.
///
/// ```json
/// {"type": "projective_torus", "m": 2}
/// {"type": "lebrun_profile", "a_minus": -1.0, "a_plus": 1.0, "profile": "quadratic"}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelDescriptor {
    ProjectiveTorus {
        m: u32,
    },
    LebrunProfile {
        #[serde(default = "default_a_minus")]
        a_minus: f64,
        #[serde(default = "default_a_plus")]
        a_plus: f64,
        #[serde(default)]
        profile: ProfileKind,
    },
}

fn default_a_minus() -> f64 {
    -1.0
}

fn default_a_plus() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    #[default]
    Quadratic,
    Sine,
}

impl ModelDescriptor {
    pub fn projective(&self) -> Option<Result<ProjectiveTorusModel>> {
        match *self {
            ModelDescriptor::ProjectiveTorus { m } => Some(ProjectiveTorusModel::new(m)),
            _ => None,
        }
    }

    pub fn lebrun(&self) -> Option<Result<LeBrunProfileModel>> {
        match *self {
            ModelDescriptor::LebrunProfile { a_minus, a_plus, profile } => {
                let profile = match profile {
                    ProfileKind::Quadratic => Profile::Quadratic,
                    ProfileKind::Sine => Profile::Sine,
                };
                Some(LeBrunProfileModel::new(a_minus, a_plus, profile))
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_forms() {
        let d: ModelDescriptor = serde_json::from_str(r#"{"type": "projective_torus", "m": 2}"#).unwrap();
        assert_eq!(d, ModelDescriptor::ProjectiveTorus { m: 2 });
        assert!(d.projective().unwrap().is_ok());
        let d: ModelDescriptor = serde_json::from_str(
            r#"{"type": "lebrun_profile", "a_minus": -1.0, "a_plus": 1.0, "profile": "quadratic"}"#,
        )
        .unwrap();
        assert!(d.lebrun().unwrap().is_ok());
        assert!(d.projective().is_none());
    }

    #[test]
    fn rejects_unknown_keys_and_types() {
        assert!(serde_json::from_str::<ModelDescriptor>(r#"{"type": "projective_torus", "m": 2, "x": 1}"#).is_err());
        assert!(serde_json::from_str::<ModelDescriptor>(r#"{"type": "sphere"}"#).is_err());
        assert!(serde_json::from_str::<ModelDescriptor>(r#"{"type": "lebrun_profile", "profile": "cubic"}"#).is_err());
    }
}
