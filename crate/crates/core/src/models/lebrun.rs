use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_flow_dim, Model};
use crate::error::{Error, Result};
use crate::halgebra::{FlowParameter, MomentVector, SymmetryBasis};

/// Relative RK4 time step for profiles without a closed-form flow.
pub const RK4_RELATIVE_STEP: f64 = 1e-3;

/// Height profile `psi(zeta) = omega(Xi, conj Xi)` restricted to a fiber.
///
/// Every profile vanishes at both endpoints and is positive in between.
#[derive(Clone)]
pub enum Profile {
    /// `(zeta - a_minus)(a_plus - zeta) / 2`; on `[-1, 1]` this is
    /// `(1 - zeta^2) / 2` and the flow is `tanh((t + c) / 2)`.
    Quadratic,
    /// `(L / 2 pi) sin(pi (zeta - a_minus) / L)` with `L = a_plus - a_minus`.
    /// Integrated numerically.
    Sine,
    /// Any user profile. Integrated numerically.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Quadratic => f.write_str("Quadratic"),
            Profile::Sine => f.write_str("Sine"),
            Profile::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// A point of the ruled surface, reduced to its moment height. The base
/// label stands for the position on the base curve and the fiber angle,
/// which the balancing analysis never reads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "LeBrunPointRepr")]
pub struct LeBrunPoint {
    pub height: f64,
    #[serde(default)]
    pub base: String,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum LeBrunPointRepr {
    Height(f64),
    #[serde(rename_all = "snake_case")]
    Full {
        height: f64,
        #[serde(default)]
        base: String,
    },
}

impl From<LeBrunPointRepr> for LeBrunPoint {
    fn from(r: LeBrunPointRepr) -> Self {
        match r {
            LeBrunPointRepr::Height(height) => LeBrunPoint { height, base: String::new() },
            LeBrunPointRepr::Full { height, base } => LeBrunPoint { height, base },
        }
    }
}

impl LeBrunPoint {
    pub fn new(height: f64) -> Self {
        Self { height, base: String::new() }
    }

    pub fn with_base(height: f64, base: impl Into<String>) -> Self {
        Self { height, base: base.into() }
    }
}

/// Momentum-construction model of `P(L + O)` over a curve: one surviving
/// holomorphic field (the Euler field), `d = 1`, heights in
/// `[a_minus, a_plus]` with `a_minus < 0 < a_plus`.
///
/// The zero and infinity sections sit at the two endpoints, where the
/// field vanishes. The moment map is the height itself and the flow solves
/// `d zeta / dt = psi(zeta)`, so `kappa = 1`.
#[derive(Debug, Clone)]
pub struct LeBrunProfileModel {
    a_minus: f64,
    a_plus: f64,
    profile: Profile,
}

impl Default for LeBrunProfileModel {
    fn default() -> Self {
        Self { a_minus: -1.0, a_plus: 1.0, profile: Profile::Quadratic }
    }
}

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

impl LeBrunProfileModel {
    pub fn new(a_minus: f64, a_plus: f64, profile: Profile) -> Result<Self> {
        if !(a_minus.is_finite() && a_plus.is_finite() && a_minus < 0.0 && a_plus > 0.0) {
            return Err(Error::Domain(format!("need a_minus < 0 < a_plus, got [{a_minus}, {a_plus}]")));
        }
        let model = Self { a_minus, a_plus, profile };
        if let Profile::Custom(psi) = &model.profile {
            let len = a_plus - a_minus;
            let scale = (0..=64).map(|i| psi(a_minus + len * i as f64 / 64.0).abs()).fold(0.0, f64::max).max(1.0);
            if psi(a_minus).abs() > 1e-12 * scale || psi(a_plus).abs() > 1e-12 * scale {
                return Err(Error::Domain("profile must vanish at both endpoints".into()));
            }
            for i in 1..256 {
                let z = a_minus + len * i as f64 / 256.0;
                let v = psi(z);
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::Domain(format!("profile must be positive inside the interval; psi({z}) = {v}")));
                }
            }
        }
        Ok(model)
    }

    pub fn a_minus(&self) -> f64 {
        self.a_minus
    }

    pub fn a_plus(&self) -> f64 {
        self.a_plus
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    fn len(&self) -> f64 {
        self.a_plus - self.a_minus
    }

    pub fn psi(&self, zeta: f64) -> f64 {
        let u = zeta - self.a_minus;
        let v = self.a_plus - zeta;
        if u <= 0.0 || v <= 0.0 {
            return 0.0;
        }
        match &self.profile {
            Profile::Quadratic => 0.5 * u * v,
            Profile::Sine => {
                let l = self.len();
                l / (2.0 * std::f64::consts::PI) * (std::f64::consts::PI * u / l).sin()
            }
            Profile::Custom(psi) => psi(zeta).max(0.0),
        }
    }

    pub fn is_endpoint(&self, zeta: f64) -> bool {
        zeta <= self.a_minus || zeta >= self.a_plus
    }

    /// Height after flowing for time `t`, together with the integral of the
    /// height along the way (the Kempf-Ness potential).
    pub fn flow_height(&self, zeta0: f64, t: f64) -> (f64, f64) {
        if self.is_endpoint(zeta0) {
            return (zeta0, zeta0 * t);
        }
        if t == 0.0 {
            return (zeta0, 0.0);
        }
        match self.profile {
            Profile::Quadratic => self.flow_quadratic(zeta0, t),
            _ => self.flow_rk4(zeta0, t),
        }
    }

    // zeta(t) = a_minus + L sigmoid(L t / 2 + b), b = logit of the relative height
    fn flow_quadratic(&self, zeta0: f64, t: f64) -> (f64, f64) {
        let l = self.len();
        let b = (zeta0 - self.a_minus).ln() - (self.a_plus - zeta0).ln();
        let x = 0.5 * l * t + b;
        let zeta = if x >= 0.0 { self.a_plus - l * sigmoid(-x) } else { self.a_minus + l * sigmoid(x) };
        let potential = self.a_minus * t + 2.0 * (softplus(x) - softplus(b));
        (zeta.clamp(self.a_minus, self.a_plus), potential)
    }

    fn flow_rk4(&self, zeta0: f64, t: f64) -> (f64, f64) {
        let h_max = RK4_RELATIVE_STEP * self.len();
        let steps = (t.abs() / h_max).ceil().max(1.0) as usize;
        let h = t / steps as f64;
        let rhs = |z: f64| self.psi(z.clamp(self.a_minus, self.a_plus));
        let (mut z, mut f) = (zeta0, 0.0);
        for _ in 0..steps {
            let k1 = rhs(z);
            let k2 = rhs(z + 0.5 * h * k1);
            let k3 = rhs(z + 0.5 * h * k2);
            let k4 = rhs(z + h * k3);
            // dF/dt = zeta; its stages are the intermediate heights
            f += h / 6.0 * (z + 2.0 * (z + 0.5 * h * k1) + 2.0 * (z + 0.5 * h * k2) + (z + h * k3));
            z = (z + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)).clamp(self.a_minus, self.a_plus);
        }
        (z, f)
    }
}

impl Model for LeBrunProfileModel {
    type Point = LeBrunPoint;

    fn algebra_dim(&self) -> usize {
        1
    }

    fn point_dim(&self) -> usize {
        1
    }

    fn basis(&self) -> SymmetryBasis {
        SymmetryBasis::new(vec!["euler".into()]).expect("one label")
    }

    fn kappa(&self) -> f64 {
        1.0
    }

    fn validate_point(&self, p: &LeBrunPoint) -> Result<()> {
        if !p.height.is_finite() || p.height < self.a_minus || p.height > self.a_plus {
            return Err(Error::Domain(format!("height {} outside [{}, {}]", p.height, self.a_minus, self.a_plus)));
        }
        Ok(())
    }

    fn moment_at(&self, p: &LeBrunPoint) -> Result<MomentVector> {
        self.validate_point(p)?;
        MomentVector::new(vec![p.height])
    }

    fn gram_at(&self, p: &LeBrunPoint) -> Result<DMatrix<f64>> {
        self.validate_point(p)?;
        Ok(DMatrix::from_element(1, 1, self.psi(p.height)))
    }

    fn flow(&self, p: &LeBrunPoint, s: &FlowParameter) -> Result<LeBrunPoint> {
        self.validate_point(p)?;
        check_flow_dim(self, s)?;
        let (height, _) = self.flow_height(p.height, s[0]);
        Ok(LeBrunPoint { height, base: p.base.clone() })
    }

    fn point_eq(&self, a: &LeBrunPoint, b: &LeBrunPoint, tol: f64) -> bool {
        a.base == b.base && (a.height - b.height).abs() <= tol
    }

    fn kempf_ness_at(&self, p: &LeBrunPoint, s: &FlowParameter) -> Result<f64> {
        self.validate_point(p)?;
        check_flow_dim(self, s)?;
        Ok(self.flow_height(p.height, s[0]).1)
    }

    /// Uniform heights on the open interval shrunk by `1e-3 * L` at both
    /// ends; the base label is `p<label>`.
    fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R, label: usize) -> LeBrunPoint {
        let margin = 1e-3 * self.len();
        let h = rng.random_range((self.a_minus + margin)..(self.a_plus - margin));
        LeBrunPoint::with_base(h, format!("p{label}"))
    }
}
