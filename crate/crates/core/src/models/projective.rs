use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use super::{check_flow_dim, Model};
use crate::error::{Error, Result};
use crate::halgebra::{FlowParameter, MomentVector, SymmetryBasis};

/// A point of complex projective space recorded by the squared moduli of
/// its homogeneous coordinates, normalized to sum to one.
///
/// The torus only sees these moduli, so the phases are dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProjectivePoint(Vec<f64>);

impl ProjectivePoint {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::Domain("projective point needs coordinates".into()));
        }
        if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::Domain(format!("squared moduli must be finite and nonnegative: {w:?}")));
        }
        let total: f64 = w.iter().sum();
        if total <= 0.0 {
            return Err(Error::Domain("projective point has no positive coordinate".into()));
        }
        Ok(Self(w.into_iter().map(|x| x / total).collect()))
    }

    /// Coordinate fixed point `e_k` of `P^m`.
    pub fn vertex(m: u32, k: usize) -> Self {
        let mut w = vec![0.0; m as usize + 1];
        w[k] = 1.0;
        Self(w)
    }

    /// Normalized squared moduli `x_k`.
    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for ProjectivePoint {
    type Error = Error;
    fn try_from(w: Vec<f64>) -> Result<Self> {
        Self::new(w)
    }
}

impl From<ProjectivePoint> for Vec<f64> {
    fn from(p: ProjectivePoint) -> Self {
        p.0
    }
}

/// `P^m` with the diagonal action of the maximal torus `(S^1)^(m+1)`.
///
/// The diagonal circle acts trivially; its direction `(1, ..., 1)` is kept
/// in the coordinates and reported by [`Model::trivial_directions`].
/// Normalized Hamiltonians are `x_k - 1/(m+1)`, which integrate to zero
/// against the Fubini-Study volume. Flows scale squared moduli by
/// `exp(2 s_k)`, so `kappa = 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveTorusModel {
    m: u32,
}

impl ProjectiveTorusModel {
    pub fn new(m: u32) -> Result<Self> {
        if m < 1 {
            return Err(Error::Domain("projective dimension must be >= 1".into()));
        }
        Ok(Self { m })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    fn d(&self) -> usize {
        self.m as usize + 1
    }

    /// `max_k(2 s_k + log w_k)` and the shifted logits; `None` marks a zero
    /// coordinate, which no flow can make positive.
    fn logits(&self, p: &ProjectivePoint, s: &FlowParameter) -> (f64, Vec<Option<f64>>) {
        let logits: Vec<Option<f64>> =
            p.0.iter().zip(s.as_slice()).map(|(&w, &sk)| (w > 0.0).then(|| 2.0 * sk + w.ln())).collect();
        let shift = logits.iter().flatten().cloned().fold(f64::NEG_INFINITY, f64::max);
        (shift, logits)
    }
}

impl Model for ProjectiveTorusModel {
    type Point = ProjectivePoint;

    fn algebra_dim(&self) -> usize {
        self.d()
    }

    fn point_dim(&self) -> usize {
        self.d()
    }

    fn basis(&self) -> SymmetryBasis {
        SymmetryBasis::indexed("rot", self.d()).expect("d >= 2")
    }

    fn kappa(&self) -> f64 {
        2.0
    }

    fn validate_point(&self, p: &ProjectivePoint) -> Result<()> {
        if p.0.len() != self.d() {
            return Err(Error::Domain(format!(
                "point of P^{} needs {} coordinates, got {}",
                self.m,
                self.d(),
                p.0.len()
            )));
        }
        Ok(())
    }

    fn moment_at(&self, p: &ProjectivePoint) -> Result<MomentVector> {
        self.validate_point(p)?;
        let offset = 1.0 / self.d() as f64;
        MomentVector::new(p.0.iter().map(|x| x - offset).collect())
    }

    fn gram_at(&self, p: &ProjectivePoint) -> Result<DMatrix<f64>> {
        self.validate_point(p)?;
        let x = DVector::from_column_slice(&p.0);
        Ok(DMatrix::from_diagonal(&x) - &x * x.transpose())
    }

    fn flow(&self, p: &ProjectivePoint, s: &FlowParameter) -> Result<ProjectivePoint> {
        self.validate_point(p)?;
        check_flow_dim(self, s)?;
        // constant parameters act trivially
        if s.as_slice().iter().all(|&x| x == s[0]) {
            return Ok(p.clone());
        }
        let (shift, logits) = self.logits(p, s);
        let e: Vec<f64> = logits.iter().map(|l| l.map_or(0.0, |l| (l - shift).exp())).collect();
        let total: f64 = e.iter().sum();
        Ok(ProjectivePoint(e.into_iter().map(|x| x / total).collect()))
    }

    fn point_eq(&self, a: &ProjectivePoint, b: &ProjectivePoint, tol: f64) -> bool {
        a.0.len() == b.0.len() && a.0.iter().zip(&b.0).all(|(x, y)| (x - y).abs() <= tol)
    }

    /// `(1/2) log sum_k w_k exp(2 s_k) - sum_k s_k / (m+1)`, evaluated with
    /// the maximal logit subtracted before exponentiating.
    fn kempf_ness_at(&self, p: &ProjectivePoint, s: &FlowParameter) -> Result<f64> {
        self.validate_point(p)?;
        check_flow_dim(self, s)?;
        let (shift, logits) = self.logits(p, s);
        let sum: f64 = logits.iter().flatten().map(|l| (l - shift).exp()).sum();
        let lse = shift + sum.ln();
        let mean_s = s.as_slice().iter().sum::<f64>() / self.d() as f64;
        Ok(0.5 * lse - mean_s)
    }

    fn trivial_directions(&self) -> Vec<DVector<f64>> {
        vec![DVector::from_element(self.d(), 1.0)]
    }

    /// Flat Dirichlet on the simplex of squared moduli, which is the
    /// pushforward of the Fubini-Study volume.
    fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R, _label: usize) -> ProjectivePoint {
        loop {
            let w: Vec<f64> = (0..self.d()).map(|_| Exp1.sample(&mut *rng)).collect();
            if let Ok(p) = ProjectivePoint::new(w) {
                return p;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pt(w: &[f64]) -> ProjectivePoint {
        ProjectivePoint::new(w.to_vec()).unwrap()
    }

    #[test]
    fn moment_examples() {
        let model = ProjectiveTorusModel::new(2).unwrap();
        let v = model.moment_at(&pt(&[1.0, 0.0, 0.0])).unwrap();
        assert_abs_diff_eq!(v[0], 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v[1], -1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v[2], -1.0 / 3.0, epsilon = 1e-15);
        let v = model.moment_at(&pt(&[1.0, 1.0, 1.0])).unwrap();
        assert!(v.norm() < 1e-15);
        assert!(model.moment_at(&pt(&[1.0, 1.0])).is_err());
    }

    #[test]
    fn gram_examples() {
        let model = ProjectiveTorusModel::new(2).unwrap();
        let g = model.gram_at(&ProjectivePoint::vertex(2, 0)).unwrap();
        assert_eq!(g, DMatrix::zeros(3, 3));

        let g = model.gram_at(&pt(&[1.0, 1.0, 1.0])).unwrap();
        // x_j delta_jk - x_j x_k entry by entry
        let x = 1.0 / 3.0;
        for j in 0..3 {
            for k in 0..3 {
                let expect = if j == k { x - x * x } else { -x * x };
                assert_abs_diff_eq!(g[(j, k)], expect, epsilon = 1e-15);
            }
            assert_abs_diff_eq!(g.row(j).sum(), 0.0, epsilon = 1e-15);
        }
        let expect = DMatrix::identity(3, 3) / 3.0 - DMatrix::from_element(3, 3, 1.0 / 9.0);
        assert_abs_diff_eq!(g, expect, epsilon = 1e-15);
        assert!(crate::linalg::min_eigenvalue(&g) > -1e-15);
    }

    #[test]
    fn flow_examples() {
        let model = ProjectiveTorusModel::new(2).unwrap();
        let p = pt(&[0.2, 0.5, 0.3]);
        assert_eq!(model.flow(&p, &FlowParameter::zeros(3)).unwrap(), p);

        let s = FlowParameter::new(vec![2f64.ln() / 2.0, 0.0, 0.0]).unwrap();
        let q = model.flow(&pt(&[1.0, 1.0, 1.0]), &s).unwrap();
        // direct softmax: (2/3, 1/3, 1/3) / (4/3)
        let expect = [0.5, 0.25, 0.25];
        for (a, b) in q.coords().iter().zip(expect) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn flow_ignores_constants_and_zero_coords() {
        let model = ProjectiveTorusModel::new(2).unwrap();
        let p = pt(&[0.0, 0.4, 0.6]);
        let s = FlowParameter::new(vec![3.0, -0.2, 0.7]).unwrap();
        let s_shift = FlowParameter::new(vec![3.0 + 5.0, -0.2 + 5.0, 0.7 + 5.0]).unwrap();
        let a = model.flow(&p, &s).unwrap();
        let b = model.flow(&p, &s_shift).unwrap();
        assert!(model.point_eq(&a, &b, 1e-14));
        assert_eq!(a.coords()[0], 0.0);
    }

    #[test]
    fn flow_survives_large_parameters() {
        let model = ProjectiveTorusModel::new(2).unwrap();
        let p = pt(&[0.3, 0.3, 0.4]);
        let s = FlowParameter::new(vec![400.0, -400.0, 0.0]).unwrap();
        let q = model.flow(&p, &s).unwrap();
        assert_abs_diff_eq!(q.coords()[0], 1.0, epsilon = 1e-15);
        let f = model.kempf_ness_at(&p, &s).unwrap();
        assert!(f.is_finite());
        // dominated by the first logit: (1/2)(800 + log 0.3)
        assert_abs_diff_eq!(f, 0.5 * (800.0 + 0.3f64.ln()), epsilon = 1e-9);
    }

    #[test]
    fn kempf_ness_vanishes_at_origin() {
        let model = ProjectiveTorusModel::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let p = model.sample_point(&mut rng, 0);
            let f = model.kempf_ness_at(&p, &FlowParameter::zeros(4)).unwrap();
            assert!(f.abs() < 1e-15, "{f}");
        }
    }

    #[test]
    fn rejects_invalid_points() {
        assert!(ProjectivePoint::new(vec![0.0, 0.0]).is_err());
        assert!(ProjectivePoint::new(vec![1.0, -0.1]).is_err());
        assert!(ProjectivePoint::new(vec![1.0, f64::NAN]).is_err());
        let model = ProjectiveTorusModel::new(2).unwrap();
        assert!(model.flow(&pt(&[1.0, 1.0, 1.0]), &FlowParameter::zeros(2)).is_err());
    }
}
