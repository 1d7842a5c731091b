//! Closed, pointed, generating cones: polyhedral (rays + facets) or Lorentz.

use crate::dd::extreme_rays;
use crate::error::{check_dim, Error, Result};
use crate::linalg::rank_of;
use crate::scalar::{dot, Arithmetic, Scalar, DEFAULT_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeKind {
    Polyhedral,
    Lorentz,
}

#[derive(Clone, Debug, PartialEq)]
enum Shape<S> {
    Polyhedral { generators: Vec<Vec<S>>, facets: Vec<Vec<S>> },
    /// `x_last >= ‖(x_1, …, x_{dim-1})‖₂`.
    Lorentz,
}

/// A cone together with the tolerance its predicates use in float mode.
///
/// Polyhedral cones always carry both descriptions: `generators` are the
/// extreme rays and `facets` the irredundant inequalities `⟨f, x⟩ >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeRep<S> {
    dim: usize,
    shape: Shape<S>,
    tol: f64,
}

impl<S: Scalar> ConeRep<S> {
    /// Conic hull of `generators`. Non-extreme and duplicate generators are
    /// dropped; the survivors keep their input order and scaling.
    pub fn from_generators(generators: Vec<Vec<S>>) -> Result<Self> {
        Self::from_generators_tol(generators, DEFAULT_TOL)
    }

    pub fn from_generators_tol(generators: Vec<Vec<S>>, tol: f64) -> Result<Self> {
        let dim = ambient_dim(&generators)?;
        let rank = rank_of(&generators, tol);
        if rank < dim {
            return Err(Error::NotGenerating { rank, dim });
        }
        let facets = extreme_rays(&generators, dim, tol)?;
        if rank_of(&facets, tol) < dim {
            return Err(Error::NotPointed);
        }
        let generators = irredundant(&generators, &facets, dim, tol);
        Ok(ConeRep { dim, shape: Shape::Polyhedral { generators, facets }, tol })
    }

    /// Cone cut out by `facets` (each `⟨f, x⟩ >= 0`).
    pub fn from_facets(facets: Vec<Vec<S>>) -> Result<Self> {
        Self::from_facets_tol(facets, DEFAULT_TOL)
    }

    pub fn from_facets_tol(facets: Vec<Vec<S>>, tol: f64) -> Result<Self> {
        let dim = ambient_dim(&facets)?;
        let generators = extreme_rays(&facets, dim, tol)?;
        let rank = rank_of(&generators, tol);
        if rank < dim {
            return Err(Error::NotGenerating { rank, dim });
        }
        let facets = irredundant(&facets, &generators, dim, tol);
        Ok(ConeRep { dim, shape: Shape::Polyhedral { generators, facets }, tol })
    }

    /// Both descriptions supplied; they are checked against each other rather
    /// than recomputed.
    pub fn from_parts(generators: Vec<Vec<S>>, facets: Vec<Vec<S>>, tol: f64) -> Result<Self> {
        let dim = ambient_dim(&generators)?;
        for f in &facets {
            check_dim(dim, f.len())?;
        }
        let rank = rank_of(&generators, tol);
        if rank < dim {
            return Err(Error::NotGenerating { rank, dim });
        }
        if rank_of(&facets, tol) < dim {
            return Err(Error::NotPointed);
        }
        for g in &generators {
            if facets.iter().any(|f| !dot(f, g).is_nonneg(tol)) {
                return Err(Error::Inconsistent("a generator violates a facet".into()));
            }
            if !is_extreme(g, &facets, dim, tol) {
                return Err(Error::Inconsistent("a generator is not an extreme ray".into()));
            }
        }
        for f in &facets {
            if !is_extreme(f, &generators, dim, tol) {
                return Err(Error::Inconsistent("a facet is redundant or not supporting".into()));
            }
        }
        let cone = ConeRep { dim, shape: Shape::Polyhedral { generators, facets }, tol };
        // Every extreme ray cut out by the facets must be among the generators.
        let rays = extreme_rays(cone.facets()?, dim, tol)?;
        if rays.iter().any(|r| cone.find_generator(r).is_none()) {
            return Err(Error::Inconsistent("facets admit extreme rays missing from the generators".into()));
        }
        Ok(cone)
    }

    pub fn lorentz(dim: usize) -> Result<Self> {
        Self::lorentz_tol(dim, DEFAULT_TOL)
    }

    pub fn lorentz_tol(dim: usize, tol: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Invalid("a Lorentz cone needs dimension at least 2".into()));
        }
        Ok(ConeRep { dim, shape: Shape::Lorentz, tol })
    }

    /// Nonnegative orthant of `R^n`.
    pub fn orthant(n: usize) -> Result<Self> {
        let gens = (0..n)
            .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
            .collect::<Vec<Vec<S>>>();
        Ok(ConeRep {
            dim: n,
            shape: Shape::Polyhedral { generators: gens.clone(), facets: gens },
            tol: DEFAULT_TOL,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn arithmetic(&self) -> Arithmetic {
        S::ARITHMETIC
    }

    pub fn kind(&self) -> ConeKind {
        match self.shape {
            Shape::Polyhedral { .. } => ConeKind::Polyhedral,
            Shape::Lorentz => ConeKind::Lorentz,
        }
    }

    pub fn is_polyhedral(&self) -> bool {
        self.kind() == ConeKind::Polyhedral
    }

    pub fn generators(&self) -> Result<&[Vec<S>]> {
        match &self.shape {
            Shape::Polyhedral { generators, .. } => Ok(generators),
            Shape::Lorentz => Err(lorentz_unsupported("generator enumeration")),
        }
    }

    pub fn facets(&self) -> Result<&[Vec<S>]> {
        match &self.shape {
            Shape::Polyhedral { facets, .. } => Ok(facets),
            Shape::Lorentz => Err(lorentz_unsupported("facet enumeration")),
        }
    }

    pub fn contains(&self, x: &[S]) -> Result<bool> {
        check_dim(self.dim, x.len())?;
        Ok(match &self.shape {
            Shape::Polyhedral { facets, .. } => facets.iter().all(|f| dot(f, x).is_nonneg(self.tol)),
            Shape::Lorentz => in_lorentz(x, self.tol),
        })
    }

    /// Membership of a functional in the dual cone.
    pub fn dual_contains(&self, a: &[S]) -> Result<bool> {
        check_dim(self.dim, a.len())?;
        Ok(match &self.shape {
            Shape::Polyhedral { generators, .. } => generators.iter().all(|g| dot(a, g).is_nonneg(self.tol)),
            Shape::Lorentz => in_lorentz(a, self.tol),
        })
    }

    /// Strict positivity of a functional on the cone minus the origin.
    pub fn strictly_positive(&self, a: &[S]) -> Result<bool> {
        check_dim(self.dim, a.len())?;
        Ok(match &self.shape {
            Shape::Polyhedral { generators, .. } => generators.iter().all(|g| dot(a, g).is_pos(self.tol)),
            Shape::Lorentz => lorentz_interior(a, self.tol),
        })
    }

    pub fn dual(&self) -> Result<Self> {
        match &self.shape {
            Shape::Polyhedral { generators, .. } => {
                Self::from_facets_tol(generators.clone(), self.tol)
            }
            Shape::Lorentz => Ok(self.clone()),
        }
    }

    /// Index of the generator spanning the same ray as `x`.
    pub fn find_generator(&self, x: &[S]) -> Option<usize> {
        let gens = self.generators().ok()?;
        gens.iter().position(|g| same_ray(g, x, self.tol))
    }

    /// Mutual containment of generators: both cones have the same members.
    pub fn same_members(&self, other: &Self) -> Result<bool> {
        check_dim(self.dim, other.dim)?;
        match (&self.shape, &other.shape) {
            (Shape::Lorentz, Shape::Lorentz) => Ok(true),
            (Shape::Polyhedral { generators: a, .. }, Shape::Polyhedral { generators: b, .. }) => {
                for g in a {
                    if !other.contains(g)? {
                        return Ok(false);
                    }
                }
                for g in b {
                    if !self.contains(g)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Ok(false),
        }
    }

    /// Rays that are both in the cone and tight on `dim - 1` independent facets.
    pub fn is_extreme_ray(&self, x: &[S]) -> Result<bool> {
        check_dim(self.dim, x.len())?;
        if !self.contains(x)? || crate::scalar::is_zero_vec(x, self.tol) {
            return Ok(false);
        }
        Ok(is_extreme(x, self.facets()?, self.dim, self.tol))
    }
}

fn ambient_dim<S>(vs: &[Vec<S>]) -> Result<usize> {
    let dim = vs.first().map(Vec::len).ok_or_else(|| Error::Invalid("empty ray list".into()))?;
    if dim == 0 {
        return Err(Error::Invalid("zero-dimensional cone".into()));
    }
    for v in vs {
        check_dim(dim, v.len())?;
    }
    Ok(dim)
}

fn lorentz_unsupported(what: &str) -> Error {
    Error::Unsupported(format!("{what} is not available for Lorentz cones"))
}

/// `x` lies on `dim - 1` independent members of `dual_side` (which are all nonnegative on it).
fn is_extreme<S: Scalar>(x: &[S], dual_side: &[Vec<S>], dim: usize, tol: f64) -> bool {
    let tight: Vec<Vec<S>> = dual_side.iter().filter(|f| dot(f, x).is_zero_tol(tol)).cloned().collect();
    rank_of(&tight, tol) + 1 == dim
}

fn irredundant<S: Scalar>(candidates: &[Vec<S>], dual_side: &[Vec<S>], dim: usize, tol: f64) -> Vec<Vec<S>> {
    let mut out: Vec<Vec<S>> = Vec::new();
    for c in candidates {
        if crate::scalar::is_zero_vec(c, tol) || !is_extreme(c, dual_side, dim, tol) {
            continue;
        }
        if !out.iter().any(|o| same_ray(o, c, tol)) {
            out.push(c.clone());
        }
    }
    out
}

/// Equal up to a positive scalar.
pub fn same_ray<S: Scalar>(a: &[S], b: &[S], tol: f64) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    S::normalize_ray(&mut a);
    S::normalize_ray(&mut b);
    crate::scalar::vec_approx_eq(&a, &b, tol)
}

fn split_last<S: Scalar>(x: &[S]) -> (S, S) {
    let (t, xs) = x.split_last().expect("nonempty");
    let sq = xs.iter().fold(S::zero(), |acc, v| acc + v.clone() * v.clone());
    (t.clone(), sq)
}

pub(crate) fn in_lorentz<S: Scalar>(x: &[S], tol: f64) -> bool {
    let (t, sq) = split_last(x);
    match S::ARITHMETIC {
        Arithmetic::Rational => t.is_nonneg(0.0) && (t.clone() * t - sq).is_nonneg(0.0),
        Arithmetic::Float => t.to_f64() - sq.to_f64().sqrt() >= -tol,
    }
}

fn lorentz_interior<S: Scalar>(x: &[S], tol: f64) -> bool {
    let (t, sq) = split_last(x);
    match S::ARITHMETIC {
        Arithmetic::Rational => t.is_pos(0.0) && (t.clone() * t - sq).is_pos(0.0),
        Arithmetic::Float => t.to_f64() - sq.to_f64().sqrt() > tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qv, Rational};

    fn squit_cone() -> ConeRep<Rational> {
        ConeRep::from_generators(vec![qv(&[1, 1, 1]), qv(&[-1, 1, 1]), qv(&[-1, -1, 1]), qv(&[1, -1, 1])]).unwrap()
    }

    #[test]
    fn orthant_membership() {
        let c = ConeRep::<Rational>::orthant(3).unwrap();
        assert!(c.contains(&qv(&[1, 2, 0])).unwrap());
        assert!(!c.contains(&qv(&[1, -1, 0])).unwrap());
        assert!(matches!(c.contains(&qv(&[1, 2])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn square_center_is_inside() {
        let c = squit_cone();
        assert!(c.contains(&qv(&[0, 0, 1])).unwrap());
        assert_eq!(c.facets().unwrap().len(), 4);
    }

    #[test]
    fn square_dual_is_rotated_square() {
        let d = squit_cone().dual().unwrap();
        let want = [qv(&[1, 0, 1]), qv(&[-1, 0, 1]), qv(&[0, 1, 1]), qv(&[0, -1, 1])];
        assert_eq!(d.generators().unwrap().len(), 4);
        for w in &want {
            assert!(d.find_generator(w).is_some(), "missing {w:?}");
        }
    }

    #[test]
    fn redundant_generators_are_dropped_in_order() {
        let c = ConeRep::from_generators(vec![qv(&[0, 0, 1]), qv(&[1, 1, 1]), qv(&[-1, 1, 1]), qv(&[2, 2, 2]),
            qv(&[-1, -1, 1]), qv(&[1, -1, 1])]).unwrap();
        assert_eq!(c.generators().unwrap(), &[qv(&[1, 1, 1]), qv(&[-1, 1, 1]), qv(&[-1, -1, 1]), qv(&[1, -1, 1])]);
    }

    #[test]
    fn degenerate_and_unpointed_inputs_fail() {
        let flat = ConeRep::from_generators(vec![qv(&[1, 0, 0]), qv(&[0, 1, 0])]);
        assert!(matches!(flat, Err(Error::NotGenerating { rank: 2, dim: 3 })));
        let halfplane = ConeRep::from_generators(vec![qv(&[1, 0]), qv(&[-1, 0]), qv(&[0, 1])]);
        assert!(matches!(halfplane, Err(Error::NotPointed)));
    }

    #[test]
    fn parts_are_cross_checked() {
        let gens = vec![qv(&[1, 0]), qv(&[0, 1])];
        assert!(ConeRep::from_parts(gens.clone(), gens.clone(), 0.0).is_ok());
        let bad = vec![qv(&[1, 0]), qv(&[1, 1])];
        assert!(ConeRep::from_parts(gens, bad, 0.0).is_err());
    }

    #[test]
    fn lorentz_membership_exact() {
        let c = ConeRep::<Rational>::lorentz(4).unwrap();
        assert!(c.contains(&qv(&[3, 4, 0, 5])).unwrap());
        assert!(!c.contains(&qv(&[3, 4, 1, 5])).unwrap());
        assert!(c.dual().unwrap() == c);
        assert!(c.generators().is_err());
    }
}
