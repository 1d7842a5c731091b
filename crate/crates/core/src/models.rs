//! Named example systems: classical simplices, regular polygons, balls.

use std::fmt;
use std::str::FromStr;

use crate::cone::ConeRep;
use crate::error::{Error, Result};
use crate::scalar::{Arithmetic, Scalar};
use crate::space::StateSpace;

/// `n`-outcome classical system: the orthant with the all-ones unit.
pub fn classical<S: Scalar>(n: usize) -> Result<StateSpace<S>> {
    if n < 1 {
        return Err(Error::Invalid("classical systems need n >= 1".into()));
    }
    StateSpace::new(ConeRep::orthant(n)?, vec![S::one(); n])
}

/// The square bit in its rational presentation, vertices `(±1, ±1, 1)` in
/// counter-clockwise order starting at `(1, 1, 1)`.
pub fn squit<S: Scalar>() -> StateSpace<S> {
    let v = |x: i64, y: i64| vec![S::from_int(x), S::from_int(y), S::one()];
    let cone = ConeRep::from_generators(vec![v(1, 1), v(-1, 1), v(-1, -1), v(1, -1)]).expect("square cone");
    StateSpace::new(cone, vec![S::zero(), S::zero(), S::one()]).expect("square unit")
}

/// Regular `n`-gon with vertices `(cos 2πk/n, sin 2πk/n, 1)` and unit `(0, 0, 1)`.
///
/// `n = 4` uses the square-bit presentation so it stays rational; every other
/// `n` has irrational vertices and is only available over `f64`.
pub fn polygon<S: Scalar>(n: usize) -> Result<StateSpace<S>> {
    if n < 3 {
        return Err(Error::Invalid("polygons need n >= 3".into()));
    }
    if n == 4 {
        return Ok(squit());
    }
    if S::ARITHMETIC == Arithmetic::Rational {
        return Err(Error::Inexact(format!("polygon:{n} has irrational vertices; use float arithmetic")));
    }
    let gens = (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64;
            Ok(vec![from_f64(t.cos())?, from_f64(t.sin())?, S::one()])
        })
        .collect::<Result<Vec<_>>>()?;
    StateSpace::new(ConeRep::from_generators(gens)?, vec![S::zero(), S::zero(), S::one()])
}

/// `d`-ball: the Lorentz cone of dimension `d + 1` with the apex coordinate as unit.
/// `ball(3)` is the qubit (Bloch ball).
pub fn ball<S: Scalar>(d: usize) -> Result<StateSpace<S>> {
    if d < 1 {
        return Err(Error::Invalid("balls need d >= 1".into()));
    }
    let mut unit = vec![S::zero(); d + 1];
    unit[d] = S::one();
    StateSpace::new(ConeRep::lorentz(d + 1)?, unit)
}

/// Direct sum `A ⊕ B` of two polyhedral spaces, coordinates concatenated.
pub fn direct_sum<S: Scalar>(a: &StateSpace<S>, b: &StateSpace<S>) -> Result<StateSpace<S>> {
    let (da, db) = (a.dim(), b.dim());
    let mut gens = Vec::new();
    for g in a.cone().generators()? {
        let mut v = g.clone();
        v.extend(std::iter::repeat_n(S::zero(), db));
        gens.push(v);
    }
    for g in b.cone().generators()? {
        let mut v = vec![S::zero(); da];
        v.extend(g.iter().cloned());
        gens.push(v);
    }
    let unit = [a.unit(), b.unit()].concat();
    StateSpace::new(ConeRep::from_generators_tol(gens, a.tol())?, unit)
}

fn from_f64<S: Scalar>(x: f64) -> Result<S> {
    S::from_f64(x).ok_or_else(|| Error::Inexact(format!("{x}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Classical,
    Polygon,
    Ball,
}

/// A named model such as `classical:3`, `polygon:5`, `squit` or `ball:3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModelDescriptor {
    pub family: Family,
    pub parameter: usize,
}

impl ModelDescriptor {
    pub fn new(family: Family, parameter: usize) -> Result<Self> {
        let min = match family {
            Family::Classical | Family::Ball => 1,
            Family::Polygon => 3,
        };
        if parameter < min {
            return Err(Error::Invalid(format!("{family:?} parameter must be at least {min}")));
        }
        Ok(ModelDescriptor { family, parameter })
    }

    /// Rational whenever every coordinate of the model is rational.
    pub fn natural_arithmetic(&self) -> Arithmetic {
        match (self.family, self.parameter) {
            (Family::Polygon, n) if n != 4 => Arithmetic::Float,
            _ => Arithmetic::Rational,
        }
    }

    pub fn build<S: Scalar>(&self) -> Result<StateSpace<S>> {
        match self.family {
            Family::Classical => classical(self.parameter),
            Family::Polygon => polygon(self.parameter),
            Family::Ball => ball(self.parameter),
        }
    }
}

impl FromStr for ModelDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("squit") {
            return ModelDescriptor::new(Family::Polygon, 4);
        }
        let (name, param) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("model '{s}' must look like family:n or 'squit'")))?;
        let parameter: usize = param
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad model parameter in '{s}'")))?;
        let family = match name.trim().to_ascii_lowercase().as_str() {
            "classical" => Family::Classical,
            "polygon" => Family::Polygon,
            "ball" => Family::Ball,
            other => return Err(Error::Parse(format!("unknown model family '{other}'"))),
        };
        ModelDescriptor::new(family, parameter)
    }
}

impl fmt::Display for ModelDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.family, self.parameter) {
            (Family::Polygon, 4) => f.write_str("squit"),
            (Family::Classical, n) => write!(f, "classical:{n}"),
            (Family::Polygon, n) => write!(f, "polygon:{n}"),
            (Family::Ball, n) => write!(f, "ball:{n}"),
        }
    }
}
