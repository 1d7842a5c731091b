//! Double-description enumeration of extreme rays.
//!
//! Given inequalities `h · x >= 0`, [`extreme_rays`] returns the extreme rays
//! of the cone they cut out. Run on a list of generators instead, the same
//! routine enumerates the facets of their conic hull (the extreme rays of the
//! dual cone).

use crate::error::{Error, Result};
use crate::linalg::{independent_subset, Matrix};
use crate::scalar::{dot, Scalar};

/// Largest ambient dimension accepted by the enumerator.
pub const DIMENSION_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, other: &Self) -> Self {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn is_subset(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray<S> {
    coords: Vec<S>,
    zeros: Bits,
}

/// Extreme rays of the pointed cone `{x : h · x >= 0 for every h}`.
///
/// Rays come back in the canonical scaling of [`Scalar::normalize_ray`]. The
/// output order depends only on the input order.
pub fn extreme_rays<S: Scalar>(halfspaces: &[Vec<S>], dim: usize, eps: f64) -> Result<Vec<Vec<S>>> {
    if dim > DIMENSION_CAP {
        return Err(Error::DimensionCap { dim, cap: DIMENSION_CAP });
    }
    let mut hs: Vec<Vec<S>> = Vec::with_capacity(halfspaces.len());
    for h in halfspaces {
        crate::error::check_dim(dim, h.len())?;
        if crate::scalar::is_zero_vec(h, eps) {
            continue;
        }
        let mut h = h.clone();
        S::normalize_ray(&mut h);
        hs.push(h);
    }

    let basis = independent_subset(&hs, eps);
    if basis.len() < dim {
        return Err(Error::NotPointed);
    }
    let h0 = Matrix::from_rows(&basis.iter().map(|&i| hs[i].clone()).collect::<Vec<_>>())?;
    let inv = h0.inverse(eps).ok_or(Error::NotPointed)?;

    let n = hs.len();
    let mut rays: Vec<Ray<S>> = (0..dim)
        .map(|k| {
            let mut coords = inv.column(k);
            S::normalize_ray(&mut coords);
            let mut zeros = Bits::new(n);
            for (pos, &idx) in basis.iter().enumerate() {
                if pos != k {
                    zeros.set(idx);
                }
            }
            Ray { coords, zeros }
        })
        .collect();

    for (idx, h) in hs.iter().enumerate() {
        if basis.contains(&idx) {
            continue;
        }
        let vals: Vec<S> = rays.iter().map(|r| dot(h, &r.coords)).collect();
        let signs: Vec<std::cmp::Ordering> = vals.iter().map(|v| v.sign(eps)).collect();
        if !signs.contains(&std::cmp::Ordering::Less) {
            for (r, s) in rays.iter_mut().zip(&signs) {
                if *s == std::cmp::Ordering::Equal {
                    r.zeros.set(idx);
                }
            }
            continue;
        }

        let pos: Vec<usize> = (0..rays.len()).filter(|&i| signs[i] == std::cmp::Ordering::Greater).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| signs[i] == std::cmp::Ordering::Less).collect();

        let mut created: Vec<Ray<S>> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zeros.and(&rays[q].zeros);
                if common.count() + 2 < dim {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == q || !common.is_subset(&r.zeros));
                if !adjacent {
                    continue;
                }
                let mut coords: Vec<S> = rays[q]
                    .coords
                    .iter()
                    .zip(&rays[p].coords)
                    .map(|(xq, xp)| vals[p].clone() * xq.clone() - vals[q].clone() * xp.clone())
                    .collect();
                S::normalize_ray(&mut coords);
                let mut zeros = common;
                zeros.set(idx);
                created.push(Ray { coords, zeros });
            }
        }

        let mut next: Vec<Ray<S>> = Vec::with_capacity(rays.len() + created.len());
        for (r, s) in rays.into_iter().zip(&signs) {
            match s {
                std::cmp::Ordering::Greater => next.push(r),
                std::cmp::Ordering::Equal => {
                    let mut r = r;
                    r.zeros.set(idx);
                    next.push(r);
                }
                std::cmp::Ordering::Less => {}
            }
        }
        next.extend(created);
        rays = next;
    }

    let mut out: Vec<Vec<S>> = Vec::with_capacity(rays.len());
    for r in rays {
        if !out.iter().any(|o| crate::scalar::vec_approx_eq(o, &r.coords, eps)) {
            out.push(r.coords);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qv, Rational};

    fn contains_ray(set: &[Vec<Rational>], ray: &[i64]) -> bool {
        let mut r = qv(ray);
        Rational::normalize_ray(&mut r);
        set.contains(&r)
    }

    #[test]
    fn orthant_rays_are_unit_vectors() {
        let hs = vec![qv(&[1, 0, 0]), qv(&[0, 1, 0]), qv(&[0, 0, 1])];
        let rays = extreme_rays(&hs, 3, 0.0).unwrap();
        assert_eq!(rays.len(), 3);
        for r in [[1, 0, 0], [0, 1, 0], [0, 0, 1]] {
            assert!(contains_ray(&rays, &r));
        }
    }

    #[test]
    fn square_cone_facets_from_vertices() {
        let verts = vec![qv(&[1, 1, 1]), qv(&[-1, 1, 1]), qv(&[-1, -1, 1]), qv(&[1, -1, 1])];
        let facets = extreme_rays(&verts, 3, 0.0).unwrap();
        assert_eq!(facets.len(), 4);
        for f in [[1, 0, 1], [-1, 0, 1], [0, 1, 1], [0, -1, 1]] {
            assert!(contains_ray(&facets, &f), "missing {f:?}");
        }
    }

    #[test]
    fn redundant_inequalities_are_ignored() {
        let hs = vec![qv(&[1, 0]), qv(&[0, 1]), qv(&[1, 1]), qv(&[2, 0])];
        let rays = extreme_rays(&hs, 2, 0.0).unwrap();
        assert_eq!(rays.len(), 2);
    }

    #[test]
    fn half_plane_is_not_pointed() {
        let hs = vec![qv(&[1, 0])];
        assert!(matches!(extreme_rays(&hs, 2, 0.0), Err(Error::NotPointed)));
    }

    #[test]
    fn cap_is_enforced() {
        let hs: Vec<Vec<Rational>> = vec![];
        assert!(matches!(extreme_rays(&hs, 17, 0.0), Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn hexagon_in_floats() {
        let verts: Vec<Vec<f64>> = (0..6)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / 6.0;
                vec![t.cos(), t.sin(), 1.0]
            })
            .collect();
        let facets = extreme_rays(&verts, 3, 1e-9).unwrap();
        assert_eq!(facets.len(), 6);
        let back = extreme_rays(&facets, 3, 1e-9).unwrap();
        assert_eq!(back.len(), 6);
    }
}
