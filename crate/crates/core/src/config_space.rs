//! Distance vectors and the point-relabeling action on them.
//!
//! An `n`-point space is determined by its condensed vector of pairwise
//! distances, a point of `R^N` with `N = n(n-1)/2`. Relabeling the points
//! permutes those coordinates; two spaces are isometric exactly when their
//! vectors share an orbit. This module classifies vectors under that action
//! (orbits, stabilizers, tight triangles) and computes the orbit-space
//! metric, which near a well-behaved vector coincides with the exact
//! distance between the corresponding spaces.
//!
//! The ambient norm carries a built-in factor ½ so that vector distances and
//! space distances share a scale. Vectors only need positive coordinates;
//! satisfying the triangle inequalities (living in the metric cone) is a
//! predicate, not a type invariant, because the analysis of degeneracy is
//! about the cone's boundary.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pairs::{pair_count, pair_index};
use crate::perm::{all_perms, Perm};
use crate::solver::gh_exact;
use crate::space::{FiniteMetricSpace, DEFAULT_TOLERANCE};

/// Largest `n` for which factorial-sized sweeps are allowed.
const FACTORIAL_LIMIT: usize = 8;
/// Permutation count from which the quotient minimization parallelizes.
const PARALLEL_FROM: usize = 7;

/// A condensed vector of pairwise distances: `n` points, `n(n-1)/2` positive
/// coordinates in the row-major pair order `(0,1), (0,2), …`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistVector {
    n: usize,
    coords: Vec<f64>,
}

impl DistVector {
    /// Builds a vector, requiring the right length and positive finite
    /// coordinates — cone membership is deliberately not required.
    pub fn new(n: usize, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != pair_count(n) {
            return Err(Error::DimensionMismatch);
        }
        for (idx, &c) in coords.iter().enumerate() {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::NonpositiveCoordinate(idx));
            }
        }
        Ok(Self { n, coords })
    }

    /// The vector of an existing space (always in the cone).
    pub fn from_space(space: &FiniteMetricSpace) -> Self {
        Self { n: space.len(), coords: space.rho().to_vec() }
    }

    /// Reconstructs the space, failing outside the cone.
    pub fn to_space(&self) -> Result<FiniteMetricSpace> {
        FiniteMetricSpace::from_condensed(self.n, self.coords.clone()).map_err(|e| match e {
            Error::TriangleViolation(i, j, k) => Error::NotInCone(i, j, k),
            other => other,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Coordinate for the pair `{i, j}`, `i != j`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.coords[pair_index(self.n, i, j)]
    }

    /// Half the largest coordinate difference.
    pub fn linf_distance(&self, other: &DistVector) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch);
        }
        let max = self
            .coords
            .iter()
            .zip(&other.coords)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        Ok(0.5 * max)
    }

    /// The relabeling action: coordinate `{i,j}` of the result reads
    /// coordinate `{σ(i), σ(j)}` of `self`.
    pub fn apply_perm(&self, sigma: &Perm) -> Result<DistVector> {
        if sigma.len() != self.n {
            return Err(Error::BadPermutation(self.n));
        }
        let mut coords = Vec::with_capacity(self.coords.len());
        for i in 0..self.n {
            for j in i + 1..self.n {
                coords.push(self.get(sigma.apply(i), sigma.apply(j)));
            }
        }
        Ok(DistVector { n: self.n, coords })
    }

    /// All images under the full symmetric group, deduplicated within the
    /// crate tolerance and sorted coordinate-lexicographically.
    pub fn orbit(&self) -> Result<Vec<DistVector>> {
        self.guard_factorial()?;
        let mut images: Vec<Vec<f64>> = all_perms(self.n)
            .map(|sigma| self.apply_perm(&sigma).expect("same n").coords)
            .collect();
        images.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
        let mut kept: Vec<Vec<f64>> = Vec::new();
        for image in images {
            let dup = kept.last().is_some_and(|last| {
                last.iter().zip(&image).all(|(a, b)| (a - b).abs() <= DEFAULT_TOLERANCE)
            });
            if !dup {
                kept.push(image);
            }
        }
        Ok(kept.into_iter().map(|coords| DistVector { n: self.n, coords }).collect())
    }

    /// Permutations fixing the vector coordinate-wise within `tol`, in
    /// lexicographic order; always contains the identity.
    pub fn stabilizer(&self, tol: f64) -> Result<Vec<Perm>> {
        self.guard_factorial()?;
        Ok(all_perms(self.n)
            .filter(|sigma| {
                let image = self.apply_perm(sigma).expect("same n");
                self.coords
                    .iter()
                    .zip(&image.coords)
                    .all(|(a, b)| (a - b).abs() <= tol)
            })
            .collect())
    }

    /// Ordered triples `(i, j, k)` of distinct points whose triangle
    /// inequality is tight within `tol`: `ρ_ij + ρ_jk = ρ_ik`.
    pub fn tight_triples(&self, tol: f64) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..self.n {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    if (self.get(i, j) + self.get(j, k) - self.get(i, k)).abs() <= tol {
                        out.push((i, j, k));
                    }
                }
            }
        }
        out
    }

    /// First triple violating a triangle inequality beyond `tol`, if any.
    pub fn cone_violation(&self, tol: f64) -> Option<(usize, usize, usize)> {
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..self.n {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    if self.get(i, k) > self.get(i, j) + self.get(j, k) + tol {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn in_cone(&self, tol: f64) -> bool {
        self.cone_violation(tol).is_none()
    }

    fn guard_factorial(&self) -> Result<()> {
        if self.n > FACTORIAL_LIMIT {
            return Err(Error::TooLarge(self.n, FACTORIAL_LIMIT));
        }
        Ok(())
    }
}

/// How a vector sits relative to the group action and the cone boundary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    /// Trivial stabilizer.
    pub regular: bool,
    /// Some triangle inequality is tight.
    pub degenerate: bool,
    /// Regular and non-degenerate.
    pub generic: bool,
    pub stabilizer: Vec<Perm>,
    pub degenerate_triples: Vec<(usize, usize, usize)>,
}

/// Classifies a cone point: stabilizer triviality and tight triangles.
pub fn classify(rho: &DistVector, tol: f64) -> Result<ClassificationReport> {
    if let Some((i, j, k)) = rho.cone_violation(tol) {
        return Err(Error::NotInCone(i, j, k));
    }
    let stabilizer = rho.stabilizer(tol)?;
    let degenerate_triples = rho.tight_triples(tol);
    let regular = stabilizer.len() == 1;
    let degenerate = !degenerate_triples.is_empty();
    Ok(ClassificationReport {
        regular,
        degenerate,
        generic: regular && !degenerate,
        stabilizer,
        degenerate_triples,
    })
}

/// One face constraint of the local cone: `ρ_ij + ρ_jk − ρ_ik ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HalfSpace {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl HalfSpace {
    pub fn eval(&self, rho: &DistVector) -> f64 {
        rho.get(self.i, self.j) + rho.get(self.j, self.k) - rho.get(self.i, self.k)
    }

    pub fn contains(&self, rho: &DistVector, tol: f64) -> bool {
        self.eval(rho) >= -tol
    }
}

/// The constraints that carve out the cone locally around `rho`: one
/// half-space per tight triple. An empty list means the whole ambient space
/// — near an interior point the cone imposes nothing.
pub fn degeneracy_cone(rho: &DistVector, tol: f64) -> Result<Vec<HalfSpace>> {
    if let Some((i, j, k)) = rho.cone_violation(tol) {
        return Err(Error::NotInCone(i, j, k));
    }
    Ok(rho
        .tight_triples(tol)
        .into_iter()
        .map(|(i, j, k)| HalfSpace { i, j, k })
        .collect())
}

/// Orbit-space distance: the smallest ambient distance between `rho1` and
/// any relabeling of `rho2`, with the lexicographically least minimizing
/// permutation. Parallelized for large `n` with a deterministic reduction.
pub fn quotient_distance(rho1: &DistVector, rho2: &DistVector) -> Result<(f64, Perm)> {
    if rho1.n != rho2.n {
        return Err(Error::DimensionMismatch);
    }
    rho1.guard_factorial()?;
    let n = rho1.n;
    if n >= PARALLEL_FROM {
        let perms: Vec<Perm> = all_perms(n).collect();
        let (_, best_idx) = perms
            .par_iter()
            .enumerate()
            .map(|(idx, sigma)| {
                let d = rho1
                    .linf_distance(&rho2.apply_perm(sigma).expect("same n"))
                    .expect("same n");
                (d, idx)
            })
            .reduce(|| (f64::INFINITY, usize::MAX), |a, b| if b < a { b } else { a });
        let sigma = perms[best_idx].clone();
        let d = rho1.linf_distance(&rho2.apply_perm(&sigma)?)?;
        return Ok((d, sigma));
    }
    let mut best = f64::INFINITY;
    let mut witness = Perm::identity(n);
    for sigma in all_perms(n) {
        let d = rho1.linf_distance(&rho2.apply_perm(&sigma)?)?;
        if d < best {
            best = d;
            witness = sigma;
        }
    }
    Ok((best, witness))
}

/// Side-by-side local comparison of the orbit-space distance and the exact
/// distance between two equal-size spaces. The two agree near a common
/// well-behaved vector but not globally, so this reports and never asserts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalIsometry {
    pub quotient: f64,
    pub exact: f64,
    pub agree: bool,
}

pub fn local_isometry_check(
    y: &FiniteMetricSpace,
    z: &FiniteMetricSpace,
) -> Result<LocalIsometry> {
    const LIMIT: usize = 6;
    if y.len() != z.len() {
        return Err(Error::CardinalityMismatch);
    }
    if y.len() > LIMIT {
        return Err(Error::TooLarge(y.len(), LIMIT));
    }
    let (quotient, _) = quotient_distance(&DistVector::from_space(y), &DistVector::from_space(z))?;
    let (exact, _) = gh_exact(y, z);
    Ok(LocalIsometry { quotient, exact, agree: (quotient - exact).abs() <= 1e-9 })
}

/// Perturbation radius within which the orbit-space distance is expected to
/// track the exact distance: a quarter of the smaller of the vector's
/// triangle slack and half its orbit separation (the largest coordinate
/// difference between distinct orbit points). Infinite when nothing
/// constrains it (a one-point orbit strictly inside the cone).
pub fn perturbation_margin(rho: &DistVector) -> Result<f64> {
    let mut slack = f64::INFINITY;
    for i in 0..rho.n {
        for j in 0..rho.n {
            for k in 0..rho.n {
                if i == j || j == k || i == k {
                    continue;
                }
                slack = slack.min(rho.get(i, j) + rho.get(j, k) - rho.get(i, k));
            }
        }
    }
    let orbit = rho.orbit()?;
    let mut separation = f64::INFINITY;
    for (a, p) in orbit.iter().enumerate() {
        for q in &orbit[a + 1..] {
            let gap = p
                .coords
                .iter()
                .zip(&q.coords)
                .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
            separation = separation.min(gap);
        }
    }
    Ok(0.25 * slack.min(0.5 * separation))
}
