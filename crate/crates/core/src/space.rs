//! Finite metric spaces stored as condensed distance vectors.
//!
//! A space on `n` points keeps its `n(n-1)/2` pairwise distances in the
//! row-major pair order of [`crate::pairs`]. Validation happens once, at
//! construction: squareness, finiteness, zero diagonal, symmetry within
//! `tol_sym`, strict positivity off the diagonal, and every ordered triangle
//! inequality within `tol`. All operations that hand out new spaces preserve
//! these invariants, so downstream code never re-checks them.
//!
//! Point indices are 0-based everywhere, including error values.

use crate::error::{Error, Result};
use crate::pairs::{pair_count, pair_index};

/// Comparison tolerance used when the caller does not supply one.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Threshold above which a bijection-vs-correspondence distance difference
/// counts as a genuine gap rather than numerical noise.
pub const GAP_THRESHOLD: f64 = 1e-6;

/// An immutable finite metric space.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    n: usize,
    rho: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl FiniteMetricSpace {
    /// Validates a full square matrix and condenses it.
    ///
    /// Symmetry is checked within `DEFAULT_TOLERANCE`; the upper triangle is
    /// the canonical value wherever the two halves differ inside tolerance.
    pub fn from_matrix(matrix: &[Vec<f64>]) -> Result<Self> {
        Self::from_matrix_with(matrix, DEFAULT_TOLERANCE, DEFAULT_TOLERANCE)
    }

    /// [`FiniteMetricSpace::from_matrix`] with explicit symmetry and triangle
    /// tolerances.
    pub fn from_matrix_with(matrix: &[Vec<f64>], tol_sym: f64, tol: f64) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare { rows: n, cols: row.len(), row: i });
            }
        }
        for (i, row) in matrix.iter().enumerate() {
            for (j, &d) in row.iter().enumerate() {
                if !d.is_finite() {
                    return Err(Error::NotFinite(i, j));
                }
            }
        }
        for (i, row) in matrix.iter().enumerate() {
            if row[i].abs() > tol {
                return Err(Error::NonzeroDiagonal(i));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if (matrix[i][j] - matrix[j][i]).abs() > tol_sym {
                    return Err(Error::AsymmetricEntry(i, j));
                }
            }
        }
        let mut rho = Vec::with_capacity(pair_count(n));
        for i in 0..n {
            for j in i + 1..n {
                rho.push(matrix[i][j]);
            }
        }
        Self::from_condensed_with(n, rho, tol)
    }

    /// Validates a condensed distance vector (positivity and triangles only;
    /// shape, symmetry, and the diagonal are implicit in the encoding).
    pub fn from_condensed(n: usize, rho: Vec<f64>) -> Result<Self> {
        Self::from_condensed_with(n, rho, DEFAULT_TOLERANCE)
    }

    /// [`FiniteMetricSpace::from_condensed`] with an explicit triangle tolerance.
    pub fn from_condensed_with(n: usize, rho: Vec<f64>, tol: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if rho.len() != pair_count(n) {
            return Err(Error::DimensionMismatch);
        }
        for (idx, &d) in rho.iter().enumerate() {
            let (i, j) = crate::pairs::index_pair(n, idx);
            if !d.is_finite() {
                return Err(Error::NotFinite(i, j));
            }
            if d <= 0.0 {
                return Err(Error::NonpositiveDistance(i, j));
            }
        }
        let space = Self { n, rho, labels: None };
        for i in 0..n {
            for j in 0..n {
                if j == i {
                    continue;
                }
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    if space.distance(i, k) > space.distance(i, j) + space.distance(j, k) + tol {
                        return Err(Error::TriangleViolation(i, j, k));
                    }
                }
            }
        }
        Ok(space)
    }

    /// The `n`-point space with every distance equal to `t` (a one-point
    /// space for `n = 1`, whatever `t`).
    pub fn simplex(n: usize, t: f64) -> Self {
        assert!(n >= 1, "simplex needs at least one point");
        assert!(t > 0.0 && t.is_finite(), "simplex side must be positive");
        Self { n, rho: vec![t; pair_count(n)], labels: None }
    }

    /// Attaches display labels; the count must match the point count.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::DimensionMismatch);
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The condensed distance vector in row-major pair order.
    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        if i == j {
            0.0
        } else {
            self.rho[pair_index(self.n, i, j)]
        }
    }

    /// Largest pairwise distance; `0` for the one-point space.
    pub fn diameter(&self) -> f64 {
        self.rho.iter().copied().fold(0.0, f64::max)
    }

    /// Smallest pairwise distance; errors on the one-point space.
    pub fn min_distance(&self) -> Result<f64> {
        self.rho.iter().copied().reduce(f64::min).ok_or(Error::TooFewPoints)
    }

    /// The two smallest distances `(a, b)` with `a <= b`, possibly equal.
    /// Needs at least two distinct pairs, i.e. at least three points.
    pub fn smallest_two(&self) -> Result<(f64, f64)> {
        if self.rho.len() < 2 {
            return Err(Error::TooFewPoints);
        }
        let mut a = f64::INFINITY;
        let mut b = f64::INFINITY;
        for &d in &self.rho {
            if d < a {
                b = a;
                a = d;
            } else if d < b {
                b = d;
            }
        }
        Ok((a, b))
    }

    /// Multiplies every distance by `lambda > 0`.
    pub fn scale(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::NonpositiveScale);
        }
        Ok(Self {
            n: self.n,
            rho: self.rho.iter().map(|d| d * lambda).collect(),
            labels: self.labels.clone(),
        })
    }

    /// Reconstructs the full square matrix.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.distance(i, j)).collect())
            .collect()
    }

    /// The induced subspace on the subset's points, in subset order.
    pub fn restrict(&self, subset: &PointSubset) -> Result<Self> {
        if !std::ptr::eq(subset.space, self) {
            return Err(Error::MixedSpaces);
        }
        self.restrict_indices(&subset.indices)
    }

    /// [`FiniteMetricSpace::restrict`] on a raw index list (sorted, deduped).
    pub fn restrict_indices(&self, indices: &[usize]) -> Result<Self> {
        let subset = PointSubset::new(self, indices.to_vec())?;
        let k = subset.indices.len();
        let mut rho = Vec::with_capacity(pair_count(k));
        for a in 0..k {
            for b in a + 1..k {
                rho.push(self.distance(subset.indices[a], subset.indices[b]));
            }
        }
        let labels = self
            .labels
            .as_ref()
            .map(|ls| subset.indices.iter().map(|&i| ls[i].clone()).collect());
        Ok(Self { n: k, rho, labels })
    }

    /// Points whose distances to `p` and to `q` agree within `tol`; `None`
    /// when no point qualifies.
    pub fn mid_set(&self, p: usize, q: usize, tol: f64) -> Result<Option<PointSubset<'_>>> {
        if p >= self.n {
            return Err(Error::IndexOutOfRange(p, self.n));
        }
        if q >= self.n {
            return Err(Error::IndexOutOfRange(q, self.n));
        }
        if p == q {
            return Err(Error::SamePoint);
        }
        let indices: Vec<usize> = (0..self.n)
            .filter(|&i| (self.distance(i, p) - self.distance(i, q)).abs() <= tol)
            .collect();
        if indices.is_empty() {
            Ok(None)
        } else {
            Ok(Some(PointSubset { space: self, indices }))
        }
    }

    /// Greedy farthest-point net: starts from point 0 and keeps adding the
    /// point farthest from the net (lowest index on ties) until every point
    /// lies within `eps` of it.
    pub fn greedy_eps_net(&self, eps: f64) -> Result<PointSubset<'_>> {
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::BadRange);
        }
        let mut chosen = vec![0usize];
        let mut to_net: Vec<f64> = (0..self.n).map(|i| self.distance(i, 0)).collect();
        loop {
            let (far, &far_dist) = to_net
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap().then(b.0.cmp(&a.0)))
                .unwrap();
            if far_dist <= eps {
                break;
            }
            chosen.push(far);
            for (i, d) in to_net.iter_mut().enumerate() {
                *d = d.min(self.distance(i, far));
            }
        }
        chosen.sort_unstable();
        Ok(PointSubset { space: self, indices: chosen })
    }
}

/// A nonempty subset of a space's points, kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSubset<'a> {
    space: &'a FiniteMetricSpace,
    indices: Vec<usize>,
}

impl<'a> PointSubset<'a> {
    pub fn new(space: &'a FiniteMetricSpace, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if indices.is_empty() {
            return Err(Error::EmptySubset);
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= space.len()) {
            return Err(Error::IndexOutOfRange(bad, space.len()));
        }
        Ok(Self { space, indices })
    }

    pub fn full(space: &'a FiniteMetricSpace) -> Self {
        Self { space, indices: (0..space.len()).collect() }
    }

    pub fn space(&self) -> &'a FiniteMetricSpace {
        self.space
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    fn same_space(&self, other: &PointSubset) -> Result<()> {
        if std::ptr::eq(self.space, other.space) {
            Ok(())
        } else {
            Err(Error::MixedSpaces)
        }
    }

    fn point_distance(&self, x: usize) -> f64 {
        self.indices
            .iter()
            .map(|&i| self.space.distance(x, i))
            .fold(f64::INFINITY, f64::min)
    }
}

/// `inf {|ab| : a in A, b in B}` inside one ambient space.
pub fn set_distance_inf(a: &PointSubset, b: &PointSubset) -> Result<f64> {
    a.same_space(b)?;
    let mut inf = f64::INFINITY;
    for &i in &a.indices {
        for &j in &b.indices {
            inf = inf.min(a.space.distance(i, j));
        }
    }
    Ok(inf)
}

/// `sup {|ab| : a in A, b in B}` inside one ambient space.
pub fn set_distance_sup(a: &PointSubset, b: &PointSubset) -> Result<f64> {
    a.same_space(b)?;
    let mut sup = f64::NEG_INFINITY;
    for &i in &a.indices {
        for &j in &b.indices {
            sup = sup.max(a.space.distance(i, j));
        }
    }
    Ok(sup)
}

/// Hausdorff distance between two subsets of one ambient space.
pub fn hausdorff(a: &PointSubset, b: &PointSubset) -> Result<f64> {
    a.same_space(b)?;
    let a_to_b = a.indices.iter().map(|&i| b.point_distance(i)).fold(0.0, f64::max);
    let b_to_a = b.indices.iter().map(|&j| a.point_distance(j)).fold(0.0, f64::max);
    Ok(a_to_b.max(b_to_a))
}
