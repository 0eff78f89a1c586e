//! Relations and correspondences between two finite metric spaces.
//!
//! A correspondence is a relation that covers every point on both sides; its
//! distortion is the largest disagreement `||xx'| - |yy'||` over pairs of
//! related pairs. Half the minimal distortion over all correspondences is the
//! Gromov-Hausdorff distance, which is what [`crate::solver`] computes.

use crate::error::{Error, Result};
use crate::space::FiniteMetricSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationKind {
    /// Surjective onto both sides.
    Correspondence,
    /// Any nonempty set of pairs.
    General,
}

/// A nonempty relation between the points of two spaces.
#[derive(Debug, Clone)]
pub struct Relation<'a> {
    x: &'a FiniteMetricSpace,
    y: &'a FiniteMetricSpace,
    pairs: Vec<(usize, usize)>,
    kind: RelationKind,
}

impl<'a> Relation<'a> {
    /// Builds a correspondence, rejecting relations that miss a point.
    pub fn correspondence(
        x: &'a FiniteMetricSpace,
        y: &'a FiniteMetricSpace,
        pairs: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let rel = Self::general(x, y, pairs)?;
        if !rel.covers_both_sides() {
            return Err(Error::NotACorrespondence);
        }
        Ok(Self { kind: RelationKind::Correspondence, ..rel })
    }

    /// Builds an arbitrary nonempty relation.
    pub fn general(
        x: &'a FiniteMetricSpace,
        y: &'a FiniteMetricSpace,
        mut pairs: Vec<(usize, usize)>,
    ) -> Result<Self> {
        pairs.sort_unstable();
        pairs.dedup();
        if pairs.is_empty() {
            return Err(Error::EmptyRelation);
        }
        if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| i >= x.len() || j >= y.len()) {
            return Err(Error::PairOutOfRange(i, j));
        }
        Ok(Self { x, y, pairs, kind: RelationKind::General })
    }

    /// The everything-to-everything correspondence.
    pub fn full_product(x: &'a FiniteMetricSpace, y: &'a FiniteMetricSpace) -> Self {
        let pairs = (0..x.len())
            .flat_map(|i| (0..y.len()).map(move |j| (i, j)))
            .collect();
        Self { x, y, pairs, kind: RelationKind::Correspondence }
    }

    /// The graph of a bijection given as the image table `i -> perm[i]`.
    pub fn from_bijection(
        x: &'a FiniteMetricSpace,
        y: &'a FiniteMetricSpace,
        perm: &[usize],
    ) -> Result<Self> {
        if x.len() != y.len() || perm.len() != x.len() {
            return Err(Error::CardinalityMismatch);
        }
        crate::perm::Perm::from_images(perm.to_vec())?;
        let pairs = perm.iter().enumerate().map(|(i, &j)| (i, j)).collect();
        Self::correspondence(x, y, pairs)
    }

    pub fn left(&self) -> &'a FiniteMetricSpace {
        self.x
    }

    pub fn right(&self) -> &'a FiniteMetricSpace {
        self.y
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn kind(&self) -> RelationKind {
        self.kind
    }

    fn covers_both_sides(&self) -> bool {
        let mut left = vec![false; self.x.len()];
        let mut right = vec![false; self.y.len()];
        for &(i, j) in &self.pairs {
            left[i] = true;
            right[j] = true;
        }
        left.into_iter().all(|c| c) && right.into_iter().all(|c| c)
    }

    /// Whether the pair set is surjective onto both sides (regardless of how
    /// the relation was constructed).
    pub fn is_correspondence(&self) -> bool {
        self.covers_both_sides()
    }

    /// `sup ||xx'| - |yy'||` over pairs of related pairs; `0` for singletons.
    pub fn distortion(&self) -> f64 {
        let mut dis: f64 = 0.0;
        for (a, &(i, j)) in self.pairs.iter().enumerate() {
            for &(i2, j2) in &self.pairs[a..] {
                let diff = (self.x.distance(i, i2) - self.y.distance(j, j2)).abs();
                dis = dis.max(diff);
            }
        }
        dis
    }

    /// Whether no single pair can be dropped while staying a correspondence.
    ///
    /// A pair is droppable exactly when both its row and its column are
    /// covered twice, so minimality reduces to a multiplicity scan.
    pub fn is_irreducible(&self) -> Result<bool> {
        if !self.is_correspondence() {
            return Err(Error::NotACorrespondence);
        }
        let mut row = vec![0usize; self.x.len()];
        let mut col = vec![0usize; self.y.len()];
        for &(i, j) in &self.pairs {
            row[i] += 1;
            col[j] += 1;
        }
        Ok(self.pairs.iter().all(|&(i, j)| row[i] == 1 || col[j] == 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> FiniteMetricSpace {
        FiniteMetricSpace::from_condensed(3, vec![1.0, 10.0, 9.0]).unwrap()
    }

    #[test]
    fn correspondence_requires_double_surjectivity() {
        let x = line();
        let y = FiniteMetricSpace::simplex(2, 5.0);
        assert!(Relation::correspondence(&x, &y, vec![(0, 0), (1, 0), (2, 1)]).is_ok());
        // Point 1 of y is never hit.
        assert_eq!(
            Relation::correspondence(&x, &y, vec![(0, 0), (1, 0), (2, 0)]).unwrap_err(),
            Error::NotACorrespondence
        );
        // Point 2 of x is never hit.
        assert_eq!(
            Relation::correspondence(&x, &y, vec![(0, 0), (1, 1)]).unwrap_err(),
            Error::NotACorrespondence
        );
        assert_eq!(
            Relation::general(&x, &y, vec![]).unwrap_err(),
            Error::EmptyRelation
        );
        assert_eq!(
            Relation::general(&x, &y, vec![(0, 7)]).unwrap_err(),
            Error::PairOutOfRange(0, 7)
        );

        let partial = Relation::general(&x, &y, vec![(0, 0), (1, 1)]).unwrap();
        assert_eq!(partial.kind(), RelationKind::General);
        assert!(!partial.is_correspondence());
    }

    #[test]
    fn distortion_of_named_relations() {
        let x = line();
        let y = FiniteMetricSpace::simplex(2, 5.0);

        // Blocks {0,1} -> simplex point 0, {2} -> simplex point 1.
        let r = Relation::correspondence(&x, &y, vec![(0, 0), (1, 0), (2, 1)]).unwrap();
        assert_eq!(r.distortion(), 5.0);

        // The full product always distorts by the larger diameter.
        let full = Relation::full_product(&x, &y);
        assert_eq!(full.distortion(), x.diameter().max(y.diameter()));

        // A single related pair has zero distortion.
        let single = Relation::general(&x, &y, vec![(0, 0)]).unwrap();
        assert_eq!(single.distortion(), 0.0);

        // Identity on equal spaces.
        let x2 = line();
        let id = Relation::from_bijection(&x, &x2, &[0, 1, 2]).unwrap();
        assert_eq!(id.distortion(), 0.0);
    }

    #[test]
    fn irreducibility_is_the_singleton_side_criterion() {
        let x = line();
        let y = FiniteMetricSpace::simplex(2, 5.0);

        let blocks = Relation::correspondence(&x, &y, vec![(0, 0), (1, 0), (2, 1)]).unwrap();
        assert!(blocks.is_irreducible().unwrap());

        // Full product on 3 x 2 points: every pair is doubly covered somewhere.
        let full = Relation::full_product(&x, &y);
        assert!(!full.is_irreducible().unwrap());

        // A 2 x 2 block inside a correspondence makes it reducible.
        let y3 = line();
        let r = Relation::correspondence(
            &x,
            &y3,
            vec![(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)],
        )
        .unwrap();
        assert!(!r.is_irreducible().unwrap());

        let partial = Relation::general(&x, &y, vec![(0, 0)]).unwrap();
        assert_eq!(partial.is_irreducible(), Err(Error::NotACorrespondence));
    }
}
