//! Partitions of a point set and block-structured correspondences.
//!
//! Partitions are stored canonically: every block ascending, blocks ordered by
//! their smallest element. Enumeration walks restricted growth strings, so
//! each partition into exactly `k` blocks appears once, in a fixed order.

use crate::error::{Error, Result};
use crate::space::FiniteMetricSpace;

/// A partition of `{0, …, n-1}` into nonempty blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Validates and canonicalizes a block list.
    pub fn from_blocks(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut total = 0;
        for block in &mut blocks {
            block.sort_unstable();
            if block.is_empty() {
                return Err(Error::MalformedPartition);
            }
            for &i in block.iter() {
                if i >= n || seen[i] {
                    return Err(Error::MalformedPartition);
                }
                seen[i] = true;
                total += 1;
            }
        }
        if total != n {
            return Err(Error::MalformedPartition);
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(Self { n, blocks })
    }

    /// Builds a partition from a block label per point (labels need not be
    /// contiguous; block order follows smallest members).
    pub fn from_labels(labels: &[usize]) -> Self {
        let n = labels.len();
        let k = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); k];
        for (i, &l) in labels.iter().enumerate() {
            blocks[l].push(i);
        }
        blocks.retain(|b| !b.is_empty());
        blocks.sort_by_key(|b| b[0]);
        Self { n, blocks }
    }

    pub fn singletons(n: usize) -> Self {
        Self { n, blocks: (0..n).map(|i| vec![i]).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of blocks.
    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    fn check_space(&self, space: &FiniteMetricSpace) -> Result<()> {
        if space.len() == self.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch)
        }
    }

    /// Largest diameter of a block: `max_i diam B_i`.
    pub fn diam(&self, space: &FiniteMetricSpace) -> Result<f64> {
        self.check_space(space)?;
        let mut best: f64 = 0.0;
        for block in &self.blocks {
            for (a, &i) in block.iter().enumerate() {
                for &j in &block[a + 1..] {
                    best = best.max(space.distance(i, j));
                }
            }
        }
        Ok(best)
    }

    /// Smallest distance between two different blocks; `+∞` for one block.
    pub fn alpha(&self, space: &FiniteMetricSpace) -> Result<f64> {
        self.check_space(space)?;
        let mut best = f64::INFINITY;
        for (bi, bs) in self.blocks.iter().enumerate() {
            for other in &self.blocks[bi + 1..] {
                for &i in bs {
                    for &j in other {
                        best = best.min(space.distance(i, j));
                    }
                }
            }
        }
        Ok(best)
    }

    /// Largest distance between two different blocks; `0` for one block.
    pub fn beta(&self, space: &FiniteMetricSpace) -> Result<f64> {
        self.check_space(space)?;
        let mut best: f64 = 0.0;
        for (bi, bs) in self.blocks.iter().enumerate() {
            for other in &self.blocks[bi + 1..] {
                for &i in bs {
                    for &j in other {
                        best = best.max(space.distance(i, j));
                    }
                }
            }
        }
        Ok(best)
    }
}

/// Lazily enumerates every partition of `{0, …, n-1}` into exactly `k`
/// blocks, in restricted-growth-string order.
pub fn enumerate_partitions(n: usize, k: usize) -> Result<PartitionIter> {
    if k == 0 || k > n {
        return Err(Error::BadBlockCount(k, n));
    }
    Ok(PartitionIter { labels: vec![0; n], k, done: false })
}

pub struct PartitionIter {
    labels: Vec<usize>,
    k: usize,
    done: bool,
}

impl PartitionIter {
    /// Advances to the next restricted growth string with labels `< k`.
    fn advance(&mut self) -> bool {
        let n = self.labels.len();
        let mut prefix_max = vec![0usize; n];
        for i in 1..n {
            prefix_max[i] = prefix_max[i - 1].max(self.labels[i - 1]);
        }
        for i in (1..n).rev() {
            if self.labels[i] <= prefix_max[i] && self.labels[i] + 1 < self.k {
                self.labels[i] += 1;
                for l in &mut self.labels[i + 1..] {
                    *l = 0;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        while !self.done {
            let hits_k = self.labels.iter().copied().max() == Some(self.k - 1);
            let item = if hits_k { Some(Partition::from_labels(&self.labels)) } else { None };
            self.done = !self.advance();
            if item.is_some() {
                return item;
            }
        }
        None
    }
}

/// Matched partitions of two point sets: block `i` on the left corresponds to
/// block `i` on the right. Expanding the matched block products gives a
/// correspondence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCorrespondence {
    n_left: usize,
    n_right: usize,
    pairs: Vec<(Vec<usize>, Vec<usize>)>,
}

impl BlockCorrespondence {
    /// Matches two partitions block-by-block in their canonical order.
    pub fn new(left: Partition, right: Partition) -> Result<Self> {
        if left.k() != right.k() {
            return Err(Error::MismatchedBlocks);
        }
        let (n_left, n_right) = (left.n, right.n);
        let pairs = left.blocks.into_iter().zip(right.blocks).collect();
        Self::from_matched_blocks(n_left, n_right, pairs)
    }

    /// Builds from explicit matched block pairs; each side must be a
    /// partition of its point set. Pairs are reordered by smallest left
    /// member.
    pub fn from_matched_blocks(
        n_left: usize,
        n_right: usize,
        mut pairs: Vec<(Vec<usize>, Vec<usize>)>,
    ) -> Result<Self> {
        let lefts: Vec<Vec<usize>> = pairs.iter().map(|(l, _)| l.clone()).collect();
        let rights: Vec<Vec<usize>> = pairs.iter().map(|(_, r)| r.clone()).collect();
        Partition::from_blocks(n_left, lefts)?;
        Partition::from_blocks(n_right, rights)?;
        for (l, r) in &mut pairs {
            l.sort_unstable();
            r.sort_unstable();
        }
        pairs.sort_by_key(|(l, _)| l[0]);
        Ok(Self { n_left, n_right, pairs })
    }

    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    /// The matched block pairs, ordered by smallest left member.
    pub fn matched_blocks(&self) -> &[(Vec<usize>, Vec<usize>)] {
        &self.pairs
    }

    pub fn left_partition(&self) -> Partition {
        Partition::from_blocks(self.n_left, self.pairs.iter().map(|(l, _)| l.clone()).collect())
            .expect("left side is a partition by construction")
    }

    pub fn right_partition(&self) -> Partition {
        Partition::from_blocks(self.n_right, self.pairs.iter().map(|(_, r)| r.clone()).collect())
            .expect("right side is a partition by construction")
    }

    /// The union of the matched block products, as a sorted pair list.
    pub fn expand(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (bx, by) in &self.pairs {
            for &i in bx {
                for &j in by {
                    out.push((i, j));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Whether every matched block pair has a one-point side — exactly the
    /// irreducible expansions.
    pub fn is_singleton_sided(&self) -> bool {
        self.pairs.iter().all(|(bx, by)| bx.len() == 1 || by.len() == 1)
    }

    /// Distortion of the expansion, evaluated block-wise: the largest of all
    /// block diameters on either side and, for every block pair, of
    /// `sup|X_i X_j| - inf|Y_i Y_j|` and `sup|Y_i Y_j| - inf|X_i X_j|`.
    pub fn distortion(&self, x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Result<f64> {
        if x.len() != self.n_left || y.len() != self.n_right {
            return Err(Error::DimensionMismatch);
        }
        let mut dis: f64 = 0.0;
        for (bx, by) in &self.pairs {
            for (a, &i) in bx.iter().enumerate() {
                for &j in &bx[a + 1..] {
                    dis = dis.max(x.distance(i, j));
                }
            }
            for (a, &i) in by.iter().enumerate() {
                for &j in &by[a + 1..] {
                    dis = dis.max(y.distance(i, j));
                }
            }
        }
        let k = self.k();
        for a in 0..k {
            for b in a + 1..k {
                let (mut x_inf, mut x_sup) = (f64::INFINITY, f64::NEG_INFINITY);
                for &i in &self.pairs[a].0 {
                    for &j in &self.pairs[b].0 {
                        let d = x.distance(i, j);
                        x_inf = x_inf.min(d);
                        x_sup = x_sup.max(d);
                    }
                }
                let (mut y_inf, mut y_sup) = (f64::INFINITY, f64::NEG_INFINITY);
                for &i in &self.pairs[a].1 {
                    for &j in &self.pairs[b].1 {
                        let d = y.distance(i, j);
                        y_inf = y_inf.min(d);
                        y_sup = y_sup.max(d);
                    }
                }
                dis = dis.max(x_sup - y_inf).max(y_sup - x_inf);
            }
        }
        Ok(dis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::Relation;

    fn line() -> FiniteMetricSpace {
        FiniteMetricSpace::from_condensed(3, vec![1.0, 10.0, 9.0]).unwrap()
    }

    #[test]
    fn canonical_form_and_validation() {
        let p = Partition::from_blocks(4, vec![vec![3, 1], vec![2, 0]]).unwrap();
        assert_eq!(p.blocks(), &[vec![0, 2], vec![1, 3]]);
        assert!(Partition::from_blocks(3, vec![vec![0, 1]]).is_err());
        assert!(Partition::from_blocks(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::from_blocks(3, vec![vec![0, 1, 2], vec![]]).is_err());
        assert!(Partition::from_blocks(2, vec![vec![0, 1, 2]]).is_err());
    }

    #[test]
    fn enumeration_matches_hand_counts() {
        let threes: Vec<Partition> = enumerate_partitions(3, 2).unwrap().collect();
        assert_eq!(
            threes.iter().map(|p| p.blocks().to_vec()).collect::<Vec<_>>(),
            vec![
                vec![vec![0, 1], vec![2]],
                vec![vec![0, 2], vec![1]],
                vec![vec![0], vec![1, 2]],
            ]
        );
        assert_eq!(enumerate_partitions(4, 2).unwrap().count(), 7);
        assert_eq!(enumerate_partitions(4, 1).unwrap().count(), 1);
        assert_eq!(enumerate_partitions(4, 4).unwrap().count(), 1);
        assert!(enumerate_partitions(3, 0).is_err());
        assert!(enumerate_partitions(3, 4).is_err());
    }

    #[test]
    fn enumeration_agrees_with_label_brute_force() {
        // Independent route: canonicalize all k^n labelings and dedupe.
        for n in 1..=6 {
            for k in 1..=n {
                let mut seen = std::collections::BTreeSet::new();
                let total = (k as u64).pow(n as u32);
                for code in 0..total {
                    let mut labels = Vec::with_capacity(n);
                    let mut c = code;
                    for _ in 0..n {
                        labels.push((c % k as u64) as usize);
                        c /= k as u64;
                    }
                    let distinct = labels.iter().collect::<std::collections::BTreeSet<_>>();
                    if distinct.len() == k {
                        seen.insert(Partition::from_labels(&labels).blocks().to_vec());
                    }
                }
                let enumerated: Vec<_> = enumerate_partitions(n, k)
                    .unwrap()
                    .map(|p| p.blocks().to_vec())
                    .collect();
                assert_eq!(enumerated.len(), seen.len(), "count at n={n} k={k}");
                assert!(enumerated.iter().all(|b| seen.contains(b)));
            }
        }
    }

    #[test]
    fn functionals_on_the_line() {
        let x = line();
        let d = Partition::from_blocks(3, vec![vec![0, 1], vec![2]]).unwrap();
        assert_eq!(d.diam(&x).unwrap(), 1.0);
        assert_eq!(d.alpha(&x).unwrap(), 9.0);
        assert_eq!(d.beta(&x).unwrap(), 10.0);

        let whole = Partition::from_blocks(3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(whole.diam(&x).unwrap(), 10.0);
        assert_eq!(whole.alpha(&x).unwrap(), f64::INFINITY);
        assert_eq!(whole.beta(&x).unwrap(), 0.0);

        let wrong = FiniteMetricSpace::simplex(4, 1.0);
        assert!(d.diam(&wrong).is_err());
    }

    #[test]
    fn block_distortion_equals_expansion_distortion() {
        let x = line();
        let y = FiniteMetricSpace::simplex(2, 5.0);
        let bc = BlockCorrespondence::new(
            Partition::from_blocks(3, vec![vec![0, 1], vec![2]]).unwrap(),
            Partition::singletons(2),
        )
        .unwrap();
        assert!(bc.is_singleton_sided());
        assert_eq!(bc.expand(), vec![(0, 0), (1, 0), (2, 1)]);
        let expanded = Relation::correspondence(&x, &y, bc.expand()).unwrap();
        assert_eq!(bc.distortion(&x, &y).unwrap(), 5.0);
        assert_eq!(bc.distortion(&x, &y).unwrap(), expanded.distortion());

        let product = BlockCorrespondence::new(
            Partition::from_blocks(3, vec![vec![0, 1, 2]]).unwrap(),
            Partition::from_blocks(2, vec![vec![0, 1]]).unwrap(),
        )
        .unwrap();
        assert!(!product.is_singleton_sided());
        assert_eq!(product.distortion(&x, &y).unwrap(), 10.0);

        assert!(BlockCorrespondence::new(
            Partition::singletons(2),
            Partition::singletons(3)
        )
        .is_err());
    }
}
