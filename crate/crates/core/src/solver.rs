//! Exact Gromov-Hausdorff solvers.
//!
//! `gh_exact` minimizes distortion over block correspondences whose matched
//! block pairs each have a one-point side. Those are exactly the expansions of
//! irreducible correspondences, and some optimal correspondence is always of
//! this shape, so the restriction loses nothing while shrinking the search
//! space drastically.
//!
//! The search builds blocks incrementally and carries the distortion of the
//! committed point pairs as a lower bound: every term of the block-wise
//! distortion formula only grows as blocks gain points, so a partial value
//! already at the incumbent prunes the branch. Interchangeable points (points
//! whose transposition is an isometry) are deduplicated: only the
//! lowest-index free representative of a class is tried as a new anchor, and
//! within a class the phase-two assignments use non-decreasing block indices.
//! Both rules only drop leaves isomorphic to surviving ones.
//!
//! Everything here is deterministic: branches are explored lowest block index
//! first, and the reported witness is the first optimum in that order.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pairs::pair_count;
use crate::partition::{enumerate_partitions, BlockCorrespondence, Partition};
use crate::perm::{all_perms, Perm};
use crate::space::{FiniteMetricSpace, GAP_THRESHOLD};

/// Exact Gromov-Hausdorff distance and an optimal block correspondence.
pub fn gh_exact(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> (f64, BlockCorrespondence) {
    // Expand the side with more isometry classes: a symmetric anchor side
    // collapses under class deduplication, a symmetric expanded side does not.
    let x_classes = class_count(x);
    let y_classes = class_count(y);
    let swap = match y_classes.cmp(&x_classes) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => y.len() > x.len(),
    };
    let (expanded, anchors) = if swap { (y, x) } else { (x, y) };
    let mut search = BlockSearch::new(expanded, anchors);
    search.phase_one(0, 0.0);
    let (dis, blocks) = search.best.expect("block search always reaches a leaf");
    let pairs = blocks
        .into_iter()
        .map(|(e, a)| if swap { (a, e) } else { (e, a) })
        .collect();
    let witness = BlockCorrespondence::from_matched_blocks(x.len(), y.len(), pairs)
        .expect("search blocks partition both sides");
    (0.5 * dis, witness)
}

/// Exhaustive minimum over every one-point-sided block correspondence; slow
/// reference backend for cross-checking `gh_exact`.
pub fn gh_exact_blocks(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
) -> Result<(f64, BlockCorrespondence)> {
    const LIMIT: usize = 6;
    if x.len() > LIMIT || y.len() > LIMIT {
        return Err(Error::TooLarge(x.len().max(y.len()), LIMIT));
    }
    let mut best = f64::INFINITY;
    let mut witness = None;
    for k in 1..=x.len().min(y.len()) {
        for left in enumerate_partitions(x.len(), k)? {
            for right in enumerate_partitions(y.len(), k)? {
                for matching in all_perms(k) {
                    let pairs: Vec<(Vec<usize>, Vec<usize>)> = (0..k)
                        .map(|i| {
                            (
                                left.blocks()[i].clone(),
                                right.blocks()[matching.apply(i)].clone(),
                            )
                        })
                        .collect();
                    if !pairs.iter().all(|(l, r)| l.len() == 1 || r.len() == 1) {
                        continue;
                    }
                    let bc =
                        BlockCorrespondence::from_matched_blocks(x.len(), y.len(), pairs)?;
                    let dis = bc.distortion(x, y)?;
                    if dis < best {
                        best = dis;
                        witness = Some(bc);
                    }
                }
            }
        }
    }
    Ok((0.5 * best, witness.expect("at least one block correspondence exists")))
}

/// Minimum half-distortion over bijections, with the first optimal bijection
/// in lexicographic order. Errors unless the spaces have equal cardinality.
pub fn gh_bijective(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
) -> Result<(f64, Perm)> {
    if x.len() != y.len() {
        return Err(Error::CardinalityMismatch);
    }
    let n = x.len();
    let mut best = f64::INFINITY;
    let mut best_images = vec![0usize; n];
    let mut images = vec![0usize; n];
    let mut used = vec![false; n];

    fn descend(
        x: &FiniteMetricSpace,
        y: &FiniteMetricSpace,
        pos: usize,
        partial: f64,
        images: &mut Vec<usize>,
        used: &mut Vec<bool>,
        best: &mut f64,
        best_images: &mut Vec<usize>,
    ) {
        let n = x.len();
        if pos == n {
            *best = partial;
            best_images.copy_from_slice(images);
            return;
        }
        for img in 0..n {
            if used[img] {
                continue;
            }
            let mut next = partial;
            for j in 0..pos {
                next = next.max((x.distance(pos, j) - y.distance(img, images[j])).abs());
            }
            if next < *best {
                images[pos] = img;
                used[img] = true;
                descend(x, y, pos + 1, next, images, used, best, best_images);
                used[img] = false;
            }
        }
    }

    descend(x, y, 0, 0.0, &mut images, &mut used, &mut best, &mut best_images);
    Ok((0.5 * best, Perm::from_images(best_images)?))
}

/// `d_k(X)`: the smallest possible largest block diameter over partitions of
/// `X` into exactly `k` blocks, with a witness. `(+∞, None)` when `k` exceeds
/// the point count, i.e. no such partition exists.
pub fn min_diameter_partition(
    x: &FiniteMetricSpace,
    k: usize,
) -> Result<(f64, Option<Partition>)> {
    if k == 0 {
        return Err(Error::BadBlockCount(k, x.len()));
    }
    let n = x.len();
    if k > n {
        return Ok((f64::INFINITY, None));
    }
    let mut best = f64::INFINITY;
    let mut best_labels = vec![0usize; n];
    let mut labels = vec![0usize; n];

    fn descend(
        x: &FiniteMetricSpace,
        k: usize,
        pos: usize,
        blocks_used: usize,
        partial: f64,
        labels: &mut Vec<usize>,
        best: &mut f64,
        best_labels: &mut Vec<usize>,
    ) {
        let n = x.len();
        if pos == n {
            *best = partial;
            best_labels.copy_from_slice(labels);
            return;
        }
        // Remaining points must still be able to open the missing blocks.
        let max_label = blocks_used.min(k - 1);
        for label in 0..=max_label {
            let opened = blocks_used + usize::from(label == blocks_used);
            if k - opened > n - pos - 1 {
                continue;
            }
            let mut next = partial;
            for j in 0..pos {
                if labels[j] == label {
                    next = next.max(x.distance(pos, j));
                }
            }
            if next < *best {
                labels[pos] = label;
                descend(x, k, pos + 1, opened, next, labels, best, best_labels);
            }
        }
    }

    descend(x, k, 0, 0, 0.0, &mut labels, &mut best, &mut best_labels);
    Ok((best, Some(Partition::from_labels(&best_labels))))
}

/// A pair of equal-size spaces whose best bijection is strictly worse than
/// their Gromov-Hausdorff distance.
#[derive(Debug, Clone)]
pub struct GapWitness {
    pub x: FiniteMetricSpace,
    pub y: FiniteMetricSpace,
    pub exact: f64,
    pub bijective: f64,
    /// 0-based index of the trial that produced the pair.
    pub trial: u64,
    /// The expansion of the optimal block correspondence.
    pub correspondence: Vec<(usize, usize)>,
}

/// Sampling range that makes bijection gaps reachable: wide enough that
/// collapsing two points into one block can pay for itself (with distances
/// near a common value, every merge costs more than the best bijection).
pub const DEFAULT_DIST_RANGE: (f64, f64) = (0.5, 1.5);

/// Draws random valid spaces (uniform i.i.d. distances on `dist_range`,
/// rejection-sampled against triangle violations).
pub fn sample_space<R: Rng>(
    rng: &mut R,
    n: usize,
    dist_range: (f64, f64),
) -> Result<FiniteMetricSpace> {
    let (lo, hi) = dist_range;
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(Error::BadRange);
    }
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    loop {
        let rho: Vec<f64> = (0..pair_count(n)).map(|_| rng.gen_range(lo..=hi)).collect();
        if let Ok(space) = FiniteMetricSpace::from_condensed(n, rho) {
            return Ok(space);
        }
    }
}

/// Searches seeded random pairs of `points`-point spaces for a bijection gap
/// larger than [`GAP_THRESHOLD`]; returns the first witness, or `None` after
/// `trials` gap-free trials. Two-point spaces can never gap, and one point is
/// trivial, so `points >= 3` is required.
pub fn bijection_gap_search(
    points: usize,
    trials: u64,
    seed: u64,
    dist_range: (f64, f64),
) -> Result<Option<GapWitness>> {
    if points < 3 {
        return Err(Error::TooFewPoints);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let x = sample_space(&mut rng, points, dist_range)?;
        let y = sample_space(&mut rng, points, dist_range)?;
        let (exact, witness) = gh_exact(&x, &y);
        let (bijective, _) = gh_bijective(&x, &y)?;
        if bijective - exact > GAP_THRESHOLD {
            return Ok(Some(GapWitness {
                x,
                y,
                exact,
                bijective,
                trial,
                correspondence: witness.expand(),
            }));
        }
    }
    Ok(None)
}

/// Point classes under "swapping the two points is an isometry".
fn isometry_classes(space: &FiniteMetricSpace) -> Vec<usize> {
    let n = space.len();
    let mut class = vec![0usize; n];
    for i in 0..n {
        class[i] = i;
        for j in 0..i {
            let swappable = (0..n)
                .filter(|&z| z != i && z != j)
                .all(|z| space.distance(i, z) == space.distance(j, z));
            if swappable {
                class[i] = class[j];
                break;
            }
        }
    }
    class
}

fn class_count(space: &FiniteMetricSpace) -> usize {
    let classes = isometry_classes(space);
    classes.iter().enumerate().filter(|&(i, &c)| c == i).count()
}

struct Block {
    xs: Vec<usize>,
    ys: Vec<usize>,
    star: bool,
}

/// Branch-and-bound state; `ex` is the expanded side, `an` the anchor side.
struct BlockSearch<'a> {
    ex: &'a FiniteMetricSpace,
    an: &'a FiniteMetricSpace,
    an_class: Vec<usize>,
    an_free: Vec<bool>,
    free_count: usize,
    star_count: usize,
    /// Points still missing from stars that must reach two anchor points.
    star_deficit: usize,
    blocks: Vec<Block>,
    /// Last phase-two block index used per anchor class, for the
    /// non-decreasing canonical order within a class.
    class_last_block: Vec<Option<usize>>,
    global_lb: f64,
    best: Option<(f64, Vec<(Vec<usize>, Vec<usize>)>)>,
}

impl<'a> BlockSearch<'a> {
    fn new(ex: &'a FiniteMetricSpace, an: &'a FiniteMetricSpace) -> Self {
        let an_class = isometry_classes(an);
        Self {
            ex,
            an,
            an_free: vec![true; an.len()],
            free_count: an.len(),
            star_count: 0,
            star_deficit: 0,
            blocks: Vec::new(),
            class_last_block: vec![None; an.len()],
            an_class,
            global_lb: (ex.diameter() - an.diameter()).abs(),
            best: None,
        }
    }

    fn best_value(&self) -> f64 {
        self.best.as_ref().map_or(f64::INFINITY, |(v, _)| *v)
    }

    fn record(&mut self, value: f64) {
        let blocks = self
            .blocks
            .iter()
            .map(|b| (b.xs.clone(), b.ys.clone()))
            .collect();
        self.best = Some((value, blocks));
    }

    /// Distortion terms a new cell `(e, anchor)` adds against committed cells
    /// of other anchored blocks.
    fn cross_terms(&self, e: usize, anchor: usize, skip: usize) -> f64 {
        let mut t: f64 = 0.0;
        for (k, block) in self.blocks.iter().enumerate() {
            if k == skip || block.star {
                continue;
            }
            let dyy = self.an.distance(anchor, block.ys[0]);
            for &x2 in &block.xs {
                t = t.max((self.ex.distance(e, x2) - dyy).abs());
            }
        }
        t
    }

    fn phase_one(&mut self, e: usize, bound: f64) {
        if self.best_value() <= self.global_lb {
            return;
        }
        if e == self.ex.len() {
            if self.star_count == 0 && self.free_count > 0 {
                return;
            }
            self.phase_two(0, bound);
            return;
        }

        // Join an existing anchored block, lowest index first.
        for j in 0..self.blocks.len() {
            if self.blocks[j].star {
                continue;
            }
            let mut next = bound.max(self.cross_terms(e, self.blocks[j].ys[0], j));
            for &x2 in &self.blocks[j].xs {
                next = next.max(self.ex.distance(e, x2));
            }
            if next < self.best_value() {
                self.blocks[j].xs.push(e);
                self.phase_one(e + 1, next);
                self.blocks[j].xs.pop();
            }
        }

        // Open a new anchored block — it consumes one free anchor, and the
        // rest must still cover two per open star block. Only the lowest
        // free anchor per interchangeability class is tried.
        if self.free_count > 2 * self.star_count {
            let mut tried = Vec::new();
            for a in 0..self.an.len() {
                if !self.an_free[a] || tried.contains(&self.an_class[a]) {
                    continue;
                }
                tried.push(self.an_class[a]);
                let next = bound.max(self.cross_terms(e, a, usize::MAX));
                if next < self.best_value() {
                    self.an_free[a] = false;
                    self.free_count -= 1;
                    self.blocks.push(Block { xs: vec![e], ys: vec![a], star: false });
                    self.phase_one(e + 1, next);
                    self.blocks.pop();
                    self.free_count += 1;
                    self.an_free[a] = true;
                }
            }
        }

        // Open a star block (one expanded point, several anchor points).
        if self.free_count >= 2 * (self.star_count + 1) && bound < self.best_value() {
            self.blocks.push(Block { xs: vec![e], ys: Vec::new(), star: true });
            self.star_count += 1;
            self.star_deficit += 2;
            self.phase_one(e + 1, bound);
            self.star_deficit -= 2;
            self.star_count -= 1;
            self.blocks.pop();
        }
    }

    fn phase_two(&mut self, from: usize, bound: f64) {
        if self.best_value() <= self.global_lb {
            return;
        }
        let a = match (from..self.an.len()).find(|&a| self.an_free[a]) {
            Some(a) => a,
            None => {
                debug_assert_eq!(self.star_deficit, 0);
                self.record(bound);
                return;
            }
        };

        let class = self.an_class[a];
        let min_block = self.class_last_block[class].unwrap_or(0);
        for s in min_block..self.blocks.len() {
            if !self.blocks[s].star {
                continue;
            }
            // Filling a short star reduces the deficit; otherwise the
            // remaining free anchors must still cover it.
            let fills = self.blocks[s].ys.len() < 2;
            let deficit_after = self.star_deficit - usize::from(fills);
            if self.free_count - 1 < deficit_after {
                continue;
            }
            let x0 = self.blocks[s].xs[0];
            let mut next = bound.max(self.cross_terms(x0, a, s));
            for &y2 in &self.blocks[s].ys {
                next = next.max(self.an.distance(a, y2));
            }
            for (k, block) in self.blocks.iter().enumerate() {
                if k == s || !block.star {
                    continue;
                }
                let dxx = self.ex.distance(x0, block.xs[0]);
                for &y2 in &block.ys {
                    next = next.max((dxx - self.an.distance(a, y2)).abs());
                }
            }
            if next < self.best_value() {
                self.an_free[a] = false;
                self.free_count -= 1;
                self.star_deficit = deficit_after;
                self.blocks[s].ys.push(a);
                let saved = self.class_last_block[class];
                self.class_last_block[class] = Some(s);
                self.phase_two(a + 1, next);
                self.class_last_block[class] = saved;
                self.blocks[s].ys.pop();
                self.star_deficit += usize::from(fills);
                self.free_count += 1;
                self.an_free[a] = true;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> FiniteMetricSpace {
        FiniteMetricSpace::from_condensed(3, vec![1.0, 10.0, 9.0]).unwrap()
    }

    #[test]
    fn one_point_space_gives_half_diameter() {
        let x = line();
        let one = FiniteMetricSpace::simplex(1, 1.0);
        let (d, w) = gh_exact(&x, &one);
        assert_eq!(d, 5.0);
        assert_eq!(w.expand(), vec![(0, 0), (1, 0), (2, 0)]);
        let (d2, _) = gh_exact(&one, &x);
        assert_eq!(d2, 5.0);
        let (d3, _) = gh_exact(&one, &one);
        assert_eq!(d3, 0.0);
    }

    #[test]
    fn identical_spaces_are_at_distance_zero() {
        let x = line();
        let y = line();
        let (d, w) = gh_exact(&x, &y);
        assert_eq!(d, 0.0);
        assert_eq!(w.expand(), vec![(0, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn line_vs_two_point_simplex() {
        // Known by partition enumeration: 2 d = 5 via blocks {0,1} | {2}.
        let x = line();
        let y = FiniteMetricSpace::simplex(2, 5.0);
        let (d, w) = gh_exact(&x, &y);
        assert_eq!(d, 2.5);
        assert_eq!(w.expand(), vec![(0, 0), (1, 0), (2, 1)]);
        let dis = crate::relation::Relation::correspondence(&x, &y, w.expand())
            .unwrap()
            .distortion();
        assert_eq!(dis, 5.0);
    }

    #[test]
    fn simplex_scaling_identity() {
        // Same simplex at two scales: 2 d = |t - s| on equal point counts.
        for n in 1..=5 {
            let a = FiniteMetricSpace::simplex(n, 2.0);
            let b = FiniteMetricSpace::simplex(n, 3.0);
            let (d, _) = gh_exact(&a, &b);
            if n == 1 {
                assert_eq!(d, 0.0);
            } else {
                assert_eq!(d, 0.5);
            }
        }
    }

    #[test]
    fn agrees_with_block_enumeration_on_fixtures() {
        let fixtures: Vec<(FiniteMetricSpace, FiniteMetricSpace)> = vec![
            (line(), FiniteMetricSpace::simplex(2, 5.0)),
            (line(), FiniteMetricSpace::simplex(4, 3.0)),
            (
                FiniteMetricSpace::from_condensed(4, vec![1.0, 5.0, 6.0, 4.0, 5.0, 1.0]).unwrap(),
                FiniteMetricSpace::from_condensed(3, vec![3.0, 4.0, 5.0]).unwrap(),
            ),
            (
                FiniteMetricSpace::simplex(5, 2.0),
                FiniteMetricSpace::from_condensed(4, vec![1.0, 1.5, 2.0, 1.2, 1.8, 1.1]).unwrap(),
            ),
        ];
        for (x, y) in &fixtures {
            let (fast, witness) = gh_exact(x, y);
            let (slow, _) = gh_exact_blocks(x, y).unwrap();
            assert_eq!(fast, slow);
            // The witness must achieve the value as a raw correspondence.
            let rel =
                crate::relation::Relation::correspondence(x, y, witness.expand()).unwrap();
            assert_eq!(rel.distortion(), 2.0 * fast);
            assert!(witness.is_singleton_sided() || witness.k() == 1);
            // Symmetry of the distance itself.
            let (back, _) = gh_exact(y, x);
            assert_eq!(fast, back);
        }
    }

    #[test]
    fn bijective_matches_brute_force_and_orders_ties() {
        let x = FiniteMetricSpace::from_condensed(3, vec![3.0, 4.0, 5.0]).unwrap();
        let y = FiniteMetricSpace::from_condensed(3, vec![4.0, 3.0, 5.0]).unwrap();
        let (d, p) = gh_bijective(&x, &y).unwrap();
        assert_eq!(d, 0.0);
        // Swapping points 1 and 2 of y matches x; identity does not.
        assert_eq!(p.images(), &[0, 2, 1]);

        let brute = all_perms(3)
            .map(|q| {
                let mut dis: f64 = 0.0;
                for i in 0..3 {
                    for j in i + 1..3 {
                        dis = dis
                            .max((x.distance(i, j) - y.distance(q.apply(i), q.apply(j))).abs());
                    }
                }
                dis
            })
            .fold(f64::INFINITY, f64::min);
        assert_eq!(2.0 * d, brute);

        let z = FiniteMetricSpace::simplex(2, 1.0);
        assert_eq!(gh_bijective(&x, &z), Err(Error::CardinalityMismatch));
    }

    #[test]
    fn bijective_never_beats_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let n = rng.gen_range(1..=5);
            let x = sample_space(&mut rng, n, (1.0, 2.0)).unwrap();
            let y = sample_space(&mut rng, n, (1.0, 2.0)).unwrap();
            let (exact, _) = gh_exact(&x, &y);
            let (bij, _) = gh_bijective(&x, &y).unwrap();
            assert!(bij >= exact - 1e-12);
        }
    }

    #[test]
    fn min_diameter_partition_on_the_line() {
        let x = line();
        let (d1, w1) = min_diameter_partition(&x, 1).unwrap();
        assert_eq!(d1, 10.0);
        assert_eq!(w1.unwrap().k(), 1);
        let (d2, w2) = min_diameter_partition(&x, 2).unwrap();
        assert_eq!(d2, 1.0);
        assert_eq!(w2.unwrap().blocks(), &[vec![0, 1], vec![2]]);
        let (d3, w3) = min_diameter_partition(&x, 3).unwrap();
        assert_eq!(d3, 0.0);
        assert_eq!(w3.unwrap().k(), 3);
        let (d4, w4) = min_diameter_partition(&x, 4).unwrap();
        assert_eq!(d4, f64::INFINITY);
        assert!(w4.is_none());
        assert!(min_diameter_partition(&x, 0).is_err());
    }

    #[test]
    fn min_diameter_is_monotone_in_block_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = rng.gen_range(2..=7);
            let x = sample_space(&mut rng, n, (1.0, 2.0)).unwrap();
            let mut prev = f64::INFINITY;
            for k in 1..=n {
                let (d, _) = min_diameter_partition(&x, k).unwrap();
                assert!(d <= prev + 1e-15, "d_{k} should not exceed d_{}", k - 1);
                prev = d;
            }
            assert_eq!(min_diameter_partition(&x, n).unwrap().0, 0.0);
        }
    }

    #[test]
    fn sampling_is_deterministic_and_valid() {
        let mut a = ChaCha8Rng::seed_from_u64(42);
        let mut b = ChaCha8Rng::seed_from_u64(42);
        let x = sample_space(&mut a, 6, (0.5, 1.5)).unwrap();
        let y = sample_space(&mut b, 6, (0.5, 1.5)).unwrap();
        assert_eq!(x, y);
        assert!(sample_space(&mut a, 3, (0.0, 1.0)).is_err());
        assert!(sample_space(&mut a, 3, (2.0, 1.0)).is_err());
    }

    #[test]
    fn gap_search_rejects_tiny_point_counts() {
        assert_eq!(
            bijection_gap_search(2, 10, 1, (1.0, 2.0)).unwrap_err(),
            Error::TooFewPoints
        );
    }

    #[test]
    fn isometry_classes_detect_symmetry() {
        let simplex = FiniteMetricSpace::simplex(5, 1.0);
        assert_eq!(class_count(&simplex), 1);
        let generic =
            FiniteMetricSpace::from_condensed(3, vec![3.0, 4.0, 5.0]).unwrap();
        assert_eq!(class_count(&generic), 3);
        let isoceles =
            FiniteMetricSpace::from_condensed(3, vec![3.0, 3.0, 5.0]).unwrap();
        // Points 1 and 2 are interchangeable.
        assert_eq!(class_count(&isoceles), 2);
        let two = FiniteMetricSpace::simplex(2, 1.0);
        assert_eq!(class_count(&two), 1);
    }
}
