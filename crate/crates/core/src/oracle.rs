//! Brute-force reference solvers used to validate the main search.
//!
//! These enumerate raw correspondences — subsets of the point product that
//! are surjective onto both sides — with no structural shortcuts, so they
//! share no code path with the block search. Each row of the product is
//! assigned a nonempty column set; column coverage is checked at the leaves.
//! Cross-row distortion terms come from precomputed subset min/max tables:
//! the largest `|d - v|` over `v` in a set is `max(d - min, max - d)`.
//!
//! Everything here is exponential in the point counts and capped accordingly.

use crate::error::{Error, Result};
use crate::space::FiniteMetricSpace;

/// Largest side `full_enumeration` accepts.
pub const ENUM_LIMIT: usize = 5;
/// Largest side `exists_below` accepts.
pub const BOUND_LIMIT: usize = 7;

/// Outcome of exhaustive correspondence enumeration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnumerationOutcome {
    /// Minimum distortion over every correspondence (twice the distance).
    pub min_distortion: f64,
    /// Total number of correspondences between the two spaces.
    pub count: u64,
}

/// Minimum distortion and correspondence count by exhaustive enumeration.
/// The count doubles as a self-check: it must equal [`correspondence_count`].
pub fn full_enumeration(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
) -> Result<EnumerationOutcome> {
    let (m, n) = (x.len(), y.len());
    if m.max(n) > ENUM_LIMIT {
        return Err(Error::TooLarge(m.max(n), ENUM_LIMIT));
    }
    let tables = SubsetTables::new(y);
    let mut search = Enumeration {
        x,
        tables,
        full: (1u32 << n) - 1,
        rows: vec![0u32; m],
        best: f64::INFINITY,
        count: 0,
    };
    search.descend(0, 0, 0.0);
    Ok(EnumerationOutcome { min_distortion: search.best, count: search.count })
}

/// Whether some correspondence has distortion strictly below `bound`.
///
/// Branches whose partial distortion already reaches `bound` are cut, so this
/// stays feasible past the `full_enumeration` limit; a `false` answer is
/// still exhaustive and certifies `bound` as a valid lower bound.
pub fn exists_below(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    bound: f64,
) -> Result<bool> {
    let (m, n) = (x.len(), y.len());
    if m.max(n) > BOUND_LIMIT {
        return Err(Error::TooLarge(m.max(n), BOUND_LIMIT));
    }
    let tables = SubsetTables::new(y);
    let mut search = Bounded {
        x,
        tables,
        full: (1u32 << n) - 1,
        rows: vec![0u32; m],
        bound,
    };
    Ok(search.descend(0, 0, 0.0))
}

/// Number of correspondences between spaces of `m` and `n` points, counting
/// 0-1 matrices with no zero row or column by inclusion-exclusion over
/// excluded columns.
pub fn correspondence_count(m: usize, n: usize) -> u64 {
    let mut total: i128 = 0;
    let mut binom: i128 = 1;
    for k in 0..=n {
        let rows_ways = (1i128 << (n - k)) - 1;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        total += sign * binom * rows_ways.pow(m as u32);
        binom = binom * (n as i128 - k as i128) / (k as i128 + 1);
    }
    u64::try_from(total).expect("count is nonnegative and fits u64")
}

/// `min` and `max` of `rho_Y` over column-set pairs, indexed by bitmask.
struct SubsetTables {
    size: usize,
    min: Vec<f64>,
    max: Vec<f64>,
}

impl SubsetTables {
    fn new(y: &FiniteMetricSpace) -> Self {
        let n = y.len();
        let size = 1usize << n;
        let mut min = vec![f64::INFINITY; size * size];
        let mut max = vec![f64::NEG_INFINITY; size * size];
        for c in 0..n {
            for c2 in 0..n {
                let idx = (1 << c) * size + (1 << c2);
                min[idx] = y.distance(c, c2);
                max[idx] = min[idx];
            }
        }
        // Split off the lowest bit of a non-singleton set on either side.
        for s in 1..size {
            let low = s & s.wrapping_neg();
            let rest = s ^ low;
            for t in 1..size {
                if rest != 0 {
                    min[s * size + t] = min[low * size + t].min(min[rest * size + t]);
                    max[s * size + t] = max[low * size + t].max(max[rest * size + t]);
                } else if t & (t - 1) != 0 {
                    let t_low = t & t.wrapping_neg();
                    let t_rest = t ^ t_low;
                    min[s * size + t] = min[s * size + t_low].min(min[s * size + t_rest]);
                    max[s * size + t] = max[s * size + t_low].max(max[s * size + t_rest]);
                }
            }
        }
        Self { size, min, max }
    }

    #[inline]
    fn span(&self, s: u32, t: u32) -> (f64, f64) {
        let idx = s as usize * self.size + t as usize;
        (self.min[idx], self.max[idx])
    }
}

struct Enumeration<'a> {
    x: &'a FiniteMetricSpace,
    tables: SubsetTables,
    full: u32,
    rows: Vec<u32>,
    best: f64,
    count: u64,
}

impl Enumeration<'_> {
    fn descend(&mut self, row: usize, covered: u32, partial: f64) {
        if row == self.rows.len() {
            if covered == self.full {
                self.count += 1;
                if partial < self.best {
                    self.best = partial;
                }
            }
            return;
        }
        for s in 1..=self.full {
            // Columns sharing this row sit at x-distance zero.
            let mut next = partial.max(self.tables.span(s, s).1);
            for j in 0..row {
                let d = self.x.distance(row, j);
                let (lo, hi) = self.tables.span(s, self.rows[j]);
                next = next.max(d - lo).max(hi - d);
            }
            self.rows[row] = s;
            self.descend(row + 1, covered | s, next);
        }
    }
}

struct Bounded<'a> {
    x: &'a FiniteMetricSpace,
    tables: SubsetTables,
    full: u32,
    rows: Vec<u32>,
    bound: f64,
}

impl Bounded<'_> {
    fn descend(&mut self, row: usize, covered: u32, partial: f64) -> bool {
        if row == self.rows.len() {
            return covered == self.full;
        }
        for s in 1..=self.full {
            let mut next = partial.max(self.tables.span(s, s).1);
            for j in 0..row {
                if next >= self.bound {
                    break;
                }
                let d = self.x.distance(row, j);
                let (lo, hi) = self.tables.span(s, self.rows[j]);
                next = next.max(d - lo).max(hi - d);
            }
            if next >= self.bound {
                continue;
            }
            self.rows[row] = s;
            if self.descend(row + 1, covered | s, next) {
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{gh_exact, sample_space};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn counts_match_the_closed_formula() {
        assert_eq!(correspondence_count(1, 1), 1);
        assert_eq!(correspondence_count(2, 1), 1);
        assert_eq!(correspondence_count(1, 2), 1);
        assert_eq!(correspondence_count(2, 2), 7);
        assert_eq!(correspondence_count(3, 3), 265);
        assert_eq!(correspondence_count(4, 4), 41503);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (m, n) in [(1, 1), (2, 3), (3, 3), (4, 2), (4, 4)] {
            let x = sample_space(&mut rng, m, (1.0, 2.0)).unwrap();
            let y = sample_space(&mut rng, n, (1.0, 2.0)).unwrap();
            let out = full_enumeration(&x, &y).unwrap();
            assert_eq!(out.count, correspondence_count(m, n));
        }
    }

    #[test]
    fn enumeration_minimum_matches_the_block_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (m, n) in [(1, 1), (1, 3), (2, 2), (3, 3), (3, 4), (4, 4), (2, 5)] {
            let x = sample_space(&mut rng, m, (1.0, 2.0)).unwrap();
            let y = sample_space(&mut rng, n, (1.0, 2.0)).unwrap();
            let out = full_enumeration(&x, &y).unwrap();
            let (d, _) = gh_exact(&x, &y);
            assert_eq!(out.min_distortion, 2.0 * d, "disagreement at {m}x{n}");
        }
    }

    #[test]
    fn enumeration_minimum_on_a_known_fixture() {
        // Three collinear points against a two-point space: best split is
        // {0,1} | {2}, with distortion 5.
        let x = FiniteMetricSpace::from_condensed(3, vec![1.0, 10.0, 9.0]).unwrap();
        let y = FiniteMetricSpace::simplex(2, 5.0);
        let out = full_enumeration(&x, &y).unwrap();
        assert_eq!(out.min_distortion, 5.0);
        assert_eq!(out.count, correspondence_count(3, 2));
    }

    #[test]
    fn bounded_search_brackets_the_minimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            let x = sample_space(&mut rng, 4, (1.0, 2.0)).unwrap();
            let y = sample_space(&mut rng, 4, (1.0, 2.0)).unwrap();
            let min = full_enumeration(&x, &y).unwrap().min_distortion;
            assert!(exists_below(&x, &y, min + 1e-9).unwrap());
            assert!(!exists_below(&x, &y, min).unwrap());
            assert!(!exists_below(&x, &y, min - 1e-9).unwrap());
        }
    }

    #[test]
    fn size_limits_are_enforced() {
        let big = FiniteMetricSpace::simplex(6, 1.0);
        let small = FiniteMetricSpace::simplex(2, 1.0);
        assert_eq!(full_enumeration(&big, &small), Err(Error::TooLarge(6, 5)));
        let very_big = FiniteMetricSpace::simplex(8, 1.0);
        assert_eq!(
            exists_below(&very_big, &small, 1.0),
            Err(Error::TooLarge(8, 7))
        );
        assert!(exists_below(&big, &small, 10.0).unwrap());
    }
}
