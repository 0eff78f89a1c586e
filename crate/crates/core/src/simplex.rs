//! Distances to simplexes and the equidistant-set membership predicate.
//!
//! A simplex here is `n` points pairwise at a common distance `t`. Distances
//! from an arbitrary finite space to a simplex reduce to partition
//! combinatorics: matching each simplex point with a block of the space turns
//! the distortion into a function of block diameters and the extreme
//! inter-block distances, so the exact distance is a minimum over partitions
//! ([`gh_to_simplex_enum`]) with a closed form ([`gh_to_simplex_closed`])
//! covering most shapes. The closed form's guards overlap; the enumeration
//! and the general solver serve as cross-checks rather than tie-breakers.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{enumerate_partitions, Partition};
use crate::solver::{gh_exact, min_diameter_partition};
use crate::space::{FiniteMetricSpace, DEFAULT_TOLERANCE};

/// A simplex described by its point count and common distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimplexSpec {
    pub n: usize,
    pub t: f64,
}

impl SimplexSpec {
    pub fn new(n: usize, t: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::TooFewPoints);
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::NonpositiveScale);
        }
        Ok(Self { n, t })
    }

    /// Materializes the simplex as a concrete space.
    pub fn space(&self) -> FiniteMetricSpace {
        FiniteMetricSpace::simplex(self.n, self.t)
    }
}

/// Guard of the closed form that produced a value; `m` is the point count of
/// the space, `n` the simplex size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SimplexCase {
    /// `m < n`: the space is smaller than the simplex.
    FewerPoints,
    /// `m = n ≥ 2`: equal counts, formula in the smallest distance.
    EqualPoints,
    /// `m = n + 1 ≥ 3`: one extra point, formula in the two smallest.
    OneExtraPoint,
    /// `m ≥ n` and `diam X ≥ 2t`: formula in the min-diameter partition value.
    WideDiameter,
    /// No guard applied; the value came from partition enumeration.
    Fallback,
}

impl fmt::Display for SimplexCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self {
            SimplexCase::FewerPoints => "m<n",
            SimplexCase::EqualPoints => "m=n",
            SimplexCase::OneExtraPoint => "m=n+1",
            SimplexCase::WideDiameter => "m>=n, diam>=2t",
            SimplexCase::Fallback => "enum",
        };
        f.write_str(label)
    }
}

/// Distortion of the block correspondence in which each simplex point is
/// matched with one block of `d`: the largest of all block diameters, the
/// shortfall of the closest inter-block pair below `t`, and the excess of the
/// farthest inter-block pair above `t`. For a single block the inter-block
/// terms degrade to `-∞` and `-t` and the diameter wins.
pub fn dis_partition_simplex(t: f64, x: &FiniteMetricSpace, d: &Partition) -> Result<f64> {
    let diam = d.diam(x)?;
    let alpha = d.alpha(x)?;
    let beta = d.beta(x)?;
    Ok(diam.max(t - alpha).max(beta - t))
}

/// `d_GH(tΔ_n, X)` by minimizing [`dis_partition_simplex`] over every
/// partition of `X` into exactly `n` blocks. Requires `n ≤ #X`; smaller
/// spaces are the closed form's fewer-points case instead.
pub fn gh_to_simplex_enum(spec: &SimplexSpec, x: &FiniteMetricSpace) -> Result<f64> {
    if spec.n > x.len() {
        return Err(Error::TooManySimplexPoints);
    }
    let mut best = f64::INFINITY;
    for d in enumerate_partitions(x.len(), spec.n)? {
        best = best.min(dis_partition_simplex(spec.t, x, &d)?);
    }
    Ok(0.5 * best)
}

/// `d_GH(tΔ_n, X)` by case analysis on the shape of `X`, with the guard that
/// fired. Guards are checked most-specific first; where several hold their
/// formulas agree (a tested invariant, not a dispatch choice). With no guard
/// the value falls back to [`gh_to_simplex_enum`].
pub fn gh_to_simplex_closed(
    spec: &SimplexSpec,
    x: &FiniteMetricSpace,
) -> Result<(f64, SimplexCase)> {
    let m = x.len();
    let n = spec.n;
    let t = spec.t;
    let diam = x.diameter();
    if m < n {
        return Ok((0.5 * t.max(diam - t), SimplexCase::FewerPoints));
    }
    if m == n && n >= 2 {
        let a = x.min_distance()?;
        return Ok((0.5 * (t - a).max(diam - t), SimplexCase::EqualPoints));
    }
    if m == n + 1 && m >= 3 {
        let (a, b) = x.smallest_two()?;
        return Ok((0.5 * a.max(t - b).max(diam - t), SimplexCase::OneExtraPoint));
    }
    if diam >= 2.0 * t {
        let (d_n, _) = min_diameter_partition(x, n)?;
        return Ok((0.5 * d_n.max(diam - t), SimplexCase::WideDiameter));
    }
    Ok((gh_to_simplex_enum(spec, x)?, SimplexCase::Fallback))
}

/// Every closed-form value whose guard holds for this input, with its case.
/// Used to test that overlapping guards agree.
pub fn closed_case_values(
    spec: &SimplexSpec,
    x: &FiniteMetricSpace,
) -> Result<Vec<(f64, SimplexCase)>> {
    let m = x.len();
    let n = spec.n;
    let t = spec.t;
    let diam = x.diameter();
    let mut out = Vec::new();
    if m < n {
        out.push((0.5 * t.max(diam - t), SimplexCase::FewerPoints));
    }
    if m == n && n >= 2 {
        let a = x.min_distance()?;
        out.push((0.5 * (t - a).max(diam - t), SimplexCase::EqualPoints));
    }
    if m == n + 1 && m >= 3 {
        let (a, b) = x.smallest_two()?;
        out.push((0.5 * a.max(t - b).max(diam - t), SimplexCase::OneExtraPoint));
    }
    if m >= n && diam >= 2.0 * t {
        let (d_n, _) = min_diameter_partition(x, n)?;
        out.push((0.5 * d_n.max(diam - t), SimplexCase::WideDiameter));
    }
    Ok(out)
}

/// Distance between two simplexes, `tΔ_p` and `sΔ_q`.
///
/// Equal sizes differ only in scale; otherwise the larger simplex must
/// collapse, which costs its own scale against the gain of matching the
/// other's. One-point simplexes reduce to half the other diameter.
///
/// # Panics
/// On nonpositive scales or zero point counts, and if the computed value
/// ever undercuts the `½·min{t,s}` lower bound for distinct sizes.
pub fn gh_simplex_simplex(t: f64, p: usize, s: f64, q: usize) -> f64 {
    assert!(p >= 1 && q >= 1, "simplexes need at least one point");
    assert!(t > 0.0 && s > 0.0, "simplex scales must be positive");
    let value = if p == 1 && q == 1 {
        0.0
    } else if p == 1 {
        0.5 * s
    } else if q == 1 {
        0.5 * t
    } else if p == q {
        0.5 * (t - s).abs()
    } else if p > q {
        0.5 * t.max(s - t)
    } else {
        0.5 * s.max(t - s)
    };
    if p != q {
        assert!(
            2.0 * value >= t.min(s) - 1e-12,
            "distinct simplex sizes must be at least half the smaller scale apart"
        );
    }
    value
}

/// Outcome of [`subsimplex_bound_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsimplexBound {
    /// The certified lower bound `t/2` on the distance.
    pub bound: f64,
    /// Whether the bound is attained exactly: `diam X = t` and `diam M ≤ t`.
    pub tight: bool,
}

/// Checks the lower bound `d_GH(X, M) ≥ t/2` for a space `X` containing `n`
/// points pairwise at distance `t` against any space `M` with fewer than `n`
/// points. Verifies the hypotheses (finding the equidistant points itself),
/// computes the distance, and panics if the bound — a theorem — fails.
pub fn subsimplex_bound_check(
    x: &FiniteMetricSpace,
    m: &FiniteMetricSpace,
    t: f64,
    n: usize,
) -> Result<SubsimplexBound> {
    if n < 2 {
        return Err(Error::HypothesisUnmet("the embedded simplex needs at least two points"));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::NonpositiveScale);
    }
    if !contains_equidistant_clique(x, n, t, DEFAULT_TOLERANCE) {
        return Err(Error::HypothesisUnmet("no n points pairwise at distance t in the space"));
    }
    if m.len() > n - 1 {
        return Err(Error::HypothesisUnmet("comparison space must have fewer points than the embedded simplex"));
    }
    let (dist, _) = gh_exact(x, m);
    assert!(
        2.0 * dist >= t - 1e-9,
        "subsimplex lower bound violated: 2*{dist} < {t}"
    );
    let tight = (x.diameter() - t).abs() <= DEFAULT_TOLERANCE && m.diameter() <= t + DEFAULT_TOLERANCE;
    if tight {
        assert!(
            (2.0 * dist - t).abs() <= 1e-9,
            "tightness conditions hold but 2*{dist} != {t}"
        );
    }
    Ok(SubsimplexBound { bound: 0.5 * t, tight })
}

/// Backtracking search for `n` points pairwise within `tol` of `t`.
fn contains_equidistant_clique(x: &FiniteMetricSpace, n: usize, t: f64, tol: f64) -> bool {
    fn grow(x: &FiniteMetricSpace, chosen: &mut Vec<usize>, need: usize, t: f64, tol: f64) -> bool {
        if chosen.len() == need {
            return true;
        }
        let start = chosen.last().map_or(0, |&last| last + 1);
        // Not enough points left to finish the clique.
        for cand in start..x.len() - (need - chosen.len() - 1) {
            if chosen.iter().all(|&p| (x.distance(p, cand) - t).abs() <= tol) {
                chosen.push(cand);
                if grow(x, chosen, need, t, tol) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    n <= x.len() && grow(x, &mut Vec::new(), n, t, tol)
}

/// Whether `b` lies at the same distance from the one-point space and from
/// `tΔ_n`, subject to `diam b ≥ 2t` — the membership test for the locus of
/// spaces equidistant from those two reference points. Both distances are
/// computed by the exact solver; equality is judged at the crate tolerance.
///
/// # Panics
/// If `n < 2` or `t ≤ 0`.
pub fn bn_member(b: &FiniteMetricSpace, n: usize, t: f64) -> bool {
    assert!(n >= 2, "membership is defined against simplexes of at least two points");
    assert!(t > 0.0, "simplex scale must be positive");
    let diam = b.diameter();
    if diam < 2.0 * t - DEFAULT_TOLERANCE {
        return false;
    }
    let one = FiniteMetricSpace::simplex(1, 1.0);
    let (to_point, _) = gh_exact(&one, b);
    let (to_simplex, _) = gh_exact(&FiniteMetricSpace::simplex(n, t), b);
    (to_point - to_simplex).abs() <= DEFAULT_TOLERANCE
}

/// A `2m`-point space: the first `m` points pairwise at distance `mu`, every
/// other nonzero distance `mu/2`. All triangles through two of the far points
/// are degenerate (tight), which is allowed. Its min-diameter partition value
/// stays at `mu` for any block count below `m` — collapsing is forced — which
/// makes it equidistant from the one-point space and from `(mu/2)`-scale
/// simplexes of fewer than `m` points.
///
/// # Panics
/// If `m < 2` or `mu ≤ 0`.
pub fn spider_space(m: usize, mu: f64) -> FiniteMetricSpace {
    assert!(m >= 2, "a spider needs at least two base points");
    assert!(mu > 0.0 && mu.is_finite(), "base distance must be positive");
    let n = 2 * m;
    let mut rho = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            rho.push(if i < m && j < m { mu } else { 0.5 * mu });
        }
    }
    FiniteMetricSpace::from_condensed(n, rho).expect("spider distances satisfy all axioms")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::sample_space;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn line() -> FiniteMetricSpace {
        // Points 0, 1, 10 on a line.
        FiniteMetricSpace::from_condensed(3, vec![1.0, 10.0, 9.0]).unwrap()
    }

    #[test]
    fn partition_distortion_on_fixtures() {
        let x = line();
        let d = Partition::from_labels(&[0, 0, 1]);
        assert_eq!(dis_partition_simplex(5.0, &x, &d).unwrap(), 5.0);
        let whole = Partition::from_labels(&[0, 0, 0]);
        assert_eq!(dis_partition_simplex(5.0, &x, &whole).unwrap(), 10.0);

        // Singleton partition of a simplex against scale t: |t - s|.
        let s = FiniteMetricSpace::simplex(4, 3.0);
        let singles = Partition::from_labels(&[0, 1, 2, 3]);
        assert_eq!(dis_partition_simplex(5.0, &s, &singles).unwrap(), 2.0);
        assert_eq!(dis_partition_simplex(2.0, &s, &singles).unwrap(), 1.0);
    }

    #[test]
    fn enumeration_handles_the_line() {
        let spec = SimplexSpec::new(2, 5.0).unwrap();
        assert_eq!(gh_to_simplex_enum(&spec, &line()).unwrap(), 2.5);
        let big = SimplexSpec::new(4, 5.0).unwrap();
        assert_eq!(
            gh_to_simplex_enum(&big, &line()),
            Err(Error::TooManySimplexPoints)
        );
    }

    #[test]
    fn closed_form_matches_the_documented_cases() {
        // Two points at distance 5 against a 3-point simplex of scale 1.
        let two = FiniteMetricSpace::simplex(2, 5.0);
        let spec = SimplexSpec::new(3, 1.0).unwrap();
        let (d, case) = gh_to_simplex_closed(&spec, &two).unwrap();
        assert_eq!(d, 2.0);
        assert_eq!(case, SimplexCase::FewerPoints);

        // The line has smallest distances a=1, b=9.
        let spec = SimplexSpec::new(2, 5.0).unwrap();
        let (d, case) = gh_to_simplex_closed(&spec, &line()).unwrap();
        assert_eq!(d, 2.5);
        assert_eq!(case, SimplexCase::OneExtraPoint);
        assert_eq!(case.to_string(), "m=n+1");

        // A simplex against its own size at another scale.
        let s = FiniteMetricSpace::simplex(4, 3.0);
        let spec = SimplexSpec::new(4, 1.0).unwrap();
        let (d, case) = gh_to_simplex_closed(&spec, &s).unwrap();
        assert_eq!(d, 1.0);
        assert_eq!(case, SimplexCase::EqualPoints);

        // Wide diameter with a genuinely larger space.
        let spec = SimplexSpec::new(1, 2.0).unwrap();
        let (d, case) = gh_to_simplex_closed(&spec, &line()).unwrap();
        assert_eq!(d, 5.0);
        assert_eq!(case, SimplexCase::WideDiameter);

        // One-point space against a one-point simplex: fallback, zero.
        let one = FiniteMetricSpace::simplex(1, 1.0);
        let spec = SimplexSpec::new(1, 3.0).unwrap();
        let (d, case) = gh_to_simplex_closed(&spec, &one).unwrap();
        assert_eq!(d, 0.0);
        assert_eq!(case, SimplexCase::Fallback);
    }

    #[test]
    fn closed_equals_enum_equals_solver_on_a_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..25 {
            let m = rng.gen_range(1..=6);
            let x = sample_space(&mut rng, m, (0.5, 1.5)).unwrap();
            let diam = x.diameter().max(0.5);
            for n in 1..=m {
                for step in 1..=10 {
                    let t = 0.2 * diam * step as f64;
                    let spec = SimplexSpec::new(n, t).unwrap();
                    let en = gh_to_simplex_enum(&spec, &x).unwrap();
                    let (cl, _) = gh_to_simplex_closed(&spec, &x).unwrap();
                    let (sv, _) = gh_exact(&spec.space(), &x);
                    assert_eq!(cl, en, "closed vs enum at m={m} n={n} t={t}");
                    assert_eq!(en, sv, "enum vs solver at m={m} n={n} t={t}");
                }
            }
        }
    }

    #[test]
    fn overlapping_guards_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut overlaps = 0usize;
        for _ in 0..40 {
            let m = rng.gen_range(2..=6);
            let x = sample_space(&mut rng, m, (0.5, 1.5)).unwrap();
            for n in 1..=m {
                for step in 1..=8 {
                    let t = 0.25 * x.diameter() * step as f64;
                    let spec = SimplexSpec::new(n, t).unwrap();
                    let values = closed_case_values(&spec, &x).unwrap();
                    if values.len() > 1 {
                        overlaps += 1;
                        for pair in values.windows(2) {
                            assert!(
                                (pair[0].0 - pair[1].0).abs() <= 1e-12,
                                "guards {:?} disagree on m={m} n={n} t={t}",
                                (pair[0].1, pair[1].1)
                            );
                        }
                    }
                }
            }
        }
        assert!(overlaps > 0, "the sweep never hit overlapping guards");
    }

    #[test]
    fn simplex_pair_table_matches_the_solver() {
        for p in 1..=5 {
            for q in 1..=5 {
                for t in [0.5, 1.0, 1.5, 2.0, 3.0] {
                    for s in [0.5, 1.0, 1.5, 2.0, 3.0] {
                        let formula = gh_simplex_simplex(t, p, s, q);
                        let (solver, _) = gh_exact(
                            &FiniteMetricSpace::simplex(p, t),
                            &FiniteMetricSpace::simplex(q, s),
                        );
                        assert_eq!(formula, solver, "p={p} q={q} t={t} s={s}");
                    }
                }
            }
        }
        assert_eq!(gh_simplex_simplex(2.0, 5, 3.0, 5), 0.5);
        assert_eq!(gh_simplex_simplex(1.0, 3, 1.0, 4), 0.5);
        assert_eq!(gh_simplex_simplex(1.0, 3, 1.0, 3), 0.0);
    }

    #[test]
    fn subsimplex_bound_on_fixtures() {
        let d4 = FiniteMetricSpace::simplex(4, 1.0);
        let d3 = FiniteMetricSpace::simplex(3, 1.0);
        let out = subsimplex_bound_check(&d4, &d3, 1.0, 4).unwrap();
        assert_eq!(out.bound, 0.5);
        assert!(out.tight);

        let two = FiniteMetricSpace::simplex(2, 1.0);
        let out = subsimplex_bound_check(&d3, &two, 1.0, 3).unwrap();
        assert!(out.tight);

        // A simplex plus a distant point: bound still holds, no tightness.
        let far = FiniteMetricSpace::from_condensed(
            4,
            vec![1.0, 1.0, 2.0, 1.0, 2.0, 2.0],
        )
        .unwrap();
        let out = subsimplex_bound_check(&far, &two, 1.0, 3).unwrap();
        assert_eq!(out.bound, 0.5);
        assert!(!out.tight);

        // Hypothesis failures.
        assert!(subsimplex_bound_check(&d3, &d3, 1.0, 3).is_err());
        assert!(subsimplex_bound_check(&d3, &two, 2.0, 3).is_err());
        assert!(subsimplex_bound_check(&d3, &two, 1.0, 1).is_err());
    }

    #[test]
    fn membership_accepts_large_simplexes_and_spiders() {
        // Simplexes of scale at least 2t with more points than the target.
        assert!(bn_member(&FiniteMetricSpace::simplex(4, 2.0), 3, 1.0));
        assert!(bn_member(&FiniteMetricSpace::simplex(5, 3.0), 2, 1.0));
        // Diameter guard.
        assert!(!bn_member(&FiniteMetricSpace::simplex(4, 1.0), 3, 1.0));
        // Equal point count fails membership.
        assert!(!bn_member(&FiniteMetricSpace::simplex(3, 2.0), 3, 1.0));

        for m in 2..=4 {
            let spider = spider_space(m, 2.0);
            assert_eq!(spider.len(), 2 * m);
            assert_eq!(spider.diameter(), 2.0);
            for n in 1..m {
                let (dn, _) = min_diameter_partition(&spider, n).unwrap();
                assert_eq!(dn, 2.0, "d_{n} of the {m}-base spider");
            }
            for n in 2..m {
                assert!(bn_member(&spider, n, 1.0), "spider m={m} vs n={n}");
            }
        }
        // Below the diameter threshold the spider is excluded.
        assert!(!bn_member(&spider_space(3, 1.0), 2, 1.0));
    }
}
