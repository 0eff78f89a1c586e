//! Permutations of the complete graph's edge set.
//!
//! The edges of the complete graph on `n` vertices are numbered by the same
//! row-major pair order used for condensed distance vectors, so a vertex
//! relabeling acts on edges exactly as it acts on vector coordinates. This
//! module studies which edge permutations arise that way: the induced map,
//! its inverse (reconstructing a vertex relabeling from star images), an
//! exhaustive search for adjacency-preserving edge permutations that are
//! *not* induced, the census of adjacent versus disjoint edge pairs, and a
//! normalizer probe for the one genuinely exceptional map on four vertices.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pairs::{index_pair, pair_count, pair_index};
use crate::perm::{all_perms, Perm};

/// Vertex count above which the factorial searches refuse to run.
const SEARCH_LIMIT: usize = 6;
/// Vertex count above which the pair census refuses to enumerate.
const CENSUS_LIMIT: usize = 64;

/// A permutation of the `n(n-1)/2` edges of the complete graph on
/// `n_vertices` vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgePermutation {
    n_vertices: usize,
    perm: Perm,
}

impl EdgePermutation {
    pub fn new(n_vertices: usize, perm: Perm) -> Result<Self> {
        if perm.len() != pair_count(n_vertices) {
            return Err(Error::DimensionMismatch);
        }
        Ok(Self { n_vertices, perm })
    }

    pub fn from_images(n_vertices: usize, images: Vec<usize>) -> Result<Self> {
        Self::new(n_vertices, Perm::from_images(images)?)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edge_count(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &Perm {
        &self.perm
    }

    /// Image of edge index `e`.
    pub fn apply(&self, e: usize) -> usize {
        self.perm.apply(e)
    }

    /// The two endpoints of edge index `e`.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        index_pair(self.n_vertices, e)
    }

    /// Whether adjacency of edges (sharing an endpoint) is preserved in both
    /// directions.
    pub fn is_adjacency_preserving(&self) -> bool {
        let m = self.edge_count();
        for e in 0..m {
            for f in e + 1..m {
                let before = edges_adjacent(self.n_vertices, e, f);
                let after = edges_adjacent(self.n_vertices, self.apply(e), self.apply(f));
                if before != after {
                    return false;
                }
            }
        }
        true
    }

    /// The vertex relabeling inducing this edge permutation, if one exists.
    ///
    /// Each candidate image of vertex `i` is read off as the common endpoint
    /// of the images of two edges at `i`; the candidate map is then verified
    /// wholesale, so a spurious reconstruction can never be returned. With
    /// fewer than three vertices the star has at most one edge and every
    /// relabeling induces the identity, which is returned canonically.
    pub fn inducing_vertex_perm(&self) -> Option<Perm> {
        let n = self.n_vertices;
        if n < 3 {
            return if self.perm.is_identity() { Some(Perm::identity(n)) } else { None };
        }
        let mut images = Vec::with_capacity(n);
        for i in 0..n {
            let mut star = (0..n).filter(|&j| j != i);
            let a = star.next().expect("n >= 3");
            let b = star.next().expect("n >= 3");
            let e1 = self.apply(pair_index(n, i, a));
            let e2 = self.apply(pair_index(n, i, b));
            images.push(common_endpoint(n, e1, e2)?);
        }
        let sigma = Perm::from_images(images).ok()?;
        if induced_edge_perm(&sigma).perm == self.perm {
            Some(sigma)
        } else {
            None
        }
    }
}

/// Whether two distinct edge indices share an endpoint.
pub fn edges_adjacent(n: usize, e: usize, f: usize) -> bool {
    let (a, b) = index_pair(n, e);
    let (c, d) = index_pair(n, f);
    a == c || a == d || b == c || b == d
}

fn common_endpoint(n: usize, e: usize, f: usize) -> Option<usize> {
    if e == f {
        return None;
    }
    let (a, b) = index_pair(n, e);
    let (c, d) = index_pair(n, f);
    match (a == c || a == d, b == c || b == d) {
        (true, false) => Some(a),
        (false, true) => Some(b),
        _ => None,
    }
}

/// The edge permutation a vertex relabeling induces: edge `{i, j}` goes to
/// edge `{σ(i), σ(j)}`.
pub fn induced_edge_perm(sigma: &Perm) -> EdgePermutation {
    let n = sigma.len();
    let mut images = Vec::with_capacity(pair_count(n));
    for i in 0..n {
        for j in i + 1..n {
            images.push(pair_index(n, sigma.apply(i), sigma.apply(j)));
        }
    }
    EdgePermutation { n_vertices: n, perm: Perm::from_images(images).expect("bijection") }
}

/// The exceptional adjacency-preserving map on four vertices: it sends the
/// star of each vertex to a triangle, so it cannot come from any vertex
/// relabeling.
pub fn star_to_cycle_perm() -> EdgePermutation {
    EdgePermutation::from_images(4, vec![3, 5, 4, 1, 0, 2]).expect("fixed table")
}

/// Result of the exhaustive search over adjacency-preserving edge
/// permutations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonInducedSearch {
    /// Adjacency-preserving permutations with no inducing vertex relabeling.
    pub non_induced: Vec<EdgePermutation>,
    /// How many adjacency-preserving permutations exist in total.
    pub preserving: u64,
    /// Backtracking nodes explored, as a cost witness.
    pub visited: u64,
}

/// Enumerates every adjacency-preserving edge permutation by backtracking
/// (candidate images must match the adjacency pattern of all earlier
/// choices in both directions) and reports the ones no vertex relabeling
/// induces. Four vertices is the only size in range with any.
pub fn search_non_induced(n: usize) -> Result<NonInducedSearch> {
    if n < 3 {
        return Err(Error::HypothesisUnmet("the edge search needs at least three vertices"));
    }
    if n > SEARCH_LIMIT {
        return Err(Error::TooLarge(n, SEARCH_LIMIT));
    }
    let m = pair_count(n);
    let mut adj = vec![false; m * m];
    for e in 0..m {
        for f in 0..m {
            adj[e * m + f] = e != f && edges_adjacent(n, e, f);
        }
    }
    let mut search = Search {
        n,
        m,
        adj,
        images: vec![0; m],
        used: vec![false; m],
        out: NonInducedSearch { non_induced: Vec::new(), preserving: 0, visited: 0 },
    };
    search.run(0);
    Ok(search.out)
}

struct Search {
    n: usize,
    m: usize,
    adj: Vec<bool>,
    images: Vec<usize>,
    used: Vec<bool>,
    out: NonInducedSearch,
}

impl Search {
    fn run(&mut self, level: usize) {
        if level == self.m {
            self.out.preserving += 1;
            let found = EdgePermutation::from_images(self.n, self.images.clone())
                .expect("bijection by construction");
            if found.inducing_vertex_perm().is_none() {
                self.out.non_induced.push(found);
            }
            return;
        }
        for f in 0..self.m {
            if self.used[f] {
                continue;
            }
            let consistent = (0..level)
                .all(|e| self.adj[level * self.m + e] == self.adj[f * self.m + self.images[e]]);
            if !consistent {
                continue;
            }
            self.out.visited += 1;
            self.images[level] = f;
            self.used[f] = true;
            self.run(level + 1);
            self.used[f] = false;
        }
    }
}

/// Census of unordered pairs of distinct edges, split by whether they share
/// an endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EdgePairCounts {
    pub n: usize,
    /// Pairs sharing an endpoint.
    pub adjacent: u64,
    /// Vertex-disjoint pairs.
    pub disjoint: u64,
}

impl EdgePairCounts {
    pub fn total(&self) -> u64 {
        self.adjacent + self.disjoint
    }
}

/// Counts adjacent and disjoint edge pairs by enumeration and checks the
/// counts against their closed forms `n(n-1)(n-2)/2` and
/// `n(n-1)(n-2)(n-3)/8` before returning. Disjoint pairs overtake adjacent
/// ones from eight vertices on, with equality at seven.
pub fn count_edge_pairs(n: usize) -> Result<EdgePairCounts> {
    if n < 2 {
        return Err(Error::HypothesisUnmet("the pair census needs at least two vertices"));
    }
    if n > CENSUS_LIMIT {
        return Err(Error::TooLarge(n, CENSUS_LIMIT));
    }
    let m = pair_count(n);
    let mut adjacent = 0u64;
    let mut disjoint = 0u64;
    for e in 0..m {
        for f in e + 1..m {
            if edges_adjacent(n, e, f) {
                adjacent += 1;
            } else {
                disjoint += 1;
            }
        }
    }
    let nf = n as u64;
    assert_eq!(adjacent, if n >= 3 { nf * (nf - 1) * (nf - 2) / 2 } else { 0 });
    assert_eq!(disjoint, if n >= 4 { nf * (nf - 1) * (nf - 2) * (nf - 3) / 8 } else { 0 });
    assert_eq!(adjacent + disjoint, (m as u64) * (m as u64).saturating_sub(1) / 2);
    Ok(EdgePairCounts { n, adjacent, disjoint })
}

/// What conjugation by a fixed edge permutation does to the group of
/// induced ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalizerReport {
    /// Whether the probed permutation is itself induced.
    pub in_group: bool,
    /// Whether conjugating every induced permutation stays induced.
    pub normalizes: bool,
    /// The first vertex relabeling whose conjugate escapes, if any.
    pub violating: Option<Perm>,
}

/// Conjugates each induced edge permutation by `alpha` and reports whether
/// the result is always induced again. The exceptional four-vertex map is
/// the interesting input: it lies outside the induced group yet normalizes
/// it.
pub fn normalizer_probe(alpha: &EdgePermutation) -> Result<NormalizerReport> {
    let n = alpha.n_vertices();
    if n < 2 {
        return Err(Error::HypothesisUnmet("the normalizer probe needs at least two vertices"));
    }
    if n > SEARCH_LIMIT {
        return Err(Error::TooLarge(n, SEARCH_LIMIT));
    }
    let in_group = alpha.inducing_vertex_perm().is_some();
    let alpha_inv = alpha.perm.inverse();
    for sigma in all_perms(n) {
        let g = induced_edge_perm(&sigma);
        let conjugate = alpha_inv.compose(&g.perm).compose(&alpha.perm);
        let conjugate = EdgePermutation { n_vertices: n, perm: conjugate };
        if conjugate.inducing_vertex_perm().is_none() {
            return Ok(NormalizerReport { in_group, normalizes: false, violating: Some(sigma) });
        }
    }
    Ok(NormalizerReport { in_group, normalizes: true, violating: None })
}
