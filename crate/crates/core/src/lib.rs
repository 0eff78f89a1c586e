//! Exact Gromov-Hausdorff computations on finite metric spaces.
//!
//! The crate has three pillars:
//!
//! * **Distances** — [`gh_exact`] minimizes correspondence distortion through
//!   a block branch-and-bound, cross-checked by brute-force enumeration in
//!   [`oracle`] and closed forms for simplex targets in [`simplex`].
//! * **Configuration space** — [`config_space`] treats an `n`-point space as
//!   its vector of pairwise distances and studies the symmetric-group action
//!   on those vectors: orbits, stabilizers, genericity, and the local match
//!   between orbit-space distance and the distance between the spaces.
//! * **Edge permutations** — [`edge_perms`] examines which permutations of
//!   the two-point subsets of an `n`-point set come from point permutations.

pub mod config_space;
pub mod edge_perms;
pub mod error;
pub mod io;
pub mod oracle;
pub mod pairs;
pub mod partition;
pub mod perm;
pub mod relation;
pub mod simplex;
pub mod solver;
pub mod space;

pub use config_space::{
    classify, degeneracy_cone, local_isometry_check, perturbation_margin, quotient_distance,
    ClassificationReport, DistVector, HalfSpace, LocalIsometry,
};
pub use edge_perms::{
    count_edge_pairs, edges_adjacent, induced_edge_perm, normalizer_probe, search_non_induced,
    star_to_cycle_perm, EdgePairCounts, EdgePermutation, NonInducedSearch, NormalizerReport,
};
pub use error::{Error, Result};
pub use io::{
    load_dist_vector, load_space, read_witness, save_witness, LoadError, SpaceRecord,
    WitnessRecord,
};
pub use pairs::{index_pair, pair_count, pair_index};
pub use partition::{enumerate_partitions, BlockCorrespondence, Partition};
pub use perm::{all_perms, factorial, Perm};
pub use relation::{Relation, RelationKind};
pub use simplex::{
    bn_member, gh_simplex_simplex, gh_to_simplex_closed, gh_to_simplex_enum, spider_space,
    subsimplex_bound_check, SimplexCase, SimplexSpec, SubsimplexBound,
};
pub use solver::{
    bijection_gap_search, gh_bijective, gh_exact, gh_exact_blocks, min_diameter_partition,
    sample_space, GapWitness, DEFAULT_DIST_RANGE,
};
pub use space::{
    FiniteMetricSpace, PointSubset, DEFAULT_TOLERANCE, GAP_THRESHOLD,
};
