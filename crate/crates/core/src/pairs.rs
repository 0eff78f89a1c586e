//! Row-major condensed indexing of unordered point pairs.
//!
//! Pairs of `0..n` are ordered `(0,1), (0,2), …, (0,n-1), (1,2), …, (n-2,n-1)`.
//! The same indexing is used for condensed distance vectors, distance-vector
//! coordinates, and edges of the complete graph, so the three views agree
//! coordinate by coordinate.

/// Number of unordered pairs of `0..n`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Condensed index of the unordered pair `{i, j}`, `i != j`.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i != j && i < n && j < n);
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// The pair `(i, j)` with `i < j` at condensed index `idx`.
pub fn index_pair(n: usize, idx: usize) -> (usize, usize) {
    debug_assert!(idx < pair_count(n));
    let mut rest = idx;
    for i in 0..n {
        let row = n - i - 1;
        if rest < row {
            return (i, i + 1 + rest);
        }
        rest -= row;
    }
    unreachable!("index out of range");
}
