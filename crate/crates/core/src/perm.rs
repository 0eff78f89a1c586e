//! Permutations of `0..n` and enumeration of the full symmetric group.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `0..n`, stored as its image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    /// Builds a permutation from an image table, rejecting non-bijections.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            if img >= n || seen[img] {
                return Err(Error::BadPermutation(n));
            }
            seen[img] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    /// The transposition swapping `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a >= n || b >= n {
            return Err(Error::BadPermutation(n));
        }
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Ok(Self { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i == img)
    }

    /// `self ∘ other`: applies `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.len(), other.len());
        Perm { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img] = i;
        }
        Perm { images }
    }
}

/// All permutations of `0..n` in lexicographic order of their image tables.
pub fn all_perms(n: usize) -> impl Iterator<Item = Perm> {
    LexPerms::new(n)
}

/// `n!` as a `u64`; callers keep `n` small enough for this not to overflow.
pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

struct LexPerms {
    next: Option<Vec<usize>>,
}

impl LexPerms {
    fn new(n: usize) -> Self {
        Self { next: Some((0..n).collect()) }
    }
}

impl Iterator for LexPerms {
    type Item = Perm;

    fn next(&mut self) -> Option<Perm> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        // Standard next-permutation step; `None` after the descending table.
        let n = succ.len();
        let advanced = (1..n).rev().find(|&i| succ[i - 1] < succ[i]).map(|i| {
            let j = (i..n).rev().find(|&j| succ[j] > succ[i - 1]).unwrap();
            succ.swap(i - 1, j);
            succ[i..].reverse();
        });
        if advanced.is_some() {
            self.next = Some(succ);
        }
        Some(Perm { images: current })
    }
}
