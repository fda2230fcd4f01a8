//! Splits of the leaf set of a rooted tree.
//!
//! Leaves are the integers `1..=N`; the root is an implicit extra element.
//! A split is stored by its non-root side as a fixed-width bitmask, so
//! compatibility and containment checks are a handful of word operations.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{BhvError, Result};

const WORDS: usize = 4;

/// Largest supported number of leaves.
pub const MAX_LEAVES: usize = 64 * WORDS;

/// A bipartition of `{1..N} ∪ {root}` with at least two elements on each
/// side, identified by the side that does not contain the root.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Split {
    bits: [u64; WORDS],
    n_leaves: u16,
}

impl Split {
    /// Builds a split from its non-root members.
    pub fn new<I>(n_leaves: usize, members: I) -> Result<Split>
    where
        I: IntoIterator<Item = usize>,
    {
        check_leaf_count(n_leaves)?;
        let mut bits = [0u64; WORDS];
        for leaf in members {
            if leaf == 0 || leaf > n_leaves {
                return Err(BhvError::InvalidSplit(format!(
                    "leaf {leaf} outside 1..={n_leaves}"
                )));
            }
            bits[(leaf - 1) / 64] |= 1u64 << ((leaf - 1) % 64);
        }
        Split::from_bits(n_leaves, bits)
    }

    pub(crate) fn from_bits(n_leaves: usize, bits: [u64; WORDS]) -> Result<Split> {
        let size: usize = bits.iter().map(|w| w.count_ones() as usize).sum();
        if size < 2 || size + 1 > n_leaves {
            return Err(BhvError::InvalidSplit(format!(
                "a split on {n_leaves} leaves needs 2..={} members, got {size}",
                n_leaves.saturating_sub(1)
            )));
        }
        Ok(Split {
            bits,
            n_leaves: n_leaves as u16,
        })
    }

    pub fn n_leaves(&self) -> usize {
        self.n_leaves as usize
    }

    /// Number of leaves on the non-root side.
    pub fn size(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn contains(&self, leaf: usize) -> bool {
        leaf >= 1
            && leaf <= self.n_leaves()
            && self.bits[(leaf - 1) / 64] & (1u64 << ((leaf - 1) % 64)) != 0
    }

    /// Leaves on the non-root side, ascending.
    pub fn members(&self) -> Vec<usize> {
        (1..=self.n_leaves())
            .filter(|&l| self.contains(l))
            .collect()
    }

    /// Smallest leaf on the non-root side.
    pub fn min_leaf(&self) -> usize {
        for (w, word) in self.bits.iter().enumerate() {
            if *word != 0 {
                return w * 64 + word.trailing_zeros() as usize + 1;
            }
        }
        unreachable!("splits are never empty")
    }

    pub(crate) fn bits(&self) -> &[u64; WORDS] {
        &self.bits
    }

    /// True iff every member of `self` is a member of `other`.
    pub fn is_subset_of(&self, other: &Split) -> bool {
        self.bits
            .iter()
            .zip(other.bits.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint_from(&self, other: &Split) -> bool {
        self.bits
            .iter()
            .zip(other.bits.iter())
            .all(|(a, b)| a & b == 0)
    }

    /// Compatibility without the leaf-universe check.
    #[inline]
    pub(crate) fn compatible(&self, other: &Split) -> bool {
        self.is_subset_of(other) || other.is_subset_of(self) || self.is_disjoint_from(other)
    }

    /// Two splits can coexist in one rooted tree iff they are nested or disjoint.
    pub fn is_compatible(&self, other: &Split) -> Result<bool> {
        if self.n_leaves != other.n_leaves {
            return Err(BhvError::LeafCountMismatch(
                self.n_leaves(),
                other.n_leaves(),
            ));
        }
        Ok(self.compatible(other))
    }

    /// All valid splits on `n_leaves` leaves. Exponential; meant for small N.
    pub fn all(n_leaves: usize) -> Result<Vec<Split>> {
        check_leaf_count(n_leaves)?;
        if n_leaves > 20 {
            return Err(BhvError::InvalidArgument(format!(
                "refusing to enumerate all splits on {n_leaves} leaves"
            )));
        }
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << n_leaves) {
            let size = mask.count_ones() as usize;
            if size >= 2 && size < n_leaves {
                let mut bits = [0u64; WORDS];
                bits[0] = mask;
                out.push(Split {
                    bits,
                    n_leaves: n_leaves as u16,
                });
            }
        }
        out.sort();
        Ok(out)
    }
}

pub(crate) fn check_leaf_count(n_leaves: usize) -> Result<()> {
    if !(3..=MAX_LEAVES).contains(&n_leaves) {
        return Err(BhvError::InvalidArgument(format!(
            "number of leaves must be in 3..={MAX_LEAVES}, got {n_leaves}"
        )));
    }
    Ok(())
}

pub(crate) fn union_bits(a: &[u64; WORDS], b: &[u64; WORDS]) -> [u64; WORDS] {
    let mut out = [0u64; WORDS];
    for i in 0..WORDS {
        out[i] = a[i] | b[i];
    }
    out
}

pub(crate) fn leaf_bit(leaf: usize) -> [u64; WORDS] {
    let mut out = [0u64; WORDS];
    out[(leaf - 1) / 64] |= 1u64 << ((leaf - 1) % 64);
    out
}

pub(crate) fn full_bits(n_leaves: usize) -> [u64; WORDS] {
    let mut out = [0u64; WORDS];
    for leaf in 1..=n_leaves {
        out[(leaf - 1) / 64] |= 1u64 << ((leaf - 1) % 64);
    }
    out
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, leaf) in self.members().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{leaf}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Split{self}")
    }
}

impl Serialize for Split {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.members().serialize(serializer)
    }
}
