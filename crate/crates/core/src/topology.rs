//! Tree topologies, i.e. strata of the tree space.

use std::fmt;

use serde::Serialize;

use crate::error::{BhvError, Result};
use crate::split::{check_leaf_count, full_bits, leaf_bit, union_bits, Split};

/// A set of pairwise compatible splits on a fixed leaf universe. All trees
/// sharing a topology form one stratum.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Topology {
    n_leaves: usize,
    splits: Vec<Split>,
}

impl Topology {
    pub fn new<I>(n_leaves: usize, splits: I) -> Result<Topology>
    where
        I: IntoIterator<Item = Split>,
    {
        check_leaf_count(n_leaves)?;
        let mut splits: Vec<Split> = splits.into_iter().collect();
        for s in &splits {
            if s.n_leaves() != n_leaves {
                return Err(BhvError::LeafCountMismatch(n_leaves, s.n_leaves()));
            }
        }
        splits.sort();
        splits.dedup();
        for (i, a) in splits.iter().enumerate() {
            for b in &splits[i + 1..] {
                if !a.compatible(b) {
                    return Err(BhvError::IncompatibleSplits(a.to_string(), b.to_string()));
                }
            }
        }
        debug_assert!(splits.len() + 2 <= n_leaves);
        Ok(Topology { n_leaves, splits })
    }

    /// The fully unresolved star topology.
    pub fn star(n_leaves: usize) -> Result<Topology> {
        Topology::new(n_leaves, [])
    }

    pub(crate) fn from_sorted_unchecked(n_leaves: usize, splits: Vec<Split>) -> Topology {
        Topology { n_leaves, splits }
    }

    pub fn n_leaves(&self) -> usize {
        self.n_leaves
    }

    pub fn splits(&self) -> &[Split] {
        &self.splits
    }

    pub fn len(&self) -> usize {
        self.splits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.splits.is_empty()
    }

    /// `N - 2 - |splits|`; zero for fully resolved trees.
    pub fn codimension(&self) -> usize {
        self.n_leaves - 2 - self.splits.len()
    }

    pub fn contains(&self, split: &Split) -> bool {
        self.splits.binary_search(split).is_ok()
    }

    pub fn is_subtopology_of(&self, other: &Topology) -> bool {
        self.n_leaves == other.n_leaves && self.splits.iter().all(|s| other.contains(s))
    }

    /// True iff `split` is compatible with every split of the topology.
    pub fn admits(&self, split: &Split) -> bool {
        split.n_leaves() == self.n_leaves && self.splits.iter().all(|s| s.compatible(split))
    }

    pub fn with_split(&self, split: Split) -> Result<Topology> {
        Topology::new(self.n_leaves, self.splits.iter().copied().chain([split]))
    }

    /// The clades directly below each internal node (the root last). Each
    /// child is given by its leaf bitmask.
    fn node_children(&self) -> Vec<Vec<[u64; 4]>> {
        let k = self.splits.len();
        // parent index: 0..k are splits, k is the root
        let smallest_container = |bits: &[u64; 4], exclude: Option<usize>| -> usize {
            let mut best = k;
            let mut best_size = usize::MAX;
            for (j, s) in self.splits.iter().enumerate() {
                if Some(j) == exclude {
                    continue;
                }
                let inside = bits.iter().zip(s.bits().iter()).all(|(a, b)| a & !b == 0);
                if inside && s.size() < best_size {
                    best = j;
                    best_size = s.size();
                }
            }
            best
        };
        let mut children: Vec<Vec<[u64; 4]>> = vec![Vec::new(); k + 1];
        for (j, s) in self.splits.iter().enumerate() {
            children[smallest_container(s.bits(), Some(j))].push(*s.bits());
        }
        for leaf in 1..=self.n_leaves {
            let bits = leaf_bit(leaf);
            children[smallest_container(&bits, None)].push(bits);
        }
        children
    }

    /// Number of splits not in the topology but compatible with all of it.
    /// Returned as `f64` because it grows like `2^polytomy`.
    pub fn count_compatible_splits(&self) -> f64 {
        self.node_children()
            .iter()
            .map(|c| {
                let m = c.len() as i32;
                if m >= 3 {
                    2f64.powi(m) - m as f64 - 2.0
                } else {
                    0.0
                }
            })
            .sum()
    }

    /// All splits not in the topology that are compatible with every split
    /// of it, sorted. Empty for fully resolved topologies.
    ///
    /// New splits arise by grouping between 2 and `m - 1` of the `m` child
    /// clades of a single polytomy.
    pub fn enumerate_compatible_splits(&self) -> Result<Vec<Split>> {
        let count = self.count_compatible_splits();
        if count > (1u64 << 22) as f64 {
            return Err(BhvError::InvalidArgument(format!(
                "topology admits {count:.0} compatible splits; too many to enumerate"
            )));
        }
        let mut out = Vec::with_capacity(count as usize);
        for children in self.node_children() {
            let m = children.len();
            if m < 3 {
                continue;
            }
            for mask in 1u64..(1u64 << m) - 1 {
                if mask.count_ones() < 2 {
                    continue;
                }
                let mut bits = [0u64; 4];
                for (c, child) in children.iter().enumerate() {
                    if mask & (1 << c) != 0 {
                        bits = union_bits(&bits, child);
                    }
                }
                if bits == full_bits(self.n_leaves) {
                    continue;
                }
                out.push(Split::from_bits(self.n_leaves, bits)?);
            }
        }
        out.sort();
        Ok(out)
    }
}

impl fmt::Debug for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Topology(N={}, {:?})", self.n_leaves, self.splits)
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.splits.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(n: usize, m: &[usize]) -> Split {
        Split::new(n, m.iter().copied()).unwrap()
    }

    /// Brute force: every valid split compatible with all of `t` and not in it.
    fn brute_compatible(t: &Topology) -> Vec<Split> {
        Split::all(t.n_leaves())
            .unwrap()
            .into_iter()
            .filter(|c| !t.contains(c) && t.admits(c))
            .collect()
    }

    #[test]
    fn star_on_four_leaves_admits_all_ten_splits() {
        let star = Topology::star(4).unwrap();
        let found = star.enumerate_compatible_splits().unwrap();
        assert_eq!(found.len(), 10);
        assert_eq!(found, brute_compatible(&star));
        assert_eq!(star.codimension(), 2);
    }

    #[test]
    fn one_split_on_four_leaves() {
        let t = Topology::new(4, [s(4, &[1, 2])]).unwrap();
        let mut expected = vec![s(4, &[3, 4]), s(4, &[1, 2, 3]), s(4, &[1, 2, 4])];
        expected.sort();
        assert_eq!(t.enumerate_compatible_splits().unwrap(), expected);
        assert_eq!(t.codimension(), 1);
    }

    #[test]
    fn three_spider() {
        let found = Topology::star(3)
            .unwrap()
            .enumerate_compatible_splits()
            .unwrap();
        assert_eq!(found, vec![s(3, &[1, 2]), s(3, &[1, 3]), s(3, &[2, 3])]);
    }

    #[test]
    fn resolved_topology_admits_nothing() {
        let t = Topology::new(4, [s(4, &[1, 2]), s(4, &[3, 4])]).unwrap();
        assert_eq!(t.codimension(), 0);
        assert!(t.enumerate_compatible_splits().unwrap().is_empty());
    }

    #[test]
    fn incompatible_topology_is_rejected() {
        assert!(Topology::new(4, [s(4, &[1, 2]), s(4, &[2, 3])]).is_err());
    }

    fn random_topology(n: usize, seed: Vec<usize>) -> Topology {
        let all = Split::all(n).unwrap();
        let mut chosen: Vec<Split> = Vec::new();
        for idx in seed {
            let c = all[idx % all.len()];
            if chosen.iter().all(|x| x.compatible(&c)) && !chosen.contains(&c) {
                chosen.push(c);
            }
        }
        Topology::new(n, chosen).unwrap()
    }

    proptest! {
        #[test]
        fn enumeration_matches_brute_force(n in 3usize..8, seed in proptest::collection::vec(0usize..1000, 0..6)) {
            let t = random_topology(n, seed);
            let found = t.enumerate_compatible_splits().unwrap();
            prop_assert_eq!(found.len() as f64, t.count_compatible_splits());
            prop_assert_eq!(found, brute_compatible(&t));
        }

        #[test]
        fn adding_a_split_never_enlarges_the_compatible_set(n in 4usize..8, seed in proptest::collection::vec(0usize..1000, 0..5), pick in 0usize..1000) {
            let t = random_topology(n, seed);
            let before = t.enumerate_compatible_splits().unwrap();
            if before.is_empty() { return Ok(()); }
            let extra = before[pick % before.len()];
            let t2 = t.with_split(extra).unwrap();
            let after = t2.enumerate_compatible_splits().unwrap();
            prop_assert!(after.len() + t2.len() <= before.len() + t.len());
            prop_assert!(after.iter().all(|c| before.contains(c)));
        }

        #[test]
        fn compatibility_is_symmetric(n in 3usize..9, a in 0usize..10000, b in 0usize..10000) {
            let all = Split::all(n).unwrap();
            let (x, y) = (all[a % all.len()], all[b % all.len()]);
            prop_assert_eq!(x.is_compatible(&y).unwrap(), y.is_compatible(&x).unwrap());
        }
    }
}
