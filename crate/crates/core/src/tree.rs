//! Points of the tree space.

use std::fmt;

use crate::error::{BhvError, Result};
use crate::split::{check_leaf_count, Split};
use crate::topology::Topology;

/// A rooted tree with `N` labelled leaves: a compatible set of splits, each
/// carrying a strictly positive interior edge length, plus optional pendant
/// edge lengths indexed by leaf (`pendant[i]` belongs to leaf `i + 1`).
///
/// Pendant lengths are carried along but only enter the metric on request.
#[derive(Clone, PartialEq)]
pub struct Tree {
    n_leaves: usize,
    edges: Vec<(Split, f64)>,
    pendant: Option<Vec<f64>>,
}

impl Tree {
    pub fn new<I>(n_leaves: usize, edges: I, pendant: Option<Vec<f64>>) -> Result<Tree>
    where
        I: IntoIterator<Item = (Split, f64)>,
    {
        check_leaf_count(n_leaves)?;
        let mut edges: Vec<(Split, f64)> = edges.into_iter().collect();
        edges.sort_by_key(|a| a.0);
        for w in edges.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(BhvError::InvalidTree(format!(
                    "split {} listed twice",
                    w[0].0
                )));
            }
        }
        for (s, len) in &edges {
            if s.n_leaves() != n_leaves {
                return Err(BhvError::LeafCountMismatch(n_leaves, s.n_leaves()));
            }
            if !(len.is_finite() && *len > 0.0) {
                return Err(BhvError::InvalidTree(format!(
                    "split {s} has non-positive length {len}"
                )));
            }
        }
        for (i, (a, _)) in edges.iter().enumerate() {
            for (b, _) in &edges[i + 1..] {
                if !a.compatible(b) {
                    return Err(BhvError::IncompatibleSplits(a.to_string(), b.to_string()));
                }
            }
        }
        if let Some(p) = &pendant {
            if p.len() != n_leaves {
                return Err(BhvError::InvalidTree(format!(
                    "expected {n_leaves} pendant lengths, got {}",
                    p.len()
                )));
            }
            if p.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
                return Err(BhvError::InvalidTree("pendant lengths must be >= 0".into()));
            }
        }
        Ok(Tree {
            n_leaves,
            edges,
            pendant,
        })
    }

    /// The star tree: no interior edges.
    pub fn star(n_leaves: usize) -> Result<Tree> {
        Tree::new(n_leaves, [], None)
    }

    pub fn n_leaves(&self) -> usize {
        self.n_leaves
    }

    /// Interior edges sorted by split.
    pub fn edges(&self) -> &[(Split, f64)] {
        &self.edges
    }

    pub fn splits(&self) -> impl Iterator<Item = &Split> {
        self.edges.iter().map(|(s, _)| s)
    }

    pub fn pendant(&self) -> Option<&[f64]> {
        self.pendant.as_deref()
    }

    pub fn with_pendant(mut self, pendant: Option<Vec<f64>>) -> Result<Tree> {
        if let Some(p) = &pendant {
            if p.len() != self.n_leaves || p.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
                return Err(BhvError::InvalidTree("bad pendant lengths".into()));
            }
        }
        self.pendant = pendant;
        Ok(self)
    }

    pub fn length_of(&self, split: &Split) -> Option<f64> {
        self.edges
            .binary_search_by(|(s, _)| s.cmp(split))
            .ok()
            .map(|i| self.edges[i].1)
    }

    pub fn has_split(&self, split: &Split) -> bool {
        self.length_of(split).is_some()
    }

    pub fn topology(&self) -> Topology {
        Topology::from_sorted_unchecked(self.n_leaves, self.edges.iter().map(|(s, _)| *s).collect())
    }

    pub fn codimension(&self) -> usize {
        self.n_leaves - 2 - self.edges.len()
    }

    /// Euclidean norm of the interior length vector (distance to the star tree).
    pub fn norm(&self) -> f64 {
        self.edges.iter().map(|(_, l)| l * l).sum::<f64>().sqrt()
    }

    /// Same split set and lengths within `tol`; pendant lengths are ignored.
    pub fn approx_eq(&self, other: &Tree, tol: f64) -> bool {
        self.n_leaves == other.n_leaves
            && self.edges.len() == other.edges.len()
            && self
                .edges
                .iter()
                .zip(&other.edges)
                .all(|((a, la), (b, lb))| a == b && (la - lb).abs() <= tol)
    }

    /// Removes every split whose length is below `threshold`.
    pub fn prune(&self, threshold: f64) -> Tree {
        Tree {
            n_leaves: self.n_leaves,
            edges: self
                .edges
                .iter()
                .filter(|(_, l)| *l >= threshold)
                .copied()
                .collect(),
            pendant: self.pendant.clone(),
        }
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tree(N={}; ", self.n_leaves)?;
        for (i, (s, l)) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}:{l}")?;
        }
        write!(f, ")")
    }
}
