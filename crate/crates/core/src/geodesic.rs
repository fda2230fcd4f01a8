//! Geodesics, distances and adjacent-stratum projections.
//!
//! A geodesic between two trees keeps (and linearly rescales) the splits
//! they share, and trades the remaining splits through an ordered sequence
//! of support pairs `(A_i, B_i)`: the splits of `A_i` shrink to zero before
//! those of `B_i` appear. The support is found by repeatedly splitting pairs
//! along a minimum-weight vertex cover of their incompatibility graph until
//! no cover of weight below one remains.

use crate::error::{BhvError, Result};
use crate::flow::min_weight_vertex_cover;
use crate::split::Split;
use crate::topology::Topology;
use crate::tree::Tree;

/// Cover weights within this margin of one do not split a support pair,
/// which keeps the coarser partition on ties.
const COVER_TIE_TOL: f64 = 1e-12;

/// A split whose length varies linearly along the whole geodesic. Splits
/// present in only one endpoint but compatible with every split of the
/// other endpoint are also treated this way, with length 0 at that end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommonEdge {
    pub split: Split,
    pub source: f64,
    pub target: f64,
}

/// One step of the support sequence: the splits in `a` (from the source)
/// leave before the splits in `b` (from the target) enter.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportPair {
    pub a: Vec<(Split, f64)>,
    pub b: Vec<(Split, f64)>,
}

impl SupportPair {
    pub fn a_norm(&self) -> f64 {
        norm(&self.a)
    }

    pub fn b_norm(&self) -> f64 {
        norm(&self.b)
    }

    /// `‖A‖ / ‖B‖`.
    pub fn ratio(&self) -> f64 {
        self.a_norm() / self.b_norm()
    }

    /// Path parameter at which this pair switches orthants.
    pub fn transition(&self) -> f64 {
        let (a, b) = (self.a_norm(), self.b_norm());
        a / (a + b)
    }
}

fn norm(v: &[(Split, f64)]) -> f64 {
    v.iter().map(|(_, l)| l * l).sum::<f64>().sqrt()
}

#[derive(Debug, Clone)]
pub struct GeodesicPath {
    source: Tree,
    target: Tree,
    common: Vec<CommonEdge>,
    support: Vec<SupportPair>,
    length: f64,
}

/// Computes the geodesic between two trees on the same leaf universe.
pub fn geodesic(x: &Tree, y: &Tree) -> Result<GeodesicPath> {
    if x.n_leaves() != y.n_leaves() {
        return Err(BhvError::LeafCountMismatch(x.n_leaves(), y.n_leaves()));
    }
    let (xe, ye) = (x.edges(), y.edges());
    let mut common = Vec::new();
    let mut x_only = Vec::new();
    let mut y_only = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < xe.len() || j < ye.len() {
        match (xe.get(i), ye.get(j)) {
            (Some(a), Some(b)) if a.0 == b.0 => {
                common.push(CommonEdge {
                    split: a.0,
                    source: a.1,
                    target: b.1,
                });
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a.0 < b.0 => {
                x_only.push(*a);
                i += 1;
            }
            (Some(a), None) => {
                x_only.push(*a);
                i += 1;
            }
            (_, Some(b)) => {
                y_only.push(*b);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }

    let mut a = Vec::new();
    for &(s, l) in &x_only {
        if y_only.iter().all(|(t, _)| s.compatible(t)) {
            common.push(CommonEdge {
                split: s,
                source: l,
                target: 0.0,
            });
        } else {
            a.push((s, l));
        }
    }
    let mut b = Vec::new();
    for &(t, l) in &y_only {
        if x_only.iter().all(|(s, _)| s.compatible(&t)) {
            common.push(CommonEdge {
                split: t,
                source: 0.0,
                target: l,
            });
        } else {
            b.push((t, l));
        }
    }
    common.sort_by_key(|p| p.split);

    let support = if a.is_empty() {
        debug_assert!(b.is_empty());
        Vec::new()
    } else {
        refine_support(SupportPair { a, b })
    };

    let length = (support
        .iter()
        .map(|p| (p.a_norm() + p.b_norm()).powi(2))
        .sum::<f64>()
        + common
            .iter()
            .map(|c| (c.source - c.target).powi(2))
            .sum::<f64>())
    .sqrt();

    Ok(GeodesicPath {
        source: x.clone(),
        target: y.clone(),
        common,
        support,
        length,
    })
}

fn refine_support(initial: SupportPair) -> Vec<SupportPair> {
    let mut pairs = vec![initial];
    let mut i = 0;
    while i < pairs.len() {
        match split_pair(&pairs[i]) {
            Some((first, second)) => {
                pairs[i] = first;
                pairs.insert(i + 1, second);
            }
            None => i += 1,
        }
    }
    pairs
}

/// Splits `(A, B)` into `(C1, D1), (C2, D2)` when the incompatibility graph
/// has a vertex cover `C1 ∪ D2` of normalized weight below one.
fn split_pair(pair: &SupportPair) -> Option<(SupportPair, SupportPair)> {
    if pair.a.len() < 2 || pair.b.len() < 2 {
        return None;
    }
    let (an2, bn2) = (pair.a_norm().powi(2), pair.b_norm().powi(2));
    let aw: Vec<f64> = pair.a.iter().map(|(_, l)| l * l / an2).collect();
    let bw: Vec<f64> = pair.b.iter().map(|(_, l)| l * l / bn2).collect();
    let cover = min_weight_vertex_cover(&aw, &bw, |i, j| !pair.a[i].0.compatible(&pair.b[j].0));
    if cover.weight >= 1.0 - COVER_TIE_TOL {
        return None;
    }
    let pick = |side: &[(Split, f64)], flags: &[bool], want: bool| -> Vec<(Split, f64)> {
        side.iter()
            .zip(flags)
            .filter(|(_, f)| **f == want)
            .map(|(e, _)| *e)
            .collect()
    };
    let c1 = pick(&pair.a, &cover.left, true);
    let c2 = pick(&pair.a, &cover.left, false);
    let d1 = pick(&pair.b, &cover.right, false);
    let d2 = pick(&pair.b, &cover.right, true);
    if c1.is_empty() || c2.is_empty() || d1.is_empty() || d2.is_empty() {
        return None;
    }
    Some((SupportPair { a: c1, b: d1 }, SupportPair { a: c2, b: d2 }))
}

impl GeodesicPath {
    pub fn source(&self) -> &Tree {
        &self.source
    }

    pub fn target(&self) -> &Tree {
        &self.target
    }

    pub fn common(&self) -> &[CommonEdge] {
        &self.common
    }

    pub fn support(&self) -> &[SupportPair] {
        &self.support
    }

    /// Geodesic distance over interior edges.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// The point `γ(t)`, `t ∈ [0, 1]`. Splits whose length reaches zero are
    /// dropped, so the result may lie on a lower-dimensional stratum.
    pub fn point_along(&self, t: f64) -> Result<Tree> {
        if !(0.0..=1.0).contains(&t) {
            return Err(BhvError::InvalidArgument(format!(
                "path parameter {t} outside [0, 1]"
            )));
        }
        if t == 0.0 {
            return Ok(self.source.clone());
        }
        if t == 1.0 {
            return Ok(self.target.clone());
        }
        let mut edges = Vec::new();
        for c in &self.common {
            let l = (1.0 - t) * c.source + t * c.target;
            if l > 0.0 {
                edges.push((c.split, l));
            }
        }
        for p in &self.support {
            let (an, bn) = (p.a_norm(), p.b_norm());
            let num = (1.0 - t) * an - t * bn;
            if num > 0.0 {
                edges.extend(p.a.iter().map(|&(s, l)| (s, l * num / an)));
            } else if num < 0.0 {
                edges.extend(p.b.iter().map(|&(s, l)| (s, -l * num / bn)));
            }
        }
        let pendant = match (self.source.pendant(), self.target.pendant()) {
            (Some(ps), Some(pt)) => Some(
                ps.iter()
                    .zip(pt)
                    .map(|(a, b)| (1.0 - t) * a + t * b)
                    .collect(),
            ),
            _ => None,
        };
        Tree::new(self.source.n_leaves(), edges, pendant)
    }

    /// Whether the ratio sequence `‖A_i‖/‖B_i‖` is nondecreasing within `tol`.
    pub fn has_ordered_ratios(&self, tol: f64) -> bool {
        self.support
            .windows(2)
            .all(|w| w[0].ratio() <= w[1].ratio() * (1.0 + tol) + tol)
    }

    /// Whether every intermediate orthant is made of compatible splits:
    /// `B_1..B_i ∪ A_{i+1}..A_k` must be pairwise compatible for each `i`.
    pub fn has_compatible_orthants(&self) -> bool {
        let k = self.support.len();
        (0..=k).all(|i| {
            let splits: Vec<Split> = self.support[..i]
                .iter()
                .flat_map(|p| p.b.iter().map(|e| e.0))
                .chain(
                    self.support[i..]
                        .iter()
                        .flat_map(|p| p.a.iter().map(|e| e.0)),
                )
                .collect();
            splits
                .iter()
                .enumerate()
                .all(|(m, s)| splits[m + 1..].iter().all(|u| s.compatible(u)))
        })
    }
}

/// Geodesic distance over interior edges.
pub fn distance(x: &Tree, y: &Tree) -> Result<f64> {
    // fixed argument order keeps the result bitwise symmetric
    let key = |t: &Tree| {
        t.edges()
            .iter()
            .map(|(s, l)| (*s, l.to_bits()))
            .collect::<Vec<_>>()
    };
    if key(x) <= key(y) {
        Ok(geodesic(x, y)?.length())
    } else {
        Ok(geodesic(y, x)?.length())
    }
}

/// Distance with pendant lengths included as extra Euclidean coordinates.
/// Trees without pendant lengths count as having all pendants at zero.
pub fn distance_with_pendants(x: &Tree, y: &Tree) -> Result<f64> {
    let interior = distance(x, y)?;
    let zeros = vec![0.0; x.n_leaves()];
    let px = x.pendant().unwrap_or(&zeros);
    let py = y.pendant().unwrap_or(&zeros);
    let extra: f64 = px.iter().zip(py).map(|(a, b)| (a - b).powi(2)).sum();
    Ok((interior * interior + extra).sqrt())
}

/// Metric projection of `x` onto the closure of an adjacent stratum whose
/// topology is a subset of `x`'s: the surplus splits are removed and the
/// remaining lengths kept.
pub fn project_to_stratum(x: &Tree, stratum: &Topology) -> Result<Tree> {
    if stratum.n_leaves() != x.n_leaves() {
        return Err(BhvError::LeafCountMismatch(
            x.n_leaves(),
            stratum.n_leaves(),
        ));
    }
    if let Some(missing) = stratum.splits().iter().find(|s| !x.has_split(s)) {
        return Err(BhvError::NotSubTopology(format!(
            "split {missing} is not present in the tree"
        )));
    }
    let edges = x
        .edges()
        .iter()
        .filter(|(s, _)| stratum.contains(s))
        .copied();
    Tree::new(x.n_leaves(), edges, x.pendant().map(<[f64]>::to_vec))
}
