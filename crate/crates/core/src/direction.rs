//! Directions at a point of the tree space and Alexandrov angles between
//! them.
//!
//! At a tree `x` on a stratum `S`, a direction is a unit tangent vector made
//! of a part parallel to `S` (a vector over the splits of `x`) and a part
//! perpendicular to it (nonnegative lengths on new splits compatible with
//! `x`), mixed by an angle `θ ∈ [0, π/2]`:
//!
//! ```text
//! u = cos θ · u∥ + sin θ · u⊥
//! ```
//!
//! Angles follow the spherical-join structure of the space of directions:
//!
//! ```text
//! cos ∠(u, w) = cos θu cos θw ⟨u∥, w∥⟩ + sin θu sin θw cos ∠(u⊥, w⊥)
//! ```
//!
//! where the perpendicular angle is Euclidean when `u⊥` and `w⊥` share an
//! orthant and otherwise `1 - d²/2` for the geodesic distance `d` between the
//! unit perpendicular parts viewed as trees.

use std::collections::HashSet;
use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{BhvError, Result};
use crate::geodesic::{distance, geodesic};
use crate::split::Split;
use crate::topology::Topology;
use crate::tree::Tree;

/// Distances below this are treated as zero when a direction is needed.
pub const DEGENERATE_DISTANCE: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Direction {
    #[serde(skip)]
    stratum: Topology,
    parallel: Vec<(Split, f64)>,
    perp: Vec<(Split, f64)>,
    theta: f64,
}

impl Direction {
    /// Builds a direction from an unnormalized tangent vector split into its
    /// parallel and perpendicular parts.
    pub fn new(
        stratum: Topology,
        parallel: Vec<(Split, f64)>,
        perp: Vec<(Split, f64)>,
    ) -> Result<Direction> {
        let mut parallel: Vec<(Split, f64)> =
            parallel.into_iter().filter(|(_, v)| *v != 0.0).collect();
        let mut perp: Vec<(Split, f64)> = perp.into_iter().filter(|(_, v)| *v != 0.0).collect();
        parallel.sort_by_key(|a| a.0);
        perp.sort_by_key(|a| a.0);
        for (s, v) in &parallel {
            if !v.is_finite() {
                return Err(BhvError::InvalidDirection(format!(
                    "non-finite entry on {s}"
                )));
            }
            if !stratum.contains(s) {
                return Err(BhvError::InvalidDirection(format!(
                    "parallel component on {s}, which is not a split of the stratum"
                )));
            }
        }
        for (i, (s, v)) in perp.iter().enumerate() {
            if !(v.is_finite() && *v > 0.0) {
                return Err(BhvError::InvalidDirection(format!(
                    "perpendicular component on {s} must be positive"
                )));
            }
            if stratum.contains(s) || !stratum.admits(s) {
                return Err(BhvError::InvalidDirection(format!(
                    "{s} is not a new split compatible with the stratum"
                )));
            }
            if let Some((t, _)) = perp[i + 1..]
                .iter()
                .find(|(t, _)| !s.compatible(t) || s == t)
            {
                return Err(BhvError::InvalidDirection(format!(
                    "perpendicular splits {s} and {t} cannot share an orthant"
                )));
            }
        }
        let np = norm(&parallel);
        let nq = norm(&perp);
        if np == 0.0 && nq == 0.0 {
            return Err(BhvError::Degenerate("zero tangent vector".into()));
        }
        parallel.iter_mut().for_each(|(_, v)| *v /= np);
        perp.iter_mut().for_each(|(_, v)| *v /= nq);
        Ok(Direction {
            stratum,
            parallel,
            perp,
            theta: nq.atan2(np),
        })
    }

    /// The purely perpendicular direction that grows a single new split.
    pub fn single_split(stratum: Topology, split: Split) -> Result<Direction> {
        Direction::new(stratum, Vec::new(), vec![(split, 1.0)])
    }

    /// Initial direction of the geodesic from `x` to `z`.
    pub fn toward(x: &Tree, z: &Tree) -> Result<Direction> {
        let log = log_map(x, z)?;
        if log.length < DEGENERATE_DISTANCE {
            return Err(BhvError::Degenerate(
                "direction toward a point at zero distance".into(),
            ));
        }
        Direction::new(x.topology(), log.parallel, log.perp)
    }

    pub fn stratum(&self) -> &Topology {
        &self.stratum
    }

    /// Unit parallel part (empty when `θ = π/2`).
    pub fn parallel(&self) -> &[(Split, f64)] {
        &self.parallel
    }

    /// Unit perpendicular part (empty when `θ = 0`).
    pub fn perp(&self) -> &[(Split, f64)] {
        &self.perp
    }

    /// Mixing angle between the parallel and perpendicular parts.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn is_pure_perp(&self) -> bool {
        self.parallel.is_empty()
    }

    /// The full unit tangent vector.
    pub fn tangent(&self) -> Vec<(Split, f64)> {
        let (c, s) = (self.theta.cos(), self.theta.sin());
        let mut out: Vec<(Split, f64)> = self
            .parallel
            .iter()
            .map(|&(k, v)| (k, c * v))
            .chain(self.perp.iter().map(|&(k, v)| (k, s * v)))
            .collect();
        out.sort_by_key(|a| a.0);
        out
    }

    /// Cosine of the angle to another direction on the same stratum.
    pub fn cos_with(&self, other: &Direction) -> Result<f64> {
        if self.stratum != other.stratum {
            return Err(BhvError::InvalidDirection(
                "directions live on different strata".into(),
            ));
        }
        let par = if self.parallel.is_empty() || other.parallel.is_empty() {
            0.0
        } else {
            self.theta.cos() * other.theta.cos() * dot(&self.parallel, &other.parallel)
        };
        let perp = if self.perp.is_empty() || other.perp.is_empty() {
            0.0
        } else {
            self.theta.sin() * other.theta.sin() * link_cos(&self.perp, &other.perp)?
        };
        Ok((par + perp).clamp(-1.0, 1.0))
    }

    /// Largest step along the straight segment `x + t·u` before a split of
    /// `x` shrinks to zero.
    pub fn max_step(&self, x: &Tree) -> f64 {
        let c = self.theta.cos();
        self.parallel
            .iter()
            .filter(|(_, v)| c * v < 0.0)
            .map(|(s, v)| x.length_of(s).unwrap_or(0.0) / (-c * v))
            .fold(f64::INFINITY, f64::min)
    }

    /// The tree `x + t·u`, the point at arc length `t` along `u` for steps
    /// below [`Direction::max_step`].
    pub fn point_at(&self, x: &Tree, t: f64) -> Result<Tree> {
        if x.topology() != self.stratum {
            return Err(BhvError::InvalidDirection(
                "the base tree does not lie on the direction's stratum".into(),
            ));
        }
        if !(t >= 0.0) {
            return Err(BhvError::InvalidArgument(format!("negative step {t}")));
        }
        let (c, s) = (self.theta.cos(), self.theta.sin());
        let mut edges: Vec<(Split, f64)> = x.edges().to_vec();
        for (k, v) in &self.parallel {
            let e = edges
                .iter_mut()
                .find(|(sp, _)| sp == k)
                .expect("parallel splits belong to the stratum");
            e.1 += t * c * v;
            if e.1 <= 0.0 {
                return Err(BhvError::InvalidArgument(format!(
                    "step {t} leaves the closed orthant at split {k}"
                )));
            }
        }
        if t > 0.0 {
            edges.extend(
                self.perp
                    .iter()
                    .map(|&(k, v)| (k, t * s * v))
                    .filter(|(_, l)| *l > 0.0),
            );
        }
        Tree::new(x.n_leaves(), edges, x.pendant().map(<[f64]>::to_vec))
    }
}

/// Unnormalized initial tangent of the geodesic from `x` to `y`; its norm is
/// the distance. `⟨u, log⟩ = d(x, y)·cos ∠(u, dir_x(y))`.
#[derive(Debug, Clone)]
pub(crate) struct LogVector {
    pub parallel: Vec<(Split, f64)>,
    pub perp: Vec<(Split, f64)>,
    pub length: f64,
}

impl LogVector {
    pub fn perp_norm(&self) -> f64 {
        norm(&self.perp)
    }
}

pub(crate) fn log_map(x: &Tree, y: &Tree) -> Result<LogVector> {
    let path = geodesic(x, y)?;
    Ok(log_from_path(&path))
}

pub(crate) fn log_from_path(path: &crate::geodesic::GeodesicPath) -> LogVector {
    let mut parallel = Vec::new();
    let mut perp = Vec::new();
    for c in path.common() {
        if c.source > 0.0 {
            parallel.push((c.split, c.target - c.source));
        } else {
            perp.push((c.split, c.target));
        }
    }
    for p in path.support() {
        let (an, bn) = (p.a_norm(), p.b_norm());
        parallel.extend(p.a.iter().map(|&(s, l)| (s, -(an + bn) / an * l)));
    }
    parallel.sort_by_key(|a| a.0);
    LogVector {
        parallel,
        perp,
        length: path.length(),
    }
}

/// `⟨u, log⟩` evaluated through the spherical-join formula.
pub(crate) fn inner_with_log(u: &Direction, log: &LogVector) -> Result<f64> {
    let mut out = 0.0;
    if !u.parallel.is_empty() {
        out += u.theta.cos() * dot(&u.parallel, &log.parallel);
    }
    if !u.perp.is_empty() && !log.perp.is_empty() {
        let pn = log.perp_norm();
        let unit: Vec<(Split, f64)> = log.perp.iter().map(|&(s, v)| (s, v / pn)).collect();
        out += u.theta.sin() * pn * link_cos(&u.perp, &unit)?;
    }
    Ok(out)
}

fn norm(v: &[(Split, f64)]) -> f64 {
    v.iter().map(|(_, l)| l * l).sum::<f64>().sqrt()
}

/// Dot product of two split-indexed vectors sorted by split.
fn dot(a: &[(Split, f64)], b: &[(Split, f64)]) -> f64 {
    let (mut i, mut j, mut acc) = (0, 0, 0.0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += a[i].1 * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// Cosine of the angle between two unit perpendicular parts.
pub(crate) fn link_cos(p: &[(Split, f64)], q: &[(Split, f64)]) -> Result<f64> {
    if p.len() == 1 || q.len() == 1 {
        let (single, other) = if p.len() == 1 {
            (p[0].0, q)
        } else {
            (q[0].0, p)
        };
        if let Some((_, v)) = other.iter().find(|(s, _)| *s == single) {
            return Ok(*v);
        }
        let crossing: f64 = other
            .iter()
            .filter(|(s, _)| !s.compatible(&single))
            .map(|(_, v)| v * v)
            .sum();
        return Ok(-crossing.sqrt());
    }
    let jointly_compatible = p
        .iter()
        .all(|(s, _)| q.iter().all(|(t, _)| s.compatible(t)));
    if jointly_compatible {
        return Ok(dot(p, q));
    }
    let n = p[0].0.n_leaves();
    let tp = Tree::new(n, p.iter().copied(), None)?;
    let tq = Tree::new(n, q.iter().copied(), None)?;
    let d = distance(&tp, &tq)?;
    Ok((1.0 - 0.5 * d * d).clamp(-1.0, 1.0))
}

/// Cosine of the Alexandrov angle at `x` between `u` and the direction of
/// the geodesic from `x` to `z`, computed exactly.
pub fn cos_angle(x: &Tree, u: &Direction, z: &Tree) -> Result<f64> {
    if x.topology() != u.stratum {
        return Err(BhvError::InvalidDirection(
            "the direction is not based on the stratum of x".into(),
        ));
    }
    u.cos_with(&Direction::toward(x, z)?)
}

/// Cosine of the same angle from the comparison-triangle limit
/// `1 - d²(γ(t), γ'(t)) / (2t²)` at three shrinking scales, Richardson
/// extrapolated to `t → 0`. Independent of the join formula.
pub fn cos_angle_limit(x: &Tree, u: &Direction, z: &Tree) -> Result<f64> {
    if x.topology() != u.stratum {
        return Err(BhvError::InvalidDirection(
            "the direction is not based on the stratum of x".into(),
        ));
    }
    let path = geodesic(x, z)?;
    let d = path.length();
    if d < DEGENERATE_DISTANCE {
        return Err(BhvError::Degenerate("z coincides with x".into()));
    }
    let first_switch = path
        .support()
        .iter()
        .map(|p| p.transition() * d)
        .fold(f64::INFINITY, f64::min);
    let shortest = x
        .edges()
        .iter()
        .map(|(_, l)| *l)
        .fold(f64::INFINITY, f64::min);
    let scale = [1.0, d, first_switch, 0.5 * u.max_step(x), shortest]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let ratio = |t: f64| -> Result<f64> {
        let a = u.point_at(x, t)?;
        let b = path.point_along(t / d)?;
        let dd = distance(&a, &b)?;
        Ok(1.0 - dd * dd / (2.0 * t * t))
    };
    let t = 1e-2 * scale;
    let (c1, c2, c3) = (ratio(t)?, ratio(t / 10.0)?, ratio(t / 100.0)?);
    let r1 = (10.0 * c2 - c1) / 9.0;
    let r2 = (10.0 * c3 - c2) / 9.0;
    Ok(((100.0 * r2 - r1) / 99.0).clamp(-1.0, 1.0))
}

/// Splits the direction from `x` toward a nearby `z` into its mixing angle,
/// parallel part and perpendicular part relative to the stratum `s` of `x`.
/// `z` must carry every split of `s`, as all trees in a small enough ball
/// around `x` do.
pub fn decompose_direction(x: &Tree, s: &Topology, z: &Tree) -> Result<Direction> {
    if x.topology() != *s {
        return Err(BhvError::InvalidArgument(
            "x does not lie on the given stratum".into(),
        ));
    }
    if let Some(missing) = s.splits().iter().find(|sp| !z.has_split(sp)) {
        return Err(BhvError::InvalidArgument(format!(
            "z lacks split {missing} of the stratum, so it is not in a small ball around x"
        )));
    }
    Direction::toward(x, z)
}

/// Representative purely perpendicular directions of a stratum: every
/// single-split direction, plus for codimension ≥ 2 and `granularity ≥ 2`
/// a lattice of unit combinations (step `1/granularity`) inside each
/// maximal set of jointly compatible new splits.
pub fn enumerate_perp_directions(s: &Topology, granularity: usize) -> Result<Vec<Direction>> {
    if s.codimension() == 0 {
        return Err(BhvError::InvalidArgument(
            "a top-dimensional stratum has no perpendicular directions".into(),
        ));
    }
    let candidates = s.enumerate_compatible_splits()?;
    perp_directions_from(s, &candidates, granularity)
}

/// As [`enumerate_perp_directions`], restricted to the given candidate
/// splits (those not admitted by the stratum are skipped).
pub fn perp_directions_from(
    s: &Topology,
    candidates: &[Split],
    granularity: usize,
) -> Result<Vec<Direction>> {
    if granularity == 0 {
        return Err(BhvError::InvalidArgument(
            "granularity must be positive".into(),
        ));
    }
    let mut splits: Vec<Split> = candidates
        .iter()
        .filter(|c| !s.contains(c) && s.admits(c))
        .copied()
        .collect();
    splits.sort();
    splits.dedup();
    let mut out = Vec::with_capacity(splits.len());
    for &c in &splits {
        out.push(Direction::single_split(s.clone(), c)?);
    }
    if s.codimension() < 2 || granularity < 2 {
        return Ok(out);
    }
    let mut seen: HashSet<Vec<(Split, u64)>> = HashSet::new();
    for clique in maximal_cliques(&splits) {
        if clique.len() < 2 {
            continue;
        }
        for weights in compositions(granularity, clique.len()) {
            if weights.iter().filter(|&&w| w > 0).count() < 2 {
                continue;
            }
            let g = weights.iter().map(|&w| (w * w) as f64).sum::<f64>().sqrt();
            let mut perp: Vec<(Split, f64)> = clique
                .iter()
                .zip(&weights)
                .filter(|(_, &w)| w > 0)
                .map(|(&sp, &w)| (sp, w as f64 / g))
                .collect();
            perp.sort_by_key(|a| a.0);
            let key: Vec<(Split, u64)> = perp.iter().map(|(sp, v)| (*sp, v.to_bits())).collect();
            if seen.insert(key) {
                out.push(Direction::new(s.clone(), Vec::new(), perp)?);
            }
        }
    }
    Ok(out)
}

/// All ways of writing `total` as an ordered sum of `parts` nonnegative
/// integers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Maximal sets of pairwise compatible splits (Bron-Kerbosch with pivoting).
pub(crate) fn maximal_cliques(splits: &[Split]) -> Vec<Vec<Split>> {
    let n = splits.len();
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i != j && splits[i].compatible(&splits[j]))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    fn expand(
        r: &mut Vec<usize>,
        mut p: Vec<usize>,
        mut x: Vec<usize>,
        adj: &[Vec<bool>],
        out: &mut Vec<Vec<usize>>,
    ) {
        if p.is_empty() && x.is_empty() {
            out.push(r.clone());
            return;
        }
        let pivot = *p.iter().chain(x.iter()).next().expect("nonempty");
        let branch: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
        for v in branch {
            r.push(v);
            let np = p.iter().copied().filter(|&w| adj[v][w]).collect();
            let nx = x.iter().copied().filter(|&w| adj[v][w]).collect();
            expand(r, np, nx, adj, out);
            r.pop();
            p.retain(|&w| w != v);
            x.push(v);
        }
    }
    let mut raw = Vec::new();
    expand(
        &mut Vec::new(),
        (0..n).collect(),
        Vec::new(),
        &adj,
        &mut raw,
    );
    for c in raw {
        out.push(c.into_iter().map(|i| splits[i]).collect());
    }
    out
}

/// Mixing angle `θ` of a direction given the distance from `z` to the
/// closed stratum and the distance from `x` to `z`.
pub fn mixing_angle(dist_to_stratum: f64, dist: f64) -> f64 {
    if dist <= 0.0 {
        return 0.0;
    }
    (dist_to_stratum / dist)
        .clamp(0.0, 1.0)
        .asin()
        .min(FRAC_PI_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesic::project_to_stratum;

    fn s(n: usize, m: &[usize]) -> Split {
        Split::new(n, m.iter().copied()).unwrap()
    }

    fn tree(n: usize, edges: &[(&[usize], f64)]) -> Tree {
        Tree::new(n, edges.iter().map(|(m, l)| (s(n, m), *l)), None).unwrap()
    }

    #[test]
    fn direction_to_itself_has_zero_angle() {
        let x = tree(4, &[(&[1, 2], 1.0)]);
        let z = tree(4, &[(&[1, 2], 2.0), (&[3, 4], 0.5)]);
        let u = Direction::toward(&x, &z).unwrap();
        assert!((cos_angle(&x, &u, &z).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn opposite_spider_legs() {
        let origin = Tree::star(3).unwrap();
        let u = Direction::single_split(origin.topology(), s(3, &[1, 2])).unwrap();
        let z = tree(3, &[(&[1, 3], 0.8)]);
        assert!((cos_angle(&origin, &u, &z).unwrap() + 1.0).abs() < 1e-14);
        assert!((cos_angle_limit(&origin, &u, &z).unwrap() + 1.0).abs() < 1e-9);
    }

    #[test]
    fn limit_route_matches_exact_route_on_codim_one_stratum() {
        let x = tree(4, &[(&[1, 2], 0.8)]);
        let u = Direction::single_split(x.topology(), s(4, &[3, 4])).unwrap();
        let z = tree(4, &[(&[1, 2], 0.5), (&[1, 2, 3], 0.9)]);
        let exact = cos_angle(&x, &u, &z).unwrap();
        let limit = cos_angle_limit(&x, &u, &z).unwrap();
        // {3,4} and {1,2,3} cross, so the angle exceeds π/2
        assert!(exact < 0.0);
        assert!((exact - limit).abs() < 5e-4, "{exact} vs {limit}");
        assert!((exact - limit).abs() < 1e-8, "{exact} vs {limit}");
    }

    #[test]
    fn pure_parallel_and_pure_perpendicular() {
        let x = tree(4, &[(&[1, 2], 1.0)]);
        let st = x.topology();
        let along = decompose_direction(&x, &st, &tree(4, &[(&[1, 2], 3.0)])).unwrap();
        assert_eq!(along.theta(), 0.0);
        let away =
            decompose_direction(&x, &st, &tree(4, &[(&[1, 2], 1.0), (&[3, 4], 2.0)])).unwrap();
        assert!((away.theta() - FRAC_PI_2).abs() < 1e-15);
        assert!(away.is_pure_perp());
    }

    #[test]
    fn right_triangle_mixing_angle() {
        let x = tree(4, &[(&[1, 2], 1.0)]);
        let z = tree(4, &[(&[1, 2], 5.0), (&[3, 4], 3.0)]);
        let st = x.topology();
        let dir = decompose_direction(&x, &st, &z).unwrap();
        assert!((dir.theta() - (3.0f64 / 5.0).asin()).abs() < 1e-14);
        let to_stratum = distance(&z, &project_to_stratum(&z, &st).unwrap()).unwrap();
        let d = distance(&x, &z).unwrap();
        assert!((dir.theta() - mixing_angle(to_stratum, d)).abs() < 1e-14);
    }

    #[test]
    fn decomposition_requires_the_stratum_splits() {
        let x = tree(4, &[(&[1, 2], 1.0)]);
        let z = tree(4, &[(&[3, 4], 1.0)]);
        assert!(decompose_direction(&x, &x.topology(), &z).is_err());
    }

    #[test]
    fn perpendicular_enumeration_counts() {
        let star3 = Topology::star(3).unwrap();
        assert_eq!(enumerate_perp_directions(&star3, 1).unwrap().len(), 3);
        let codim1 = Topology::new(4, [s(4, &[1, 2])]).unwrap();
        let dirs = enumerate_perp_directions(&codim1, 5).unwrap();
        let got: Vec<Split> = dirs.iter().map(|d| d.perp()[0].0).collect();
        let mut want = vec![s(4, &[3, 4]), s(4, &[1, 2, 3]), s(4, &[1, 2, 4])];
        want.sort();
        assert_eq!(got, want);
        let star4 = Topology::star(4).unwrap();
        assert_eq!(enumerate_perp_directions(&star4, 1).unwrap().len(), 10);
        // 15 quadrants, one interior lattice point each at granularity 2
        assert_eq!(enumerate_perp_directions(&star4, 2).unwrap().len(), 25);
        let binary = Topology::new(4, [s(4, &[1, 2]), s(4, &[3, 4])]).unwrap();
        assert!(enumerate_perp_directions(&binary, 1).is_err());
    }

    #[test]
    fn single_split_link_cosine_matches_geodesic_route() {
        let n = 5;
        let f = [(s(n, &[4, 5]), 1.0)];
        let q = vec![(s(n, &[3, 4]), 0.8), (s(n, &[3, 4, 5]), 0.6)];
        let fast = link_cos(&f, &q).unwrap();
        let tf = Tree::new(n, f, None).unwrap();
        let tq = Tree::new(n, q, None).unwrap();
        let d = distance(&tf, &tq).unwrap();
        assert!((fast - (1.0 - d * d / 2.0)).abs() < 1e-14);
        assert!((fast + 0.8).abs() < 1e-14);
    }

    #[test]
    fn invalid_directions_are_rejected() {
        let st = Topology::new(4, [s(4, &[1, 2])]).unwrap();
        assert!(Direction::single_split(st.clone(), s(4, &[2, 3])).is_err());
        assert!(Direction::single_split(st.clone(), s(4, &[1, 2])).is_err());
        assert!(Direction::new(st.clone(), vec![(s(4, &[3, 4]), 1.0)], vec![]).is_err());
        assert!(Direction::new(st, vec![], vec![(s(4, &[3, 4]), -1.0)]).is_err());
    }
}
