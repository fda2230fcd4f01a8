//! Fréchet functions of finitely supported distributions, their means,
//! directional derivatives and stickiness certificates.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::direction::{
    inner_with_log, log_from_path, maximal_cliques, perp_directions_from, Direction, LogVector,
};
use crate::error::{BhvError, Result};
use crate::geodesic::{distance, geodesic};
use crate::split::Split;
use crate::topology::Topology;
use crate::tree::Tree;

/// Above this many compatible new splits, certificates examine only the
/// splits that occur in the sample.
pub const MAX_ENUMERATED_SPLITS: f64 = 4096.0;

/// A probability measure with finitely many atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    atoms: Vec<Tree>,
    weights: Vec<f64>,
}

impl EmpiricalDistribution {
    /// Weights must be positive and sum to one within `1e-12`.
    pub fn new(atoms: Vec<Tree>, weights: Vec<f64>) -> Result<EmpiricalDistribution> {
        if atoms.is_empty() {
            return Err(BhvError::InvalidArgument(
                "a distribution needs at least one atom".into(),
            ));
        }
        if atoms.len() != weights.len() {
            return Err(BhvError::InvalidArgument(format!(
                "{} atoms but {} weights",
                atoms.len(),
                weights.len()
            )));
        }
        let n = atoms[0].n_leaves();
        if let Some(t) = atoms.iter().find(|t| t.n_leaves() != n) {
            return Err(BhvError::LeafCountMismatch(n, t.n_leaves()));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(BhvError::InvalidArgument("weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(BhvError::InvalidArgument(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(EmpiricalDistribution { atoms, weights })
    }

    /// Like [`EmpiricalDistribution::new`] but rescales the weights to sum to one.
    pub fn weighted(atoms: Vec<Tree>, weights: Vec<f64>) -> Result<EmpiricalDistribution> {
        let total: f64 = weights.iter().sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(BhvError::InvalidArgument("weights must be positive".into()));
        }
        let weights = weights.into_iter().map(|w| w / total).collect();
        EmpiricalDistribution::new(atoms, weights)
    }

    pub fn uniform(atoms: Vec<Tree>) -> Result<EmpiricalDistribution> {
        let n = atoms.len();
        EmpiricalDistribution::weighted(atoms, vec![1.0; n])
    }

    pub fn point_mass(tree: Tree) -> EmpiricalDistribution {
        EmpiricalDistribution {
            atoms: vec![tree],
            weights: vec![1.0],
        }
    }

    pub fn atoms(&self) -> &[Tree] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn n_leaves(&self) -> usize {
        self.atoms[0].n_leaves()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Tree, f64)> {
        self.atoms.iter().zip(self.weights.iter().copied())
    }

    /// Every split carried by some atom, sorted.
    pub fn support_splits(&self) -> Vec<Split> {
        let mut out: Vec<Split> = self
            .atoms
            .iter()
            .flat_map(|t| t.splits().copied())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// `(1 - t)·self + t·other`.
    pub fn mixture(&self, other: &EmpiricalDistribution, t: f64) -> Result<EmpiricalDistribution> {
        if !(0.0..=1.0).contains(&t) {
            return Err(BhvError::InvalidArgument(format!(
                "mixture weight {t} outside [0, 1]"
            )));
        }
        if self.n_leaves() != other.n_leaves() {
            return Err(BhvError::LeafCountMismatch(
                self.n_leaves(),
                other.n_leaves(),
            ));
        }
        if t == 0.0 {
            return Ok(self.clone());
        }
        if t == 1.0 {
            return Ok(other.clone());
        }
        let atoms = self.atoms.iter().chain(&other.atoms).cloned().collect();
        let weights = self
            .weights
            .iter()
            .map(|w| (1.0 - t) * w)
            .chain(other.weights.iter().map(|w| t * w))
            .collect();
        Ok(EmpiricalDistribution { atoms, weights })
    }

    fn check_tree(&self, x: &Tree) -> Result<()> {
        if x.n_leaves() != self.n_leaves() {
            return Err(BhvError::LeafCountMismatch(self.n_leaves(), x.n_leaves()));
        }
        Ok(())
    }
}

/// `½ Σ w_i (d²(x, y_i) - d²(z_ref, y_i))`.
pub fn frechet_value(p: &EmpiricalDistribution, x: &Tree, z_ref: &Tree) -> Result<f64> {
    p.check_tree(x)?;
    p.check_tree(z_ref)?;
    let mut acc = 0.0;
    for (y, w) in p.iter() {
        let a = distance(x, y)?;
        let b = distance(z_ref, y)?;
        acc += w * (a - b) * (a + b);
    }
    Ok(0.5 * acc)
}

fn half_sq_sum(p: &EmpiricalDistribution, x: &Tree) -> Result<f64> {
    let mut acc = 0.0;
    for (y, w) in p.iter() {
        let d = distance(x, y)?;
        acc += w * d * d;
    }
    Ok(0.5 * acc)
}

fn check_based(x: &Tree, u: &Direction) -> Result<()> {
    if x.topology() != *u.stratum() {
        return Err(BhvError::InvalidDirection(
            "the direction is not based on the stratum of x".into(),
        ));
    }
    Ok(())
}

/// `φ_u(y) = -d(x, y)·cos ∠_x(u, dir_x(y))`, zero when `y = x`.
pub fn direction_score(x: &Tree, u: &Direction, y: &Tree) -> Result<f64> {
    check_based(x, u)?;
    Ok(-inner_with_log(u, &crate::direction::log_map(x, y)?)?)
}

/// One-sided derivative of the Fréchet function at `x` in direction `u`:
/// `Σ w_i φ_u(y_i)`.
pub fn directional_derivative(p: &EmpiricalDistribution, x: &Tree, u: &Direction) -> Result<f64> {
    p.check_tree(x)?;
    check_based(x, u)?;
    let logs = logs_at(p, x)?;
    derivative_from_logs(u, &logs)
}

fn logs_at(p: &EmpiricalDistribution, x: &Tree) -> Result<Vec<(LogVector, f64)>> {
    p.iter()
        .map(|(y, w)| Ok((log_from_path(&geodesic(x, y)?), w)))
        .collect()
}

fn derivative_from_logs(u: &Direction, logs: &[(LogVector, f64)]) -> Result<f64> {
    let mut acc = 0.0;
    for (log, w) in logs {
        acc -= w * inner_with_log(u, log)?;
    }
    Ok(acc)
}

/// Perpendicular derivatives at two base points of the same stratum.
pub fn perp_derivative_constancy_check(
    p: &EmpiricalDistribution,
    s: &Topology,
    x1: &Tree,
    x2: &Tree,
    u: &Direction,
) -> Result<(f64, f64)> {
    if !u.is_pure_perp() {
        return Err(BhvError::InvalidDirection(
            "constancy holds for purely perpendicular directions only".into(),
        ));
    }
    if u.stratum() != s || x1.topology() != *s || x2.topology() != *s {
        return Err(BhvError::InvalidArgument(
            "both base points and the direction must lie on the given stratum".into(),
        ));
    }
    Ok((
        directional_derivative(p, x1, u)?,
        directional_derivative(p, x2, u)?,
    ))
}

#[derive(Debug, Clone)]
pub struct MeanOptions {
    /// First-order optimality tolerance.
    pub tol: f64,
    /// Splits shorter than this are candidates for snapping to zero.
    pub snap_tol: f64,
    pub max_iter: usize,
    /// Cyclic proximal passes after the inductive warm start.
    pub warm_passes: usize,
    /// Lattice granularity for combined perpendicular descent directions.
    pub combo_granularity: usize,
    /// Number of most promising new splits combined at codimension ≥ 2.
    pub combo_candidates: usize,
}

impl Default for MeanOptions {
    fn default() -> MeanOptions {
        MeanOptions {
            tol: 1e-8,
            snap_tol: 1e-9,
            max_iter: 500,
            warm_passes: 2,
            combo_granularity: 4,
            combo_candidates: 12,
        }
    }
}

impl MeanOptions {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.snap_tol > 0.0) {
            return Err(BhvError::InvalidArgument(
                "tolerances must be positive".into(),
            ));
        }
        if self.max_iter == 0 {
            return Err(BhvError::InvalidArgument(
                "max_iter must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct MeanSolution {
    pub mean: Tree,
    /// Largest violation of first-order optimality at the returned point.
    pub residual: f64,
    pub iterations: usize,
    /// `½ Σ w_i d²(mean, y_i)`.
    pub value: f64,
}

pub fn frechet_mean(p: &EmpiricalDistribution, tol: f64) -> Result<Tree> {
    let opts = MeanOptions {
        tol,
        ..MeanOptions::default()
    };
    frechet_mean_with(p, &opts).map(|s| s.mean)
}

/// Warm start by inductive means and cyclic proximal steps, then an
/// active-set Newton method on the current stratum alternating with
/// descent steps into higher strata along perpendicular directions.
pub fn frechet_mean_with(p: &EmpiricalDistribution, opts: &MeanOptions) -> Result<MeanSolution> {
    opts.validate()?;
    let pendant = mean_pendant(p);
    let finish = |x: Tree, residual: f64, iterations: usize| -> Result<MeanSolution> {
        let value = half_sq_sum(p, &x)?;
        Ok(MeanSolution {
            mean: x.with_pendant(pendant.clone())?,
            residual,
            iterations,
            value,
        })
    };
    if p.len() == 1 {
        return finish(p.atoms[0].clone().with_pendant(None)?, 0.0, 0);
    }

    let mut x = warm_start(p, opts)?;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    for iter in 0..opts.max_iter {
        iterations = iter + 1;
        let (xn, gnorm) = newton(p, x, opts)?;
        x = xn;
        let logs = logs_at(p, &x)?;
        let scan = perp_scan(p, &x, &logs, opts)?;
        let perp_violation = scan.as_ref().map_or(0.0, |(d, _)| (-d).max(0.0));
        residual = gnorm.max(perp_violation);
        if let Some((d, u)) = scan {
            if d < -opts.tol {
                match perp_step(p, &x, &u, d)? {
                    Some(nx) => {
                        x = nx;
                        continue;
                    }
                    None => break,
                }
            }
        }
        if gnorm <= opts.tol {
            if let Some(nx) = try_snap(p, &x, opts)? {
                x = nx;
                continue;
            }
            return finish(x, residual, iter + 1);
        }
        break;
    }
    Err(BhvError::NonConvergence {
        best: Box::new(x.with_pendant(pendant)?),
        residual,
        iterations,
    })
}

fn mean_pendant(p: &EmpiricalDistribution) -> Option<Vec<f64>> {
    let mut acc = vec![0.0; p.n_leaves()];
    for (y, w) in p.iter() {
        let pend = y.pendant()?;
        acc.iter_mut().zip(pend).for_each(|(a, b)| *a += w * b);
    }
    Some(acc)
}

fn warm_start(p: &EmpiricalDistribution, opts: &MeanOptions) -> Result<Tree> {
    let mut x = p.atoms[0].clone().with_pendant(None)?;
    let mut cum = p.weights[0];
    for (y, w) in p.iter().skip(1) {
        cum += w;
        x = geodesic(&x, y)?.point_along((w / cum).min(1.0))?;
    }
    for pass in 1..=opts.warm_passes {
        let lambda = 1.0 / (pass as f64 + 1.0);
        for (y, w) in p.iter() {
            x = geodesic(&x, y)?.point_along(lambda * w / (1.0 + lambda * w))?;
        }
    }
    x.with_pendant(None)
}

/// Objective, gradient and Hessian restricted to the splits of `x`.
fn local_model(p: &EmpiricalDistribution, x: &Tree) -> Result<(f64, DVector<f64>, DMatrix<f64>)> {
    let edges = x.edges();
    let k = edges.len();
    let pos = |s: &Split| {
        edges
            .binary_search_by(|e| e.0.cmp(s))
            .expect("split of the iterate")
    };
    let mut f = 0.0;
    let mut g = DVector::zeros(k);
    let mut h = DMatrix::zeros(k, k);
    for (y, w) in p.iter() {
        let path = geodesic(x, y)?;
        f += 0.5 * w * path.length() * path.length();
        for c in path.common().iter().filter(|c| c.source > 0.0) {
            let i = pos(&c.split);
            g[i] += w * (c.source - c.target);
            h[(i, i)] += w;
        }
        for pair in path.support() {
            let (an, bn) = (pair.a_norm(), pair.b_norm());
            let idx: Vec<usize> = pair.a.iter().map(|(s, _)| pos(s)).collect();
            for (m, &(_, l)) in pair.a.iter().enumerate() {
                g[idx[m]] += w * (1.0 + bn / an) * l;
                h[(idx[m], idx[m])] += w * (1.0 + bn / an);
                for (q, &(_, l2)) in pair.a.iter().enumerate() {
                    h[(idx[m], idx[q])] -= w * bn * l * l2 / (an * an * an);
                }
            }
        }
    }
    Ok((f, g, h))
}

fn with_lengths(x: &Tree, coords: &[f64], floor: &[f64]) -> Result<Tree> {
    let edges = x
        .edges()
        .iter()
        .zip(coords)
        .zip(floor)
        .filter(|((_, c), fl)| **c > **fl)
        .map(|((e, c), _)| (e.0, *c));
    Tree::new(x.n_leaves(), edges, None)
}

fn newton(p: &EmpiricalDistribution, mut x: Tree, opts: &MeanOptions) -> Result<(Tree, f64)> {
    let grad_tol = opts.tol * 1e-3;
    let mut gnorm = 0.0;
    for _ in 0..200 {
        if x.edges().is_empty() {
            return Ok((x, 0.0));
        }
        let (f, g, h) = local_model(p, &x)?;
        gnorm = g.norm();
        if gnorm <= grad_tol {
            break;
        }
        let mut delta = match h.cholesky() {
            Some(c) => c.solve(&(-&g)),
            None => -&g,
        };
        let mut slope = g.dot(&delta);
        if !(slope < 0.0) {
            delta = -&g;
            slope = -gnorm * gnorm;
        }
        let coords: Vec<f64> = x.edges().iter().map(|e| e.1).collect();
        let tau_max = coords
            .iter()
            .zip(delta.iter())
            .filter(|(_, d)| **d < 0.0)
            .map(|(c, d)| c / -d)
            .fold(f64::INFINITY, f64::min);
        let floor: Vec<f64> = coords.iter().map(|c| c * 1e-12).collect();
        let mut alpha = tau_max.min(1.0);
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = coords
                .iter()
                .zip(delta.iter())
                .map(|(c, d)| c + alpha * d)
                .collect();
            let t = with_lengths(&x, &trial, &floor)?;
            let ft = half_sq_sum(p, &t)?;
            if ft <= f + 1e-4 * alpha * slope + 1e-15 * f.abs() {
                accepted = Some(t);
                break;
            }
            alpha *= 0.5;
        }
        match accepted {
            Some(t) => {
                let dropped = t.edges().len() < x.edges().len();
                let step = alpha * delta.norm();
                x = t;
                if !dropped && step <= 1e-15 * (1.0 + x.norm()) {
                    break;
                }
            }
            None => break,
        }
    }
    if !x.edges().is_empty() {
        gnorm = local_model(p, &x)?.1.norm();
    }
    Ok((x, gnorm))
}

/// Most negative derivative over perpendicular directions built from the
/// sample's splits, with the direction attaining it.
fn perp_scan(
    p: &EmpiricalDistribution,
    x: &Tree,
    logs: &[(LogVector, f64)],
    opts: &MeanOptions,
) -> Result<Option<(f64, Direction)>> {
    let s = x.topology();
    if s.codimension() == 0 {
        return Ok(None);
    }
    let candidates: Vec<Split> = p
        .support_splits()
        .into_iter()
        .filter(|c| !s.contains(c) && s.admits(c))
        .collect();
    if candidates.is_empty() {
        return Ok(None);
    }
    let mut singles = Vec::with_capacity(candidates.len());
    for &c in &candidates {
        let u = Direction::single_split(s.clone(), c)?;
        let d = derivative_from_logs(&u, logs)?;
        singles.push((d, u));
    }
    singles.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut scored = singles;
    if s.codimension() >= 2 && opts.combo_granularity >= 2 && scored.len() >= 2 {
        let chosen: Vec<Split> = scored
            .iter()
            .take(opts.combo_candidates)
            .map(|(_, u)| u.perp()[0].0)
            .collect();
        for u in perp_directions_from(&s, &chosen, opts.combo_granularity)? {
            if u.perp().len() < 2 {
                continue;
            }
            let d = derivative_from_logs(&u, logs)?;
            scored.push((d, u));
        }
    }
    let mut best = scored
        .iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .cloned()
        .expect("at least one candidate");
    if best.0 >= -opts.tol && s.codimension() >= 2 {
        for (d, u) in refine_on_cliques(&s, &scored, logs, opts.combo_candidates)? {
            if d < best.0 {
                best = (d, u);
            }
        }
    }
    Ok(Some(best))
}

/// Lowest derivative inside each orthant of the link spanned by the most
/// promising new splits. The derivative extended positively homogeneously
/// is convex on such an orthant, so it is minimized over the simplex of
/// weights by pairwise exchanges of mass, starting from the best scored
/// direction the orthant contains.
fn refine_on_cliques(
    s: &Topology,
    scored: &[(f64, Direction)],
    logs: &[(LogVector, f64)],
    limit: usize,
) -> Result<Vec<(f64, Direction)>> {
    let mut singles: Vec<&(f64, Direction)> =
        scored.iter().filter(|(_, u)| u.perp().len() == 1).collect();
    singles.sort_by(|a, b| a.0.total_cmp(&b.0));
    let chosen: Vec<Split> = singles
        .iter()
        .take(limit)
        .map(|(_, u)| u.perp()[0].0)
        .collect();
    let mut out = Vec::new();
    for clique in maximal_cliques(&chosen) {
        if clique.len() < 2 {
            continue;
        }
        let start = scored
            .iter()
            .filter(|(_, u)| {
                u.parallel().is_empty() && u.perp().iter().all(|(c, _)| clique.contains(c))
            })
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .expect("the clique's single splits are scored");
        let mut v: Vec<f64> = clique
            .iter()
            .map(|c| {
                start
                    .1
                    .perp()
                    .iter()
                    .find(|(x, _)| x == c)
                    .map_or(0.0, |(_, w)| *w)
            })
            .collect();
        let total: f64 = v.iter().sum();
        v.iter_mut().for_each(|w| *w /= total);
        let value = |v: &[f64]| -> Result<f64> {
            let perp: Vec<(Split, f64)> = clique
                .iter()
                .zip(v)
                .filter(|(_, w)| **w > 0.0)
                .map(|(c, w)| (*c, *w))
                .collect();
            let norm = v.iter().map(|w| w * w).sum::<f64>().sqrt();
            let u = Direction::new(s.clone(), Vec::new(), perp)?;
            Ok(norm * derivative_from_logs(&u, logs)?)
        };
        let mut current = value(&v)?;
        for _ in 0..100 {
            let before = current;
            for i in 0..v.len() {
                for j in 0..v.len() {
                    if i == j || v[j] <= 0.0 {
                        continue;
                    }
                    // move mass from j to i
                    let base = v.clone();
                    let shift = |delta: f64| {
                        let mut t = base.clone();
                        t[i] += delta;
                        t[j] -= delta;
                        t[j] = t[j].max(0.0);
                        t
                    };
                    let (mut a, mut b) = (0.0, v[j]);
                    let g = (5f64.sqrt() - 1.0) / 2.0;
                    while b - a > 1e-12 {
                        let c = b - g * (b - a);
                        let d = a + g * (b - a);
                        if value(&shift(c))? < value(&shift(d))? {
                            b = d;
                        } else {
                            a = c;
                        }
                    }
                    for delta in [0.5 * (a + b), v[j]] {
                        let trial = shift(delta);
                        let f = value(&trial)?;
                        if f < current {
                            current = f;
                            v = trial;
                        }
                    }
                }
            }
            if before - current <= 1e-15 {
                break;
            }
        }
        let perp: Vec<(Split, f64)> = clique
            .iter()
            .zip(&v)
            .filter(|(_, w)| **w > 0.0)
            .map(|(c, w)| (*c, *w))
            .collect();
        let u = Direction::new(s.clone(), Vec::new(), perp)?;
        out.push((derivative_from_logs(&u, logs)?, u));
    }
    Ok(out)
}

/// Armijo search along a perpendicular descent direction. `F` is 1-convex
/// along the ray, so its minimizer lies within `-d` of the base point.
fn perp_step(p: &EmpiricalDistribution, x: &Tree, u: &Direction, d: f64) -> Result<Option<Tree>> {
    let f = half_sq_sum(p, x)?;
    let mut alpha = -d;
    for _ in 0..60 {
        let t = u.point_at(x, alpha)?;
        if half_sq_sum(p, &t)? <= f + 1e-4 * alpha * d {
            return Ok(Some(t));
        }
        alpha *= 0.5;
    }
    Ok(None)
}

/// Drops splits shorter than `snap_tol` when the derivatives at the lower
/// stratum show the drop does not move away from the optimum.
fn try_snap(p: &EmpiricalDistribution, x: &Tree, opts: &MeanOptions) -> Result<Option<Tree>> {
    let short: Vec<Split> = x
        .edges()
        .iter()
        .filter(|(_, l)| *l < opts.snap_tol)
        .map(|(s, _)| *s)
        .collect();
    if short.is_empty() {
        return Ok(None);
    }
    let lower = Tree::new(
        x.n_leaves(),
        x.edges()
            .iter()
            .filter(|(s, _)| !short.contains(s))
            .copied(),
        None,
    )?;
    let logs = logs_at(p, &lower)?;
    for s in short {
        let u = Direction::single_split(lower.topology(), s)?;
        if derivative_from_logs(&u, &logs)? < -opts.tol {
            return Ok(None);
        }
    }
    Ok(Some(lower))
}

/// Derivative of the Fréchet function at the mean in one examined
/// perpendicular direction.
#[derive(Debug, Clone, Serialize)]
pub struct DirectionDegree {
    pub direction: Direction,
    pub derivative: f64,
    /// Whether some atom has a nonzero score in this direction.
    pub assumption1: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct StickinessCertificate {
    #[serde(skip)]
    pub mean: Tree,
    pub stratum: Topology,
    pub codimension: usize,
    pub per_direction: Vec<DirectionDegree>,
    pub zeta: f64,
    /// Ball radius used: the requested radius capped by the shortest split
    /// of the mean, so every tree in the ball keeps the mean's splits.
    pub eta: f64,
    pub epsilon: Option<f64>,
    pub sticky: bool,
    pub directions_exhaustive: bool,
    /// True when only splits present in the sample were examined.
    pub candidates_truncated: bool,
    pub tol: f64,
}

#[derive(Debug, Clone)]
pub enum StickinessReport {
    /// The mean lies on a top-dimensional stratum.
    NotApplicable {
        mean: Tree,
    },
    Certificate(StickinessCertificate),
}

impl StickinessReport {
    pub fn mean(&self) -> &Tree {
        match self {
            StickinessReport::NotApplicable { mean } => mean,
            StickinessReport::Certificate(c) => &c.mean,
        }
    }

    pub fn is_sticky(&self) -> bool {
        matches!(self, StickinessReport::Certificate(c) if c.sticky)
    }

    pub fn certificate(&self) -> Option<&StickinessCertificate> {
        match self {
            StickinessReport::Certificate(c) => Some(c),
            StickinessReport::NotApplicable { .. } => None,
        }
    }
}

/// Most promising single splits whose link orthants are searched for the
/// lowest combined derivative.
const REFINED_CANDIDATES: usize = 12;

pub fn stickiness_certificate(
    p: &EmpiricalDistribution,
    eta: f64,
    granularity: usize,
    tol: f64,
) -> Result<StickinessReport> {
    stickiness_certificate_with(p, eta, granularity, tol, &MeanOptions::default())
}

pub fn stickiness_certificate_with(
    p: &EmpiricalDistribution,
    eta: f64,
    granularity: usize,
    tol: f64,
    opts: &MeanOptions,
) -> Result<StickinessReport> {
    let mean = frechet_mean_with(p, opts)?.mean;
    certificate_at(p, &mean, eta, granularity, tol)
}

/// Certificate evaluated at a given mean.
pub fn certificate_at(
    p: &EmpiricalDistribution,
    mean: &Tree,
    eta: f64,
    granularity: usize,
    tol: f64,
) -> Result<StickinessReport> {
    if !(eta > 0.0 && tol > 0.0) {
        return Err(BhvError::InvalidArgument(
            "eta and tol must be positive".into(),
        ));
    }
    if granularity == 0 {
        return Err(BhvError::InvalidArgument(
            "granularity must be positive".into(),
        ));
    }
    p.check_tree(mean)?;
    let stratum = mean.topology();
    let codimension = stratum.codimension();
    if codimension == 0 {
        return Ok(StickinessReport::NotApplicable { mean: mean.clone() });
    }
    let truncated = stratum.count_compatible_splits() > MAX_ENUMERATED_SPLITS;
    let candidates = if truncated {
        p.support_splits()
    } else {
        stratum.enumerate_compatible_splits()?
    };
    let directions = perp_directions_from(&stratum, &candidates, granularity)?;
    let base = mean.clone().with_pendant(None)?;
    let logs = logs_at(p, &base)?;
    let per_direction = directions
        .into_par_iter()
        .map(|u| {
            let mut derivative = 0.0;
            let mut assumption1 = false;
            for (log, w) in &logs {
                let phi = -inner_with_log(&u, log)?;
                derivative += w * phi;
                assumption1 |= phi.abs() > 1e-12;
            }
            Ok(DirectionDegree {
                direction: u,
                derivative,
                assumption1,
            })
        })
        .collect::<Result<Vec<DirectionDegree>>>()?;
    let mut per_direction = per_direction;
    if codimension >= 2 {
        let scored: Vec<(f64, Direction)> = per_direction
            .iter()
            .map(|d| (d.derivative, d.direction.clone()))
            .collect();
        for (_, u) in refine_on_cliques(&stratum, &scored, &logs, REFINED_CANDIDATES)? {
            if scored.iter().any(|(_, v)| v.perp() == u.perp()) {
                continue;
            }
            let mut derivative = 0.0;
            let mut assumption1 = false;
            for (log, w) in &logs {
                let phi = -inner_with_log(&u, log)?;
                derivative += w * phi;
                assumption1 |= phi.abs() > 1e-12;
            }
            per_direction.push(DirectionDegree {
                direction: u,
                derivative,
                assumption1,
            });
        }
    }
    let zeta = per_direction
        .iter()
        .map(|d| d.derivative)
        .fold(f64::INFINITY, f64::min);
    let eta = mean.edges().iter().map(|(_, l)| *l).fold(eta, f64::min);
    let sticky = zeta > tol;
    Ok(StickinessReport::Certificate(StickinessCertificate {
        mean: mean.clone(),
        stratum,
        codimension,
        per_direction,
        zeta,
        eta,
        epsilon: sticky.then(|| zeta.min(eta)),
        sticky,
        directions_exhaustive: codimension == 1 && !truncated,
        candidates_truncated: truncated,
        tol,
    }))
}
