//! Wasserstein distances between empirical distributions, stickiness
//! simulations, and the paired comparison of degrees of stickiness.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::direction::Direction;
use crate::error::{BhvError, Result};
use crate::frechet::{direction_score, frechet_mean_with, EmpiricalDistribution, MeanOptions};
use crate::geodesic::distance;
use crate::split::Split;
use crate::topology::Topology;
use crate::tree::Tree;

/// Exact 1-Wasserstein distance between two empirical distributions.
pub fn w1(p: &EmpiricalDistribution, q: &EmpiricalDistribution) -> Result<f64> {
    if p.n_leaves() != q.n_leaves() {
        return Err(BhvError::LeafCountMismatch(p.n_leaves(), q.n_leaves()));
    }
    let cost: Vec<Vec<f64>> = p
        .atoms()
        .par_iter()
        .map(|x| q.atoms().iter().map(|y| distance(x, y)).collect())
        .collect::<Result<_>>()?;
    Ok(transport_cost(p.weights(), q.weights(), &cost))
}

/// Minimum-cost transport between supplies `a` and demands `b` of equal
/// total mass, by successive shortest augmenting paths.
pub fn transport_cost(a: &[f64], b: &[f64], cost: &[Vec<f64>]) -> f64 {
    const EPS: f64 = 1e-15;
    let (n, m) = (a.len(), b.len());
    let mut flow = vec![vec![0.0; m]; n];
    let mut ra = a.to_vec();
    let mut rb = b.to_vec();
    // nodes 0..n are sources, n..n+m sinks
    let mut dist = vec![f64::INFINITY; n + m];
    let mut prev = vec![usize::MAX; n + m];
    let mut queued = vec![false; n + m];
    for _ in 0..4 * (n + m) * (n + m) {
        if ra.iter().all(|r| *r <= EPS) || rb.iter().all(|r| *r <= EPS) {
            break;
        }
        dist.iter_mut().for_each(|d| *d = f64::INFINITY);
        prev.iter_mut().for_each(|p| *p = usize::MAX);
        let mut queue = std::collections::VecDeque::new();
        for i in 0..n {
            if ra[i] > EPS {
                dist[i] = 0.0;
                queue.push_back(i);
                queued[i] = true;
            }
        }
        while let Some(v) = queue.pop_front() {
            queued[v] = false;
            if v < n {
                for j in 0..m {
                    let nd = dist[v] + cost[v][j];
                    if nd < dist[n + j] - 1e-15 {
                        dist[n + j] = nd;
                        prev[n + j] = v;
                        if !queued[n + j] {
                            queued[n + j] = true;
                            queue.push_back(n + j);
                        }
                    }
                }
            } else {
                let j = v - n;
                for i in 0..n {
                    if flow[i][j] > EPS {
                        let nd = dist[v] - cost[i][j];
                        if nd < dist[i] - 1e-15 {
                            dist[i] = nd;
                            prev[i] = v;
                            if !queued[i] {
                                queued[i] = true;
                                queue.push_back(i);
                            }
                        }
                    }
                }
            }
        }
        let Some(end) = (0..m)
            .filter(|&j| rb[j] > EPS && dist[n + j].is_finite())
            .min_by(|&x, &y| dist[n + x].total_cmp(&dist[n + y]))
        else {
            break;
        };
        let mut delta = rb[end];
        let mut v = n + end;
        while prev[v] != usize::MAX {
            let u = prev[v];
            if u >= n {
                delta = delta.min(flow[v][u - n]);
            }
            v = u;
        }
        delta = delta.min(ra[v]);
        let origin = v;
        let mut v = n + end;
        while prev[v] != usize::MAX {
            let u = prev[v];
            if u < n {
                flow[u][v - n] += delta;
            } else {
                flow[v][u - n] -= delta;
            }
            v = u;
        }
        ra[origin] -= delta;
        rb[end] -= delta;
    }
    flow.iter()
        .zip(cost)
        .map(|(f, c)| f.iter().zip(c).map(|(x, y)| x * y).sum::<f64>())
        .sum()
}

/// `(1 - t)·P + t·Q`.
pub fn mixture(
    p: &EmpiricalDistribution,
    q: &EmpiricalDistribution,
    t: f64,
) -> Result<EmpiricalDistribution> {
    p.mixture(q, t)
}

/// Mean of `p`, falling back to the best iterate when the solver stops
/// short of its tolerance.
fn mean_of(p: &EmpiricalDistribution, opts: &MeanOptions) -> Result<(Tree, bool)> {
    match frechet_mean_with(p, opts) {
        Ok(sol) => Ok((sol.mean, true)),
        Err(BhvError::NonConvergence { best, .. }) => Ok((*best, false)),
        Err(e) => Err(e),
    }
}

fn in_stratum(x: &Tree, s: &Topology, opts: &MeanOptions) -> bool {
    x.prune(opts.snap_tol).topology() == *s
}

#[derive(Debug, Clone, Serialize)]
pub struct SimRow {
    pub n: usize,
    pub reps: usize,
    pub in_stratum: usize,
    pub fraction: f64,
    /// Replicates whose mean solver stopped at its iteration limit.
    pub nonconverged: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimTable {
    pub seed: u64,
    pub rows: Vec<SimRow>,
}

/// For each sample size, the fraction of replicates whose empirical mean
/// lies on `s`. Replicate `r` at grid position `k` draws from its own
/// stream `(k << 32) | r` of the seeded generator.
pub fn sample_sticky_sim(
    p: &EmpiricalDistribution,
    s: &Topology,
    n_grid: &[usize],
    reps: usize,
    seed: u64,
    opts: &MeanOptions,
) -> Result<SimTable> {
    if s.n_leaves() != p.n_leaves() {
        return Err(BhvError::LeafCountMismatch(p.n_leaves(), s.n_leaves()));
    }
    if n_grid.contains(&0) || reps == 0 {
        return Err(BhvError::InvalidArgument(
            "sample sizes and reps must be positive".into(),
        ));
    }
    let index = WeightedIndex::new(p.weights())
        .map_err(|e| BhvError::InvalidArgument(format!("weights: {e}")))?;
    let mut rows = Vec::with_capacity(n_grid.len());
    for (k, &n) in n_grid.iter().enumerate() {
        let outcomes: Vec<(bool, bool)> = (0..reps)
            .into_par_iter()
            .map(|r| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(((k as u64) << 32) | r as u64);
                let mut counts = vec![0usize; p.len()];
                for _ in 0..n {
                    counts[index.sample(&mut rng)] += 1;
                }
                let (atoms, weights): (Vec<Tree>, Vec<f64>) = counts
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c > 0)
                    .map(|(i, c)| (p.atoms()[i].clone(), *c as f64))
                    .unzip();
                let sample = EmpiricalDistribution::weighted(atoms, weights)?;
                let (mean, converged) = mean_of(&sample, opts)?;
                Ok((in_stratum(&mean, s, opts), converged))
            })
            .collect::<Result<_>>()?;
        let hits = outcomes.iter().filter(|o| o.0).count();
        rows.push(SimRow {
            n,
            reps,
            in_stratum: hits,
            fraction: hits as f64 / reps as f64,
            nonconverged: outcomes.iter().filter(|o| !o.1).count(),
        });
    }
    Ok(SimTable { seed, rows })
}

#[derive(Debug, Clone, Serialize)]
pub struct PerturbationRow {
    pub probe: usize,
    pub t: f64,
    pub in_stratum: bool,
}

/// Whether the mean of `(1 - t)·P + t·δ_y` lies on `s`, for every probe
/// `y` and every `t` of the grid.
pub fn perturbation_sticky_check(
    p: &EmpiricalDistribution,
    s: &Topology,
    probes: &[Tree],
    t_grid: &[f64],
    opts: &MeanOptions,
) -> Result<Vec<PerturbationRow>> {
    let jobs: Vec<(usize, f64)> = (0..probes.len())
        .flat_map(|i| t_grid.iter().map(move |&t| (i, t)))
        .collect();
    jobs.into_par_iter()
        .map(|(i, t)| {
            let q = EmpiricalDistribution::point_mass(probes[i].clone());
            let (mean, _) = mean_of(&p.mixture(&q, t)?, opts)?;
            Ok(PerturbationRow {
                probe: i,
                t,
                in_stratum: in_stratum(&mean, s, opts),
            })
        })
        .collect()
}

/// Largest mixture weight `t ≤ t_max` toward `δ_probe` that keeps the mean
/// on `s`, located by bisection to within `t_tol`. Zero when the mean of
/// `p` itself is off `s`.
pub fn perturbation_threshold(
    p: &EmpiricalDistribution,
    s: &Topology,
    probe: &Tree,
    t_max: f64,
    t_tol: f64,
    opts: &MeanOptions,
) -> Result<f64> {
    if !(t_max > 0.0 && t_max <= 1.0 && t_tol > 0.0) {
        return Err(BhvError::InvalidArgument(
            "need 0 < t_max <= 1 and t_tol > 0".into(),
        ));
    }
    let q = EmpiricalDistribution::point_mass(probe.clone());
    let sticks = |t: f64| -> Result<bool> {
        let (mean, _) = mean_of(&p.mixture(&q, t)?, opts)?;
        Ok(in_stratum(&mean, s, opts))
    };
    if !sticks(0.0)? {
        return Ok(0.0);
    }
    if sticks(t_max)? {
        return Ok(t_max);
    }
    let (mut lo, mut hi) = (0.0, t_max);
    while hi - lo > t_tol {
        let mid = 0.5 * (lo + hi);
        if sticks(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Two-sided one-sample t-test of zero mean. Returns `(t, p)`; constant
/// samples give `p = 1` when all values are zero and `p = 0` otherwise.
pub fn paired_t_test(diffs: &[f64]) -> Result<(f64, f64)> {
    let n = diffs.len();
    if n < 2 {
        return Err(BhvError::InvalidArgument(
            "a t-test needs at least two pairs".into(),
        ));
    }
    let mut sorted = diffs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = sorted.iter().sum::<f64>() / n as f64;
    let var = sorted.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    if var == 0.0 {
        return Ok(if mean == 0.0 {
            (0.0, 1.0)
        } else {
            (mean.signum() * f64::INFINITY, 0.0)
        });
    }
    let t = mean / (var / n as f64).sqrt();
    let dist = StudentsT::new(0.0, 1.0, (n - 1) as f64).expect("positive degrees of freedom");
    Ok((t, (2.0 * dist.sf(t.abs())).min(1.0)))
}

/// Holm step-down adjusted p-values, in the input order.
pub fn holm(p: &[f64]) -> Vec<f64> {
    let m = p.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p[a].total_cmp(&p[b]));
    let mut adjusted = vec![0.0; m];
    let mut running = 0.0f64;
    for (rank, &i) in order.iter().enumerate() {
        running = running.max(((m - rank) as f64 * p[i]).min(1.0));
        adjusted[i] = running;
    }
    adjusted
}

#[derive(Debug, Clone)]
pub struct DegreeOptions {
    pub alpha: f64,
    /// Splits shorter than this are removed from every input tree.
    pub prune: f64,
    pub mean: MeanOptions,
}

impl DegreeOptions {
    pub fn new(alpha: f64, prune: f64) -> DegreeOptions {
        DegreeOptions {
            alpha,
            prune,
            mean: MeanOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeReport {
    pub directions: Vec<Split>,
    pub degrees_x: Vec<f64>,
    pub degrees_y: Vec<f64>,
    pub t_statistics: Vec<f64>,
    pub per_direction_p: Vec<f64>,
    pub adjusted_p: Vec<f64>,
    pub global_p: f64,
    pub reject: bool,
    pub alpha: f64,
    pub n_pairs: usize,
    pub prune: f64,
    pub mean_topology: Topology,
}

/// Compares the degrees of stickiness of two paired samples along every
/// single-split direction present in either sample and compatible with the
/// common topology of their means.
pub fn degree_test(x: &[Tree], y: &[Tree], opts: &DegreeOptions) -> Result<DegreeReport> {
    if x.len() != y.len() {
        return Err(BhvError::UnpairedSamples(x.len(), y.len()));
    }
    if !(opts.alpha > 0.0 && opts.alpha < 1.0) {
        return Err(BhvError::InvalidArgument(format!(
            "alpha {} outside (0, 1)",
            opts.alpha
        )));
    }
    if !(opts.prune >= 0.0 && opts.prune.is_finite()) {
        return Err(BhvError::InvalidArgument(
            "the prune threshold must be >= 0".into(),
        ));
    }
    let x: Vec<Tree> = x.iter().map(|t| t.prune(opts.prune)).collect();
    let y: Vec<Tree> = y.iter().map(|t| t.prune(opts.prune)).collect();
    let px = EmpiricalDistribution::uniform(x.clone())?;
    let py = EmpiricalDistribution::uniform(y.clone())?;
    if px.n_leaves() != py.n_leaves() {
        return Err(BhvError::LeafCountMismatch(px.n_leaves(), py.n_leaves()));
    }
    let (mx, _) = mean_of(&px, &opts.mean)?;
    let (my, _) = mean_of(&py, &opts.mean)?;
    let (mx, my) = (mx.with_pendant(None)?, my.with_pendant(None)?);
    let topology = mx.topology();
    if topology != my.topology() {
        return Err(BhvError::IncomparableTopologies(
            topology.to_string(),
            my.topology().to_string(),
        ));
    }
    let mut directions: Vec<Split> = px.support_splits();
    directions.extend(py.support_splits());
    directions.sort();
    directions.dedup();
    directions.retain(|s| !topology.contains(s) && topology.admits(s));

    let rows: Vec<(f64, f64, f64, f64)> = directions
        .par_iter()
        .map(|&split| {
            let ux = Direction::single_split(topology.clone(), split)?;
            let mut diffs = Vec::with_capacity(x.len());
            let (mut sx, mut sy) = (0.0, 0.0);
            for (xi, yi) in x.iter().zip(&y) {
                let a = direction_score(&mx, &ux, xi)?;
                let b = direction_score(&my, &ux, yi)?;
                sx += a;
                sy += b;
                diffs.push(a - b);
            }
            let (t, p) = paired_t_test(&diffs)?;
            Ok((sx / x.len() as f64, sy / y.len() as f64, t, p))
        })
        .collect::<Result<_>>()?;
    let per_direction_p: Vec<f64> = rows.iter().map(|r| r.3).collect();
    let adjusted_p = holm(&per_direction_p);
    let global_p = adjusted_p.iter().copied().fold(1.0, f64::min);
    Ok(DegreeReport {
        directions,
        degrees_x: rows.iter().map(|r| r.0).collect(),
        degrees_y: rows.iter().map(|r| r.1).collect(),
        t_statistics: rows.iter().map(|r| r.2).collect(),
        per_direction_p,
        adjusted_p,
        global_p,
        reject: global_p <= opts.alpha,
        alpha: opts.alpha,
        n_pairs: x.len(),
        prune: opts.prune,
        mean_topology: topology,
    })
}
