#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

use bhv_core::{EmpiricalDistribution, Split, Tree};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn split(n: usize, members: &[usize]) -> Split {
    Split::new(n, members.iter().copied()).unwrap()
}

pub fn tree(n: usize, edges: &[(&[usize], f64)]) -> Tree {
    Tree::new(n, edges.iter().map(|(m, l)| (split(n, m), *l)), None).unwrap()
}

/// Splits of a uniformly shuffled random binary tree.
pub fn random_binary_splits(n: usize, rng: &mut impl Rng) -> Vec<Split> {
    fn divide(leaves: Vec<usize>, n: usize, out: &mut Vec<Split>, rng: &mut impl Rng) {
        if leaves.len() < 2 {
            return;
        }
        if leaves.len() < n {
            out.push(Split::new(n, leaves.iter().copied()).unwrap());
        }
        let mut leaves = leaves;
        leaves.shuffle(rng);
        let cut = rng.random_range(1..leaves.len());
        let right = leaves.split_off(cut);
        divide(leaves, n, out, rng);
        divide(right, n, out, rng);
    }
    let mut out = Vec::new();
    divide((1..=n).collect(), n, &mut out, rng);
    out
}

/// A random tree on `n` leaves; each split of a random binary topology is
/// kept with probability `keep`, lengths uniform on `[0.1, 2)`.
pub fn random_tree(n: usize, keep: f64, rng: &mut impl Rng) -> Tree {
    let mut edges = Vec::new();
    for s in random_binary_splits(n, rng) {
        if rng.random::<f64>() < keep {
            edges.push((s, rng.random_range(0.1..2.0)));
        }
    }
    Tree::new(n, edges, None).unwrap()
}

pub fn random_distribution(
    n: usize,
    atoms: usize,
    keep: f64,
    rng: &mut impl Rng,
) -> EmpiricalDistribution {
    let trees = (0..atoms).map(|_| random_tree(n, keep, rng)).collect();
    let weights = (0..atoms).map(|_| rng.random_range(0.2..1.0)).collect();
    EmpiricalDistribution::weighted(trees, weights).unwrap()
}

/// Point on leg `i ∈ {1, 2, 3}` of the three-leaf spider.
pub fn leg(i: usize, len: f64) -> Tree {
    let m: &[usize] = match i {
        1 => &[1, 2],
        2 => &[1, 3],
        3 => &[2, 3],
        _ => panic!("the spider has three legs"),
    };
    tree(3, &[(m, len)])
}

pub fn spider(masses: [f64; 3], lengths: [f64; 3]) -> EmpiricalDistribution {
    EmpiricalDistribution::weighted(
        (0..3).map(|i| leg(i + 1, lengths[i])).collect(),
        masses.to_vec(),
    )
    .unwrap()
}

/// Distance in the four-leaf tree space from its structure as the Euclidean
/// cone over the Petersen graph (ten splits, edges between compatible pairs,
/// each edge a quarter circle). Orthant sequences are the paths of the graph;
/// a path of total angle below π unfolds into a planar sector.
pub fn t4_cone_distance(x: &Tree, y: &Tree) -> f64 {
    assert_eq!(x.n_leaves(), 4);
    let verts = Split::all(4).unwrap();
    let k = verts.len();
    let idx = |s: &Split| verts.iter().position(|v| v == s).unwrap();
    let mut hop = vec![vec![f64::INFINITY; k]; k];
    for i in 0..k {
        hop[i][i] = 0.0;
        for j in 0..k {
            if i != j && verts[i].is_compatible(&verts[j]).unwrap() {
                hop[i][j] = FRAC_PI_2;
            }
        }
    }
    for m in 0..k {
        for i in 0..k {
            for j in 0..k {
                if hop[i][m] + hop[m][j] < hop[i][j] {
                    hop[i][j] = hop[i][m] + hop[m][j];
                }
            }
        }
    }
    let (rx, ry) = (x.norm(), y.norm());
    if rx == 0.0 || ry == 0.0 {
        return rx.max(ry);
    }
    // link points as (vertex, angular offset) anchors
    let anchors = |t: &Tree| -> Vec<(usize, f64)> {
        match t.edges() {
            [(a, _)] => vec![(idx(a), 0.0)],
            [(a, la), (b, lb)] => {
                let alpha = lb.atan2(*la);
                vec![(idx(a), alpha), (idx(b), FRAC_PI_2 - alpha)]
            }
            _ => unreachable!("trees in T_4 have at most two splits"),
        }
    };
    let (ax, ay) = (anchors(x), anchors(y));
    let mut theta = f64::INFINITY;
    for &(u, ou) in &ax {
        for &(v, ov) in &ay {
            theta = theta.min(ou + hop[u][v] + ov);
        }
    }
    if ax.len() == 2 && ay.len() == 2 && ax[0].0 == ay[0].0 && ax[1].0 == ay[1].0 {
        theta = theta.min((ax[0].1 - ay[0].1).abs());
    }
    let theta = theta.min(PI);
    (rx * rx + ry * ry - 2.0 * rx * ry * theta.cos())
        .max(0.0)
        .sqrt()
}

/// Minimizer of a unimodal function on `[a, b]`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    while (b - a).abs() > tol {
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    0.5 * (a + b)
}

type Point = Vec<(Split, f64)>;

fn orthant_gap(p: &[(Split, f64)], q: &[(Split, f64)]) -> Option<f64> {
    let mut coords: Vec<(Split, f64, f64)> = p.iter().map(|(s, l)| (*s, *l, 0.0)).collect();
    for (s, l) in q {
        match coords.iter_mut().find(|c| c.0 == *s) {
            Some(c) => c.2 = *l,
            None => coords.push((*s, 0.0, *l)),
        }
    }
    for i in 0..coords.len() {
        for j in i + 1..coords.len() {
            if !coords[i].0.is_compatible(&coords[j].0).unwrap() {
                return None;
            }
        }
    }
    Some(
        coords
            .iter()
            .map(|c| (c.1 - c.2).powi(2))
            .sum::<f64>()
            .sqrt(),
    )
}

/// Brute-force distance in the four-leaf tree space: every sequence of up
/// to four boundary rays between the two orthants is scored on a grid of
/// crossing radii, and the promising sequences are then polished by
/// coordinate-wise golden-section search. Paths through the cone point
/// and direct segments are included.
pub fn t4_path_oracle(x: &Tree, y: &Tree) -> f64 {
    const GRID: usize = 64;
    let rays = Split::all(4).unwrap();
    let px: Point = x.edges().to_vec();
    let py: Point = y.edges().to_vec();
    let reach = x.norm() + y.norm();
    let mut best = reach;
    if let Some(d) = orthant_gap(&px, &py) {
        best = best.min(d);
    }
    if reach == 0.0 {
        return 0.0;
    }
    let path_len = |seq: &[Split], radii: &[f64]| -> f64 {
        let pts: Vec<Point> = seq.iter().zip(radii).map(|(s, r)| vec![(*s, *r)]).collect();
        let mut total =
            orthant_gap(&px, &pts[0]).unwrap() + orthant_gap(pts.last().unwrap(), &py).unwrap();
        for w in pts.windows(2) {
            total += orthant_gap(&w[0], &w[1]).unwrap();
        }
        total
    };

    let mut seqs: Vec<Vec<Split>> = Vec::new();
    let mut stack: Vec<Vec<Split>> = rays
        .iter()
        .filter(|f| orthant_gap(&px, &[(**f, 0.0)]).is_some())
        .map(|f| vec![*f])
        .collect();
    while let Some(seq) = stack.pop() {
        let last = *seq.last().unwrap();
        if orthant_gap(&[(last, 0.0)], &py).is_some() {
            seqs.push(seq.clone());
        }
        if seq.len() < 4 {
            for g in &rays {
                if *g != last && g.is_compatible(&last).unwrap() {
                    let mut next = seq.clone();
                    next.push(*g);
                    stack.push(next);
                }
            }
        }
    }

    let grid: Vec<f64> = (0..=GRID).map(|k| reach * k as f64 / GRID as f64).collect();
    let mut scored: Vec<(f64, Vec<Split>, Vec<f64>)> = Vec::new();
    for seq in seqs {
        // dynamic programme over crossing radii
        let mut cost: Vec<f64> = grid
            .iter()
            .map(|r| orthant_gap(&px, &[(seq[0], *r)]).unwrap())
            .collect();
        let mut back: Vec<Vec<usize>> = Vec::new();
        for w in seq.windows(2) {
            let mut next = vec![f64::INFINITY; grid.len()];
            let mut arg = vec![0; grid.len()];
            for (j, rj) in grid.iter().enumerate() {
                for (i, ri) in grid.iter().enumerate() {
                    let c = cost[i] + orthant_gap(&[(w[0], *ri)], &[(w[1], *rj)]).unwrap();
                    if c < next[j] {
                        next[j] = c;
                        arg[j] = i;
                    }
                }
            }
            cost = next;
            back.push(arg);
        }
        let last = *seq.last().unwrap();
        let (mut j, mut total) = (0, f64::INFINITY);
        for (k, r) in grid.iter().enumerate() {
            let c = cost[k] + orthant_gap(&[(last, *r)], &py).unwrap();
            if c < total {
                total = c;
                j = k;
            }
        }
        let mut idx = vec![j];
        for arg in back.iter().rev() {
            j = arg[j];
            idx.push(j);
        }
        idx.reverse();
        scored.push((total, seq, idx.iter().map(|k| grid[*k]).collect()));
    }

    let floor = scored.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let slack = 8.0 * reach / GRID as f64;
    for (total, seq, mut radii) in scored {
        if total > floor + slack {
            continue;
        }
        let mut current = path_len(&seq, &radii);
        for _ in 0..400 {
            let before = current;
            for k in 0..radii.len() {
                let mut trial = radii.clone();
                let f = |r: f64| {
                    let mut t = trial.clone();
                    t[k] = r;
                    path_len(&seq, &t)
                };
                let r = golden_section(f, 0.0, reach, 1e-13 * reach);
                trial[k] = r;
                let c = path_len(&seq, &trial);
                if c < current {
                    radii = trial;
                    current = c;
                }
            }
            if before - current < 1e-15 * reach {
                break;
            }
        }
        best = best.min(current);
    }
    best
}

pub fn cases(n: u32) -> proptest::prelude::ProptestConfig {
    proptest::prelude::ProptestConfig {
        cases: n,
        failure_persistence: None,
        ..Default::default()
    }
}
