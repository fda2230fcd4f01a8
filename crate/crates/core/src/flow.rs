//! Minimum-weight vertex cover on a bipartite graph via max-flow/min-cut.

/// Result of a vertex-cover computation: membership flags for each side and
/// the total cover weight.
pub(crate) struct Cover {
    pub left: Vec<bool>,
    pub right: Vec<bool>,
    pub weight: f64,
}

const EPS: f64 = 1e-15;

/// Minimum-weight vertex cover of the bipartite graph with the given vertex
/// weights, where `adjacent(i, j)` reports an edge between left `i` and
/// right `j`. Solved as an s-t min cut with Edmonds-Karp.
pub(crate) fn min_weight_vertex_cover(
    left_w: &[f64],
    right_w: &[f64],
    adjacent: impl Fn(usize, usize) -> bool,
) -> Cover {
    let nl = left_w.len();
    let nr = right_w.len();
    let n = nl + nr + 2;
    let (src, sink) = (0, n - 1);
    let mut cap = vec![vec![0.0f64; n]; n];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut link = |cap: &mut Vec<Vec<f64>>, a: usize, b: usize, c: f64| {
        cap[a][b] = c;
        adj[a].push(b);
        adj[b].push(a);
    };
    for i in 0..nl {
        link(&mut cap, src, 1 + i, left_w[i]);
    }
    for j in 0..nr {
        link(&mut cap, 1 + nl + j, sink, right_w[j]);
    }
    for i in 0..nl {
        for j in 0..nr {
            if adjacent(i, j) {
                link(&mut cap, 1 + i, 1 + nl + j, f64::INFINITY);
            }
        }
    }

    let mut prev = vec![usize::MAX; n];
    loop {
        prev.iter_mut().for_each(|p| *p = usize::MAX);
        prev[src] = src;
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            if u == sink {
                break;
            }
            for &v in &adj[u] {
                if prev[v] == usize::MAX && cap[u][v] > EPS {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[sink] == usize::MAX {
            break;
        }
        let mut bottleneck = f64::INFINITY;
        let mut v = sink;
        while v != src {
            let u = prev[v];
            bottleneck = bottleneck.min(cap[u][v]);
            v = u;
        }
        let mut v = sink;
        while v != src {
            let u = prev[v];
            cap[u][v] -= bottleneck;
            cap[v][u] += bottleneck;
            v = u;
        }
    }

    // vertices reachable from the source in the residual graph
    let reachable: Vec<bool> = prev.iter().map(|&p| p != usize::MAX).collect();
    let left: Vec<bool> = (0..nl).map(|i| !reachable[1 + i]).collect();
    let right: Vec<bool> = (0..nr).map(|j| reachable[1 + nl + j]).collect();
    let weight = left
        .iter()
        .zip(left_w)
        .filter(|(c, _)| **c)
        .map(|(_, w)| w)
        .sum::<f64>()
        + right
            .iter()
            .zip(right_w)
            .filter(|(c, _)| **c)
            .map(|(_, w)| w)
            .sum::<f64>();
    Cover {
        left,
        right,
        weight,
    }
}
