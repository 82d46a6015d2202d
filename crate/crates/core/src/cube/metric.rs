use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{CubeComplex, HyperplaneSet};
use crate::error::{Error, Result};

/// Vertices and edges (both ascending) of a subcomplex's 1-skeleton.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subcomplex {
    pub vertices: Vec<u32>,
    pub edges: Vec<u32>,
}

impl Subcomplex {
    pub fn whole(x: &CubeComplex) -> Self {
        Subcomplex { vertices: (0..x.num_vertices() as u32).collect(), edges: (0..x.num_edges() as u32).collect() }
    }
}

/// Intrinsic diameter of `s`: the largest BFS distance in its own 1-skeleton.
pub fn diameter(x: &CubeComplex, s: &Subcomplex) -> Result<usize> {
    let n = s.vertices.len();
    if n == 0 {
        return Ok(0);
    }
    let local = |v: u32| s.vertices.binary_search(&v).ok();
    let mut adj = vec![Vec::new(); n];
    for &e in &s.edges {
        let [u, v] = x.edges()[e as usize];
        match (local(u), local(v)) {
            (Some(a), Some(b)) => {
                adj[a].push(b);
                adj[b].push(a);
            }
            _ => return Err(Error::Input(format!("edge {e} has an endpoint outside the subcomplex"))),
        }
    }
    let mut best = 0;
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for src in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[src] = 0;
        queue.push_back(src);
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    best = best.max(dist[w]);
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        if reached < n {
            let other = (0..n).find(|&i| dist[i] == usize::MAX).unwrap();
            return Err(Error::Disconnected(s.vertices[src] as usize, s.vertices[other] as usize));
        }
    }
    Ok(best)
}

/// An integer per edge (for its forward orientation) representing a class in
/// first cohomology: label sums around squares vanish.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeLabeling {
    pub labels: Vec<i64>,
}

impl DegreeLabeling {
    pub fn validate(&self, x: &CubeComplex) -> Result<()> {
        if self.labels.len() != x.num_edges() {
            return Err(Error::Input(format!("{} labels for {} edges", self.labels.len(), x.num_edges())));
        }
        for (i, s) in x.squares().iter().enumerate() {
            let sum: i64 = s.iter().map(|e| if e.reversed { -self.labels[e.edge as usize] } else { self.labels[e.edge as usize] }).sum();
            if sum != 0 {
                return Err(Error::Input(format!("labels around square {i} sum to {sum}")));
            }
        }
        Ok(())
    }
}

/// A shortest essential cycle can be taken simple, so it has at most
/// `|V|` edges.
pub fn essential_cycle_upper_bound(x: &CubeComplex) -> usize {
    x.num_vertices()
}

/// Length of the shortest closed edge path of nonzero degree.
///
/// Every such path crosses an edge with nonzero label, so it suffices to run
/// a BFS from each tail of such an edge in the infinite cyclic cover defined
/// by the labels, stopping at the certified bound. Truncating at the bound
/// makes this the same search as in any finite cyclic cover of order more
/// than twice the bound times the largest label.
pub fn systole_circle_retract(x: &CubeComplex, d: &DegreeLabeling) -> Result<usize> {
    d.validate(x)?;
    let bound = essential_cycle_upper_bound(x);
    let adj = x.adjacency();
    let mut sources: Vec<u32> =
        (0..x.num_edges()).filter(|&e| d.labels[e] != 0).map(|e| x.edges()[e][0]).collect();
    sources.sort_unstable();
    sources.dedup();
    let mut best = usize::MAX;
    for &s in &sources {
        let limit = best.min(bound);
        let mut dist: HashMap<(u32, i64), usize> = HashMap::new();
        let mut queue = VecDeque::new();
        dist.insert((s, 0), 0);
        queue.push_back((s, 0i64));
        'bfs: while let Some((u, k)) = queue.pop_front() {
            let du = dist[&(u, k)];
            if du >= limit {
                break;
            }
            for &(w, e) in &adj[u as usize] {
                let [t, h] = x.edges()[e as usize];
                let label = d.labels[e as usize];
                // a loop contributes both directions
                let steps: &[(u32, i64)] = if t == h {
                    &[(h, label), (h, -label)]
                } else if u == t {
                    &[(h, label)]
                } else {
                    &[(t, -label)]
                };
                for &(v, dl) in steps {
                    debug_assert!(v == w || t == h);
                    let key = (v, k + dl);
                    if dist.contains_key(&key) {
                        continue;
                    }
                    if v == s && key.1 != 0 {
                        best = best.min(du + 1);
                        break 'bfs;
                    }
                    dist.insert(key, du + 1);
                    queue.push_back(key);
                }
            }
        }
    }
    if best == usize::MAX {
        return Err(Error::Internal(format!("no essential cycle of length at most {bound}")));
    }
    Ok(best)
}

/// Outcome of the combinatorial contractibility test for `Y - U`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractibilityReport {
    pub hyperplane: u32,
    pub components: usize,
    pub zero_winding: bool,
    /// Every generator of the edge-path group was eliminated by a square
    /// relation in which it occurs exactly once.
    pub simply_connected: bool,
}

impl ContractibilityReport {
    pub fn contractible(&self) -> bool {
        self.components == 1 && self.zero_winding && self.simply_connected
    }
}

/// Tests whether `x` minus the open carrier of `h` is contractible: it must
/// be connected, every cycle must have degree 0, and the square relations
/// must kill every non-tree edge of a spanning tree (a sufficient test for
/// trivial fundamental group, exact on boxes and trees of boxes).
pub fn complement_contractible(
    x: &CubeComplex,
    hs: &HyperplaneSet,
    h: u32,
    d: &DegreeLabeling,
) -> ContractibilityReport {
    let n = x.num_vertices();
    let kept_edge = |e: usize| hs.edge_class[e] != h;
    let mut adj: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    for (e, &[u, v]) in x.edges().iter().enumerate() {
        if kept_edge(e) {
            adj[u as usize].push((v, e as u32));
            adj[v as usize].push((u, e as u32));
        }
    }
    let mut potential: Vec<Option<i64>> = vec![None; n];
    let mut tree = vec![false; x.num_edges()];
    let mut components = 0;
    for root in 0..n {
        if potential[root].is_some() {
            continue;
        }
        components += 1;
        potential[root] = Some(0);
        let mut queue = VecDeque::from([root as u32]);
        while let Some(u) = queue.pop_front() {
            for &(w, e) in &adj[u as usize] {
                if potential[w as usize].is_none() {
                    let [t, _] = x.edges()[e as usize];
                    let l = d.labels[e as usize];
                    potential[w as usize] = Some(potential[u as usize].unwrap() + if t == u { l } else { -l });
                    tree[e as usize] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let zero_winding = (0..x.num_edges()).filter(|&e| kept_edge(e)).all(|e| {
        let [t, hd] = x.edges()[e];
        potential[hd as usize].unwrap() - potential[t as usize].unwrap() == d.labels[e]
    });

    // Tietze elimination over the non-tree edges
    let kept_squares: Vec<usize> =
        (0..x.num_squares()).filter(|&s| x.squares()[s].iter().all(|e| kept_edge(e.edge as usize))).collect();
    let mut alive: Vec<bool> = (0..x.num_edges()).map(|e| kept_edge(e) && !tree[e]).collect();
    let mut remaining = alive.iter().filter(|&&a| a).count();
    let mut progress = true;
    while remaining > 0 && progress {
        progress = false;
        for &s in &kept_squares {
            let live: Vec<u32> = x.squares()[s].iter().map(|e| e.edge).filter(|&e| alive[e as usize]).collect();
            if live.len() == 1 {
                alive[live[0] as usize] = false;
                remaining -= 1;
                progress = true;
            }
        }
    }
    ContractibilityReport { hyperplane: h, components, zero_winding, simply_connected: remaining == 0 }
}
