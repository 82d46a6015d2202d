use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest wall count for the dual construction.
pub const MAX_DUAL_WALLS: usize = 20;

/// A finite set `0..points` with walls given by their left halfspaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteWallspace {
    points: usize,
    /// Bitset of the left halfspace of each wall.
    left: Vec<Vec<u64>>,
}

fn words(points: usize) -> usize {
    points.div_ceil(64)
}

impl FiniteWallspace {
    /// Each wall is given by membership of every point in its left side.
    pub fn from_sides(points: usize, sides: &[Vec<bool>]) -> Result<Self> {
        let mut left = Vec::with_capacity(sides.len());
        for (i, s) in sides.iter().enumerate() {
            if s.len() != points {
                return Err(Error::Input(format!("wall {i} lists {} points, expected {points}", s.len())));
            }
            let mut bits = vec![0u64; words(points)];
            for (p, &l) in s.iter().enumerate() {
                if l {
                    bits[p / 64] |= 1 << (p % 64);
                }
            }
            left.push(bits);
        }
        let w = FiniteWallspace { points, left };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        for i in 0..self.left.len() {
            let l = self.left_count(i);
            if l == 0 || l == self.points {
                return Err(Error::Input(format!("wall {i} has an empty side")));
            }
        }
        Ok(())
    }

    pub fn num_points(&self) -> usize {
        self.points
    }

    pub fn num_walls(&self) -> usize {
        self.left.len()
    }

    pub fn is_left(&self, wall: usize, point: usize) -> bool {
        self.left[wall][point / 64] >> (point % 64) & 1 == 1
    }

    fn left_count(&self, i: usize) -> usize {
        self.left[i].iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Halfspace as a bitset: `side == true` is the left one.
    fn half(&self, i: usize, side: bool) -> Vec<u64> {
        let mut h = self.left[i].clone();
        if !side {
            for (k, w) in h.iter_mut().enumerate() {
                *w = !*w;
                if k + 1 == words(self.points) && !self.points.is_multiple_of(64) {
                    *w &= (1u64 << (self.points % 64)) - 1;
                }
            }
        }
        h
    }

    fn meet(&self, i: usize, si: bool, j: usize, sj: bool) -> bool {
        self.half(i, si).iter().zip(self.half(j, sj)).any(|(a, b)| a & b != 0)
    }

    /// All four quarters are nonempty.
    pub fn crosses(&self, i: usize, j: usize) -> bool {
        i != j && [(true, true), (true, false), (false, true), (false, false)].iter().all(|&(a, b)| self.meet(i, a, j, b))
    }

    /// Drops walls inducing the same partition as an earlier one (with
    /// either side as left). Returns the reduced wallspace and, for each
    /// original wall, the index of its representative.
    pub fn distinct_walls(&self) -> (FiniteWallspace, Vec<usize>) {
        let mut keys: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut left = Vec::new();
        let mut class = Vec::with_capacity(self.num_walls());
        for i in 0..self.num_walls() {
            // canonical side: the one holding point 0
            let key = self.half(i, self.is_left(i, 0));
            let next = left.len();
            let c = *keys.entry(key).or_insert(next);
            if c == next {
                left.push(self.left[i].clone());
            }
            class.push(c);
        }
        (FiniteWallspace { points: self.points, left }, class)
    }

    pub fn crossing_graph(&self) -> CrossingGraph {
        let n = self.num_walls();
        let mut adj = vec![vec![false; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let c = self.crosses(i, j);
                adj[i][j] = c;
                adj[j][i] = c;
            }
        }
        CrossingGraph { adj }
    }
}

/// Walls as vertices, adjacent when they cross.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingGraph {
    pub adj: Vec<Vec<bool>>,
}

impl CrossingGraph {
    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph crossing {\n");
        for i in 0..self.len() {
            out.push_str(&format!("  w{i};\n"));
        }
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.adj[i][j] {
                    out.push_str(&format!("  w{i} -- w{j};\n"));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Size of a largest clique among `allowed` (Bron–Kerbosch with pivoting).
pub fn max_clique(g: &CrossingGraph, allowed: &[usize]) -> usize {
    fn bk(g: &CrossingGraph, size: usize, p: Vec<usize>, mut x: Vec<usize>, best: &mut usize) {
        if p.is_empty() && x.is_empty() {
            *best = (*best).max(size);
            return;
        }
        if size + p.len() <= *best {
            return;
        }
        let pivot = p.iter().chain(&x).copied().max_by_key(|&u| p.iter().filter(|&&v| g.adj[u][v]).count()).unwrap();
        let mut p2 = p.clone();
        for &v in p.iter().filter(|&&v| !g.adj[pivot][v]) {
            let np = p2.iter().copied().filter(|&w| g.adj[v][w]).collect();
            let nx = x.iter().copied().filter(|&w| g.adj[v][w]).collect();
            bk(g, size + 1, np, nx, best);
            p2.retain(|&w| w != v);
            x.push(v);
        }
    }
    let mut best = 0;
    bk(g, 0, allowed.to_vec(), Vec::new(), &mut best);
    best
}

/// Finite Sageev construction: 0-cubes are coherent orientations (one
/// halfspace per wall, pairwise intersecting), edges flip one wall.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualCubeComplex {
    /// Distinct walls; repeated partitions count once.
    pub num_walls: usize,
    /// For each input wall, the distinct wall it coincides with.
    pub wall_class: Vec<usize>,
    /// Orientation bitmasks (bit `i` set: left side of wall `i`), ascending.
    pub vertices: Vec<u32>,
    /// Index pairs into `vertices`.
    pub edges: Vec<[u32; 2]>,
    pub dimension: usize,
    crossing: CrossingGraph,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualSummary {
    pub walls: usize,
    pub vertices: usize,
    pub edges: usize,
    pub dimension: usize,
    pub median: MedianReport,
}

impl DualCubeComplex {
    pub fn index_of(&self, orientation: u32) -> Option<usize> {
        self.vertices.binary_search(&orientation).ok()
    }

    pub fn crossing_graph(&self) -> &CrossingGraph {
        &self.crossing
    }

    /// Walls that can be flipped at vertex `v`.
    pub fn flippable(&self, v: usize) -> Vec<usize> {
        let o = self.vertices[v];
        (0..self.num_walls).filter(|&i| self.index_of(o ^ (1 << i)).is_some()).collect()
    }

    pub fn summary(&self) -> DualSummary {
        DualSummary {
            walls: self.num_walls,
            vertices: self.vertices.len(),
            edges: self.edges.len(),
            dimension: self.dimension,
            median: median_check(self),
        }
    }
}

pub fn dual_cube_complex(w: &FiniteWallspace) -> Result<DualCubeComplex> {
    let (w, wall_class) = w.distinct_walls();
    let w = &w;
    let n = w.num_walls();
    if n > MAX_DUAL_WALLS {
        return Err(Error::Resource(format!("{n} walls exceed the limit of {MAX_DUAL_WALLS}")));
    }
    // meets[i][j][a][b]: side a of wall i meets side b of wall j
    let mut meets = vec![vec![[[false; 2]; 2]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for a in 0..2 {
                for b in 0..2 {
                    meets[i][j][a][b] = w.meet(i, a == 1, j, b == 1);
                }
            }
        }
    }
    let mut vertices = Vec::new();
    let mut stack: Vec<(usize, u32)> = vec![(0, 0)];
    while let Some((i, o)) = stack.pop() {
        if i == n {
            vertices.push(o);
            continue;
        }
        for side in [0u32, 1] {
            if (0..i).all(|j| meets[j][i][(o >> j & 1) as usize][side as usize]) {
                stack.push((i + 1, o | side << i));
            }
        }
    }
    vertices.sort_unstable();
    let index: HashMap<u32, u32> = vertices.iter().enumerate().map(|(k, &o)| (o, k as u32)).collect();
    let mut edges = Vec::new();
    for (k, &o) in vertices.iter().enumerate() {
        for i in 0..n {
            let f = o ^ (1 << i);
            if f > o {
                if let Some(&k2) = index.get(&f) {
                    edges.push([k as u32, k2]);
                }
            }
        }
    }
    let crossing = w.crossing_graph();
    let mut d = DualCubeComplex { num_walls: n, wall_class, vertices, edges, dimension: 0, crossing };
    d.dimension = (0..d.vertices.len()).map(|v| max_clique(&d.crossing, &d.flippable(v))).max().unwrap_or(0);
    Ok(d)
}

/// Largest cube of the dual: the biggest crossing clique of walls that are
/// all flippable at one 0-cube.
pub fn dual_dimension(w: &FiniteWallspace) -> Result<usize> {
    Ok(dual_cube_complex(w)?.dimension)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MedianReport {
    pub passed: bool,
    pub connected: bool,
    pub triples_checked: u64,
    /// Every triple was examined (otherwise a fixed stride sample).
    pub exhaustive: bool,
}

/// Largest vertex count examined exhaustively.
const MEDIAN_EXHAUSTIVE: usize = 512;
const MEDIAN_SAMPLE: u64 = 50_000;

fn bfs(adj: &[Vec<u32>], src: usize) -> Vec<u32> {
    let mut dist = vec![u32::MAX; adj.len()];
    dist[src] = 0;
    let mut queue = VecDeque::from([src as u32]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u as usize] {
            if dist[v as usize] == u32::MAX {
                dist[v as usize] = dist[u as usize] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Every triple of 0-cubes has exactly one vertex on all three geodesic
/// intervals, and it is the majority orientation.
pub fn median_check(d: &DualCubeComplex) -> MedianReport {
    let n = d.vertices.len();
    let mut adj = vec![Vec::new(); n];
    for &[a, b] in &d.edges {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    if n == 0 {
        return MedianReport { passed: false, connected: false, triples_checked: 0, exhaustive: true };
    }
    let connected = bfs(&adj, 0).iter().all(|&x| x != u32::MAX);
    if !connected {
        return MedianReport { passed: false, connected, triples_checked: 0, exhaustive: true };
    }
    let majority = |a: u32, b: u32, c: u32| (a & b) | (b & c) | (a & c);
    if n <= MEDIAN_EXHAUSTIVE {
        let dist: Vec<Vec<u32>> = (0..n).map(|s| bfs(&adj, s)).collect();
        let nw = words(n);
        // interval[x][y] as a bitset over vertices
        let mut interval = vec![vec![0u64; nw]; n * n];
        for x in 0..n {
            for y in 0..n {
                let bits = &mut interval[x * n + y];
                for m in 0..n {
                    if dist[x][m] + dist[m][y] == dist[x][y] {
                        bits[m / 64] |= 1 << (m % 64);
                    }
                }
            }
        }
        let mut checked = 0;
        for x in 0..n {
            for y in x..n {
                for z in y..n {
                    checked += 1;
                    let (a, b, c) = (&interval[x * n + y], &interval[y * n + z], &interval[x * n + z]);
                    let mut count = 0;
                    let mut which = 0;
                    for k in 0..nw {
                        let w = a[k] & b[k] & c[k];
                        if w != 0 {
                            which = k * 64 + w.trailing_zeros() as usize;
                        }
                        count += w.count_ones();
                    }
                    let m = majority(d.vertices[x], d.vertices[y], d.vertices[z]);
                    if count != 1 || d.vertices[which] != m {
                        return MedianReport { passed: false, connected, triples_checked: checked, exhaustive: true };
                    }
                }
            }
        }
        return MedianReport { passed: true, connected, triples_checked: checked, exhaustive: true };
    }
    // large duals: the majority must be a vertex and lie between each pair
    // in the graph metric, on a fixed stride sample of triples
    let mut checked = 0;
    let mut cache: HashMap<usize, Vec<u32>> = HashMap::new();
    for t in 0..MEDIAN_SAMPLE {
        let (x, y, z) = ((t * 7919) as usize % n, (t * 104_729 + 1) as usize % n, (t * 1_299_709 + 2) as usize % n);
        checked += 1;
        let m = majority(d.vertices[x], d.vertices[y], d.vertices[z]);
        let Some(mi) = d.index_of(m) else {
            return MedianReport { passed: false, connected, triples_checked: checked, exhaustive: false };
        };
        if t < 16 {
            for &(a, b) in &[(x, y), (y, z), (x, z)] {
                let da = cache.entry(a).or_insert_with(|| bfs(&adj, a)).clone();
                let db = cache.entry(b).or_insert_with(|| bfs(&adj, b)).clone();
                if da[mi] + db[mi] != da[b] {
                    return MedianReport { passed: false, connected, triples_checked: checked, exhaustive: false };
                }
            }
        }
    }
    MedianReport { passed: true, connected, triples_checked: checked, exhaustive: false }
}
