use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::metric::Subcomplex;
use super::CubeComplex;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub id: u32,
    /// Dual edges, ascending.
    pub edges: Vec<u32>,
}

/// The hyperplane partition of a complex's edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperplaneSet {
    /// Hyperplane of each edge.
    pub edge_class: Vec<u32>,
    pub hyperplanes: Vec<Hyperplane>,
    /// For each square, the hyperplanes of sides (0, 2) and (1, 3).
    pub square_classes: Vec<[u32; 2]>,
    /// Hyperplanes dual to both side pairs of some square.
    pub self_crossing: Vec<u32>,
    squares_start: Vec<u32>,
    squares_of: Vec<u32>,
}

struct Dsu(Vec<u32>);

impl Dsu {
    fn find(&mut self, mut x: u32) -> u32 {
        while self.0[x as usize] != x {
            let p = self.0[x as usize];
            self.0[x as usize] = self.0[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (a, b) = (self.find(a), self.find(b));
        // smaller root wins so class representatives are minimal edges
        if a < b {
            self.0[b as usize] = a;
        } else if b < a {
            self.0[a as usize] = b;
        }
    }
}

/// Edge classes under "opposite sides of a square". Classes are numbered by
/// their smallest edge. Cube facets need no extra work: opposite edges of a
/// cube are already linked through its square faces.
pub fn hyperplanes(x: &CubeComplex) -> HyperplaneSet {
    let m = x.num_edges();
    let mut dsu = Dsu((0..m as u32).collect());
    for s in x.squares() {
        dsu.union(s[0].edge, s[2].edge);
        dsu.union(s[1].edge, s[3].edge);
    }
    let mut class_of_root = vec![u32::MAX; m];
    let mut edge_class = vec![0u32; m];
    let mut hyperplanes: Vec<Hyperplane> = Vec::new();
    for e in 0..m as u32 {
        let r = dsu.find(e) as usize;
        if class_of_root[r] == u32::MAX {
            class_of_root[r] = hyperplanes.len() as u32;
            hyperplanes.push(Hyperplane { id: class_of_root[r], edges: Vec::new() });
        }
        edge_class[e as usize] = class_of_root[r];
        hyperplanes[class_of_root[r] as usize].edges.push(e);
    }
    let square_classes: Vec<[u32; 2]> =
        x.squares().iter().map(|s| [edge_class[s[0].edge as usize], edge_class[s[1].edge as usize]]).collect();
    let mut self_crossing: Vec<u32> = square_classes.iter().filter(|c| c[0] == c[1]).map(|c| c[0]).collect();
    self_crossing.sort_unstable();
    self_crossing.dedup();

    // CSR index of squares per hyperplane
    let h = hyperplanes.len();
    let mut squares_start = vec![0u32; h + 1];
    for c in &square_classes {
        squares_start[c[0] as usize + 1] += 1;
        if c[1] != c[0] {
            squares_start[c[1] as usize + 1] += 1;
        }
    }
    for i in 0..h {
        squares_start[i + 1] += squares_start[i];
    }
    let mut fill = squares_start.clone();
    let mut squares_of = vec![0u32; squares_start[h] as usize];
    for (s, c) in square_classes.iter().enumerate() {
        for (k, &cl) in c.iter().enumerate() {
            if k == 1 && cl == c[0] {
                continue;
            }
            squares_of[fill[cl as usize] as usize] = s as u32;
            fill[cl as usize] += 1;
        }
    }
    HyperplaneSet { edge_class, hyperplanes, square_classes, self_crossing, squares_start, squares_of }
}

impl HyperplaneSet {
    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    /// Squares containing a dual edge of `h`.
    pub fn squares_of(&self, h: u32) -> &[u32] {
        &self.squares_of[self.squares_start[h as usize] as usize..self.squares_start[h as usize + 1] as usize]
    }

    /// Some square is dual to both (for `h1 == h2`: `h1` self-crosses).
    pub fn crosses(&self, h1: u32, h2: u32) -> bool {
        let (a, b) = if self.squares_of(h1).len() <= self.squares_of(h2).len() { (h1, h2) } else { (h2, h1) };
        self.squares_of(a).iter().any(|&s| {
            let c = self.square_classes[s as usize];
            (c[0] == a && c[1] == b) || (c[1] == a && c[0] == b)
        })
    }

    /// Carriers share a vertex but no square is dual to both.
    pub fn osculates(&self, x: &CubeComplex, h1: u32, h2: u32) -> bool {
        if h1 == h2 || self.crosses(h1, h2) {
            return false;
        }
        let verts: HashSet<u32> = self.carrier_vertices(x, h1).into_iter().collect();
        self.carrier_vertices(x, h2).iter().any(|v| verts.contains(v))
    }

    /// Every square vertex of a carrier is an endpoint of a dual edge, so
    /// the endpoints are the carrier's vertex set.
    pub fn carrier_vertices(&self, x: &CubeComplex, h: u32) -> Vec<u32> {
        let mut v: Vec<u32> =
            self.hyperplanes[h as usize].edges.iter().flat_map(|&e| x.edges()[e as usize]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// The union of closed cells meeting `h`, restricted to its 1-skeleton
    /// (all that the metric needs).
    pub fn carrier(&self, x: &CubeComplex, h: u32) -> Subcomplex {
        let mut edges: Vec<u32> = self.hyperplanes[h as usize].edges.clone();
        for &s in self.squares_of(h) {
            edges.extend(x.squares()[s as usize].iter().map(|e| e.edge));
        }
        edges.sort_unstable();
        edges.dedup();
        Subcomplex { vertices: self.carrier_vertices(x, h), edges }
    }

    /// Two distinct dual edges of `h` share an endpoint without spanning a
    /// square together, or `h` self-crosses.
    pub fn self_osculates(&self, x: &CubeComplex, h: u32) -> bool {
        if self.self_crossing.binary_search(&h).is_ok() {
            return true;
        }
        let hp = &self.hyperplanes[h as usize];
        if hp.edges.len() < 2 {
            return hp.edges.iter().any(|&e| x.edges()[e as usize][0] == x.edges()[e as usize][1]);
        }
        let mut seen: HashSet<u32> = HashSet::new();
        for &e in &hp.edges {
            let [u, v] = x.edges()[e as usize];
            if u == v || !seen.insert(u) || !seen.insert(v) {
                return true;
            }
        }
        false
    }
}
