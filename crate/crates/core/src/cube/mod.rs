//! Finite combinatorial cube complexes.
//!
//! Vertices are `0..n`. Edges carry an orientation (tail, head). A square is
//! a closed path of four signed edges; cubes of dimension three and higher
//! are given by their `2d` facets, listed in opposite pairs.

mod hyperplanes;
mod isometry;
mod metric;
mod text;

pub use hyperplanes::{hyperplanes, Hyperplane, HyperplaneSet};
pub use isometry::{check_local_isometry, CombinatorialMap, IsometryReport, IsometryViolation};
pub use metric::{
    complement_contractible, diameter, essential_cycle_upper_bound, systole_circle_retract, ContractibilityReport,
    DegreeLabeling, Subcomplex,
};
pub use text::{parse_complex, to_dot, to_text, COMPLEX_HEADER};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An edge traversed forwards (`reversed == false`) or backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedEdge {
    pub edge: u32,
    pub reversed: bool,
}

impl SignedEdge {
    pub fn fwd(edge: u32) -> Self {
        SignedEdge { edge, reversed: false }
    }

    pub fn rev(edge: u32) -> Self {
        SignedEdge { edge, reversed: true }
    }

    pub fn inverse(self) -> Self {
        SignedEdge { edge: self.edge, reversed: !self.reversed }
    }
}

/// A cube of dimension at least three.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cube {
    pub dim: u8,
    /// Facet `2i` is opposite facet `2i + 1`. Facets of a 3-cube index
    /// squares; facets of higher cubes index this complex's cube list.
    pub facets: Vec<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeComplex {
    num_vertices: u32,
    edges: Vec<[u32; 2]>,
    squares: Vec<[SignedEdge; 4]>,
    cubes: Vec<Cube>,
}

impl CubeComplex {
    pub fn new(num_vertices: usize) -> Self {
        CubeComplex { num_vertices: num_vertices as u32, ..Default::default() }
    }

    /// Assembles and validates a complex.
    pub fn from_parts(
        num_vertices: usize,
        edges: Vec<[u32; 2]>,
        squares: Vec<[SignedEdge; 4]>,
        cubes: Vec<Cube>,
    ) -> Result<Self> {
        if num_vertices > u32::MAX as usize {
            return Err(Error::Resource("too many vertices".into()));
        }
        let c = CubeComplex { num_vertices: num_vertices as u32, edges, squares, cubes };
        c.validate()?;
        Ok(c)
    }

    pub fn add_vertex(&mut self) -> u32 {
        self.num_vertices += 1;
        self.num_vertices - 1
    }

    pub fn add_edge(&mut self, tail: u32, head: u32) -> u32 {
        debug_assert!(tail < self.num_vertices && head < self.num_vertices);
        self.edges.push([tail, head]);
        (self.edges.len() - 1) as u32
    }

    /// Adds a square; the boundary must close up.
    pub fn add_square(&mut self, boundary: [SignedEdge; 4]) -> Result<u32> {
        self.check_square(&boundary)?;
        self.squares.push(boundary);
        Ok((self.squares.len() - 1) as u32)
    }

    pub fn add_cube(&mut self, cube: Cube) -> Result<u32> {
        self.check_cube(self.cubes.len(), &cube)?;
        self.cubes.push(cube);
        Ok((self.cubes.len() - 1) as u32)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices as usize
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_squares(&self) -> usize {
        self.squares.len()
    }

    pub fn edges(&self) -> &[[u32; 2]] {
        &self.edges
    }

    pub fn squares(&self) -> &[[SignedEdge; 4]] {
        &self.squares
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn dimension(&self) -> usize {
        let top = self.cubes.iter().map(|c| c.dim as usize).max().unwrap_or(0);
        if top > 0 {
            top
        } else if !self.squares.is_empty() {
            2
        } else if !self.edges.is_empty() {
            1
        } else {
            0
        }
    }

    pub fn tail(&self, e: SignedEdge) -> u32 {
        self.edges[e.edge as usize][e.reversed as usize]
    }

    pub fn head(&self, e: SignedEdge) -> u32 {
        self.edges[e.edge as usize][!e.reversed as usize]
    }

    /// Vertex adjacency lists: `(neighbour, edge)` for both orientations.
    pub fn adjacency(&self) -> Vec<Vec<(u32, u32)>> {
        let mut adj = vec![Vec::new(); self.num_vertices()];
        for (i, &[u, v]) in self.edges.iter().enumerate() {
            adj[u as usize].push((v, i as u32));
            if u != v {
                adj[v as usize].push((u, i as u32));
            }
        }
        adj
    }

    /// Four corner vertices of a square in boundary order.
    pub fn square_vertices(&self, s: usize) -> [u32; 4] {
        self.squares[s].map(|e| self.tail(e))
    }

    fn check_square(&self, b: &[SignedEdge; 4]) -> Result<()> {
        for e in b {
            if e.edge as usize >= self.edges.len() {
                return Err(Error::Input(format!("square refers to missing edge {}", e.edge)));
            }
        }
        for i in 0..4 {
            if self.head(b[i]) != self.tail(b[(i + 1) % 4]) {
                return Err(Error::Input(format!("square boundary does not close up at side {i}")));
            }
        }
        Ok(())
    }

    fn check_cube(&self, index: usize, c: &Cube) -> Result<()> {
        if c.dim < 3 {
            return Err(Error::Input(format!("cube {index} has dimension {} < 3", c.dim)));
        }
        if c.facets.len() != 2 * c.dim as usize {
            return Err(Error::Input(format!("cube {index} of dimension {} has {} facets", c.dim, c.facets.len())));
        }
        for &f in &c.facets {
            let ok = if c.dim == 3 {
                (f as usize) < self.squares.len()
            } else {
                (f as usize) < index && self.cubes[f as usize].dim == c.dim - 1
            };
            if !ok {
                return Err(Error::Input(format!("cube {index} has an invalid facet {f}")));
            }
        }
        // cheap shape check: opposite facets have equally many vertices
        for pair in c.facets.chunks(2).filter(|_| c.dim <= 5) {
            if self.facet_vertices(c.dim - 1, pair[0]).len() != self.facet_vertices(c.dim - 1, pair[1]).len() {
                return Err(Error::Input(format!("cube {index} has opposite facets of different shape")));
            }
        }
        Ok(())
    }

    /// Distinct vertices of a cell of dimension `dim >= 2`.
    pub fn facet_vertices(&self, dim: u8, index: u32) -> Vec<u32> {
        let mut out = if dim == 2 {
            self.square_vertices(index as usize).to_vec()
        } else {
            let c = &self.cubes[index as usize];
            c.facets.iter().flat_map(|&f| self.facet_vertices(dim - 1, f)).collect()
        };
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn validate(&self) -> Result<()> {
        for (i, e) in self.edges.iter().enumerate() {
            if e[0] >= self.num_vertices || e[1] >= self.num_vertices {
                return Err(Error::Input(format!("edge {i} has a missing endpoint")));
            }
        }
        for s in &self.squares {
            self.check_square(s)?;
        }
        for (i, c) in self.cubes.iter().enumerate() {
            self.check_cube(i, c)?;
        }
        Ok(())
    }
}

/// A grid box `[0, n_1] x .. x [0, n_d]` with all its squares and cubes.
///
/// Vertex `p` has index `sum p_i * stride_i` with the first axis fastest.
/// Returns the complex and, for each edge, its axis.
pub fn grid_box(sides: &[u32]) -> Result<(CubeComplex, Vec<u8>)> {
    let mut x = CubeComplex::new(0);
    let axes = append_box(&mut x, sides)?;
    Ok((x, axes))
}

/// Appends a box to `x`; returns the axis of each new edge. New vertices are
/// numbered consecutively from the previous vertex count.
pub(crate) fn append_box(x: &mut CubeComplex, sides: &[u32]) -> Result<Vec<u8>> {
    let d = sides.len();
    if d > 16 {
        return Err(Error::Resource(format!("box of dimension {d}")));
    }
    let count = sides.iter().try_fold(1u64, |acc, &s| acc.checked_mul(s as u64 + 1));
    let count = match count {
        Some(c) if c + x.num_vertices() as u64 <= u32::MAX as u64 / 2 => c as usize,
        _ => return Err(Error::Resource("box too large".into())),
    };
    let base = x.num_vertices;
    let mut stride = vec![1u32; d];
    for i in 1..d {
        stride[i] = stride[i - 1] * (sides[i - 1] + 1);
    }
    x.num_vertices += count as u32;
    let coords = |mut v: u32| -> Vec<u32> {
        (0..d)
            .map(|i| {
                let c = v % (sides[i] + 1);
                v /= sides[i] + 1;
                c
            })
            .collect()
    };
    // edge along axis i starting at local vertex v
    let mut edge_at = std::collections::HashMap::new();
    let mut axes = Vec::new();
    for v in 0..count as u32 {
        let p = coords(v);
        for i in 0..d {
            if p[i] < sides[i] {
                let e = x.add_edge(base + v, base + v + stride[i]);
                edge_at.insert((v, i), e);
                axes.push(i as u8);
            }
        }
    }
    // k-cells keyed by (local base vertex, axis mask)
    let mut cells: std::collections::HashMap<(u32, u32), u32> = std::collections::HashMap::new();
    for v in 0..count as u32 {
        let p = coords(v);
        for i in 0..d {
            for j in i + 1..d {
                if p[i] < sides[i] && p[j] < sides[j] {
                    let s = x.add_square([
                        SignedEdge::fwd(edge_at[&(v, i)]),
                        SignedEdge::fwd(edge_at[&(v + stride[i], j)]),
                        SignedEdge::rev(edge_at[&(v + stride[j], i)]),
                        SignedEdge::rev(edge_at[&(v, j)]),
                    ])?;
                    cells.insert((v, (1 << i) | (1 << j)), s);
                }
            }
        }
    }
    for k in 3..=d {
        for v in 0..count as u32 {
            let p = coords(v);
            for mask in 0u32..(1 << d) {
                if mask.count_ones() as usize != k || (0..d).any(|i| mask >> i & 1 == 1 && p[i] == sides[i]) {
                    continue;
                }
                let mut facets = Vec::with_capacity(2 * k);
                for i in (0..d).filter(|i| mask >> i & 1 == 1) {
                    let sub = mask & !(1 << i);
                    facets.push(cells[&(v, sub)]);
                    facets.push(cells[&(v + stride[i], sub)]);
                }
                let c = x.add_cube(Cube { dim: k as u8, facets })?;
                cells.insert((v, mask), c);
            }
        }
    }
    Ok(axes)
}
