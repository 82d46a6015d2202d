//! Antipodal wall structures on necklaces, finite wallspaces, and their dual
//! cube complexes.

mod dual;
mod text;

pub use dual::{
    dual_cube_complex, dual_dimension, max_clique, median_check, CrossingGraph, DualCubeComplex, DualSummary,
    FiniteWallspace, MedianReport, MAX_DUAL_WALLS,
};
pub use text::{parse_wallspace, WALLSPACE_HEADER};

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::cube::hyperplanes;
use crate::cubical::{letter_necklace, minimal_period_of_blocks, Necklace, NecklaceShape};
use crate::error::{Error, Result};
use crate::word::{FPWord, FactorDescriptor};

/// Walls of a necklace pairing circle edge `j` with edge `j + L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntipodalWallStructure {
    /// `L = |w| / 2`.
    pub half_length: usize,
    /// Hyperplanes dual to circle edges `j` and `j + L`, for `j < L`.
    pub walls: Vec<[u32; 2]>,
}

pub fn antipodal_walls(y: &Necklace) -> Result<AntipodalWallStructure> {
    let len = y.circle.len();
    if len % 2 == 1 {
        return Err(Error::Input(format!("circle length {len} is odd; subdivide the arcs")));
    }
    let hs = hyperplanes(&y.complex);
    let l = len / 2;
    let walls = (0..l)
        .map(|j| [hs.edge_class[y.circle[j].edge as usize], hs.edge_class[y.circle[j + l].edge as usize]])
        .collect();
    Ok(AntipodalWallStructure { half_length: l, walls })
}

/// Per wall: its two hyperplanes are distinct and neither cross nor osculate.
pub fn b8_condition1_walls(y: &Necklace, walls: &AntipodalWallStructure) -> Vec<bool> {
    let hs = hyperplanes(&y.complex);
    walls
        .walls
        .iter()
        .map(|&[a, b]| a != b && !hs.crosses(a, b) && !hs.osculates(&y.complex, a, b))
        .collect()
}

pub fn check_b8_condition1(y: &Necklace, walls: &AntipodalWallStructure) -> bool {
    b8_condition1_walls(y, walls).into_iter().all(|ok| ok)
}

/// Rotations of the necklace by a period of its block sequence are the
/// symmetries over the wedge. Such a rotation shifts the circle, so it maps
/// antipodal pairs to antipodal pairs as soon as it preserves the wedge
/// labels of the circle edges, which is what is audited here.
pub fn check_b8_condition3(y: &Necklace, walls: &AntipodalWallStructure) -> bool {
    let len = y.circle.len();
    if len != 2 * walls.half_length {
        return false;
    }
    let shift = rotation_shift(&y.shape);
    let label = |j: usize| y.map.edge[y.circle[j % len].edge as usize];
    (0..len).all(|j| label(j) == label(j + shift))
}

/// Circle shift of the smallest label-preserving rotation (0 if none).
fn rotation_shift(shape: &NecklaceShape) -> usize {
    let p = minimal_period_of_blocks(shape);
    if p == shape.blocks.len() {
        return 0;
    }
    shape.blocks[..p].iter().map(|b| b.letter_length() + 2 * shape.q as usize).sum()
}

/// Position of a circle edge in the shape: block staircase step or arc edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Spot {
    Block { k: usize, axis: usize, coord: u32 },
    Arc { k: usize, t: u32 },
}

struct Locator<'a> {
    shape: &'a NecklaceShape,
    /// Start of unit `u` (block `u / 2` or arc `u / 2`) along the circle.
    starts: Vec<usize>,
}

impl<'a> Locator<'a> {
    fn new(shape: &'a NecklaceShape) -> Self {
        let mut starts = Vec::with_capacity(2 * shape.blocks.len() + 1);
        let mut at = 0;
        for b in &shape.blocks {
            starts.push(at);
            at += b.letter_length();
            starts.push(at);
            at += 2 * shape.q as usize;
        }
        starts.push(at);
        Locator { shape, starts }
    }

    fn len(&self) -> usize {
        *self.starts.last().unwrap()
    }

    fn locate(&self, j: usize) -> Spot {
        // last unit starting at or before j that is nonempty
        let u = self.starts.partition_point(|&s| s <= j) - 1;
        let off = (j - self.starts[u]) as u32;
        if u % 2 == 0 {
            let (axis, coord) = self.shape.blocks[u / 2].step(off);
            Spot::Block { k: u / 2, axis, coord }
        } else {
            Spot::Arc { k: u / 2, t: off }
        }
    }

    /// Cut vertices (block ends) in the carrier, as canonical ids.
    fn cut_vertices(&self, s: Spot) -> [Option<usize>; 2] {
        let n = self.shape.blocks.len();
        let q = self.shape.q;
        let init = |k: usize| if q > 0 { 2 * k } else { k };
        let term = |k: usize| if q > 0 { 2 * k + 1 } else { (k + 1) % n };
        match s {
            Spot::Block { k, axis, coord } => {
                let side = self.shape.blocks[k].sides()[axis];
                [(coord == 0).then(|| init(k)), (coord + 1 == side).then(|| term(k))]
            }
            Spot::Arc { k, t } => [(t == 0).then(|| term(k)), (t + 1 == 2 * q).then(|| init((k + 1) % n))],
        }
    }

    fn crosses(&self, a: Spot, b: Spot) -> bool {
        matches!((a, b), (Spot::Block { k, axis, .. }, Spot::Block { k: k2, axis: x2, .. }) if k == k2 && axis != x2)
    }

    fn osculates(&self, a: Spot, b: Spot) -> bool {
        if a == b || self.crosses(a, b) {
            return false;
        }
        let adjacent = match (a, b) {
            (Spot::Block { k, axis, coord }, Spot::Block { k: k2, axis: x2, coord: c2 }) => {
                k == k2 && axis == x2 && coord.abs_diff(c2) == 1
            }
            (Spot::Arc { k, t }, Spot::Arc { k: k2, t: t2 }) => k == k2 && t.abs_diff(t2) == 1,
            _ => false,
        };
        let (ca, cb) = (self.cut_vertices(a), self.cut_vertices(b));
        adjacent || ca.iter().flatten().any(|v| cb.iter().flatten().any(|w| v == w))
    }

    fn carrier_diameter(&self, s: Spot) -> usize {
        match s {
            Spot::Block { k, axis, .. } => {
                1 + self.shape.blocks[k].sides().iter().enumerate().filter(|(i, _)| *i != axis).map(|(_, &x)| x as usize).sum::<usize>()
            }
            Spot::Arc { .. } => 1,
        }
    }
}

/// Condition (1) per antipodal wall, from the necklace shape alone.
///
/// In a necklace two hyperplanes cross only inside one block, and their
/// carriers meet only if they are neighbours in one block or arc or both
/// contain the same block end.
pub fn b8_condition1_shape_walls(shape: &NecklaceShape) -> Result<Vec<bool>> {
    let loc = Locator::new(shape);
    let len = loc.len();
    if len % 2 == 1 {
        return Err(Error::Input(format!("circle length {len} is odd; subdivide the arcs")));
    }
    let l = len / 2;
    Ok((0..l)
        .map(|j| {
            let (a, b) = (loc.locate(j), loc.locate(j + l));
            !loc.crosses(a, b) && !loc.osculates(a, b)
        })
        .collect())
}

pub fn b8_condition1_shape(shape: &NecklaceShape) -> bool {
    match b8_condition1_shape_walls(shape) {
        Ok(v) => v.into_iter().all(|ok| ok),
        Err(_) => false,
    }
}

/// Carrier diameter of the hyperplane dual to each circle edge.
pub fn carrier_diameters_shape(shape: &NecklaceShape) -> Vec<usize> {
    let loc = Locator::new(shape);
    (0..loc.len()).map(|j| loc.carrier_diameter(loc.locate(j))).collect()
}

/// Condition (3) from the shape: the label sequence of the circle is
/// invariant under the smallest block-period rotation, which then maps the
/// antipodal pairing to itself.
pub fn b8_condition3_shape(shape: &NecklaceShape) -> bool {
    let shift = rotation_shift(shape);
    if shift == 0 {
        return true;
    }
    let loc = Locator::new(shape);
    let len = loc.len();
    let q = shape.q;
    let n = shape.blocks.len();
    let label = |j: usize| -> (usize, u32, bool, bool) {
        match loc.locate(j % len) {
            Spot::Block { k, .. } => {
                let b = &shape.blocks[k];
                let (g, back) = b.step_label((j % len - loc.starts[2 * k]) as u32);
                (b.factor, g, back, false)
            }
            Spot::Arc { k, t } if t < q => (shape.blocks[k].factor, q - 1 - t, true, true),
            Spot::Arc { k, t } => (shape.blocks[(k + 1) % n].factor, t - q, false, true),
        }
    };
    len.is_multiple_of(2) && (0..len).all(|j| label(j) == label(j + shift))
}

/// Two-sided partition of the necklace's vertices by each wall: the
/// components of the 1-skeleton after deleting both hyperplanes' dual edges.
/// The side holding the smallest vertex is listed as the left halfspace.
pub fn restrict_wallspace(y: &Necklace, walls: &AntipodalWallStructure) -> Result<FiniteWallspace> {
    let n = y.complex.num_vertices();
    if n.saturating_mul(walls.walls.len()) > 1 << 28 {
        return Err(Error::Resource(format!("{} walls over {n} points", walls.walls.len())));
    }
    let hs = hyperplanes(&y.complex);
    let adj = y.complex.adjacency();
    let mut sides = Vec::with_capacity(walls.walls.len());
    for (i, w) in walls.walls.iter().enumerate() {
        let mut comp = vec![u32::MAX; n];
        let mut count = 0;
        for root in 0..n {
            if comp[root] != u32::MAX {
                continue;
            }
            comp[root] = count;
            let mut queue = VecDeque::from([root as u32]);
            while let Some(u) = queue.pop_front() {
                for &(v, e) in &adj[u as usize] {
                    if !w.contains(&hs.edge_class[e as usize]) && comp[v as usize] == u32::MAX {
                        comp[v as usize] = count;
                        queue.push_back(v);
                    }
                }
            }
            count += 1;
        }
        if count != 2 {
            return Err(Error::Input(format!("wall {i} leaves {count} components, not 2")));
        }
        sides.push((0..n).map(|v| comp[v] == 0).collect::<Vec<bool>>());
    }
    FiniteWallspace::from_sides(n, &sides)
}

/// Wall counts of a relator's cone: antipodal walls of the letter edges
/// alone (arcs contracted) and of the full circle at subdivision `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallCounts {
    pub letter_walls: usize,
    pub letter_walls_pairwise_crossing: bool,
    pub all_walls: usize,
}

/// Walls dual to the letter edges of the circle.
pub fn letter_wallspace(r: &FPWord, factors: &[FactorDescriptor]) -> Result<FiniteWallspace> {
    let y = letter_necklace(r, factors)?;
    let walls = antipodal_walls(&y)?;
    restrict_wallspace(&y, &walls)
}

/// Abstract wall system of a flat: `m` walls in each of two
/// directions, all pairs crossing. Points are the vertices of the
/// `2m`-cube and wall `i` splits along coordinate `i`.
pub fn flat_transcription(m: usize) -> Result<FiniteWallspace> {
    let k = 2 * m;
    if k > 16 {
        return Err(Error::Resource(format!("{k} walls")));
    }
    let sides: Vec<Vec<bool>> = (0..k).map(|i| (0..1usize << k).map(|p| p >> i & 1 == 0).collect()).collect();
    FiniteWallspace::from_sides(1 << k, &sides)
}
