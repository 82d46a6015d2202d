use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::cube::{
    append_box, check_local_isometry, hyperplanes, CombinatorialMap, Cube, CubeComplex, DegreeLabeling,
    IsometryReport, SignedEdge,
};
use crate::error::{Error, Result};
use crate::word::{FPWord, FactorDescriptor, FactorElement, FactorKind, Syllable};

/// Largest abelian rank realized as a product of circles with all its cubes.
pub const MAX_TORUS_RANK: usize = 12;

/// Factor complexes wedged onto a star of arms of length `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LongWedge {
    pub factors: Vec<FactorDescriptor>,
    pub q: u32,
    pub complex: CubeComplex,
    pub basepoint: u32,
    /// Basepoint of each factor complex (the far end of its arm).
    pub factor_base: Vec<u32>,
    /// Loop edge of each generator, per factor.
    pub loops: Vec<Vec<u32>>,
    /// Arm edges of each factor, oriented and listed from the basepoint outwards.
    pub arms: Vec<Vec<u32>>,
    /// Square of each generator pair `a < b` of an abelian factor.
    tori: Vec<HashMap<(u32, u32), u32>>,
}

pub fn build_long_wedge(factors: &[FactorDescriptor], q: u32) -> Result<LongWedge> {
    if q == 0 {
        return Err(Error::Input("subdivision q must be at least 1".into()));
    }
    long_wedge(factors, q)
}

/// `q = 0` glues every factor complex directly at the basepoint.
pub(crate) fn long_wedge(factors: &[FactorDescriptor], q: u32) -> Result<LongWedge> {
    let mut x = CubeComplex::new(1);
    let basepoint = 0;
    let mut factor_base = Vec::new();
    let mut arms = Vec::new();
    let mut loops = Vec::new();
    let mut tori = Vec::new();
    for f in factors {
        f.validate()?;
        let mut arm = Vec::new();
        let mut at = basepoint;
        for _ in 0..q {
            let v = x.add_vertex();
            arm.push(x.add_edge(at, v));
            at = v;
        }
        factor_base.push(at);
        arms.push(arm);
        let ls: Vec<u32> = (0..f.rank()).map(|_| x.add_edge(at, at)).collect();
        let mut squares = HashMap::new();
        if f.kind == FactorKind::Abelian {
            let d = f.rank();
            if d > MAX_TORUS_RANK {
                return Err(Error::Resource(format!("abelian factor {} of rank {d} exceeds {MAX_TORUS_RANK}", f.name)));
            }
            // product of d circles: one cell per nonempty subset of the loops
            let mut cells: HashMap<u32, u32> = HashMap::new();
            for a in 0..d {
                for b in a + 1..d {
                    let s = x.add_square([
                        SignedEdge::fwd(ls[a]),
                        SignedEdge::fwd(ls[b]),
                        SignedEdge::rev(ls[a]),
                        SignedEdge::rev(ls[b]),
                    ])?;
                    squares.insert((a as u32, b as u32), s);
                    cells.insert((1 << a) | (1 << b), s);
                }
            }
            for k in 3..=d {
                for mask in (0u32..1 << d).filter(|m| m.count_ones() as usize == k) {
                    let facets = (0..d)
                        .filter(|i| mask >> i & 1 == 1)
                        .flat_map(|i| {
                            let sub = cells[&(mask & !(1 << i))];
                            [sub, sub]
                        })
                        .collect();
                    let c = x.add_cube(Cube { dim: k as u8, facets })?;
                    cells.insert(mask, c);
                }
            }
        }
        loops.push(ls);
        tori.push(squares);
    }
    Ok(LongWedge { factors: factors.to_vec(), q, complex: x, basepoint, factor_base, loops, arms, tori })
}

impl LongWedge {
    pub fn torus_square(&self, factor: usize, a: u32, b: u32) -> Option<u32> {
        self.tori[factor].get(&(a.min(b), a.max(b))).copied()
    }
}

/// Combinatorial convex hull of a syllable: a path of letters for a free
/// factor, a box for a free-abelian one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hull {
    /// Loop (generator, backwards) of each letter.
    Path(Vec<(u32, bool)>),
    /// One axis per nonzero exponent: (generator, backwards, side length).
    Box(Vec<(u32, bool, u32)>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockShape {
    pub factor: usize,
    pub hull: Hull,
}

impl BlockShape {
    pub fn from_syllable(s: &Syllable) -> Self {
        let hull = match &s.element {
            FactorElement::Free(w) => Hull::Path(w.iter().map(|l| (l.generator() as u32, l.is_inverse())).collect()),
            FactorElement::Abelian(v) => Hull::Box(
                v.iter()
                    .enumerate()
                    .filter(|(_, &e)| e != 0)
                    .map(|(g, &e)| (g as u32, e < 0, e.unsigned_abs() as u32))
                    .collect(),
            ),
        };
        BlockShape { factor: s.factor, hull }
    }

    pub fn sides(&self) -> Vec<u32> {
        match &self.hull {
            Hull::Path(w) => vec![w.len() as u32],
            Hull::Box(axes) => axes.iter().map(|a| a.2).collect(),
        }
    }

    /// Also the block's diameter and the length of its staircase.
    pub fn letter_length(&self) -> usize {
        self.sides().iter().map(|&s| s as usize).sum()
    }

    /// Axis and coordinate of staircase step `t`.
    pub fn step(&self, mut t: u32) -> (usize, u32) {
        for (i, s) in self.sides().into_iter().enumerate() {
            if t < s {
                return (i, t);
            }
            t -= s;
        }
        panic!("staircase step out of range")
    }

    /// Wedge loop (generator, backwards) of staircase step `t`.
    pub fn step_label(&self, t: u32) -> (u32, bool) {
        match &self.hull {
            Hull::Path(w) => w[t as usize],
            Hull::Box(axes) => {
                let (i, _) = self.step(t);
                (axes[i].0, axes[i].1)
            }
        }
    }
}

/// The cone of a relator described by its blocks and the subdivision, without
/// materializing cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NecklaceShape {
    pub q: u32,
    pub blocks: Vec<BlockShape>,
}

impl NecklaceShape {
    pub fn new(r: &FPWord, q: u32) -> Result<Self> {
        if r.syllable_length() < 2 {
            return Err(Error::Input(format!(
                "a necklace needs at least two syllables, relator has {}",
                r.syllable_length()
            )));
        }
        if !r.is_cyclically_reduced() {
            return Err(Error::Input("relator is not cyclically reduced".into()));
        }
        Ok(NecklaceShape { q, blocks: r.syllables().iter().map(BlockShape::from_syllable).collect() })
    }

    pub fn syllable_length(&self) -> usize {
        self.blocks.len()
    }

    pub fn letter_length(&self) -> usize {
        self.blocks.iter().map(BlockShape::letter_length).sum()
    }

    /// `|w|`: letters plus two arm segments of `q` edges per syllable.
    pub fn circle_length(&self) -> usize {
        self.letter_length() + 2 * self.q as usize * self.blocks.len()
    }

    /// Blocks are convex and arcs are geodesic, so the circle is a shortest
    /// essential path; `systole_of_necklace` checks this against a search.
    pub fn systole(&self) -> usize {
        self.circle_length()
    }

    /// `M_i`, the largest block diameter.
    pub fn max_block_diameter(&self) -> usize {
        self.blocks.iter().map(BlockShape::letter_length).max().unwrap_or(0)
    }
}

/// Where a block sits inside a materialized necklace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPlacement {
    pub initial: u32,
    pub terminal: u32,
    /// Staircase edges from `initial` to `terminal`, all traversed forwards.
    pub staircase: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Necklace {
    pub shape: NecklaceShape,
    pub complex: CubeComplex,
    /// The induced map to the long wedge.
    pub map: CombinatorialMap,
    pub labeling: DegreeLabeling,
    /// The geodesic circle `w`, starting at the initial vertex of block 0.
    pub circle: Vec<SignedEdge>,
    pub blocks: Vec<BlockPlacement>,
    /// Edges of arc `k`, from block `k` to block `k + 1`.
    pub arcs: Vec<Vec<u32>>,
}

/// Builds the cone for `r` over `wedge` (at the wedge's subdivision).
pub fn build_necklace(r: &FPWord, wedge: &LongWedge) -> Result<Necklace> {
    let shape = NecklaceShape::new(r, wedge.q)?;
    for s in r.syllables() {
        if s.factor >= wedge.factors.len() {
            return Err(Error::UnknownFactor(s.factor));
        }
    }
    materialize(shape, wedge)
}

pub(crate) fn materialize(shape: NecklaceShape, wedge: &LongWedge) -> Result<Necklace> {
    let q = wedge.q;
    let mut y = CubeComplex::new(0);
    let mut vmap: Vec<u32> = Vec::new();
    let mut emap: Vec<SignedEdge> = Vec::new();
    let mut smap: Vec<u32> = Vec::new();
    let mut blocks = Vec::new();
    for b in &shape.blocks {
        let j = b.factor;
        let base = wedge.factor_base[j];
        let first_v = y.num_vertices() as u32;
        let first_e = y.num_edges();
        let staircase = match &b.hull {
            Hull::Path(letters) => {
                y.add_vertex();
                let mut stairs = Vec::new();
                for &(g, inv) in letters {
                    let v = y.add_vertex();
                    stairs.push(y.add_edge(v - 1, v));
                    emap.push(SignedEdge { edge: wedge.loops[j][g as usize], reversed: inv });
                }
                stairs
            }
            Hull::Box(axes) => {
                let sides: Vec<u32> = axes.iter().map(|a| a.2).collect();
                let first_s = y.num_squares();
                let edge_axis = append_box(&mut y, &sides)?;
                for &a in &edge_axis {
                    let (g, inv, _) = axes[a as usize];
                    emap.push(SignedEdge { edge: wedge.loops[j][g as usize], reversed: inv });
                }
                for s in first_s..y.num_squares() {
                    let sq = y.squares()[s];
                    let ga = axes[edge_axis[sq[0].edge as usize - first_e] as usize].0;
                    let gb = axes[edge_axis[sq[1].edge as usize - first_e] as usize].0;
                    smap.push(wedge.torus_square(j, ga, gb).ok_or_else(|| Error::Internal("missing torus square".into()))?);
                }
                // staircase: walk axis by axis
                let by_tail: HashMap<(u32, u8), u32> = (first_e..y.num_edges())
                    .map(|e| ((y.edges()[e][0], edge_axis[e - first_e]), e as u32))
                    .collect();
                let mut at = first_v;
                let mut stairs = Vec::new();
                for (i, &s) in sides.iter().enumerate() {
                    for _ in 0..s {
                        let e = by_tail[&(at, i as u8)];
                        stairs.push(e);
                        at = y.edges()[e as usize][1];
                    }
                }
                stairs
            }
        };
        vmap.resize(y.num_vertices(), base);
        let terminal = match staircase.last() {
            Some(&e) => y.edges()[e as usize][1],
            None => first_v,
        };
        blocks.push(BlockPlacement { initial: first_v, terminal, staircase });
    }

    let s = blocks.len();
    let mut arcs = Vec::with_capacity(s);
    if q > 0 {
        for k in 0..s {
            let (j, j2) = (shape.blocks[k].factor, shape.blocks[(k + 1) % s].factor);
            let mut arc = Vec::with_capacity(2 * q as usize);
            let mut at = blocks[k].terminal;
            for t in 0..2 * q {
                let next = if t + 1 == 2 * q {
                    blocks[(k + 1) % s].initial
                } else {
                    let v = y.add_vertex();
                    // arc vertex t + 1 sits on arm j (inwards) then arm j2 (outwards)
                    let img = if t < q {
                        wedge.complex.edges()[wedge.arms[j][(q - 1 - t) as usize] as usize][0]
                    } else {
                        wedge.complex.edges()[wedge.arms[j2][(t - q) as usize] as usize][1]
                    };
                    vmap.push(img);
                    v
                };
                arc.push(y.add_edge(at, next));
                emap.push(if t < q {
                    SignedEdge::rev(wedge.arms[j][(q - 1 - t) as usize])
                } else {
                    SignedEdge::fwd(wedge.arms[j2][(t - q) as usize])
                });
                at = next;
            }
            arcs.push(arc);
        }
    } else {
        // glue terminal k to initial k + 1
        let glue: Vec<(u32, u32)> = (0..s).map(|k| (blocks[(k + 1) % s].initial, blocks[k].terminal)).collect();
        let (merged, rename) = merge_vertices(&y, &glue)?;
        y = merged;
        let mut vm = vec![0; y.num_vertices()];
        for (old, &new) in rename.iter().enumerate() {
            vm[new as usize] = vmap[old];
        }
        vmap = vm;
        for b in &mut blocks {
            b.initial = rename[b.initial as usize];
            b.terminal = rename[b.terminal as usize];
        }
        arcs = vec![Vec::new(); s];
    }

    let mut circle = Vec::with_capacity(shape.circle_length());
    for k in 0..s {
        circle.extend(blocks[k].staircase.iter().map(|&e| SignedEdge::fwd(e)));
        circle.extend(arcs[k].iter().map(|&e| SignedEdge::fwd(e)));
    }
    let hs = hyperplanes(&y);
    let first = hs.edge_class[circle[0].edge as usize];
    // every edge of one hyperplane points the same way as the circle crosses it
    let labels = hs.edge_class.iter().map(|&c| (c == first) as i64).collect();

    Ok(Necklace {
        shape,
        complex: y,
        map: CombinatorialMap { vertex: vmap, edge: emap, square: smap },
        labeling: DegreeLabeling { labels },
        circle,
        blocks,
        arcs,
    })
}

/// Identifies each `(from, into)` pair and renumbers vertices compactly.
fn merge_vertices(x: &CubeComplex, pairs: &[(u32, u32)]) -> Result<(CubeComplex, Vec<u32>)> {
    let n = x.num_vertices();
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn root(p: &mut [u32], mut v: u32) -> u32 {
        while p[v as usize] != v {
            v = p[v as usize];
        }
        v
    }
    for &(a, b) in pairs {
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb) as usize] = ra.min(rb);
        }
    }
    let mut rename = vec![u32::MAX; n];
    let mut next = 0u32;
    for v in 0..n as u32 {
        let r = root(&mut parent, v);
        if rename[r as usize] == u32::MAX {
            rename[r as usize] = next;
            next += 1;
        }
        rename[v as usize] = rename[r as usize];
    }
    let edges = x.edges().iter().map(|&[u, v]| [rename[u as usize], rename[v as usize]]).collect();
    let y = CubeComplex::from_parts(next as usize, edges, x.squares().to_vec(), x.cubes().to_vec())?;
    Ok((y, rename))
}

impl Necklace {
    /// The induced map to `wedge` must be a local isometry.
    pub fn check_map(&self, wedge: &LongWedge) -> Result<IsometryReport> {
        check_local_isometry(&self.complex, &wedge.complex, &self.map)
    }
}

/// The relator's cone with every arc contracted: blocks glued end to end.
/// Its circle consists of the letter edges only.
pub fn letter_necklace(r: &FPWord, factors: &[FactorDescriptor]) -> Result<Necklace> {
    let wedge = long_wedge(factors, 0)?;
    materialize(NecklaceShape::new(r, 0)?, &wedge)
}
