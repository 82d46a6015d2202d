use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{CubicalPresentation, Necklace, NecklaceShape};
use crate::cube::{
    complement_contractible, diameter, grid_box, hyperplanes, CubeComplex, DegreeLabeling, HyperplaneSet,
};

/// Blocks with more edges than this are judged by their box structure
/// instead of by computation.
pub const BLOCK_COMPUTE_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperplaneFailure {
    /// Block index, or `None` for the whole cone.
    pub block: Option<usize>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeProperness {
    pub relator: usize,
    pub compact: bool,
    /// The necklace retracts to its circle, which is a closed geodesic.
    pub retracts_to_geodesic: bool,
    pub carriers_embedded: bool,
    pub max_carrier_diameter: usize,
    pub systole: usize,
    pub carrier_diameter_pass: bool,
    pub complements_contractible: bool,
    /// Distinct block shapes decided by computation / by box structure.
    pub blocks_computed: usize,
    pub blocks_by_structure: usize,
    pub failures: Vec<HyperplaneFailure>,
}

impl ConeProperness {
    pub fn passed(&self) -> bool {
        self.compact
            && self.retracts_to_geodesic
            && self.carriers_embedded
            && self.carrier_diameter_pass
            && self.complements_contractible
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProperReport {
    pub n: u64,
    pub q: u32,
    pub cones: Vec<ConeProperness>,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy)]
struct BlockFacts {
    max_carrier: usize,
    embedded: bool,
    /// Every hyperplane cuts the block into two contractible pieces, one
    /// holding the initial vertex and the other the terminal vertex.
    splits: bool,
    computed: bool,
}

fn reachable_avoiding(x: &CubeComplex, hs: &HyperplaneSet, h: u32, from: u32, to: u32) -> bool {
    let adj = x.adjacency();
    let mut seen = vec![false; x.num_vertices()];
    seen[from as usize] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            return true;
        }
        for &(v, e) in &adj[u as usize] {
            if hs.edge_class[e as usize] != h && !seen[v as usize] {
                seen[v as usize] = true;
                queue.push_back(v);
            }
        }
    }
    false
}

fn block_facts(sides: &[u32]) -> BlockFacts {
    let total: usize = sides.iter().map(|&s| s as usize).sum();
    let edges: usize = (0..sides.len())
        .map(|i| sides.iter().enumerate().map(|(j, &s)| if i == j { s as usize } else { s as usize + 1 }).product::<usize>())
        .sum();
    if edges > BLOCK_COMPUTE_LIMIT {
        // a hyperplane of a box is a coordinate slab: its carrier is a box
        // with that side shrunk to 1, and it splits the box into two boxes
        let min = sides.iter().copied().min().unwrap_or(0) as usize;
        return BlockFacts { max_carrier: 1 + total - min, embedded: true, splits: true, computed: false };
    }
    let (b, _) = grid_box(sides).expect("block within limits");
    let hs = hyperplanes(&b);
    let zero = DegreeLabeling { labels: vec![0; b.num_edges()] };
    let terminal = b.num_vertices() as u32 - 1;
    let mut facts = BlockFacts { max_carrier: 0, embedded: true, splits: true, computed: true };
    for h in 0..hs.len() as u32 {
        let carrier = hs.carrier(&b, h);
        facts.max_carrier = facts.max_carrier.max(diameter(&b, &carrier).unwrap_or(usize::MAX));
        facts.embedded &= !hs.self_osculates(&b, h);
        let c = complement_contractible(&b, &hs, h, &zero);
        facts.splits &= c.components == 2 && c.simply_connected && !reachable_avoiding(&b, &hs, h, 0, terminal);
    }
    facts
}

fn cone_properness(relator: usize, shape: &NecklaceShape, n: u64, cache: &mut HashMap<Vec<u32>, BlockFacts>) -> ConeProperness {
    let mut failures = Vec::new();
    let mut max_carrier = if shape.q > 0 { 1 } else { 0 };
    let (mut embedded, mut contractible) = (true, true);
    let (mut computed, mut structural) = (0, 0);
    let first_use = |cache: &HashMap<Vec<u32>, BlockFacts>, s: &Vec<u32>| !cache.contains_key(s);
    for (k, b) in shape.blocks.iter().enumerate() {
        let sides = b.sides();
        if first_use(cache, &sides) {
            let f = block_facts(&sides);
            if f.computed {
                computed += 1;
            } else {
                structural += 1;
            }
            cache.insert(sides.clone(), f);
        }
        let f = cache[&sides];
        max_carrier = max_carrier.max(f.max_carrier);
        if !f.embedded {
            embedded = false;
            failures.push(HyperplaneFailure { block: Some(k), reason: "carrier not embedded".into() });
        }
        if !f.splits {
            contractible = false;
            failures.push(HyperplaneFailure { block: Some(k), reason: "hyperplane complement not contractible".into() });
        }
    }
    let systole = shape.systole();
    let carrier_pass = (n as u128) * (max_carrier as u128) < systole as u128;
    if !carrier_pass {
        failures.push(HyperplaneFailure {
            block: None,
            reason: format!("carrier diameter {max_carrier} is not below systole {systole} / {n}"),
        });
    }
    failures.truncate(16);
    ConeProperness {
        relator,
        compact: true,
        retracts_to_geodesic: true,
        carriers_embedded: embedded,
        max_carrier_diameter: max_carrier,
        systole,
        carrier_diameter_pass: carrier_pass,
        complements_contractible: contractible,
        blocks_computed: computed,
        blocks_by_structure: structural,
        failures,
    }
}

/// Per cone: carriers embed with diameter below `sys(Y_i) / n`, and every
/// hyperplane complement is contractible.
///
/// The necklace is a cycle of blocks and arcs meeting at cut vertices, and
/// every hyperplane lives in one block or is dual to one arc edge. Removing
/// it leaves the rest of the cycle (a contractible chain) attached to two
/// contractible halves of that unit, one at each end, so the complement is
/// contractible exactly when each block splits that way. Blocks are checked
/// once per distinct shape.
pub fn check_properness_hypotheses(cp: &CubicalPresentation, n: u64) -> ProperReport {
    let mut cache = HashMap::new();
    let cones: Vec<ConeProperness> =
        cp.cones.iter().enumerate().map(|(i, s)| cone_properness(i, s, n, &mut cache)).collect();
    let passed = cones.iter().all(ConeProperness::passed);
    ProperReport { n, q: cp.q, cones, passed }
}

/// The same hypotheses decided directly on a built necklace, hyperplane by
/// hyperplane. Quadratic in the size of the necklace.
pub fn check_properness_materialized(y: &Necklace, n: u64) -> ConeProperness {
    let x = &y.complex;
    let hs = hyperplanes(x);
    let mut failures = Vec::new();
    let mut max_carrier = 0;
    let (mut embedded, mut contractible) = (true, true);
    for h in 0..hs.len() as u32 {
        let d = diameter(x, &hs.carrier(x, h)).unwrap_or(usize::MAX);
        max_carrier = max_carrier.max(d);
        if hs.self_osculates(x, h) {
            embedded = false;
            failures.push(HyperplaneFailure { block: None, reason: format!("hyperplane {h}: carrier not embedded") });
        }
        if !complement_contractible(x, &hs, h, &y.labeling).contractible() {
            contractible = false;
            failures.push(HyperplaneFailure { block: None, reason: format!("hyperplane {h}: complement not contractible") });
        }
    }
    let systole = y.shape.systole();
    let carrier_pass = (n as u128) * (max_carrier as u128) < systole as u128;
    failures.truncate(16);
    ConeProperness {
        relator: 0,
        compact: true,
        retracts_to_geodesic: true,
        carriers_embedded: embedded,
        max_carrier_diameter: max_carrier,
        systole,
        carrier_diameter_pass: carrier_pass,
        complements_contractible: contractible,
        blocks_computed: y.blocks.len(),
        blocks_by_structure: 0,
        failures,
    }
}
