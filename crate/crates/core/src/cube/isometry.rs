use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{CubeComplex, SignedEdge};
use crate::error::{Error, Result};

/// A cellular map sending vertices, edges and squares to cells of the same
/// dimension. Edge images carry an orientation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinatorialMap {
    pub vertex: Vec<u32>,
    pub edge: Vec<SignedEdge>,
    pub square: Vec<u32>,
}

impl CombinatorialMap {
    pub fn identity(x: &CubeComplex) -> Self {
        CombinatorialMap {
            vertex: (0..x.num_vertices() as u32).collect(),
            edge: (0..x.num_edges() as u32).map(SignedEdge::fwd).collect(),
            square: (0..x.num_squares() as u32).collect(),
        }
    }
}

/// An edge end: the edge and which endpoint (0 = tail, 1 = head).
pub type EdgeEnd = (u32, u8);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum IsometryViolation {
    /// Two edge ends at `vertex` have the same image.
    NotInjective { vertex: u32, ends: [EdgeEnd; 2] },
    /// The images of `ends` form a square corner downstairs but the ends
    /// themselves span no square.
    MissingCorner { vertex: u32, ends: [EdgeEnd; 2] },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsometryReport {
    pub local_isometry: bool,
    pub violation: Option<IsometryViolation>,
}

fn corner_key(a: EdgeEnd, b: EdgeEnd) -> [EdgeEnd; 2] {
    if a <= b {
        [a, b]
    } else {
        [b, a]
    }
}

fn corners(x: &CubeComplex) -> HashSet<[EdgeEnd; 2]> {
    let mut out = HashSet::new();
    for s in x.squares() {
        for i in 0..4 {
            let (a, b) = (s[i], s[(i + 1) % 4]);
            out.insert(corner_key((a.edge, !a.reversed as u8), (b.edge, b.reversed as u8)));
        }
    }
    out
}

fn check_combinatorial(y: &CubeComplex, x: &CubeComplex, f: &CombinatorialMap) -> Result<()> {
    if f.vertex.len() != y.num_vertices() || f.edge.len() != y.num_edges() || f.square.len() != y.num_squares() {
        return Err(Error::Input("map does not cover every cell of the source".into()));
    }
    if f.vertex.iter().any(|&v| v as usize >= x.num_vertices())
        || f.edge.iter().any(|e| e.edge as usize >= x.num_edges())
        || f.square.iter().any(|&s| s as usize >= x.num_squares())
    {
        return Err(Error::Input("map sends a cell outside the target".into()));
    }
    for (e, &[t, h]) in y.edges().iter().enumerate() {
        let img = f.edge[e];
        if x.tail(img) != f.vertex[t as usize] || x.head(img) != f.vertex[h as usize] {
            return Err(Error::Input(format!("edge {e} is not mapped compatibly with its endpoints")));
        }
    }
    for (s, b) in y.squares().iter().enumerate() {
        let mut src: Vec<u32> = b.iter().map(|e| f.edge[e.edge as usize].edge).collect();
        let mut dst: Vec<u32> = x.squares()[f.square[s] as usize].iter().map(|e| e.edge).collect();
        src.sort_unstable();
        dst.sort_unstable();
        if src != dst {
            return Err(Error::Input(format!("square {s} is not mapped onto a square")));
        }
    }
    Ok(())
}

/// Local injectivity on edge ends plus the no-missing-corner condition.
///
/// Errors if `f` is not a combinatorial map; otherwise reports the first
/// violation found (vertices in order).
pub fn check_local_isometry(y: &CubeComplex, x: &CubeComplex, f: &CombinatorialMap) -> Result<IsometryReport> {
    check_combinatorial(y, x, f)?;
    let x_corners = corners(x);
    let y_corners = corners(y);
    let mut ends: Vec<Vec<EdgeEnd>> = vec![Vec::new(); y.num_vertices()];
    for (e, &[t, h]) in y.edges().iter().enumerate() {
        ends[t as usize].push((e as u32, 0));
        ends[h as usize].push((e as u32, 1));
    }
    let image = |(e, end): EdgeEnd| -> EdgeEnd {
        let img = f.edge[e as usize];
        (img.edge, end ^ img.reversed as u8)
    };
    for (v, es) in ends.iter().enumerate() {
        let mut seen = std::collections::HashMap::new();
        for &a in es {
            if let Some(&b) = seen.get(&image(a)) {
                return Ok(IsometryReport {
                    local_isometry: false,
                    violation: Some(IsometryViolation::NotInjective { vertex: v as u32, ends: [b, a] }),
                });
            }
            seen.insert(image(a), a);
        }
        for (i, &a) in es.iter().enumerate() {
            for &b in &es[i + 1..] {
                if x_corners.contains(&corner_key(image(a), image(b))) && !y_corners.contains(&corner_key(a, b)) {
                    return Ok(IsometryReport {
                        local_isometry: false,
                        violation: Some(IsometryViolation::MissingCorner { vertex: v as u32, ends: [a, b] }),
                    });
                }
            }
        }
    }
    Ok(IsometryReport { local_isometry: true, violation: None })
}

#[cfg(test)]
mod tests {
    use super::super::grid_box;
    use super::*;

    #[test]
    fn identity_is_isometry() {
        let (b, _) = grid_box(&[2, 1]).unwrap();
        assert!(check_local_isometry(&b, &b, &CombinatorialMap::identity(&b)).unwrap().local_isometry);
    }

    #[test]
    fn folding_fails() {
        // path u - v - w folded onto a single edge
        let mut y = CubeComplex::new(3);
        y.add_edge(0, 1);
        y.add_edge(2, 1);
        let mut x = CubeComplex::new(2);
        x.add_edge(0, 1);
        let f = CombinatorialMap { vertex: vec![0, 1, 0], edge: vec![SignedEdge::fwd(0); 2], square: vec![] };
        let r = check_local_isometry(&y, &x, &f).unwrap();
        assert!(matches!(r.violation, Some(IsometryViolation::NotInjective { vertex: 1, .. })));
    }

    #[test]
    fn missing_corner_detected() {
        // boundary of a square mapped onto the full square
        let (b, _) = grid_box(&[1, 1]).unwrap();
        let mut y = CubeComplex::new(4);
        for &[t, h] in b.edges() {
            y.add_edge(t, h);
        }
        let f = CombinatorialMap {
            vertex: (0..4).collect(),
            edge: (0..4).map(SignedEdge::fwd).collect(),
            square: vec![],
        };
        let r = check_local_isometry(&y, &b, &f).unwrap();
        assert!(matches!(r.violation, Some(IsometryViolation::MissingCorner { .. })));
    }

    #[test]
    fn bad_map_is_error() {
        let (b, _) = grid_box(&[1]).unwrap();
        let f = CombinatorialMap { vertex: vec![1, 0], edge: vec![SignedEdge::fwd(0)], square: vec![] };
        assert!(check_local_isometry(&b, &b, &f).is_err());
    }
}
