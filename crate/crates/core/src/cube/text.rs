//! Text format:
//!
//! ```text
//! fpcube-complex 1
//! vertices 4
//! edge 0 1          # edges are numbered in order of appearance
//! edge 1 2
//! edge 3 2
//! edge 0 3
//! square +0 +1 -2 -3
//! cube 3 s0 s1 s2 s3 s4 s5   # facets, opposite pairs adjacent
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{Cube, CubeComplex, HyperplaneSet, SignedEdge};
use crate::error::{parse_err, Result};

pub const COMPLEX_HEADER: &str = "fpcube-complex 1";

/// Largest vertex count accepted by the parser.
const MAX_VERTICES: usize = 1 << 24;

pub fn to_text(x: &CubeComplex) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{COMPLEX_HEADER}");
    let _ = writeln!(out, "vertices {}", x.num_vertices());
    for [u, v] in x.edges() {
        let _ = writeln!(out, "edge {u} {v}");
    }
    for s in x.squares() {
        let sides: Vec<String> = s.iter().map(|e| format!("{}{}", if e.reversed { '-' } else { '+' }, e.edge)).collect();
        let _ = writeln!(out, "square {}", sides.join(" "));
    }
    for c in x.cubes() {
        let facets: Vec<String> = c.facets.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "cube {} {}", c.dim, facets.join(" "));
    }
    out
}

fn num<T: std::str::FromStr>(tok: Option<&str>, ln: usize, what: &str) -> Result<T> {
    tok.ok_or_else(|| parse_err(ln, format!("missing {what}")))?
        .parse()
        .map_err(|_| parse_err(ln, format!("bad {what}")))
}

pub fn parse_complex(text: &str) -> Result<CubeComplex> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, h)) if h == COMPLEX_HEADER => {}
        Some((ln, h)) => return Err(parse_err(ln, format!("expected header `{COMPLEX_HEADER}`, found `{h}`"))),
        None => return Err(parse_err(1, "empty document")),
    }
    let mut x: Option<CubeComplex> = None;
    for (ln, line) in lines {
        let mut toks = line.split_whitespace();
        let kw = toks.next().unwrap_or_default();
        if kw == "vertices" {
            if x.is_some() {
                return Err(parse_err(ln, "vertex count given twice"));
            }
            let n: usize = num(toks.next(), ln, "vertex count")?;
            if n > MAX_VERTICES {
                return Err(parse_err(ln, "too many vertices"));
            }
            x = Some(CubeComplex::new(n));
            continue;
        }
        let x = x.as_mut().ok_or_else(|| parse_err(ln, "`vertices` must come first"))?;
        match kw {
            "edge" => {
                let u: u32 = num(toks.next(), ln, "endpoint")?;
                let v: u32 = num(toks.next(), ln, "endpoint")?;
                if u as usize >= x.num_vertices() || v as usize >= x.num_vertices() {
                    return Err(parse_err(ln, "edge endpoint out of range"));
                }
                if x.num_squares() > 0 {
                    return Err(parse_err(ln, "edges must precede squares"));
                }
                x.add_edge(u, v);
            }
            "square" => {
                let mut sides = [SignedEdge::fwd(0); 4];
                for side in sides.iter_mut() {
                    let tok = toks.next().ok_or_else(|| parse_err(ln, "square needs four sides"))?;
                    let (rev, id) = match tok.split_at_checked(1) {
                        Some(("+", id)) => (false, id),
                        Some(("-", id)) => (true, id),
                        _ => return Err(parse_err(ln, format!("side `{tok}` must start with + or -"))),
                    };
                    let edge: u32 = id.parse().map_err(|_| parse_err(ln, format!("bad edge id in `{tok}`")))?;
                    *side = SignedEdge { edge, reversed: rev };
                }
                if !x.cubes().is_empty() {
                    return Err(parse_err(ln, "squares must precede cubes"));
                }
                x.add_square(sides).map_err(|e| parse_err(ln, e.to_string()))?;
            }
            "cube" => {
                let dim: u8 = num(toks.next(), ln, "dimension")?;
                let facets = toks
                    .by_ref()
                    .map(|t| t.parse::<u32>().map_err(|_| parse_err(ln, format!("bad facet `{t}`"))))
                    .collect::<Result<Vec<_>>>()?;
                x.add_cube(Cube { dim, facets }).map_err(|e| parse_err(ln, e.to_string()))?;
            }
            other => return Err(parse_err(ln, format!("unknown directive `{other}`"))),
        }
        if toks.next().is_some() {
            return Err(parse_err(ln, "trailing tokens"));
        }
    }
    x.ok_or_else(|| parse_err(1, "missing `vertices` line"))
}

/// DOT rendering of the 1-skeleton.
pub fn to_dot(x: &CubeComplex) -> String {
    let mut out = String::from("graph complex {\n");
    for v in 0..x.num_vertices() {
        let _ = writeln!(out, "  v{v};");
    }
    for (i, [u, v]) in x.edges().iter().enumerate() {
        let _ = writeln!(out, "  v{u} -- v{v} [label=\"e{i}\"];");
    }
    out.push_str("}\n");
    out
}

impl HyperplaneSet {
    /// Hyperplanes as nodes; solid edges for crossing, dashed for osculation.
    pub fn to_dot(&self, x: &CubeComplex) -> String {
        let mut out = String::from("graph hyperplanes {\n");
        for h in &self.hyperplanes {
            let _ = writeln!(out, "  h{} [label=\"h{} ({} edges)\"];", h.id, h.id, h.edges.len());
        }
        let crossing: BTreeSet<(u32, u32)> =
            self.square_classes.iter().filter(|c| c[0] != c[1]).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect();
        for (a, b) in &crossing {
            let _ = writeln!(out, "  h{a} -- h{b};");
        }
        // osculating pairs: carriers meet at a vertex
        let mut at_vertex: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); x.num_vertices()];
        for (e, &[u, v]) in x.edges().iter().enumerate() {
            at_vertex[u as usize].insert(self.edge_class[e]);
            at_vertex[v as usize].insert(self.edge_class[e]);
        }
        let mut touching = BTreeSet::new();
        for hs in &at_vertex {
            let hs: Vec<u32> = hs.iter().copied().collect();
            for (i, &a) in hs.iter().enumerate() {
                for &b in &hs[i + 1..] {
                    touching.insert((a, b));
                }
            }
        }
        for (a, b) in touching.difference(&crossing) {
            let _ = writeln!(out, "  h{a} -- h{b} [style=dashed];");
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::{grid_box, hyperplanes};
    use super::*;

    #[test]
    fn round_trip() {
        let (b, _) = grid_box(&[1, 2, 1]).unwrap();
        let text = to_text(&b);
        assert_eq!(parse_complex(&text).unwrap(), b);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_complex("").is_err());
        assert!(parse_complex("fpcube-complex 1\nedge 0 1\n").is_err());
        assert!(parse_complex("fpcube-complex 1\nvertices 2\nedge 0 2\n").is_err());
        assert!(parse_complex("fpcube-complex 1\nvertices 2\nedge 0 1\nsquare +0 +0 +0 +0\n").is_err());
        assert!(parse_complex("fpcube-complex 1\nvertices 1\nedge 0 0\nsquare +0 -0 +0 -0\ncube 3 0 0 0 0 0\n").is_err());
    }

    #[test]
    fn dot_lists_crossings() {
        let (b, _) = grid_box(&[1, 1]).unwrap();
        let hs = hyperplanes(&b);
        let dot = hs.to_dot(&b);
        assert!(dot.contains("h0 -- h1;"));
        assert!(to_dot(&b).starts_with("graph complex {"));
    }
}
