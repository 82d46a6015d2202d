//! Text format:
//!
//! ```text
//! fpcube-wallspace 1
//! points 4
//! wall ++--     # one sign per point, `+` on the left side
//! wall +-+-
//! ```

use std::fmt::Write as _;

use super::FiniteWallspace;
use crate::error::{parse_err, Result};

pub const WALLSPACE_HEADER: &str = "fpcube-wallspace 1";

const MAX_POINTS: usize = 1 << 16;
const MAX_WALLS: usize = 1 << 12;

impl FiniteWallspace {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{WALLSPACE_HEADER}");
        let _ = writeln!(out, "points {}", self.num_points());
        for w in 0..self.num_walls() {
            let signs: String = (0..self.num_points()).map(|p| if self.is_left(w, p) { '+' } else { '-' }).collect();
            let _ = writeln!(out, "wall {signs}");
        }
        out
    }
}

pub fn parse_wallspace(text: &str) -> Result<FiniteWallspace> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, h)) if h == WALLSPACE_HEADER => {}
        Some((ln, h)) => return Err(parse_err(ln, format!("expected header `{WALLSPACE_HEADER}`, found `{h}`"))),
        None => return Err(parse_err(1, "empty document")),
    }
    let (ln, line) = lines.next().ok_or_else(|| parse_err(1, "missing `points` line"))?;
    let mut toks = line.split_whitespace();
    if toks.next() != Some("points") {
        return Err(parse_err(ln, "expected `points N`"));
    }
    let points: usize = toks
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err(ln, "bad point count"))?;
    if toks.next().is_some() {
        return Err(parse_err(ln, "trailing tokens"));
    }
    if points == 0 || points > MAX_POINTS {
        return Err(parse_err(ln, format!("point count must be in 1..={MAX_POINTS}")));
    }
    let mut sides = Vec::new();
    let mut last = ln;
    for (ln, line) in lines {
        last = ln;
        let mut toks = line.split_whitespace();
        if toks.next() != Some("wall") {
            return Err(parse_err(ln, "expected `wall`"));
        }
        let signs = toks.next().ok_or_else(|| parse_err(ln, "missing signs"))?;
        if toks.next().is_some() {
            return Err(parse_err(ln, "trailing tokens"));
        }
        if signs.len() != points {
            return Err(parse_err(ln, format!("{} signs for {points} points", signs.len())));
        }
        let side = signs
            .chars()
            .map(|c| match c {
                '+' => Ok(true),
                '-' => Ok(false),
                _ => Err(parse_err(ln, format!("bad sign `{c}`"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        sides.push(side);
        if sides.len() > MAX_WALLS {
            return Err(parse_err(ln, "too many walls"));
        }
    }
    FiniteWallspace::from_sides(points, &sides).map_err(|e| parse_err(last, e.to_string()))
}
