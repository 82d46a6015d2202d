//! Pieces of presentations over free products and the C'_*(1/n) checks.
//!
//! The symmetrized relator set consists of every relator and its inverse,
//! read cyclically from every offset. Two kinds of weakly cyclically reduced
//! conjugates are compared:
//!
//! * rotations `h_k h_{k+1} .. h_{k-1}`;
//! * split rotations `b h_{k+1} .. h_{k-1} a` with `h_k = a b` and `a, b`
//!   nontrivial. The first syllable `b` ranges over the whole factor of
//!   `h_k`, so two split rotations whose split syllables share a factor
//!   agree on their first syllable for a suitable choice of `b`.
//!
//! A common prefix stops at the first pair of differing syllables. When
//! those syllables lie in the same factor the prefix may still end with a
//! common left divisor of both; that syllable is counted in full and the
//! record is marked `partial_tail`.
//!
//! Ratios are taken against the cyclically reduced syllable length of the
//! relator, which is the shortest weakly cyclically reduced conjugate.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::word::{normalize, FPWord, FactorElement, FactorKind, Letter, Syllable};

/// A nonnegative rational `num / den`, compared exactly.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        Ratio { num, den }
    }

    pub fn zero() -> Self {
        Ratio { num: 0, den: 1 }
    }

    /// `self < 1/n`
    pub fn below_inverse(&self, n: u64) -> bool {
        (self.num as u128) * (n as u128) < self.den as u128
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Ratio {}
impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        ((self.num as u128) * (other.den as u128)).cmp(&((other.num as u128) * (self.den as u128)))
    }
}

/// Where a piece occurs: a rotation (or split rotation) of a relator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Occurrence {
    pub relator: usize,
    pub inverted: bool,
    /// First syllable (or letter) of the rotation. For split rotations this
    /// is the syllable that was split.
    pub offset: usize,
    pub split: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceRecord {
    pub word: FPWord,
    pub syllable_length: usize,
    pub letter_length: usize,
    pub sources: [Occurrence; 2],
    pub partial_tail: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarReport {
    pub n: u64,
    pub passed: bool,
    pub worst_piece: Option<PieceRecord>,
    pub worst_ratio: Ratio,
    /// Longest piece (in the report's metric) meeting each relator.
    pub max_piece_per_relator: Vec<usize>,
    /// Relators having a rotation equal to a rotation of their own inverse;
    /// those full-length self matches are not counted as pieces.
    pub self_inverse_relators: Vec<usize>,
}

// ---------------------------------------------------------------------------
// Symbol-level engine shared by the syllable and letter metrics.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    seq: u32,
    off: u32,
}

#[derive(Clone, Copy, Debug)]
struct Hit {
    len: usize,
    partner: Pos,
    partial: bool,
}

struct Engine {
    /// Each sequence stored twice in a row so rotations are contiguous slices.
    doubled: Vec<Vec<u32>>,
    lens: Vec<usize>,
    /// Equivalence class of each symbol (its factor); symbol ids are ordered by class.
    class: Vec<u32>,
    /// Allow a final same-class partial symbol.
    partial: bool,
    /// Cap matches between two rotations of the same sequence at `len - 1`.
    self_cap: bool,
}

impl Engine {
    fn seq_count(&self) -> usize {
        self.lens.len()
    }

    fn rotation(&self, p: Pos) -> &[u32] {
        let n = self.lens[p.seq as usize];
        let s = p.off as usize;
        &self.doubled[p.seq as usize][s..s + n]
    }

    fn full_lcp(&self, a: Pos, b: Pos) -> usize {
        let (x, y) = (self.rotation(a), self.rotation(b));
        let m = x.len().min(y.len());
        x[..m].iter().zip(&y[..m]).position(|(p, q)| p != q).unwrap_or(m)
    }

    /// Extended common prefix, with relator-specific caps and exclusions.
    /// Returns `None` when the pair is excluded.
    fn piece(&self, a: Pos, b: Pos, exclude_self_inverse: &mut dyn FnMut(Pos, Pos) -> bool) -> Option<(usize, bool)> {
        let (x, y) = (self.rotation(a), self.rotation(b));
        let m = x.len().min(y.len());
        let t = x[..m].iter().zip(&y[..m]).position(|(p, q)| p != q).unwrap_or(m);
        if t == m && exclude_self_inverse(a, b) {
            return None;
        }
        let (mut len, mut partial) = if t < m && self.partial && self.class[x[t] as usize] == self.class[y[t] as usize] {
            (t + 1, true)
        } else {
            (t, false)
        };
        if self.self_cap && a.seq == b.seq && len >= self.lens[a.seq as usize] {
            len = self.lens[a.seq as usize] - 1;
            partial = false;
        }
        Some((len, partial))
    }

    fn cmp_rot(&self, a: Pos, b: Pos) -> Ordering {
        let (x, y) = (self.rotation(a), self.rotation(b));
        let m = x.len().min(y.len());
        x[..m]
            .cmp(&y[..m])
            .then(x.len().cmp(&y.len()))
            .then((a.seq, a.off).cmp(&(b.seq, b.off)))
    }

    /// For each position in `positions`, the best partner within the same group.
    fn best_partners(
        &self,
        mut positions: Vec<(u32, Pos)>,
        exclude_self_inverse: &mut dyn FnMut(Pos, Pos) -> bool,
    ) -> Vec<(Pos, Option<Hit>)> {
        positions.sort_by(|(ga, a), (gb, b)| ga.cmp(gb).then_with(|| self.cmp_rot(*a, *b)));
        let k = positions.len();
        let adj: Vec<usize> = (0..k.saturating_sub(1))
            .map(|i| {
                if positions[i].0 != positions[i + 1].0 {
                    0
                } else {
                    self.full_lcp(positions[i].1, positions[i + 1].1)
                }
            })
            .collect();
        let bonus = usize::from(self.partial);
        let mut out = Vec::with_capacity(k);
        for i in 0..k {
            let (group, u) = positions[i];
            let mut best: Option<Hit> = None;
            for dir in [-1i64, 1] {
                let mut m = usize::MAX;
                let mut j = i as i64;
                loop {
                    j += dir;
                    if j < 0 || j >= k as i64 {
                        break;
                    }
                    let ju = j as usize;
                    if positions[ju].0 != group {
                        break;
                    }
                    let edge = if dir < 0 { ju } else { ju - 1 };
                    m = m.min(adj[edge]);
                    let cur = best.map_or(0, |h| h.len);
                    if best.is_some() && m + bonus <= cur {
                        break;
                    }
                    let v = positions[ju].1;
                    if let Some((len, partial)) = self.piece(u, v, exclude_self_inverse) {
                        if best.is_none_or(|h| len > h.len) {
                            best = Some(Hit { len, partner: v, partial });
                        }
                    }
                    if m == 0 {
                        // later entries start with a symbol of a larger class
                        break;
                    }
                }
            }
            out.push((u, best));
        }
        out
    }
}

/// Raw per-position results of the symbol engine.
struct Scan {
    /// (position, hit, split) for every position and kind.
    hits: Vec<(Pos, Hit, bool)>,
    self_inverse: Vec<usize>,
}

/// Sequences are indexed `2 * relator + inverted`.
fn run_engine(engine: &Engine, with_split: bool) -> Scan {
    let mut self_inverse = Vec::new();
    let lens = engine.lens.clone();
    let mut excl = |a: Pos, b: Pos| -> bool {
        let (ra, rb) = (a.seq / 2, b.seq / 2);
        if ra == rb && a.seq != b.seq && lens[a.seq as usize] == lens[b.seq as usize] {
            self_inverse.push(ra as usize);
            true
        } else {
            false
        }
    };
    let mut hits = Vec::new();
    let all: Vec<(u32, Pos)> = (0..engine.seq_count())
        .flat_map(|s| (0..engine.lens[s]).map(move |o| (0u32, Pos { seq: s as u32, off: o as u32 })))
        .collect();
    for (u, h) in engine.best_partners(all, &mut excl) {
        if let Some(h) = h {
            hits.push((u, h, false));
        }
    }
    if with_split {
        // A split at offset k is compared through the rotation starting at k + 1,
        // grouped by the factor of the split syllable.
        let split: Vec<(u32, Pos)> = (0..engine.seq_count())
            .filter(|&s| engine.lens[s] >= 2)
            .flat_map(|s| {
                let n = engine.lens[s];
                (0..n).map(move |k| (s, k, n))
            })
            .map(|(s, k, n)| {
                let prev = engine.doubled[s][k];
                (engine.class[prev as usize] + 1, Pos { seq: s as u32, off: ((k + 1) % n) as u32 })
            })
            .collect();
        for (u, h) in engine.best_partners(split, &mut excl) {
            if let Some(h) = h {
                hits.push((u, Hit { len: h.len + 1, ..h }, true));
            }
        }
    }
    self_inverse.sort_unstable();
    self_inverse.dedup();
    Scan { hits, self_inverse }
}

// ---------------------------------------------------------------------------
// Syllable metric.

struct SyllableTables {
    engine: Engine,
    symbols: Vec<Syllable>,
}

fn syllable_tables(p: &Presentation) -> SyllableTables {
    let mut distinct: Vec<Syllable> = p
        .relators
        .iter()
        .flat_map(|r| r.syllables().iter().flat_map(|s| [s.clone(), s.inverse()]))
        .collect();
    distinct.sort();
    distinct.dedup();
    let ids: HashMap<&Syllable, u32> = distinct.iter().enumerate().map(|(i, s)| (s, i as u32)).collect();
    let mut doubled = Vec::with_capacity(2 * p.relators.len());
    let mut lens = Vec::with_capacity(2 * p.relators.len());
    for r in &p.relators {
        for w in [r.clone(), r.inverse()] {
            let mut seq: Vec<u32> = w.syllables().iter().map(|s| ids[s]).collect();
            lens.push(seq.len());
            seq.extend_from_within(..);
            doubled.push(seq);
        }
    }
    let class = distinct.iter().map(|s| s.factor as u32).collect();
    SyllableTables {
        engine: Engine { doubled, lens, class, partial: true, self_cap: false },
        symbols: distinct,
    }
}

fn occurrence(p: Pos, split: bool, lens: &[usize]) -> Occurrence {
    let n = lens[p.seq as usize];
    let offset = if split { (p.off as usize + n - 1) % n } else { p.off as usize };
    Occurrence { relator: (p.seq / 2) as usize, inverted: p.seq % 2 == 1, offset, split }
}

/// Some element of the same factor as `h` different from both `h` and `other`.
fn free_choice(h: &FactorElement, other: &FactorElement) -> FactorElement {
    (2..)
        .map(|e| h.pow(e))
        .find(|b| b != h && b != other)
        .expect("infinite order element")
}

fn materialize_syllable_piece(t: &SyllableTables, u: Pos, hit: &Hit, split: bool) -> PieceRecord {
    let e = &t.engine;
    let rot = e.rotation(u);
    let mut syl: Vec<Syllable> = Vec::with_capacity(hit.len);
    let body_len = if split { hit.len - 1 } else { hit.len };
    if split {
        let prev = |p: Pos| {
            let n = e.lens[p.seq as usize];
            &t.symbols[e.doubled[p.seq as usize][(p.off as usize + n - 1) % n] as usize]
        };
        let h_u = prev(u);
        let h_v = prev(hit.partner);
        syl.push(Syllable::new(h_u.factor, free_choice(&h_u.element, &h_v.element)));
    }
    syl.extend(rot[..body_len].iter().map(|&id| t.symbols[id as usize].clone()));
    let word = FPWord::from_normal(syl);
    PieceRecord {
        syllable_length: hit.len,
        letter_length: word.letter_length(),
        word,
        sources: [occurrence(u, split, &e.lens), occurrence(hit.partner, split, &e.lens)],
        partial_tail: hit.partial,
    }
}

/// Maximal pieces of the symmetrized relator set, one per occurrence that
/// meets another occurrence in at least one syllable.
pub fn enumerate_pieces(p: &Presentation) -> Vec<PieceRecord> {
    let t = syllable_tables(p);
    let scan = run_engine(&t.engine, true);
    let mut out: Vec<PieceRecord> = scan
        .hits
        .iter()
        .filter(|(_, h, _)| h.len > 0)
        .map(|(u, h, split)| materialize_syllable_piece(&t, *u, h, *split))
        .collect();
    out.sort_by_key(|a| a.sources);
    out
}

/// Shape of a maximal piece: the two relators it lies in, its syllable
/// length, and whether its last syllable is only partly shared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PieceProfile {
    pub relators: [usize; 2],
    pub syllable_length: usize,
    pub partial_tail: bool,
}

/// Distinct piece profiles, sorted; cheaper than `enumerate_pieces`.
pub fn piece_profiles(p: &Presentation) -> Vec<PieceProfile> {
    let t = syllable_tables(p);
    let scan = run_engine(&t.engine, true);
    let mut out: Vec<PieceProfile> = scan
        .hits
        .iter()
        .filter(|(_, h, _)| h.len > 0)
        .map(|(u, h, _)| PieceProfile {
            relators: [(u.seq / 2) as usize, (h.partner.seq / 2) as usize],
            syllable_length: h.len,
            partial_tail: h.partial,
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Longest piece per relator in syllables, without materializing words.
pub fn max_piece_lengths(p: &Presentation) -> Vec<usize> {
    let t = syllable_tables(p);
    let scan = run_engine(&t.engine, true);
    let mut best = vec![0usize; p.relators.len()];
    for (u, h, _) in &scan.hits {
        let r = (u.seq / 2) as usize;
        best[r] = best[r].max(h.len);
    }
    best
}

fn worst_of<'a>(
    hits: impl Iterator<Item = &'a (Pos, Hit, bool)>,
    lens: &[usize],
) -> Option<(Ratio, Occurrence, &'a (Pos, Hit, bool))> {
    let mut worst: Option<(Ratio, Occurrence, &(Pos, Hit, bool))> = None;
    for item in hits {
        let (u, h, split) = item;
        let ratio = Ratio::new(h.len as u64, lens[u.seq as usize] as u64);
        let occ = occurrence(*u, *split, lens);
        let better = match &worst {
            None => true,
            Some((r, o, _)) => ratio > *r || (ratio == *r && (occ.relator, occ.offset, occ.inverted, occ.split) < (o.relator, o.offset, o.inverted, o.split)),
        };
        if better {
            worst = Some((ratio, occ, item));
        }
    }
    worst
}

/// C'_*(1/n): every piece is shorter than 1/n of the relator it lies in.
pub fn check_cstar(p: &Presentation, n: u64) -> Result<StarReport> {
    if n < 2 {
        return Err(Error::Precondition(format!("denominator n = {n} must be at least 2")));
    }
    let t = syllable_tables(p);
    let scan = run_engine(&t.engine, true);
    let mut per_relator = vec![0usize; p.relators.len()];
    for (u, h, _) in &scan.hits {
        let r = (u.seq / 2) as usize;
        per_relator[r] = per_relator[r].max(h.len);
    }
    let worst = worst_of(scan.hits.iter().filter(|(_, h, _)| h.len > 0), &t.engine.lens);
    let (worst_ratio, worst_piece) = match worst {
        Some((r, _, (u, h, split))) => (r, Some(materialize_syllable_piece(&t, *u, h, *split))),
        None => (Ratio::zero(), None),
    };
    Ok(StarReport {
        n,
        passed: worst_ratio.below_inverse(n),
        worst_piece,
        worst_ratio,
        max_piece_per_relator: per_relator,
        self_inverse_relators: scan.self_inverse,
    })
}

// ---------------------------------------------------------------------------
// Letter metric over a free group presented as a free product of rank-1 free factors.

/// Classical C'(1/n) in the letter metric.
///
/// Every factor must be free of rank 1. A piece is a maximal common prefix
/// of two distinct cyclic occurrences in the symmetrized set; two rotations
/// of the same relator share at most `|R| - 1` letters.
pub fn check_classical_cprime(p: &Presentation, n: u64) -> Result<StarReport> {
    if n < 2 {
        return Err(Error::Precondition(format!("denominator n = {n} must be at least 2")));
    }
    for (i, f) in p.factors.iter().enumerate() {
        if f.kind != FactorKind::Free || f.rank() != 1 {
            return Err(Error::Input(format!(
                "factor {i} ({}) is not free of rank 1; the letter metric needs a free group",
                f.name
            )));
        }
    }
    // letter (factor g, sign) -> id 2g or 2g+1; every letter is its own class
    let letters = |w: &FPWord| -> Vec<u32> {
        w.syllables()
            .iter()
            .flat_map(|s| match &s.element {
                FactorElement::Free(ls) => ls.iter().map(|l| 2 * s.factor as u32 + u32::from(l.is_inverse())).collect::<Vec<_>>(),
                FactorElement::Abelian(_) => unreachable!("checked above"),
            })
            .collect()
    };
    let mut doubled = Vec::new();
    let mut lens = Vec::new();
    for r in &p.relators {
        for w in [r.clone(), r.inverse()] {
            let mut seq = letters(&w);
            lens.push(seq.len());
            seq.extend_from_within(..);
            doubled.push(seq);
        }
    }
    let class = (0..2 * p.factors.len() as u32).collect();
    let engine = Engine { doubled, lens, class, partial: false, self_cap: true };
    let scan = run_engine(&engine, false);
    let mut per_relator = vec![0usize; p.relators.len()];
    for (u, h, _) in &scan.hits {
        let r = (u.seq / 2) as usize;
        per_relator[r] = per_relator[r].max(h.len);
    }
    let worst = worst_of(scan.hits.iter().filter(|(_, h, _)| h.len > 0), &engine.lens);
    let (worst_ratio, worst_piece) = match worst {
        Some((r, occ, (u, h, _))) => {
            let rot = engine.rotation(*u);
            let raw: Vec<Syllable> = rot[..h.len]
                .iter()
                .map(|&id| Syllable::new((id / 2) as usize, FactorElement::Free(vec![Letter::new(0, id % 2 == 1)])))
                .collect();
            let word = normalize(&raw, &p.factors)?;
            let record = PieceRecord {
                syllable_length: word.syllable_length(),
                letter_length: h.len,
                word,
                sources: [occ, occurrence(h.partner, false, &engine.lens)],
                partial_tail: false,
            };
            (r, Some(record))
        }
        None => (Ratio::zero(), None),
    };
    Ok(StarReport {
        n,
        passed: worst_ratio.below_inverse(n),
        worst_piece,
        worst_ratio,
        max_piece_per_relator: per_relator,
        self_inverse_relators: scan.self_inverse,
    })
}
