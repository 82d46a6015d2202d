//! Cubical presentations over a long wedge: necklace cones, piece bounds,
//! the choice of subdivision, and the hypotheses of the properness theorem.

mod necklace;
mod properness;

pub use necklace::{
    build_long_wedge, build_necklace, letter_necklace, BlockPlacement, BlockShape, Hull, LongWedge, Necklace,
    NecklaceShape, MAX_TORUS_RANK,
};
pub use properness::{
    check_properness_hypotheses, check_properness_materialized, ConeProperness, HyperplaneFailure, ProperReport,
};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cube::systole_circle_retract;
use crate::error::{Error, Result};
use crate::pieces::{check_cstar, piece_profiles, PieceProfile, Ratio};
use crate::presentation::Presentation;
use crate::wallspace::{b8_condition1_shape, b8_condition3_shape};
use crate::word::{FPWord, FactorDescriptor, FactorElement};

/// The cones of a presentation at subdivision `q`, kept as shapes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicalPresentation {
    pub presentation: Presentation,
    pub q: u32,
    pub cones: Vec<NecklaceShape>,
    /// Distinct piece profiles (independent of `q`).
    pub pieces: Vec<PieceProfile>,
}

impl CubicalPresentation {
    pub fn new(p: &Presentation, q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::Input("subdivision q must be at least 1".into()));
        }
        p.validate()?;
        let cones = p.relators.iter().map(|r| NecklaceShape::new(r, q)).collect::<Result<Vec<_>>>()?;
        Ok(CubicalPresentation { presentation: p.clone(), q, cones, pieces: piece_profiles(p) })
    }

    /// Same cones and pieces at another subdivision.
    pub fn with_q(&self, q: u32) -> Self {
        let mut c = self.clone();
        c.q = q;
        c.cones.iter_mut().for_each(|s| s.q = q);
        c
    }
}

/// `ℓ′`: arm segments (each `q` edges) a piece of `ℓ` syllables can run
/// along. Between consecutive blocks it crosses a whole arc (two segments);
/// at its start it can share the segment entering the first block, and at a
/// full last syllable the segment leaving it. A partial last syllable means
/// the following blocks already differ, so nothing more is shared there.
pub fn arm_segments(syllable_length: usize, partial_tail: bool) -> usize {
    2 * (syllable_length - 1) + 1 + usize::from(!partial_tail)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConePieceDiameter {
    pub relator: usize,
    pub other_relator: usize,
    pub syllable_length: usize,
    pub arm_segments: usize,
    /// `ℓ M_i + q ℓ′`.
    pub bound: usize,
    /// Realized diameter of one-syllable pieces that share a whole block:
    /// the block's letter length plus its two arm segments. `None` otherwise.
    pub exact: Option<usize>,
}

/// Diameter bounds for every cone-piece, reported once per cone it meets.
pub fn cone_piece_diameters(cp: &CubicalPresentation) -> Vec<ConePieceDiameter> {
    let q = cp.q as usize;
    let mut out = Vec::new();
    for pr in &cp.pieces {
        let l = pr.syllable_length;
        let lp = arm_segments(l, pr.partial_tail);
        debug_assert!(lp <= 2 * l);
        let mut rels = pr.relators.to_vec();
        rels.dedup();
        for (k, &r) in rels.iter().enumerate() {
            let m = cp.cones[r].max_block_diameter();
            out.push(ConePieceDiameter {
                relator: r,
                other_relator: pr.relators[if rels.len() == 1 { 0 } else { 1 - k }],
                syllable_length: l,
                arm_segments: lp,
                bound: l * m + q * lp,
                exact: None,
            });
        }
    }
    out
}

/// Refines `cone_piece_diameters` with exact values for one-syllable pieces,
/// which needs the piece words.
pub fn cone_piece_diameters_exact(cp: &CubicalPresentation) -> Vec<ConePieceDiameter> {
    let q = cp.q as usize;
    let mut out = Vec::new();
    for rec in crate::pieces::enumerate_pieces(&cp.presentation) {
        let l = rec.syllable_length;
        let lp = arm_segments(l, rec.partial_tail);
        let exact = (l == 1 && !rec.partial_tail && !rec.sources.iter().any(|s| s.split))
            .then(|| rec.letter_length + q * lp);
        let mut rels = vec![rec.sources[0].relator, rec.sources[1].relator];
        rels.dedup();
        for (k, &r) in rels.iter().enumerate() {
            let m = cp.cones[r].max_block_diameter();
            out.push(ConePieceDiameter {
                relator: r,
                other_relator: rec.sources[if rels.len() == 1 { 0 } else { 1 - k }].relator,
                syllable_length: l,
                arm_segments: lp,
                bound: l * m + q * lp,
                exact,
            });
        }
    }
    out
}

/// `M_i`: wall-pieces lie in a single block, so the largest block diameter bounds them.
pub fn wall_piece_bound(shape: &NecklaceShape) -> usize {
    shape.max_block_diameter()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeReport {
    pub relator: usize,
    pub systole: usize,
    pub wall_piece_bound: usize,
    pub worst_cone_piece_bound: usize,
    /// Largest bound over diameter divided by systole.
    pub achieved_alpha: Ratio,
    pub cone_pieces_pass: bool,
    pub wall_pieces_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicalReport {
    /// The condition checked is C'(1/n).
    pub n: u64,
    pub q: u32,
    pub cones: Vec<ConeReport>,
    pub achieved_alpha: Ratio,
    pub passed: bool,
}

/// Worst `(ℓ, ℓ′)` pairs per cone (every pair that is not dominated).
fn piece_shapes_per_cone(cp: &CubicalPresentation) -> Vec<Vec<(usize, usize)>> {
    let mut per: Vec<BTreeSet<(usize, usize)>> = vec![BTreeSet::new(); cp.cones.len()];
    for pr in &cp.pieces {
        let lp = arm_segments(pr.syllable_length, pr.partial_tail);
        for &r in &pr.relators {
            per[r].insert((pr.syllable_length, lp));
        }
    }
    per.into_iter()
        .map(|set| {
            let all: Vec<_> = set.into_iter().collect();
            all.iter()
                .filter(|&&(l, lp)| !all.iter().any(|&(l2, lp2)| (l2, lp2) != (l, lp) && l2 >= l && lp2 >= lp))
                .copied()
                .collect()
        })
        .collect()
}

/// C'(1/n) for the cubical presentation: every cone-piece bound and the
/// wall-piece bound stay strictly below `sys(Y_i) / n`.
pub fn check_cubical_cprime(cp: &CubicalPresentation, n: u64) -> CubicalReport {
    let shapes = piece_shapes_per_cone(cp);
    let q = cp.q as usize;
    let mut cones = Vec::new();
    let mut worst = Ratio::zero();
    for (i, cone) in cp.cones.iter().enumerate() {
        let sys = cone.systole();
        let m = wall_piece_bound(cone);
        let cone_bound = shapes[i].iter().map(|&(l, lp)| l * m + q * lp).max().unwrap_or(0);
        let alpha = Ratio::new(cone_bound.max(m) as u64, sys as u64);
        worst = worst.max(alpha);
        cones.push(ConeReport {
            relator: i,
            systole: sys,
            wall_piece_bound: m,
            worst_cone_piece_bound: cone_bound,
            achieved_alpha: alpha,
            cone_pieces_pass: (n as u128) * (cone_bound as u128) < sys as u128,
            wall_pieces_pass: (n as u128) * (m as u128) < sys as u128,
        });
    }
    let passed = cones.iter().all(|c| c.cone_pieces_pass && c.wall_pieces_pass);
    CubicalReport { n, q: cp.q, cones, achieved_alpha: worst, passed }
}

/// Every check `choose_subdivision` requires, at one `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionChecks {
    pub q: u32,
    pub cubical_cprime: bool,
    pub carrier_diameter: bool,
    pub b8_condition1: bool,
    pub b8_condition3: bool,
}

impl SubdivisionChecks {
    pub fn all_pass(&self) -> bool {
        self.cubical_cprime && self.carrier_diameter && self.b8_condition1 && self.b8_condition3
    }

    pub fn failing(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.cubical_cprime {
            out.push("cubical C'(1/n)");
        }
        if !self.carrier_diameter {
            out.push("carrier diameter");
        }
        if !self.b8_condition1 {
            out.push("B(8)(1)");
        }
        if !self.b8_condition3 {
            out.push("B(8)(3)");
        }
        out
    }
}

pub fn subdivision_checks(cp: &CubicalPresentation, n: u64) -> SubdivisionChecks {
    let carrier = check_properness_hypotheses(cp, n).cones.iter().all(|c| c.carrier_diameter_pass);
    SubdivisionChecks {
        q: cp.q,
        cubical_cprime: check_cubical_cprime(cp, n).passed,
        carrier_diameter: carrier,
        b8_condition1: cp.cones.iter().all(b8_condition1_shape),
        b8_condition3: cp.cones.iter().all(b8_condition3_shape),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionChoice {
    pub q: u32,
    /// Smallest `q` meeting the linear inequalities alone.
    pub linear_q: u32,
    /// `n · max M_i + 1`, the sufficient subdivision from the existence argument.
    pub sufficient_q: u64,
    pub checks: SubdivisionChecks,
    /// The checks at `q - 1` (absent when `q = 1`); at least one fails.
    pub previous: Option<SubdivisionChecks>,
}

/// Smallest `q` with `n · bound < sys(Y_i′) = |R_i| + 2 |R_i|_* q` for `bound` =
/// `c0 + c1 q` (so `q (2 |R_i|_* - n c1) > n c0 - |R_i|`).
fn least_q(n: u64, c0: usize, c1: usize, shape: &NecklaceShape) -> Result<u64> {
    let slope = 2 * shape.syllable_length() as i128 - n as i128 * c1 as i128;
    let rhs = n as i128 * c0 as i128 - shape.letter_length() as i128;
    if slope <= 0 {
        return if rhs < 0 {
            Ok(1)
        } else {
            Err(Error::Generation("no subdivision makes the pieces small enough".into()))
        };
    }
    Ok(if rhs < 0 { 1 } else { (rhs / slope + 1).max(1) as u64 })
}

/// Upper end of the search above the linear bound.
const SUBDIVISION_SEARCH: u32 = 4096;

/// The least `q` at which the cubical presentation passes C'(1/n), the
/// carrier-diameter hypothesis, and B(8) conditions (1) and (3).
///
/// All diameter inequalities are linear in `q`, so their joint minimum is
/// solved exactly; the structural conditions are then checked from there
/// upwards.
pub fn choose_subdivision(p: &Presentation, n: u64) -> Result<SubdivisionChoice> {
    let star = check_cstar(p, n)?;
    if !star.passed {
        return Err(Error::Precondition(format!(
            "presentation is not C'_*(1/{n}): piece ratio {}/{}",
            star.worst_ratio.num, star.worst_ratio.den
        )));
    }
    let base = CubicalPresentation::new(p, 1)?;
    // arcs add an even number of edges, so an odd circle stays odd
    if let Some(i) = base.cones.iter().position(|c| c.letter_length() % 2 == 1) {
        return Err(Error::Generation(format!("relator {i} has odd length; no subdivision gives antipodal walls")));
    }
    let shapes = piece_shapes_per_cone(&base);
    let carriers = check_properness_hypotheses(&base, n);
    let mut linear: u64 = 1;
    for (i, cone) in base.cones.iter().enumerate() {
        let m = cone.max_block_diameter();
        linear = linear.max(least_q(n, m, 0, cone)?);
        linear = linear.max(least_q(n, carriers.cones[i].max_carrier_diameter, 0, cone)?);
        for &(l, lp) in &shapes[i] {
            linear = linear.max(least_q(n, l * m, lp, cone)?);
        }
    }
    let linear = u32::try_from(linear).map_err(|_| Error::Resource(format!("subdivision {linear} too large")))?;
    let mut q = linear;
    let checks = loop {
        let c = subdivision_checks(&base.with_q(q), n);
        if c.all_pass() {
            break c;
        }
        if q >= linear.saturating_add(SUBDIVISION_SEARCH) {
            return Err(Error::Generation(format!(
                "no subdivision in {linear}..={q} passes: {}",
                c.failing().join(", ")
            )));
        }
        q += 1;
    };
    let previous = (q > 1).then(|| subdivision_checks(&base.with_q(q - 1), n));
    if let Some(prev) = &previous {
        if prev.all_pass() {
            return Err(Error::Internal(format!("q = {} also passes; search is not minimal", q - 1)));
        }
    }
    let max_m = base.cones.iter().map(NecklaceShape::max_block_diameter).max().unwrap_or(0) as u64;
    Ok(SubdivisionChoice { q, linear_q: linear, sufficient_q: n * max_m + 1, checks, previous })
}

/// Systole of the `q`-subdivided necklace by search, checked against the
/// subdivision formula `sys(Y) + 2 |R|_* (q - 1)`.
pub fn systole_of_necklace(r: &FPWord, factors: &[FactorDescriptor], q: u32) -> Result<usize> {
    let at = |q: u32| -> Result<usize> {
        let w = build_long_wedge(factors, q)?;
        let y = build_necklace(r, &w)?;
        systole_circle_retract(&y.complex, &y.labeling)
    };
    let base = at(1)?;
    let sys = if q == 1 { base } else { at(q)? };
    let formula = base + 2 * r.syllable_length() * (q as usize - 1);
    if sys != formula {
        return Err(Error::Internal(format!("systole {sys} at q = {q} differs from formula value {formula}")));
    }
    Ok(sys)
}

/// Not a proper power, decided on the cyclic syllable sequence (and, for a
/// single syllable, inside its factor). A necessary condition for the
/// relator to generate a maximal cyclic subgroup.
pub fn proper_power_check(r: &FPWord) -> bool {
    let s = r.syllables();
    match s.len() {
        0 => false,
        1 => match &s[0].element {
            FactorElement::Abelian(v) => v.iter().fold(0u64, |g, &x| gcd(g, x.unsigned_abs())) == 1,
            FactorElement::Free(w) => {
                let mut w: &[crate::word::Letter] = w;
                while w.len() >= 2 && w[0] == w[w.len() - 1].inverse() {
                    w = &w[1..w.len() - 1];
                }
                minimal_period(w) == w.len()
            }
        },
        n => minimal_period(s) == n,
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Least rotation (in blocks) carrying the block sequence to itself.
pub fn minimal_period_of_blocks(shape: &NecklaceShape) -> usize {
    minimal_period(&shape.blocks)
}

/// Least `p` dividing `len` with `s` invariant under rotation by `p`.
pub(crate) fn minimal_period<T: PartialEq>(s: &[T]) -> usize {
    let n = s.len();
    (1..=n).find(|&p| n.is_multiple_of(p) && (0..n).all(|i| s[i] == s[(i + p) % n])).unwrap_or(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::torus_example;

    #[test]
    fn proper_powers() {
        let p = Presentation::parse(
            "fpcube-presentation 1\nfactor A abelian 2 a b\nfactor C abelian 2 c d\nfactor F free 1 x\n\
             relator a^1 c^1 a^1 c^1\nrelator a^1 c^1 a^2 c^2\nrelator a^2\nrelator x^4\nrelator a^2 b^3\n",
        )
        .unwrap();
        let got: Vec<bool> = p.relators.iter().map(proper_power_check).collect();
        assert_eq!(got, vec![false, true, false, false, true]);
    }

    #[test]
    fn segments_within_twice_syllables() {
        for l in 1..20 {
            for partial in [false, true] {
                assert!(arm_segments(l, partial) <= 2 * l);
            }
        }
    }

    #[test]
    fn example_q1_fails() {
        let cp = CubicalPresentation::new(&torus_example(21), 1).unwrap();
        let rep = check_cubical_cprime(&cp, 20);
        assert!(!rep.passed);
        assert_eq!(rep.cones[0].wall_piece_bound, 21);
    }
}
