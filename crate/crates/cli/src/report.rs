use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use fpcube::cube::to_text;
use fpcube::cubical::{
    build_long_wedge, build_necklace, check_cubical_cprime, check_properness_hypotheses, choose_subdivision,
    cone_piece_diameters_exact, proper_power_check, ConePieceDiameter, CubicalPresentation, ProperReport,
    SubdivisionChoice,
};
use fpcube::pieces::{check_classical_cprime, check_cstar, Ratio, StarReport};
use fpcube::presentation::Presentation;
use fpcube::snf::{abelianization, Abelianization};
use fpcube::wallspace::{
    antipodal_walls, b8_condition1_shape, b8_condition3_shape, dual_cube_complex, letter_wallspace,
    restrict_wallspace, DualSummary, FiniteWallspace, MAX_DUAL_WALLS,
};
use fpcube::word::FactorKind;
use serde::Serialize;

pub const REPORT_FORMAT: &str = "fpcube-report 1";

/// An exit code and the message printed with it.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }

    pub fn failed(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

#[derive(Serialize)]
pub struct Envelope<T> {
    pub format: &'static str,
    pub command: String,
    pub version: &'static str,
    pub timestamp_unix: Option<u64>,
    pub passed: bool,
    pub result: T,
}

impl<T> Envelope<T> {
    pub fn new(command: &str, timestamp: bool, passed: bool, result: T) -> Self {
        let timestamp_unix =
            timestamp.then(|| SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0));
        Envelope { format: REPORT_FORMAT, command: command.into(), version: env!("CARGO_PKG_VERSION"), timestamp_unix, passed, result }
    }
}

#[derive(Serialize)]
pub struct StarSummary {
    pub n: u64,
    pub passed: bool,
    pub worst_ratio: Ratio,
    pub worst_piece: Option<String>,
    pub worst_piece_syllables: Option<usize>,
    pub worst_piece_letters: Option<usize>,
    pub max_piece_per_relator: Vec<usize>,
    pub self_inverse_relators: Vec<usize>,
}

pub fn star(p: &Presentation, rep: &StarReport) -> StarSummary {
    StarSummary {
        n: rep.n,
        passed: rep.passed,
        worst_ratio: rep.worst_ratio,
        worst_piece: rep.worst_piece.as_ref().map(|w| w.word.display(&p.factors).to_string()),
        worst_piece_syllables: rep.worst_piece.as_ref().map(|w| w.syllable_length),
        worst_piece_letters: rep.worst_piece.as_ref().map(|w| w.letter_length),
        max_piece_per_relator: rep.max_piece_per_relator.clone(),
        self_inverse_relators: rep.self_inverse_relators.clone(),
    }
}

#[derive(Serialize)]
pub struct ConeSummary {
    pub relator: usize,
    pub q: u32,
    pub syllable_length: usize,
    pub letter_length: usize,
    pub systole: usize,
    /// `M_i`, the wall-piece bound.
    pub wall_piece_bound: usize,
    pub worst_cone_piece_bound: usize,
    pub achieved_alpha: Ratio,
    pub max_carrier_diameter: usize,
    pub antipodal_walls: Option<usize>,
    pub b8_condition1: bool,
    pub b8_condition3: bool,
    /// Necessary condition for a maximal cyclic subgroup only.
    pub not_a_proper_power: bool,
}

#[derive(Serialize)]
pub struct BuildReport {
    pub n: u64,
    pub q: u32,
    /// Present when `q` was chosen rather than given.
    pub subdivision: Option<SubdivisionChoice>,
    pub cubical_cprime: bool,
    pub cones: Vec<ConeSummary>,
    pub properness: ProperReport,
    /// Exact diameters beside the certified bounds (`--mode exact`).
    pub exact_piece_diameters: Option<Vec<ConePieceDiameter>>,
    /// One line per failed inequality or condition.
    pub failures: Vec<String>,
    pub passed: bool,
}

pub fn build(p: &Presentation, n: u64, q: Option<u32>, exact: bool) -> Result<BuildReport, Failure> {
    let star = check_cstar(p, n).map_err(Failure::from)?;
    if !star.passed {
        return Err(Failure::failed(format!(
            "not C'_*(1/{n}): piece ratio {}/{} is not below 1/{n}",
            star.worst_ratio.num, star.worst_ratio.den
        )));
    }
    let (q, subdivision) = match q {
        Some(q) => (q, None),
        None => {
            let c = choose_subdivision(p, n).map_err(Failure::from)?;
            (c.q, Some(c))
        }
    };
    let cp = CubicalPresentation::new(p, q).map_err(Failure::from)?;
    let cubical = check_cubical_cprime(&cp, n);
    let properness = check_properness_hypotheses(&cp, n);
    let cones: Vec<ConeSummary> = cp
        .cones
        .iter()
        .enumerate()
        .map(|(i, shape)| {
            let c = &cubical.cones[i];
            let len = shape.circle_length();
            ConeSummary {
                relator: i,
                q,
                syllable_length: shape.syllable_length(),
                letter_length: shape.letter_length(),
                systole: c.systole,
                wall_piece_bound: c.wall_piece_bound,
                worst_cone_piece_bound: c.worst_cone_piece_bound,
                achieved_alpha: c.achieved_alpha,
                max_carrier_diameter: properness.cones[i].max_carrier_diameter,
                antipodal_walls: (len % 2 == 0).then_some(len / 2),
                b8_condition1: b8_condition1_shape(shape),
                b8_condition3: b8_condition3_shape(shape),
                not_a_proper_power: proper_power_check(&p.relators[i]),
            }
        })
        .collect();
    let mut failures = Vec::new();
    for (c, cone) in cubical.cones.iter().zip(&cones) {
        let i = c.relator;
        if !c.cone_pieces_pass {
            failures.push(format!("cone {i}: {n} x cone-piece bound {} is not below systole {}", c.worst_cone_piece_bound, c.systole));
        }
        if !c.wall_pieces_pass {
            failures.push(format!("cone {i}: {n} x wall-piece bound {} is not below systole {}", c.wall_piece_bound, c.systole));
        }
        if !cone.b8_condition1 {
            failures.push(format!("cone {i}: an antipodal wall has crossing or osculating hyperplanes"));
        }
        if !cone.b8_condition3 {
            failures.push(format!("cone {i}: a symmetry does not preserve the walls"));
        }
    }
    for c in &properness.cones {
        failures.extend(c.failures.iter().map(|f| format!("cone {}: {}", c.relator, f.reason)));
    }
    let passed = failures.is_empty() && cubical.passed && properness.passed;
    Ok(BuildReport {
        n,
        q,
        subdivision,
        cubical_cprime: cubical.passed,
        cones,
        properness,
        exact_piece_diameters: exact.then(|| cone_piece_diameters_exact(&cp)),
        failures,
        passed,
    })
}

/// Writes the long wedge and every cone as complex files into `dir`.
pub fn write_complexes(p: &Presentation, q: u32, dir: &Path) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::input(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    let wedge = build_long_wedge(&p.factors, q).map_err(Failure::from)?;
    fs::write(dir.join("wedge.complex"), to_text(&wedge.complex)).map_err(io)?;
    for (i, r) in p.relators.iter().enumerate() {
        let y = build_necklace(r, &wedge).map_err(Failure::from)?;
        let rep = y.check_map(&wedge).map_err(Failure::from)?;
        if !rep.local_isometry {
            return Err(Failure::internal(format!("cone {i} does not map by a local isometry: {:?}", rep.violation)));
        }
        fs::write(dir.join(format!("cone-{i}.complex")), to_text(&y.complex)).map_err(io)?;
    }
    Ok(())
}

#[derive(Serialize)]
pub struct WallsSummary {
    pub walls: usize,
    pub pairwise_crossing: bool,
    pub crossing_pairs: usize,
    /// Computed when there are at most `MAX_DUAL_WALLS` walls.
    pub dual: Option<DualSummary>,
}

fn walls_summary(w: &FiniteWallspace) -> Result<WallsSummary, Failure> {
    let k = w.num_walls();
    let g = w.crossing_graph();
    let crossing_pairs = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).filter(|&(i, j)| g.adjacent(i, j)).count();
    let dual = if k <= MAX_DUAL_WALLS { Some(dual_cube_complex(w).map_err(Failure::from)?.summary()) } else { None };
    Ok(WallsSummary { walls: k, pairwise_crossing: 2 * crossing_pairs == k * k.saturating_sub(1), crossing_pairs, dual })
}

#[derive(Serialize)]
pub struct ConeDual {
    pub relator: usize,
    /// Walls of the letter edges, arcs contracted.
    pub letter: WallsSummary,
    /// Antipodal walls of the whole subdivided circle.
    pub subdivided: WallsSummary,
}

#[derive(Serialize)]
pub struct DualReport {
    pub q: u32,
    pub cones: Vec<ConeDual>,
    pub passed: bool,
}

fn cone_wallspaces(p: &Presentation, q: u32) -> Result<Vec<(FiniteWallspace, FiniteWallspace)>, Failure> {
    let wedge = build_long_wedge(&p.factors, q).map_err(Failure::from)?;
    p.relators
        .iter()
        .map(|r| {
            let letter = letter_wallspace(r, &p.factors).map_err(Failure::from)?;
            let y = build_necklace(r, &wedge).map_err(Failure::from)?;
            let walls = antipodal_walls(&y).map_err(Failure::from)?;
            Ok((letter, restrict_wallspace(&y, &walls).map_err(Failure::from)?))
        })
        .collect()
}

pub fn duals(p: &Presentation, q: u32) -> Result<DualReport, Failure> {
    let mut cones = Vec::new();
    for (i, (letter, full)) in cone_wallspaces(p, q)?.iter().enumerate() {
        cones.push(ConeDual { relator: i, letter: walls_summary(letter)?, subdivided: walls_summary(full)? });
    }
    let passed = cones
        .iter()
        .flat_map(|c| [&c.letter.dual, &c.subdivided.dual])
        .flatten()
        .all(|d| d.median.passed);
    Ok(DualReport { q, cones, passed })
}

pub fn duals_dot(p: &Presentation, q: u32) -> Result<String, Failure> {
    let mut out = String::new();
    for (i, (letter, full)) in cone_wallspaces(p, q)?.iter().enumerate() {
        for (tag, w) in [("letter", letter), ("walls", full)] {
            out.push_str(&w.crossing_graph().to_dot().replacen("graph crossing", &format!("graph cone{i}_{tag}"), 1));
        }
    }
    Ok(out)
}

#[derive(Serialize)]
pub struct FullReport {
    pub star: StarSummary,
    /// Only for free groups given by rank-1 free factors.
    pub classical: Option<StarSummary>,
    pub abelianization: Abelianization,
    pub not_a_proper_power: Vec<bool>,
    /// Absent when the presentation is not C'_*(1/n) or no cubical
    /// presentation could be built (see `build_error`).
    pub build: Option<BuildReport>,
    pub build_error: Option<String>,
    pub passed: bool,
}

pub fn full(p: &Presentation, n: u64, q: Option<u32>, exact: bool) -> Result<FullReport, Failure> {
    let star_rep = check_cstar(p, n).map_err(Failure::from)?;
    let free_group = p.factors.iter().all(|f| f.kind == FactorKind::Free && f.rank() == 1);
    let classical = if free_group { Some(star(p, &check_classical_cprime(p, n).map_err(Failure::from)?)) } else { None };
    let (build, build_error) = match star_rep.passed.then(|| build(p, n, q, exact)) {
        None => (None, None),
        Some(Ok(b)) => (Some(b), None),
        Some(Err(f)) if f.code == 1 => (None, Some(f.message)),
        Some(Err(f)) => return Err(f),
    };
    let passed = star_rep.passed && build.as_ref().is_some_and(|b| b.passed);
    Ok(FullReport {
        star: star(p, &star_rep),
        classical,
        abelianization: abelianization(p).map_err(Failure::from)?,
        not_a_proper_power: p.relators.iter().map(proper_power_check).collect(),
        build,
        build_error,
        passed,
    })
}
