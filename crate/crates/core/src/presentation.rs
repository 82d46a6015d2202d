//! Presentations over a free product and their text format.
//!
//! ```text
//! fpcube-presentation 1
//! factor A abelian 2 a b
//! factor C abelian 2 c d
//! relator a^1 c^1 a^2 c^2
//! ```
//!
//! Generator names after the rank are optional; when omitted they default
//! to `<name>1 .. <name><rank>`. Names must be unique across all factors.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};
use crate::word::{normalize, FPWord, FactorDescriptor, FactorKind, Syllable};

pub const PRESENTATION_HEADER: &str = "fpcube-presentation 1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub factors: Vec<FactorDescriptor>,
    pub relators: Vec<FPWord>,
}

impl Presentation {
    /// Validates factors and requires every relator to be nonempty and cyclically reduced.
    pub fn new(factors: Vec<FactorDescriptor>, relators: Vec<FPWord>) -> Result<Self> {
        let p = Presentation { factors, relators };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = HashMap::new();
        for (fi, f) in self.factors.iter().enumerate() {
            f.validate()?;
            for g in &f.generators {
                if let Some(prev) = seen.insert(g.clone(), fi) {
                    return Err(Error::BadFactor(format!(
                        "generator {g} declared in factors {prev} and {fi}"
                    )));
                }
            }
        }
        for (i, r) in self.relators.iter().enumerate() {
            if r.is_empty() {
                return Err(Error::Input(format!("relator {i} is trivial")));
            }
            if !r.is_cyclically_reduced() {
                return Err(Error::NotCyclicallyReduced { index: i });
            }
            for s in r.syllables() {
                let f = self.factors.get(s.factor).ok_or(Error::UnknownFactor(s.factor))?;
                f.check(&s.element).map_err(|reason| Error::BadElement {
                    factor: s.factor,
                    reason,
                })?;
            }
        }
        Ok(())
    }

    /// Looks up a generator name, returning (factor index, generator index).
    pub fn find_generator(&self, name: &str) -> Option<(usize, usize)> {
        self.factors.iter().enumerate().find_map(|(fi, f)| {
            f.generators.iter().position(|g| g == name).map(|gi| (fi, gi))
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, strip_comment(l).trim()))
            .filter(|(_, l)| !l.is_empty());

        match lines.next() {
            Some((_, h)) if h == PRESENTATION_HEADER => {}
            Some((ln, h)) => return Err(parse_err(ln, format!("expected header `{PRESENTATION_HEADER}`, found `{h}`"))),
            None => return Err(parse_err(1, "empty document")),
        }

        let mut factors: Vec<FactorDescriptor> = Vec::new();
        let mut names: HashMap<String, (usize, usize)> = HashMap::new();
        let mut relators = Vec::new();
        for (ln, line) in lines {
            let mut toks = line.split_whitespace();
            match toks.next() {
                Some("factor") => {
                    if !relators.is_empty() {
                        return Err(parse_err(ln, "factor declared after relators"));
                    }
                    let name = toks.next().ok_or_else(|| parse_err(ln, "missing factor name"))?;
                    if !is_identifier(name) {
                        return Err(parse_err(ln, format!("bad factor name `{name}`")));
                    }
                    if factors.iter().any(|f| f.name == name) {
                        return Err(parse_err(ln, format!("duplicate factor `{name}`")));
                    }
                    let kind = match toks.next() {
                        Some("free") => FactorKind::Free,
                        Some("abelian") => FactorKind::Abelian,
                        Some(k) => return Err(parse_err(ln, format!("unknown factor kind `{k}`"))),
                        None => return Err(parse_err(ln, "missing factor kind")),
                    };
                    let rank: usize = toks
                        .next()
                        .ok_or_else(|| parse_err(ln, "missing rank"))?
                        .parse()
                        .map_err(|_| parse_err(ln, "rank is not a nonnegative integer"))?;
                    if rank == 0 || rank > 64 {
                        return Err(parse_err(ln, "rank must lie in 1..=64"));
                    }
                    let gens: Vec<String> = toks.map(str::to_owned).collect();
                    let gens = if gens.is_empty() {
                        (1..=rank).map(|i| format!("{name}{i}")).collect()
                    } else if gens.len() != rank {
                        return Err(parse_err(ln, format!("{} generator names for rank {rank}", gens.len())));
                    } else {
                        gens
                    };
                    let fi = factors.len();
                    for (gi, g) in gens.iter().enumerate() {
                        if !is_identifier(g) {
                            return Err(parse_err(ln, format!("bad generator name `{g}`")));
                        }
                        if names.insert(g.clone(), (fi, gi)).is_some() {
                            return Err(parse_err(ln, format!("duplicate generator `{g}`")));
                        }
                    }
                    factors.push(FactorDescriptor { name: name.to_owned(), kind, generators: gens });
                }
                Some("relator") => {
                    let mut raw = Vec::new();
                    for tok in toks {
                        let (g, e) = tok
                            .split_once('^')
                            .ok_or_else(|| parse_err(ln, format!("syllable `{tok}` is not of the form g^e")))?;
                        let &(fi, gi) = names
                            .get(g)
                            .ok_or_else(|| parse_err(ln, format!("unknown generator `{g}`")))?;
                        let e: i64 = e
                            .parse()
                            .map_err(|_| parse_err(ln, format!("bad exponent in `{tok}`")))?;
                        if e == 0 || e.unsigned_abs() > 1_000_000 {
                            return Err(parse_err(ln, format!("exponent in `{tok}` must be nonzero and at most 10^6")));
                        }
                        raw.push(Syllable::new(fi, factors[fi].generator_power(gi, e)));
                    }
                    let w = normalize(&raw, &factors).map_err(|e| parse_err(ln, e.to_string()))?;
                    if w.is_empty() {
                        return Err(parse_err(ln, "relator reduces to the identity"));
                    }
                    if !w.is_cyclically_reduced() {
                        return Err(parse_err(ln, "relator is not cyclically reduced"));
                    }
                    relators.push(w);
                }
                Some(other) => return Err(parse_err(ln, format!("unknown directive `{other}`"))),
                None => unreachable!(),
            }
        }
        if factors.is_empty() {
            return Err(parse_err(1, "no factors declared"));
        }
        Ok(Presentation { factors, relators })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(PRESENTATION_HEADER);
        out.push('\n');
        for f in &self.factors {
            let _ = writeln!(out, "factor {} {} {} {}", f.name, f.kind, f.rank(), f.generators.join(" "));
        }
        for r in &self.relators {
            let _ = writeln!(out, "relator {}", r.display(&self.factors));
        }
        out
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// The two-torus presentation with relators `a^1 c^1 .. a^m c^m` and `b^1 d^1 .. b^m d^m`.
pub fn torus_example(m: usize) -> Presentation {
    let factors = vec![
        FactorDescriptor { name: "A".into(), kind: FactorKind::Abelian, generators: vec!["a".into(), "b".into()] },
        FactorDescriptor { name: "C".into(), kind: FactorKind::Abelian, generators: vec!["c".into(), "d".into()] },
    ];
    let relator = |g: usize| {
        let raw: Vec<Syllable> = (1..=m as i64)
            .flat_map(|i| {
                [
                    Syllable::new(0, factors[0].generator_power(g, i)),
                    Syllable::new(1, factors[1].generator_power(g, i)),
                ]
            })
            .collect();
        normalize(&raw, &factors).expect("well-formed syllables")
    };
    let relators = vec![relator(0), relator(1)];
    Presentation { factors, relators }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "fpcube-presentation 1\n# two tori\nfactor A abelian 2 a b\nfactor C abelian 2 c d\nrelator a^1 c^1 a^2 c^2\nrelator b^1 d^1 b^2 d^2\n";

    #[test]
    fn parses_example() {
        let p = Presentation::parse(EXAMPLE).unwrap();
        assert_eq!(p, torus_example(2));
        assert_eq!(Presentation::parse(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn default_generator_names() {
        let p = Presentation::parse("fpcube-presentation 1\nfactor X free 1\nfactor Y free 1\nrelator X1^1 Y1^5 X1^1 Y1^7\n").unwrap();
        assert_eq!(p.relators[0].syllable_length(), 4);
        assert_eq!(p.relators[0].letter_length(), 14);
    }

    #[test]
    fn rejects_duplicate_generator() {
        let err = Presentation::parse("fpcube-presentation 1\nfactor A abelian 2 a b\nfactor C free 1 a\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn rejects_bad_header_and_syntax() {
        assert!(Presentation::parse("factor A free 1 a\n").is_err());
        assert!(Presentation::parse("fpcube-presentation 1\nfactor A free 1 a\nrelator a\n").is_err());
        assert!(Presentation::parse("fpcube-presentation 1\nfactor A free 1 a\nrelator a^0\n").is_err());
        assert!(Presentation::parse("fpcube-presentation 1\nfactor A free 0\n").is_err());
        assert!(Presentation::parse("fpcube-presentation 1\nfactor A free 2 a\n").is_err());
    }

    #[test]
    fn rejects_non_cyclically_reduced() {
        let text = "fpcube-presentation 1\nfactor A free 1 a\nfactor B free 1 b\nrelator a^1 b^1 a^2\n";
        let err = Presentation::parse(text).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
    }
}
