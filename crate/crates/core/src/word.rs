//! Normal forms over a free product of free and free-abelian factors.
//!
//! A word is stored as its normal form: a sequence of syllables, each a
//! nontrivial element of one factor, with consecutive syllables in
//! different factors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorKind {
    Free,
    Abelian,
}

impl fmt::Display for FactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorKind::Free => f.write_str("free"),
            FactorKind::Abelian => f.write_str("abelian"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDescriptor {
    pub name: String,
    pub kind: FactorKind,
    pub generators: Vec<String>,
}

impl FactorDescriptor {
    pub fn new(name: impl Into<String>, kind: FactorKind, generators: Vec<String>) -> Result<Self> {
        let d = FactorDescriptor {
            name: name.into(),
            kind,
            generators,
        };
        d.validate()?;
        Ok(d)
    }

    /// Factor with generators named `<prefix>1 .. <prefix>rank`.
    pub fn with_rank(name: &str, kind: FactorKind, rank: usize) -> Result<Self> {
        let gens = (1..=rank).map(|i| format!("{name}{i}")).collect();
        Self::new(name, kind, gens)
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.generators.is_empty() {
            return Err(Error::BadFactor(format!("factor {} has rank 0", self.name)));
        }
        for (i, g) in self.generators.iter().enumerate() {
            if self.generators[..i].contains(g) {
                return Err(Error::BadFactor(format!(
                    "factor {} repeats generator {g}",
                    self.name
                )));
            }
        }
        Ok(())
    }

    pub fn identity(&self) -> FactorElement {
        match self.kind {
            FactorKind::Free => FactorElement::Free(Vec::new()),
            FactorKind::Abelian => FactorElement::Abelian(vec![0; self.rank()]),
        }
    }

    /// The `index`-th generator raised to `exp`.
    pub fn generator_power(&self, index: usize, exp: i64) -> FactorElement {
        match self.kind {
            FactorKind::Free => {
                let l = Letter::new(index, exp < 0);
                FactorElement::Free(vec![l; exp.unsigned_abs() as usize])
            }
            FactorKind::Abelian => {
                let mut v = vec![0; self.rank()];
                v[index] = exp;
                FactorElement::Abelian(v)
            }
        }
    }

    /// Checks that `e` has the shape of an element of this factor.
    pub fn check(&self, e: &FactorElement) -> std::result::Result<(), String> {
        match (self.kind, e) {
            (FactorKind::Free, FactorElement::Free(w)) => {
                if let Some(l) = w.iter().find(|l| l.generator() >= self.rank()) {
                    return Err(format!("generator index {} out of range", l.generator()));
                }
                if w.windows(2).any(|p| p[0] == p[1].inverse()) {
                    return Err("free word is not reduced".into());
                }
                Ok(())
            }
            (FactorKind::Abelian, FactorElement::Abelian(v)) => {
                if v.len() != self.rank() {
                    Err(format!("exponent vector has length {}, rank is {}", v.len(), self.rank()))
                } else {
                    Ok(())
                }
            }
            _ => Err(format!("element kind does not match {} factor", self.kind)),
        }
    }
}

/// A generator or its inverse inside a free factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter(i32);

impl Letter {
    pub fn new(generator: usize, inverted: bool) -> Self {
        let g = generator as i32 + 1;
        Letter(if inverted { -g } else { g })
    }

    pub fn generator(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }
}

/// Canonical form of a factor element: a freely reduced word or an exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FactorElement {
    Free(Vec<Letter>),
    Abelian(Vec<i64>),
}

impl FactorElement {
    pub fn is_identity(&self) -> bool {
        match self {
            FactorElement::Free(w) => w.is_empty(),
            FactorElement::Abelian(v) => v.iter().all(|&x| x == 0),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            FactorElement::Free(w) => FactorElement::Free(w.iter().rev().map(|l| l.inverse()).collect()),
            FactorElement::Abelian(v) => FactorElement::Abelian(v.iter().map(|x| -x).collect()),
        }
    }

    /// Product `self * other`. Both must come from the same factor.
    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (FactorElement::Free(a), FactorElement::Free(b)) => {
                let mut out = a.clone();
                for &l in b {
                    if out.last() == Some(&l.inverse()) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                FactorElement::Free(out)
            }
            (FactorElement::Abelian(a), FactorElement::Abelian(b)) => {
                FactorElement::Abelian(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => panic!("multiplying elements of different factor kinds"),
        }
    }

    pub fn pow(&self, exp: i64) -> Self {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        match &base {
            FactorElement::Abelian(v) => {
                FactorElement::Abelian(v.iter().map(|x| x * exp.abs()).collect())
            }
            FactorElement::Free(_) => {
                let mut acc = FactorElement::Free(Vec::new());
                for _ in 0..exp.unsigned_abs() {
                    acc = acc.mul(&base);
                }
                acc
            }
        }
    }

    /// Word length for free factors, L1 norm for free-abelian factors.
    pub fn letter_length(&self) -> usize {
        match self {
            FactorElement::Free(w) => w.len(),
            FactorElement::Abelian(v) => v.iter().map(|x| x.unsigned_abs() as usize).sum(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Syllable {
    /// Zero-based index into the factor list.
    pub factor: usize,
    pub element: FactorElement,
}

impl Syllable {
    pub fn new(factor: usize, element: FactorElement) -> Self {
        Syllable { factor, element }
    }

    pub fn inverse(&self) -> Self {
        Syllable::new(self.factor, self.element.inverse())
    }
}

/// A word over the free product, kept in normal form.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FPWord {
    syllables: Vec<Syllable>,
}

/// Multiplies out adjacent same-factor syllables and drops identities.
pub fn normalize(raw: &[Syllable], factors: &[FactorDescriptor]) -> Result<FPWord> {
    let mut out: Vec<Syllable> = Vec::with_capacity(raw.len());
    for s in raw {
        let desc = factors.get(s.factor).ok_or(Error::UnknownFactor(s.factor))?;
        desc.check(&s.element).map_err(|reason| Error::BadElement {
            factor: s.factor,
            reason,
        })?;
        match out.last_mut() {
            Some(top) if top.factor == s.factor => {
                top.element = top.element.mul(&s.element);
                if top.element.is_identity() {
                    out.pop();
                }
            }
            _ => {
                if !s.element.is_identity() {
                    out.push(s.clone());
                }
            }
        }
    }
    Ok(FPWord { syllables: out })
}

impl FPWord {
    pub fn empty() -> Self {
        FPWord::default()
    }

    /// Wraps syllables already known to be in normal form.
    pub(crate) fn from_normal(syllables: Vec<Syllable>) -> Self {
        debug_assert!(syllables.windows(2).all(|p| p[0].factor != p[1].factor));
        debug_assert!(syllables.iter().all(|s| !s.element.is_identity()));
        FPWord { syllables }
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// |w|_*, the number of syllables.
    pub fn syllable_length(&self) -> usize {
        self.syllables.len()
    }

    pub fn letter_length(&self) -> usize {
        self.syllables.iter().map(|s| s.element.letter_length()).sum()
    }

    pub fn inverse(&self) -> Self {
        FPWord {
            syllables: self.syllables.iter().rev().map(Syllable::inverse).collect(),
        }
    }

    pub fn concat(&self, other: &FPWord, factors: &[FactorDescriptor]) -> Result<FPWord> {
        let mut raw = self.syllables.clone();
        raw.extend_from_slice(&other.syllables);
        normalize(&raw, factors)
    }

    /// First and last syllables lie in different factors (or at most one syllable).
    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.syllables.first(), self.syllables.last()) {
            (Some(a), Some(b)) if self.syllables.len() > 1 => a.factor != b.factor,
            _ => true,
        }
    }

    /// The last syllable is not the inverse of the first (or at most one syllable).
    pub fn is_weakly_cyclically_reduced(&self) -> bool {
        if self.syllables.len() <= 1 {
            return true;
        }
        let first = &self.syllables[0];
        let last = &self.syllables[self.syllables.len() - 1];
        last.inverse() != *first
    }

    /// A cyclically reduced conjugate of `self`.
    pub fn cyclic_reduce(&self) -> FPWord {
        let mut s = self.syllables.clone();
        while s.len() >= 2 && s[0].factor == s[s.len() - 1].factor {
            let last = s.pop().unwrap();
            let merged = last.element.mul(&s[0].element);
            if merged.is_identity() {
                s.remove(0);
            } else {
                s[0].element = merged;
            }
        }
        FPWord { syllables: s }
    }

    /// Cyclic rotation starting at syllable `offset`.
    pub fn rotate(&self, offset: usize) -> FPWord {
        let n = self.syllables.len();
        if n == 0 {
            return self.clone();
        }
        let mut s = self.syllables.clone();
        s.rotate_left(offset % n);
        FPWord { syllables: s }
    }

    /// Exponent sum of every generator, indexed by global generator column.
    pub fn exponent_sums(&self, factors: &[FactorDescriptor]) -> Vec<i64> {
        let offsets = generator_offsets(factors);
        let mut out = vec![0i64; offsets.last().copied().unwrap_or(0)];
        for s in &self.syllables {
            let base = offsets[s.factor];
            match &s.element {
                FactorElement::Free(w) => {
                    for l in w {
                        out[base + l.generator()] += if l.is_inverse() { -1 } else { 1 };
                    }
                }
                FactorElement::Abelian(v) => {
                    for (i, x) in v.iter().enumerate() {
                        out[base + i] += x;
                    }
                }
            }
        }
        out
    }
}

/// Prefix sums of factor ranks; the last entry is the total rank.
pub fn generator_offsets(factors: &[FactorDescriptor]) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(factors.len() + 1);
    let mut acc = 0;
    offsets.push(0);
    for f in factors {
        acc += f.rank();
        offsets.push(acc);
    }
    offsets
}

/// Whether `y^m` lies in the cyclic subgroup generated by `z`.
///
/// `y` and `z` are syllables; they must come from the same factor.
pub fn factor_cyclic_membership(y: &Syllable, m: i64, z: &Syllable) -> Result<bool> {
    if y.factor != z.factor {
        return Err(Error::MixedFactors(y.factor, z.factor));
    }
    let target = y.element.pow(m);
    match (&target, &z.element) {
        (FactorElement::Abelian(t), FactorElement::Abelian(g)) => {
            if t.len() != g.len() {
                return Err(Error::BadElement {
                    factor: y.factor,
                    reason: "exponent vectors of different length".into(),
                });
            }
            Ok(abelian_multiple(t, g))
        }
        (FactorElement::Free(t), FactorElement::Free(_)) => {
            if t.is_empty() {
                return Ok(true);
            }
            if z.element.is_identity() {
                return Ok(false);
            }
            // |z^j| >= |j| for nontrivial z, so |j| <= |y^m| suffices.
            let bound = t.len() as i64;
            let zinv = z.element.inverse();
            let mut pos = FactorElement::Free(Vec::new());
            let mut neg = FactorElement::Free(Vec::new());
            for _ in 0..bound {
                pos = pos.mul(&z.element);
                neg = neg.mul(&zinv);
                if pos == target || neg == target {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        _ => Err(Error::BadElement {
            factor: y.factor,
            reason: "element kinds differ".into(),
        }),
    }
}

/// Is `t = j * g` for some integer `j`?
fn abelian_multiple(t: &[i64], g: &[i64]) -> bool {
    let Some(pivot) = g.iter().position(|&x| x != 0) else {
        return t.iter().all(|&x| x == 0);
    };
    if t[pivot] % g[pivot] != 0 {
        return false;
    }
    let j = t[pivot] / g[pivot];
    t.iter().zip(g).all(|(a, b)| *a == j * b)
}

impl FPWord {
    /// Renders the word with generator names, e.g. `a^1 c^1 a^2`.
    pub fn display<'a>(&'a self, factors: &'a [FactorDescriptor]) -> WordDisplay<'a> {
        WordDisplay { word: self, factors }
    }
}

pub struct WordDisplay<'a> {
    word: &'a FPWord,
    factors: &'a [FactorDescriptor],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            Ok(())
        };
        for s in self.word.syllables() {
            let names = &self.factors[s.factor].generators;
            match &s.element {
                FactorElement::Free(w) => {
                    // run-length encode letters
                    let mut i = 0;
                    while i < w.len() {
                        let mut j = i;
                        while j < w.len() && w[j] == w[i] {
                            j += 1;
                        }
                        let e = (j - i) as i64 * if w[i].is_inverse() { -1 } else { 1 };
                        sep(f)?;
                        write!(f, "{}^{}", names[w[i].generator()], e)?;
                        i = j;
                    }
                }
                FactorElement::Abelian(v) => {
                    for (g, &e) in v.iter().enumerate() {
                        if e != 0 {
                            sep(f)?;
                            write!(f, "{}^{}", names[g], e)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab_factors() -> Vec<FactorDescriptor> {
        vec![
            FactorDescriptor::new("A", FactorKind::Abelian, vec!["a".into(), "b".into()]).unwrap(),
            FactorDescriptor::new("C", FactorKind::Abelian, vec!["c".into(), "d".into()]).unwrap(),
        ]
    }

    fn free_factor(rank: usize) -> FactorDescriptor {
        FactorDescriptor::with_rank("F", FactorKind::Free, rank).unwrap()
    }

    fn fw(letters: &[(usize, bool)]) -> FactorElement {
        FactorElement::Free(letters.iter().map(|&(g, i)| Letter::new(g, i)).collect())
    }

    #[test]
    fn inverse_pair_cancels() {
        let fs = vec![free_factor(2)];
        let a = fs[0].generator_power(0, 1);
        let w = normalize(&[Syllable::new(0, a.clone()), Syllable::new(0, a.inverse())], &fs).unwrap();
        assert!(w.is_empty());
    }

    #[test]
    fn abelian_syllables_merge() {
        let fs = ab_factors();
        let raw = [
            Syllable::new(0, fs[0].generator_power(0, 1)),
            Syllable::new(1, fs[1].generator_power(0, 1)),
            Syllable::new(1, fs[1].generator_power(0, 1)),
        ];
        let w = normalize(&raw, &fs).unwrap();
        assert_eq!(
            w.syllables(),
            &[
                Syllable::new(0, FactorElement::Abelian(vec![1, 0])),
                Syllable::new(1, FactorElement::Abelian(vec![2, 0])),
            ]
        );
    }

    #[test]
    fn free_syllables_reduce() {
        // (ab)(b^-1 a) = a^2
        let fs = vec![free_factor(2)];
        let ab = fw(&[(0, false), (1, false)]);
        let bia = fw(&[(1, true), (0, false)]);
        let w = normalize(&[Syllable::new(0, ab), Syllable::new(0, bia)], &fs).unwrap();
        assert_eq!(w.syllables(), &[Syllable::new(0, fw(&[(0, false), (0, false)]))]);
    }

    #[test]
    fn unknown_factor_rejected() {
        let fs = vec![free_factor(1)];
        let err = normalize(&[Syllable::new(3, FactorElement::Free(vec![]))], &fs).unwrap_err();
        assert_eq!(err, Error::UnknownFactor(3));
    }

    #[test]
    fn lengths() {
        let fs = vec![
            FactorDescriptor::new("X", FactorKind::Free, vec!["x".into()]).unwrap(),
            FactorDescriptor::new("Y", FactorKind::Free, vec!["y".into()]).unwrap(),
        ];
        let raw: Vec<Syllable> = [(0, 1), (1, 5), (0, 1), (1, 7)]
            .iter()
            .map(|&(f, e)| Syllable::new(f, fs[f].generator_power(0, e)))
            .collect();
        let w = normalize(&raw, &fs).unwrap();
        assert_eq!(w.syllable_length(), 4);
        assert_eq!(w.letter_length(), 14);
        assert_eq!(FPWord::empty().syllable_length(), 0);
        assert_eq!(FPWord::empty().letter_length(), 0);
        assert_eq!(FactorElement::Abelian(vec![3, -2]).letter_length(), 5);
    }

    #[test]
    fn torus_relator_lengths() {
        let fs = ab_factors();
        let mut raw = Vec::new();
        for i in 1..=3 {
            raw.push(Syllable::new(0, fs[0].generator_power(0, i)));
            raw.push(Syllable::new(1, fs[1].generator_power(0, i)));
        }
        let w = normalize(&raw, &fs).unwrap();
        assert_eq!(w.syllable_length(), 6);
        assert!(w.is_cyclically_reduced());
        assert_eq!(w.cyclic_reduce(), w);
    }

    #[test]
    fn conjugate_stripped() {
        let fs = ab_factors();
        let g = Syllable::new(0, FactorElement::Abelian(vec![2, 1]));
        let v = [
            Syllable::new(1, FactorElement::Abelian(vec![1, 0])),
            Syllable::new(0, FactorElement::Abelian(vec![0, 1])),
            Syllable::new(1, FactorElement::Abelian(vec![0, 3])),
        ];
        let mut raw = vec![g.clone()];
        raw.extend_from_slice(&v);
        raw.push(g.inverse());
        let w = normalize(&raw, &fs).unwrap();
        assert!(!w.is_cyclically_reduced());
        assert_eq!(w.cyclic_reduce(), normalize(&v, &fs).unwrap().cyclic_reduce());
        assert_eq!(w.cyclic_reduce().syllables.len(), 2);
    }

    #[test]
    fn weak_cyclic_reduction() {
        let fs = ab_factors();
        let single = normalize(&[Syllable::new(0, FactorElement::Abelian(vec![1, 1]))], &fs).unwrap();
        assert!(single.is_weakly_cyclically_reduced());
        let h = Syllable::new(0, FactorElement::Abelian(vec![1, 0]));
        let c = Syllable::new(1, FactorElement::Abelian(vec![1, 0]));
        let w = FPWord::from_normal(vec![h.clone(), c, h.inverse()]);
        assert!(!w.is_weakly_cyclically_reduced());
    }

    #[test]
    fn cyclic_membership_examples() {
        let ab = Syllable::new(0, FactorElement::Abelian(vec![0, 1]));
        let a = Syllable::new(0, FactorElement::Abelian(vec![1, 0]));
        assert!(!factor_cyclic_membership(&ab, 3, &a).unwrap());
        let a2 = Syllable::new(0, FactorElement::Abelian(vec![2, 0]));
        assert!(factor_cyclic_membership(&a2, 2, &a).unwrap());

        let y = Syllable::new(0, fw(&[(0, false), (1, false)]));
        let z = Syllable::new(0, fw(&[(1, false)]));
        assert!(!factor_cyclic_membership(&y, 2, &z).unwrap());
        let zz = Syllable::new(0, fw(&[(1, false), (1, false)]));
        assert!(factor_cyclic_membership(&z, 4, &zz).unwrap());
        assert!(!factor_cyclic_membership(&z, 3, &zz).unwrap());

        let other = Syllable::new(1, fw(&[(0, false)]));
        assert_eq!(factor_cyclic_membership(&y, 1, &other), Err(Error::MixedFactors(0, 1)));
    }

    #[test]
    fn display_round_trips_names() {
        let fs = ab_factors();
        let w = FPWord::from_normal(vec![
            Syllable::new(0, FactorElement::Abelian(vec![1, -2])),
            Syllable::new(1, FactorElement::Abelian(vec![0, 3])),
        ]);
        assert_eq!(w.display(&fs).to_string(), "a^1 b^-2 d^3");
    }
}
