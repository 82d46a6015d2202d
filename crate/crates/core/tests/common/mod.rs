#![allow(dead_code)]

use fpcube::cube::CubeComplex;
use fpcube::word::{normalize, FPWord, FactorDescriptor, FactorElement, FactorKind, Letter, Syllable};
use rand::rngs::StdRng;
use rand::Rng;

pub fn mixed_factors() -> Vec<FactorDescriptor> {
    vec![
        FactorDescriptor::with_rank("A", FactorKind::Abelian, 2).unwrap(),
        FactorDescriptor::with_rank("B", FactorKind::Abelian, 3).unwrap(),
        FactorDescriptor::with_rank("F", FactorKind::Free, 2).unwrap(),
    ]
}

fn random_element(rng: &mut StdRng, desc: &FactorDescriptor, max_letters: usize) -> FactorElement {
    let len = rng.gen_range(1..=max_letters);
    match desc.kind {
        FactorKind::Abelian => {
            let mut v = vec![0i64; desc.rank()];
            for _ in 0..len {
                v[rng.gen_range(0..desc.rank())] += 1;
            }
            for x in v.iter_mut() {
                if rng.gen_bool(0.5) {
                    *x = -*x;
                }
            }
            FactorElement::Abelian(v)
        }
        FactorKind::Free => {
            let mut w: Vec<Letter> = Vec::new();
            while w.len() < len {
                let l = Letter::new(rng.gen_range(0..desc.rank()), rng.gen_bool(0.5));
                if w.last() != Some(&l.inverse()) {
                    w.push(l);
                }
            }
            FactorElement::Free(w)
        }
    }
}

/// Cyclically reduced word with the given syllable count, each syllable of
/// letter length at most `max_letters`.
pub fn random_relator(rng: &mut StdRng, factors: &[FactorDescriptor], syllables: usize, max_letters: usize) -> FPWord {
    assert!(syllables >= 2 && factors.len() >= 2);
    let mut seq: Vec<usize> = Vec::with_capacity(syllables);
    for i in 0..syllables {
        loop {
            let f = rng.gen_range(0..factors.len());
            let prev_ok = i == 0 || seq[i - 1] != f;
            let wrap_ok = i + 1 < syllables || seq[0] != f;
            if prev_ok && wrap_ok {
                seq.push(f);
                break;
            }
        }
    }
    let raw: Vec<Syllable> =
        seq.iter().map(|&f| Syllable::new(f, random_element(rng, &factors[f], max_letters))).collect();
    let w = normalize(&raw, factors).unwrap();
    assert_eq!(w.syllable_length(), syllables);
    assert!(w.is_cyclically_reduced());
    w
}

/// Shortest simple cycle of nonzero label sum, by depth-first enumeration.
pub fn shortest_essential_cycle(x: &CubeComplex, labels: &[i64]) -> Option<usize> {
    let mut adj = vec![Vec::new(); x.num_vertices()];
    for (e, &[u, v]) in x.edges().iter().enumerate() {
        adj[u as usize].push((v, e as u32, labels[e]));
        adj[v as usize].push((u, e as u32, -labels[e]));
    }
    struct Search<'a> {
        adj: &'a [Vec<(u32, u32, i64)>],
        start: u32,
        on: Vec<bool>,
        best: Option<usize>,
    }
    impl Search<'_> {
        fn go(&mut self, u: u32, len: usize, sum: i64, last: Option<u32>) {
            if self.best.is_some_and(|b| len + 1 >= b) {
                return;
            }
            for &(v, e, l) in &self.adj[u as usize] {
                if Some(e) == last {
                    continue;
                }
                if v == self.start {
                    if sum + l != 0 {
                        self.best = Some(len + 1);
                    }
                    continue;
                }
                // each simple cycle is found from its smallest vertex
                if v < self.start || self.on[v as usize] {
                    continue;
                }
                self.on[v as usize] = true;
                self.go(v, len + 1, sum + l, Some(e));
                self.on[v as usize] = false;
            }
        }
    }
    let mut s = Search { adj: &adj, start: 0, on: vec![false; x.num_vertices()], best: None };
    for v in 0..x.num_vertices() as u32 {
        s.start = v;
        s.on[v as usize] = true;
        s.go(v, 0, 0, None);
        s.on[v as usize] = false;
    }
    s.best
}

fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det(&minor)
        })
        .sum()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Invariant factors from determinantal divisors: `d_k = D_k / D_{k-1}`,
/// `D_k` the gcd of all `k × k` minors.
pub fn snf_oracle(m: &[Vec<i64>]) -> Vec<i128> {
    let (r, c) = (m.len(), m[0].len());
    let mut out = Vec::new();
    let mut prev = 1i128;
    for k in 1..=r.min(c) {
        let mut g = 0i128;
        for rs in subsets(r, k) {
            for cs in subsets(c, k) {
                let sub: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j] as i128).collect()).collect();
                g = gcd(g, det(&sub));
            }
        }
        if g == 0 {
            out.push(0);
            prev = 0;
        } else {
            out.push(g / prev);
            prev = g;
        }
    }
    out
}
