//! Pride's six relator families and deterministic parameter recipes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::word::{factor_cyclic_membership, normalize, FPWord, FactorDescriptor, FactorKind, Syllable};

/// Search cap for exponents in the free-product recipe.
pub const EXPONENT_SEARCH_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrideParams {
    pub k: usize,
    pub alpha: Vec<u64>,
    pub beta: Vec<u64>,
    pub gamma: Vec<u64>,
    pub delta: Vec<u64>,
    pub rho: Vec<u64>,
    pub sigma: Vec<u64>,
    pub tau: Vec<u64>,
    pub theta: Vec<u64>,
}

impl PrideParams {
    fn lists(&self) -> [&Vec<u64>; 8] {
        [&self.alpha, &self.beta, &self.gamma, &self.delta, &self.rho, &self.sigma, &self.tau, &self.theta]
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Input("k must be positive".into()));
        }
        for l in self.lists() {
            if l.len() != self.k {
                return Err(Error::Input(format!("parameter list of length {} for k = {}", l.len(), self.k)));
            }
            if l.contains(&0) {
                return Err(Error::Input("parameters must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn all_values(&self) -> Vec<u64> {
        self.lists().iter().flat_map(|l| l.iter().copied()).collect()
    }
}

/// `R_1 .. R_6` for generators `x`, `y` (each a syllable of its factor).
pub fn gen_pride_relators(
    x: &Syllable,
    y: &Syllable,
    params: &PrideParams,
    factors: &[FactorDescriptor],
) -> Result<Vec<FPWord>> {
    params.validate()?;
    let pw = |s: &Syllable, e: i64| Syllable::new(s.factor, s.element.pow(e));
    let k = params.k;
    let mut raws: [Vec<Syllable>; 6] = Default::default();
    for i in 0..k {
        let (a, b, g, d) = (params.alpha[i] as i64, params.beta[i] as i64, params.gamma[i] as i64, params.delta[i] as i64);
        let (r, s) = (params.rho[i] as i64, params.sigma[i] as i64);
        raws[0].extend([x.clone(), pw(y, a)]);
        raws[1].extend([y.clone(), pw(x, b)]);
        raws[2].extend([pw(x, g), pw(y, -d)]);
        raws[3].extend([x.clone(), pw(y, r), x.clone(), pw(y, -r)]);
        raws[4].extend([y.clone(), pw(x, s), y.clone(), pw(x, -s)]);
        for _ in 0..params.tau[i] {
            raws[5].extend([x.clone(), y.clone()]);
        }
        for _ in 0..params.theta[i] {
            raws[5].extend([pw(x, -1), pw(y, -1)]);
        }
    }
    raws.iter()
        .map(|raw| Ok(normalize(raw, factors)?.cyclic_reduce()))
        .collect()
}

/// k = 3n and the 8k consecutive integers 50n, 50n+1, ... assigned in the
/// order alpha, beta, gamma, delta, rho, sigma, tau, theta.
pub fn gen_remark_params(n: u64) -> Result<PrideParams> {
    if n < 2 {
        return Err(Error::Precondition(format!("n = {n} must be at least 2")));
    }
    let k = 3 * n as usize;
    let mut next = 50 * n;
    let mut take = || {
        let v: Vec<u64> = (next..next + k as u64).collect();
        next += k as u64;
        v
    };
    Ok(PrideParams {
        k,
        alpha: take(),
        beta: take(),
        gamma: take(),
        delta: take(),
        rho: take(),
        sigma: take(),
        tau: take(),
        theta: take(),
    })
}

/// The two-generator free group `<x> * <y>` with the remark parameters.
pub fn remark_presentation(n: u64) -> Result<Presentation> {
    let factors = vec![
        FactorDescriptor::new("X", FactorKind::Free, vec!["x".into()])?,
        FactorDescriptor::new("Y", FactorKind::Free, vec!["y".into()])?,
    ];
    let x = Syllable::new(0, factors[0].generator_power(0, 1));
    let y = Syllable::new(1, factors[1].generator_power(0, 1));
    let rels = gen_pride_relators(&x, &y, &gen_remark_params(n)?, &factors)?;
    Presentation::new(factors, rels)
}

/// Smallest `count` integers `m > 1` with `g^m` outside `<z>` for every other generator `z`.
fn admissible_exponents(g: &Syllable, others: &[Syllable], count: usize) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(count);
    let mut m = 2u64;
    while out.len() < count {
        if m > EXPONENT_SEARCH_CAP {
            let blocker = others
                .iter()
                .find(|z| factor_cyclic_membership(g, m as i64, z).unwrap_or(false))
                .map(|z| format!("{:?}", z.element))
                .unwrap_or_default();
            return Err(Error::Generation(format!(
                "found only {} of {count} exponents m <= {EXPONENT_SEARCH_CAP} with g^m outside <z>; last blocking z = {blocker}",
                out.len()
            )));
        }
        let mut ok = true;
        for z in others {
            if factor_cyclic_membership(g, m as i64, z)? {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(m);
        }
        m += 1;
    }
    Ok(out)
}

/// Pride relators for every pair of generators from distinct factors.
///
/// Each factor's generator list is taken as its generating set; that no
/// proper subset generates is assumed, not checked.
pub fn gen_corollary_presentation(factors: &[FactorDescriptor], n: u64) -> Result<Presentation> {
    if factors.len() < 2 {
        return Err(Error::Precondition("at least two factors are required".into()));
    }
    if n < 1 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let k = 3 * n as usize;
    let gens: Vec<Vec<Syllable>> = factors
        .iter()
        .enumerate()
        .map(|(fi, f)| (0..f.rank()).map(|g| Syllable::new(fi, f.generator_power(g, 1))).collect())
        .collect();
    // tau, theta: the 2k smallest integers strictly between 10n and 20n
    let window: Vec<u64> = (10 * n + 1..20 * n).take(2 * k).collect();
    if window.len() < 2 * k {
        return Err(Error::Generation(format!("fewer than {} integers between {} and {}", 2 * k, 10 * n, 20 * n)));
    }
    let mut relators = Vec::new();
    for p in 0..factors.len() {
        for q in p + 1..factors.len() {
            for (xi, x) in gens[p].iter().enumerate() {
                let x_others: Vec<Syllable> = gens[p].iter().enumerate().filter(|(i, _)| *i != xi).map(|(_, z)| z.clone()).collect();
                let xs = admissible_exponents(x, &x_others, 3 * k)?;
                for (yi, y) in gens[q].iter().enumerate() {
                    let y_others: Vec<Syllable> = gens[q].iter().enumerate().filter(|(i, _)| *i != yi).map(|(_, z)| z.clone()).collect();
                    let ys = admissible_exponents(y, &y_others, 3 * k)?;
                    let params = PrideParams {
                        k,
                        alpha: ys[..k].to_vec(),
                        delta: ys[k..2 * k].to_vec(),
                        rho: ys[2 * k..].to_vec(),
                        beta: xs[..k].to_vec(),
                        gamma: xs[k..2 * k].to_vec(),
                        sigma: xs[2 * k..].to_vec(),
                        tau: window[..k].to_vec(),
                        theta: window[k..].to_vec(),
                    };
                    relators.extend(gen_pride_relators(x, y, &params, factors)?);
                }
            }
        }
    }
    Presentation::new(factors.to_vec(), relators)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> (Vec<FactorDescriptor>, Syllable, Syllable) {
        let fs = vec![
            FactorDescriptor::new("X", FactorKind::Free, vec!["x".into()]).unwrap(),
            FactorDescriptor::new("Y", FactorKind::Free, vec!["y".into()]).unwrap(),
        ];
        let x = Syllable::new(0, fs[0].generator_power(0, 1));
        let y = Syllable::new(1, fs[1].generator_power(0, 1));
        (fs, x, y)
    }

    fn uniform(k: usize, v: &[u64; 8]) -> PrideParams {
        PrideParams {
            k,
            alpha: vec![v[0]; k],
            beta: vec![v[1]; k],
            gamma: vec![v[2]; k],
            delta: vec![v[3]; k],
            rho: vec![v[4]; k],
            sigma: vec![v[5]; k],
            tau: vec![v[6]; k],
            theta: vec![v[7]; k],
        }
    }

    #[test]
    fn k1_first_relator() {
        let (fs, x, y) = xy();
        let r = gen_pride_relators(&x, &y, &uniform(1, &[2, 1, 1, 1, 1, 1, 1, 1]), &fs).unwrap();
        assert_eq!(r[0].display(&fs).to_string(), "x^1 y^2");
    }

    #[test]
    fn sixth_relator_k2() {
        let (fs, x, y) = xy();
        let mut p = uniform(2, &[1; 8]);
        p.tau = vec![2, 3];
        p.theta = vec![4, 5];
        let r = gen_pride_relators(&x, &y, &p, &fs).unwrap();
        let mut expect = String::new();
        for (t, th) in [(2, 4), (3, 5)] {
            for _ in 0..t {
                expect.push_str("x^1 y^1 ");
            }
            for _ in 0..th {
                expect.push_str("x^-1 y^-1 ");
            }
        }
        assert_eq!(r[5].display(&fs).to_string(), expect.trim_end());
    }

    #[test]
    fn fourth_relator_syllables() {
        let (fs, x, y) = xy();
        for k in 1..5 {
            let r = gen_pride_relators(&x, &y, &uniform(k, &[3; 8]), &fs).unwrap();
            assert_eq!(r[3].syllable_length(), 4 * k);
            assert!(r.iter().all(|w| w.is_cyclically_reduced()));
        }
    }

    #[test]
    fn zero_k_rejected() {
        let (fs, x, y) = xy();
        assert!(gen_pride_relators(&x, &y, &uniform(0, &[1; 8]), &fs).is_err());
    }

    #[test]
    fn remark_recipe() {
        let p = gen_remark_params(2).unwrap();
        assert_eq!(p.k, 6);
        assert_eq!(p.all_values(), (100..148).collect::<Vec<_>>());
        for n in 2..30 {
            let p = gen_remark_params(n).unwrap();
            let v = p.all_values();
            assert_eq!(v.len(), 24 * n as usize);
            assert!(v.iter().all(|&x| 50 * n <= x && x <= 75 * n));
            assert_eq!(*v.iter().max().unwrap(), 74 * n - 1);
        }
        assert!(gen_remark_params(1).is_err());
    }
}
