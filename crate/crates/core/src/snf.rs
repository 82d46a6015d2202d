//! Exponent-sum matrices and their Smith normal form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::Presentation;

/// Rows are relators, columns are generators across all factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentMatrix {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<i64>>,
}

pub fn exponent_matrix(p: &Presentation) -> ExponentMatrix {
    let columns = p.factors.iter().flat_map(|f| f.generators.iter().cloned()).collect();
    let rows = p.relators.iter().map(|r| r.exponent_sums(&p.factors)).collect();
    ExponentMatrix { columns, rows }
}

fn overflow() -> Error {
    Error::Resource("integer overflow in Smith normal form".into())
}

/// Diagonal of the Smith normal form, `min(rows, cols)` entries with
/// `d_1 | d_2 | ...` and zeros last.
pub fn smith_normal_form(rows: &[Vec<i64>], ncols: usize) -> Result<Vec<i128>> {
    let nrows = rows.len();
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), ncols, "ragged matrix");
            r.iter().map(|&x| x as i128).collect()
        })
        .collect();
    let dim = nrows.min(ncols);
    for t in 0..dim {
        loop {
            // smallest nonzero entry of the trailing block
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..nrows {
                for j in t..ncols {
                    if a[i][j] != 0 && pivot.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                // trailing block is zero
                let mut diag: Vec<i128> = (0..dim).map(|k| a[k][k].abs()).collect();
                diag[t..].iter_mut().for_each(|d| *d = 0);
                return Ok(diag);
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..nrows {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..ncols {
                        let v = a[t][j].checked_mul(q).ok_or_else(overflow)?;
                        a[i][j] = a[i][j].checked_sub(v).ok_or_else(overflow)?;
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..ncols {
                let q = a[t][j] / p;
                if q != 0 {
                    for i in t..nrows {
                        let v = a[i][t].checked_mul(q).ok_or_else(overflow)?;
                        a[i][j] = a[i][j].checked_sub(v).ok_or_else(overflow)?;
                    }
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // enforce divisibility into the trailing block
            let bad = (t + 1..nrows).find(|&i| (t + 1..ncols).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..ncols {
                        a[t][j] = a[t][j].checked_add(a[i][j]).ok_or_else(overflow)?;
                    }
                }
                None => break,
            }
        }
    }
    Ok((0..dim).map(|k| a[k][k].abs()).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Abelianization {
    /// Nonzero invariant factors greater than one.
    pub torsion: Vec<i128>,
    pub free_rank: usize,
}

pub fn abelianization(p: &Presentation) -> Result<Abelianization> {
    let m = exponent_matrix(p);
    let diag = smith_normal_form(&m.rows, m.columns.len())?;
    let rank = diag.iter().filter(|&&d| d != 0).count();
    Ok(Abelianization {
        torsion: diag.iter().copied().filter(|&d| d > 1).collect(),
        free_rank: m.columns.len() - rank,
    })
}

/// Every generator has finite order in the abelianization.
pub fn abelianization_torsion_check(p: &Presentation) -> Result<bool> {
    Ok(abelianization(p)?.free_rank == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_input() {
        assert_eq!(smith_normal_form(&[vec![12, 0], vec![0, 12]], 2).unwrap(), vec![12, 12]);
    }

    #[test]
    fn divisibility_fixed_up() {
        assert_eq!(smith_normal_form(&[vec![2, 0], vec![0, 3]], 2).unwrap(), vec![1, 6]);
    }

    #[test]
    fn rank_deficient() {
        assert_eq!(smith_normal_form(&[vec![2, 4], vec![1, 2], vec![3, 6]], 2).unwrap(), vec![1, 0]);
        assert_eq!(smith_normal_form(&[], 3).unwrap(), Vec::<i128>::new());
        assert_eq!(smith_normal_form(&[vec![0, 0, 0]], 3).unwrap(), vec![0]);
    }
}
