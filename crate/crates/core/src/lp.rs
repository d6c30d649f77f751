//! Exact simplex over rationals for packing LPs
//! `max cᵀx  s.t.  A x ≤ b,  x ≥ 0` with `b ≥ 0`.

use num::{BigRational, Signed, Zero};

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub value: BigRational,
    pub primal: Vec<BigRational>,
    /// Optimal dual multipliers, one per constraint row.
    pub dual: Vec<BigRational>,
}

/// Solves the LP with Bland's rule, starting from the all-slack basis.
pub fn maximize(c: &[BigRational], a: &[Vec<BigRational>], b: &[BigRational]) -> Result<LpSolution> {
    let n = c.len();
    let m = a.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::Shape("inconsistent LP dimensions".into()));
    }
    if b.iter().any(Signed::is_negative) {
        return Err(Error::Shape("right-hand side must be nonnegative".into()));
    }
    let zero = BigRational::zero();
    let one = BigRational::from_integer(1.into());
    let width = n + m;
    // rows: [A | I | b]
    let mut t: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..m).map(|j| if i == j { one.clone() } else { zero.clone() }));
            r.push(b[i].clone());
            r
        })
        .collect();
    // reduced costs r_j = c_j − c_B B⁻¹ A_j; last entry is −objective
    let mut obj: Vec<BigRational> = c.to_vec();
    obj.extend(std::iter::repeat_n(zero.clone(), m + 1));
    let mut basis: Vec<usize> = (n..n + m).collect();

    while let Some(enter) = (0..width).find(|&j| obj[j].is_positive()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, row) in t.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[width] / &row[enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((pr, _)) = leave else {
            return Err(Error::Unbounded);
        };
        let pivot = t[pr][enter].clone();
        for v in t[pr].iter_mut() {
            *v /= &pivot;
        }
        let prow = t[pr].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == pr || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (v, p) in row.iter_mut().zip(&prow) {
                *v -= &f * p;
            }
        }
        let f = obj[enter].clone();
        for (v, p) in obj.iter_mut().zip(&prow) {
            *v -= &f * p;
        }
        basis[pr] = enter;
    }

    let mut primal = vec![zero.clone(); n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            primal[var] = t[i][width].clone();
        }
    }
    let dual = (0..m).map(|i| -obj[n + i].clone()).collect();
    Ok(LpSolution {
        value: -obj[width].clone(),
        primal,
        dual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| r(x, 1)).collect()
    }

    #[test]
    fn textbook_example() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → 36 at (2, 6)
        let sol = maximize(
            &ints(&[3, 5]),
            &[ints(&[1, 0]), ints(&[0, 2]), ints(&[3, 2])],
            &ints(&[4, 12, 18]),
        )
        .unwrap();
        assert_eq!(sol.value, r(36, 1));
        assert_eq!(sol.primal, ints(&[2, 6]));
        assert_eq!(sol.dual, vec![r(0, 1), r(3, 2), r(1, 1)]);
    }

    #[test]
    fn fractional_optimum() {
        // odd cycle packing: max Σx over edges of a triangle → 3/2
        let sol = maximize(
            &ints(&[1, 1, 1]),
            &[ints(&[1, 1, 0]), ints(&[0, 1, 1]), ints(&[1, 0, 1])],
            &ints(&[1, 1, 1]),
        )
        .unwrap();
        assert_eq!(sol.value, r(3, 2));
        let dual_obj: BigRational = sol.dual.iter().sum();
        assert_eq!(dual_obj, sol.value);
    }

    #[test]
    fn unbounded_detected() {
        let res = maximize(&ints(&[1, 1]), &[ints(&[1, -1])], &ints(&[1]));
        assert!(matches!(res, Err(Error::Unbounded)));
    }

    #[test]
    fn empty_program() {
        let sol = maximize(&[], &[], &[]).unwrap();
        assert_eq!(sol.value, r(0, 1));
    }
}
